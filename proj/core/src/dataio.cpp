#include "tflow/dataio.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "tflow/detail/format.hpp"
#include "tflow/error.hpp"

namespace tflow {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::VersionUnsupported: return "VersionUnsupported";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::NotASimplexRow: return "NotASimplexRow";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::GroupTooSmall: return "GroupTooSmall";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::ClusterTooSmall: return "ClusterTooSmall";
    case ErrorCode::MismatchedSampleCount: return "MismatchedSampleCount";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::CovarianceSingular: return "CovarianceSingular";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::NumericalUnderflow: return "NumericalUnderflow";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::TooFewSubclasses: return "TooFewSubclasses";
    case ErrorCode::OddSuperclassCount: return "OddSuperclassCount";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::KMeans: return "kmeans";
    case Provenance::GMM: return "gmm";
    case Provenance::Agglomerative: return "agglomerative";
    case Provenance::External: return "external";
  }
  return "external";
}

namespace {

using detail::format_double;

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

double parse_value(const std::string& cell, std::size_t line_number) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end || cell.empty()) {
    fail(ErrorCode::MalformedRow,
         "line " + std::to_string(line_number) + ": cannot parse numeric value '" +
             cell + "'");
  }
  if (!std::isfinite(value)) {
    fail(ErrorCode::NonFiniteValue,
         "line " + std::to_string(line_number) + ": non-finite value '" + cell +
             "'");
  }
  return value;
}

struct CsvContent {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvContent read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for reading");
  }
  CsvContent content;
  std::string line;
  std::size_t line_number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (!have_header) {
      content.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != content.header.size()) {
      fail(ErrorCode::MalformedRow,
           "line " + std::to_string(line_number) + ": expected " +
               std::to_string(content.header.size()) + " columns, found " +
               std::to_string(cells.size()));
    }
    content.rows.push_back(std::move(cells));
  }
  if (!have_header || content.rows.empty()) {
    fail(ErrorCode::EmptyFile, "'" + path.string() + "' contains no data rows");
  }
  return content;
}

}  // namespace

LabelVector reindex_labels(const std::vector<std::string>& tokens) {
  if (tokens.empty()) {
    fail(ErrorCode::InvalidArgument, "label list is empty");
  }
  LabelVector labels;
  labels.ids.reserve(tokens.size());
  std::unordered_map<std::string, int> seen;
  for (const auto& token : tokens) {
    auto [it, inserted] = seen.emplace(token, labels.class_count);
    if (inserted) {
      labels.names.push_back(token);
      ++labels.class_count;
    }
    labels.ids.push_back(it->second);
  }
  return labels;
}

LabeledDataset load_csv_dataset(const std::filesystem::path& path) {
  const CsvContent content = read_csv(path);
  if (content.header.size() < 2) {
    fail(ErrorCode::MalformedRow,
         "'" + path.string() + "' has no feature columns after the label column");
  }
  const auto m = static_cast<Index>(content.rows.size());
  const auto d = static_cast<Index>(content.header.size() - 1);
  LabeledDataset dataset;
  dataset.embeddings.resize(m, d);
  std::vector<std::string> tokens;
  tokens.reserve(content.rows.size());
  for (Index i = 0; i < m; ++i) {
    const auto& row = content.rows[static_cast<std::size_t>(i)];
    tokens.push_back(row[0]);
    for (Index j = 0; j < d; ++j) {
      dataset.embeddings(i, j) = parse_value(
          row[static_cast<std::size_t>(j + 1)], static_cast<std::size_t>(i) + 2);
    }
  }
  dataset.labels = reindex_labels(tokens);
  return dataset;
}

Matrix load_csv_matrix(const std::filesystem::path& path) {
  const CsvContent content = read_csv(path);
  const auto m = static_cast<Index>(content.rows.size());
  const auto d = static_cast<Index>(content.header.size());
  Matrix matrix(m, d);
  for (Index i = 0; i < m; ++i) {
    const auto& row = content.rows[static_cast<std::size_t>(i)];
    for (Index j = 0; j < d; ++j) {
      matrix(i, j) = parse_value(row[static_cast<std::size_t>(j)],
                                 static_cast<std::size_t>(i) + 2);
    }
  }
  return matrix;
}

void save_csv(const Matrix& m, const std::filesystem::path& path,
              const std::vector<std::string>* row_labels) {
  if (row_labels && static_cast<Index>(row_labels->size()) != m.rows()) {
    fail(ErrorCode::LengthMismatch,
         "label count " + std::to_string(row_labels->size()) +
             " does not match row count " + std::to_string(m.rows()));
  }
  std::ofstream out(path);
  if (!out) {
    fail(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for writing");
  }
  if (row_labels) out << "label";
  for (Index j = 0; j < m.cols(); ++j) {
    if (j > 0 || row_labels) out << ',';
    out << 'f' << j;
  }
  out << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    if (row_labels) out << (*row_labels)[static_cast<std::size_t>(i)];
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0 || row_labels) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  out.flush();
  if (!out) {
    fail(ErrorCode::IoFailure, "write to '" + path.string() + "' failed");
  }
}

namespace {

constexpr char kMagic[4] = {'T', 'F', 'M', 'X'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

void save_binary(const Matrix& m, const std::filesystem::path& path) {
  if (m.rows() < 1 || m.cols() < 1) {
    fail(ErrorCode::InvalidArgument, "matrix must have at least one row and column");
  }
  if (!m.allFinite()) {
    fail(ErrorCode::NonFiniteValue, "matrix contains NaN or Inf entries");
  }
  std::string header;
  header.append(kMagic, 4);
  put_u32(header, kVersion);
  put_u64(header, static_cast<std::uint64_t>(m.rows()));
  put_u64(header, static_cast<std::uint64_t>(m.cols()));

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    fail(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for writing");
  }
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  std::string payload;
  payload.reserve(static_cast<std::size_t>(m.rows()) *
                  static_cast<std::size_t>(m.cols()) * 8);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      std::uint64_t bits = 0;
      const double v = m(i, j);
      std::memcpy(&bits, &v, 8);
      put_u64(payload, bits);
    }
  }
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  out.flush();
  if (!out) {
    fail(ErrorCode::IoFailure, "write to '" + path.string() + "' failed");
  }
}

Matrix load_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for reading");
  }
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (bytes.empty()) {
    fail(ErrorCode::EmptyFile, "'" + path.string() + "' is empty");
  }
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    fail(ErrorCode::BadMagic, "'" + path.string() + "' does not start with TFMX");
  }
  if (bytes.size() < 24) {
    fail(ErrorCode::TruncatedPayload,
         "'" + path.string() + "' is too short for a TFMX header");
  }
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint32_t version = get_u32(data + 4);
  if (version != kVersion) {
    fail(ErrorCode::VersionUnsupported,
         "TFMX version " + std::to_string(version) + " is not supported");
  }
  const std::uint64_t rows = get_u64(data + 8);
  const std::uint64_t cols = get_u64(data + 16);
  if (rows == 0 || cols == 0) {
    fail(ErrorCode::EmptyFile, "TFMX declares an empty matrix");
  }
  const std::uint64_t available = (bytes.size() - 24) / 8;
  if (cols != 0 && rows > available / cols) {
    fail(ErrorCode::TruncatedPayload,
         "TFMX declares " + std::to_string(rows) + "x" + std::to_string(cols) +
             " values but only " + std::to_string(available) + " are stored");
  }
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  const unsigned char* p = data + 24;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      const std::uint64_t bits = get_u64(p);
      p += 8;
      double v = 0.0;
      std::memcpy(&v, &bits, 8);
      m(i, j) = v;
    }
  }
  if (!m.allFinite()) {
    fail(ErrorCode::NonFiniteValue,
         "'" + path.string() + "' contains NaN or Inf entries");
  }
  return m;
}

ProbabilityMatrix validate_probability_matrix(const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    bool in_range = true;
    for (Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (!(v >= 0.0 && v <= 1.0)) in_range = false;
      sum += v;
    }
    if (!in_range || std::abs(sum - 1.0) > 1e-6) {
      fail(ErrorCode::NotASimplexRow,
           "row " + std::to_string(i) + " is not on the simplex (sum " +
               format_double(sum) + ")");
    }
  }
  return ProbabilityMatrix{m};
}

Hierarchy load_hierarchy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for reading");
  }
  Hierarchy h;
  std::set<std::string> seen_subclasses;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      fail(ErrorCode::MalformedRow,
           "line " + std::to_string(line_number) +
               ": expected 'superclass<TAB>subclass'");
    }
    std::string super = line.substr(0, tab);
    std::string sub = line.substr(tab + 1);
    if (!seen_subclasses.insert(sub).second) {
      fail(ErrorCode::MalformedRow,
           "line " + std::to_string(line_number) + ": duplicate subclass '" +
               sub + "'");
    }
    auto [it, inserted] = h.children.try_emplace(super);
    if (inserted) h.superclasses.push_back(super);
    it->second.push_back(std::move(sub));
  }
  if (h.superclasses.empty()) {
    fail(ErrorCode::EmptyFile, "'" + path.string() + "' contains no entries");
  }
  for (const auto& super : h.superclasses) {
    const auto& kids = h.children.at(super);
    if (kids.size() < 3) {
      fail(ErrorCode::TooFewSubclasses,
           "superclass '" + super + "' has " + std::to_string(kids.size()) +
               " subclasses; at least 3 are required");
    }
  }
  return h;
}

LabelVector load_labels_csv(const std::filesystem::path& path,
                            Index expected_rows) {
  const CsvContent content = read_csv(path);
  std::vector<std::string> tokens;

  if (content.header.size() == 1 && content.header[0] == "label") {
    tokens.reserve(content.rows.size());
    for (const auto& row : content.rows) tokens.push_back(row[0]);
  } else if (content.header.size() == 2 && content.header[0] == "index" &&
             content.header[1] == "cluster") {
    const std::size_t n = content.rows.size();
    std::vector<std::string> by_index(n);
    std::vector<bool> filled(n, false);
    for (std::size_t r = 0; r < n; ++r) {
      const auto& row = content.rows[r];
      std::int64_t idx = 0;
      const auto result =
          std::from_chars(row[0].data(), row[0].data() + row[0].size(), idx);
      if (result.ec != std::errc() || result.ptr != row[0].data() + row[0].size() ||
          idx < 0 || idx >= static_cast<std::int64_t>(n) ||
          filled[static_cast<std::size_t>(idx)]) {
        fail(ErrorCode::MalformedRow,
             "line " + std::to_string(r + 2) +
                 ": index column must cover 0..m-1 exactly once");
      }
      filled[static_cast<std::size_t>(idx)] = true;
      by_index[static_cast<std::size_t>(idx)] = row[1];
    }
    tokens = std::move(by_index);
  } else {
    fail(ErrorCode::MalformedRow,
         "'" + path.string() +
             "' must have header 'label' or 'index,cluster'");
  }

  if (expected_rows >= 0 && static_cast<Index>(tokens.size()) != expected_rows) {
    fail(ErrorCode::LengthMismatch,
         "'" + path.string() + "' has " + std::to_string(tokens.size()) +
             " labels but the matrix has " + std::to_string(expected_rows) +
             " rows");
  }
  return reindex_labels(tokens);
}

void save_labels_csv(const std::vector<int>& ids,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    fail(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for writing");
  }
  out << "index,cluster\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << i << ',' << ids[i] << '\n';
  }
  out.flush();
  if (!out) {
    fail(ErrorCode::IoFailure, "write to '" + path.string() + "' failed");
  }
}

}  // namespace tflow
