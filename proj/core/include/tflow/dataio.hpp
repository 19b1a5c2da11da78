#pragma once

#include <filesystem>
#include <optional>

#include "tflow/types.hpp"

namespace tflow {

// CSV with a leading `label` column: header `label,f0,...,f{d-1}`.
// Labels are re-indexed to contiguous 0-based ids in first-occurrence order;
// the original tokens are kept in labels.names.
LabeledDataset load_csv_dataset(const std::filesystem::path& path);

// CSV without labels: header `f0,...,f{d-1}`.
Matrix load_csv_matrix(const std::filesystem::path& path);

// Writes CSV; emits the `label` column when row_labels is provided
// (row_labels[i] is the token for row i). Values are shortest-round-trip
// formatted, so a reload reproduces the matrix bit-exactly.
void save_csv(const Matrix& m, const std::filesystem::path& path,
              const std::vector<std::string>* row_labels = nullptr);

// TFMX binary matrices, little-endian:
//   magic "TFMX" (4 bytes), version u32 = 1, rows u64, cols u64,
//   then rows*cols f64, row-major. Bit-exact round trip.
Matrix load_binary(const std::filesystem::path& path);
void save_binary(const Matrix& m, const std::filesystem::path& path);

// Tags a matrix as row-stochastic: entries in [0,1] and row sums within
// 1e-6 of 1. Throws NotASimplexRow naming the first offending row.
ProbabilityMatrix validate_probability_matrix(const Matrix& m);

// Hierarchy file: one `superclass<TAB>subclass` line per subclass.
// Superclass order = first occurrence; subclass order = file order.
Hierarchy load_hierarchy(const std::filesystem::path& path);

// Label files accepted by the CLI: either a single `label` column, or the
// `index,cluster` CSV written by `tflow cluster` (indices must cover
// 0..rows-1). expected_rows is validated when >= 0.
LabelVector load_labels_csv(const std::filesystem::path& path,
                            Index expected_rows = -1);

void save_labels_csv(const std::vector<int>& ids,
                     const std::filesystem::path& path);

// Re-index arbitrary label tokens to contiguous ids (first-occurrence
// order). Shared by the CSV loaders and the synthetic generator.
LabelVector reindex_labels(const std::vector<std::string>& tokens);

}  // namespace tflow
