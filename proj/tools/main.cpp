// tflow: command-line front end for the transfer-flow library.
//
// Subcommands: flow, pseudo-flow, cluster, split, synth, compare, mix,
// plot-data. Every run writes a JSON report carrying the fully-resolved
// configuration; timestamps live in a separate `meta` object so reports are
// byte-comparable after dropping that one key.

#include <charconv>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tflow/benchgen.hpp"
#include "tflow/clustering.hpp"
#include "tflow/dataio.hpp"
#include "tflow/detail/format.hpp"
#include "tflow/error.hpp"
#include "tflow/flow.hpp"
#include "tflow/kernels.hpp"
#include "tflow/types.hpp"

namespace {

using nlohmann::json;

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };
LogLevel g_log_level = LogLevel::Info;

void log_info(const std::string& msg) {
  if (g_log_level >= LogLevel::Info) std::cerr << "tflow: " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (g_log_level >= LogLevel::Debug) std::cerr << "tflow[debug]: " << msg << "\n";
}

std::string now_utc() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json meta_json() {
  return json{{"created_utc", now_utc()},
              {"tool", "tflow"},
              {"version", "1.0.0"}};
}

void write_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    tflow::fail(tflow::ErrorCode::IoFailure,
                "cannot open '" + out_path + "' for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    tflow::fail(tflow::ErrorCode::IoFailure, "write to '" + out_path + "' failed");
  }
}

void write_json(const json& j, const std::string& out_path) {
  write_text(j.dump(2) + "\n", out_path);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    tflow::fail(tflow::ErrorCode::IoFailure, "cannot open '" + path + "'");
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    tflow::fail(tflow::ErrorCode::InvalidArgument,
                "'" + path + "' is not valid JSON: " + e.what());
  }
}

bool is_tfmx(const std::string& path) {
  return std::filesystem::path(path).extension() == ".tfmx";
}

bool csv_has_label_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) return false;  // let the real loader report the I/O failure
  std::string header;
  if (!std::getline(in, header)) return false;
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const auto comma = header.find(',');
  return (comma == std::string::npos ? header : header.substr(0, comma)) ==
         "label";
}

// Representations plus, when the CSV carried one, its label column.
struct RepsFile {
  tflow::Matrix reps;
  std::optional<tflow::LabelVector> embedded;
};

RepsFile load_reps_any(const std::string& path) {
  if (is_tfmx(path)) return {tflow::load_binary(path), std::nullopt};
  if (csv_has_label_column(path)) {
    tflow::LabeledDataset ds = tflow::load_csv_dataset(path);
    return {std::move(ds.embeddings), std::move(ds.labels)};
  }
  return {tflow::load_csv_matrix(path), std::nullopt};
}

tflow::Matrix load_matrix_any(const std::string& path) {
  if (is_tfmx(path)) return tflow::load_binary(path);
  return tflow::load_csv_matrix(path);
}

void save_matrix_any(const tflow::Matrix& m, const std::string& path) {
  if (is_tfmx(path)) {
    tflow::save_binary(m, path);
  } else {
    tflow::save_csv(m, path);
  }
}

double parse_double(const std::string& s, const char* what) {
  double v{};
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || p != end) {
    tflow::fail(tflow::ErrorCode::InvalidArgument,
                std::string(what) + ": '" + s + "' is not a number");
  }
  return v;
}

std::vector<double> parse_multipliers(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t");
    const auto last = cell.find_last_not_of(" \t");
    if (first == std::string::npos) {
      tflow::fail(tflow::ErrorCode::InvalidArgument,
                  "--bandwidths: empty entry in '" + csv + "'");
    }
    out.push_back(parse_double(cell.substr(first, last - first + 1), "--bandwidths"));
  }
  if (out.empty()) {
    tflow::fail(tflow::ErrorCode::InvalidArgument, "--bandwidths: no multipliers given");
  }
  return out;
}

// Flags shared by `flow` and `pseudo-flow`.
struct KernelOpts {
  std::string family = "gaussian";
  std::string base = "auto";
  std::string multipliers = "0.25,0.5,1,2,4";
};

void add_kernel_opts(CLI::App* cmd, KernelOpts& o) {
  cmd->add_option("--kernel", o.family, "Kernel family")
      ->check(CLI::IsMember({"gaussian", "laplacian"}))
      ->capture_default_str();
  cmd->add_option("--bandwidth-base", o.base,
                  "Base bandwidth h: 'auto' (mean pairwise distance) or a number")
      ->capture_default_str();
  cmd->add_option("--bandwidths", o.multipliers,
                  "Comma-separated bandwidth multipliers applied to the base")
      ->capture_default_str();
}

struct ResolvedGrid {
  tflow::KernelFamily family = tflow::KernelFamily::Gaussian;
  tflow::BandwidthGrid grid;
  std::vector<tflow::KernelSpec> specs;
};

ResolvedGrid resolve_grid(const tflow::Matrix& reps, const KernelOpts& o) {
  ResolvedGrid r;
  r.family = o.family == "laplacian" ? tflow::KernelFamily::Laplacian
                                     : tflow::KernelFamily::Gaussian;
  const std::vector<double> mults = parse_multipliers(o.multipliers);
  if (o.base == "auto") {
    std::tie(r.grid, r.specs) = tflow::make_grid(reps, r.family, mults);
  } else {
    std::tie(r.grid, r.specs) =
        tflow::grid_from_base(parse_double(o.base, "--bandwidth-base"), r.family, mults);
  }
  log_debug("kernel grid: base " + tflow::detail::format_double(r.grid.base) + ", " +
            std::to_string(r.specs.size()) + " bandwidths");
  return r;
}

json kernel_json(const ResolvedGrid& g) {
  return json{{"family", tflow::kernel_family_name(g.family)},
              {"base_h", g.grid.base},
              {"multipliers", g.grid.multipliers}};
}

json report_json(const tflow::FlowReport& rep, const ResolvedGrid& g) {
  json j;
  j["total"] = rep.total;
  json pb = json::object();
  for (const tflow::BandwidthFlow& bf : rep.per_bandwidth) {
    pb[tflow::detail::format_double(bf.spec.bandwidth)] = bf.flow;
  }
  j["per_bandwidth"] = pb;
  if (rep.bootstrap.has_value()) {
    j["bootstrap"] = json{{"mean", rep.bootstrap->mean},
                          {"std", rep.bootstrap->std},
                          {"replicates", rep.bootstrap->samples.size()},
                          {"samples", rep.bootstrap->samples}};
  } else {
    j["bootstrap"] = nullptr;
  }
  j["m"] = rep.m;
  j["classes"] = rep.class_count;
  j["kernel"] = kernel_json(g);
  j["warnings"] = rep.warnings;
  return j;
}

bool is_label_keyword(const std::string& s) {
  return s == "label" || s == "labels" || s == "column";
}

// ---------------------------------------------------------------- flow ----

struct FlowOpts {
  std::string reps;
  std::string labels;
  bool probabilities = false;
  bool l2_normalize = false;
  KernelOpts kernel;
  int replicates = 10;
  std::uint64_t seed = 0;
  std::string out;
};

int run_flow(const FlowOpts& o) {
  RepsFile file = load_reps_any(o.reps);
  tflow::Matrix reps = std::move(file.reps);
  tflow::LabelVector labels;
  if (is_label_keyword(o.labels)) {
    if (is_tfmx(o.reps)) {
      tflow::fail(tflow::ErrorCode::InvalidArgument,
                  "TFMX files carry no label column; pass --labels <file>");
    }
    if (!file.embedded) {
      tflow::fail(tflow::ErrorCode::InvalidArgument,
                  "'" + o.reps + "' has no label column; pass --labels <file>");
    }
    labels = std::move(*file.embedded);
  } else {
    labels = tflow::load_labels_csv(o.labels, reps.rows());
  }
  if (o.l2_normalize) reps = tflow::l2_normalize_rows(reps);

  const ResolvedGrid g = resolve_grid(reps, o.kernel);
  tflow::FlowReport rep;
  if (o.probabilities) {
    const tflow::ProbabilityMatrix pm = tflow::validate_probability_matrix(reps);
    rep = tflow::transfer_flow(pm, labels, g.specs);
  } else {
    rep = tflow::transfer_flow(reps, labels, g.specs);
  }
  if (o.replicates > 0) {
    rep.bootstrap = tflow::bootstrap_flow(reps, labels, g.specs, o.replicates, o.seed);
  }

  json j = report_json(rep, g);
  j["config"] = json{{"command", "flow"},
                     {"reps", o.reps},
                     {"labels", o.labels},
                     {"probabilities", o.probabilities},
                     {"l2_normalize", o.l2_normalize},
                     {"kernel", o.kernel.family},
                     {"bandwidth_base", g.grid.base},
                     {"multipliers", g.grid.multipliers},
                     {"replicates", o.replicates},
                     {"seed", o.seed},
                     {"out", o.out}};
  j["meta"] = meta_json();
  write_json(j, o.out);
  if (!o.out.empty()) {
    log_info("total flow " + tflow::detail::format_double(rep.total) +
             " over " + std::to_string(rep.per_bandwidth.size()) +
             " bandwidths; report written to " + o.out);
  }
  return 0;
}

// --------------------------------------------------------- pseudo-flow ----

struct PseudoFlowOpts {
  std::string reps;
  std::string pseudo_from;
  std::string pseudo_labels;
  std::string truth;
  int k = 0;
  int max_iter = 100;
  double tol = 1e-6;
  double gmm_reg = 1e-6;
  bool l2_normalize = false;
  KernelOpts kernel;
  int replicates = 10;
  std::uint64_t seed = 0;
  std::string out;
};

tflow::ClusterMethod method_from_string(const std::string& s) {
  if (s == "kmeans") return tflow::ClusterMethod::KMeans;
  if (s == "gmm") return tflow::ClusterMethod::GMM;
  if (s == "agglo") return tflow::ClusterMethod::Agglomerative;
  tflow::fail(tflow::ErrorCode::InvalidArgument, "unknown clustering method '" + s + "'");
}

int run_pseudo_flow(const PseudoFlowOpts& o) {
  RepsFile file = load_reps_any(o.reps);
  tflow::Matrix reps = std::move(file.reps);
  if (o.l2_normalize) reps = tflow::l2_normalize_rows(reps);

  tflow::PseudoLabelVector pseudo;
  if (!o.pseudo_labels.empty()) {
    tflow::LabelVector lv = tflow::load_labels_csv(o.pseudo_labels, reps.rows());
    pseudo.ids = std::move(lv.ids);
    pseudo.cluster_count = lv.class_count;
    pseudo.provenance = tflow::Provenance::External;
  } else {
    tflow::ClusteringConfig cfg;
    cfg.method = method_from_string(o.pseudo_from);
    cfg.k = o.k;
    cfg.max_iter = o.max_iter;
    cfg.tol = o.tol;
    cfg.seed = o.seed;
    cfg.gmm_reg = o.gmm_reg;
    pseudo = tflow::cluster(reps, cfg);
  }

  const ResolvedGrid g = resolve_grid(reps, o.kernel);
  tflow::FlowReport rep = tflow::pseudo_transfer_flow(reps, pseudo, g.specs);
  if (o.replicates > 0) {
    rep.bootstrap = tflow::bootstrap_flow(reps, pseudo, g.specs, o.replicates, o.seed);
  }

  json j = report_json(rep, g);
  j["pseudo"] = json{{"provenance", tflow::provenance_name(pseudo.provenance)},
                     {"clusters", pseudo.cluster_count}};
  if (!o.truth.empty()) {
    tflow::LabelVector truth;
    if (is_label_keyword(o.truth)) {
      if (!file.embedded) {
        tflow::fail(tflow::ErrorCode::InvalidArgument,
                    "'" + o.reps + "' has no label column; pass --truth <file>");
      }
      truth = *file.embedded;
    } else {
      truth = tflow::load_labels_csv(o.truth, reps.rows());
    }
    j["accuracy"] = tflow::hungarian_accuracy(pseudo, truth);
  }
  j["config"] = json{{"command", "pseudo-flow"},
                     {"reps", o.reps},
                     {"pseudo_from", o.pseudo_from},
                     {"pseudo_labels", o.pseudo_labels},
                     {"truth", o.truth},
                     {"k", o.k},
                     {"max_iter", o.max_iter},
                     {"tol", o.tol},
                     {"gmm_reg", o.gmm_reg},
                     {"l2_normalize", o.l2_normalize},
                     {"kernel", o.kernel.family},
                     {"bandwidth_base", g.grid.base},
                     {"multipliers", g.grid.multipliers},
                     {"replicates", o.replicates},
                     {"seed", o.seed},
                     {"out", o.out}};
  j["meta"] = meta_json();
  write_json(j, o.out);
  return 0;
}

// ------------------------------------------------------------- cluster ----

struct ClusterOpts {
  std::string reps;
  std::string method = "kmeans";
  int k = 1;
  int max_iter = 100;
  double tol = 1e-6;
  double gmm_reg = 1e-6;
  std::uint64_t seed = 0;
  bool l2_normalize = false;
  std::string out;
};

int run_cluster(const ClusterOpts& o) {
  RepsFile file = load_reps_any(o.reps);
  tflow::Matrix reps = std::move(file.reps);
  if (file.embedded) {
    log_info("ignoring the label column in " + o.reps);
  }
  if (o.l2_normalize) reps = tflow::l2_normalize_rows(reps);
  tflow::ClusteringConfig cfg;
  cfg.method = method_from_string(o.method);
  cfg.k = o.k;
  cfg.max_iter = o.max_iter;
  cfg.tol = o.tol;
  cfg.seed = o.seed;
  cfg.gmm_reg = o.gmm_reg;
  const tflow::PseudoLabelVector labels = tflow::cluster(reps, cfg);
  tflow::save_labels_csv(labels.ids, o.out);
  log_info(std::to_string(labels.cluster_count) + " clusters over " +
           std::to_string(labels.ids.size()) + " rows written to " + o.out);
  return 0;
}

// --------------------------------------------------------------- split ----

struct SplitOpts {
  std::string hierarchy;
  int labeled_per_super = 0;
  int unlabeled_per_super = 0;
  std::uint64_t seed = 0;
  bool canonical = false;
  std::string out;
};

int run_split(const SplitOpts& o) {
  const tflow::Hierarchy h = tflow::load_hierarchy(o.hierarchy);
  const tflow::SplitPlan plan = tflow::generate_split(
      h, o.labeled_per_super, o.unlabeled_per_super, o.seed, o.canonical);
  json j;
  j["l1"] = plan.l1;
  j["l2"] = plan.l2;
  j["l15"] = plan.l15;
  j["u1"] = plan.u1;
  j["u2"] = plan.u2;
  json pairs = json::array();
  for (const tflow::Pairing& p : tflow::pairings(plan)) {
    pairs.push_back(json{{"unlabeled", p.unlabeled},
                         {"labeled", p.labeled},
                         {"similarity", tflow::similarity_tag_name(p.tag)}});
  }
  j["pairings"] = pairs;
  j["config"] = json{{"command", "split"},
                     {"hierarchy", o.hierarchy},
                     {"labeled_per_super", o.labeled_per_super},
                     {"unlabeled_per_super", o.unlabeled_per_super},
                     {"seed", o.seed},
                     {"canonical", o.canonical},
                     {"out", o.out}};
  j["meta"] = meta_json();
  write_json(j, o.out);
  return 0;
}

// --------------------------------------------------------------- synth ----

struct SynthOpts {
  int classes = 2;
  int dim = 2;
  int per_class = 100;
  double sep = 1.0;
  double variance = 1.0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_synth(const SynthOpts& o) {
  if (is_tfmx(o.out)) {
    tflow::fail(tflow::ErrorCode::InvalidArgument,
                "synthetic datasets are written as CSV with a label column; "
                "use a .csv output path");
  }
  tflow::SynthSpec spec;
  spec.classes = o.classes;
  spec.dim = o.dim;
  spec.per_class = o.per_class;
  spec.separation = o.sep;
  spec.variance = o.variance;
  spec.seed = o.seed;
  const tflow::LabeledDataset ds = tflow::generate_synthetic(spec);
  std::vector<std::string> tokens;
  tokens.reserve(ds.labels.ids.size());
  for (const int id : ds.labels.ids) {
    tokens.push_back(ds.labels.names[static_cast<std::size_t>(id)]);
  }
  tflow::save_csv(ds.embeddings, o.out, &tokens);
  log_info(std::to_string(ds.embeddings.rows()) + " rows (" +
           std::to_string(o.classes) + " classes) written to " + o.out);
  return 0;
}

// ------------------------------------------------------------- compare ----

struct CompareOpts {
  std::string a;
  std::string b;
  std::string out;
};

tflow::FlowReport report_from_json(const json& j, const std::string& path) {
  tflow::FlowReport rep;
  try {
    rep.total = j.at("total").get<double>();
    rep.m = j.at("m").get<tflow::Index>();
    if (j.contains("classes")) rep.class_count = j["classes"].get<int>();
    if (j.contains("bootstrap") && !j["bootstrap"].is_null()) {
      tflow::BootstrapResult bs;
      bs.mean = j["bootstrap"].value("mean", 0.0);
      bs.std = j["bootstrap"].at("std").get<double>();
      rep.bootstrap = std::move(bs);
    }
  } catch (const json::exception& e) {
    tflow::fail(tflow::ErrorCode::InvalidArgument,
                "'" + path + "' is missing report fields: " + e.what());
  }
  return rep;
}

int run_compare(const CompareOpts& o) {
  const tflow::FlowReport ra = report_from_json(read_json_file(o.a), o.a);
  const tflow::FlowReport rb = report_from_json(read_json_file(o.b), o.b);
  const tflow::CompareResult r = tflow::flow_compare(ra, rb);
  const char* larger = r.larger == tflow::FlowSource::A   ? "a"
                       : r.larger == tflow::FlowSource::B ? "b"
                                                          : "tie";
  json j{{"a", o.a},
         {"b", o.b},
         {"total_a", ra.total},
         {"total_b", rb.total},
         {"larger", larger},
         {"gap", r.gap},
         {"combined_std", r.combined_std},
         {"inconclusive", r.inconclusive}};
  const std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!o.out.empty()) write_text(text, o.out);
  return 0;
}

// ----------------------------------------------------------------- mix ----

struct MixOpts {
  std::string gt;
  std::string pl;
  double alpha = 1.0;
  std::string out;
};

int run_mix(const MixOpts& o) {
  tflow::ProbabilityMatrix gt = tflow::validate_probability_matrix(load_matrix_any(o.gt));
  tflow::ProbabilityMatrix pl = tflow::validate_probability_matrix(load_matrix_any(o.pl));
  const tflow::SoftTargetMatrix mixed = tflow::mix_targets(
      {std::move(gt.data)}, {std::move(pl.data)}, o.alpha);
  save_matrix_any(mixed.data, o.out);
  log_info("mixed targets (alpha " + tflow::detail::format_double(o.alpha) +
           ") written to " + o.out);
  return 0;
}

// ----------------------------------------------------------- plot-data ----

struct PlotDataOpts {
  std::vector<std::string> reports;
  std::vector<std::string> tags;
  std::string out;
};

int run_plot_data(const PlotDataOpts& o) {
  if (!o.tags.empty() && o.tags.size() != o.reports.size()) {
    tflow::fail(tflow::ErrorCode::LengthMismatch,
                "--tag count (" + std::to_string(o.tags.size()) +
                    ") must match --report count (" +
                    std::to_string(o.reports.size()) + ")");
  }
  std::string csv = "tag,flow,flow_std,accuracy\n";
  for (std::size_t i = 0; i < o.reports.size(); ++i) {
    const json j = read_json_file(o.reports[i]);
    const std::string tag =
        o.tags.empty() ? std::filesystem::path(o.reports[i]).stem().string()
                       : o.tags[i];
    std::string flow_str;
    std::string std_str;
    std::string acc_str;
    try {
      flow_str = tflow::detail::format_double(j.at("total").get<double>());
      if (j.contains("bootstrap") && !j["bootstrap"].is_null()) {
        std_str = tflow::detail::format_double(j["bootstrap"].at("std").get<double>());
      }
      if (j.contains("accuracy")) {
        acc_str = tflow::detail::format_double(j["accuracy"].get<double>());
      }
    } catch (const json::exception& e) {
      tflow::fail(tflow::ErrorCode::InvalidArgument,
                  "'" + o.reports[i] + "' is missing report fields: " + e.what());
    }
    csv += tag + "," + flow_str + "," + std_str + "," + acc_str + "\n";
  }
  write_text(csv, o.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer-flow toolkit: semantic similarity between labeled "
               "and unlabeled datasets via kernel mean discrepancies"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("tflow 1.0.0"));
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "Logging verbosity on stderr")
      ->check(CLI::IsMember({"quiet", "info", "debug"}))
      ->capture_default_str();

  FlowOpts flow_opts;
  CLI::App* flow_cmd = app.add_subcommand(
      "flow", "Transfer flow of labeled representations");
  flow_cmd->add_option("--reps", flow_opts.reps,
                       "Representations: CSV (optionally with a label column) or TFMX")
      ->required();
  flow_cmd->add_option("--labels", flow_opts.labels,
                       "Label file, or 'label'/'labels'/'column' for the CSV's own label column")
      ->required();
  flow_cmd->add_flag("--probabilities", flow_opts.probabilities,
                     "Validate rows as probability vectors before the flow");
  CLI::Option* flow_l2 = flow_cmd->add_flag("--l2-normalize", flow_opts.l2_normalize,
                                            "Scale each row to unit L2 norm first");
  flow_l2->excludes(flow_cmd->get_option("--probabilities"));
  add_kernel_opts(flow_cmd, flow_opts.kernel);
  flow_cmd->add_option("--replicates", flow_opts.replicates,
                       "Bootstrap replicates (0 disables the bootstrap)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  flow_cmd->add_option("--seed", flow_opts.seed, "Bootstrap seed")->capture_default_str();
  flow_cmd->add_option("--out", flow_opts.out, "Report path (default: stdout)");

  PseudoFlowOpts pseudo_opts;
  CLI::App* pseudo_cmd = app.add_subcommand(
      "pseudo-flow", "Pseudo transfer flow from cluster-derived labels");
  pseudo_cmd->add_option("--reps", pseudo_opts.reps, "Representations: CSV or TFMX")
      ->required();
  CLI::App* source = pseudo_cmd->add_option_group(
      "pseudo source", "Where the pseudo labels come from");
  CLI::Option* from_opt =
      source->add_option("--pseudo-from", pseudo_opts.pseudo_from,
                         "Cluster the representations with this method")
          ->check(CLI::IsMember({"kmeans", "gmm", "agglo"}));
  source->add_option("--pseudo-labels", pseudo_opts.pseudo_labels,
                     "Load pseudo labels from a CSV file");
  source->require_option(1);
  CLI::Option* k_opt =
      pseudo_cmd->add_option("--k", pseudo_opts.k, "Cluster count for --pseudo-from");
  from_opt->needs(k_opt);
  pseudo_cmd->add_option("--max-iter", pseudo_opts.max_iter, "Clustering iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  pseudo_cmd->add_option("--tol", pseudo_opts.tol, "Clustering convergence tolerance")
      ->capture_default_str();
  pseudo_cmd->add_option("--gmm-reg", pseudo_opts.gmm_reg, "GMM covariance ridge")
      ->capture_default_str();
  pseudo_cmd->add_option(
      "--truth", pseudo_opts.truth,
      "Ground-truth labels (file, or 'label'/'labels'/'column' for the reps "
      "CSV's own label column); adds Hungarian accuracy to the report");
  pseudo_cmd->add_flag("--l2-normalize", pseudo_opts.l2_normalize,
                       "Scale each row to unit L2 norm first");
  add_kernel_opts(pseudo_cmd, pseudo_opts.kernel);
  pseudo_cmd->add_option("--replicates", pseudo_opts.replicates,
                         "Bootstrap replicates (0 disables the bootstrap)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  pseudo_cmd->add_option("--seed", pseudo_opts.seed, "Clustering and bootstrap seed")
      ->capture_default_str();
  pseudo_cmd->add_option("--out", pseudo_opts.out, "Report path (default: stdout)");

  ClusterOpts cluster_opts;
  CLI::App* cluster_cmd = app.add_subcommand("cluster", "Cluster representations");
  cluster_cmd->add_option("--reps", cluster_opts.reps, "Representations: CSV or TFMX")
      ->required();
  cluster_cmd->add_option("--method", cluster_opts.method, "Clustering method")
      ->check(CLI::IsMember({"kmeans", "gmm", "agglo"}))
      ->capture_default_str();
  cluster_cmd->add_option("--k", cluster_opts.k, "Cluster count")->required();
  cluster_cmd->add_option("--max-iter", cluster_opts.max_iter, "Iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cluster_cmd->add_option("--tol", cluster_opts.tol, "Convergence tolerance")
      ->capture_default_str();
  cluster_cmd->add_option("--gmm-reg", cluster_opts.gmm_reg, "GMM covariance ridge")
      ->capture_default_str();
  cluster_cmd->add_option("--seed", cluster_opts.seed, "Initialization seed")
      ->capture_default_str();
  cluster_cmd->add_flag("--l2-normalize", cluster_opts.l2_normalize,
                        "Scale each row to unit L2 norm first");
  cluster_cmd->add_option("--out", cluster_opts.out, "Labels CSV (header index,cluster)")
      ->required();

  SplitOpts split_opts;
  CLI::App* split_cmd = app.add_subcommand(
      "split", "Similarity-controlled benchmark split from a class hierarchy");
  split_cmd->add_option("--hierarchy", split_opts.hierarchy,
                        "TSV file: superclass<TAB>subclass per line")
      ->required();
  split_cmd->add_option("--labeled-per-super", split_opts.labeled_per_super,
                        "Labeled subclasses per superclass")
      ->required()
      ->check(CLI::PositiveNumber);
  split_cmd->add_option("--unlabeled-per-super", split_opts.unlabeled_per_super,
                        "Unlabeled subclasses per superclass")
      ->required()
      ->check(CLI::PositiveNumber);
  split_cmd->add_option("--seed", split_opts.seed, "Role-assignment seed")
      ->capture_default_str();
  split_cmd->add_flag("--canonical", split_opts.canonical,
                      "Assign roles in hierarchy-file order instead of shuffling");
  split_cmd->add_option("--out", split_opts.out, "Plan path (default: stdout)");

  SynthOpts synth_opts;
  CLI::App* synth_cmd = app.add_subcommand(
      "synth", "Synthetic Gaussian-mixture dataset with controlled separation");
  synth_cmd->add_option("--classes", synth_opts.classes, "Class count")
      ->required()
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--dim", synth_opts.dim, "Representation dimension")
      ->required()
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--per-class", synth_opts.per_class, "Samples per class")
      ->required();
  synth_cmd->add_option("--sep", synth_opts.sep, "Distance between class centers")
      ->capture_default_str();
  synth_cmd->add_option("--variance", synth_opts.variance, "Isotropic class variance")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth_opts.seed, "Generator seed")->capture_default_str();
  synth_cmd->add_option("--out", synth_opts.out, "Output CSV (label column included)")
      ->required();

  CompareOpts compare_opts;
  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "Compare two flow reports over the same unlabeled set");
  compare_cmd->add_option("--a", compare_opts.a, "First report JSON")->required();
  compare_cmd->add_option("--b", compare_opts.b, "Second report JSON")->required();
  compare_cmd->add_option("--out", compare_opts.out, "Also write the record here");

  MixOpts mix_opts;
  CLI::App* mix_cmd = app.add_subcommand(
      "mix", "Convex mix of ground-truth and pseudo-label targets");
  mix_cmd->add_option("--gt", mix_opts.gt, "Ground-truth targets (CSV or TFMX)")
      ->required();
  mix_cmd->add_option("--pl", mix_opts.pl, "Pseudo-label targets (CSV or TFMX)")
      ->required();
  mix_cmd->add_option("--alpha", mix_opts.alpha,
                      "Weight of the supervised component, in [0, 1]")
      ->required();
  mix_cmd->add_option("--out", mix_opts.out, "Output matrix (CSV or TFMX)")->required();

  PlotDataOpts plot_opts;
  CLI::App* plot_cmd = app.add_subcommand(
      "plot-data", "Flatten flow reports into a tag,flow,flow_std,accuracy CSV");
  plot_cmd->add_option("--report", plot_opts.reports, "Report JSON (repeatable)")
      ->required();
  plot_cmd->add_option("--tag", plot_opts.tags,
                       "Row tag per report (default: file stem)");
  plot_cmd->add_option("--out", plot_opts.out, "Output CSV (default: stdout)");

  // Let global options (e.g. --log-level) appear after the subcommand name.
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  g_log_level = log_level == "quiet"   ? LogLevel::Quiet
                : log_level == "debug" ? LogLevel::Debug
                                       : LogLevel::Info;

  try {
    if (*flow_cmd) return run_flow(flow_opts);
    if (*pseudo_cmd) return run_pseudo_flow(pseudo_opts);
    if (*cluster_cmd) return run_cluster(cluster_opts);
    if (*split_cmd) return run_split(split_opts);
    if (*synth_cmd) return run_synth(synth_opts);
    if (*compare_cmd) return run_compare(compare_opts);
    if (*mix_cmd) return run_mix(mix_opts);
    if (*plot_cmd) return run_plot_data(plot_opts);
  } catch (const tflow::Error& e) {
    const json err{{"error", {{"code", tflow::error_code_name(e.code())},
                              {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    const json err{{"error", {{"code", "Internal"}, {"message", e.what()}}}};
    std::cerr << err.dump(2) << "\n";
    return 1;
  }
  return 2;
}
