// Acceptance gate: one check per shipped guarantee, one [PASS]/[FAIL] line
// each, nonzero exit when anything fails. Run through ctest or directly.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "tflow/benchgen.hpp"
#include "tflow/clustering.hpp"
#include "tflow/detail/rng.hpp"
#include "tflow/error.hpp"
#include "tflow/flow.hpp"
#include "tflow/kernels.hpp"
#include "tflow/mmd.hpp"
#include "tflow/types.hpp"

namespace {

using tflow::FlowReport;
using tflow::GroupPair;
using tflow::Hierarchy;
using tflow::Index;
using tflow::KernelFamily;
using tflow::KernelSpec;
using tflow::LabelVector;
using tflow::Matrix;
using tflow::PseudoLabelVector;
using tflow::SoftTargetMatrix;
using tflow::detail::Rng;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << v;
  return ss.str();
}

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name
            << " — " << detail << "\n";
  std::cout.flush();
  if (!pass) ++g_failures;
}

Matrix normal_matrix(Rng& rng, Index m, Index d, double scale = 1.0) {
  Matrix x(m, d);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < d; ++j) x(i, j) = scale * rng.normal();
  }
  return x;
}

// Running envelope of every per-bandwidth MMD^2 seen in criteria 1 and 3.
struct Envelope {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::int64_t count = 0;
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++count;
  }
};

struct SetEnv {
  explicit SetEnv(const char* name, const char* value) : name_(name) {
    const char* old = std::getenv(name);
    if (old) {
      had_ = true;
      old_ = old;
    }
    ::setenv(name, value, 1);
  }
  ~SetEnv() {
    if (had_) {
      ::setenv(name_, old_.c_str(), 1);
    } else {
      ::unsetenv(name_);
    }
  }
  const char* name_;
  bool had_ = false;
  std::string old_;
};

bool reports_bitwise_equal(const FlowReport& a, const FlowReport& b) {
  if (std::memcmp(&a.total, &b.total, sizeof(double)) != 0) return false;
  if (a.per_bandwidth.size() != b.per_bandwidth.size()) return false;
  for (std::size_t s = 0; s < a.per_bandwidth.size(); ++s) {
    if (std::memcmp(&a.per_bandwidth[s].flow, &b.per_bandwidth[s].flow,
                    sizeof(double)) != 0)
      return false;
  }
  if (a.class_pair_table.size() != b.class_pair_table.size()) return false;
  return std::memcmp(a.class_pair_table.data(), b.class_pair_table.data(),
                     sizeof(double) *
                         static_cast<std::size_t>(a.class_pair_table.size())) == 0;
}

// ---------------------------------------------------------------------------
// 1. The fast MMD^2 path against the literal scalar oracle.
void criterion_1(Envelope& env) {
  const auto start = Clock::now();
  Rng rng(0xACCE01);
  double worst = 0.0;
  double worst_abs = 0.0;
  bool pass = true;
  const int instances = 1000;
  for (int t = 0; t < instances && pass; ++t) {
    const Index na = 2 + static_cast<Index>(rng.below(49));  // 2..50
    const Index nb = 2 + static_cast<Index>(rng.below(49));
    const Index d = 1 + static_cast<Index>(rng.below(16));   // 1..16
    Matrix x = normal_matrix(rng, na + nb, d);
    for (Index i = na; i < na + nb; ++i) x(i, 0) += 1.0;  // keep MMD^2 off zero

    const KernelFamily family =
        t % 2 == 0 ? KernelFamily::Gaussian : KernelFamily::Laplacian;
    const auto [grid, specs] = tflow::make_grid(x, family);

    GroupPair pair;
    pair.source = &x;
    pair.group_a.resize(static_cast<std::size_t>(na));
    pair.group_b.resize(static_cast<std::size_t>(nb));
    std::iota(pair.group_a.begin(), pair.group_a.end(), Index{0});
    std::iota(pair.group_b.begin(), pair.group_b.end(), na);

    for (const KernelSpec& spec : specs) {
      const double fast = tflow::mmd2_unbiased(spec, pair);
      const double oracle = tflow::mmd2_naive_oracle(spec, pair);
      // The estimator crosses zero by design, so relative error is measured
      // against the statistic's intrinsic scale kappa^2 = 1 when |oracle|
      // falls below it (|MMD^2| <= 4 kappa^2 always).
      const double rel =
          std::abs(fast - oracle) / std::max(std::abs(oracle), 1.0);
      worst = std::max(worst, rel);
      worst_abs = std::max(worst_abs, std::abs(fast - oracle));
      env.add(fast);
      if (rel > 1e-12) {
        pass = false;
        break;
      }
    }
  }
  const double elapsed = seconds_since(start);
  pass = pass && elapsed < 30.0;
  report(1, "MMD oracle equivalence",
         pass,
         "worst relative error " + fmt(worst) + " (worst absolute " +
             fmt(worst_abs) + ") over " + std::to_string(instances) +
             " instances x 5 bandwidths in " + fmt(elapsed) +
             " s (budget 30 s)");
}

// ---------------------------------------------------------------------------
// 2. The symbolic two-class hand case.
void criterion_2() {
  Matrix x(4, 1);
  x << 0.0, 0.0, 1.0, 1.0;
  LabelVector labels;
  labels.ids = {0, 0, 1, 1};
  labels.class_count = 2;
  const auto [grid, specs] =
      tflow::grid_from_base(1.0, KernelFamily::Gaussian, {1.0});
  const FlowReport rep = tflow::transfer_flow(x, labels, specs);
  const double want = (2.0 / 3.0) * (2.0 - 2.0 * std::exp(-0.5));
  const double diff = std::abs(rep.total - want);
  report(2, "two-class hand case", diff <= 1e-9,
         "flow " + fmt(rep.total) + " vs closed form " + fmt(want) +
             ", |diff| " + fmt(diff) + " (tolerance 1e-9)");
}

// ---------------------------------------------------------------------------
// 3. Identical class-conditional distributions: flow centered on zero.
void criterion_3(Envelope& env) {
  const int seeds = 50;
  const Index m = 2000;
  const Index d = 8;
  std::vector<std::vector<double>> flows(5);  // per multiplier index
  bool in_envelope = true;

  LabelVector labels;
  labels.class_count = 2;
  labels.ids.resize(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) labels.ids[static_cast<std::size_t>(i)] = i < m / 2 ? 0 : 1;

  for (int s = 0; s < seeds; ++s) {
    Rng rng(tflow::detail::derive_seed(0xACCE03, static_cast<std::uint64_t>(s)));
    const Matrix x = normal_matrix(rng, m, d);
    const auto [grid, specs] = tflow::make_grid(x, KernelFamily::Gaussian);
    const FlowReport rep = tflow::transfer_flow(x, labels, specs);
    for (std::size_t b = 0; b < 5; ++b) {
      flows[b].push_back(rep.per_bandwidth[b].flow);
      env.add(rep.per_bandwidth[b].min_pair_mmd2);
      env.add(rep.per_bandwidth[b].max_pair_mmd2);
      if (rep.per_bandwidth[b].min_pair_mmd2 < -2.0 ||
          rep.per_bandwidth[b].max_pair_mmd2 > 4.0) {
        in_envelope = false;
      }
    }
  }

  double worst_z = 0.0;
  for (const auto& series : flows) {
    double mean = 0.0;
    for (const double v : series) mean += v;
    mean /= seeds;
    double var = 0.0;
    for (const double v : series) var += (v - mean) * (v - mean);
    var /= (seeds - 1);
    const double se = std::sqrt(var / seeds);
    worst_z = std::max(worst_z, std::abs(mean) / se);
  }
  report(3, "zero flow under identical distributions",
         worst_z <= 3.0 && in_envelope,
         "worst |mean|/SE " + fmt(worst_z) + " across 5 bandwidths x " +
             std::to_string(seeds) + " seeds (limit 3); envelope " +
             (in_envelope ? "clean" : "violated"));
}

// ---------------------------------------------------------------------------
// 4. Deterministic envelope over everything collected above.
void criterion_4(const Envelope& env) {
  const bool pass = env.lo >= -2.0 && env.hi <= 4.0 && env.count > 0;
  report(4, "MMD^2 envelope [-2, 4]", pass,
         "observed range [" + fmt(env.lo) + ", " + fmt(env.hi) + "] over " +
             std::to_string(env.count) + " estimates; zero violations allowed");
}

// ---------------------------------------------------------------------------
// 5. Total flow strictly increases with class separation.
void criterion_5() {
  const auto start = Clock::now();
  const double deltas[4] = {0.5, 1.0, 2.0, 4.0};
  int monotone = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    double prev = -std::numeric_limits<double>::infinity();
    bool increasing = true;
    for (int di = 0; di < 4; ++di) {
      tflow::SynthSpec spec;
      spec.classes = 2;
      spec.dim = 8;
      spec.per_class = 500;
      spec.separation = deltas[di];
      spec.variance = 1.0;
      spec.seed = tflow::detail::derive_seed(
          0xACCE05, static_cast<std::uint64_t>(s * 4 + di));
      const tflow::LabeledDataset data = tflow::generate_synthetic(spec);
      const auto [grid, specs] =
          tflow::make_grid(data.embeddings, KernelFamily::Gaussian);
      const FlowReport rep = tflow::transfer_flow(data.embeddings, data.labels, specs);
      if (!(rep.total > prev)) increasing = false;
      prev = rep.total;
    }
    if (increasing) ++monotone;
  }
  const double elapsed = seconds_since(start);
  const bool pass = monotone >= 19 && elapsed < 120.0;
  report(5, "separation monotonicity", pass,
         std::to_string(monotone) + "/" + std::to_string(seeds) +
             " seeds strictly increasing over delta {0.5,1,2,4} (need 19) in " +
             fmt(elapsed) + " s (budget 120 s)");
}

// ---------------------------------------------------------------------------
// 6. Pseudo flow with true ids reproduces the true flow bit for bit.
void criterion_6() {
  Rng rng(0xACCE06);
  int identical = 0;
  const int instances = 100;
  for (int t = 0; t < instances; ++t) {
    const int k = 2 + static_cast<int>(rng.below(5));  // 2..6
    const Index m = 2 * k + 10 + static_cast<Index>(rng.below(40));
    const Index d = 1 + static_cast<Index>(rng.below(8));
    const Matrix x = normal_matrix(rng, m, d, 1.5);
    LabelVector labels;
    labels.class_count = k;
    labels.ids.resize(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) {
      labels.ids[static_cast<std::size_t>(i)] =
          i < 2 * k ? static_cast<int>(i) / 2
                    : static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    }
    rng.shuffle(labels.ids);
    const KernelFamily family =
        t % 2 == 0 ? KernelFamily::Gaussian : KernelFamily::Laplacian;
    const auto [grid, specs] = tflow::make_grid(x, family);
    const FlowReport truth = tflow::transfer_flow(x, labels, specs);
    PseudoLabelVector pseudo;
    pseudo.ids = labels.ids;
    pseudo.cluster_count = k;
    const FlowReport guessed = tflow::pseudo_transfer_flow(x, pseudo, specs);
    if (reports_bitwise_equal(truth, guessed)) ++identical;
  }
  report(6, "pseudo flow coincides with true flow", identical == instances,
         std::to_string(identical) + "/" + std::to_string(instances) +
             " instances bit-identical (total, per-bandwidth, pair table)");
}

// ---------------------------------------------------------------------------
// 7. Trivial two-blob recovery by all three clusterers.
void criterion_7() {
  const Index per_class = 200;
  Rng rng(0xACCE07);
  Matrix x(2 * per_class, 2);
  LabelVector truth;
  truth.class_count = 2;
  for (Index i = 0; i < 2 * per_class; ++i) {
    const double cx = i < per_class ? 0.0 : 10.0;
    x(i, 0) = cx + rng.normal();
    x(i, 1) = cx + rng.normal();
    truth.ids.push_back(i < per_class ? 0 : 1);
  }

  bool all_perfect = true;
  std::string accuracies;
  PseudoLabelVector kmeans_labels;
  for (const tflow::ClusterMethod method :
       {tflow::ClusterMethod::KMeans, tflow::ClusterMethod::GMM,
        tflow::ClusterMethod::Agglomerative}) {
    tflow::ClusteringConfig cfg;
    cfg.method = method;
    cfg.k = 2;
    cfg.seed = 3;
    const PseudoLabelVector pred = tflow::cluster(x, cfg);
    const double acc = tflow::hungarian_accuracy(pred, truth);
    accuracies += (accuracies.empty() ? "" : "/") + fmt(acc);
    if (acc != 1.0) all_perfect = false;
    if (method == tflow::ClusterMethod::KMeans) kmeans_labels = pred;
  }

  const auto [grid, specs] = tflow::make_grid(x, KernelFamily::Gaussian);
  const FlowReport true_flow = tflow::transfer_flow(x, truth, specs);
  const FlowReport pseudo_flow = tflow::pseudo_transfer_flow(x, kmeans_labels, specs);
  const double rel =
      std::abs(pseudo_flow.total - true_flow.total) / std::abs(true_flow.total);

  tflow::ClusteringConfig agg;
  agg.method = tflow::ClusterMethod::Agglomerative;
  agg.k = 2;
  const PseudoLabelVector first = tflow::agglomerative(x, agg);
  bool deterministic = true;
  for (int run = 1; run < 10; ++run) {
    if (tflow::agglomerative(x, agg).ids != first.ids) deterministic = false;
  }

  report(7, "two-blob clustering recovery",
         all_perfect && rel <= 0.01 && deterministic,
         "accuracies " + accuracies + "; pseudo-vs-true flow gap " + fmt(rel) +
             " (limit 0.01); agglomerative identical across 10 runs: " +
             (deterministic ? "yes" : "no"));
}

// ---------------------------------------------------------------------------
// 8. Benchmark split counting on both reference hierarchy shapes.
void criterion_8() {
  const auto build = [](int supers, int subs) {
    Hierarchy h;
    for (int s = 0; s < supers; ++s) {
      std::string super = "super" + std::to_string(s);
      for (int c = 0; c < subs; ++c) {
        h.children[super].push_back(super + "_sub" + std::to_string(c));
      }
      h.superclasses.push_back(std::move(super));
    }
    return h;
  };
  const auto overlap = [](const std::vector<std::string>& a,
                          const std::vector<std::string>& b) {
    int n = 0;
    for (const auto& name : a) {
      n += std::count(b.begin(), b.end(), name) > 0 ? 1 : 0;
    }
    return n;
  };

  const tflow::SplitPlan entity =
      tflow::generate_split(build(30, 8), 6, 2, 1);
  const bool entity_ok = entity.l1.size() == 90 && entity.l2.size() == 90 &&
                         entity.u1.size() == 30 && entity.u2.size() == 30 &&
                         entity.l15.size() == 90 &&
                         overlap(entity.l15, entity.l1) == 45 &&
                         overlap(entity.l15, entity.l2) == 45;

  const tflow::SplitPlan cifar = tflow::generate_split(build(20, 5), 4, 1, 1);
  const bool cifar_ok = cifar.l1.size() == 40 && cifar.l2.size() == 40 &&
                        cifar.u1.size() == 10 && cifar.u2.size() == 10;

  const auto pairs = tflow::pairings(entity);
  const bool pairs_ok =
      pairs.size() == 6 &&
      pairs[0].unlabeled == "u1" && pairs[0].labeled == "l1" &&
      pairs[0].tag == tflow::SimilarityTag::High &&
      pairs[1].unlabeled == "u2" && pairs[1].labeled == "l2" &&
      pairs[1].tag == tflow::SimilarityTag::High &&
      pairs[2].unlabeled == "u1" && pairs[2].labeled == "l15" &&
      pairs[2].tag == tflow::SimilarityTag::Medium &&
      pairs[3].unlabeled == "u2" && pairs[3].labeled == "l15" &&
      pairs[3].tag == tflow::SimilarityTag::Medium &&
      pairs[4].unlabeled == "u1" && pairs[4].labeled == "l2" &&
      pairs[4].tag == tflow::SimilarityTag::Low &&
      pairs[5].unlabeled == "u2" && pairs[5].labeled == "l1" &&
      pairs[5].tag == tflow::SimilarityTag::Low;

  report(8, "benchmark split counting", entity_ok && cifar_ok && pairs_ok,
         "30x8 plan 90/90/30/30 with 45+45 mixed: " +
             std::string(entity_ok ? "yes" : "no") +
             "; 20x5 plan 40/10 per side: " + (cifar_ok ? "yes" : "no") +
             "; six tagged pairings: " + (pairs_ok ? "yes" : "no"));
}

// ---------------------------------------------------------------------------
// 9. Bootstrap protocol: reproducibility and exact-zero spread.
void criterion_9() {
  Rng rng(0xACCE09);
  const Matrix x = normal_matrix(rng, 80, 4);
  LabelVector labels;
  labels.class_count = 2;
  for (Index i = 0; i < 80; ++i) labels.ids.push_back(i < 40 ? 0 : 1);
  const auto [grid, specs] = tflow::make_grid(x, KernelFamily::Gaussian);

  const auto a = tflow::bootstrap_flow(x, labels, specs, 10, 4242);
  const auto b = tflow::bootstrap_flow(x, labels, specs, 10, 4242);
  const bool identical =
      a.samples.size() == 10 && b.samples.size() == 10 &&
      std::memcmp(a.samples.data(), b.samples.data(), sizeof(double) * 10) == 0 &&
      std::memcmp(&a.mean, &b.mean, sizeof(double)) == 0 &&
      std::memcmp(&a.std, &b.std, sizeof(double)) == 0;

  // point-mass classes: the statistic cannot move under resampling
  Matrix constant(8, 2);
  constant << 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
              4.0, 1.0, 4.0, 1.0, 4.0, 1.0, 4.0, 1.0;
  LabelVector clabels;
  clabels.class_count = 2;
  clabels.ids = {0, 0, 0, 0, 1, 1, 1, 1};
  const auto [cgrid, cspecs] =
      tflow::grid_from_base(1.0, KernelFamily::Gaussian, {0.5, 1.0, 2.0});
  const auto cboot = tflow::bootstrap_flow(constant, clabels, cspecs, 10, 7);
  const bool zero_std = cboot.std == 0.0;

  report(9, "bootstrap protocol", identical && zero_std,
         "10 replicates byte-identical across same-seed runs: " +
             std::string(identical ? "yes" : "no") +
             "; constant statistic std " + fmt(cboot.std) + " (must be exactly 0)");
}

// ---------------------------------------------------------------------------
// 10. Sinkhorn column balance and target-mixing boundary behavior.
void criterion_10() {
  Rng rng(0xACCE10);
  const Index m = 60;
  double worst_out = 0.0;
  double weakest_in = std::numeric_limits<double>::infinity();
  bool pass = true;
  const int instances = 100;
  for (int t = 0; t < instances; ++t) {
    const Index k = 3 + static_cast<Index>(rng.below(4));  // 3..6
    std::vector<double> row_shift(static_cast<std::size_t>(m));
    std::vector<double> col_shift(static_cast<std::size_t>(k));
    for (auto& v : row_shift) v = rng.normal();
    for (auto& v : col_shift) v = rng.normal();
    Matrix logits(m, k);
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < k; ++j) {
        logits(i, j) = row_shift[static_cast<std::size_t>(i)] +
                       col_shift[static_cast<std::size_t>(j)] +
                       0.005 * rng.normal();
      }
    }

    // the instance must be unbalanced to begin with, or it proves nothing:
    // per-row softmax column masses must deviate >= 10% from uniform
    Matrix soft(m, k);
    for (Index i = 0; i < m; ++i) {
      const double mx = logits.row(i).maxCoeff();
      const Eigen::ArrayXd e = (logits.row(i).transpose().array() - mx).exp();
      soft.row(i) = (e / e.sum()).transpose();
    }
    const double target = static_cast<double>(m) / static_cast<double>(k);
    double input_dev = 0.0;
    for (Index j = 0; j < k; ++j) {
      input_dev = std::max(input_dev,
                           std::abs(soft.col(j).sum() - target) / target);
    }
    weakest_in = std::min(weakest_in, input_dev);
    if (input_dev < 0.10) pass = false;

    const SoftTargetMatrix q = tflow::sinkhorn_pseudo_labels(logits, 0.05, 3);
    for (Index j = 0; j < k; ++j) {
      const double dev = std::abs(q.data.col(j).sum() - target) / target;
      worst_out = std::max(worst_out, dev);
      if (dev > 1e-3) pass = false;
    }
  }

  // mixing boundaries are exact and interior mixes stay on the simplex
  Rng mix_rng(0xACCE11);
  Matrix gt = Matrix::Zero(m, 4);
  for (Index i = 0; i < m; ++i) gt(i, static_cast<Index>(mix_rng.below(4))) = 1.0;
  Matrix plogits = normal_matrix(mix_rng, m, 4, 1.0);
  const SoftTargetMatrix pl = tflow::sinkhorn_pseudo_labels(plogits, 0.5, 3);

  const SoftTargetMatrix at_one = tflow::mix_targets({gt}, pl, 1.0);
  const SoftTargetMatrix at_zero = tflow::mix_targets({gt}, pl, 0.0);
  const bool boundaries_exact =
      std::memcmp(at_one.data.data(), gt.data(),
                  sizeof(double) * static_cast<std::size_t>(gt.size())) == 0 &&
      std::memcmp(at_zero.data.data(), pl.data.data(),
                  sizeof(double) * static_cast<std::size_t>(pl.data.size())) == 0;

  const SoftTargetMatrix interior = tflow::mix_targets({gt}, pl, 0.37);
  double worst_row = 0.0;
  for (Index i = 0; i < m; ++i) {
    worst_row = std::max(worst_row, std::abs(interior.data.row(i).sum() - 1.0));
  }

  pass = pass && boundaries_exact && worst_row <= 1e-12;
  report(10, "sinkhorn balance and target mixing", pass,
         "worst output column deviation " + fmt(worst_out) +
             " (limit 1e-3) over " + std::to_string(instances) +
             " instances (weakest input deviation " + fmt(weakest_in) +
             ", floor 0.10); boundary mixes exact: " +
             (boundaries_exact ? "yes" : "no") + "; worst row-sum drift " +
             fmt(worst_row) + " (limit 1e-12)");
}

// ---------------------------------------------------------------------------
// 11. Throughput contract and quadratic scaling on 4 workers.
void criterion_11() {
  const SetEnv cap("TFLOW_THREADS", "4");

  const auto dataset = [](int per_class) {
    tflow::SynthSpec spec;
    spec.classes = 10;
    spec.dim = 64;
    spec.per_class = per_class;
    spec.separation = 2.0;
    spec.variance = 1.0;
    spec.seed = 0xACCE12;
    return tflow::generate_synthetic(spec);
  };
  const auto time_flow = [](const tflow::LabeledDataset& data) {
    const auto start = Clock::now();
    const auto [grid, specs] =
        tflow::make_grid(data.embeddings, KernelFamily::Gaussian);
    const FlowReport rep = tflow::transfer_flow(data.embeddings, data.labels, specs);
    const double elapsed = seconds_since(start);
    if (!(rep.total > 0.0)) std::abort();  // sanity: the work cannot be elided
    return elapsed;
  };
  const auto median3 = [&](const tflow::LabeledDataset& data) {
    double t[3];
    for (double& v : t) v = time_flow(data);
    std::sort(t, t + 3);
    return t[1];
  };

  const tflow::LabeledDataset big = dataset(1000);   // m = 10,000
  const tflow::LabeledDataset half = dataset(500);   // m = 5,000
  const double t_big = median3(big);
  const double t_half = median3(half);
  const double ratio = t_big / t_half;

  const bool pass = t_big < 60.0 && ratio >= 3.5 && ratio <= 4.5;
  report(11, "performance contract", pass,
         "m=10,000 d=64 k=10 five-bandwidth flow in " + fmt(t_big) +
             " s (budget 60 s); t(10k)/t(5k) = " + fmt(ratio) +
             " (expected 3.5-4.5 for quadratic scaling)");
}

}  // namespace

int main() {
  std::cout << "transfer-flow acceptance checks\n";
  Envelope env;
  criterion_1(env);
  criterion_2();
  criterion_3(env);
  criterion_4(env);
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  std::cout << (g_failures == 0 ? "all criteria passed"
                                : std::to_string(g_failures) + " criteria failed")
            << "\n";
  return g_failures == 0 ? 0 : 1;
}
