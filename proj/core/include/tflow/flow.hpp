#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tflow/kernels.hpp"
#include "tflow/types.hpp"

namespace tflow {

// One grid entry of the flow decomposition. min/max_pair_mmd2 are the
// extremes of the unbiased MMD^2 over class pairs at this bandwidth (0 when
// there are no pairs); handy for checking the [-2k^2, 4k^2] envelope.
struct BandwidthFlow {
  KernelSpec spec;
  double flow = 0.0;
  double min_pair_mmd2 = 0.0;
  double max_pair_mmd2 = 0.0;
};

struct BootstrapResult {
  double mean = 0.0;
  double std = 0.0;
  std::vector<double> samples;  // total flow per replicate, replicate order
};

struct FlowReport {
  std::vector<BandwidthFlow> per_bandwidth;  // grid order
  double total = 0.0;                        // sum across the grid
  // class_pair_table(c, c') = weight * MMD^2 summed over the grid for the
  // ordered pair (c, c'); entries over all ordered pairs sum to total.
  Matrix class_pair_table;
  Index m = 0;
  int class_count = 0;
  std::optional<BootstrapResult> bootstrap;
  std::vector<std::string> warnings;
};

// Transfer flow: sum over ordered class pairs c != c' of
// |I_c||I_c'| / (m(m-1)) * MMD^2(c, c'), per bandwidth; total sums the grid.
// Bit-exact under row permutations and class-id permutations.
FlowReport transfer_flow(const Matrix& reps, const LabelVector& labels,
                         const std::vector<KernelSpec>& grid);
FlowReport transfer_flow(const ProbabilityMatrix& reps,
                         const LabelVector& labels,
                         const std::vector<KernelSpec>& grid);

// Identical arithmetic with cluster-derived index sets. When pseudo ids
// equal true ids the result is bit-identical to transfer_flow.
FlowReport pseudo_transfer_flow(const Matrix& reps,
                                const PseudoLabelVector& pseudo,
                                const std::vector<KernelSpec>& grid);

// Stratified bootstrap of the total flow: per replicate, each class is
// resampled with replacement to its original size (so every class keeps its
// >= 2 members), the total is recomputed on the *fixed* grid. Replicate r
// is seeded from (seed, r), so scheduling cannot change results.
BootstrapResult bootstrap_flow(const Matrix& reps, const LabelVector& labels,
                               const std::vector<KernelSpec>& grid,
                               int replicates, std::uint64_t seed);
BootstrapResult bootstrap_flow(const Matrix& reps,
                               const PseudoLabelVector& pseudo,
                               const std::vector<KernelSpec>& grid,
                               int replicates, std::uint64_t seed);

enum class FlowSource { A, B, Tie };

struct CompareResult {
  FlowSource larger = FlowSource::Tie;
  double gap = 0.0;           // a.total - b.total
  double combined_std = 0.0;  // sum of available bootstrap stds
  bool inconclusive = true;   // |gap| < combined_std, or an exact tie
};

// Both reports must describe the same unlabeled sample count.
CompareResult flow_compare(const FlowReport& a, const FlowReport& b);

}  // namespace tflow
