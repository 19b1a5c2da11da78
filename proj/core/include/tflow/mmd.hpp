#pragma once

#include <vector>

#include "tflow/kernels.hpp"
#include "tflow/types.hpp"

namespace tflow {

// Two disjoint row-index groups over a shared matrix; the sample form of a
// pair of class-conditional distributions. Each group needs >= 2 rows for
// the unbiased estimator.
struct GroupPair {
  const Matrix* source = nullptr;
  std::vector<Index> group_a;
  std::vector<Index> group_b;
};

void validate_group_pair(const GroupPair& pair);

// Unbiased squared MMD: A + B - C with
//   A = mean K over ordered within-a pairs (i != j),
//   B = the same for b,
//   C = 2 * mean K over all cross pairs.
// May be negative; always in [-2*kappa^2, 4*kappa^2]. Symmetric in (a, b)
// bit-for-bit.
double mmd2_unbiased(const KernelSpec& spec, const GroupPair& pair);

// Same estimator via literal double loops: one scalar kernel evaluation per
// ordered pair, per-coordinate distance accumulation, no shared terms.
// Exists purely as an independent oracle for mmd2_unbiased.
double mmd2_naive_oracle(const KernelSpec& spec, const GroupPair& pair);

}  // namespace tflow
