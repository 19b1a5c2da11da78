#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "tflow/types.hpp"

namespace tflow::detail {

// Canonical row order: lexicographic by row content, stable by original
// index. Gathering rows into this order before accumulation makes every
// downstream sum independent of the input row permutation, which is what
// turns "sample-order invariance" into a bit-exact guarantee.
inline std::vector<Index> canonical_order(const Matrix& m) {
  std::vector<Index> order(static_cast<std::size_t>(m.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  const Index d = m.cols();
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const double* ra = m.data() + a * d;
    const double* rb = m.data() + b * d;
    for (Index j = 0; j < d; ++j) {
      if (ra[j] < rb[j]) return true;
      if (rb[j] < ra[j]) return false;
    }
    return false;
  });
  return order;
}

// Fixed block decomposition used by the tiled kernel passes. A function of
// m only, so partial-sum boundaries (and therefore results) cannot depend
// on the worker count.
struct BlockLayout {
  Index block_rows;
  Index n_blocks;
};

inline BlockLayout block_layout(Index m) {
  const Index block_rows = std::max<Index>(128, (m + 31) / 32);
  const Index n_blocks = (m + block_rows - 1) / block_rows;
  return {block_rows, n_blocks};
}

}  // namespace tflow::detail
