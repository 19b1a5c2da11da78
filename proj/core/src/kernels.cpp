#include "tflow/kernels.hpp"

#include <cmath>

#include "tflow/detail/order.hpp"
#include "tflow/detail/parallel.hpp"
#include "tflow/detail/summation.hpp"
#include "tflow/error.hpp"

namespace tflow {

namespace {

void validate_spec(const KernelSpec& spec) {
  if (!(spec.bandwidth > 0.0) || !std::isfinite(spec.bandwidth)) {
    fail(ErrorCode::InvalidArgument, "kernel bandwidth must be positive");
  }
}

void validate_multipliers(const std::vector<double>& multipliers) {
  if (multipliers.empty()) {
    fail(ErrorCode::InvalidArgument, "bandwidth multiplier list is empty");
  }
  double prev = 0.0;
  for (const double m : multipliers) {
    if (!(m > prev) || !std::isfinite(m)) {
      fail(ErrorCode::InvalidArgument,
           "bandwidth multipliers must be positive and strictly increasing");
    }
    prev = m;
  }
}

}  // namespace

const char* kernel_family_name(KernelFamily family) {
  return family == KernelFamily::Gaussian ? "gaussian" : "laplacian";
}

std::vector<double> default_multipliers() { return {0.25, 0.5, 1.0, 2.0, 4.0}; }

DistanceMetric metric_for(KernelFamily family) {
  return family == KernelFamily::Gaussian ? DistanceMetric::L2
                                          : DistanceMetric::L1;
}

double kernel_eval(const KernelSpec& spec,
                   const Eigen::Ref<const Eigen::RowVectorXd>& x,
                   const Eigen::Ref<const Eigen::RowVectorXd>& y) {
  validate_spec(spec);
  if (x.size() != y.size()) {
    fail(ErrorCode::DimensionMismatch,
         "vectors of dimension " + std::to_string(x.size()) + " and " +
             std::to_string(y.size()) + " cannot be compared");
  }
  const double h = spec.bandwidth;
  if (spec.family == KernelFamily::Gaussian) {
    const double d2 = (x - y).squaredNorm();
    return std::exp(-d2 / (2.0 * h * h));
  }
  const double d1 = (x - y).lpNorm<1>();
  return std::exp(-d1 / h);
}

double mean_pairwise_distance(const Matrix& m, DistanceMetric metric) {
  const Index n = m.rows();
  if (n < 2) {
    fail(ErrorCode::TooFewRows,
         "need at least 2 rows for pairwise distances, got " +
             std::to_string(n));
  }
  if (!m.allFinite()) {
    fail(ErrorCode::NonFiniteValue, "matrix contains NaN or Inf entries");
  }

  // Canonical gather: the sums below see rows in content order, so the
  // result is bit-identical under any input row permutation.
  const auto order = detail::canonical_order(m);
  Matrix x(n, m.cols());
  for (Index i = 0; i < n; ++i) x.row(i) = m.row(order[static_cast<std::size_t>(i)]);

  const auto layout = detail::block_layout(n);
  std::vector<double> partial(static_cast<std::size_t>(layout.n_blocks), 0.0);

  if (metric == DistanceMetric::L2) {
    const Eigen::VectorXd sq = x.rowwise().squaredNorm();
    constexpr Index kChunk = 2048;
    detail::parallel_for_blocks(layout.n_blocks, [&](std::int64_t b) {
      const Index i0 = static_cast<Index>(b) * layout.block_rows;
      const Index i1 = std::min(n, i0 + layout.block_rows);
      detail::NeumaierSum acc;
      Matrix dots;
      for (Index j0 = i0; j0 < n; j0 += kChunk) {
        const Index j1 = std::min(n, j0 + kChunk);
        dots.noalias() = x.middleRows(i0, i1 - i0) *
                         x.middleRows(j0, j1 - j0).transpose();
        for (Index i = i0; i < i1; ++i) {
          const Index jstart = std::max(i + 1, j0);
          for (Index j = jstart; j < j1; ++j) {
            const double d2 = sq[i] + sq[j] - 2.0 * dots(i - i0, j - j0);
            acc.add(std::sqrt(std::max(d2, 0.0)));
          }
        }
      }
      partial[static_cast<std::size_t>(b)] = acc.value();
    });
  } else {
    detail::parallel_for_blocks(layout.n_blocks, [&](std::int64_t b) {
      const Index i0 = static_cast<Index>(b) * layout.block_rows;
      const Index i1 = std::min(n, i0 + layout.block_rows);
      detail::NeumaierSum acc;
      for (Index i = i0; i < i1; ++i) {
        for (Index j = i + 1; j < n; ++j) {
          acc.add((x.row(i) - x.row(j)).lpNorm<1>());
        }
      }
      partial[static_cast<std::size_t>(b)] = acc.value();
    });
  }

  detail::ExactSum total;
  for (const double p : partial) total.add(p);
  const double sum = total.value();
  if (sum == 0.0) {
    fail(ErrorCode::DegenerateData,
         "all rows are identical; the bandwidth heuristic is undefined");
  }
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return sum / pairs;
}

std::pair<BandwidthGrid, std::vector<KernelSpec>> grid_from_base(
    double base, KernelFamily family, const std::vector<double>& multipliers) {
  if (!(base > 0.0) || !std::isfinite(base)) {
    fail(ErrorCode::InvalidArgument, "bandwidth base must be positive");
  }
  validate_multipliers(multipliers);
  BandwidthGrid grid{base, multipliers};
  std::vector<KernelSpec> specs;
  specs.reserve(multipliers.size());
  for (const double mult : multipliers) {
    specs.push_back(KernelSpec{family, base * mult, 1.0});
  }
  return {std::move(grid), std::move(specs)};
}

std::pair<BandwidthGrid, std::vector<KernelSpec>> make_grid(
    const Matrix& m, KernelFamily family,
    const std::vector<double>& multipliers) {
  validate_multipliers(multipliers);
  const double h = mean_pairwise_distance(m, metric_for(family));
  return grid_from_base(h, family, multipliers);
}

Matrix gram_matrix(const KernelSpec& spec, const Matrix& a, const Matrix& b) {
  validate_spec(spec);
  if (a.cols() != b.cols()) {
    fail(ErrorCode::DimensionMismatch,
         "matrices with " + std::to_string(a.cols()) + " and " +
             std::to_string(b.cols()) + " columns cannot be compared");
  }
  Matrix g(a.rows(), b.rows());
  const auto layout = detail::block_layout(a.rows());
  const bool gaussian = spec.family == KernelFamily::Gaussian;
  const double h = spec.bandwidth;
  const double denom = gaussian ? 2.0 * h * h : h;
  detail::parallel_for_blocks(layout.n_blocks, [&](std::int64_t blk) {
    const Index i0 = static_cast<Index>(blk) * layout.block_rows;
    const Index i1 = std::min(a.rows(), i0 + layout.block_rows);
    for (Index i = i0; i < i1; ++i) {
      for (Index j = 0; j < b.rows(); ++j) {
        // Same scalar operations as kernel_eval, so entries match it
        // bit-for-bit.
        const double d = gaussian ? (a.row(i) - b.row(j)).squaredNorm()
                                  : (a.row(i) - b.row(j)).lpNorm<1>();
        g(i, j) = std::exp(-d / denom);
      }
    }
  });
  return g;
}

}  // namespace tflow
