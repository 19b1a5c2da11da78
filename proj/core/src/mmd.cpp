#include "tflow/mmd.hpp"

#include <algorithm>
#include <cmath>

#include "tflow/detail/summation.hpp"
#include "tflow/error.hpp"

namespace tflow {

void validate_group_pair(const GroupPair& pair) {
  if (pair.source == nullptr) {
    fail(ErrorCode::InvalidArgument, "group pair has no source matrix");
  }
  if (pair.group_a.size() < 2 || pair.group_b.size() < 2) {
    fail(ErrorCode::GroupTooSmall,
         "the unbiased estimator needs >= 2 samples per group, got " +
             std::to_string(pair.group_a.size()) + " and " +
             std::to_string(pair.group_b.size()));
  }
  const Index rows = pair.source->rows();
  std::vector<Index> merged;
  merged.reserve(pair.group_a.size() + pair.group_b.size());
  for (const auto& group : {pair.group_a, pair.group_b}) {
    for (const Index idx : group) {
      if (idx < 0 || idx >= rows) {
        fail(ErrorCode::InvalidArgument,
             "group index " + std::to_string(idx) + " is out of range");
      }
      merged.push_back(idx);
    }
  }
  std::sort(merged.begin(), merged.end());
  if (std::adjacent_find(merged.begin(), merged.end()) != merged.end()) {
    fail(ErrorCode::InvalidArgument,
         "groups must be disjoint index lists without repeats");
  }
}

namespace {

void validate_kernel(const KernelSpec& spec) {
  if (!(spec.bandwidth > 0.0) || !std::isfinite(spec.bandwidth)) {
    fail(ErrorCode::InvalidArgument, "kernel bandwidth must be positive");
  }
}

double assemble(double within_a, double within_b, double cross, double na,
                double nb) {
  const double a_term = within_a / (na * (na - 1.0));
  const double b_term = within_b / (nb * (nb - 1.0));
  const double c_term = 2.0 * cross / (na * nb);
  // (A + B) - C: the leading addition commutes bit-exactly, which is what
  // makes mmd2(a,b) == mmd2(b,a) an identity rather than an approximation.
  return (a_term + b_term) - c_term;
}

}  // namespace

double mmd2_unbiased(const KernelSpec& spec, const GroupPair& pair) {
  validate_group_pair(pair);
  validate_kernel(spec);
  const Matrix& x = *pair.source;
  const bool gaussian = spec.family == KernelFamily::Gaussian;
  const double h = spec.bandwidth;
  const double denom = gaussian ? 2.0 * h * h : h;

  const auto kernel = [&](Index p, Index q) {
    const double d = gaussian ? (x.row(p) - x.row(q)).squaredNorm()
                              : (x.row(p) - x.row(q)).lpNorm<1>();
    return std::exp(-d / denom);
  };

  // Fixed row-major order over the index lists, compensated accumulation.
  const auto within = [&](const std::vector<Index>& group) {
    detail::NeumaierSum sum;
    for (const Index p : group) {
      for (const Index q : group) {
        if (p == q) continue;
        sum.add(kernel(p, q));
      }
    }
    return sum.value();
  };

  detail::NeumaierSum cross;
  for (const Index p : pair.group_a) {
    for (const Index q : pair.group_b) {
      cross.add(kernel(p, q));
    }
  }

  return assemble(within(pair.group_a), within(pair.group_b), cross.value(),
                  static_cast<double>(pair.group_a.size()),
                  static_cast<double>(pair.group_b.size()));
}

double mmd2_naive_oracle(const KernelSpec& spec, const GroupPair& pair) {
  validate_group_pair(pair);
  validate_kernel(spec);
  const Matrix& x = *pair.source;
  const bool gaussian = spec.family == KernelFamily::Gaussian;
  const double h = spec.bandwidth;
  const Index d = x.cols();

  // Deliberately primitive: per-coordinate scalar loops and one exp per
  // ordered pair. Shares no vector machinery with the fast path.
  const auto kernel = [&](Index p, Index q) {
    double dist = 0.0;
    if (gaussian) {
      for (Index j = 0; j < d; ++j) {
        const double diff = x(p, j) - x(q, j);
        dist += diff * diff;
      }
      return std::exp(-dist / (2.0 * h * h));
    }
    for (Index j = 0; j < d; ++j) {
      dist += std::abs(x(p, j) - x(q, j));
    }
    return std::exp(-dist / h);
  };

  detail::NeumaierSum within_a;
  for (const Index p : pair.group_a) {
    for (const Index q : pair.group_a) {
      if (p != q) within_a.add(kernel(p, q));
    }
  }
  detail::NeumaierSum within_b;
  for (const Index p : pair.group_b) {
    for (const Index q : pair.group_b) {
      if (p != q) within_b.add(kernel(p, q));
    }
  }
  detail::NeumaierSum cross;
  for (const Index p : pair.group_a) {
    for (const Index q : pair.group_b) {
      cross.add(kernel(p, q));
    }
  }

  return assemble(within_a.value(), within_b.value(), cross.value(),
                  static_cast<double>(pair.group_a.size()),
                  static_cast<double>(pair.group_b.size()));
}

}  // namespace tflow
