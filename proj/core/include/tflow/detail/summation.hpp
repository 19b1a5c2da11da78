#pragma once

#include <cmath>
#include <vector>

namespace tflow::detail {

// Neumaier running compensation: near-exact accumulation at ~2x the cost of
// a plain sum. Used for the MMD term sums so that results depend on the set
// of addends, not meaningfully on their order.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Exact summation by expansion of non-overlapping partials (Shewchuk; same
// algorithm as Python's math.fsum). The result is the correctly rounded
// value of the exact sum, so it is bit-identical under any permutation of
// the addends. Used where bit-exact order invariance is a contract.
class ExactSum {
 public:
  void add(double x) {
    std::size_t used = 0;
    for (std::size_t k = 0; k < partials_.size(); ++k) {
      double y = partials_[k];
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials_[used++] = lo;
      x = hi;
    }
    partials_.resize(used);
    partials_.push_back(x);
  }

  double value() const {
    if (partials_.empty()) return 0.0;
    // Round the partials (ordered by increasing magnitude) to one double,
    // with the half-ulp correction from the CPython fsum implementation.
    std::size_t n = partials_.size();
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      const double yr = hi - x;
      lo = y - yr;
      if (lo != 0.0) break;
    }
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) ||
                  (lo > 0.0 && partials_[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      if (y == x - hi) hi = x;
    }
    return hi;
  }

 private:
  std::vector<double> partials_;
};

}  // namespace tflow::detail
