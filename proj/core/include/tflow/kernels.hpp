#pragma once

#include <utility>
#include <vector>

#include "tflow/types.hpp"

namespace tflow {

enum class KernelFamily { Gaussian, Laplacian };
enum class DistanceMetric { L2, L1 };

const char* kernel_family_name(KernelFamily family);

// Bounded positive-definite kernel. kappa = sup sqrt(K(x,x)) = 1 for both
// families; it caps the flow statistics at 4*kappa^2.
struct KernelSpec {
  KernelFamily family = KernelFamily::Gaussian;
  double bandwidth = 1.0;
  double kappa = 1.0;
};

struct BandwidthGrid {
  double base = 0.0;
  std::vector<double> multipliers;
};

std::vector<double> default_multipliers();  // {1/4, 1/2, 1, 2, 4}

DistanceMetric metric_for(KernelFamily family);  // L2 Gaussian, L1 Laplacian

// Gaussian: exp(-|x-y|_2^2 / (2 h^2)); Laplacian: exp(-|x-y|_1 / h).
double kernel_eval(const KernelSpec& spec,
                   const Eigen::Ref<const Eigen::RowVectorXd>& x,
                   const Eigen::Ref<const Eigen::RowVectorXd>& y);

// Bandwidth heuristic: mean distance over all pairs of rows. Bit-exact under
// row permutations (canonical ordering + exact block reduction).
double mean_pairwise_distance(const Matrix& m, DistanceMetric metric);

// h from the heuristic plus one KernelSpec per multiplier (bandwidth = h*mult).
std::pair<BandwidthGrid, std::vector<KernelSpec>> make_grid(
    const Matrix& m, KernelFamily family,
    const std::vector<double>& multipliers = default_multipliers());

// Same grid construction from an explicit base bandwidth (no data pass).
std::pair<BandwidthGrid, std::vector<KernelSpec>> grid_from_base(
    double base, KernelFamily family,
    const std::vector<double>& multipliers = default_multipliers());

// Entry (i,j) = kernel_eval(spec, a.row(i), b.row(j)), bit-identical to the
// scalar evaluation. Rows are filled by concurrent workers.
Matrix gram_matrix(const KernelSpec& spec, const Matrix& a, const Matrix& b);

}  // namespace tflow
