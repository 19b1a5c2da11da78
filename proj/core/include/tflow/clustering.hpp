#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tflow/types.hpp"

namespace tflow {

enum class ClusterMethod { KMeans, GMM, Agglomerative };
enum class Linkage { Ward };

const char* cluster_method_name(ClusterMethod method);

struct ClusteringConfig {
  ClusterMethod method = ClusterMethod::KMeans;
  int k = 1;
  int max_iter = 100;
  double tol = 1e-6;  // relative objective change at convergence
  std::uint64_t seed = 0;
  double gmm_reg = 1e-6;  // covariance ridge, scaled by trace(cov)/d
  Linkage linkage = Linkage::Ward;
};

// Rows on the probability simplex (within 1e-6).
struct SoftTargetMatrix {
  Matrix data;
};

struct KMeansResult {
  PseudoLabelVector labels;
  Matrix centroids;  // k x d
  std::vector<double> objective_history;  // WCSS after each assignment pass
  int iterations = 0;
};

// Lloyd iterations from k-means++ seeding until the assignment fixpoint,
// relative-objective convergence, or max_iter. Deterministic per seed;
// empty clusters are re-seeded to the point farthest from its centroid.
KMeansResult kmeans_detailed(const Matrix& reps, const ClusteringConfig& cfg);
PseudoLabelVector kmeans(const Matrix& reps, const ClusteringConfig& cfg);

struct GmmResult {
  PseudoLabelVector labels;         // responsibility argmax
  SoftTargetMatrix responsibilities;  // m x k
  Matrix means;                       // k x d
  std::vector<Matrix> covariances;    // k ridged full covariances (d x d)
  Eigen::VectorXd weights;            // k mixing weights
  std::vector<double> loglik_history;  // one entry per E-step
  int iterations = 0;
};

// Full-covariance EM initialized from a kmeans run with the same seed.
// The log-likelihood is asserted non-decreasing (1e-9 relative slack).
GmmResult gmm_em_detailed(const Matrix& reps, const ClusteringConfig& cfg);
std::pair<PseudoLabelVector, SoftTargetMatrix> gmm_em(
    const Matrix& reps, const ClusteringConfig& cfg);

// Bottom-up Ward merging (Lance-Williams updates) cut at k clusters.
// Fully deterministic: ties break on the smallest (i, j) index pair.
PseudoLabelVector agglomerative(const Matrix& reps,
                                const ClusteringConfig& cfg);

// Dispatch on cfg.method.
PseudoLabelVector cluster(const Matrix& reps, const ClusteringConfig& cfg);

// Fraction of samples matched under the best one-to-one cluster-to-class
// assignment (Hungarian algorithm on the contingency matrix).
double hungarian_accuracy(const PseudoLabelVector& pred,
                          const LabelVector& truth);

// Balanced soft assignments: Q ∝ exp(logits/epsilon), then `iters` rounds of
// column (to 1/k) and row (to 1/m) normalization; returned rows sum to 1.
SoftTargetMatrix sinkhorn_pseudo_labels(const Matrix& logits, double epsilon,
                                        int iters);

// y = alpha*gt + (1-alpha)*pl, entrywise. alpha in [0, 1]; the boundaries
// return the respective input bit-exactly.
SoftTargetMatrix mix_targets(const SoftTargetMatrix& gt,
                             const SoftTargetMatrix& pl, double alpha);

// Rows scaled to unit L2 norm; zero rows pass through unchanged.
Matrix l2_normalize_rows(const Matrix& m);

}  // namespace tflow
