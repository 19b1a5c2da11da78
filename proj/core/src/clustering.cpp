#include "tflow/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tflow/detail/rng.hpp"
#include "tflow/detail/summation.hpp"
#include "tflow/error.hpp"

namespace tflow {

namespace {

void validate_reps(const Matrix& reps) {
  if (reps.rows() < 1 || reps.cols() < 1) {
    fail(ErrorCode::InvalidArgument, "representation matrix is empty");
  }
  if (!reps.allFinite()) {
    fail(ErrorCode::NonFiniteValue,
         "representation matrix contains a non-finite value");
  }
}

void validate_config(const Matrix& reps, const ClusteringConfig& cfg) {
  if (cfg.k < 1) {
    fail(ErrorCode::InvalidArgument, "cluster count k must be >= 1");
  }
  if (cfg.max_iter < 1) {
    fail(ErrorCode::InvalidArgument, "max_iter must be >= 1");
  }
  if (!(cfg.tol > 0.0)) {
    fail(ErrorCode::InvalidArgument, "tol must be > 0");
  }
  if (!(cfg.gmm_reg > 0.0)) {
    fail(ErrorCode::InvalidArgument, "gmm_reg must be > 0");
  }
  if (static_cast<Index>(cfg.k) > reps.rows()) {
    fail(ErrorCode::KTooLarge, "k=" + std::to_string(cfg.k) +
                                   " exceeds the sample count m=" +
                                   std::to_string(reps.rows()));
  }
}

// k-means++: each new centroid is sampled with probability proportional to
// the squared distance to the nearest centroid chosen so far.
Matrix kmeanspp_centroids(const Matrix& reps, int k, detail::Rng& rng) {
  const Index m = reps.rows();
  const Index d = reps.cols();
  Matrix centroids(k, d);
  const Index first = static_cast<Index>(rng.below(static_cast<std::uint64_t>(m)));
  centroids.row(0) = reps.row(first);

  Eigen::VectorXd d2 =
      Eigen::VectorXd::Constant(m, std::numeric_limits<double>::infinity());
  for (int c = 1; c < k; ++c) {
    for (Index i = 0; i < m; ++i) {
      const double dist = (reps.row(i) - centroids.row(c - 1)).squaredNorm();
      if (dist < d2[i]) d2[i] = dist;
    }
    double total = 0.0;
    for (Index i = 0; i < m; ++i) total += d2[i];
    Index pick;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cum = 0.0;
      pick = m - 1;  // fallback if rounding never crosses the target
      for (Index i = 0; i < m; ++i) {
        cum += d2[i];
        if (cum > target) {
          pick = i;
          break;
        }
      }
    } else {
      // Every point coincides with some centroid; any pick is as good.
      pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(m)));
    }
    centroids.row(c) = reps.row(pick);
  }
  return centroids;
}

}  // namespace

const char* cluster_method_name(ClusterMethod method) {
  switch (method) {
    case ClusterMethod::KMeans:
      return "kmeans";
    case ClusterMethod::GMM:
      return "gmm";
    case ClusterMethod::Agglomerative:
      return "agglo";
  }
  return "unknown";
}

KMeansResult kmeans_detailed(const Matrix& reps, const ClusteringConfig& cfg) {
  validate_reps(reps);
  validate_config(reps, cfg);
  const Index m = reps.rows();
  const Index d = reps.cols();
  const int k = cfg.k;

  detail::Rng rng(cfg.seed);
  KMeansResult res;
  res.centroids = kmeanspp_centroids(reps, k, rng);

  std::vector<int> assign(static_cast<std::size_t>(m), -1);
  std::vector<int> prev_assign;
  double prev_obj = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    detail::NeumaierSum wcss;
    for (Index i = 0; i < m; ++i) {
      int best = 0;
      double best_d = (reps.row(i) - res.centroids.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double dist = (reps.row(i) - res.centroids.row(c)).squaredNorm();
        if (dist < best_d) {  // ties keep the lowest centroid index
          best_d = dist;
          best = c;
        }
      }
      assign[static_cast<std::size_t>(i)] = best;
      wcss.add(best_d);
    }
    res.iterations = iter + 1;
    const double obj = wcss.value();
    res.objective_history.push_back(obj);

    const bool fixpoint = (assign == prev_assign);
    const bool converged =
        std::isfinite(prev_obj) &&
        std::abs(prev_obj - obj) <= cfg.tol * std::max(std::abs(prev_obj), 1e-300);
    if (fixpoint || converged) break;
    prev_assign = assign;
    prev_obj = obj;

    Matrix sums = Matrix::Zero(k, d);
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < m; ++i) {
      const int c = assign[static_cast<std::size_t>(i)];
      sums.row(c) += reps.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        res.centroids.row(c) =
            sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      }
    }
    // Empty clusters are re-seeded to the point farthest from its assigned
    // centroid (each repair consumes a distinct point).
    std::vector<char> taken(static_cast<std::size_t>(m), 0);
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      Index far_idx = 0;
      double far_d = -1.0;
      for (Index i = 0; i < m; ++i) {
        if (taken[static_cast<std::size_t>(i)]) continue;
        const double dist =
            (reps.row(i) -
             res.centroids.row(assign[static_cast<std::size_t>(i)]))
                .squaredNorm();
        if (dist > far_d) {
          far_d = dist;
          far_idx = i;
        }
      }
      taken[static_cast<std::size_t>(far_idx)] = 1;
      res.centroids.row(c) = reps.row(far_idx);
    }
  }

  res.labels.ids = std::move(assign);
  res.labels.cluster_count = k;
  res.labels.provenance = Provenance::KMeans;
  return res;
}

PseudoLabelVector kmeans(const Matrix& reps, const ClusteringConfig& cfg) {
  return kmeans_detailed(reps, cfg).labels;
}

GmmResult gmm_em_detailed(const Matrix& reps, const ClusteringConfig& cfg) {
  validate_reps(reps);
  validate_config(reps, cfg);
  const Index m = reps.rows();
  const Index d = reps.cols();
  const int k = cfg.k;
  const double log_two_pi = std::log(2.0 * std::acos(-1.0));

  // One-hot responsibilities from a kmeans run with the same seed.
  ClusteringConfig km_cfg = cfg;
  km_cfg.method = ClusterMethod::KMeans;
  const PseudoLabelVector init = kmeans(reps, km_cfg);
  Matrix resp = Matrix::Zero(m, k);
  for (Index i = 0; i < m; ++i) {
    resp(i, init.ids[static_cast<std::size_t>(i)]) = 1.0;
  }

  GmmResult res;
  res.means.resize(k, d);
  res.covariances.assign(static_cast<std::size_t>(k), Matrix());
  res.weights.resize(k);
  std::vector<Eigen::LLT<Eigen::MatrixXd>> chol(static_cast<std::size_t>(k));
  std::vector<double> logdet(static_cast<std::size_t>(k), 0.0);

  const auto m_step = [&]() {
    for (int c = 0; c < k; ++c) {
      const double n_c = resp.col(c).sum();
      if (!(n_c > 0.0)) {
        fail(ErrorCode::CovarianceSingular,
             "mixture component " + std::to_string(c) +
                 " has zero responsibility mass");
      }
      res.weights[c] = n_c / static_cast<double>(m);
      const Eigen::RowVectorXd mean = (resp.col(c).transpose() * reps) / n_c;
      res.means.row(c) = mean;
      const Matrix centered = reps.rowwise() - mean;
      Eigen::MatrixXd cov =
          (centered.transpose() * (centered.array().colwise() * resp.col(c).array()).matrix()) /
          n_c;
      cov = 0.5 * (cov + cov.transpose().eval());
      double ridge = cfg.gmm_reg * cov.trace() / static_cast<double>(d);
      if (!(ridge > 0.0)) ridge = cfg.gmm_reg;
      cov.diagonal().array() += ridge;
      chol[static_cast<std::size_t>(c)].compute(cov);
      if (chol[static_cast<std::size_t>(c)].info() != Eigen::Success) {
        fail(ErrorCode::CovarianceSingular,
             "covariance of component " + std::to_string(c) +
                 " is not positive definite even after regularization");
      }
      const auto& L = chol[static_cast<std::size_t>(c)].matrixLLT();
      double ld = 0.0;
      for (Index j = 0; j < d; ++j) ld += std::log(L(j, j));
      logdet[static_cast<std::size_t>(c)] = 2.0 * ld;
      res.covariances[static_cast<std::size_t>(c)] = cov;
    }
  };

  // Returns the observed-data log-likelihood and refreshes `resp`.
  const auto e_step = [&]() {
    Matrix logp(m, k);
    for (int c = 0; c < k; ++c) {
      const Matrix centered = reps.rowwise() - res.means.row(c);
      const Eigen::MatrixXd z =
          chol[static_cast<std::size_t>(c)].matrixL().solve(
              centered.transpose());
      const double base = std::log(res.weights[c]) -
                          0.5 * (static_cast<double>(d) * log_two_pi +
                                 logdet[static_cast<std::size_t>(c)]);
      logp.col(c) =
          (-0.5 * z.colwise().squaredNorm().transpose().array() + base).matrix();
    }
    detail::NeumaierSum ll;
    for (Index i = 0; i < m; ++i) {
      const double mx = logp.row(i).maxCoeff();
      const double lse =
          mx + std::log((logp.row(i).array() - mx).exp().sum());
      resp.row(i) = (logp.row(i).array() - lse).exp();
      ll.add(lse);
    }
    return ll.value();
  };

  double prev_ll = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    m_step();
    const double ll = e_step();
    res.loglik_history.push_back(ll);
    res.iterations = iter + 1;
    if (iter > 0) {
      if (ll < prev_ll - 1e-9 * std::max(1.0, std::abs(prev_ll))) {
        throw std::logic_error(
            "EM log-likelihood decreased between iterations");
      }
      if (std::abs(ll - prev_ll) <= cfg.tol * std::max(1.0, std::abs(prev_ll))) {
        break;
      }
    }
    prev_ll = ll;
  }

  res.labels.ids.resize(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    int best = 0;
    for (int c = 1; c < k; ++c) {
      if (resp(i, c) > resp(i, best)) best = c;  // ties keep the lowest id
    }
    res.labels.ids[static_cast<std::size_t>(i)] = best;
  }
  res.labels.cluster_count = k;
  res.labels.provenance = Provenance::GMM;
  res.responsibilities.data = std::move(resp);
  return res;
}

std::pair<PseudoLabelVector, SoftTargetMatrix> gmm_em(
    const Matrix& reps, const ClusteringConfig& cfg) {
  GmmResult res = gmm_em_detailed(reps, cfg);
  return {std::move(res.labels), std::move(res.responsibilities)};
}

PseudoLabelVector agglomerative(const Matrix& reps,
                                const ClusteringConfig& cfg) {
  validate_reps(reps);
  validate_config(reps, cfg);
  const Index m = reps.rows();
  const int k = cfg.k;

  // Ward merge cost between singletons {i} and {j} is ||xi - xj||^2 / 2;
  // merged costs follow from the Lance-Williams recurrence below.
  Eigen::MatrixXd w(m, m);
  w.setZero();
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      const double dist = 0.5 * (reps.row(i) - reps.row(j)).squaredNorm();
      w(i, j) = dist;
      w(j, i) = dist;
    }
  }

  std::vector<int> active(static_cast<std::size_t>(m), 1);
  std::vector<double> size(static_cast<std::size_t>(m), 1.0);
  std::vector<Index> assign(static_cast<std::size_t>(m));
  std::iota(assign.begin(), assign.end(), Index{0});

  Index n_active = m;
  while (n_active > static_cast<Index>(k)) {
    double best = std::numeric_limits<double>::infinity();
    Index bi = -1;
    Index bj = -1;
    for (Index i = 0; i < m; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      for (Index j = i + 1; j < m; ++j) {
        if (!active[static_cast<std::size_t>(j)]) continue;
        if (w(i, j) < best) {  // ties keep the smallest (i, j) in scan order
          best = w(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    const double si = size[static_cast<std::size_t>(bi)];
    const double sj = size[static_cast<std::size_t>(bj)];
    const double wij = w(bi, bj);
    for (Index t = 0; t < m; ++t) {
      if (!active[static_cast<std::size_t>(t)] || t == bi || t == bj) continue;
      const double st = size[static_cast<std::size_t>(t)];
      const double merged =
          ((si + st) * w(bi, t) + (sj + st) * w(bj, t) - st * wij) /
          (si + sj + st);
      w(bi, t) = merged;
      w(t, bi) = merged;
    }
    size[static_cast<std::size_t>(bi)] = si + sj;
    active[static_cast<std::size_t>(bj)] = 0;
    for (auto& a : assign) {
      if (a == bj) a = bi;
    }
    --n_active;
  }

  PseudoLabelVector out;
  out.ids.resize(static_cast<std::size_t>(m));
  std::vector<int> remap(static_cast<std::size_t>(m), -1);
  int next_id = 0;
  for (Index i = 0; i < m; ++i) {
    const Index root = assign[static_cast<std::size_t>(i)];
    if (remap[static_cast<std::size_t>(root)] == -1) {
      remap[static_cast<std::size_t>(root)] = next_id++;
    }
    out.ids[static_cast<std::size_t>(i)] = remap[static_cast<std::size_t>(root)];
  }
  out.cluster_count = next_id;
  out.provenance = Provenance::Agglomerative;
  return out;
}

PseudoLabelVector cluster(const Matrix& reps, const ClusteringConfig& cfg) {
  switch (cfg.method) {
    case ClusterMethod::KMeans:
      return kmeans(reps, cfg);
    case ClusterMethod::GMM:
      return gmm_em(reps, cfg).first;
    case ClusterMethod::Agglomerative:
      return agglomerative(reps, cfg);
  }
  fail(ErrorCode::InvalidArgument, "unknown clustering method");
}

double hungarian_accuracy(const PseudoLabelVector& pred,
                          const LabelVector& truth) {
  if (pred.ids.size() != truth.ids.size()) {
    fail(ErrorCode::LengthMismatch,
         "predicted labels have " + std::to_string(pred.ids.size()) +
             " entries but ground truth has " +
             std::to_string(truth.ids.size()));
  }
  if (pred.ids.empty()) {
    fail(ErrorCode::InvalidArgument, "label vectors are empty");
  }
  const std::size_t m = pred.ids.size();
  const int kp = pred.cluster_count;
  const int kt = truth.class_count;
  if (kp < 1 || kt < 1) {
    fail(ErrorCode::InvalidArgument, "label vectors: counts must be >= 1");
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (pred.ids[i] < 0 || pred.ids[i] >= kp || truth.ids[i] < 0 ||
        truth.ids[i] >= kt) {
      fail(ErrorCode::InvalidArgument,
           "label id out of range at row " + std::to_string(i));
    }
  }

  const int n = std::max(kp, kt);
  std::vector<std::vector<std::int64_t>> contingency(
      static_cast<std::size_t>(n),
      std::vector<std::int64_t>(static_cast<std::size_t>(n), 0));
  for (std::size_t i = 0; i < m; ++i) {
    ++contingency[static_cast<std::size_t>(pred.ids[i])]
                 [static_cast<std::size_t>(truth.ids[i])];
  }
  std::int64_t max_cell = 0;
  for (const auto& row : contingency) {
    for (const std::int64_t cell : row) max_cell = std::max(max_cell, cell);
  }

  // Min-cost assignment on cost = max_cell - count via the potentials
  // ("shortest augmenting path") formulation, O(n^3).
  const std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::int64_t> v(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> match(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<std::int64_t> minv(static_cast<std::size_t>(n) + 1, kInf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = match[static_cast<std::size_t>(j0)];
      std::int64_t delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const std::int64_t cost =
            max_cell - contingency[static_cast<std::size_t>(i0 - 1)]
                                  [static_cast<std::size_t>(j - 1)];
        const std::int64_t cur =
            cost - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::int64_t matched = 0;
  for (int j = 1; j <= n; ++j) {
    matched += contingency[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)]
                          [static_cast<std::size_t>(j - 1)];
  }
  return static_cast<double>(matched) / static_cast<double>(m);
}

SoftTargetMatrix sinkhorn_pseudo_labels(const Matrix& logits, double epsilon,
                                        int iters) {
  if (logits.rows() < 1 || logits.cols() < 1) {
    fail(ErrorCode::InvalidArgument, "logits matrix is empty");
  }
  if (!logits.allFinite()) {
    fail(ErrorCode::NonFiniteValue, "logits contain a non-finite value");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    fail(ErrorCode::InvalidArgument, "epsilon must be a positive finite real");
  }
  if (iters < 1) {
    fail(ErrorCode::InvalidArgument, "iteration count must be >= 1");
  }
  const Index m = logits.rows();
  const Index k = logits.cols();
  Matrix q = ((logits.array() - logits.maxCoeff()) / epsilon).exp();
  const double col_target = 1.0 / static_cast<double>(k);
  const double row_target = 1.0 / static_cast<double>(m);
  // Entries below the smallest normal double carry no signal: exp() either
  // underflowed or was clamped at the subnormal boundary, so the slice's
  // relative structure is gone and any rescale would just amplify that
  // artifact (possibly to infinity).
  constexpr double kFloor = std::numeric_limits<double>::min();
  for (int round = 0; round < iters; ++round) {
    for (Index c = 0; c < k; ++c) {
      if (q.col(c).maxCoeff() < kFloor) {
        fail(ErrorCode::NumericalUnderflow,
             "column " + std::to_string(c) +
                 " lost all mass after exponentiation; rescale the logits or "
                 "raise epsilon");
      }
      q.col(c) *= col_target / q.col(c).sum();
    }
    for (Index i = 0; i < m; ++i) {
      if (q.row(i).maxCoeff() < kFloor) {
        fail(ErrorCode::NumericalUnderflow,
             "row " + std::to_string(i) +
                 " lost all mass after exponentiation; rescale the logits or "
                 "raise epsilon");
      }
      q.row(i) *= row_target / q.row(i).sum();
    }
  }
  for (Index i = 0; i < m; ++i) {
    q.row(i) /= q.row(i).sum();
  }
  return {std::move(q)};
}

SoftTargetMatrix mix_targets(const SoftTargetMatrix& gt,
                             const SoftTargetMatrix& pl, double alpha) {
  if (gt.data.rows() != pl.data.rows() || gt.data.cols() != pl.data.cols()) {
    fail(ErrorCode::ShapeMismatch,
         "target shapes differ: " + std::to_string(gt.data.rows()) + "x" +
             std::to_string(gt.data.cols()) + " vs " +
             std::to_string(pl.data.rows()) + "x" +
             std::to_string(pl.data.cols()));
  }
  if (gt.data.rows() < 1 || gt.data.cols() < 1) {
    fail(ErrorCode::InvalidArgument, "target matrices are empty");
  }
  if (!gt.data.allFinite() || !pl.data.allFinite()) {
    fail(ErrorCode::NonFiniteValue, "target matrices contain a non-finite value");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    fail(ErrorCode::AlphaOutOfRange, "alpha must lie in [0, 1]");
  }
  if (alpha == 1.0) return {gt.data};
  if (alpha == 0.0) return {pl.data};
  return {alpha * gt.data + (1.0 - alpha) * pl.data};
}

Matrix l2_normalize_rows(const Matrix& m) {
  validate_reps(m);
  Matrix out = m;
  for (Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > 0.0) out.row(i) /= norm;
  }
  return out;
}

}  // namespace tflow
