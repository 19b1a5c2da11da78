#include "tflow/benchgen.hpp"

#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tflow/detail/rng.hpp"
#include "tflow/error.hpp"

namespace tflow {

const char* similarity_tag_name(SimilarityTag tag) {
  switch (tag) {
    case SimilarityTag::High:
      return "high";
    case SimilarityTag::Medium:
      return "medium";
    case SimilarityTag::Low:
      return "low";
  }
  return "unknown";
}

SplitPlan generate_split(const Hierarchy& h, int labeled_per_super,
                         int unlabeled_per_super, std::uint64_t seed,
                         bool canonical) {
  if (labeled_per_super < 1 || unlabeled_per_super < 1) {
    fail(ErrorCode::InvalidArgument,
         "labeled and unlabeled per-superclass counts must be >= 1");
  }
  const std::size_t n_super = h.superclasses.size();
  if (n_super == 0) {
    fail(ErrorCode::InvalidArgument, "hierarchy has no superclasses");
  }
  if (n_super % 2 != 0) {
    fail(ErrorCode::OddSuperclassCount,
         "superclass count " + std::to_string(n_super) +
             " is odd; the two benchmark sides must be the same size");
  }
  const std::size_t need =
      static_cast<std::size_t>(labeled_per_super) +
      static_cast<std::size_t>(unlabeled_per_super);
  for (const std::string& super : h.superclasses) {
    const auto it = h.children.find(super);
    const std::size_t have = it == h.children.end() ? 0 : it->second.size();
    if (have < need) {
      fail(ErrorCode::TooFewSubclasses,
           "superclass '" + super + "' has " + std::to_string(have) +
               " subclasses but the split needs " + std::to_string(need));
    }
  }

  detail::Rng rng(seed);
  SplitPlan plan;
  plan.per_super_labeled = labeled_per_super;
  plan.per_super_unlabeled = unlabeled_per_super;

  // Labeled subclasses kept per superclass group, used to compose l15 below.
  std::vector<std::vector<std::string>> groups_side1;
  std::vector<std::vector<std::string>> groups_side2;

  const std::size_t half = n_super / 2;
  for (std::size_t s = 0; s < n_super; ++s) {
    std::vector<std::string> subs = h.children.at(h.superclasses[s]);
    if (!canonical) rng.shuffle(subs);
    const bool side1 = s < half;
    std::vector<std::string> labeled(subs.begin(),
                                     subs.begin() + labeled_per_super);
    auto& l = side1 ? plan.l1 : plan.l2;
    auto& u = side1 ? plan.u1 : plan.u2;
    for (int i = 0; i < labeled_per_super; ++i) {
      l.push_back(labeled[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < unlabeled_per_super; ++i) {
      u.push_back(subs[static_cast<std::size_t>(labeled_per_super + i)]);
    }
    (side1 ? groups_side1 : groups_side2).push_back(std::move(labeled));
  }

  // l15 takes half of each side's labeled subclasses, group by group in
  // seeded order; if the target cuts a group, its leading subclasses are
  // taken so both sides contribute exactly |l1|/2 names.
  const std::size_t per_side_target = plan.l1.size() / 2;
  const auto take_half = [&](std::vector<std::vector<std::string>>& groups) {
    std::vector<std::size_t> order(groups.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (!canonical) rng.shuffle(order);
    std::size_t taken = 0;
    for (const std::size_t g : order) {
      if (taken >= per_side_target) break;
      for (const std::string& name : groups[g]) {
        if (taken >= per_side_target) break;
        plan.l15.push_back(name);
        ++taken;
      }
    }
  };
  take_half(groups_side1);
  take_half(groups_side2);

  return plan;
}

std::vector<Pairing> pairings(const SplitPlan& plan) {
  (void)plan;
  return {
      {"u1", "l1", SimilarityTag::High},  {"u2", "l2", SimilarityTag::High},
      {"u1", "l15", SimilarityTag::Medium}, {"u2", "l15", SimilarityTag::Medium},
      {"u1", "l2", SimilarityTag::Low},   {"u2", "l1", SimilarityTag::Low},
  };
}

Matrix simplex_centers(int classes, int dim, double separation) {
  if (classes < 1 || dim < 1) {
    fail(ErrorCode::InvalidArgument,
         "simplex centers need classes >= 1 and dim >= 1");
  }
  if (!(separation >= 0.0) || !std::isfinite(separation)) {
    fail(ErrorCode::InvalidArgument,
         "separation must be a finite non-negative real");
  }
  Matrix centers = Matrix::Zero(classes, dim);
  if (classes == 1 || separation == 0.0) return centers;
  if (dim < classes - 1) {
    fail(ErrorCode::DimensionMismatch,
         "a regular simplex with " + std::to_string(classes) +
             " vertices needs dimension >= " + std::to_string(classes - 1) +
             " but dim=" + std::to_string(dim));
  }

  // Scaled standard-basis vertices in R^k have pairwise distance exactly
  // `separation`; center them and rotate into the (k-1)-dimensional
  // complement of the all-ones direction.
  const int k = classes;
  const double scale = separation / std::sqrt(2.0);
  Eigen::MatrixXd vertices =
      scale * Eigen::MatrixXd::Identity(k, k);
  const Eigen::RowVectorXd centroid = vertices.colwise().mean();
  vertices.rowwise() -= centroid;

  Eigen::MatrixXd ones(k, 1);
  ones.setOnes();
  const Eigen::MatrixXd q =
      Eigen::HouseholderQR<Eigen::MatrixXd>(ones).householderQ();
  const Eigen::MatrixXd coords = vertices * q.rightCols(k - 1);
  centers.leftCols(k - 1) = coords;
  return centers;
}

LabeledDataset generate_synthetic(const SynthSpec& spec) {
  if (spec.classes < 1 || spec.dim < 1) {
    fail(ErrorCode::InvalidArgument,
         "synthetic data needs classes >= 1 and dim >= 1");
  }
  if (spec.per_class < 2) {
    fail(ErrorCode::InvalidArgument, "per_class must be >= 2");
  }
  if (!(spec.variance > 0.0) || !std::isfinite(spec.variance)) {
    fail(ErrorCode::InvalidArgument, "variance must be a positive finite real");
  }
  Matrix centers;
  if (spec.centers.size() == 0) {
    centers = simplex_centers(spec.classes, spec.dim, spec.separation);
  } else {
    if (spec.centers.rows() != spec.classes || spec.centers.cols() != spec.dim) {
      fail(ErrorCode::DimensionMismatch,
           "explicit centers must be classes x dim (" +
               std::to_string(spec.classes) + "x" + std::to_string(spec.dim) +
               "), got " + std::to_string(spec.centers.rows()) + "x" +
               std::to_string(spec.centers.cols()));
    }
    if (!spec.centers.allFinite()) {
      fail(ErrorCode::NonFiniteValue, "centers contain a non-finite value");
    }
    centers = spec.centers;
  }

  detail::Rng rng(spec.seed);
  const double sigma = std::sqrt(spec.variance);
  const Index m = static_cast<Index>(spec.classes) * spec.per_class;

  LabeledDataset out;
  out.embeddings.resize(m, spec.dim);
  out.labels.ids.resize(static_cast<std::size_t>(m));
  out.labels.class_count = spec.classes;
  out.labels.names.reserve(static_cast<std::size_t>(spec.classes));
  Index row = 0;
  for (int c = 0; c < spec.classes; ++c) {
    out.labels.names.push_back("c" + std::to_string(c));
    for (int i = 0; i < spec.per_class; ++i, ++row) {
      for (Index j = 0; j < spec.dim; ++j) {
        out.embeddings(row, j) = centers(c, j) + sigma * rng.normal();
      }
      out.labels.ids[static_cast<std::size_t>(row)] = c;
    }
  }
  return out;
}

}  // namespace tflow
