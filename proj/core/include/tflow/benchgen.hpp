#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tflow/types.hpp"

namespace tflow {

// Subclass names assigned to the five benchmark roles. The five lists are
// pairwise disjoint except that l15 draws half of its members from side 1's
// labeled pool and half from side 2's.
struct SplitPlan {
  std::vector<std::string> l1;
  std::vector<std::string> l2;
  std::vector<std::string> l15;
  std::vector<std::string> u1;
  std::vector<std::string> u2;
  int per_super_labeled = 0;
  int per_super_unlabeled = 0;
};

enum class SimilarityTag { High, Medium, Low };

const char* similarity_tag_name(SimilarityTag tag);

struct Pairing {
  std::string unlabeled;  // "u1" or "u2"
  std::string labeled;    // "l1", "l2", or "l15"
  SimilarityTag tag;
};

// Splits hierarchy superclasses into two sides (first half / second half in
// hierarchy order). Within each superclass a seeded shuffle (or file order if
// `canonical`) assigns the first `labeled_per_super` subclasses to the
// labeled role and the next `unlabeled_per_super` to the unlabeled role.
// l15 mixes whole labeled superclass groups, half drawn from each side.
SplitPlan generate_split(const Hierarchy& h, int labeled_per_super,
                         int unlabeled_per_super, std::uint64_t seed,
                         bool canonical = false);

// The six benchmark pairings: (u1,l1) and (u2,l2) high similarity,
// (u1,l15)/(u2,l15) medium, (u1,l2)/(u2,l1) low.
std::vector<Pairing> pairings(const SplitPlan& plan);

struct SynthSpec {
  int classes = 2;
  int dim = 2;
  int per_class = 100;
  // Optional explicit class centers (classes x dim). When empty, centers are
  // placed at the vertices of a regular simplex with pairwise distance
  // `separation`.
  Matrix centers;
  double separation = 1.0;
  double variance = 1.0;
  std::uint64_t seed = 0;
};

// Vertices of a regular simplex with the given pairwise distance, centered at
// the origin and zero-padded to `dim` columns. Requires dim >= classes - 1.
Matrix simplex_centers(int classes, int dim, double separation);

// Draws per_class points per class from isotropic Gaussians at the class
// centers. Deterministic per seed; rows are class-major.
LabeledDataset generate_synthetic(const SynthSpec& spec);

}  // namespace tflow
