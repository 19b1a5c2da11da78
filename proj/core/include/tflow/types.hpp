#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tflow {

// All numeric data is double precision, row-major: one row per sample.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

// Per-row class ids, re-indexed to contiguous 0-based values. `names[id]`
// keeps the original label token when the vector came from a file; synthetic
// sources may leave it empty.
struct LabelVector {
  std::vector<int> ids;
  int class_count = 0;
  std::vector<std::string> names;
};

struct LabeledDataset {
  Matrix embeddings;
  LabelVector labels;
};

// Tag type: a matrix whose rows passed the simplex check
// (entries in [0,1], row sums within 1e-6 of 1).
struct ProbabilityMatrix {
  Matrix data;
};

enum class Provenance { KMeans, GMM, Agglomerative, External };

const char* provenance_name(Provenance p);

// Cluster assignments playing the role of labels; ids contiguous from 0.
struct PseudoLabelVector {
  std::vector<int> ids;
  int cluster_count = 0;
  Provenance provenance = Provenance::External;
};

// Class hierarchy: ordered superclasses, each with an ordered subclass list.
// Subclass names are globally unique.
struct Hierarchy {
  std::vector<std::string> superclasses;
  std::map<std::string, std::vector<std::string>> children;
};

}  // namespace tflow
