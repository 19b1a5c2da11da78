#include "tflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "tflow/detail/order.hpp"
#include "tflow/detail/parallel.hpp"
#include "tflow/detail/rng.hpp"
#include "tflow/detail/summation.hpp"
#include "tflow/error.hpp"

namespace tflow {

namespace {

constexpr Index kChunk = 2048;

struct EngineResult {
  std::vector<double> flows;        // per grid entry
  std::vector<double> min_mmd2;     // per grid entry, over class pairs
  std::vector<double> max_mmd2;
  Matrix pair_table;                // k x k ordered-pair contributions
  double total = 0.0;
};

void validate_grid(const std::vector<KernelSpec>& grid) {
  if (grid.empty()) {
    fail(ErrorCode::InvalidArgument, "kernel grid is empty");
  }
  for (const auto& spec : grid) {
    if (!(spec.bandwidth > 0.0) || !std::isfinite(spec.bandwidth)) {
      fail(ErrorCode::InvalidArgument, "kernel bandwidth must be positive");
    }
  }
}

// Per-(class, class) kernel sums over canonical upper-triangle pairs:
// bins[s][a*k + b] = sum of K_s(x_i, x_j) over canonical i < j with
// label_i = a, label_j = b. One distance pass per kernel family, shared by
// all bandwidths of that family.
std::vector<std::vector<double>> accumulate_bins(
    const Matrix& x, const std::vector<int>& labels, int k,
    const std::vector<KernelSpec>& grid) {
  const Index m = x.rows();
  const std::size_t n_specs = grid.size();
  const std::size_t bin_count = n_specs * static_cast<std::size_t>(k) *
                                static_cast<std::size_t>(k);

  const auto layout = detail::block_layout(m);
  // Per-block partial bins, reduced in block order afterwards: thread
  // scheduling cannot influence any sum.
  std::vector<std::vector<double>> block_bins(
      static_cast<std::size_t>(layout.n_blocks));

  for (const KernelFamily family :
       {KernelFamily::Gaussian, KernelFamily::Laplacian}) {
    std::vector<std::size_t> spec_ids;
    std::vector<double> factor;
    for (std::size_t s = 0; s < n_specs; ++s) {
      if (grid[s].family != family) continue;
      spec_ids.push_back(s);
      const double h = grid[s].bandwidth;
      factor.push_back(family == KernelFamily::Gaussian ? 1.0 / (2.0 * h * h)
                                                        : 1.0 / h);
    }
    if (spec_ids.empty()) continue;
    const std::size_t sf = spec_ids.size();
    const bool gaussian = family == KernelFamily::Gaussian;

    Eigen::VectorXd sq;
    if (gaussian) sq = x.rowwise().squaredNorm();

    detail::parallel_for_blocks(layout.n_blocks, [&](std::int64_t blk) {
      const Index i0 = static_cast<Index>(blk) * layout.block_rows;
      const Index i1 = std::min(m, i0 + layout.block_rows);
      const Index block_len = i1 - i0;

      auto& bins = block_bins[static_cast<std::size_t>(blk)];
      if (bins.empty()) bins.assign(bin_count, 0.0);

      // rowbins[(i - i0)*sf + s][c]: per-row per-spec class sums, plain
      // accumulation in canonical j order across chunks.
      std::vector<double> rowbins(
          static_cast<std::size_t>(block_len) * sf * static_cast<std::size_t>(k),
          0.0);
      Eigen::ArrayXd dbuf(kChunk);
      Eigen::ArrayXd kbuf(kChunk);
      Matrix dots;

      for (Index j0 = i0; j0 < m; j0 += kChunk) {
        const Index j1 = std::min(m, j0 + kChunk);
        if (gaussian) {
          dots.noalias() =
              x.middleRows(i0, block_len) * x.middleRows(j0, j1 - j0).transpose();
        }
        for (Index i = i0; i < i1; ++i) {
          const Index jstart = std::max(i + 1, j0);
          if (jstart >= j1) continue;
          const Index len = j1 - jstart;
          if (gaussian) {
            dbuf.head(len) =
                (sq.segment(jstart, len).array() + sq[i] -
                 2.0 * dots.row(i - i0).segment(jstart - j0, len).transpose().array())
                    .max(0.0);
          } else {
            for (Index j = jstart; j < j1; ++j) {
              dbuf[j - jstart] = (x.row(i) - x.row(j)).lpNorm<1>();
            }
          }
          for (std::size_t s = 0; s < sf; ++s) {
            kbuf.head(len) = (dbuf.head(len) * -factor[s]).exp();
            double* rb =
                rowbins.data() +
                (static_cast<std::size_t>(i - i0) * sf + s) *
                    static_cast<std::size_t>(k);
            for (Index t = 0; t < len; ++t) {
              rb[labels[static_cast<std::size_t>(jstart + t)]] += kbuf[t];
            }
          }
        }
      }

      // Merge row sums into the block bins in (i, spec, class) order.
      for (Index i = i0; i < i1; ++i) {
        const int a = labels[static_cast<std::size_t>(i)];
        for (std::size_t s = 0; s < sf; ++s) {
          const double* rb =
              rowbins.data() + (static_cast<std::size_t>(i - i0) * sf + s) *
                                   static_cast<std::size_t>(k);
          double* out = bins.data() +
                        (spec_ids[s] * static_cast<std::size_t>(k) +
                         static_cast<std::size_t>(a)) *
                            static_cast<std::size_t>(k);
          for (int c = 0; c < k; ++c) out[c] += rb[c];
        }
      }
    });
  }

  // Reduce blocks in block order with compensation.
  std::vector<detail::NeumaierSum> global(bin_count);
  for (const auto& bins : block_bins) {
    if (bins.empty()) continue;
    for (std::size_t idx = 0; idx < bin_count; ++idx) {
      global[idx].add(bins[idx]);
    }
  }
  std::vector<std::vector<double>> result(
      n_specs, std::vector<double>(static_cast<std::size_t>(k) *
                                   static_cast<std::size_t>(k)));
  for (std::size_t s = 0; s < n_specs; ++s) {
    for (std::size_t ab = 0;
         ab < static_cast<std::size_t>(k) * static_cast<std::size_t>(k); ++ab) {
      result[s][ab] =
          global[s * static_cast<std::size_t>(k) * static_cast<std::size_t>(k) +
                 ab]
              .value();
    }
  }
  return result;
}

// Core engine over rows already gathered into canonical order.
EngineResult flow_engine(const Matrix& x, const std::vector<int>& labels,
                         int k, const std::vector<KernelSpec>& grid) {
  const Index m = x.rows();
  const std::size_t n_specs = grid.size();

  EngineResult res;
  res.flows.assign(n_specs, 0.0);
  res.min_mmd2.assign(n_specs, 0.0);
  res.max_mmd2.assign(n_specs, 0.0);
  res.pair_table = Matrix::Zero(k, k);

  if (k < 2) {
    res.total = 0.0;
    return res;
  }

  std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
  for (const int c : labels) counts[static_cast<std::size_t>(c)]++;

  const auto bins = accumulate_bins(x, labels, k, grid);

  const double pair_denom =
      static_cast<double>(static_cast<std::int64_t>(m) * (m - 1));

  for (std::size_t s = 0; s < n_specs; ++s) {
    detail::ExactSum flow_sum;
    bool first_pair = true;
    for (int c = 0; c < k; ++c) {
      for (int cp = c + 1; cp < k; ++cp) {
        const double nc = static_cast<double>(counts[static_cast<std::size_t>(c)]);
        const double ncp =
            static_cast<double>(counts[static_cast<std::size_t>(cp)]);
        const auto at = [&](int a, int b) {
          return bins[s][static_cast<std::size_t>(a) *
                             static_cast<std::size_t>(k) +
                         static_cast<std::size_t>(b)];
        };
        // Canonical i<j pairs cover each unordered pair once, so the
        // ordered within-class sum is exactly twice the bin.
        const double a_term = 2.0 * at(c, c) / (nc * (nc - 1.0));
        const double b_term = 2.0 * at(cp, cp) / (ncp * (ncp - 1.0));
        const double cross = at(c, cp) + at(cp, c);
        const double c_term = 2.0 * cross / (nc * ncp);
        const double v = (a_term + b_term) - c_term;

        if (first_pair) {
          res.min_mmd2[s] = v;
          res.max_mmd2[s] = v;
          first_pair = false;
        } else {
          res.min_mmd2[s] = std::min(res.min_mmd2[s], v);
          res.max_mmd2[s] = std::max(res.max_mmd2[s], v);
        }

        // Eq. weight per *ordered* pair; the unordered pair contributes
        // twice with equal values, added separately so the total is the
        // exact sum of ordered-pair contributions.
        const double weight = nc * ncp / pair_denom;
        const double contribution = weight * v;
        flow_sum.add(contribution);
        flow_sum.add(contribution);
        res.pair_table(c, cp) += contribution;
        res.pair_table(cp, c) += contribution;
      }
    }
    res.flows[s] = flow_sum.value();
  }

  double total = 0.0;
  for (const double f : res.flows) total += f;
  res.total = total;
  return res;
}

struct LabelInput {
  const std::vector<int>* ids;
  int k;
  const std::vector<std::string>* names;  // may be null
  bool pseudo;
};

void validate_labelled_input(const Matrix& reps, const LabelInput& in) {
  if (reps.rows() < 1 || reps.cols() < 1) {
    fail(ErrorCode::InvalidArgument, "representation matrix is empty");
  }
  if (!reps.allFinite()) {
    fail(ErrorCode::NonFiniteValue,
         "representation matrix contains NaN or Inf entries");
  }
  if (static_cast<Index>(in.ids->size()) != reps.rows()) {
    fail(ErrorCode::LengthMismatch,
         "label count " + std::to_string(in.ids->size()) +
             " does not match row count " + std::to_string(reps.rows()));
  }
  if (in.k < 1) {
    fail(ErrorCode::InvalidArgument, "class count must be >= 1");
  }
  std::vector<std::int64_t> counts(static_cast<std::size_t>(in.k), 0);
  for (const int c : *in.ids) {
    if (c < 0 || c >= in.k) {
      fail(ErrorCode::InvalidArgument,
           "label id " + std::to_string(c) + " outside [0, " +
               std::to_string(in.k) + ")");
    }
    counts[static_cast<std::size_t>(c)]++;
  }
  if (in.k == 1) return;  // single class: vacuous flow, no size demands
  for (int c = 0; c < in.k; ++c) {
    if (counts[static_cast<std::size_t>(c)] >= 2) continue;
    std::string who = in.pseudo ? "cluster " : "class ";
    who += std::to_string(c);
    if (in.names && static_cast<std::size_t>(c) < in.names->size()) {
      who += " ('" + (*in.names)[static_cast<std::size_t>(c)] + "')";
    }
    fail(in.pseudo ? ErrorCode::ClusterTooSmall : ErrorCode::ClassTooSmall,
         who + " has " + std::to_string(counts[static_cast<std::size_t>(c)]) +
             " samples; the unbiased estimator needs >= 2");
  }
}

FlowReport flow_from_ids(const Matrix& reps, const LabelInput& in,
                         const std::vector<KernelSpec>& grid) {
  validate_grid(grid);
  validate_labelled_input(reps, in);

  const Index m = reps.rows();
  const auto order = detail::canonical_order(reps);
  Matrix x(m, reps.cols());
  std::vector<int> labels(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    x.row(i) = reps.row(src);
    labels[static_cast<std::size_t>(i)] = (*in.ids)[static_cast<std::size_t>(src)];
  }

  EngineResult engine = flow_engine(x, labels, in.k, grid);

  FlowReport report;
  report.m = m;
  report.class_count = in.k;
  report.total = engine.total;
  report.class_pair_table = std::move(engine.pair_table);
  report.per_bandwidth.reserve(grid.size());
  for (std::size_t s = 0; s < grid.size(); ++s) {
    report.per_bandwidth.push_back(BandwidthFlow{
        grid[s], engine.flows[s], engine.min_mmd2[s], engine.max_mmd2[s]});
  }
  if (in.k == 1) {
    report.warnings.push_back(
        "SingleClass: only one class present; the pair sum is empty and the "
        "flow is 0");
  }
  return report;
}

double total_flow_of_replicate(const Matrix& reps,
                               const std::vector<int>& labels, int k,
                               const std::vector<KernelSpec>& grid) {
  const Index m = reps.rows();
  const auto order = detail::canonical_order(reps);
  Matrix x(m, reps.cols());
  std::vector<int> lab(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    x.row(i) = reps.row(src);
    lab[static_cast<std::size_t>(i)] = labels[static_cast<std::size_t>(src)];
  }
  return flow_engine(x, lab, k, grid).total;
}

BootstrapResult bootstrap_from_ids(const Matrix& reps, const LabelInput& in,
                                   const std::vector<KernelSpec>& grid,
                                   int replicates, std::uint64_t seed) {
  if (replicates < 2) {
    fail(ErrorCode::InvalidArgument,
         "bootstrap needs >= 2 replicates, got " + std::to_string(replicates));
  }
  validate_grid(grid);
  validate_labelled_input(reps, in);

  const Index m = reps.rows();
  // Index sets in canonical row order: the drawn row *contents* (and hence
  // every replicate statistic) are invariant to input row permutations.
  const auto order = detail::canonical_order(reps);
  std::vector<std::vector<Index>> class_rows(static_cast<std::size_t>(in.k));
  for (Index i = 0; i < m; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    class_rows[static_cast<std::size_t>((*in.ids)[static_cast<std::size_t>(src)])]
        .push_back(src);
  }

  BootstrapResult result;
  result.samples.assign(static_cast<std::size_t>(replicates), 0.0);

  detail::parallel_for_blocks(replicates, [&](std::int64_t r) {
    detail::Rng rng(detail::derive_seed(seed, static_cast<std::uint64_t>(r)));
    Matrix draw(m, reps.cols());
    std::vector<int> labels(static_cast<std::size_t>(m));
    Index row = 0;
    for (int c = 0; c < in.k; ++c) {
      const auto& pool = class_rows[static_cast<std::size_t>(c)];
      const auto n_c = static_cast<std::uint64_t>(pool.size());
      for (std::uint64_t t = 0; t < n_c; ++t) {
        const Index src = pool[static_cast<std::size_t>(rng.below(n_c))];
        draw.row(row) = reps.row(src);
        labels[static_cast<std::size_t>(row)] = c;
        ++row;
      }
    }
    result.samples[static_cast<std::size_t>(r)] =
        total_flow_of_replicate(draw, labels, in.k, grid);
  });

  double mean = 0.0;
  for (const double s : result.samples) mean += s;
  mean /= static_cast<double>(replicates);
  result.mean = mean;

  const bool constant = std::all_of(
      result.samples.begin(), result.samples.end(), [&](double s) {
        return std::memcmp(&s, &result.samples[0], sizeof(double)) == 0;
      });
  if (constant) {
    result.std = 0.0;
  } else {
    detail::NeumaierSum ss;
    for (const double s : result.samples) {
      const double dev = s - mean;
      ss.add(dev * dev);
    }
    result.std = std::sqrt(ss.value() / static_cast<double>(replicates - 1));
  }
  return result;
}

}  // namespace

FlowReport transfer_flow(const Matrix& reps, const LabelVector& labels,
                         const std::vector<KernelSpec>& grid) {
  const LabelInput in{&labels.ids, labels.class_count,
                      labels.names.empty() ? nullptr : &labels.names, false};
  return flow_from_ids(reps, in, grid);
}

FlowReport transfer_flow(const ProbabilityMatrix& reps,
                         const LabelVector& labels,
                         const std::vector<KernelSpec>& grid) {
  return transfer_flow(reps.data, labels, grid);
}

FlowReport pseudo_transfer_flow(const Matrix& reps,
                                const PseudoLabelVector& pseudo,
                                const std::vector<KernelSpec>& grid) {
  const LabelInput in{&pseudo.ids, pseudo.cluster_count, nullptr, true};
  return flow_from_ids(reps, in, grid);
}

BootstrapResult bootstrap_flow(const Matrix& reps, const LabelVector& labels,
                               const std::vector<KernelSpec>& grid,
                               int replicates, std::uint64_t seed) {
  const LabelInput in{&labels.ids, labels.class_count,
                      labels.names.empty() ? nullptr : &labels.names, false};
  return bootstrap_from_ids(reps, in, grid, replicates, seed);
}

BootstrapResult bootstrap_flow(const Matrix& reps,
                               const PseudoLabelVector& pseudo,
                               const std::vector<KernelSpec>& grid,
                               int replicates, std::uint64_t seed) {
  const LabelInput in{&pseudo.ids, pseudo.cluster_count, nullptr, true};
  return bootstrap_from_ids(reps, in, grid, replicates, seed);
}

CompareResult flow_compare(const FlowReport& a, const FlowReport& b) {
  if (a.m != b.m) {
    fail(ErrorCode::MismatchedSampleCount,
         "reports cover " + std::to_string(a.m) + " and " +
             std::to_string(b.m) +
             " samples; totals are only comparable on the same sample set");
  }
  CompareResult result;
  result.gap = a.total - b.total;
  result.larger = result.gap > 0.0   ? FlowSource::A
                  : result.gap < 0.0 ? FlowSource::B
                                     : FlowSource::Tie;
  result.combined_std = (a.bootstrap ? a.bootstrap->std : 0.0) +
                        (b.bootstrap ? b.bootstrap->std : 0.0);
  result.inconclusive = result.larger == FlowSource::Tie ||
                        std::abs(result.gap) < result.combined_std;
  return result;
}

}  // namespace tflow
