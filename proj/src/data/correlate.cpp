#include "imbtab/data/correlate.hpp"

#include <cmath>

#include "imbtab/core/error.hpp"

namespace imbtab::data {

Matrix pearson_correlation(const ConstMatrixRef& features) {
  const Index n = features.rows();
  const Index d = features.cols();
  if (n < 2) throw Error("pearson_correlation needs at least 2 rows");

  const Matrix centered = features.rowwise() - features.colwise().mean();
  const Vector ss = centered.colwise().squaredNorm();  // n * variance
  const Vector scale = ss.array().sqrt();

  Matrix r(d, d);
  for (Index j = 0; j < d; ++j) {
    r(j, j) = 1.0;
    for (Index i = 0; i < j; ++i) {
      double value = 0.0;
      if (scale[i] > 0.0 && scale[j] > 0.0) {
        value = centered.col(i).dot(centered.col(j)) / (scale[i] * scale[j]);
        value = std::clamp(value, -1.0, 1.0);
      }
      r(i, j) = value;
      r(j, i) = value;
    }
  }
  return r;
}

std::vector<Index> constant_columns(const ConstMatrixRef& features) {
  std::vector<Index> out;
  for (Index c = 0; c < features.cols(); ++c) {
    if (features.rows() == 0 ||
        (features.col(c).array() == features(0, c)).all()) {
      out.push_back(c);
    }
  }
  return out;
}

std::pair<Table, PruneReport> prune_correlated(const Table& t, double threshold,
                                               bool use_absolute) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error("correlation threshold must be in (0, 1]");
  }

  PruneReport report;
  report.threshold = threshold;
  report.use_absolute = use_absolute;

  const Matrix r = pearson_correlation(t.features);

  // Left-to-right scan; each column is tested against surviving earlier
  // columns only, which keeps the rule idempotent and avoids pruning chains.
  std::vector<Index> kept;
  for (Index j = 0; j < t.col_count(); ++j) {
    bool drop = false;
    for (Index i : kept) {
      const double value = use_absolute ? std::abs(r(i, j)) : r(i, j);
      if (value > threshold) {
        report.dropped.push_back({t.feature_names[static_cast<std::size_t>(i)],
                                  t.feature_names[static_cast<std::size_t>(j)],
                                  r(i, j)});
        drop = true;
        break;
      }
    }
    if (!drop) kept.push_back(j);
  }

  Table pruned;
  pruned.features.resize(t.row_count(), static_cast<Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    pruned.features.col(static_cast<Index>(k)) = t.features.col(kept[k]);
    pruned.feature_names.push_back(t.feature_names[static_cast<std::size_t>(kept[k])]);
  }
  pruned.labels = t.labels;
  report.remaining_names = pruned.feature_names;
  return {std::move(pruned), std::move(report)};
}

}  // namespace imbtab::data
