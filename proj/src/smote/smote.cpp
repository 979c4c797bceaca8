#include "imbtab/smote/smote.hpp"

#include <algorithm>
#include <cmath>

#include "imbtab/core/error.hpp"
#include "imbtab/core/rng.hpp"

namespace imbtab::smote {

ClassNeighbors knn_within_class(const data::Table& t, int label, int k,
                                bool standardize) {
  ClassNeighbors result;
  result.class_rows = data::rows_with_label(t, label);
  const auto n = static_cast<Index>(result.class_rows.size());
  if (n <= static_cast<Index>(k)) {
    throw ClassTooSmallError("class " + std::to_string(label) + " has " +
                             std::to_string(n) + " rows, need > k = " +
                             std::to_string(k));
  }

  Matrix points(n, t.col_count());
  for (Index i = 0; i < n; ++i) {
    points.row(i) = t.features.row(result.class_rows[static_cast<std::size_t>(i)]);
  }
  if (standardize) {
    const Matrix centered = points.rowwise() - points.colwise().mean();
    const Vector std_dev =
        (centered.colwise().squaredNorm() / static_cast<double>(n)).array().sqrt();
    for (Index c = 0; c < points.cols(); ++c) {
      if (std_dev[c] > 0.0) points.col(c) /= std_dev[c];
    }
  }

  // ||a-b||^2 via the Gram matrix; one pass instead of n^2 row subtractions.
  const Vector sq = points.rowwise().squaredNorm();
  const Matrix gram = points * points.transpose();

  result.neighbors.resize(static_cast<std::size_t>(n));
  std::vector<std::pair<double, Index>> order(static_cast<std::size_t>(n - 1));
  for (Index i = 0; i < n; ++i) {
    std::size_t m = 0;
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d2 = std::max(0.0, sq[i] + sq[j] - 2.0 * gram(i, j));
      order[m++] = {d2, j};
    }
    std::sort(order.begin(), order.end());  // distance, then lower row index
    auto& nn = result.neighbors[static_cast<std::size_t>(i)];
    nn.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      nn.push_back(result.class_rows[static_cast<std::size_t>(order[static_cast<std::size_t>(j)].second)]);
    }
  }
  return result;
}

data::Table smote_balance(const data::Table& t, const SmoteConfig& cfg) {
  const auto counts = data::class_counts(t);
  const int minority = data::minority_label(t);
  const Index minority_count = counts.at(minority);
  const Index target = cfg.target_count.value_or(counts.at(1 - minority));
  const Index n_synthetic = target - minority_count;
  if (n_synthetic <= 0) return t;

  const auto knn = knn_within_class(t, minority, cfg.k_neighbors,
                                    cfg.standardize_distances);
  const auto n_minority = static_cast<std::uint64_t>(knn.class_rows.size());

  data::Table out;
  out.feature_names = t.feature_names;
  out.features.resize(t.row_count() + n_synthetic, t.col_count());
  out.features.topRows(t.row_count()) = t.features;
  out.labels.resize(t.row_count() + n_synthetic);
  out.labels.head(t.row_count()) = t.labels;

  // One counter-derived stream per synthetic sample, so output is identical
  // however samples are scheduled.
  Rng rng(cfg.seed);
  for (Index s = 0; s < n_synthetic; ++s) {
    Rng stream = rng.split(static_cast<std::uint64_t>(s));
    const auto base = static_cast<std::size_t>(stream.uniform_int(n_minority));
    const auto& nn = knn.neighbors[base];
    const Index neighbor = nn[static_cast<std::size_t>(
        stream.uniform_int(static_cast<std::uint64_t>(nn.size())))];
    const double u = stream.uniform();

    const Index base_row = knn.class_rows[base];
    out.features.row(t.row_count() + s) =
        t.features.row(base_row) +
        u * (t.features.row(neighbor) - t.features.row(base_row));
    out.labels[t.row_count() + s] = minority;
  }
  return out;
}

}  // namespace imbtab::smote
