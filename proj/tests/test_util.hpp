#pragma once

#include <string>
#include <vector>

#include "imbtab/core/rng.hpp"
#include "imbtab/data/table.hpp"

namespace imbtab::test {

inline data::Table make_table(const std::vector<std::vector<double>>& rows,
                              const std::vector<int>& labels,
                              std::vector<std::string> names = {}) {
  data::Table t;
  const auto n = static_cast<Index>(rows.size());
  const Index d = n > 0 ? static_cast<Index>(rows[0].size()) : 0;
  if (names.empty()) {
    for (Index c = 0; c < d; ++c) names.push_back("f" + std::to_string(c));
  }
  t.feature_names = std::move(names);
  t.features.resize(n, d);
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < d; ++c) {
      t.features(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
  }
  t.labels.resize(n);
  for (Index r = 0; r < n; ++r) t.labels[r] = labels[static_cast<std::size_t>(r)];
  return t;
}

/// Random table with the given class sizes; features are standard normal.
inline data::Table random_table(Index n_class0, Index n_class1, Index n_features,
                                std::uint64_t seed) {
  data::Table t;
  for (Index c = 0; c < n_features; ++c) t.feature_names.push_back("f" + std::to_string(c));
  const Index n = n_class0 + n_class1;
  t.features.resize(n, n_features);
  t.labels.resize(n);
  Rng rng(seed);
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < n_features; ++c) t.features(r, c) = rng.normal();
    t.labels[r] = r < n_class0 ? 0 : 1;
  }
  return t;
}

}  // namespace imbtab::test
