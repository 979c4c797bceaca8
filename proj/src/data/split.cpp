#include "imbtab/data/split.hpp"

#include <algorithm>
#include <cmath>

#include "imbtab/core/error.hpp"
#include "imbtab/core/rng.hpp"

namespace imbtab::data {

std::vector<Index> FoldAssignment::validation_rows(int fold) const {
  std::vector<Index> rows;
  for (std::size_t i = 0; i < fold_of_row.size(); ++i) {
    if (fold_of_row[i] == fold) rows.push_back(static_cast<Index>(i));
  }
  return rows;
}

std::vector<Index> FoldAssignment::training_rows(int fold) const {
  std::vector<Index> rows;
  for (std::size_t i = 0; i < fold_of_row.size(); ++i) {
    if (fold_of_row[i] != fold) rows.push_back(static_cast<Index>(i));
  }
  return rows;
}

FoldAssignment stratified_kfold(const Table& t, int k, std::uint64_t seed) {
  if (k < 2) throw Error("k must be >= 2");
  FoldAssignment assignment;
  assignment.k = k;
  assignment.fold_of_row.assign(static_cast<std::size_t>(t.row_count()), -1);

  Rng rng(seed);
  // Shuffle each class with its own stream, then deal round-robin. The deal
  // position carries over between classes so overall fold sizes stay within
  // one row of each other.
  int next_fold = 0;
  for (int label : {0, 1}) {
    auto rows = rows_with_label(t, label);
    if (static_cast<int>(rows.size()) < k) {
      throw TooFewRowsPerClassError("class " + std::to_string(label) + " has " +
                                    std::to_string(rows.size()) + " rows, need >= " +
                                    std::to_string(k));
    }
    Rng stream = rng.split(static_cast<std::uint64_t>(label));
    stream.shuffle(rows);
    for (Index row : rows) {
      assignment.fold_of_row[static_cast<std::size_t>(row)] = next_fold;
      next_fold = (next_fold + 1) % k;
    }
  }
  return assignment;
}

std::pair<Table, Table> stratified_split(const Table& t, double test_fraction,
                                         std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error("test_fraction must be in (0, 1)");
  }

  Rng rng(seed);
  std::vector<Index> train_rows;
  std::vector<Index> test_rows;
  for (int label : {0, 1}) {
    auto rows = rows_with_label(t, label);
    const auto n_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(rows.size())));
    if (!rows.empty() && (n_test == 0 || n_test == rows.size())) {
      throw DegenerateSplitError("class " + std::to_string(label) +
                                 " would have an empty side at fraction " +
                                 std::to_string(test_fraction));
    }
    Rng stream = rng.split(static_cast<std::uint64_t>(label));
    stream.shuffle(rows);
    test_rows.insert(test_rows.end(), rows.begin(), rows.begin() + static_cast<long>(n_test));
    train_rows.insert(train_rows.end(), rows.begin() + static_cast<long>(n_test), rows.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {select_rows(t, train_rows), select_rows(t, test_rows)};
}

}  // namespace imbtab::data
