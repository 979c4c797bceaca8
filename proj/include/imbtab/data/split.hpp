#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "imbtab/data/table.hpp"

namespace imbtab::data {

struct FoldAssignment {
  int k = 0;
  std::vector<int> fold_of_row;

  std::vector<Index> validation_rows(int fold) const;
  std::vector<Index> training_rows(int fold) const;
};

/// Stratified k-fold assignment: each class is shuffled independently from a
/// seed-derived stream and dealt round-robin, so fold sizes differ by at most
/// one row overall and per class.
FoldAssignment stratified_kfold(const Table& t, int k, std::uint64_t seed);

/// (train, test) split preserving class ratios within one row per class.
/// Throws DegenerateSplitError if either side would lose a class entirely.
std::pair<Table, Table> stratified_split(const Table& t, double test_fraction,
                                         std::uint64_t seed);

}  // namespace imbtab::data
