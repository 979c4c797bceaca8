#pragma once

#include <utility>
#include <vector>

#include "imbtab/core/types.hpp"

namespace imbtab::gan {

enum class GanVariant { vanilla, copula };

/// Standard normal CDF.
double normal_cdf(double z);

/// Inverse standard normal CDF; rational approximation refined by one Halley
/// step, accurate to ~1e-15 over (0, 1).
double normal_quantile(double p);

/// Per-column map between feature space and the space the networks see.
/// vanilla: (x - mean) / std. copula: empirical CDF with midrank plotting
/// positions, then the inverse normal CDF, so marginals become standard
/// normal scores; inversion interpolates the stored quantile table and clamps
/// to the observed [min, max].
struct FeatureTransform {
  GanVariant variant = GanVariant::vanilla;
  Vector mean;                    // vanilla
  Vector std_dev;                 // vanilla; 0 marks a constant column
  std::vector<Vector> quantiles;  // copula; sorted ascending, one per column
  std::vector<Index> constant_cols;

  Index col_count() const;
  Matrix apply(const ConstMatrixRef& features) const;
  Matrix invert(const ConstMatrixRef& transformed) const;
};

/// Fits the transform on training rows and returns it with the transformed
/// matrix. Constant columns map to all-zero scores and are flagged.
std::pair<FeatureTransform, Matrix> fit_transform(const ConstMatrixRef& features,
                                                  GanVariant variant);

Matrix invert_transform(const FeatureTransform& transform,
                        const ConstMatrixRef& transformed);

}  // namespace imbtab::gan
