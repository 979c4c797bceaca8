#include "imbtab/gan/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "imbtab/core/error.hpp"

namespace imbtab::gan {

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error("normal_quantile requires p in (0, 1)");
  }
  // Acklam's rational approximation.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Halley refinement against the high-precision CDF.
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

Index FeatureTransform::col_count() const {
  return variant == GanVariant::vanilla ? mean.size()
                                        : static_cast<Index>(quantiles.size());
}

namespace {

double copula_score(const Vector& sorted, double x) {
  const double* begin = sorted.data();
  const double* end = begin + sorted.size();
  const auto n = static_cast<double>(sorted.size());
  const auto less = static_cast<double>(std::lower_bound(begin, end, x) - begin);
  const auto not_greater = static_cast<double>(std::upper_bound(begin, end, x) - begin);
  // Midrank plotting position; exact knot hits for training values.
  double p = (less + (not_greater - less) / 2.0) / n;
  p = std::clamp(p, 0.5 / n, 1.0 - 0.5 / n);
  return normal_quantile(p);
}

double copula_value(const Vector& sorted, double z) {
  const auto n = sorted.size();
  const double p = normal_cdf(z);
  const auto pos = [n](Index i) {
    return (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  };
  if (p <= pos(0)) return sorted[0];
  if (p >= pos(n - 1)) return sorted[n - 1];
  // p is between pos(j) and pos(j+1); interpolate.
  const auto j = static_cast<Index>(p * static_cast<double>(n) - 0.5);
  const Index lo = std::clamp<Index>(j, 0, n - 2);
  const double t = (p - pos(lo)) / (pos(lo + 1) - pos(lo));
  return sorted[lo] + t * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

Matrix FeatureTransform::apply(const ConstMatrixRef& features) const {
  if (features.cols() != col_count()) {
    throw ShapeMismatchError("transform expects " + std::to_string(col_count()) +
                             " columns, got " + std::to_string(features.cols()));
  }
  Matrix out(features.rows(), features.cols());
  if (variant == GanVariant::vanilla) {
    for (Index c = 0; c < features.cols(); ++c) {
      if (std_dev[c] > 0.0) {
        out.col(c) = (features.col(c).array() - mean[c]) / std_dev[c];
      } else {
        out.col(c).setZero();
      }
    }
  } else {
    for (Index c = 0; c < features.cols(); ++c) {
      const auto& table = quantiles[static_cast<std::size_t>(c)];
      if (table[0] == table[table.size() - 1]) {
        out.col(c).setZero();  // constant column
        continue;
      }
      for (Index r = 0; r < features.rows(); ++r) {
        out(r, c) = copula_score(table, features(r, c));
      }
    }
  }
  return out;
}

Matrix FeatureTransform::invert(const ConstMatrixRef& transformed) const {
  if (transformed.cols() != col_count()) {
    throw ShapeMismatchError("transform expects " + std::to_string(col_count()) +
                             " columns, got " + std::to_string(transformed.cols()));
  }
  Matrix out(transformed.rows(), transformed.cols());
  if (variant == GanVariant::vanilla) {
    for (Index c = 0; c < transformed.cols(); ++c) {
      out.col(c) = transformed.col(c).array() * std_dev[c] + mean[c];
    }
  } else {
    for (Index c = 0; c < transformed.cols(); ++c) {
      const auto& table = quantiles[static_cast<std::size_t>(c)];
      for (Index r = 0; r < transformed.rows(); ++r) {
        out(r, c) = copula_value(table, transformed(r, c));
      }
    }
  }
  return out;
}

std::pair<FeatureTransform, Matrix> fit_transform(const ConstMatrixRef& features,
                                                  GanVariant variant) {
  if (features.rows() < 2) throw Error("fit_transform needs at least 2 rows");

  FeatureTransform t;
  t.variant = variant;
  const Index n = features.rows();
  const Index d = features.cols();

  if (variant == GanVariant::vanilla) {
    t.mean = features.colwise().mean();
    const Matrix centered = features.rowwise() - t.mean.transpose();
    t.std_dev = (centered.colwise().squaredNorm() / static_cast<double>(n))
                    .array()
                    .sqrt();
    for (Index c = 0; c < d; ++c) {
      if (t.std_dev[c] == 0.0) t.constant_cols.push_back(c);
    }
  } else {
    t.quantiles.reserve(static_cast<std::size_t>(d));
    for (Index c = 0; c < d; ++c) {
      Vector sorted = features.col(c);
      std::sort(sorted.data(), sorted.data() + sorted.size());
      if (sorted[0] == sorted[n - 1]) t.constant_cols.push_back(c);
      t.quantiles.push_back(std::move(sorted));
    }
  }
  return {t, t.apply(features)};
}

Matrix invert_transform(const FeatureTransform& transform,
                        const ConstMatrixRef& transformed) {
  return transform.invert(transformed);
}

}  // namespace imbtab::gan
