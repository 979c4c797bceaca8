#pragma once

#include <vector>

#include "imbtab/core/types.hpp"

namespace imbtab::metrics {

struct ConfusionMatrix {
  Index tp = 0, fp = 0, tn = 0, fn = 0;

  Index total() const { return tp + fp + tn + fn; }
};

ConfusionMatrix confusion_matrix(const IntVector& y_true, const IntVector& y_pred);

/// Binary classification metrics with class 1 as positive. Ratios with a zero
/// denominator are reported as 0 and their names listed in `undefined`, so
/// reports stay aggregatable.
struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double weighted_f1 = 0.0;
  double rmse = 0.0;
  std::vector<std::string> undefined;
};

MetricsReport binary_metrics(const IntVector& y_true, const IntVector& y_pred);

/// Unweighted mean over reports; the undefined union is carried through.
MetricsReport mean_report(const std::vector<MetricsReport>& reports);

}  // namespace imbtab::metrics
