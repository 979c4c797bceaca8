#include "imbtab/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "imbtab/core/error.hpp"

namespace imbtab::metrics {
namespace {

struct Ratio {
  double value = 0.0;
  bool defined = true;
};

Ratio ratio(double num, double den) {
  if (den == 0.0) return {0.0, false};
  return {num / den, true};
}

}  // namespace

ConfusionMatrix confusion_matrix(const IntVector& y_true, const IntVector& y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw LengthMismatchError("y_true has " + std::to_string(y_true.size()) +
                              " rows, y_pred has " + std::to_string(y_pred.size()));
  }
  ConfusionMatrix cm;
  for (Index i = 0; i < y_true.size(); ++i) {
    if (y_true[i] == 1) {
      (y_pred[i] == 1 ? cm.tp : cm.fn)++;
    } else {
      (y_pred[i] == 1 ? cm.fp : cm.tn)++;
    }
  }
  return cm;
}

MetricsReport binary_metrics(const IntVector& y_true, const IntVector& y_pred) {
  if (y_true.size() == 0) throw EmptyInputError("binary_metrics on empty input");
  const ConfusionMatrix cm = confusion_matrix(y_true, y_pred);
  const auto n = static_cast<double>(cm.total());

  MetricsReport r;
  r.accuracy = static_cast<double>(cm.tp + cm.tn) / n;

  const Ratio precision = ratio(static_cast<double>(cm.tp),
                                static_cast<double>(cm.tp + cm.fp));
  const Ratio recall = ratio(static_cast<double>(cm.tp),
                             static_cast<double>(cm.tp + cm.fn));
  const Ratio f1 = ratio(2.0 * precision.value * recall.value,
                         precision.value + recall.value);
  r.precision = precision.value;
  r.recall = recall.value;
  r.f1 = f1.value;
  if (!precision.defined) r.undefined.push_back("precision");
  if (!recall.defined) r.undefined.push_back("recall");
  if (!f1.defined) r.undefined.push_back("f1");

  // Weighted F1: support-weighted mean of per-class F1, class 0 scored with
  // itself as the positive class (confusion matrix transposed about tp/tn).
  const Ratio precision0 = ratio(static_cast<double>(cm.tn),
                                 static_cast<double>(cm.tn + cm.fn));
  const Ratio recall0 = ratio(static_cast<double>(cm.tn),
                              static_cast<double>(cm.tn + cm.fp));
  const Ratio f1_0 = ratio(2.0 * precision0.value * recall0.value,
                           precision0.value + recall0.value);
  const auto support1 = static_cast<double>(cm.tp + cm.fn);
  const auto support0 = static_cast<double>(cm.tn + cm.fp);
  r.weighted_f1 = (support1 * f1.value + support0 * f1_0.value) / n;

  double sq = 0.0;
  for (Index i = 0; i < y_true.size(); ++i) {
    const double diff = static_cast<double>(y_true[i] - y_pred[i]);
    sq += diff * diff;
  }
  r.rmse = std::sqrt(sq / n);
  return r;
}

MetricsReport mean_report(const std::vector<MetricsReport>& reports) {
  if (reports.empty()) throw EmptyInputError("mean_report on empty input");
  MetricsReport mean;
  for (const auto& r : reports) {
    mean.accuracy += r.accuracy;
    mean.precision += r.precision;
    mean.recall += r.recall;
    mean.f1 += r.f1;
    mean.weighted_f1 += r.weighted_f1;
    mean.rmse += r.rmse;
    for (const auto& name : r.undefined) {
      if (std::find(mean.undefined.begin(), mean.undefined.end(), name) ==
          mean.undefined.end()) {
        mean.undefined.push_back(name);
      }
    }
  }
  const auto n = static_cast<double>(reports.size());
  mean.accuracy /= n;
  mean.precision /= n;
  mean.recall /= n;
  mean.f1 /= n;
  mean.weighted_f1 /= n;
  mean.rmse /= n;
  return mean;
}

}  // namespace imbtab::metrics
