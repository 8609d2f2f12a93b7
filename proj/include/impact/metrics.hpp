#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "json.hpp"

#include "impact/dataset.hpp"

namespace impact {

// Confusion-derived scores at a fixed threshold. A zero-denominator
// precision, recall or f1 is reported as 0 with its degenerate flag set, so
// reports stay numeric and machine-readable.
struct ClassificationScores {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f1_degenerate = false;
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;  // +-inf at the sweep's sentinel endpoints
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

struct RegressionScores {
  double mse = 0.0;
  double mae = 0.0;
  double rmse = 0.0;
};

struct CurvePoint {
  std::size_t train_size = 0;
  double train_score = 0.0;
  double cv_score = 0.0;
};

// Labels are compared against 1.0: exactly 1 is the positive class,
// everything else counts as negative. Scores >= threshold predict positive.
ClassificationScores classification_report(const std::vector<double>& labels,
                                           const std::vector<double>& scores,
                                           double threshold);

// Threshold sweep over the sorted unique scores (descending) plus +-inf
// sentinels; tied scores collapse into one threshold. The trapezoidal area
// equals the pairwise win-plus-half-tie statistic.
RocCurve roc_auc(const std::vector<double>& labels, const std::vector<double>& scores);

RegressionScores regression_report(const std::vector<double>& truth,
                                   const std::vector<double>& pred);

enum class CurveScoring {
  Accuracy,  // scores thresholded at 0.5 against labels
  RSquared,
};

// Trains on `train` and returns one score per row of `eval_x`.
using FitPredict =
    std::function<std::vector<double>(const Dataset& train, const Matrix& eval_x)>;

struct LearningCurveConfig {
  std::vector<double> fractions;  // ascending, each in (0, 1]
  int folds = 5;
  std::uint64_t seed = 1;
  CurveScoring scoring = CurveScoring::Accuracy;
};

// For each fraction: subsample that share of the rows (seeded shuffle), run
// k-fold cross-validation on the subsample with round-robin fold assignment,
// and record the mean in-fold and held-out scores.
std::vector<CurvePoint> learning_curve(const FitPredict& fit_predict, const Dataset& ds,
                                       const LearningCurveConfig& cfg);

// Everything a single evaluation can produce; absent parts stay null in JSON.
struct EvalReport {
  std::optional<ClassificationScores> classification;
  std::optional<RocCurve> roc;
  std::optional<RegressionScores> regression;
  std::vector<CurvePoint> curve;

  nlohmann::json to_json() const;
};

// "fpr,tpr,threshold" rows; sentinel thresholds print as inf / -inf.
std::string roc_csv(const RocCurve& roc);
// "train_size,train_score,cv_score" rows.
std::string curve_csv(const std::vector<CurvePoint>& curve);

}  // namespace impact
