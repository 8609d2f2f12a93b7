#pragma once

#include <span>
#include <vector>

#include "impact/dataset.hpp"

namespace impact {

// The impact-learning predictor, a rational form derived from competitive
// logistic growth:
//
//   y = k * sum_i(w_i * x_i^j) / (r - w_y * k) + b
//
// w holds the per-feature back-impact weights, w_y the target's
// self-impact, r the rate of natural increase and k the carrying capacity.
// Parameters only enter predictions through the effective coefficients
// c_i = k * w_i / (r - w_y * k), so distinct tuples can define the same
// predictor (gauge freedom); comparisons between models happen at the
// prediction level.
struct ImpactModel {
  std::vector<double> w;
  double w_y = 0.0;
  double b = 0.0;
  double r = 1.0;
  double k = 1.0;
  int degree = 1;          // polynomial degree j, uniform over features
  double threshold = 0.5;  // classification cut; score >= threshold -> 1

  // The prediction is singular where r == w_y * k. Anything closer to the
  // pole than this is treated as an error rather than returning +-inf.
  static constexpr double kPoleEpsilon = 1e-12;

  std::size_t dim() const { return w.size(); }
  double denominator() const { return r - w_y * k; }

  // Throws impact_model.InvalidModel / impact_model.PoleViolation.
  void validate() const;
};

// Evaluates the rational form on a single feature vector.
double predict(const ImpactModel& m, std::span<const double> x);

struct Classification {
  int label = 0;
  double score = 0.0;
};

// Thresholded prediction; ties go to the positive class. The raw score is
// returned for ROC sweeps.
Classification classify(const ImpactModel& m, std::span<const double> x);

struct ImpactScoreResult {
  std::vector<double> per_row;
  double aggregate = 0.0;  // mean over rows
};

// Per-feature impact: the reduced model omits feature `excluded` from the
// weighted sum and each row contributes |y' - reduced_pred|^(2/N). The base
// is taken as the absolute residual: a negative base under a fractional
// exponent has no real value, and the magnitude is what the measure ranks.
ImpactScoreResult impact_score(const ImpactModel& m, const Dataset& ds,
                               std::size_t excluded);

}  // namespace impact
