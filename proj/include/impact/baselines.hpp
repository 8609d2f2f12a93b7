#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "impact/dataset.hpp"
#include "impact/matrix.hpp"

namespace impact {

enum class BaselineKind { Knn, GaussianNb, BernoulliNb, Linear, Logistic };

std::string to_string(BaselineKind kind);
BaselineKind baseline_kind_from_string(const std::string& s);

struct BaselineSpec {
  BaselineKind kind = BaselineKind::Knn;
  int k = 5;                   // knn neighbor count
  double laplace_alpha = 1.0;  // bernoulli nb smoothing
  double learning_rate = 0.1;  // logistic
  int epochs = 2000;           // logistic
};

struct KnnModel {
  Matrix train_features;
  std::vector<double> train_labels;
  int k = 1;
};

struct GaussianNbModel {
  std::array<std::vector<double>, 2> mean;
  std::array<std::vector<double>, 2> var;  // population variance, floored
  std::array<double, 2> prior{};
};

struct BernoulliNbModel {
  std::array<std::vector<double>, 2> p;  // P(feature = 1 | class), smoothed
  std::array<double, 2> prior{};
  double alpha = 1.0;
  // Continuous features are binarized at this cut before counting. Survey
  // features are already 0/1; min-max scaled features split at mid-range.
  double binarize_at = 0.5;
};

struct LinearModel {
  std::vector<double> coef;
  double intercept = 0.0;
};

struct LogisticModel {
  std::vector<double> coef;
  double intercept = 0.0;
};

struct BaselineModel {
  std::variant<KnnModel, GaussianNbModel, BernoulliNbModel, LinearModel, LogisticModel>
      impl;

  BaselineKind kind() const;
  std::size_t dim() const;
};

struct ScoredLabel {
  double score = 0.0;
  int label = 0;
};

// Variant-specific estimation. Classifiers (everything but Linear) require
// both labels present and binary 0/1 targets.
BaselineModel fit_baseline(const Dataset& ds, const BaselineSpec& spec);

// Score semantics per variant: knn = positive-neighbor fraction, nb =
// posterior of class 1, linear = raw value, logistic = sigmoid output.
// Labels cut at 0.5, ties to the positive class.
ScoredLabel predict_baseline(const BaselineModel& m, std::span<const double> x);
std::vector<double> predict_scores(const BaselineModel& m, const Matrix& x);

// Log-loss of the logistic baseline and its analytic gradient, exposed so
// the finite-difference harness can check them like the trainer's.
double logistic_log_loss(const LogisticModel& m, const Dataset& ds);
std::pair<std::vector<double>, double> logistic_log_loss_gradient(const LogisticModel& m,
                                                                  const Dataset& ds);

}  // namespace impact
