#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "impact/impact_model.hpp"
#include "impact/kernels.hpp"

namespace impact {

struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 2000;
  bool learn_r = false;   // optimize r, or freeze it at its init value
  std::uint64_t init_seed = 1;
  double l2 = 0.0;
  int early_stop_patience = 0;       // active only with a validation slice
  double validation_fraction = 0.0;  // in [0, 0.5]
  int degree = 1;
  double threshold = 0.5;

  void validate() const;
};

struct EpochRecord {
  double train_loss = 0.0;
  double validation_loss = std::numeric_limits<double>::quiet_NaN();
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  bool used_validation = false;
  bool r_learned = false;   // whether r was optimized or frozen at init
  std::string to_csv() const;  // epoch,train_loss,validation_loss
};

// Rate of natural increase and carrying capacity from the target range:
//   r = ln(max(y)/min(y)) / (N - 1),   k = max(y) * (1 + 1e-6)
// The small inflation keeps k strictly above max(y) and the prediction away
// from its pole. Requires all y > 0 and N >= 2.
std::pair<double, double> init_rni(const std::vector<double>& y);

double loss(const ImpactModel& m, const Dataset& ds, double l2 = 0.0);

kernels::GradientBundle gradient(const ImpactModel& m, const Dataset& ds, double l2 = 0.0,
                                 bool with_r = false);

// Full-batch gradient descent on the MSE + ridge loss. Initialization:
// (r, k) from init_rni when every target is positive, otherwise r = 1,
// k = 1 and r is learned regardless of cfg.learn_r (standardized targets
// have no usable log-range); w uniform in +-0.01 from init_seed, w_y = 0,
// b = mean(y). With a validation slice, training stops after
// early_stop_patience epochs without improvement and the best-validation
// model is returned.
std::pair<ImpactModel, TrainHistory> fit_gd(const Dataset& ds, const TrainConfig& cfg);

// Ordinary least squares on the polynomial-expanded features via normal
// equations (symmetric positive-definite solve). The solution embeds into
// the impact form through the gauge w_y = 0, k = 1, r = 1, w_i = c_i, so
// predict() reproduces the linear fit exactly.
ImpactModel fit_least_squares(const Dataset& ds, int degree);

// The shared normal-equation path: minimizes |A c - y|^2 for the design
// matrix A = [x^degree columns, 1]. Returns d+1 coefficients, intercept
// last. Throws trainer.RankDeficient naming the offending column.
std::vector<double> solve_normal_equations(const Dataset& ds, int degree);

}  // namespace impact
