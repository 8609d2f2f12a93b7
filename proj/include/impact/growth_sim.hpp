#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "impact/dataset.hpp"
#include "impact/impact_model.hpp"

namespace impact {

enum class GrowthKind { Malthusian, Logistic, Competition };

std::string to_string(GrowthKind kind);
GrowthKind growth_kind_from_string(const std::string& s);

// How the competition model obtains its exogenous series x(t): either a
// user-supplied trajectory sampled at the step grid (linearly interpolated
// at RK4 substages), or a second logistic state integrated alongside y.
enum class ExogenousMode { Series, CoupledLogistic };

struct GrowthParams {
  double r = 1.0;
  double k = 1.0;
  double y0 = 1.0;

  // Competition coupling: dy/dt = r y - w_y y^2 - w x y.
  double w = 0.0;
  double w_y = 0.0;
  ExogenousMode x_mode = ExogenousMode::CoupledLogistic;
  std::vector<double> x_series;  // used when x_mode == Series
  double x0 = 1.0;
  double r_x = 1.0;
  double k_x = 1.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> y;
  std::vector<double> x;      // empty unless the competition model ran
  std::vector<double> rates;  // dy/dt at each recorded point

  std::string to_csv() const;  // time,y[,x],dydt
};

// Fixed-step classical RK4. Fixed step keeps trajectories bit-reproducible;
// everything this simulator integrates is smooth and short.
Trajectory simulate(const GrowthParams& params, GrowthKind kind, double dt, int steps);

// Closed-form logistic solution k / (1 + ((k - y0)/y0) e^{-rt}), the test
// oracle for the logistic integrator.
double logistic_closed_form(double r, double k, double y0, double t);

// Tabular data from a known generator model: features uniform in [0,1],
// targets predict(x) + gaussian noise. The generator's JSON is carried as
// dataset provenance.
Dataset make_synthetic_dataset(const ImpactModel& generator, std::size_t n,
                               double noise_std, std::uint64_t seed);

}  // namespace impact
