#include "impact/growth_sim.hpp"

#include <cmath>
#include <sstream>

#include "impact/rng.hpp"
#include "impact/serialize.hpp"

namespace impact {

std::string to_string(GrowthKind kind) {
  switch (kind) {
    case GrowthKind::Malthusian: return "malthusian";
    case GrowthKind::Logistic: return "logistic";
    case GrowthKind::Competition: return "competition";
  }
  return "?";
}

GrowthKind growth_kind_from_string(const std::string& s) {
  if (s == "malthusian") return GrowthKind::Malthusian;
  if (s == "logistic") return GrowthKind::Logistic;
  if (s == "competition") return GrowthKind::Competition;
  throw Error("growth_sim.UnknownKind", "unknown growth model '" + s + "'");
}

std::string Trajectory::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  const bool with_x = !x.empty();
  out << (with_x ? "time,y,x,dydt\n" : "time,y,dydt\n");
  for (std::size_t i = 0; i < times.size(); ++i) {
    out << times[i] << ',' << y[i] << ',';
    if (with_x) out << x[i] << ',';
    out << rates[i] << '\n';
  }
  return out.str();
}

namespace {

struct State {
  double y;
  double x;  // ignored outside the coupled competition model
};

// Piecewise-linear read of the user series at an arbitrary time.
double series_at(const std::vector<double>& series, double dt, double t) {
  double pos = t / dt;
  auto i = static_cast<std::size_t>(pos);
  if (i >= series.size() - 1) return series.back();
  double frac = pos - static_cast<double>(i);
  return series[i] + frac * (series[i + 1] - series[i]);
}

}  // namespace

Trajectory simulate(const GrowthParams& params, GrowthKind kind, double dt, int steps) {
  if (!(dt > 0.0)) throw Error("growth_sim.InvalidConfig", "dt must be positive");
  if (steps < 1) throw Error("growth_sim.InvalidConfig", "steps must be >= 1");
  if (!(params.y0 > 0.0)) throw Error("growth_sim.InvalidConfig", "y0 must be positive");
  if (!(params.k > 0.0)) throw Error("growth_sim.InvalidConfig", "k must be positive");

  const bool coupled = kind == GrowthKind::Competition &&
                       params.x_mode == ExogenousMode::CoupledLogistic;
  const bool series = kind == GrowthKind::Competition &&
                      params.x_mode == ExogenousMode::Series;
  if (series && params.x_series.size() < static_cast<std::size_t>(steps) + 1)
    throw Error("growth_sim.InvalidConfig",
                "x series needs steps+1 = " + std::to_string(steps + 1) + " samples, got " +
                    std::to_string(params.x_series.size()));

  auto rhs = [&](double t, const State& s) -> State {
    State d{0.0, 0.0};
    switch (kind) {
      case GrowthKind::Malthusian:
        d.y = params.r * s.y;
        break;
      case GrowthKind::Logistic:
        d.y = params.r * s.y * (1.0 - s.y / params.k);
        break;
      case GrowthKind::Competition: {
        double xv = coupled ? s.x : series_at(params.x_series, dt, t);
        d.y = params.r * s.y - params.w_y * s.y * s.y - params.w * xv * s.y;
        if (coupled) d.x = params.r_x * s.x * (1.0 - s.x / params.k_x);
        break;
      }
    }
    return d;
  };

  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.y.reserve(steps + 1);
  traj.rates.reserve(steps + 1);
  if (kind == GrowthKind::Competition) traj.x.reserve(steps + 1);

  State s{params.y0, coupled ? params.x0 : 0.0};
  for (int step = 0; step <= steps; ++step) {
    double t = dt * static_cast<double>(step);
    if (kind == GrowthKind::Competition && !coupled)
      s.x = series_at(params.x_series, dt, t);
    State d = rhs(t, s);
    traj.times.push_back(t);
    traj.y.push_back(s.y);
    traj.rates.push_back(d.y);
    if (kind == GrowthKind::Competition) traj.x.push_back(s.x);
    if (!std::isfinite(s.y) || (coupled && !std::isfinite(s.x)))
      throw Error("growth_sim.NonFiniteState",
                  "state became non-finite at step " + std::to_string(step));
    if (step == steps) break;

    State k1 = d;
    State s2{s.y + 0.5 * dt * k1.y, s.x + 0.5 * dt * k1.x};
    State k2 = rhs(t + 0.5 * dt, s2);
    State s3{s.y + 0.5 * dt * k2.y, s.x + 0.5 * dt * k2.x};
    State k3 = rhs(t + 0.5 * dt, s3);
    State s4{s.y + dt * k3.y, s.x + dt * k3.x};
    State k4 = rhs(t + dt, s4);
    s.y += dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
    if (coupled) s.x += dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
  }
  return traj;
}

double logistic_closed_form(double r, double k, double y0, double t) {
  return k / (1.0 + (k - y0) / y0 * std::exp(-r * t));
}

Dataset make_synthetic_dataset(const ImpactModel& generator, std::size_t n,
                               double noise_std, std::uint64_t seed) {
  generator.validate();
  if (noise_std < 0.0)
    throw Error("growth_sim.InvalidConfig", "noise_std must be non-negative");
  const std::size_t d = generator.dim();
  Dataset ds;
  ds.features = Matrix(n, d);
  ds.target.resize(n);
  for (std::size_t c = 0; c < d; ++c)
    ds.column_meta.push_back({"x" + std::to_string(c), ColumnKind::Numeric});

  SplitMix64 feat_rng(derive_seed(seed, "synthetic.features"));
  SplitMix64 noise_rng(derive_seed(seed, "synthetic.noise"));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) ds.features.at(r, c) = feat_rng.uniform();
    double clean = predict(generator, ds.features.row(r));
    ds.target[r] = noise_std > 0.0 ? clean + noise_rng.gaussian(0.0, noise_std) : clean;
  }
  ds.provenance = model_to_json(generator, nullptr).dump();
  return ds;
}

}  // namespace impact
