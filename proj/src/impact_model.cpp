#include "impact/impact_model.hpp"

#include <cmath>

namespace impact {

void ImpactModel::validate() const {
  if (k <= 0.0)
    throw Error("impact_model.InvalidModel", "carrying capacity k must be positive");
  if (degree < 1)
    throw Error("impact_model.InvalidModel", "polynomial degree j must be >= 1");
  if (std::abs(denominator()) <= kPoleEpsilon)
    throw Error("impact_model.PoleViolation",
                "|r - w_y*k| = " + std::to_string(std::abs(denominator())) +
                    " is inside the pole guard");
}

double predict(const ImpactModel& m, std::span<const double> x) {
  if (x.size() != m.dim())
    throw Error("impact_model.DimensionMismatch",
                "feature vector has " + std::to_string(x.size()) + " entries, model expects " +
                    std::to_string(m.dim()));
  const double denom = m.denominator();
  if (std::abs(denom) <= ImpactModel::kPoleEpsilon)
    throw Error("impact_model.PoleViolation", "|r - w_y*k| <= 1e-12");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += m.w[i] * ipow(x[i], m.degree);
  return m.k * s / denom + m.b;
}

Classification classify(const ImpactModel& m, std::span<const double> x) {
  double score = predict(m, x);
  return {score >= m.threshold ? 1 : 0, score};
}

ImpactScoreResult impact_score(const ImpactModel& m, const Dataset& ds,
                               std::size_t excluded) {
  if (excluded >= m.dim())
    throw Error("impact_model.IndexOutOfRange",
                "excluded feature " + std::to_string(excluded) + " out of range, d = " +
                    std::to_string(m.dim()));
  if (ds.dim() != m.dim())
    throw Error("impact_model.DimensionMismatch",
                "dataset has " + std::to_string(ds.dim()) + " features, model expects " +
                    std::to_string(m.dim()));
  const double denom = m.denominator();
  if (std::abs(denom) <= ImpactModel::kPoleEpsilon)
    throw Error("impact_model.PoleViolation", "|r - w_y*k| <= 1e-12");

  const std::size_t n = ds.n();
  const double exponent = 2.0 / static_cast<double>(n);
  ImpactScoreResult res;
  res.per_row.resize(n);
  double sum = 0.0;
  for (std::size_t row = 0; row < n; ++row) {
    auto x = ds.features.row(row);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i == excluded) continue;
      s += m.w[i] * ipow(x[i], m.degree);
    }
    double reduced = m.k * s / denom + m.b;
    double imp = std::pow(std::abs(ds.target[row] - reduced), exponent);
    res.per_row[row] = imp;
    sum += imp;
  }
  res.aggregate = sum / static_cast<double>(n);
  return res;
}

}  // namespace impact
