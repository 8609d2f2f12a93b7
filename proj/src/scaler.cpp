#include "impact/scaler.hpp"

#include <cmath>
#include <iostream>

namespace impact {

std::string to_string(ScalerKind kind) {
  return kind == ScalerKind::MinMax ? "minmax" : "standard";
}

ScalerKind scaler_kind_from_string(const std::string& s) {
  if (s == "minmax") return ScalerKind::MinMax;
  if (s == "standard") return ScalerKind::Standard;
  throw Error("scaler.UnknownKind", "unknown scaler kind '" + s + "'");
}

ScalerParams fit_scaler(const Dataset& ds, ScalerKind kind) {
  const std::size_t n = ds.n(), d = ds.dim();
  if (n == 0) throw Error("scaler.EmptyDataset", "cannot fit a scaler on zero rows");
  if (ds.has_missing())
    throw Error("scaler.MissingCells", "impute before fitting a scaler");

  ScalerParams p;
  p.kind = kind;
  p.a.resize(d);
  p.b.resize(d);
  for (const auto& meta : ds.column_meta) p.column_names.push_back(meta.name);

  for (std::size_t c = 0; c < d; ++c) {
    if (kind == ScalerKind::MinMax) {
      double lo = ds.features.at(0, c), hi = lo;
      for (std::size_t r = 1; r < n; ++r) {
        double v = ds.features.at(r, c);
        if (v < lo) lo = v;
        if (v > hi) hi = v;
      }
      p.a[c] = lo;
      p.b[c] = hi;
    } else {
      double sum = 0;
      for (std::size_t r = 0; r < n; ++r) sum += ds.features.at(r, c);
      double mean = sum / static_cast<double>(n);
      double sq = 0;
      for (std::size_t r = 0; r < n; ++r) {
        double dv = ds.features.at(r, c) - mean;
        sq += dv * dv;
      }
      p.a[c] = mean;
      p.b[c] = std::sqrt(sq / static_cast<double>(n));
    }
  }
  return p;
}

Dataset transform(const Dataset& ds, const ScalerParams& params) {
  const std::size_t n = ds.n(), d = ds.dim();
  if (d != params.dim())
    throw Error("scaler.ColumnLayoutMismatch",
                "dataset has " + std::to_string(d) + " feature columns, scaler was fit on " +
                    std::to_string(params.dim()));
  for (std::size_t c = 0; c < d; ++c)
    if (!params.column_names.empty() && params.column_names[c] != ds.column_meta[c].name)
      throw Error("scaler.ColumnLayoutMismatch",
                  "column " + std::to_string(c) + ": '" + ds.column_meta[c].name +
                      "' vs fitted '" + params.column_names[c] + "'");

  Dataset out = ds;
  for (std::size_t c = 0; c < d; ++c) {
    double denom = params.kind == ScalerKind::MinMax ? params.b[c] - params.a[c]
                                                     : params.b[c];
    if (denom == 0.0) {
      // Constant survey columns happen; keep them usable instead of failing.
      std::cerr << "warning: scaler column '" << ds.column_meta[c].name
                << "' is degenerate (zero range), mapping to 0\n";
      for (std::size_t r = 0; r < n; ++r) out.features.at(r, c) = 0.0;
      continue;
    }
    for (std::size_t r = 0; r < n; ++r)
      out.features.at(r, c) = (ds.features.at(r, c) - params.a[c]) / denom;
  }
  return out;
}

}  // namespace impact
