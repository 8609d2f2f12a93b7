#pragma once

#include <vector>

#include "impact/dataset.hpp"

namespace impact {

enum class ScalerKind { MinMax, Standard };

std::string to_string(ScalerKind kind);
ScalerKind scaler_kind_from_string(const std::string& s);

// Fitted per-column statistics for min-max normalization
// z' = (z - min) / (max - min) and z-score standardization
// z' = (z - mean) / std. Population std (divisor N); recorded here because
// the formulas alone do not pin the convention.
struct ScalerParams {
  ScalerKind kind = ScalerKind::MinMax;
  std::vector<std::string> column_names;
  // minmax: a = min, b = max.  standard: a = mean, b = std.
  std::vector<double> a;
  std::vector<double> b;

  std::size_t dim() const { return a.size(); }
};

// Statistics per feature column. Fit on the training split only; the target
// column is untouched.
ScalerParams fit_scaler(const Dataset& ds, ScalerKind kind);

// Applies the fitted map. Degenerate columns (max == min or std == 0) map to
// zero everywhere; a warning is emitted once per column.
Dataset transform(const Dataset& ds, const ScalerParams& params);

}  // namespace impact
