#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"

#include "impact/baselines.hpp"
#include "impact/impact_model.hpp"
#include "impact/scaler.hpp"

namespace impact {

// One envelope for every trained model: a "model" tag names the variant and
// the optional "scaler" block carries the training-time scaling so inference
// reproduces it bit for bit. Doubles are emitted at shortest round-trip
// precision and object keys are sorted, so equal models give equal bytes.

nlohmann::json scaler_to_json(const ScalerParams& p);
ScalerParams scaler_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const ImpactModel& m, const ScalerParams* scaler);
nlohmann::json baseline_to_json(const BaselineModel& m, const ScalerParams* scaler);

struct SavedModel {
  std::variant<ImpactModel, BaselineModel> value;
  std::optional<ScalerParams> scaler;

  bool is_impact() const { return value.index() == 0; }
  const ImpactModel& impact() const { return std::get<ImpactModel>(value); }
  const BaselineModel& baseline() const { return std::get<BaselineModel>(value); }
  std::string tag() const;
};

SavedModel saved_model_from_json(const nlohmann::json& j);

std::string read_file(const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

// Whole-file atomic: write to a sibling temp file, then rename over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& j);

// 16-hex-digit FNV-1a digest used to stamp input files into reports.
std::string content_hash_hex(std::string_view bytes);

}  // namespace impact
