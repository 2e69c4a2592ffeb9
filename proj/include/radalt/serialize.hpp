#pragma once

#include "json.hpp"
#include "radalt/dataset.hpp"
#include "radalt/eval.hpp"
#include "radalt/nn/model.hpp"
#include "radalt/nn/train.hpp"

// ADL to_json/from_json pairs so config and metadata structs round-trip
// through nlohmann::json. from_json rejects unknown keys so config typos
// fail loudly instead of silently using defaults.

namespace radalt {

using json = nlohmann::json;

/// Throws InvalidConfigError if obj contains a key not in allowed.
void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const char* context);

void to_json(json& j, const RadarParams& p);
void from_json(const json& j, RadarParams& p);

void to_json(json& j, const ParamRange& r);
void from_json(const json& j, ParamRange& r);

void to_json(json& j, const FadingConfig& c);
void from_json(const json& j, FadingConfig& c);

void to_json(json& j, const ClutterConfig& c);
void from_json(const json& j, ClutterConfig& c);

void to_json(json& j, const DatasetRecipe& r);
void from_json(const json& j, DatasetRecipe& r);

void to_json(json& j, const DatasetConfig& c);
void from_json(const json& j, DatasetConfig& c);

void to_json(json& j, const InterfererMeta& m);
void from_json(const json& j, InterfererMeta& m);

void to_json(json& j, const ExampleMeta& m);
void from_json(const json& j, ExampleMeta& m);

void to_json(json& j, const CfarConfig& c);
void from_json(const json& j, CfarConfig& c);

void to_json(json& j, const AltimeterConfig& c);
void from_json(const json& j, AltimeterConfig& c);

void to_json(json& j, const LmsConfig& c);
void from_json(const json& j, LmsConfig& c);

}  // namespace radalt

namespace radalt::nn {

void to_json(radalt::json& j, const ModelConfig& c);
void from_json(const radalt::json& j, ModelConfig& c);

void to_json(radalt::json& j, const TrainConfig& c);
void from_json(const radalt::json& j, TrainConfig& c);

void to_json(radalt::json& j, const TrainHistory& h);
void from_json(const radalt::json& j, TrainHistory& h);

}  // namespace radalt::nn

namespace radalt::eval {

void to_json(radalt::json& j, const SweepConfig& c);
void from_json(const radalt::json& j, SweepConfig& c);

// snapshots of computed results; parsed only by external tooling
void to_json(radalt::json& j, const CellResult& c);

void to_json(radalt::json& j, const LandingConfig& c);
void from_json(const radalt::json& j, LandingConfig& c);

void to_json(radalt::json& j, const LandingStep& s);
void to_json(radalt::json& j, const LandingResult& r);

}  // namespace radalt::eval
