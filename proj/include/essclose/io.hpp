#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "essclose/support.hpp"

namespace essclose {

using json = nlohmann::json;

// Rationals serialize as plain integers when integral and as "num/den"
// strings otherwise; both forms (plus dyadic JSON doubles) parse back.
json rat_to_json(const Rat& r);
Rat rat_from_json(const json& j);

json to_json(const TaggedPieceSet& S);
json to_json(const DyadicGridSet& A);
json to_json(const SampleCloud& cloud);
json to_json(const CopulaSpec& C);
json to_json(const PiecewiseMap& F);
json to_json(const AxiomReport& rep);
json to_json(const PropertyReport& rep);
json to_json(const EmptyClosureReport& rep);
json to_json(const ClosednessResult& res);
json to_json(const std::vector<HyperplaneViolation>& violations);
json to_json(const DimensionEstimate& est);

TaggedPieceSet piece_set_from_json(const json& j);
DyadicGridSet grid_from_json(const json& j);
SampleCloud cloud_from_json(const json& j);
CopulaSpec copula_from_json(const json& j);
PiecewiseMap piecewise_map_from_json(const json& j);

/// A set document is either symbolic ("pieces") or a grid ("cells").
using SetDocument = std::variant<TaggedPieceSet, DyadicGridSet>;
SetDocument set_from_json(const json& j);

/// File helpers; parse failures surface as InputError ("malformed JSON ...").
json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

}  // namespace essclose
