#pragma once

#include <string>

#include "levykit/model.hpp"

namespace levykit {

/// JSON model file support. Schema (documented in the README):
///   { "schema": "levykit-model-1", "dimension", "alpha", "beta", "gamma",
///     "drift": [...],
///     "spectral": {"type": "atomic", "directions": [[...]], "weights": [...]}
///               | {"type": "density", "kind": "uniform", "total_mass", "resolution"},
///     "profile": {"q": {"family", "params": {...}},
///                 "phi": {"family", "params": {...}}} }
/// Unknown families or spectral kinds are rejected.
std::string model_to_json_string(const LevyModel& m, int indent = 2);
LevyModel model_from_json_string(const std::string& text);

void save_model(const LevyModel& m, const std::string& path);
LevyModel load_model(const std::string& path);

/// Hash of the canonical (compact, sorted-key) serialization; used to key
/// manifests and the exponent-grid cache.
std::string model_hash(const LevyModel& m);

}  // namespace levykit
