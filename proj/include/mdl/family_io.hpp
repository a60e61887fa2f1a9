#pragma once
// JSON (de)serialization of family descriptions, used by the CLI and the
// experiment harness.
//
// Schemas:
//   {"type": "mixture", "tau": 0.2, "components": [[0.9, 0.1], [0.2, 0.8]]}
//   {"type": "canonical_bernoulli", "eta_lo": -1.5, "eta_hi": 1.5}
//   {"type": "bernoulli_mean"}

#include "mdl/family.hpp"

#include <nlohmann/json.hpp>

namespace mdl {

std::shared_ptr<const Family> family_from_json(const nlohmann::json& j);
nlohmann::json family_to_json(const Family& fam);

// Reads and parses a family description file; throws config_error with a
// readable message on failure.
std::shared_ptr<const Family> load_family(const std::string& path);

}  // namespace mdl
