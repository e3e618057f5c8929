#pragma once

#include "rkistab/amplification.hpp"
#include "rkistab/forms.hpp"
#include "rkistab/stab_poly.hpp"

#include "json.hpp"

namespace rkistab {

using nlohmann::json;

// Rationals are written as "p/q" strings next to the double values, so exact
// forms round-trip without loss.
json to_json(const ButcherTableau& bt);
json to_json(const ShuOsherForm& so);
json to_json(const InternalStabilitySet& iss);
json to_json(const AmplificationReport& report);

// Accepts what to_json writes. Exact members are used when present.
ButcherTableau butcher_from_json(const json& j);
ShuOsherForm shu_osher_from_json(const json& j);

}  // namespace rkistab
