#pragma once

#include <json.hpp>

#include "auglag/cones.hpp"
#include "auglag/ext_real.hpp"

namespace auglag::detail {

using json = nlohmann::ordered_json;

json cone_to_json(const ConeSpec& K);
ConeSpec cone_from_json(const json& j);

json blockvec_to_json(const BlockVec& v);
BlockVec blockvec_from_json(const json& j, const ConeSpec& K);

// Extended reals are written as numbers, or as the strings "inf" / "-inf".
json ext_to_json(ExtReal v);
ExtReal ext_from_json(const json& j);

// Doubles as shortest round-trip text.
std::string fmt_double(double v);

}  // namespace auglag::detail
