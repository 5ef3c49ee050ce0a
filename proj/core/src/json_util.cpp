#include "json_util.hpp"

#include <cstdio>

#include "auglag/errors.hpp"

namespace auglag::detail {

json cone_to_json(const ConeSpec& K) {
  switch (K.kind()) {
    case ConeKind::Zero: return json{{"kind", "zero"}, {"dim", K.dim()}};
    case ConeKind::NonposOrthant: return json{{"kind", "nonpos"}, {"dim", K.dim()}};
    case ConeKind::SecondOrder: return json{{"kind", "soc"}, {"dim", K.dim()}};
    case ConeKind::NegSemidef: return json{{"kind", "nsd"}, {"dim", K.dim()}};
    case ConeKind::Product: {
      json parts = json::array();
      for (const auto& p : K.parts()) parts.push_back(cone_to_json(p));
      return json{{"kind", "product"}, {"parts", parts}};
    }
  }
  return json();
}

ConeSpec cone_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "product") {
    std::vector<ConeSpec> parts;
    for (const auto& p : j.at("parts")) parts.push_back(cone_from_json(p));
    return ConeSpec::product(std::move(parts));
  }
  const int d = j.at("dim").get<int>();
  if (kind == "zero") return ConeSpec::zero(d);
  if (kind == "nonpos") return ConeSpec::nonpos(d);
  if (kind == "soc") return ConeSpec::soc(d);
  if (kind == "nsd") return ConeSpec::nsd(d);
  throw StructuralError("unknown cone kind: " + kind);
}

json blockvec_to_json(const BlockVec& v) { return json(v.to_flat()); }

BlockVec blockvec_from_json(const json& j, const ConeSpec& K) {
  return BlockVec::from_flat(K, j.get<std::vector<double>>());
}

json ext_to_json(ExtReal v) {
  if (v.is_finite()) return json(v.value());
  return json(v.str());
}

ExtReal ext_from_json(const json& j) {
  if (j.is_string()) return parse_ext_real(j.get<std::string>());
  return ExtReal(j.get<double>());
}

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace auglag::detail
