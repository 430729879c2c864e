#include <cmath>
#include <limits>

#include "plab/multiplicative.hpp"

namespace plab {

namespace {

using nlohmann::json;

json complex_to_json(cplx z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

cplx complex_from_json(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  if (j.is_null()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
  throw ArgumentError("field '" + field + "': expected a number or [re, im]");
}

std::vector<double> breakpoints_from_json(const json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  if (j.is_object()) {
    // {"ratio": r, "up_to": Y}: 2, 2r, 2r^2, ... until >= Y
    const double ratio = j.at("ratio").get<double>();
    const double up_to = j.at("up_to").get<double>();
    if (!(ratio > 1.0)) throw ArgumentError("field 'breakpoints.ratio': must exceed 1");
    std::vector<double> out{2.0};
    while (out.back() < up_to) out.push_back(out.back() * ratio);
    return out;
  }
  throw ArgumentError("field 'breakpoints': expected an array or {ratio, up_to}");
}

}  // namespace

nlohmann::json to_json(const MultiplicativeSpec& spec) {
  json j;
  j["variant"] = spec.tag();
  j["K"] = spec.K_bound();
  const auto& v = spec.variant();
  if (const auto* p = std::get_if<MultiplicativeSpec::Piltz>(&v)) {
    j["z"] = complex_to_json(p->z);
  } else if (const auto* w = std::get_if<MultiplicativeSpec::PowerOmega>(&v)) {
    j["z"] = complex_to_json(w->z);
  } else if (const auto* s = std::get_if<MultiplicativeSpec::Sifted>(&v)) {
    j["Y0"] = s->Y0;
    j["inner"] = to_json(*s->inner);
  } else if (const auto* m = std::get_if<MultiplicativeSpec::Modified>(&v)) {
    j["b"] = m->b;
    j["c"] = m->c;
    j["inner"] = to_json(*m->inner);
  } else if (const auto* r = std::get_if<MultiplicativeSpec::PrimeClassPeriodic>(&v)) {
    const auto& rule = *r->rule;
    j["D"] = rule.D();
    j["breakpoints"] = rule.breakpoints();
    json rows = json::array();
    for (const auto& row : rule.values()) {
      json jr = json::array();
      for (const auto z : row) jr.push_back(complex_to_json(z));
      rows.push_back(std::move(jr));
    }
    j["values"] = std::move(rows);
    // Prime powers not listed take the value at p.
    j["prime_power_default"] = "strongly_multiplicative";
    json ov = json::array();
    for (const auto& [key, z] : rule.overrides()) {
      ov.push_back({{"p", key.first}, {"nu", key.second}, {"value", complex_to_json(z)}});
    }
    j["prime_power_rule"] = std::move(ov);
  }
  return j;
}

MultiplicativeSpec multiplicative_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("variant")) throw ArgumentError("function spec: missing 'variant'");
  const auto tag = j.at("variant").get<std::string>();
  if (tag == "piltz") return MultiplicativeSpec::piltz(complex_from_json(j.at("z"), "z"));
  if (tag == "power_omega") return MultiplicativeSpec::power_omega(complex_from_json(j.at("z"), "z"));
  if (tag == "moebius") return MultiplicativeSpec::moebius();
  if (tag == "unit") return MultiplicativeSpec::unit();
  if (tag == "two_squares") return MultiplicativeSpec::two_squares();
  if (tag == "sifted") {
    return MultiplicativeSpec::sifted(multiplicative_from_json(j.at("inner")), j.at("Y0").get<double>());
  }
  if (tag == "modified") {
    return MultiplicativeSpec::modified(multiplicative_from_json(j.at("inner")), j.at("b").get<std::uint64_t>(),
                                        j.at("c").get<std::uint64_t>());
  }
  if (tag == "prime_class_periodic") {
    const auto D = j.at("D").get<std::uint64_t>();
    const auto K = j.at("K").get<double>();
    auto bps = breakpoints_from_json(j.at("breakpoints"));
    std::vector<std::vector<cplx>> values;
    if (j.contains("uniform_values")) {
      std::vector<cplx> row;
      for (const auto& z : j.at("uniform_values")) row.push_back(complex_from_json(z, "uniform_values"));
      values.assign(bps.size() - 1, row);
    } else {
      for (const auto& jr : j.at("values")) {
        std::vector<cplx> row;
        for (const auto& z : jr) row.push_back(complex_from_json(z, "values"));
        values.push_back(std::move(row));
      }
    }
    PrimeClassRule::PrimePowerOverrides ov;
    if (j.contains("prime_power_rule")) {
      for (const auto& e : j.at("prime_power_rule")) {
        ov[{e.at("p").get<std::uint64_t>(), e.at("nu").get<std::uint32_t>()}] =
            complex_from_json(e.at("value"), "prime_power_rule.value");
      }
    }
    return make_prime_periodic(D, K, std::move(bps), std::move(values), std::move(ov));
  }
  throw ArgumentError("function spec: unknown variant '" + tag + "'");
}

}  // namespace plab
