#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "plab/errors.hpp"
#include "plab/sieve.hpp"

namespace plab::lab {

namespace detail {

void field_error(const std::string& path, const std::string& what) {
  throw ArgumentError("config " + path + ": " + what);
}

namespace {

double to_number(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    double d = 0.0;
    try {
      d = Expression::parse(v.get<std::string>()).eval(0.0);
    } catch (const ArgumentError& e) {
      field_error(path, e.what());
    }
    if (!std::isfinite(d)) field_error(path, "expression is not finite");
    return d;
  }
  field_error(path, "expected a number or a numeric expression");
}

}  // namespace

double number_field(const json& j, const std::string& key, const std::string& path, std::optional<double> fallback) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    field_error(path + "/" + key, "missing");
  }
  return to_number(j.at(key), path + "/" + key);
}

std::vector<double> number_list(const json& j, const std::string& key, const std::string& path,
                                std::optional<std::vector<double>> fallback) {
  const std::string p = path + "/" + key;
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    field_error(p, "missing");
  }
  const json& v = j.at(key);
  if (!v.is_array()) return {to_number(v, p)};
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(to_number(v[i], p + "/" + std::to_string(i)));
  if (out.empty()) field_error(p, "must not be empty");
  return out;
}

std::uint64_t integer_field(const json& j, const std::string& key, const std::string& path,
                            std::optional<std::uint64_t> fallback) {
  const double d = number_field(j, key, path, fallback ? std::optional<double>(static_cast<double>(*fallback))
                                                       : std::nullopt);
  if (!(d >= 0.0) || d != std::floor(d) || d > 1.8e19) field_error(path + "/" + key, "expected a non-negative integer");
  return static_cast<std::uint64_t>(d);
}

std::int64_t signed_field(const json& j, const std::string& key, const std::string& path,
                          std::optional<std::int64_t> fallback) {
  const double d = number_field(j, key, path, fallback ? std::optional<double>(static_cast<double>(*fallback))
                                                       : std::nullopt);
  if (d != std::floor(d) || std::fabs(d) > 9e18) field_error(path + "/" + key, "expected an integer");
  return static_cast<std::int64_t>(d);
}

std::string string_field(const json& j, const std::string& key, const std::string& path,
                         std::optional<std::string> fallback) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    field_error(path + "/" + key, "missing");
  }
  if (!j.at(key).is_string()) field_error(path + "/" + key, "expected a string");
  return j.at(key).get<std::string>();
}

Expression expression_field(const json& j, const std::string& key, const std::string& path,
                            const std::string& fallback) {
  const std::string p = path + "/" + key;
  std::string text = fallback;
  if (j.contains(key)) {
    const json& v = j.at(key);
    if (v.is_number()) {
      text = v.dump();
    } else if (v.is_string()) {
      text = v.get<std::string>();
    } else {
      field_error(p, "expected an expression string or a number");
    }
  }
  try {
    return Expression::parse(text);
  } catch (const ArgumentError& e) {
    field_error(p, e.what());
  }
}

double positive_at(const Expression& e, double x, const std::string& path) {
  const double v = e.eval(x);
  if (!(v > 0.0) || !std::isfinite(v)) {
    field_error(path, "'" + e.text() + "' evaluates to " + std::to_string(v) + " at x = " + std::to_string(x));
  }
  return v;
}

MultiplicativeSpec function_field(const json& j, const std::string& key, const std::string& path,
                                  const std::optional<json>& fallback) {
  json spec;
  if (j.contains(key)) {
    spec = j.at(key);
    if (spec.is_string()) spec = json{{"variant", spec.get<std::string>()}};
  } else if (fallback) {
    spec = *fallback;
  } else {
    field_error(path + "/" + key, "missing");
  }
  try {
    return multiplicative_from_json(spec);
  } catch (const std::exception& e) {
    field_error(path + "/" + key, e.what());
  }
}

AdditiveSpec additive_field(const json& j, const std::string& key, const std::string& path,
                            const std::string& fallback) {
  const std::string p = path + "/" + key;
  std::string name = fallback;
  std::optional<double> y;
  if (j.contains(key)) {
    const json& v = j.at(key);
    if (v.is_string()) {
      name = v.get<std::string>();
    } else if (v.is_object()) {
      name = string_field(v, "name", p, std::nullopt);
      if (v.contains("y")) y = number_field(v, "y", p, std::nullopt);
    } else {
      field_error(p, "expected a name or {name, y}");
    }
  }
  AdditiveSpec f = AdditiveSpec::zero();
  if (name == "omega") {
    f = AdditiveSpec::omega();
  } else if (name == "big_omega") {
    f = AdditiveSpec::big_omega();
  } else if (name == "inverse_prime") {
    f = AdditiveSpec::inverse_prime();
  } else if (name != "zero") {
    field_error(p, "unknown additive function '" + name + "'");
  }
  return y ? f.truncated(*y) : f;
}

std::uint64_t table_need(const ExperimentConfig& cfg) {
  const json& j = cfg.raw;
  const auto max_x = [&] {
    const auto xs = number_list(j, "x", "", std::nullopt);
    return static_cast<std::uint64_t>(*std::max_element(xs.begin(), xs.end()));
  };
  if (cfg.kind == "constants") return 0;
  if (cfg.kind == "identity-suite") return 1'000'000;
  if (cfg.kind == "corr") {
    const std::int64_t h = signed_field(j, "h", "", 1);
    return max_x() + static_cast<std::uint64_t>(std::max<std::int64_t>(h, 0));
  }
  if (cfg.kind == "lil") {
    const std::uint64_t x = max_x();
    const bool full = !j.contains("sampler") || string_field(j.at("sampler"), "kind", "/sampler", "full") == "full";
    if (!full || SpfTable::bytes_for(x) > cfg.memory_budget) return 0;  // segmented pass
    return x;
  }
  return max_x();
}

}  // namespace detail

using namespace detail;

std::string level_name(Diagnostic::Level level) {
  switch (level) {
    case Diagnostic::Level::Info:
      return "info";
    case Diagnostic::Level::Warning:
      return "warning";
    case Diagnostic::Level::Error:
      return "error";
  }
  return "?";
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) field_error("", "config must be a JSON object");
  ExperimentConfig c;
  c.raw = j;
  c.kind = string_field(j, "kind", "", std::nullopt);
  const auto& kinds = experiment_kinds();
  if (std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end()) {
    field_error("/kind", "unknown experiment kind '" + c.kind + "'");
  }
  c.id = string_field(j, "id", "", c.kind);
  if (c.id.find_first_of(",\n\"") != std::string::npos) field_error("/id", "must not contain commas or quotes");
  c.output = string_field(j, "output", "", std::string("out"));
  c.memory_budget = integer_field(j, "memory_budget", "", kDefaultMemoryBudget);
  return c;
}

std::vector<Diagnostic> validate(const nlohmann::json& config) {
  std::vector<Diagnostic> out;
  auto add = [&](Diagnostic::Level l, std::string path, std::string msg) {
    out.push_back({l, std::move(path), std::move(msg)});
  };
  ExperimentConfig cfg;
  try {
    cfg = ExperimentConfig::from_json(config);
  } catch (const std::exception& e) {
    add(Diagnostic::Level::Error, "", e.what());
    return out;
  }
  const json& j = cfg.raw;
  // Every check runs independently so one bad field does not hide the rest.
  auto guard = [&](auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      add(Diagnostic::Level::Error, "", e.what());
    }
  };

  std::vector<double> xs;
  const bool needs_x = cfg.kind != "constants" && cfg.kind != "identity-suite";
  if (needs_x) {
    guard([&] {
      xs = number_list(j, "x", "", std::nullopt);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] >= 1.0) || xs[i] != std::floor(xs[i])) {
          add(Diagnostic::Level::Error, "/x/" + std::to_string(i), "x must be a positive integer");
        }
      }
    });
  }
  auto check_expr = [&](const std::string& key, const std::string& fallback) {
    guard([&] {
      const Expression e = expression_field(j, key, "", fallback);
      for (const double x : xs) positive_at(e, x, "/" + key);
    });
  };

  if (cfg.kind == "bv-scan") {
    check_expr("Q", "sqrt(x)/log(x)^2");
    check_expr("R", "1");
    guard([&] { function_field(j, "function", "", json{{"variant", "moebius"}}); });
    guard([&] {
      const std::string mode = string_field(j, "mode", "", std::string("max-over-a"));
      if (mode != "max-over-a" && mode != "abs-over-r" && mode != "signed") {
        add(Diagnostic::Level::Error, "/mode", "unknown mode '" + mode + "'");
      }
    });
  } else if (cfg.kind == "ew" || cfg.kind == "ek") {
    guard([&] {
      const auto ks = number_list(j, "k", "", std::vector<double>{2.0});
      for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i] == 0.0) {
          add(Diagnostic::Level::Warning, "/k/" + std::to_string(i),
              "k = 0 selects only n = 2 (omega(1) = 0); the level set is nearly empty");
        }
      }
    });
    guard([&] { additive_field(j, "additive", "", cfg.kind == "ek" ? "omega" : "inverse_prime"); });
  } else if (cfg.kind == "lil") {
    check_expr("xi", "exp(exp(e))");
    guard([&] {
      if (j.contains("sampler")) {
        const json& s = j.at("sampler");
        const std::string kind = string_field(s, "kind", "/sampler", std::string("full"));
        if (kind == "sample") {
          if (!s.contains("seed")) add(Diagnostic::Level::Error, "/sampler/seed", "seed is required when sampling");
          integer_field(s, "size", "/sampler", std::nullopt);
        } else if (kind != "full") {
          add(Diagnostic::Level::Error, "/sampler/kind", "expected 'full' or 'sample'");
        }
      }
    });
  } else if (cfg.kind == "corr") {
    guard([&] {
      if (signed_field(j, "h", "", 1) == 0) add(Diagnostic::Level::Error, "/h", "h must be nonzero");
      if (!j.contains("weight") || j.at("weight") != "von_mangoldt") {
        function_field(j, "function", "", json{{"variant", "piltz"}, {"z", 2}});
      }
    });
  } else if (cfg.kind == "constants") {
    guard([&] {
      for (const double P : number_list(j, "prime_limit", "", std::vector<double>{1e7})) {
        if (P < 100) add(Diagnostic::Level::Error, "/prime_limit", "prime limit must be >= 100");
      }
    });
  } else if (cfg.kind == "t-sum") {
    guard([&] { number_list(j, "n", "", std::vector<double>{1.0}); });
  }

  guard([&] {
    const std::uint64_t need = table_need(cfg);
    if (need == 0) return;
    const std::uint64_t bytes = SpfTable::bytes_for(need);
    const auto lvl = bytes > cfg.memory_budget ? Diagnostic::Level::Error : Diagnostic::Level::Info;
    add(lvl, "/memory_budget",
        "SPF table to " + std::to_string(need) + " needs " + std::to_string(bytes) + " bytes (budget " +
            std::to_string(cfg.memory_budget) + ")");
  });
  if (!xs.empty()) {
    double scans = 0.0;
    for (const double x : xs) scans += x;
    add(Diagnostic::Level::Info, "/x", "expected scan count about " + std::to_string(static_cast<std::uint64_t>(scans)));
  }
  return out;
}

}  // namespace plab::lab
