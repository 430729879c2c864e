#pragma once

// Field access helpers shared by the config validator and the runners.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "plab/analytic.hpp"
#include "plab/lab.hpp"
#include "plab/multiplicative.hpp"

namespace plab::lab::detail {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& path, const std::string& what);

/// Numbers or numeric expression strings ("10^6").
double number_field(const json& j, const std::string& key, const std::string& path, std::optional<double> fallback);
std::vector<double> number_list(const json& j, const std::string& key, const std::string& path,
                                std::optional<std::vector<double>> fallback);
std::uint64_t integer_field(const json& j, const std::string& key, const std::string& path,
                            std::optional<std::uint64_t> fallback);
std::int64_t signed_field(const json& j, const std::string& key, const std::string& path,
                          std::optional<std::int64_t> fallback);
std::string string_field(const json& j, const std::string& key, const std::string& path,
                         std::optional<std::string> fallback);
Expression expression_field(const json& j, const std::string& key, const std::string& path,
                            const std::string& fallback);

/// Evaluates e at x; throws with the path unless the result is positive and finite.
double positive_at(const Expression& e, double x, const std::string& path);

MultiplicativeSpec function_field(const json& j, const std::string& key, const std::string& path,
                                  const std::optional<json>& fallback);
/// "omega", "big_omega", "inverse_prime", "zero", or {"name": ..., "y": ...}.
AdditiveSpec additive_field(const json& j, const std::string& key, const std::string& path,
                            const std::string& fallback);

/// Largest integer the experiment will factorize through an SPF table.
std::uint64_t table_need(const ExperimentConfig& cfg);

}  // namespace plab::lab::detail
