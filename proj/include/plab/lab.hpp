#pragma once

// Batch experiment runner behind the progression-lab command line.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace plab::lab {

/// Arithmetic in one variable x: + - * / ^, unary minus, parentheses,
/// numbers (1e6 style allowed), constants e and pi, and the functions sqrt,
/// log, exp and log2, where log2(x) = log(log(x)).
class Expression {
 public:
  /// Throws ArgumentError with the column of the first unexpected token.
  static Expression parse(const std::string& text);

  [[nodiscard]] double eval(double x) const;
  [[nodiscard]] const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

struct ReportRow {
  std::string experiment;
  double x = 0.0;
  std::string params;  // key=value pairs joined by ';'
  std::string metric;
  double value = 0.0;
  std::optional<double> bound;
  double wall_seconds = 0.0;  // kept out of the CSV
};

inline constexpr const char* kCsvHeader = "# progression-lab report v1\nexperiment,x,params,metric,value,bound\n";

struct Diagnostic {
  enum class Level { Info, Warning, Error };
  Level level = Level::Info;
  std::string path;  // JSON pointer into the config
  std::string message;
};

std::string level_name(Diagnostic::Level level);

/// Parsed view of a config document. Field errors carry their JSON pointer.
struct ExperimentConfig {
  static constexpr std::uint64_t kDefaultMemoryBudget = std::uint64_t{1} << 30;

  std::string kind;
  std::string id;
  std::string output = "out";
  std::uint64_t memory_budget = kDefaultMemoryBudget;
  nlohmann::json raw;

  /// Throws ArgumentError naming the offending path.
  static ExperimentConfig from_json(const nlohmann::json& j);
};

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"bv-scan", "identity-suite", "constants", "t-sum", "ew",
                                              "ek",      "lil",            "corr",      "titchmarsh",
                                              "hyperbola-check"};
  return kinds;
}

/// Dry run: resolves every expression and estimates table sizes and scan counts.
std::vector<Diagnostic> validate(const nlohmann::json& config);

/// Executes one experiment and returns its rows in a fixed order.
std::vector<ReportRow> run_experiment(const ExperimentConfig& config);

/// The identity suite with fixed parameters; `scale` in (0, 1] shrinks ranges.
std::vector<ReportRow> identity_suite(std::uint64_t seed = 1, double scale = 1.0);

std::string render_csv(const std::vector<ReportRow>& rows);

/// Git blob hash (SHA-1 of "blob <size>\0" + bytes), lowercase hex.
std::string content_hash(const std::string& bytes);

struct RunOutput {
  std::filesystem::path csv;
  std::filesystem::path summary;
  std::vector<ReportRow> rows;
};

/// Runs the config and writes <out>/report.csv and <out>/summary.json.
RunOutput run(const nlohmann::json& config, const std::optional<std::filesystem::path>& out_override = std::nullopt);

}  // namespace plab::lab
