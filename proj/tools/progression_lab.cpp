// progression-lab: run, validate and inspect experiment configs.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "plab/analytic.hpp"
#include "plab/errors.hpp"
#include "plab/lab.hpp"

namespace {

nlohmann::json load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw plab::ArgumentError("cannot open " + path);
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw plab::ArgumentError(path + ": " + e.what());
  }
}

int print_diagnostics(const std::vector<plab::lab::Diagnostic>& diags) {
  int errors = 0;
  for (const auto& d : diags) {
    std::cout << plab::lab::level_name(d.level) << '\t' << (d.path.empty() ? "/" : d.path) << '\t' << d.message
              << '\n';
    if (d.level == plab::lab::Diagnostic::Level::Error) ++errors;
  }
  return errors;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arithmetic progression and shifted level set experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run an experiment config and write report.csv and summary.json");
  run->add_option("config", config_path, "Config JSON")->required();
  run->add_option("--out", out_dir, "Output directory (overrides the config)");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Dry-run a config and print diagnostics");
  validate->add_option("config", validate_path, "Config JSON")->required();

  std::uint64_t seed = 1;
  double scale = 1.0;
  auto* suite = app.add_subcommand("identity-suite", "Check the exact identities");
  suite->add_option("--seed", seed, "Seed for random instances");
  suite->add_option("--scale", scale, "Shrink ranges by this factor in (0, 1]");

  std::uint64_t prime_limit = 10'000'000;
  auto* constants = app.add_subcommand("constants", "Print the Euler product constants");
  constants->add_option("--prime-limit", prime_limit, "Primes up to P")->check(CLI::Range(100ULL, 1ULL << 40));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto cfg = load(config_path);
      const auto diags = plab::lab::validate(cfg);
      bool fatal = false;
      for (const auto& d : diags) fatal = fatal || d.level == plab::lab::Diagnostic::Level::Error;
      if (fatal) {
        print_diagnostics(diags);
        return 2;
      }
      std::optional<std::filesystem::path> out;
      if (!out_dir.empty()) out = out_dir;
      const auto res = plab::lab::run(cfg, out);
      std::cout << "wrote " << res.csv.string() << " (" << res.rows.size() << " rows) and " << res.summary.string()
                << '\n';
    } else if (*validate) {
      return print_diagnostics(plab::lab::validate(load(validate_path))) > 0 ? 2 : 0;
    } else if (*suite) {
      const auto rows = plab::lab::identity_suite(seed, scale);
      std::cout << plab::lab::render_csv(rows);
      int failed = 0;
      for (const auto& r : rows) {
        if (r.bound && r.value > *r.bound) ++failed;
      }
      if (failed > 0) {
        std::cerr << failed << " identity checks exceeded their bound\n";
        return 1;
      }
    } else if (*constants) {
      std::cout << plab::to_json(plab::global_constants(prime_limit)).dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
