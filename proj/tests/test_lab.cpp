#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "plab/errors.hpp"
#include "plab/lab.hpp"
#include "plab/parallel.hpp"
#include "plab/sieve.hpp"

using namespace plab;
using namespace plab::lab;
using nlohmann::json;

namespace {

const ReportRow& find_row(const std::vector<ReportRow>& rows, const std::string& metric, double x) {
  for (const auto& r : rows) {
    if (r.metric == metric && r.x == x) return r;
  }
  FAIL("no row " << metric << " at x=" << x);
  throw std::logic_error("unreachable");
}

bool has_diag(const std::vector<Diagnostic>& d, Diagnostic::Level lvl, const std::string& path_prefix) {
  for (const auto& x : d) {
    if (x.level == lvl && x.path.rfind(path_prefix, 0) == 0) return true;
  }
  return false;
}

bool mentions(const std::vector<Diagnostic>& d, const std::string& needle) {
  for (const auto& x : d) {
    if (x.level == Diagnostic::Level::Error && (x.path + x.message).find(needle) != std::string::npos) return true;
  }
  return false;
}

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("plab_test_lab_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("expressions") {
  CHECK(Expression::parse("1 + 2*3").eval(0) == 7.0);
  CHECK(Expression::parse("2^3^2").eval(0) == 512.0);
  CHECK(Expression::parse("-2^2").eval(0) == -4.0);
  CHECK(Expression::parse("(1+2)*x").eval(4) == 12.0);
  CHECK(Expression::parse("10^6").eval(0) == 1e6);
  CHECK(Expression::parse("1e6/4").eval(0) == 250000.0);
  CHECK(Expression::parse("sqrt(x)/log(x)^2").eval(1e6) == doctest::Approx(1000.0 / std::pow(std::log(1e6), 2)));
  CHECK(Expression::parse("log2(x)").eval(1e6) == doctest::Approx(std::log(std::log(1e6))));
  CHECK(Expression::parse("exp(exp(e))").eval(0) == doctest::Approx(std::exp(std::exp(std::exp(1.0)))));
  CHECK(Expression::parse("pi").eval(0) == doctest::Approx(3.141592653589793));
  CHECK(Expression::parse(" x ").text() == " x ");

  for (const std::string bad : {"", "1 +", "sqrt(", "2 ** 3", "foo(x)", "(1", "1)", "x y", "1e", "."}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(Expression::parse(bad), ArgumentError);
  }
  try {
    Expression::parse("1 + * 2");
    FAIL("expected a parse error");
  } catch (const ArgumentError& e) {
    CHECK(std::string(e.what()).find("column 5") != std::string::npos);
  }
}

TEST_CASE("config parsing") {
  CHECK_THROWS_AS(ExperimentConfig::from_json(json::array()), ArgumentError);
  CHECK_THROWS_AS(ExperimentConfig::from_json(json{{"kind", "nope"}}), ArgumentError);
  const auto c = ExperimentConfig::from_json(json{{"kind", "hyperbola-check"}, {"x", {10}}});
  CHECK(c.id == "hyperbola-check");
  CHECK(c.output == "out");
  CHECK(c.memory_budget == ExperimentConfig::kDefaultMemoryBudget);
  CHECK(experiment_kinds().size() == 10);
}

TEST_CASE("validation diagnostics") {
  const auto bad_expr = validate(json{{"kind", "bv-scan"}, {"x", {1000}}, {"Q", "sqrt(x"}});
  CHECK(mentions(bad_expr, "/Q"));

  const auto k0 = validate(json{{"kind", "ew"}, {"x", {1000}}, {"k", {0, 1}}});
  CHECK(has_diag(k0, Diagnostic::Level::Warning, "/k/0"));
  CHECK(!has_diag(k0, Diagnostic::Level::Error, ""));

  const auto big = validate(json{{"kind", "ek"}, {"x", {"10^8"}}, {"memory_budget", 100'000'000}});
  REQUIRE(has_diag(big, Diagnostic::Level::Error, "/memory_budget"));
  CHECK(SpfTable::bytes_for(100'000'000) == doctest::Approx(4e8).epsilon(0.01));
  const auto ok = validate(json{{"kind", "ek"}, {"x", {"10^8"}}});
  CHECK(has_diag(ok, Diagnostic::Level::Info, "/memory_budget"));
  CHECK(!has_diag(ok, Diagnostic::Level::Error, ""));

  CHECK(mentions(validate(json{{"kind", "hyperbola-check"}, {"x", {0.5}}}), "/x/0"));
  CHECK(mentions(validate(json{{"kind", "corr"}, {"x", {100}}, {"h", 0}}), "/h"));
  CHECK(mentions(validate(json{{"kind", "lil"}, {"x", {1e7}}, {"sampler", {{"kind", "sample"}, {"size", 10}}}}),
                 "/sampler/seed"));
  CHECK(mentions(validate(json{{"kind", "bv-scan"}, {"x", {100}}, {"mode", "median"}}), "/mode"));
  CHECK(mentions(validate(json{{"kind", "nope"}}), "kind"));
  // Q must be positive at every x.
  CHECK(mentions(validate(json{{"kind", "bv-scan"}, {"x", {100}}, {"Q", "1 - x"}}), "/Q"));
}

TEST_CASE("runner examples") {
  const auto hyp = run_experiment(ExperimentConfig::from_json(json{{"kind", "hyperbola-check"}, {"x", {10, 100}}}));
  CHECK(find_row(hyp, "match", 10).value == 1.0);
  CHECK(find_row(hyp, "match", 100).value == 1.0);
  CHECK(find_row(hyp, "hyperbola", 10).value == 27.0);

  const auto con = run_experiment(ExperimentConfig::from_json(json{{"kind", "constants"}, {"prime_limit", "10^6"}}));
  const auto& h = find_row(con, "h", 1e6);
  CHECK(h.value == doctest::Approx(1.943596).epsilon(1e-6));
  REQUIRE(h.bound.has_value());
  CHECK(*h.bound > 0.0);

  const auto bv = run_experiment(
      ExperimentConfig::from_json(json{{"kind", "bv-scan"}, {"x", {1000, 5000}}, {"Q", "1"}, {"R", "1"}}));
  CHECK(find_row(bv, "aggregate", 1000).value == doctest::Approx(0.0));
  CHECK(find_row(bv, "aggregate", 5000).value == doctest::Approx(0.0));

  const auto corr = run_experiment(ExperimentConfig::from_json(json{{"kind", "corr"}, {"x", {5}}, {"h", 1}}));
  CHECK(find_row(corr, "re", 5).value == 24.0);

  CHECK_THROWS_AS(run_experiment(ExperimentConfig::from_json(
                      json{{"kind", "ek"}, {"x", {"10^7"}}, {"memory_budget", 1000}})),
                  CapacityError);
}

TEST_CASE("identity suite passes at reduced scale") {
  const auto rows = identity_suite(3, 0.2);
  int checked = 0;
  for (const auto& r : rows) {
    if (!r.bound) continue;
    CAPTURE(r.params);
    CHECK(r.value <= *r.bound);
    ++checked;
  }
  CHECK(checked >= 5);
}

TEST_CASE("csv rendering and content hash") {
  CHECK(content_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(content_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  ReportRow r;
  r.experiment = "t";
  r.x = 10;
  r.params = "a=1;b=2";
  r.metric = "m";
  r.value = 0.1;
  r.wall_seconds = 3.0;
  ReportRow s = r;
  s.bound = 2.0;
  const std::string csv = render_csv({r, s});
  CHECK(csv == std::string(kCsvHeader) + "t,10,a=1;b=2,m,0.10000000000000001,\nt,10,a=1;b=2,m,0.10000000000000001,2\n");
}

TEST_CASE("reports are deterministic") {
  const json cfg{{"kind", "ek"}, {"x", {"10^5", "2*10^5"}}, {"k", {1, 2, 3}}};
  const auto a = run(cfg, scratch("a"));
  const auto b = run(cfg, scratch("b"));
  CHECK(slurp(a.csv) == slurp(b.csv));
  CHECK(!slurp(a.csv).empty());

  const auto summary = json::parse(slurp(a.summary));
  CHECK(summary.at("kind") == "ek");
  CHECK(summary.at("rows") == a.rows.size());
  CHECK(summary.at("report_hash") == content_hash(slurp(a.csv)));
  CHECK(summary.at("config_hash") == json::parse(slurp(b.summary)).at("config_hash"));

  set_worker_count(1);
  const auto one = render_csv(run_experiment(ExperimentConfig::from_json(cfg)));
  set_worker_count(4);
  const auto four = render_csv(run_experiment(ExperimentConfig::from_json(cfg)));
  set_worker_count(0);
  CHECK(one == four);
  CHECK(one == slurp(a.csv));

  const json lil{{"kind", "lil"}, {"x", {"7*10^6"}}, {"sampler", {{"kind", "sample"}, {"size", 20000}, {"seed", 7}}}};
  CHECK(render_csv(run_experiment(ExperimentConfig::from_json(lil))) ==
        render_csv(run_experiment(ExperimentConfig::from_json(lil))));
}
