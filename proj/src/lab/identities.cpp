#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "plab/analytic.hpp"
#include "plab/errors.hpp"
#include "plab/lab.hpp"
#include "plab/multiplicative.hpp"
#include "plab/progressions.hpp"
#include "plab/rng.hpp"
#include "plab/sieve.hpp"
#include "plab/statlab.hpp"

namespace plab::lab {

namespace {

using Clock = std::chrono::steady_clock;

struct Group {
  std::string name;
  double x = 0.0;
  std::string params;
  double worst = 0.0;
  std::uint64_t cases = 0;
  double bound = 0.0;
  Clock::time_point t0 = Clock::now();

  void note(double r) {
    worst = std::max(worst, r);
    ++cases;
  }
  void emit(std::vector<ReportRow>& out) const {
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    const std::string p = "identity=" + name + (params.empty() ? "" : ";" + params);
    out.push_back({"identity-suite", x, p, "max_residual", worst, bound, dt});
    out.push_back({"identity-suite", x, p, "cases", static_cast<double>(cases), std::nullopt, dt});
  }
};

std::uint64_t scaled(double base, double scale, double floor_value) {
  return static_cast<std::uint64_t>(std::max(floor_value, std::floor(base * scale)));
}

double von_mangoldt(std::uint64_t n) {
  if (n < 2) return 0.0;
  const auto f = factorize_trial(n);
  return f.size() == 1 ? std::log(static_cast<double>(f.pairs()[0].prime)) : 0.0;
}

// Product of random prime powers drawn from the primes of `pool`, at most `cap`.
std::uint64_t random_supported(std::mt19937_64& rng, std::uint64_t pool, std::uint64_t cap) {
  std::uint64_t b = 1;
  const auto f = factorize_trial(pool);
  for (const auto& pp : f) {
    const auto reps = uniform_below(rng, 3);
    for (std::uint64_t i = 0; i < reps && b * pp.prime <= cap; ++i) b *= pp.prime;
  }
  return b;
}

}  // namespace

std::vector<ReportRow> identity_suite(std::uint64_t seed, double scale) {
  if (!(scale > 0.0) || scale > 1.0) throw ArgumentError("identity_suite: scale must lie in (0, 1]");
  std::vector<ReportRow> out;
  std::mt19937_64 rng(seed);

  std::vector<std::uint64_t> hyper_xs;
  for (const std::uint64_t x : {1'000ULL, 10'000ULL, 100'000ULL, 1'000'000ULL}) {
    if (x == 1'000 || static_cast<double>(x) <= 1e6 * scale) hyper_xs.push_back(x);
  }
  const std::uint64_t n_extract = scaled(1e4, scale, 100);
  const std::uint64_t table_limit = std::max({hyper_xs.back(), n_extract, std::uint64_t{10'000}});
  const SpfTable table = SpfTable::build(table_limit);

  // Heath-Brown decomposition of the von Mangoldt function.
  const std::uint64_t n_hb = scaled(2000, scale, 50);
  for (unsigned J = 1; J <= 3; ++J) {
    Group g{"heath_brown", static_cast<double>(n_hb), "y=1000;J=" + std::to_string(J)};
    g.bound = 1e-9;
    for (std::uint64_t n = 1; n <= n_hb; ++n) g.note(std::fabs(heath_brown_terms(n, 1000.0, J) - von_mangoldt(n)));
    g.emit(out);
  }

  // Character decomposition on random instances.
  {
    const std::vector<MultiplicativeSpec> fs{MultiplicativeSpec::unit(), MultiplicativeSpec::moebius(),
                                             MultiplicativeSpec::piltz(2.0), MultiplicativeSpec::piltz(3.0),
                                             MultiplicativeSpec::power_omega(2.0)};
    const std::uint64_t cases = scaled(100, scale, 10);
    Group g{"char_decomposition", 1e4, "cases=" + std::to_string(cases)};
    g.bound = 1e-9;
    for (std::uint64_t i = 0; i < cases; ++i) {
      const std::uint64_t x = uniform_in(rng, 1, 10'000);
      const std::uint64_t q = uniform_in(rng, 1, 500);
      const std::uint64_t D = uniform_in(rng, 1, 30);
      const auto& f = fs[i % fs.size()];
      const std::uint64_t qprime = split_q(q, D).second;
      std::int64_t a = 0;
      do {
        a = static_cast<std::int64_t>(uniform_in(rng, 1, 10'000));
      } while (std::gcd(static_cast<std::uint64_t>(a), qprime * D) != 1);
      g.note(char_decomposition_residual(x, q, D, a, f, table));
    }
    g.emit(out);
  }

  // Level-set extraction through roots of unity.
  {
    const std::vector<LevelSelector> sels{LevelSelector(1, {0}, {2}), LevelSelector(4, {1, 3}, {1, 1}),
                                          LevelSelector(3, {1}, {0}), LevelSelector(5, {1, 2, 4}, {0, 1, 0}),
                                          LevelSelector(8, {3, 5, 7}, {1, 0, 2})};
    for (std::size_t s = 0; s < sels.size(); ++s) {
      Group g{"extraction", static_cast<double>(n_extract), "selector=" + std::to_string(s + 1)};
      g.bound = 1e-10;
      for (std::uint64_t n = 1; n <= n_extract; ++n) g.note(extraction_check(sels[s], n, std::nullopt, table));
      g.emit(out);
    }
  }

  // U* vanishing on random admissible tuples.
  {
    const std::uint64_t cases = scaled(1000, scale, 50);
    Group g{"ustar", 1e4, "cases=" + std::to_string(cases)};
    g.bound = 1e-10;
    while (g.cases < cases) {
      const std::uint64_t a = uniform_in(rng, 1, 10'000);
      const std::uint64_t m = uniform_in(rng, 1, 10'000);
      const std::uint64_t b = random_supported(rng, a * m, 10'000);
      const std::uint64_t D = uniform_in(rng, 1, 50);
      const std::uint64_t s = uniform_in(rng, 1, 10'000);
      if (!ustar_admissible(a, b, D, m, s)) continue;
      g.note(ustar_residual(a, b, D, m, s));
    }
    g.emit(out);
  }

  // Divisor summatory function: hyperbola against direct sum.
  for (const std::uint64_t x : hyper_xs) {
    Group g{"hyperbola", static_cast<double>(x), ""};
    g.bound = 0.0;
    const auto h = hyperbola_tau(x);
    const auto d = tau_summatory_direct(x, table);
    g.note(h > d ? static_cast<double>(h - d) : static_cast<double>(d - h));
    g.emit(out);
  }
  return out;
}

}  // namespace plab::lab
