// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "plab/analytic.hpp"
#include "plab/characters.hpp"
#include "plab/multiplicative.hpp"
#include "plab/progressions.hpp"
#include "plab/rng.hpp"
#include "plab/sieve.hpp"
#include "plab/statlab.hpp"

using namespace plab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const SpfTable& big_table() {
  static const SpfTable t = SpfTable::build(10'000'001);
  return t;
}

Outcome heath_brown() {
  double worst = 0.0;
  for (unsigned J = 1; J <= 3; ++J) {
    for (std::uint64_t n = 1; n <= 2000; ++n) {
      worst = std::max(worst, std::fabs(heath_brown_terms(n, 1000.0, J) - oracle::von_mangoldt(n)));
    }
  }
  return {worst <= 1e-9, "max residual " + fmt("%.3g", worst) + " (limit 1e-9)"};
}

Outcome char_decomposition() {
  const auto& t = big_table();
  const std::vector<MultiplicativeSpec> fs{MultiplicativeSpec::unit(), MultiplicativeSpec::moebius(),
                                           MultiplicativeSpec::piltz(2.0), MultiplicativeSpec::piltz(3.0),
                                           MultiplicativeSpec::power_omega(2.0)};
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 100;) {
    const std::uint64_t x = uniform_in(rng, 1, 10'000), q = uniform_in(rng, 1, 500), D = uniform_in(rng, 1, 30);
    const auto a = static_cast<std::int64_t>(uniform_in(rng, 1, 10'000));
    if (std::gcd(static_cast<std::uint64_t>(a), q * D) != 1) continue;
    worst = std::max(worst, char_decomposition_residual(x, q, D, a, fs[i % fs.size()], t));
    ++i;
  }
  return {worst <= 1e-9, "max residual " + fmt("%.3g", worst) + " over 100 cases (limit 1e-9)"};
}

Outcome extraction() {
  const auto& t = big_table();
  const std::vector<LevelSelector> sels{LevelSelector(1, {0}, {2}), LevelSelector(4, {1, 3}, {2, 0}),
                                        LevelSelector(3, {1, 2}, {1, 1}), LevelSelector(5, {1, 4}, {0, 2}),
                                        LevelSelector(7, {1, 2, 4}, {1, 0, 1})};
  double worst = 0.0;
  for (const auto& s : sels) {
    for (std::uint64_t n = 1; n <= 10'000; ++n) worst = std::max(worst, extraction_check(s, n, std::nullopt, t));
  }
  return {worst <= 1e-10, "max residual " + fmt("%.3g", worst) + " over 5 selectors (limit 1e-10)"};
}

Outcome ustar() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  int cases = 0;
  while (cases < 1000) {
    const std::uint64_t a = uniform_in(rng, 1, 5000), m = uniform_in(rng, 1, 5000);
    // b built from primes of a*m so that rad(b) | a*m.
    std::uint64_t b = 1;
    for (const auto& [p, e] : oracle::factor(a * m)) {
      if (rng() % 2 && b * p <= 10'000) b *= p;
    }
    const std::uint64_t D = uniform_in(rng, 1, 60), s = uniform_in(rng, 1, 5000);
    if (!ustar_admissible(a, b, D, m, s)) continue;
    worst = std::max(worst, ustar_residual(a, b, D, m, s));
    ++cases;
  }
  return {worst <= 1e-10, "max residual " + fmt("%.3g", worst) + " over 1000 tuples (limit 1e-10)"};
}

Outcome hyperbola() {
  const auto& t = big_table();
  bool ok = true;
  std::string d;
  for (const std::uint64_t x : {1'000ULL, 10'000ULL, 100'000ULL, 1'000'000ULL}) {
    const auto a = hyperbola_tau(x), b = tau_summatory_direct(x, t);
    ok = ok && a == b;
    d += std::to_string(x) + ":" + (a == b ? "=" : "!=") + " ";
  }
  return {ok, d + "(exact)"};
}

Outcome t_main_term() {
  const auto& t = big_table();
  const std::vector<double> Rs{1e3, 1e4, 1e5, 1e6};
  bool ok = true;
  std::string d;
  for (const std::uint64_t n : {1ULL, 2ULL, 6ULL, 30ULL}) {
    std::vector<double> errs;
    for (const double R : Rs) errs.push_back(std::fabs(t_sum(static_cast<std::uint64_t>(R), n, t).error));
    const double e = oracle::decay_exponent(Rs, errs);
    ok = ok && e >= 0.25;
    d += "n=" + std::to_string(n) + " exponent " + fmt("%.3f", e) + "; ";
  }
  const double e1 = std::fabs(t_sum(1'000'000, 1, t).error);
  ok = ok && e1 < 0.05;
  return {ok, d + "|err(1e6,1)| " + fmt("%.3g", e1) + " (limits 0.25, 0.05)"};
}

Outcome constant_h() {
  const double want = oracle::zeta(2) * oracle::zeta(3) / oracle::zeta(6);
  const auto c = global_constants(10'000'000);
  const double diff = std::fabs(c.h - want);
  return {diff <= 1e-6, "h_P " + fmt("%.12f", c.h) + " vs " + fmt("%.12f", want) + ", diff " + fmt("%.3g", diff) +
                            " (limit 1e-6)"};
}

Outcome bv_decay() {
  const auto& t = big_table();
  std::vector<double> vals;
  std::string d;
  for (const std::uint64_t x : {10'000ULL, 100'000ULL, 1'000'000ULL}) {
    const double xd = static_cast<double>(x);
    BvParams p;
    p.x = x;
    p.Q = static_cast<std::uint64_t>(std::floor(std::sqrt(xd) / std::pow(std::log(xd), 2)));
    p.mode = BvMode::MaxOverA;
    vals.push_back(bv_aggregate(p, MultiplicativeSpec::moebius(), t) / xd);
    d += "x=" + std::to_string(x) + " Q=" + std::to_string(p.Q) + " " + fmt("%.4g", vals.back()) + "; ";
  }
  const bool ok = vals[1] < vals[0] && vals[2] < vals[1] && vals[2] < 0.05;
  return {ok, d + "(strictly decreasing, last < 0.05)"};
}

Outcome erdos_wintner() {
  const auto& t = big_table();
  const std::uint64_t x = 10'000'000;
  const std::vector<double> th{0.5, 1.0, 2.0};
  const auto f = AdditiveSpec::inverse_prime();
  double worst = 0.0;
  for (const unsigned k : {2u, 3u, 4u}) {
    const auto cf = empirical_cf(x, k, f, th, t);
    const double r = (k - 1.0) / std::log(std::log(static_cast<double>(x)));
    for (std::size_t i = 0; i < th.size(); ++i) {
      worst = std::max(worst, std::abs(cf.values[i] - phi_limit(th[i], r, f, 1'000'000)));
    }
  }
  return {worst <= 0.1, "max |Phi_k - phi| " + fmt("%.4g", worst) + " (limit 0.1)"};
}

Outcome erdos_kac() {
  const auto& t = big_table();
  const double d7 = ek_distance(10'000'000, 3, AdditiveSpec::omega(), t).kolmogorov;
  const double d5 = ek_distance(100'000, 3, AdditiveSpec::omega(), t).kolmogorov;
  return {d7 <= 0.2 && d7 < d5, "D(1e7) " + fmt("%.4f", d7) + ", D(1e5) " + fmt("%.4f", d5) +
                                    " (limit 0.2 and decreasing)"};
}

Outcome lil() {
  const double xi = std::exp(std::exp(std::exp(1.0)));
  const double x = 1e8;
  const auto grid = default_lil_grid(xi, x);
  if (grid.empty()) return {false, "empty grid"};
  const auto prof = lil_profile(100'000'000, xi, grid, WeightedSample{1'000'000, 11});
  const double pm = prof.M.cdf(1.5);
  const double pp = 1.0 - prof.M_plus.cdf_left(0.3);
  return {pm >= 0.7 && pp >= 0.5, std::to_string(grid.size()) + " grid point(s); P(M<=1.5) " + fmt("%.4f", pm) +
                                      ", P(M+>=0.3) " + fmt("%.4f", pp) + " (limits 0.7, 0.5)"};
}

Outcome titchmarsh() {
  const auto& t = big_table();
  const double h = oracle::zeta(2) * oracle::zeta(3) / oracle::zeta(6);
  auto rel = [&](std::uint64_t x) {
    const double xd = static_cast<double>(x);
    return std::fabs(corr_tau(x, VonMangoldt{}, -1, t).real() / (h * xd * std::log(xd)) - 1.0);
  };
  const double r5 = rel(100'000), r7 = rel(10'000'000);
  return {r7 < r5 && r7 <= 0.2,
          "rel error 1e5 " + fmt("%.4f", r5) + ", 1e7 " + fmt("%.4f", r7) + " (limit 0.2 and decreasing)"};
}

// Invariant suites across the modules, each against an enumeration oracle.
Outcome invariants() {
  const auto& t = big_table();
  std::vector<std::string> failed;
  auto check = [&](const std::string& name, bool ok) {
    if (!ok) failed.push_back(name);
  };
  std::mt19937_64 rng(5);

  {
    bool ok = true;
    for (std::uint64_t m = 1; m <= 100 && ok; ++m) {
      const auto chars = character_group(m);
      for (std::uint64_t a = 1; a <= m; ++a) {
        if (std::gcd(a, m) != 1) continue;
        for (std::uint64_t b = 1; b <= m; ++b) {
          if (std::gcd(b, m) != 1) continue;
          std::complex<double> s = 0.0;
          for (const auto& c : chars) s += c(static_cast<std::int64_t>(a)) * std::conj(c(static_cast<std::int64_t>(b)));
          ok = ok && std::abs(s - (a == b ? static_cast<double>(chars.size()) : 0.0)) < 1e-9;
        }
      }
    }
    check("character orthogonality", ok);
  }
  {
    bool ok = true;
    for (std::uint64_t n = 2; n <= 200'000; ++n) {
      const auto f = factorize(n, t);
      std::uint64_t prod = 1;
      for (const auto& pp : f) {
        for (std::uint32_t i = 0; i < pp.exponent; ++i) prod *= pp.prime;
      }
      ok = ok && prod == n && f.pairs()[0].prime == t.spf(n);
    }
    check("factorization", ok);
  }
  {
    bool ok = true;
    for (int i = 0; i < 2000; ++i) {
      const std::uint64_t n = uniform_in(rng, 1, 10'000'000);
      const auto r = arith_record(n, t);
      std::uint64_t phi = n, tau = 1;
      for (const auto& [p, e] : oracle::factor(n)) {
        phi = phi / p * (p - 1);
        tau *= e + 1;
      }
      ok = ok && r.phi == phi && r.tau == tau && r.mu == oracle::mu(n) && r.omega == oracle::omega(n) &&
           std::fabs(r.lambda_vm - oracle::von_mangoldt(n)) < 1e-12;
    }
    check("arithmetic functions", ok);
  }
  {
    const std::vector<MultiplicativeSpec> fs{MultiplicativeSpec::piltz(2.5), MultiplicativeSpec::power_omega(cplx(0, 1)),
                                             MultiplicativeSpec::moebius(), MultiplicativeSpec::two_squares()};
    bool ok = true;
    for (int i = 0; i < 1000; ++i) {
      const std::uint64_t a = uniform_in(rng, 1, 3000), b = uniform_in(rng, 1, 3000);
      if (std::gcd(a, b) != 1) continue;
      for (const auto& f : fs) {
        const auto fa = f.eval(a, factorize(a, t).pairs()), fb = f.eval(b, factorize(b, t).pairs());
        const auto fab = f.eval(a * b, factorize(a * b, t).pairs());
        ok = ok && std::abs(fab - fa * fb) <= 1e-9 * std::max(1.0, std::abs(fab));
      }
    }
    check("multiplicativity", ok);
  }
  {
    bool ok = true;
    const ProgressionEngine engine(tabulate(MultiplicativeSpec::piltz(2.0), 20'000, t));
    for (std::uint64_t q = 1; q <= 80; ++q) {
      cplx s = 0.0;
      for (std::uint64_t a = 1; a <= q; ++a) {
        if (std::gcd(a, q) == 1) s += engine.delta(q, 1, static_cast<std::int64_t>(a)).delta;
      }
      ok = ok && std::abs(s) <= 1e-10 * std::abs(engine.class_sum(1, 0));
      for (const std::uint64_t D : {7ULL, 11ULL, 221ULL}) {
        if (std::gcd(q, D) != 1) continue;
        const auto u = engine.delta(q, 1, 1), v = engine.delta(q, D, 1);
        ok = ok && u.progression_sum == v.progression_sum && u.expected == v.expected;
      }
    }
    check("progression sums", ok);
  }
  {
    bool ok = true;
    for (int i = 0; i < 50; ++i) {
      const std::uint64_t M = uniform_in(rng, 1, 30), N = uniform_in(rng, 1, 30), q = uniform_in(rng, 1, 25);
      std::int64_t a = static_cast<std::int64_t>(uniform_in(rng, 1, 25));
      while (std::gcd(static_cast<std::uint64_t>(a), q) != 1) ++a;
      std::vector<cplx> al(M), be(N);
      for (auto& v : al) v = static_cast<double>(rng() % 2);
      for (auto& v : be) v = static_cast<double>(rng() % 2);
      double hit = 0.0, cop = 0.0;
      for (std::uint64_t m = M + 1; m <= 2 * M; ++m) {
        for (std::uint64_t n = N + 1; n <= 2 * N; ++n) {
          const double w = al[m - M - 1].real() * be[n - N - 1].real();
          if ((m * n) % q == static_cast<std::uint64_t>(a) % q) hit += w;
          if (std::gcd(m * n, q) == 1) cop += w;
        }
      }
      ok = ok && std::abs(bilinear_delta(M, N, q, a, al, be) - (hit - cop / static_cast<double>(oracle::phi(q)))) < 1e-10;
    }
    check("bilinear sums", ok);
  }
  {
    const std::vector<double> th{-2.0, 2.0, 0.7};
    const auto cf = empirical_cf(1'000'000, 2, AdditiveSpec::inverse_prime(), th, t);
    bool ok = std::abs(cf.values[0] - std::conj(cf.values[1])) < 1e-14;
    for (const auto& v : cf.values) ok = ok && std::abs(v) <= 1.0 + 1e-15;
    check("characteristic function", ok);
  }
  {
    const auto prof = lil_profile(7'000'000, std::exp(std::exp(std::exp(1.0))), {6.5e6}, FullScan{}, &t);
    check("weighted normalization",
          prof.M.total_weight() == static_cast<double>(tau_summatory_direct(6'999'999, t)));
  }
  {
    bool ok = true;
    for (const std::uint64_t x : {100ULL, 99'999ULL, 1'000'000ULL}) {
      ok = ok && corr_tau(x, MultiplicativeSpec::unit(), 1, t).real() ==
                     static_cast<double>(hyperbola_tau(x + 1) - hyperbola_tau(2));
    }
    check("shifted divisor sums", ok);
  }
  {
    const auto r = ek_distance(10'000'000, 3, AdditiveSpec::omega(), t);
    check("variance ratio", r.kubilius_ratio >= 0.8 && r.kubilius_ratio <= 1.0);
  }

  std::string d = failed.empty() ? "all suites pass" : "failed:";
  for (const auto& f : failed) d += " " + f + ";";
  return {failed.empty(), d};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"heath-brown identity", heath_brown},
      {"character decomposition", char_decomposition},
      {"level extraction", extraction},
      {"U* vanishing", ustar},
      {"hyperbola exactness", hyperbola},
      {"T(R,n) main term", t_main_term},
      {"constant h", constant_h},
      {"progression aggregate decay", bv_decay},
      {"characteristic function limit", erdos_wintner},
      {"normal approximation", erdos_kac},
      {"iterated logarithm gate", lil},
      {"shifted prime divisor sum", titchmarsh},
      {"invariant suites", invariants},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("criterion %2zu %s  %-30s %s [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), dt);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
