#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "plab/parallel.hpp"
#include "plab/progressions.hpp"

using namespace plab;

namespace {

const SpfTable& table() {
  static const SpfTable t = SpfTable::build(1'000'000);
  return t;
}

double mu_d(std::uint64_t n) { return oracle::mu(n); }

// Delta_f(x; q, D, a) straight from the definition.
cplx delta_oracle(std::uint64_t x, std::uint64_t q, std::uint64_t D, std::int64_t a,
                  const std::function<cplx(std::uint64_t)>& f) {
  std::uint64_t qd = 1, rest = q;
  for (std::uint64_t g = std::gcd(rest, D); g > 1; g = std::gcd(rest, D)) {
    qd *= g;
    rest /= g;
  }
  const auto qq = static_cast<std::int64_t>(q), qqd = static_cast<std::int64_t>(qd);
  cplx s = 0.0, e = 0.0;
  for (std::uint64_t n = 1; n <= x; ++n) {
    const auto ni = static_cast<std::int64_t>(n);
    if (((ni - a) % qq + qq) % qq == 0) s += f(n);
    if (((ni - a) % qqd + qqd) % qqd == 0 && std::gcd(n, rest) == 1) e += f(n);
  }
  return s - e / static_cast<double>(oracle::phi(rest));
}

}  // namespace

TEST_CASE("g_q values") {
  CHECK(g_q(5, 4, 1) == doctest::Approx(0.5));
  CHECK(g_q(3, 4, 1) == doctest::Approx(-0.5));
  CHECK(g_q(2, 4, 1) == 0.0);
  CHECK_THROWS_AS(g_q(1, 4, 2), ArgumentError);
}

TEST_CASE("split of the modulus") {
  CHECK(split_q(12, 2) == std::pair<std::uint64_t, std::uint64_t>{4, 3});
  CHECK(split_q(35, 6) == std::pair<std::uint64_t, std::uint64_t>{1, 35});
  CHECK(split_q(360, 6) == std::pair<std::uint64_t, std::uint64_t>{72, 5});
  for (std::uint64_t q = 1; q <= 300; ++q) {
    for (std::uint64_t D = 1; D <= 30; ++D) {
      const auto [a, b] = split_q(q, D);
      CHECK(a * b == q);
      CHECK(std::gcd(b, D) == 1);
      CHECK(std::gcd(a, b) == 1);
      std::uint64_t r = a;
      for (auto [p, e] : oracle::factor(a)) CHECK(D % p == 0);
      (void)r;
    }
  }
}

TEST_CASE("delta examples") {
  const auto& t = table();
  CHECK(delta(10, 4, 1, 1, MultiplicativeSpec::unit(), t).delta.real() == doctest::Approx(0.5));
  CHECK(delta(10, 3, 1, 1, MultiplicativeSpec::moebius(), t).delta.real() == doctest::Approx(1.5));
  const auto r = delta(24, 12, 2, 1, MultiplicativeSpec::unit(), t);
  CHECK(r.progression_sum.real() == 2.0);
  CHECK(r.expected.real() == 2.0);
  CHECK(r.delta == r.progression_sum - r.expected);
}

TEST_CASE("delta against enumeration") {
  const auto& t = table();
  std::mt19937_64 rng(21);
  const auto tau3 = MultiplicativeSpec::piltz(3.0);
  for (int i = 0; i < 200; ++i) {
    const std::uint64_t x = 1 + rng() % 3000, q = 1 + rng() % 60, D = 1 + rng() % 12;
    const auto [qd, qp] = split_q(q, D);
    std::int64_t a = static_cast<std::int64_t>(rng() % 200) - 100;
    if (std::gcd(static_cast<std::uint64_t>(std::llabs(a)), qp) != 1) continue;
    const auto got = delta(x, q, D, a, tau3, t);
    const auto want = delta_oracle(x, q, D, a, [](std::uint64_t n) { return cplx(static_cast<double>(oracle::tau_k(n, 3))); });
    CHECK(std::abs(got.delta - want) < 1e-9);
    CHECK(got.a == a);
  }
}

TEST_CASE("coprime residues sum the discrepancy to zero") {
  const auto& t = table();
  for (const auto& f : {MultiplicativeSpec::unit(), MultiplicativeSpec::moebius(), MultiplicativeSpec::piltz(2.0)}) {
    const ProgressionEngine engine(tabulate(f, 5000, t));
    for (std::uint64_t q = 1; q <= 60; ++q) {
      cplx s = 0.0;
      for (std::uint64_t a = 1; a <= q; ++a) {
        if (std::gcd(a, q) == 1) s += engine.delta(q, 1, static_cast<std::int64_t>(a)).delta;
      }
      CHECK(std::abs(s) <= 1e-10 * std::max(1.0, std::abs(engine.class_sum(1, 0))));
    }
  }
}

TEST_CASE("coprime D leaves delta unchanged") {
  const ProgressionEngine engine(tabulate(MultiplicativeSpec::piltz(2.0), 8000, table()));
  for (std::uint64_t q = 1; q <= 80; ++q) {
    for (const std::uint64_t D : {1ULL, 7ULL, 11ULL, 13ULL * 17ULL}) {
      if (std::gcd(q, D) != 1) continue;
      const auto a = engine.delta(q, 1, 1);
      const auto b = engine.delta(q, D, 1);
      CHECK(a.progression_sum == b.progression_sum);
      CHECK(a.expected == b.expected);
    }
  }
}

TEST_CASE("character decomposition") {
  const auto& t = table();
  CHECK(char_decomposition_residual(24, 12, 2, 1, MultiplicativeSpec::unit(), t) <= 1e-10);
  CHECK(char_decomposition_residual(1000, 35, 2, 3, MultiplicativeSpec::moebius(), t) == 0.0);
  CHECK(char_decomposition_residual(10'000, 20, 2, 3, MultiplicativeSpec::piltz(2.0), t) <= 1e-9);
  CHECK_THROWS_AS(char_decomposition_residual(100, 12, 2, 2, MultiplicativeSpec::unit(), t), ArgumentError);

  const std::vector<MultiplicativeSpec> fs{MultiplicativeSpec::unit(), MultiplicativeSpec::moebius(),
                                           MultiplicativeSpec::piltz(2.0), MultiplicativeSpec::piltz(3.0),
                                           MultiplicativeSpec::power_omega(2.0)};
  std::mt19937_64 rng(33);
  int done = 0;
  while (done < 100) {
    const std::uint64_t x = 1 + rng() % 10'000, q = 1 + rng() % 500, D = 1 + rng() % 30;
    const std::int64_t a = 1 + static_cast<std::int64_t>(rng() % 1000);
    if (std::gcd(static_cast<std::uint64_t>(a), D * q) != 1) continue;
    CHECK(char_decomposition_residual(x, q, D, a, fs[done % fs.size()], t) <= 1e-9);
    ++done;
  }
}

TEST_CASE("bv aggregate") {
  const auto& t = table();
  BvParams p;
  p.x = 1000;
  p.Q = 1;
  p.R = 1;
  for (const auto mode : {BvMode::Signed, BvMode::AbsOverR, BvMode::MaxOverA}) {
    p.mode = mode;
    CHECK(bv_aggregate(p, MultiplicativeSpec::moebius(), t) == doctest::Approx(0.0));
  }

  p.Q = 10;
  p.mode = BvMode::AbsOverR;
  cplx s = 0.0;
  for (std::uint64_t q = 1; q <= 10; ++q) s += delta_oracle(1000, q, 1, 1, [](std::uint64_t) { return cplx(1.0); });
  CHECK(bv_aggregate(p, MultiplicativeSpec::unit(), t) == doctest::Approx(std::abs(s)).epsilon(1e-12));
}

TEST_CASE("bv aggregate modes against enumeration") {
  const auto& t = table();
  const auto mu = [](std::uint64_t n) { return cplx(mu_d(n)); };
  BvParams p;
  p.x = 3000;
  p.Q = 12;
  p.R = 5;
  p.a = 1;
  p.D = 2;
  p.xi = {1.0, -1.0, cplx(0.0, 1.0), 0.5, 2.0};
  p.K = 2.0;

  double abs_r = 0.0;
  cplx signed_sum = 0.0;
  for (std::uint64_t r = 1; r <= p.R; ++r) {
    cplx inner = 0.0;
    for (std::uint64_t q = 1; q <= p.Q; ++q) inner += p.xi[r - 1] * delta_oracle(p.x, q * r, p.D, p.a, mu);
    abs_r += std::abs(inner);
    signed_sum += inner;
  }
  p.mode = BvMode::AbsOverR;
  CHECK(bv_aggregate(p, MultiplicativeSpec::moebius(), t) == doctest::Approx(abs_r).epsilon(1e-10));
  p.mode = BvMode::Signed;
  CHECK(bv_aggregate(p, MultiplicativeSpec::moebius(), t) == doctest::Approx(std::abs(signed_sum)).epsilon(1e-10));

  double mx = 0.0;
  for (std::uint64_t q = 1; q <= p.Q; ++q) {
    double best = 0.0;
    // Every class a mod q with (a, qD) = 1 has a representative below qD.
    for (std::uint64_t a = 1; a <= q * p.D; ++a) {
      if (std::gcd(a, q * p.D) != 1) continue;
      best = std::max(best, std::abs(delta_oracle(p.x, q, p.D, static_cast<std::int64_t>(a), mu)));
    }
    mx += best;
  }
  p.mode = BvMode::MaxOverA;
  CHECK(bv_aggregate(p, MultiplicativeSpec::moebius(), t) == doctest::Approx(mx).epsilon(1e-10));
}

TEST_CASE("bv weights are validated") {
  BvParams p;
  p.x = 100;
  p.Q = 3;
  p.R = 2;
  p.xi = {1.0, 3.0};  // tau_1(2) = 1
  CHECK_THROWS_AS(bv_aggregate(p, MultiplicativeSpec::moebius(), table()), ValidationError);
  p.K = 2.0;  // tau_2(2) = 2
  CHECK_THROWS_AS(bv_aggregate(p, MultiplicativeSpec::moebius(), table()), ValidationError);
  p.K = 3.0;
  CHECK_NOTHROW(bv_aggregate(p, MultiplicativeSpec::moebius(), table()));
}

TEST_CASE("tau_real at integers") {
  for (std::uint64_t n = 1; n <= 200; ++n) {
    for (unsigned k = 1; k <= 4; ++k) CHECK(tau_real(n, k) == doctest::Approx(static_cast<double>(oracle::tau_k(n, k))));
  }
}

TEST_CASE("bv aggregate does not depend on the worker count") {
  BvParams p;
  p.x = 200'000;
  p.Q = 120;
  p.mode = BvMode::MaxOverA;
  set_worker_count(1);
  const double a = bv_aggregate(p, MultiplicativeSpec::moebius(), table());
  set_worker_count(3);
  const double b = bv_aggregate(p, MultiplicativeSpec::moebius(), table());
  set_worker_count(0);
  CHECK(std::fabs(a - b) <= 1e-10 * std::max(1.0, a));
}

TEST_CASE("bilinear discrepancy") {
  const std::vector<cplx> ones{1.0, 1.0};
  CHECK(bilinear_delta(2, 2, 3, 1, ones, ones).real() == doctest::Approx(0.5));
  CHECK(bilinear_delta(2, 2, 1, 1, ones, ones) == cplx(0.0));
  CHECK(bilinear_delta(2, 2, 3, 1, ones, ones, std::pair{15.0, 16.0}).real() == doctest::Approx(0.5));
  // Products in (9, 12] are 12 and 12; neither is a unit mod 3.
  CHECK(bilinear_delta(2, 2, 3, 1, ones, ones, std::pair{9.0, 12.0}) == cplx(0.0));
}

TEST_CASE("bilinear discrepancy with indicator weights") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    const std::uint64_t M = 1 + rng() % 40, N = 1 + rng() % 40, q = 1 + rng() % 30;
    std::int64_t a = 1 + static_cast<std::int64_t>(rng() % 30);
    while (std::gcd(static_cast<std::uint64_t>(a), q) != 1) ++a;
    std::vector<cplx> al(M), be(N);
    for (auto& v : al) v = static_cast<double>(rng() % 2);
    for (auto& v : be) v = static_cast<double>(rng() % 2);
    double hit = 0.0, coprime = 0.0;
    for (std::uint64_t m = M + 1; m <= 2 * M; ++m) {
      for (std::uint64_t n = N + 1; n <= 2 * N; ++n) {
        const double w = al[m - M - 1].real() * be[n - N - 1].real();
        if ((m * n) % q == static_cast<std::uint64_t>(a) % q) hit += w;
        if (std::gcd(m * n, q) == 1) coprime += w;
      }
    }
    const double want = hit - coprime / static_cast<double>(oracle::phi(q));
    CHECK(std::abs(bilinear_delta(M, N, q, a, al, be) - want) < 1e-10);
  }
}

TEST_CASE("box sums") {
  const Box b{2, 4, 0};
  CHECK(box_progression_sum(std::span(&b, 1), 5, 1, 1) == doctest::Approx(-0.5));
  CHECK(box_progression_sum(std::span(&b, 1), 5, 1, 1, 3.0) == doctest::Approx(-0.25));
  const Box empty{7, 7, 0};
  CHECK(box_progression_sum(std::span(&empty, 1), 5, 1, 1) == 0.0);
  CHECK_THROWS_AS(box_progression_sum(std::span(&b, 1), 5, 1, 5), ArgumentError);
}

TEST_CASE("box sums against enumeration") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 60; ++i) {
    const std::size_t k = 1 + i % 3;
    const std::uint64_t D = 1 + rng() % 6;
    std::uint64_t q = 1 + rng() % 20;
    while (std::gcd(q, D) != 1) ++q;
    std::int64_t a = 1 + static_cast<std::int64_t>(rng() % 20);
    while (std::gcd(static_cast<std::uint64_t>(a), q) != 1) ++a;
    std::vector<Box> boxes;
    for (std::size_t j = 0; j < k; ++j) {
      const std::uint64_t lo = rng() % 30;
      std::int64_t t = static_cast<std::int64_t>(rng() % D);
      while (std::gcd(static_cast<std::uint64_t>(t), D) != 1) t = (t + 1) % static_cast<std::int64_t>(D);
      boxes.push_back({lo, lo + rng() % 25, t});
    }
    const std::optional<double> Y0 = (i % 2 == 0) ? std::optional<double>(2.0 + static_cast<double>(rng() % 6)) : std::nullopt;
    double want = 0.0;
    std::function<void(std::size_t, std::uint64_t)> walk = [&](std::size_t j, std::uint64_t prod) {
      if (j == boxes.size()) {
        if (Y0 && prod > 1 && static_cast<double>(oracle::factor(prod)[0].first) < *Y0) return;
        want += g_q(static_cast<std::int64_t>(prod), q, a);
        return;
      }
      for (std::uint64_t m = boxes[j].lo + 1; m <= boxes[j].hi; ++m) {
        if (m % D == static_cast<std::uint64_t>(boxes[j].t) % D) walk(j + 1, prod * m);
      }
    };
    walk(0, 1);
    CHECK(box_progression_sum(boxes, q, a, D, Y0) == doctest::Approx(want).epsilon(1e-10));
  }
}
