#include "plab/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "plab/errors.hpp"
#include "plab/parallel.hpp"
#include "plab/progressions.hpp"
#include "plab/summation.hpp"

namespace plab {

ConstantsReport global_constants(std::uint64_t P) {
  if (P < 100) throw ArgumentError("global_constants: P must be >= 100");
  CompensatedSum log_h, lam;
  for (const std::uint64_t p : primes_up_to(P)) {
    const double pd = static_cast<double>(p);
    const double pp1 = pd * (pd - 1.0);
    log_h += std::log1p(1.0 / pp1);
    lam += std::log(pd) / (1.0 + pp1);
  }
  ConstantsReport c;
  c.P = P;
  c.h = std::exp(log_h.value());
  c.lambda = kEulerGamma - lam.value();
  const double Pd = static_cast<double>(P);
  // sum_{n>P} 1/(n(n-1)) = 1/P bounds the log of the missing factors
  c.h_tail = c.h * std::expm1(1.0 / Pd);
  // sum_{n>P} log n/(n-1)^2 <= (log P + 1)/(P - 1)
  c.lambda_tail = (std::log(Pd) + 1.0) / (Pd - 1.0);
  c.tail_bound = std::max(c.h_tail, c.lambda_tail);
  return c;
}

const ConstantsReport& default_constants() {
  static const ConstantsReport c = global_constants(10'000'000);
  return c;
}

nlohmann::json to_json(const ConstantsReport& c) {
  return {{"h", c.h},           {"lambda", c.lambda},           {"P", c.P},
          {"h_tail", c.h_tail}, {"lambda_tail", c.lambda_tail}, {"tail_bound", c.tail_bound}};
}

LocalFactors local_factors(std::span<const PrimePower> f, double alpha, double r, double R) {
  LocalFactors out;
  for (const auto& pp : f) {
    const double p = static_cast<double>(pp.prime);
    out.g /= 1.0 + p / ((p - 1.0) * (p - 1.0));
    out.theta += p * p * std::log(p) / ((p - 1.0) * (p * p - p + 1.0));
    out.b_alpha *= 1.0 + std::pow(p, -alpha);
    out.idb_r *= 1.0 + r / (p - 1.0);
    out.B_R *= std::pow(1.0 - std::pow(p, -0.75), -R);
  }
  return out;
}

LocalFactors local_factors(std::uint64_t n, const SpfTable& table, double alpha, double r, double R) {
  if (n > table.limit()) throw RangeError("local_factors: n exceeds table limit");
  FactorBuffer buf;
  const std::size_t k = table.factorize_into(n, buf);
  return local_factors(std::span<const PrimePower>(buf.data(), k), alpha, r, R);
}

namespace {

LocalFactors factors_of(std::uint64_t n) {
  const auto f = factorize_trial(n);
  return local_factors(f.pairs());
}

std::uint64_t phi_of(std::span<const PrimePower> f) {
  std::uint64_t v = 1;
  for (const auto& [p, e] : f) {
    v *= p - 1;
    for (std::uint32_t i = 1; i < e; ++i) v *= p;
  }
  return v;
}

}  // namespace

MainTermCheck t_sum(std::uint64_t R, std::uint64_t n, const SpfTable& table, const ConstantsReport& constants) {
  if (R == 0 || n == 0) throw ArgumentError("t_sum: R and n must be >= 1");
  if (R > table.limit()) throw RangeError("t_sum: R exceeds table limit");
  const FactorScanner scanner(table);
  const CompensatedSum s = parallel_map_reduce(
      1, R + 1, kScanChunk, CompensatedSum{},
      [&](Chunk c) {
        CompensatedSum part;
        scanner.scan(c.lo, c.hi, [&](std::uint64_t r, std::span<const PrimePower> f) {
          if (std::gcd(r, n) == 1) part += 1.0 / static_cast<double>(phi_of(f));
        });
        return part;
      },
      [](CompensatedSum a, const CompensatedSum& b) {
        a.merge(b);
        return a;
      });
  const LocalFactors lf = factors_of(n);
  MainTermCheck out;
  out.exact = s.value();
  out.main = constants.h * lf.g * (std::log(static_cast<double>(R)) + constants.lambda + lf.theta);
  out.error = out.exact - out.main;
  return out;
}

double theta_j(unsigned j, std::uint64_t m, std::uint64_t n, double u) {
  if (m == 0 || n == 0) throw ArgumentError("theta_j: m and n must be >= 1");
  std::vector<std::uint64_t> primes;
  for (const auto& pp : factorize_trial(m)) {
    if (n % pp.prime != 0) primes.push_back(pp.prime);
  }
  CompensatedSum s;
  // depth-first over delta = prod p_i^{e_i}
  std::function<void(std::size_t, std::uint64_t)> walk = [&](std::size_t i, std::uint64_t delta) {
    if (i == primes.size()) {
      const double d = static_cast<double>(delta);
      s += std::pow(std::log(d), static_cast<double>(j)) / d;
      return;
    }
    for (std::uint64_t v = delta; static_cast<double>(v) <= u; v *= primes[i]) {
      walk(i + 1, v);
      if (v > std::numeric_limits<std::uint64_t>::max() / primes[i]) break;
    }
  };
  if (u >= 1.0) walk(0, 1);
  return s.value();
}

MainTermCheck t2_sum(std::uint64_t R, std::uint64_t m, std::uint64_t n, std::optional<double> R0,
                     const SpfTable& table, const ConstantsReport& constants) {
  if (R == 0 || m == 0 || n == 0) throw ArgumentError("t2_sum: R, m, n must be >= 1");
  if (R > table.limit()) throw RangeError("t2_sum: R exceeds table limit");
  const double Rd = static_cast<double>(R);
  const double r0 = R0.value_or(std::sqrt(Rd));
  if (!(r0 >= 1.0 && r0 <= Rd)) throw ArgumentError("t2_sum: need 1 <= R0 <= R");
  const double phi_m = static_cast<double>(euler_phi(m));
  const FactorScanner scanner(table);
  const CompensatedSum s = parallel_map_reduce(
      1, R + 1, kScanChunk, CompensatedSum{},
      [&](Chunk c) {
        CompensatedSum part;
        scanner.scan(c.lo, c.hi, [&](std::uint64_t r, std::span<const PrimePower> f) {
          if (std::gcd(r, n) != 1) return;
          // phi(mr) = phi(m) phi(r) d / phi(d), d = (m, r)
          const std::uint64_t d = std::gcd(m, r);
          const double corr = d == 1 ? 1.0 : static_cast<double>(d) / static_cast<double>(euler_phi(d));
          part += 1.0 / (phi_m * static_cast<double>(phi_of(f)) * corr);
        });
        return part;
      },
      [](CompensatedSum a, const CompensatedSum& b) {
        a.merge(b);
        return a;
      });
  const LocalFactors lf = factors_of(m * n);
  MainTermCheck out;
  out.exact = s.value();
  out.main = constants.h * lf.g / phi_m *
             ((std::log(Rd) + constants.lambda + lf.theta) * theta_j(0, m, n, r0) - theta_j(1, m, n, r0));
  out.error = out.exact - out.main;
  return out;
}

double heath_brown_terms(std::uint64_t n, double y, unsigned J) {
  if (n == 0) throw ArgumentError("heath_brown_terms: n must be >= 1");
  if (J == 0) throw ArgumentError("heath_brown_terms: J must be >= 1");
  if (static_cast<double>(n) > 2.0 * y) throw DomainError("heath_brown_terms: identity needs n <= 2y");
  if (n == 1) return 0.0;

  // Arithmetic on the divisor lattice of n.
  const auto fac = factorize_trial(n);
  std::vector<std::uint64_t> divs{1};
  for (const auto& [p, e] : fac) {
    const std::size_t cur = divs.size();
    std::uint64_t pk = 1;
    for (std::uint32_t k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < cur; ++i) divs.push_back(divs[i] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  std::map<std::uint64_t, std::size_t> index;
  for (std::size_t i = 0; i < divs.size(); ++i) index[divs[i]] = i;
  const std::size_t nd = divs.size();
  using Fn = std::vector<double>;
  auto convolve = [&](const Fn& a, const Fn& b) {
    Fn c(nd, 0.0);
    for (std::size_t i = 0; i < nd; ++i) {
      for (std::size_t k = 0; k < nd; ++k) {
        if (divs[i] % divs[k] == 0) c[i] += a[k] * b[index[divs[i] / divs[k]]];
      }
    }
    return c;
  };

  Fn mu_cut(nd, 0.0), logf(nd, 0.0), one(nd, 1.0);
  for (std::size_t i = 0; i < nd; ++i) {
    const std::uint64_t d = divs[i];
    logf[i] = std::log(static_cast<double>(d));
    // m <= y^{1/J}  <=>  m^J <= y
    if (std::pow(static_cast<long double>(d), static_cast<long double>(J)) > static_cast<long double>(y)) continue;
    int mu = 1;
    for (const auto& [p, e] : fac) {
      if (d % p != 0) continue;
      if ((d / p) % p == 0) {
        mu = 0;
        break;
      }
      mu = -mu;
    }
    mu_cut[i] = mu;
  }

  CompensatedSum total;
  Fn mu_pow = mu_cut;  // (mu 1_{<= z})^{*j}
  Fn log_tau = logf;   // log * 1^{*(j-1)}
  double binom = 1.0;
  for (unsigned j = 1; j <= J; ++j) {
    if (j > 1) {
      mu_pow = convolve(mu_pow, mu_cut);
      log_tau = convolve(log_tau, one);
    }
    binom = binom * static_cast<double>(J - j + 1) / static_cast<double>(j);
    const Fn term = convolve(mu_pow, log_tau);
    total += ((j % 2 == 1) ? 1.0 : -1.0) * binom * term[nd - 1];
  }
  return total.value();
}

std::uint64_t alpha_ab(std::uint64_t a, std::uint64_t b) {
  if (a == 0) throw ArgumentError("alpha_ab: a must be >= 1");
  std::uint64_t out = 1;
  for (const auto& pp : factorize_trial(a)) {
    if (b % pp.prime != 0) out *= pp.prime;
  }
  return out;
}

bool ustar_admissible(std::uint64_t a, std::uint64_t b, std::uint64_t D, std::uint64_t m, std::uint64_t s) {
  if (a == 0 || b == 0 || D == 0 || m == 0 || s == 0) return false;
  if (std::gcd(a, D) != 1 || std::gcd(b, D) != 1) return false;
  if (std::gcd(s, a) != 1 || std::gcd(s, b) != 1 || std::gcd(s, D) != 1 || std::gcd(s, m) != 1) return false;
  for (const auto& pp : factorize_trial(b)) {
    if (a % pp.prime != 0 && m % pp.prime != 0) return false;
  }
  return true;
}

double ustar_residual(std::uint64_t a, std::uint64_t b, std::uint64_t D, std::uint64_t m, std::uint64_t s) {
  if (!ustar_admissible(a, b, D, m, s)) throw ArgumentError("ustar_residual: tuple violates coprimality preconditions");
  // Everything is computed from prime sets, so no large products are formed.
  std::vector<std::uint64_t> base;  // primes of b D m s
  for (const std::uint64_t v : {b, D, m, s}) {
    for (const auto& pp : factorize_trial(v)) base.push_back(pp.prime);
  }
  std::vector<std::uint64_t> base_a;  // primes of a D m s
  for (const std::uint64_t v : {a, D, m, s}) {
    for (const auto& pp : factorize_trial(v)) base_a.push_back(pp.prime);
  }
  auto uniq = [](std::vector<std::uint64_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  uniq(base);
  uniq(base_a);
  auto g_of = [](const std::vector<std::uint64_t>& primes) {
    double g = 1.0;
    for (const std::uint64_t p : primes) {
      const double pd = static_cast<double>(p);
      g /= 1.0 + pd / ((pd - 1.0) * (pd - 1.0));
    }
    return g;
  };
  auto inv_euler = [](std::uint64_t p) { return 1.0 / (1.0 - 1.0 / static_cast<double>(p)); };
  const auto s_fac = factorize_trial(s);
  const double phi_s = static_cast<double>(euler_phi(s));

  std::vector<std::uint64_t> alpha_primes;
  for (const auto& pp : factorize_trial(alpha_ab(a, b))) {
    if (m % pp.prime != 0) alpha_primes.push_back(pp.prime);  // e | alpha with (e, m) = 1
  }
  auto divides_bDm = [&](std::uint64_t p) { return b % p == 0 || D % p == 0 || m % p == 0; };

  CompensatedSum first;
  const std::size_t subsets = std::size_t{1} << alpha_primes.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    std::vector<std::uint64_t> primes = base;
    std::vector<std::uint64_t> e_primes;
    double phi_e = 1.0;
    for (std::size_t i = 0; i < alpha_primes.size(); ++i) {
      if (mask >> i & 1) {
        e_primes.push_back(alpha_primes[i]);
        phi_e *= static_cast<double>(alpha_primes[i] - 1);
      }
    }
    primes.insert(primes.end(), e_primes.begin(), e_primes.end());
    uniq(primes);
    double prod = 1.0;
    for (const std::uint64_t p : e_primes) {
      if (!divides_bDm(p)) prod *= inv_euler(p);
    }
    for (const auto& pp : s_fac) {
      if (!divides_bDm(pp.prime)) prod *= inv_euler(pp.prime);
    }
    const double mu = (e_primes.size() % 2 == 0) ? 1.0 : -1.0;
    first += mu * g_of(primes) / (phi_e * phi_s) * prod;
  }
  double second = g_of(base_a) / phi_s;
  for (const auto& pp : s_fac) {
    if (a % pp.prime != 0 && D % pp.prime != 0 && m % pp.prime != 0) second *= inv_euler(pp.prime);
  }
  return std::abs(first.value() - second);
}

AdditiveSpec::AdditiveSpec(std::string name, Rule rule, bool strongly_additive)
    : name_(std::move(name)), rule_(std::move(rule)), strong_(strongly_additive) {}

AdditiveSpec AdditiveSpec::omega() {
  return AdditiveSpec("omega", [](std::uint64_t, std::uint32_t) { return 1.0; }, true);
}

AdditiveSpec AdditiveSpec::big_omega() {
  return AdditiveSpec("big_omega", [](std::uint64_t, std::uint32_t nu) { return static_cast<double>(nu); }, false);
}

AdditiveSpec AdditiveSpec::inverse_prime() {
  return AdditiveSpec("inverse_prime", [](std::uint64_t p, std::uint32_t) { return 1.0 / static_cast<double>(p); },
                      true);
}

AdditiveSpec AdditiveSpec::zero() {
  return AdditiveSpec("zero", [](std::uint64_t, std::uint32_t) { return 0.0; }, true);
}

AdditiveSpec AdditiveSpec::from_primes(std::string name, std::function<double(std::uint64_t)> fp) {
  return AdditiveSpec(std::move(name), [fp = std::move(fp)](std::uint64_t p, std::uint32_t) { return fp(p); }, true);
}

AdditiveSpec AdditiveSpec::truncated(double y) const {
  AdditiveSpec out = *this;
  out.y_ = y_ ? std::min(*y_, y) : y;
  out.name_ = name_ + "_y";
  return out;
}

double AdditiveSpec::at(std::uint64_t p, std::uint32_t nu) const {
  if (y_ && static_cast<double>(p) > *y_) return 0.0;
  return rule_(p, strong_ ? 1u : nu);
}

double AdditiveSpec::eval(std::span<const PrimePower> f) const {
  double s = 0.0;
  for (const auto& pp : f) s += at(pp.prime, pp.exponent);
  return s;
}

ThreeSeriesReport three_series(const AdditiveSpec& f, std::uint64_t P) {
  ThreeSeriesReport rep;
  rep.P = P;
  const std::uint64_t P1 = P / 10, P2 = P / 100;
  // partial sums at P2, P1, P for each series
  std::array<std::array<CompensatedSum, 3>, 3> s{};
  for (const std::uint64_t p : primes_up_to(P)) {
    const double v = f.at(p, 1);
    const double inv = 1.0 / static_cast<double>(p);
    const std::size_t band = p <= P2 ? 0 : (p <= P1 ? 1 : 2);
    if (std::fabs(v) > 1.0) {
      s[0][band] += inv;
    } else {
      s[1][band] += v * v * inv;
      s[2][band] += v * inv;
    }
  }
  auto flag = [](const std::array<CompensatedSum, 3>& b) {
    const double last = std::fabs(b[2].value());
    const double prev = std::fabs(b[1].value());
    return last < 1e-6 || last <= 0.5 * prev;
  };
  auto total = [](const std::array<CompensatedSum, 3>& b) { return b[0].value() + b[1].value() + b[2].value(); };
  rep.large = total(s[0]);
  rep.square = total(s[1]);
  rep.mean = total(s[2]);
  rep.large_converges = flag(s[0]);
  rep.square_converges = flag(s[1]);
  rep.mean_converges = flag(s[2]);
  return rep;
}

namespace {

std::complex<double> euler_factor(double vartheta, double r, const AdditiveSpec& f, std::uint64_t p,
                                  LimitVariant variant) {
  const double pd = static_cast<double>(p);
  const double denom = pd - 1.0 + r;
  auto e1 = [&](double v) { return std::complex<double>(std::cos(vartheta * v) - 1.0, std::sin(vartheta * v)); };
  switch (variant) {
    case LimitVariant::StronglyAdditive:
      return 1.0 + e1(f.at(p, 1)) / denom;
    case LimitVariant::OmegaSameArgument:
      return 1.0 + r * e1(f.at(p, 1)) / denom;
    case LimitVariant::General:
      break;
  }
  std::complex<double> s = 0.0;
  double pw = 1.0;  // p^{nu-1}
  for (std::uint32_t nu = 1; nu <= 64 && pw < 1e18; ++nu) {
    s += e1(f.at(p, nu)) / (pw * denom);
    pw *= pd;
  }
  return 1.0 + (1.0 - 1.0 / pd) * s;
}

}  // namespace

std::complex<double> phi_limit_block(double vartheta, double r, const AdditiveSpec& f, std::uint64_t lo,
                                     std::uint64_t hi, LimitVariant variant) {
  if (r < 0.0) throw ArgumentError("phi_limit: r must be >= 0");
  std::complex<double> prod = 1.0;
  if (hi <= lo) return prod;
  for (const std::uint64_t p : primes_up_to(hi)) {
    if (p <= lo) continue;
    prod *= euler_factor(vartheta, r, f, p, variant);
  }
  return prod;
}

std::complex<double> phi_limit(double vartheta, double r, const AdditiveSpec& f, std::uint64_t P,
                               LimitVariant variant) {
  const ThreeSeriesReport ts = three_series(f, P);
  if (!ts.converges()) {
    throw DomainError("phi_limit: three-series test flags divergence for " + f.name() + " (large " +
                      (ts.large_converges ? "ok" : "divergent") + ", square " +
                      (ts.square_converges ? "ok" : "divergent") + ", mean " +
                      (ts.mean_converges ? "ok" : "divergent") + ")");
  }
  return phi_limit_block(vartheta, r, f, 0, P, variant);
}

}  // namespace plab
