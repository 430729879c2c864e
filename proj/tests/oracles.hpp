#pragma once

// Slow reference implementations used only to check the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

inline std::vector<std::pair<std::uint64_t, unsigned>> factor(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::uint64_t phi(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t k = 1; k <= n; ++k) c += std::gcd(k, n) == 1;
  return c;
}

inline std::uint64_t tau(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t d = 1; d <= n; ++d) c += n % d == 0;
  return c;
}

inline int mu(std::uint64_t n) {
  int m = 1;
  for (auto [p, e] : factor(n)) {
    if (e > 1) return 0;
    m = -m;
  }
  return m;
}

inline unsigned omega(std::uint64_t n) { return static_cast<unsigned>(factor(n).size()); }

inline double von_mangoldt(std::uint64_t n) {
  const auto f = factor(n);
  return f.size() == 1 ? std::log(static_cast<double>(f[0].first)) : 0.0;
}

// Number of ordered factorizations n = d_1 ... d_k.
inline std::uint64_t tau_k(std::uint64_t n, unsigned k) {
  if (k == 1) return 1;
  std::uint64_t s = 0;
  for (std::uint64_t d = 1; d <= n; ++d) {
    if (n % d == 0) s += tau_k(n / d, k - 1);
  }
  return s;
}

}  // namespace oracle

namespace oracle {

// zeta(s) for real s > 1 from the alternating eta series, accelerated with
// the Cohen-Rodriguez Villegas-Zagier weights.
inline double zeta(double s, int terms = 60) {
  const double d0 = std::pow(3.0 + std::sqrt(8.0), terms);
  const double d = (d0 + 1.0 / d0) / 2.0;
  double b = -1.0, c = -d, acc = 0.0;
  for (int k = 0; k < terms; ++k) {
    c = b - c;
    acc += c * std::pow(k + 1.0, -s);
    b = b * (k + terms) * (k - terms) / ((k + 0.5) * (k + 1.0));
  }
  const double eta = acc / d;
  return eta / (1.0 - std::pow(2.0, 1.0 - s));
}

inline std::vector<std::uint64_t> primes(std::uint64_t n) {
  std::vector<bool> comp(n + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= n; j += i) comp[j] = true;
  }
  return out;
}

// Least-squares slope of log|y| against log x, negated.
inline double decay_exponent(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]), ly = std::log(std::fabs(ys[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
