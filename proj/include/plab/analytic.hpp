#pragma once

// Euler-product constants, totient-weighted harmonic sums against their main
// terms, the Heath-Brown decomposition of Lambda, the U* cancellation, and
// characteristic functions of limit laws for additive functions.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "plab/sieve.hpp"

namespace plab {

inline constexpr double kEulerGamma = 0.57721566490153286061;

struct ConstantsReport {
  double h = 0.0;       // prod_p (1 + 1/(p(p-1)))
  double lambda = 0.0;  // gamma - sum_p log p / (1 + p(p-1))
  std::uint64_t P = 0;  // primes p <= P were used
  double h_tail = 0.0;       // |h - h_P| <= h_tail
  double lambda_tail = 0.0;  // |lambda - lambda_P| <= lambda_tail
  double tail_bound = 0.0;   // max of the two
};

/// Throws ArgumentError for P < 100.
ConstantsReport global_constants(std::uint64_t P);
/// global_constants(10^7), computed once.
const ConstantsReport& default_constants();
nlohmann::json to_json(const ConstantsReport& c);

struct LocalFactors {
  double g = 1.0;       // prod_{p|n} 1/(1 + p/(p-1)^2)
  double theta = 0.0;   // sum_{p|n} p^2 log p / ((p-1)(p^2-p+1))
  double b_alpha = 1.0; // prod_{p|n} (1 + p^-alpha)
  double idb_r = 1.0;   // prod_{p|n} (1 + r/(p-1))
  double B_R = 1.0;     // prod_{p|n} (1 - p^-3/4)^-R
};

LocalFactors local_factors(std::span<const PrimePower> f, double alpha = 0.5, double r = 1.0, double R = 1.0);
LocalFactors local_factors(std::uint64_t n, const SpfTable& table, double alpha = 0.5, double r = 1.0,
                           double R = 1.0);

struct MainTermCheck {
  double exact = 0.0;
  double main = 0.0;
  double error = 0.0;
};

/// T(R, n) = sum_{r <= R, (r,n)=1} 1/phi(r) against h g(n) (log R + lambda + theta(n)).
/// R <= table.limit().
MainTermCheck t_sum(std::uint64_t R, std::uint64_t n, const SpfTable& table,
                    const ConstantsReport& constants = default_constants());

/// Theta_j(m, n; u) = sum over delta <= u, delta | m^inf, (delta, n) = 1 of (log delta)^j / delta.
double theta_j(unsigned j, std::uint64_t m, std::uint64_t n, double u);

/// T(R, m, n) = sum_{r <= R, (r,n)=1} 1/phi(mr) against
/// (h g(mn)/phi(m)) ({log R + lambda + theta(mn)} Theta_0 - Theta_1) at u = R0.
/// R0 defaults to sqrt(R). Throws ArgumentError unless 1 <= R0 <= R.
MainTermCheck t2_sum(std::uint64_t R, std::uint64_t m, std::uint64_t n, std::optional<double> R0,
                     const SpfTable& table, const ConstantsReport& constants = default_constants());

/// J-fold alternating sum of the Heath-Brown identity at n.
/// Throws DomainError for n > 2y, ArgumentError for n = 0 or J = 0.
double heath_brown_terms(std::uint64_t n, double y, unsigned J);

/// Product of the primes dividing a but not b.
std::uint64_t alpha_ab(std::uint64_t a, std::uint64_t b);

/// |U*| for the tuple. Requires (a,D) = (b,D) = 1, (s, abDm) = 1 and every
/// prime of b dividing am; throws ArgumentError otherwise.
double ustar_residual(std::uint64_t a, std::uint64_t b, std::uint64_t D, std::uint64_t m, std::uint64_t s);
/// True when the tuple satisfies the preconditions of ustar_residual.
bool ustar_admissible(std::uint64_t a, std::uint64_t b, std::uint64_t D, std::uint64_t m, std::uint64_t s);

/// Real additive function given by its values on prime powers.
class AdditiveSpec {
 public:
  using Rule = std::function<double(std::uint64_t p, std::uint32_t nu)>;

  AdditiveSpec(std::string name, Rule rule, bool strongly_additive);

  static AdditiveSpec omega();
  static AdditiveSpec big_omega();
  static AdditiveSpec inverse_prime();
  static AdditiveSpec zero();
  /// Strongly additive with the given prime values.
  static AdditiveSpec from_primes(std::string name, std::function<double(std::uint64_t)> fp);

  /// f_y: same rule on p <= y, zero on prime powers with p > y.
  [[nodiscard]] AdditiveSpec truncated(double y) const;

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] bool strongly_additive() const { return strong_; }
  [[nodiscard]] std::optional<double> truncation() const { return y_; }
  [[nodiscard]] double at(std::uint64_t p, std::uint32_t nu) const;
  [[nodiscard]] double eval(std::span<const PrimePower> f) const;

 private:
  std::string name_;
  Rule rule_;
  bool strong_;
  std::optional<double> y_;
};

struct ThreeSeriesReport {
  std::uint64_t P = 0;
  double large = 0.0;   // sum_{|f(p)| > 1} 1/p
  double square = 0.0;  // sum_{|f(p)| <= 1} f(p)^2/p
  double mean = 0.0;    // sum_{|f(p)| <= 1} f(p)/p
  bool large_converges = true;
  bool square_converges = true;
  bool mean_converges = true;
  [[nodiscard]] bool converges() const { return large_converges && square_converges && mean_converges; }
};

/// Partial sums up to P. A series is flagged convergent when its increment
/// over (P/10, P] is below 1e-6 or at most half the increment over
/// (P/100, P/10]. Heuristic only.
ThreeSeriesReport three_series(const AdditiveSpec& f, std::uint64_t P);

enum class LimitVariant { General, StronglyAdditive, OmegaSameArgument };

/// Euler product over p <= P of the limit-law characteristic function.
/// Throws DomainError when three_series flags divergence.
std::complex<double> phi_limit(double vartheta, double r, const AdditiveSpec& f, std::uint64_t P,
                               LimitVariant variant = LimitVariant::General);
/// Same product restricted to primes in (lo, hi]; no divergence check.
std::complex<double> phi_limit_block(double vartheta, double r, const AdditiveSpec& f, std::uint64_t lo,
                                     std::uint64_t hi, LimitVariant variant);

}  // namespace plab
