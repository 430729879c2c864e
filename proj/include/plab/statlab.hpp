#pragma once

// Experiments on shifted level sets {n : omega(n - 1) = k}: characteristic
// functions, Erdos-Kac distances, tau(n - 1)-weighted iterated-logarithm
// statistics, and divisor correlations.

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "plab/analytic.hpp"
#include "plab/multiplicative.hpp"
#include "plab/sieve.hpp"

namespace plab {

/// Weighted sample of real values.
class EmpiricalDistribution {
 public:
  /// Throws ArgumentError for negative or non-finite weights.
  void add(double value, double weight = 1.0);
  /// Concatenation.
  void merge(const EmpiricalDistribution& other);

  [[nodiscard]] std::size_t size() const { return samples_.size(); }
  [[nodiscard]] double total_weight() const;
  [[nodiscard]] const std::vector<std::pair<double, double>>& samples() const;

  /// Weight fraction of samples <= t.
  [[nodiscard]] double cdf(double t) const;
  /// Weight fraction of samples < t.
  [[nodiscard]] double cdf_left(double t) const;
  /// sup_t |F_emp(t) - F(t)| for a continuous F, checking both sides of every jump.
  [[nodiscard]] double kolmogorov(const std::function<double(double)>& F) const;
  /// sup_t |F_this(t) - F_other(t)| between two step functions.
  [[nodiscard]] double kolmogorov(const EmpiricalDistribution& other) const;

  /// Rows value,weight,cdf over distinct values, ascending.
  [[nodiscard]] std::string to_csv() const;

 private:
  void sort() const;
  mutable std::vector<std::pair<double, double>> samples_;
  mutable bool sorted_ = true;
  mutable std::vector<double> cum_;  // cumulative weight after each sorted sample
};

double normal_cdf(double t);

/// All 1 < n <= x with omega(n - 1) = k, increasing. x <= table.limit().
std::vector<std::uint64_t> shifted_level_scan(std::uint64_t x, unsigned k, const SpfTable& table);

struct CfReport {
  std::vector<std::complex<double>> values;  // one per theta
  std::uint64_t scanned_count = 0;           // #{1 < n <= x : omega(n - 1) = k}
  std::uint64_t pi_k = 0;                    // #{n <= x : omega(n) = k}
};

/// Phi_k(theta; x), normalized by scanned_count. Throws DomainError on an empty level set.
CfReport empirical_cf(std::uint64_t x, unsigned k, const AdditiveSpec& f, std::span<const double> thetas,
                      const SpfTable& table);

struct EkReport {
  double A = 0.0;  // sum_{p <= x} f(p)/p
  double B = 0.0;  // sqrt(sum_{p <= x} f(p)^2/p)
  double kolmogorov = 0.0;
  std::uint64_t count = 0;
  double kubilius_ratio = 0.0;  // B_y / B_x with y = x^{1/log log x}
};

/// Kolmogorov distance of (f(n) - A)/B over the shifted level set to N(0,1).
/// Throws DomainError when B = 0 or the level set is empty.
EkReport ek_distance(std::uint64_t x, unsigned k, const AdditiveSpec& f, const SpfTable& table);

/// The grid exp(exp(j/4)) intersected with (xi, x].
std::vector<double> default_lil_grid(double xi, double x);

struct FullScan {};
struct WeightedSample {
  std::uint64_t size = 0;
  std::uint64_t seed = 0;
};
using LilSampler = std::variant<FullScan, WeightedSample>;

struct LilProfile {
  double xi = 0.0;
  std::vector<double> t_grid;
  EmpiricalDistribution M;
  EmpiricalDistribution M_plus;
  EmpiricalDistribution M_minus;
  std::uint64_t samples = 0;
};

/// Lambda(n, t) = (omega(n, t) - log2 t) / sqrt(2 log2 t log4 t), iterated logs.
double lil_lambda(unsigned omega_t, double t);

/// M, M+ and M- over the grid for n in (1, x], weighted by tau(n - 1).
/// A full scan uses the table when it covers x, otherwise a segmented pass.
/// The weighted sampler draws n - 1 with probability proportional to tau
/// through uniform lattice points under the hyperbola de <= x - 1.
/// Throws DomainError for grid points with log4 t <= 0 or below xi.
LilProfile lil_profile(std::uint64_t x, double xi, std::vector<double> t_grid, const LilSampler& sampler,
                       const SpfTable* table = nullptr);

struct VonMangoldt {};
using CorrWeight = std::variant<MultiplicativeSpec, VonMangoldt>;

/// sum_{|h| < n <= x} w(n) tau(n + h). Needs x + |h| <= table.limit().
std::complex<double> corr_tau(std::uint64_t x, const CorrWeight& weight, std::int64_t h, const SpfTable& table);

/// sum_{n <= x} tau(n) by the hyperbola method.
std::uint64_t hyperbola_tau(std::uint64_t x);

struct LevelsetCount {
  std::uint64_t count = 0;  // #{n <= x : (n, d) = 1, omega(n) = k}
  std::uint64_t pi_k = 0;
  double main = 0.0;        // pi_k / prod_{p | d} (1 + r/(p - 1)), r = (k - 1)/log log x
  double error = 0.0;
};

LevelsetCount levelset_euler_count(std::uint64_t x, unsigned k, std::uint64_t d, const SpfTable& table);

}  // namespace plab
