#pragma once

// Multiplicative function families: Piltz divisor functions, z^omega,
// Moebius, the sum-of-two-squares indicator, prime-class-periodic members of
// F(D, K), sifted wrappers and the (b, c) modification. Also level-set
// indicators chi_{D,T,Phi} and their contour-integral (DFT) extraction.

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "plab/sieve.hpp"

namespace plab {

using cplx = std::complex<double>;

/// Prime-class rule of an F(D, K) member: f(p) depends only on the window
/// (Y_l, Y_{l+1}] containing p and on p mod D.
class PrimeClassRule {
 public:
  using PrimePowerOverrides = std::map<std::pair<std::uint64_t, std::uint32_t>, cplx>;

  /// values[l][t] is f(p) for p in window l and p = t (mod D). Rows must have
  /// length D; non-reduced residues may be left as NaN and default to 1.
  /// Throws ValidationError (growth condition, shape) or ArgumentError.
  PrimeClassRule(std::uint64_t D, double K, std::vector<double> breakpoints,
                 std::vector<std::vector<cplx>> values, PrimePowerOverrides overrides = {});

  [[nodiscard]] std::uint64_t D() const { return D_; }
  [[nodiscard]] double K() const { return K_; }
  [[nodiscard]] const std::vector<double>& breakpoints() const { return breakpoints_; }
  [[nodiscard]] const std::vector<std::vector<cplx>>& values() const { return values_; }
  [[nodiscard]] const PrimePowerOverrides& overrides() const { return overrides_; }
  [[nodiscard]] std::size_t window_count() const { return values_.size(); }

  /// Window of p: l with Y_l < p <= Y_{l+1}; p = 2 lies in window 0.
  /// Throws CoverageError past the last breakpoint.
  [[nodiscard]] std::size_t window_of(std::uint64_t p) const;
  [[nodiscard]] cplx at_prime(std::uint64_t p) const;
  /// Override if present, else the strongly multiplicative value f(p).
  [[nodiscard]] cplx at_prime_power(std::uint64_t p, std::uint32_t nu) const;

 private:
  std::uint64_t D_;
  double K_;
  std::vector<double> breakpoints_;
  std::vector<std::vector<cplx>> values_;
  PrimePowerOverrides overrides_;
};

class MultiplicativeSpec {
 public:
  struct PrimeClassPeriodic {
    std::shared_ptr<const PrimeClassRule> rule;
  };
  struct Piltz {
    cplx z;
  };
  struct PowerOmega {
    cplx z;
  };
  struct Moebius {};
  struct Unit {};
  struct TwoSquares {};
  struct Sifted {
    std::shared_ptr<const MultiplicativeSpec> inner;
    double Y0;
  };
  struct Modified {
    std::shared_ptr<const MultiplicativeSpec> inner;
    std::uint64_t b;
    std::uint64_t c;
  };
  using Variant =
      std::variant<PrimeClassPeriodic, Piltz, PowerOmega, Moebius, Unit, TwoSquares, Sifted, Modified>;

  static MultiplicativeSpec piltz(cplx z);
  static MultiplicativeSpec power_omega(cplx z);
  static MultiplicativeSpec moebius();
  static MultiplicativeSpec unit();
  static MultiplicativeSpec two_squares();
  static MultiplicativeSpec prime_periodic(std::shared_ptr<const PrimeClassRule> rule);
  /// Throws ArgumentError for Y0 < 2.
  static MultiplicativeSpec sifted(const MultiplicativeSpec& inner, double Y0);
  /// Throws ArgumentError for b = 0 or c = 0.
  static MultiplicativeSpec modified(const MultiplicativeSpec& inner, std::uint64_t b, std::uint64_t c);

  [[nodiscard]] const Variant& variant() const { return v_; }
  /// Declared growth bound K: |f(n)| <= tau_ceil(K)(n) for F(D, K) members.
  [[nodiscard]] double K_bound() const { return K_; }
  /// False only for modified specs, which are evaluated literally.
  [[nodiscard]] bool is_multiplicative() const;
  [[nodiscard]] std::string tag() const;

  /// Value at n given its factorization.
  [[nodiscard]] cplx eval(std::uint64_t n, std::span<const PrimePower> f) const;

 private:
  MultiplicativeSpec(Variant v, double K) : v_(std::move(v)), K_(K) {}
  Variant v_;
  double K_;
};

cplx eval_mult(const MultiplicativeSpec& spec, std::uint64_t n, const SpfTable& table);

/// f_{b,c}(n) = f(bn) if (n, c) = 1, else 0.
MultiplicativeSpec restrict_bc(const MultiplicativeSpec& spec, std::uint64_t b, std::uint64_t c);

/// Validates growth condition Y_{n+1}/Y_n >= 1 + 1/(log 2Y_n)^K and |z| <= K.
MultiplicativeSpec make_prime_periodic(std::uint64_t D, double K, std::vector<double> breakpoints,
                                       std::vector<std::vector<cplx>> values,
                                       PrimeClassRule::PrimePowerOverrides prime_power_rule = {});

/// tau_z(p^nu) = z(z+1)...(z+nu-1)/nu!.
cplx piltz_prime_power(cplx z, std::uint32_t nu);

/// Selects integers with omega_{D,t}(n) = Phi(t) for every t in T.
class LevelSelector {
 public:
  /// Throws ArgumentError for non-reduced or repeated residues, or size mismatch.
  LevelSelector(std::uint64_t D, std::vector<std::int64_t> T, std::vector<unsigned> Phi);

  [[nodiscard]] std::uint64_t D() const { return D_; }
  [[nodiscard]] const std::vector<std::uint64_t>& residues() const { return T_; }
  [[nodiscard]] const std::vector<unsigned>& phi() const { return Phi_; }

  /// Index into residues() of p's class, if p mod D is selected.
  [[nodiscard]] std::optional<std::size_t> class_index(std::uint64_t p) const;
  /// omega_{D,t}(n) for every t in T.
  [[nodiscard]] std::vector<unsigned> counts(std::span<const PrimePower> f) const;

 private:
  std::uint64_t D_;
  std::vector<std::uint64_t> T_;
  std::vector<unsigned> Phi_;
};

int chi_level(const LevelSelector& sel, std::span<const PrimePower> f);
int chi_level(const LevelSelector& sel, std::uint64_t n, const SpfTable& table);

/// Discrete Fourier average over L-th roots of unity (one circle per t in T)
/// of f_z(n) * prod z_t^{-Phi(t)}, compared against chi_level. Returns the
/// absolute residual. L defaults to max(1 + floor(log2 n), 1 + max Phi).
/// Throws DomainError when L would alias (L <= some omega_{D,t}(n) or Phi(t)).
double extraction_check(const LevelSelector& sel, std::uint64_t n, std::optional<unsigned> L,
                        const SpfTable& table);

// JSON document form used by experiment configs.
nlohmann::json to_json(const MultiplicativeSpec& spec);
MultiplicativeSpec multiplicative_from_json(const nlohmann::json& j);

}  // namespace plab
