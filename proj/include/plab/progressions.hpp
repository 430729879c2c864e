#pragma once

// Discrepancy of arithmetic functions in progressions, the character
// decomposition check, averaged aggregates over moduli, and bilinear and
// box-shaped progression sums.

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "plab/multiplicative.hpp"
#include "plab/sieve.hpp"

namespace plab {

/// g_q(n; a): 1 - 1/phi(q) if n = a (q), -1/phi(q) if (n, q) = 1, else 0.
/// Throws ArgumentError for q = 0 or (a, q) > 1.
double g_q(std::int64_t n, std::uint64_t q, std::int64_t a);

/// (q_D, q'_D) with q_D = (q, D^inf).
std::pair<std::uint64_t, std::uint64_t> split_q(std::uint64_t q, std::uint64_t D);

std::uint64_t euler_phi(std::uint64_t n);
/// Reduce a into [0, q).
std::uint64_t residue_of(std::int64_t a, std::uint64_t q);

struct DiscrepancyResult {
  cplx progression_sum;
  cplx expected;
  cplx delta;
  std::uint64_t x = 0;
  std::uint64_t q = 1;
  std::uint64_t D = 1;
  std::int64_t a = 0;
};

/// Values f(0..x) with f(0) = 0.
std::vector<cplx> tabulate(const MultiplicativeSpec& spec, std::uint64_t x, const SpfTable& table);

/// Progression sums over a tabulated f(1..x). The d = 1 term of the Moebius
/// expansion of the expected term is cached per (q_D, a mod q_D).
class ProgressionEngine {
 public:
  explicit ProgressionEngine(std::vector<cplx> values);

  [[nodiscard]] std::uint64_t x() const { return values_.empty() ? 0 : values_.size() - 1; }
  [[nodiscard]] const std::vector<cplx>& values() const { return values_; }

  /// Sum of f(n) over n <= x with n = r (mod modulus), r in [0, modulus).
  [[nodiscard]] cplx class_sum(std::uint64_t modulus, std::uint64_t r) const;
  /// Sum over n <= x with n = r (mod m1) and (n, m2) = 1, where (m1, m2) = 1.
  [[nodiscard]] cplx coprime_class_sum(std::uint64_t m1, std::uint64_t r, std::uint64_t m2) const;

  /// Throws ArgumentError unless (a, q'_D) = 1.
  [[nodiscard]] DiscrepancyResult delta(std::uint64_t q, std::uint64_t D, std::int64_t a) const;

 private:
  std::vector<cplx> values_;
  cplx total_{};
  mutable std::mutex mu_;
  mutable std::map<std::pair<std::uint64_t, std::uint64_t>, cplx> cache_;
};

/// Delta_f(x; q, D, a). D = 1 gives the plain discrepancy.
DiscrepancyResult delta(std::uint64_t x, std::uint64_t q, std::uint64_t D, std::int64_t a,
                        const MultiplicativeSpec& spec, const SpfTable& table);

/// |Delta_f(x;q,D,a) - (1/phi(q_D)) sum_chi conj(chi(a)) Delta_{f chi}(x; q'_D, a)|.
double char_decomposition_residual(std::uint64_t x, std::uint64_t q, std::uint64_t D, std::int64_t a,
                                   const MultiplicativeSpec& spec, const SpfTable& table);
double char_decomposition_residual(const ProgressionEngine& engine, std::uint64_t q, std::uint64_t D,
                                   std::int64_t a);

enum class BvMode { Signed, AbsOverR, MaxOverA };

struct BvParams {
  std::uint64_t x = 0;
  std::uint64_t Q = 1;
  std::uint64_t R = 1;
  std::int64_t a = 1;
  std::uint64_t D = 1;
  /// xi[r - 1] for r = 1..R; empty means xi = 1.
  std::vector<cplx> xi;
  /// Weights must satisfy |xi_r| <= tau_K(r); defaults to the function's declared K.
  std::optional<double> K;
  BvMode mode = BvMode::AbsOverR;
};

/// Signed: |sum_r sum_q xi_r Delta(x; qr, D, a)|.
/// AbsOverR: sum_r |sum_q xi_r Delta(x; qr, D, a)|, over (r, a) = (q, a) = 1.
/// MaxOverA: sum_{q <= Q} max_{(a, qD) = 1} |Delta(x; q, D, a)|.
double bv_aggregate(const BvParams& params, const MultiplicativeSpec& spec, const SpfTable& table);
double bv_aggregate(const BvParams& params, const ProgressionEngine& engine, double K);

/// tau_K(n) = sum over ordered factorizations, real K >= 0 (Piltz at real z).
double tau_real(std::uint64_t n, double K);

/// Delta_{alpha,beta}(M, N; q, a): alpha on (M, 2M], beta on (N, 2N].
/// With a window only products in (u, v] count.
cplx bilinear_delta(std::uint64_t M, std::uint64_t N, std::uint64_t q, std::int64_t a,
                    std::span<const cplx> alpha, std::span<const cplx> beta,
                    std::optional<std::pair<double, double>> window = std::nullopt);

/// m in (lo, hi] with m = t (mod D).
struct Box {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::int64_t t = 1;
};

/// Sum over m_i in the boxes of g_q(prod m_i; a) * [P^-(prod m_i) >= Y0].
/// Up to three boxes. Throws ArgumentError unless (q, aD) = 1 and (t_i, D) = 1.
double box_progression_sum(std::span<const Box> boxes, std::uint64_t q, std::int64_t a, std::uint64_t D,
                           std::optional<double> Y0 = std::nullopt);

}  // namespace plab
