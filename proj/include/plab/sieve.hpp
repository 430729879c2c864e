#pragma once

// Smallest-prime-factor tables, segmented factorization and the elementary
// arithmetic functions built on top of them.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "plab/errors.hpp"

namespace plab {

struct PrimePower {
  std::uint64_t prime = 0;
  std::uint32_t exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Enough slots for the distinct prime factors of any n < 2^64.
inline constexpr std::size_t kMaxDistinctPrimes = 16;

using FactorBuffer = std::array<PrimePower, kMaxDistinctPrimes>;

/// Canonical decomposition: primes strictly increasing, exponents >= 1,
/// empty exactly for n = 1.
class Factorization {
 public:
  Factorization() = default;
  /// Throws ArgumentError when the pairs are not in canonical order.
  explicit Factorization(std::vector<PrimePower> pairs);
  explicit Factorization(std::span<const PrimePower> pairs)
      : Factorization(std::vector<PrimePower>(pairs.begin(), pairs.end())) {}

  [[nodiscard]] std::span<const PrimePower> pairs() const { return pairs_; }
  [[nodiscard]] std::size_t size() const { return pairs_.size(); }
  [[nodiscard]] bool empty() const { return pairs_.empty(); }
  [[nodiscard]] auto begin() const { return pairs_.begin(); }
  [[nodiscard]] auto end() const { return pairs_.end(); }

  /// Product of p^e; throws RangeError on 64-bit overflow.
  [[nodiscard]] std::uint64_t value() const;

  friend bool operator==(const Factorization&, const Factorization&) = default;

 private:
  std::vector<PrimePower> pairs_;
};

inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{1} << 30;

/// Smallest-prime-factor table over [0, limit] with 32-bit entries.
/// spf[0] and spf[1] hold the sentinel 0.
class SpfTable {
 public:
  /// Throws ArgumentError for limit < 2 and CapacityError when the table
  /// would exceed `memory_budget` bytes.
  static SpfTable build(std::uint64_t limit, std::size_t memory_budget = kDefaultMemoryBudget);

  /// Bytes a table of this limit occupies.
  static std::size_t bytes_for(std::uint64_t limit) { return (limit + 1) * sizeof(std::uint32_t); }

  [[nodiscard]] std::uint64_t limit() const { return spf_.size() - 1; }
  [[nodiscard]] std::uint32_t spf(std::uint64_t n) const {
    check(n);
    return spf_[n];
  }
  [[nodiscard]] std::span<const std::uint32_t> entries() const { return spf_; }
  [[nodiscard]] bool is_prime(std::uint64_t n) const { return n >= 2 && spf(n) == n; }

  /// Writes the factorization of n (1 <= n <= limit) into `buf` and returns
  /// the number of prime powers.
  std::size_t factorize_into(std::uint64_t n, FactorBuffer& buf) const {
    check(n);
    std::size_t k = 0;
    while (n > 1) {
      const std::uint32_t p = spf_[n];
      std::uint32_t e = 0;
      do {
        n /= p;
        ++e;
      } while (spf_[n] == p && n > 1);
      buf[k++] = {p, e};
    }
    return k;
  }

  [[nodiscard]] Factorization factorize(std::uint64_t n) const;

 private:
  explicit SpfTable(std::vector<std::uint32_t> spf) : spf_(std::move(spf)) {}
  void check(std::uint64_t n) const {
    if (n == 0 || n >= spf_.size()) throw RangeError("n outside SPF table range");
  }
  std::vector<std::uint32_t> spf_;
};

SpfTable build_spf_table(std::uint64_t limit, std::size_t memory_budget = kDefaultMemoryBudget);
Factorization factorize(std::uint64_t n, const SpfTable& table);

/// Primes p <= limit in increasing order (plain Eratosthenes, odd-only).
std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);

/// Trial-division factorization for n that may exceed any table.
Factorization factorize_trial(std::uint64_t n);

/// Factorizes windows [lo, hi) of integers using base primes <= sqrt(max_n).
/// Memory is bounded by the window size, not by max_n.
class SegmentedFactorizer {
 public:
  explicit SegmentedFactorizer(std::uint64_t max_n, std::uint64_t window = std::uint64_t{1} << 15);

  [[nodiscard]] std::uint64_t max_n() const { return max_n_; }

  struct Window {
    explicit Window(std::uint64_t size);
    std::uint64_t lo = 0;
    std::vector<std::uint64_t> rem;
    std::vector<std::uint8_t> count;
    std::vector<PrimePower> slots;
    [[nodiscard]] std::span<const PrimePower> factors(std::size_t i) const {
      return {slots.data() + i * kMaxDistinctPrimes, count[i]};
    }
  };

  /// Fills `w` with the factorizations of [lo, hi); requires hi - lo <= window.
  void sieve_window(std::uint64_t lo, std::uint64_t hi, Window& w) const;

  /// Calls fn(n, span<const PrimePower>) for n in [lo, hi), in increasing order.
  template <typename Fn>
  void scan(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
    if (lo == 0) throw RangeError("segmented scan starts at 1");
    if (hi > max_n_ + 1) throw RangeError("segmented scan beyond configured max_n");
    Window w(window_);
    for (std::uint64_t a = lo; a < hi; a += window_) {
      const std::uint64_t b = std::min(hi, a + window_);
      sieve_window(a, b, w);
      for (std::uint64_t i = 0; i < b - a; ++i) fn(a + i, w.factors(i));
    }
  }

 private:
  std::uint64_t max_n_;
  std::uint64_t window_;
  std::vector<std::uint32_t> base_primes_;
};

/// Uniform range-factorization front end over either a monolithic table or a
/// segmented sieve. Both back ends yield identical factorizations.
class FactorScanner {
 public:
  explicit FactorScanner(const SpfTable& table) : table_(&table), limit_(table.limit()) {}
  explicit FactorScanner(std::uint64_t max_n) : segmented_(SegmentedFactorizer(max_n)), limit_(max_n) {}

  [[nodiscard]] std::uint64_t limit() const { return limit_; }
  [[nodiscard]] bool segmented() const { return table_ == nullptr; }

  template <typename Fn>
  void scan(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
    if (table_ != nullptr) {
      if (lo == 0 || hi > table_->limit() + 1) throw RangeError("scan outside SPF table range");
      FactorBuffer buf;
      for (std::uint64_t n = lo; n < hi; ++n) {
        const std::size_t k = table_->factorize_into(n, buf);
        fn(n, std::span<const PrimePower>(buf.data(), k));
      }
    } else {
      segmented_->scan(lo, hi, std::forward<Fn>(fn));
    }
  }

 private:
  const SpfTable* table_ = nullptr;
  std::optional<SegmentedFactorizer> segmented_;
  std::uint64_t limit_ = 0;
};

struct ArithRecord {
  std::uint64_t n = 1;
  unsigned omega = 0;
  unsigned big_omega = 0;
  int mu = 1;
  std::uint64_t phi = 1;
  double lambda_vm = 0.0;
  std::uint64_t p_min = 0;  // 0 encodes P^-(1) = infinity
  std::uint64_t p_max = 1;
  std::uint64_t tau = 1;
};

ArithRecord arith_record(std::uint64_t n, std::span<const PrimePower> f);
ArithRecord arith_record(std::uint64_t n, const SpfTable& table);

/// Counts p | n with p <= t.
struct PrimesBelow {
  double t;
};
/// Counts p | n with p = t (mod D).
struct PrimesInClass {
  std::uint64_t D;
  std::int64_t t;
};
using OmegaMode = std::variant<PrimesBelow, PrimesInClass>;

unsigned omega_restricted(std::span<const PrimePower> f, const OmegaMode& mode);
unsigned omega_restricted(std::uint64_t n, const SpfTable& table, const OmegaMode& mode);

/// Product of the prime powers p^v || n with p <= y.
std::uint64_t smooth_part(std::span<const PrimePower> f, double y);
std::uint64_t smooth_part(std::uint64_t n, double y, const SpfTable& table);

/// #{n <= x : omega(n) = k [, P^+(n) <= y_cap]}.
std::uint64_t level_count(std::uint64_t x, unsigned k, std::optional<double> y_cap, const SpfTable& table);

/// #{n <= x : y-smooth part of n exceeds z}; requires 2 <= y <= z <= x.
std::uint64_t smooth_excess_count(std::uint64_t x, double y, double z, const SpfTable& table);

/// Sum of tau(n) for n <= x read off the table (the direct side of the
/// hyperbola check).
std::uint64_t tau_summatory_direct(std::uint64_t x, const SpfTable& table);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

/// Chunk size shared by all range scans.
inline constexpr std::uint64_t kScanChunk = std::uint64_t{1} << 18;

}  // namespace plab
