#include "plab/sieve.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "plab/parallel.hpp"

namespace plab {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

Factorization::Factorization(std::vector<PrimePower> pairs) : pairs_(std::move(pairs)) {
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (pairs_[i].prime < 2 || pairs_[i].exponent == 0) {
      throw ArgumentError("factorization entries need prime >= 2 and exponent >= 1");
    }
    if (i > 0 && pairs_[i - 1].prime >= pairs_[i].prime) {
      throw ArgumentError("factorization primes must be strictly increasing");
    }
  }
}

std::uint64_t Factorization::value() const {
  std::uint64_t v = 1;
  for (const auto& [p, e] : pairs_) {
    for (std::uint32_t i = 0; i < e; ++i) {
      if (v > std::numeric_limits<std::uint64_t>::max() / p) throw RangeError("factorization value overflows");
      v *= p;
    }
  }
  return v;
}

SpfTable SpfTable::build(std::uint64_t limit, std::size_t memory_budget) {
  if (limit < 2) throw ArgumentError("SPF table limit must be at least 2");
  if (limit >= std::numeric_limits<std::uint32_t>::max()) {
    throw CapacityError("SPF table limit exceeds 32-bit entry capacity; use the segmented factorizer");
  }
  if (bytes_for(limit) > memory_budget) {
    throw CapacityError("SPF table of limit " + std::to_string(limit) + " needs " +
                        std::to_string(bytes_for(limit)) + " bytes, budget is " +
                        std::to_string(memory_budget));
  }
  std::vector<std::uint32_t> spf(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  primes.reserve(static_cast<std::size_t>(1.3 * static_cast<double>(limit) / std::log(static_cast<double>(limit))) + 16);
  // Linear sieve: every composite is written exactly once, by its least prime.
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    const std::uint32_t si = spf[i];
    for (const std::uint32_t p : primes) {
      if (p > si || i * p > limit) break;
      spf[i * p] = p;
    }
  }
  return SpfTable(std::move(spf));
}

Factorization SpfTable::factorize(std::uint64_t n) const {
  FactorBuffer buf;
  const std::size_t k = factorize_into(n, buf);
  return Factorization(std::vector<PrimePower>(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(k)));
}

SpfTable build_spf_table(std::uint64_t limit, std::size_t memory_budget) {
  return SpfTable::build(limit, memory_budget);
}

Factorization factorize(std::uint64_t n, const SpfTable& table) {
  if (n > table.limit()) throw RangeError("factorize: n exceeds table limit");
  return table.factorize(n);
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  out.push_back(2);
  const std::uint64_t half = (limit - 1) / 2;  // index i <-> 2i + 1
  std::vector<bool> composite(half + 1, false);
  for (std::uint64_t i = 1; i <= half; ++i) {
    if (composite[i]) continue;
    const std::uint64_t p = 2 * i + 1;
    out.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t j = (p * p - 1) / 2; j <= half; j += p) composite[j] = true;
  }
  return out;
}

Factorization factorize_trial(std::uint64_t n) {
  if (n == 0) throw ArgumentError("factorize_trial: n must be positive");
  std::vector<PrimePower> out;
  auto strip = [&](std::uint64_t p) {
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.push_back({p, e});
  };
  strip(2);
  strip(3);
  for (std::uint64_t p = 5; p * p <= n; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (n > 1) out.push_back({n, 1});
  return Factorization(std::move(out));
}

SegmentedFactorizer::Window::Window(std::uint64_t size)
    : rem(size), count(size), slots(size * kMaxDistinctPrimes) {}

SegmentedFactorizer::SegmentedFactorizer(std::uint64_t max_n, std::uint64_t window)
    : max_n_(max_n), window_(std::max<std::uint64_t>(window, 64)) {
  if (max_n < 1) throw ArgumentError("segmented factorizer needs max_n >= 1");
  const auto base = primes_up_to(isqrt(max_n));
  base_primes_.assign(base.begin(), base.end());
}

void SegmentedFactorizer::sieve_window(std::uint64_t lo, std::uint64_t hi, Window& w) const {
  if (lo == 0 || hi <= lo || hi - lo > window_ || hi > max_n_ + 1) {
    throw RangeError("invalid segmented window");
  }
  const std::uint64_t len = hi - lo;
  w.lo = lo;
  for (std::uint64_t i = 0; i < len; ++i) {
    w.rem[i] = lo + i;
    w.count[i] = 0;
  }
  const std::uint64_t top = hi - 1;
  for (const std::uint64_t p : base_primes_) {
    if (p * p > top) break;
    for (std::uint64_t j = ((lo + p - 1) / p) * p; j < hi; j += p) {
      const std::uint64_t i = j - lo;
      std::uint64_t r = w.rem[i];
      std::uint32_t e = 0;
      do {
        r /= p;
        ++e;
      } while (r % p == 0);
      w.rem[i] = r;
      w.slots[i * kMaxDistinctPrimes + w.count[i]++] = {p, e};
    }
  }
  for (std::uint64_t i = 0; i < len; ++i) {
    if (w.rem[i] > 1) w.slots[i * kMaxDistinctPrimes + w.count[i]++] = {w.rem[i], 1};
  }
}

ArithRecord arith_record(std::uint64_t n, std::span<const PrimePower> f) {
  ArithRecord r;
  r.n = n;
  r.omega = static_cast<unsigned>(f.size());
  r.p_min = f.empty() ? 0 : f.front().prime;
  r.p_max = f.empty() ? 1 : f.back().prime;
  bool squarefree = true;
  for (const auto& [p, e] : f) {
    r.big_omega += e;
    r.tau *= e + 1;
    std::uint64_t pe1 = 1;
    for (std::uint32_t i = 1; i < e; ++i) pe1 *= p;
    r.phi *= pe1 * (p - 1);
    if (e >= 2) squarefree = false;
  }
  r.mu = squarefree ? ((f.size() % 2 == 0) ? 1 : -1) : 0;
  r.lambda_vm = (f.size() == 1) ? std::log(static_cast<double>(f.front().prime)) : 0.0;
  return r;
}

ArithRecord arith_record(std::uint64_t n, const SpfTable& table) {
  FactorBuffer buf;
  const std::size_t k = table.factorize_into(n, buf);
  return arith_record(n, std::span<const PrimePower>(buf.data(), k));
}

unsigned omega_restricted(std::span<const PrimePower> f, const OmegaMode& mode) {
  unsigned c = 0;
  if (const auto* below = std::get_if<PrimesBelow>(&mode)) {
    for (const auto& pp : f) c += static_cast<double>(pp.prime) <= below->t ? 1u : 0u;
    return c;
  }
  const auto& cls = std::get<PrimesInClass>(mode);
  if (cls.D == 0) throw ArgumentError("omega_restricted: D must be >= 1");
  const auto D = static_cast<std::int64_t>(cls.D);
  const std::uint64_t t = static_cast<std::uint64_t>(((cls.t % D) + D) % D);
  for (const auto& pp : f) c += (pp.prime % cls.D == t) ? 1u : 0u;
  return c;
}

unsigned omega_restricted(std::uint64_t n, const SpfTable& table, const OmegaMode& mode) {
  FactorBuffer buf;
  const std::size_t k = table.factorize_into(n, buf);
  return omega_restricted(std::span<const PrimePower>(buf.data(), k), mode);
}

std::uint64_t smooth_part(std::span<const PrimePower> f, double y) {
  std::uint64_t v = 1;
  for (const auto& [p, e] : f) {
    if (static_cast<double>(p) > y) break;
    for (std::uint32_t i = 0; i < e; ++i) v *= p;
  }
  return v;
}

std::uint64_t smooth_part(std::uint64_t n, double y, const SpfTable& table) {
  FactorBuffer buf;
  const std::size_t k = table.factorize_into(n, buf);
  return smooth_part(std::span<const PrimePower>(buf.data(), k), y);
}

std::uint64_t level_count(std::uint64_t x, unsigned k, std::optional<double> y_cap, const SpfTable& table) {
  if (x > table.limit()) throw RangeError("level_count: x exceeds table limit");
  if (x == 0) return 0;
  const FactorScanner scanner(table);
  return parallel_map_reduce(
      1, x + 1, kScanChunk, std::uint64_t{0},
      [&](Chunk c) {
        std::uint64_t cnt = 0;
        scanner.scan(c.lo, c.hi, [&](std::uint64_t, std::span<const PrimePower> f) {
          if (f.size() != k) return;
          if (y_cap && !f.empty() && static_cast<double>(f.back().prime) > *y_cap) return;
          ++cnt;
        });
        return cnt;
      },
      [](std::uint64_t a, std::uint64_t b) { return a + b; });
}

std::uint64_t smooth_excess_count(std::uint64_t x, double y, double z, const SpfTable& table) {
  if (!(2.0 <= y && y <= z && z <= static_cast<double>(x))) {
    throw ArgumentError("smooth_excess_count requires 2 <= y <= z <= x");
  }
  if (x > table.limit()) throw RangeError("smooth_excess_count: x exceeds table limit");
  const FactorScanner scanner(table);
  return parallel_map_reduce(
      1, x + 1, kScanChunk, std::uint64_t{0},
      [&](Chunk c) {
        std::uint64_t cnt = 0;
        scanner.scan(c.lo, c.hi, [&](std::uint64_t, std::span<const PrimePower> f) {
          if (static_cast<double>(smooth_part(f, y)) > z) ++cnt;
        });
        return cnt;
      },
      [](std::uint64_t a, std::uint64_t b) { return a + b; });
}

std::uint64_t tau_summatory_direct(std::uint64_t x, const SpfTable& table) {
  if (x > table.limit()) throw RangeError("tau_summatory_direct: x exceeds table limit");
  if (x == 0) return 0;
  const FactorScanner scanner(table);
  return parallel_map_reduce(
      1, x + 1, kScanChunk, std::uint64_t{0},
      [&](Chunk c) {
        std::uint64_t s = 0;
        scanner.scan(c.lo, c.hi, [&](std::uint64_t, std::span<const PrimePower> f) {
          std::uint64_t t = 1;
          for (const auto& pp : f) t *= pp.exponent + 1;
          s += t;
        });
        return s;
      },
      [](std::uint64_t a, std::uint64_t b) { return a + b; });
}

}  // namespace plab
