#include "plab/progressions.hpp"

#include <cmath>
#include <numeric>

#include "plab/characters.hpp"
#include "plab/errors.hpp"
#include "plab/parallel.hpp"
#include "plab/summation.hpp"

namespace plab {

namespace {

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  if (m == 1) return 0;
  std::int64_t old_r = static_cast<std::int64_t>(a % m), r = static_cast<std::int64_t>(m);
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t qt = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - qt * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - qt * s);
  }
  if (old_r != 1) throw ArgumentError("inverse does not exist");
  const auto ms = static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(((old_s % ms) + ms) % ms);
}

std::uint64_t abs_u(std::int64_t a) {
  return a < 0 ? static_cast<std::uint64_t>(-(a + 1)) + 1 : static_cast<std::uint64_t>(a);
}

}  // namespace

std::uint64_t residue_of(std::int64_t a, std::uint64_t q) {
  if (q == 0) throw ArgumentError("modulus must be >= 1");
  const std::uint64_t m = abs_u(a) % q;
  return (a < 0 && m != 0) ? q - m : m;
}

std::uint64_t euler_phi(std::uint64_t n) {
  if (n == 0) return 0;
  std::uint64_t r = n;
  for (const auto& pp : factorize_trial(n)) r = r / pp.prime * (pp.prime - 1);
  return r;
}

double g_q(std::int64_t n, std::uint64_t q, std::int64_t a) {
  if (q == 0) throw ArgumentError("g_q: q must be >= 1");
  const std::uint64_t ar = residue_of(a, q);
  if (std::gcd(ar, q) != 1) throw ArgumentError("g_q: (a, q) must be 1");
  const std::uint64_t nr = residue_of(n, q);
  if (std::gcd(nr, q) != 1) return 0.0;
  const double inv = 1.0 / static_cast<double>(euler_phi(q));
  return nr == ar ? 1.0 - inv : -inv;
}

std::pair<std::uint64_t, std::uint64_t> split_q(std::uint64_t q, std::uint64_t D) {
  if (q == 0 || D == 0) throw ArgumentError("split_q: q and D must be >= 1");
  std::uint64_t qd = 1, rest = q;
  for (std::uint64_t g = std::gcd(rest, D); g > 1; g = std::gcd(rest, D)) {
    rest /= g;
    qd *= g;
  }
  return {qd, rest};
}

std::vector<cplx> tabulate(const MultiplicativeSpec& spec, std::uint64_t x, const SpfTable& table) {
  if (x > table.limit()) throw RangeError("tabulate: x exceeds table limit");
  std::vector<cplx> v(x + 1, 0.0);
  if (x == 0) return v;
  const FactorScanner scanner(table);
  const auto chunks = partition_range(1, x + 1, kScanChunk);
  parallel_for(chunks.size(), [&](std::size_t i) {
    scanner.scan(chunks[i].lo, chunks[i].hi,
                 [&](std::uint64_t n, std::span<const PrimePower> f) { v[n] = spec.eval(n, f); });
  });
  return v;
}

ProgressionEngine::ProgressionEngine(std::vector<cplx> values) : values_(std::move(values)) {
  if (values_.empty()) values_.push_back(0.0);
  ComplexCompensatedSum s;
  for (std::size_t n = 1; n < values_.size(); ++n) s += values_[n];
  total_ = s.value();
}

cplx ProgressionEngine::class_sum(std::uint64_t modulus, std::uint64_t r) const {
  if (modulus == 1) return total_;
  const std::uint64_t X = x();
  ComplexCompensatedSum s;
  for (std::uint64_t n = (r == 0 ? modulus : r); n <= X; n += modulus) s += values_[n];
  return s.value();
}

cplx ProgressionEngine::coprime_class_sum(std::uint64_t m1, std::uint64_t r, std::uint64_t m2) const {
  const std::uint64_t X = x();
  std::vector<std::uint64_t> primes;
  for (const auto& pp : factorize_trial(m2)) primes.push_back(pp.prime);
  cplx head;
  {
    const std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find({m1, r});
    if (it == cache_.end()) it = cache_.emplace(std::make_pair(m1, r), class_sum(m1, r)).first;
    head = it->second;
  }
  ComplexCompensatedSum acc;
  acc += head;
  const std::size_t subsets = std::size_t{1} << primes.size();
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    std::uint64_t d = 1;
    int sign = 1;
    bool too_big = false;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (mask >> i & 1) {
        d *= primes[i];
        sign = -sign;
        if (d > X) too_big = true;
      }
    }
    if (too_big) continue;
    // n = d k with k = r / d (mod m1)
    const std::uint64_t k0 = static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(r % m1) * inv_mod(d % m1, m1) % m1);
    const std::uint64_t step = d * m1;
    ComplexCompensatedSum s;
    for (std::uint64_t n = d * (k0 == 0 ? m1 : k0); n <= X; n += step) s += values_[n];
    acc += sign > 0 ? s.value() : -s.value();
  }
  return acc.value();
}

DiscrepancyResult ProgressionEngine::delta(std::uint64_t q, std::uint64_t D, std::int64_t a) const {
  const auto [qd, qp] = split_q(q, D);
  if (std::gcd(residue_of(a, qp), qp) != 1) throw ArgumentError("delta: (a, q'_D) must be 1");
  DiscrepancyResult res;
  res.x = x();
  res.q = q;
  res.D = D;
  res.a = a;
  res.progression_sum = class_sum(q, residue_of(a, q));
  res.expected = coprime_class_sum(qd, residue_of(a, qd), qp) / static_cast<double>(euler_phi(qp));
  res.delta = res.progression_sum - res.expected;
  return res;
}

DiscrepancyResult delta(std::uint64_t x, std::uint64_t q, std::uint64_t D, std::int64_t a,
                        const MultiplicativeSpec& spec, const SpfTable& table) {
  const ProgressionEngine engine(tabulate(spec, x, table));
  return engine.delta(q, D, a);
}

namespace {

// Plain discrepancy of the weights f(n) chi(n) mod q.
cplx twisted_delta(const std::vector<cplx>& f, const DirichletCharacter& chi, std::uint64_t q, std::int64_t a) {
  const std::uint64_t ar = residue_of(a, q);
  std::vector<char> unit(q);
  for (std::uint64_t r = 0; r < q; ++r) unit[r] = std::gcd(r, q) == 1;
  ComplexCompensatedSum prog, cop;
  for (std::uint64_t n = 1; n < f.size(); ++n) {
    const std::uint64_t r = n % q;
    if (!unit[r]) continue;
    const cplx w = f[n] * chi(static_cast<std::int64_t>(n));
    cop += w;
    if (r == ar) prog += w;
  }
  return prog.value() - cop.value() / static_cast<double>(euler_phi(q));
}

}  // namespace

double char_decomposition_residual(const ProgressionEngine& engine, std::uint64_t q, std::uint64_t D,
                                   std::int64_t a) {
  if (std::gcd(residue_of(a, D), D) != 1) throw ArgumentError("char decomposition: (D, a) must be 1");
  const auto [qd, qp] = split_q(q, D);
  const cplx lhs = engine.delta(q, D, a).delta;
  const auto group = DirichletGroup::create(qd);
  ComplexCompensatedSum rhs;
  for (const auto& chi : group->characters()) {
    rhs += std::conj(chi(a)) * twisted_delta(engine.values(), chi, qp, a);
  }
  return std::abs(lhs - rhs.value() / static_cast<double>(group->size()));
}

double char_decomposition_residual(std::uint64_t x, std::uint64_t q, std::uint64_t D, std::int64_t a,
                                   const MultiplicativeSpec& spec, const SpfTable& table) {
  const ProgressionEngine engine(tabulate(spec, x, table));
  return char_decomposition_residual(engine, q, D, a);
}

double tau_real(std::uint64_t n, double K) {
  double t = 1.0;
  for (const auto& pp : factorize_trial(n)) t *= piltz_prime_power(cplx(K, 0.0), pp.exponent).real();
  return t;
}

double bv_aggregate(const BvParams& p, const ProgressionEngine& engine, double K) {
  if (p.Q == 0 || p.R == 0) throw ArgumentError("bv_aggregate: Q and R must be >= 1");
  if (!p.xi.empty() && p.xi.size() != p.R) throw ArgumentError("bv_aggregate: need one weight per r <= R");
  for (std::size_t i = 0; i < p.xi.size(); ++i) {
    const double bound = tau_real(i + 1, K);
    if (std::abs(p.xi[i]) > bound * (1.0 + 1e-12)) {
      throw ValidationError("bv_aggregate: |xi_" + std::to_string(i + 1) + "| exceeds tau_K bound");
    }
  }
  const std::uint64_t a_abs = abs_u(p.a);

  if (p.mode == BvMode::MaxOverA) {
    std::vector<double> per_q(p.Q, 0.0);
    const auto& f = engine.values();
    parallel_for(p.Q, [&](std::size_t i) {
      const std::uint64_t q = i + 1;
      const auto [qd, qp] = split_q(q, p.D);
      std::vector<ComplexCompensatedSum> S(q);
      for (std::uint64_t n = 1; n < f.size(); ++n) S[n % q] += f[n];
      std::vector<ComplexCompensatedSum> E(qd);
      for (std::uint64_t r = 0; r < q; ++r) {
        if (std::gcd(r, qp) == 1) E[r % qd].merge(S[r]);
      }
      const double phi_qp = static_cast<double>(euler_phi(qp));
      double best = 0.0;
      for (std::uint64_t r = 0; r < q; ++r) {
        if (std::gcd(r, q) != 1) continue;
        best = std::max(best, std::abs(S[r].value() - E[r % qd].value() / phi_qp));
      }
      per_q[i] = best;
    });
    CompensatedSum s;
    for (const double v : per_q) s += v;
    return s.value();
  }

  ComplexCompensatedSum signed_total;
  CompensatedSum abs_total;
  for (std::uint64_t r = 1; r <= p.R; ++r) {
    if (std::gcd(r, a_abs) != 1) continue;
    std::vector<cplx> per_q(p.Q, 0.0);
    parallel_for(p.Q, [&](std::size_t i) {
      const std::uint64_t q = i + 1;
      if (std::gcd(q, a_abs) != 1) return;
      per_q[i] = engine.delta(q * r, p.D, p.a).delta;
    });
    ComplexCompensatedSum inner;
    for (const auto& v : per_q) inner += v;
    const cplx xi = p.xi.empty() ? cplx(1.0) : p.xi[r - 1];
    const cplx term = xi * inner.value();
    signed_total += term;
    abs_total += std::abs(term);
  }
  return p.mode == BvMode::Signed ? std::abs(signed_total.value()) : abs_total.value();
}

double bv_aggregate(const BvParams& params, const MultiplicativeSpec& spec, const SpfTable& table) {
  const ProgressionEngine engine(tabulate(spec, params.x, table));
  return bv_aggregate(params, engine, params.K.value_or(spec.K_bound()));
}

cplx bilinear_delta(std::uint64_t M, std::uint64_t N, std::uint64_t q, std::int64_t a,
                    std::span<const cplx> alpha, std::span<const cplx> beta,
                    std::optional<std::pair<double, double>> window) {
  if (q == 0) throw ArgumentError("bilinear_delta: q must be >= 1");
  if (alpha.size() != M || beta.size() != N) {
    throw ArgumentError("bilinear_delta: sequences must cover (M, 2M] and (N, 2N]");
  }
  const std::uint64_t ar = residue_of(a, q);
  if (std::gcd(ar, q) != 1) throw ArgumentError("bilinear_delta: (a, q) must be 1");
  ComplexCompensatedSum prog, cop;
  for (std::uint64_t i = 0; i < M; ++i) {
    const std::uint64_t m = M + 1 + i;
    if (std::gcd(m, q) != 1) continue;
    for (std::uint64_t j = 0; j < N; ++j) {
      const std::uint64_t n = N + 1 + j;
      if (std::gcd(n, q) != 1) continue;
      const auto mn = static_cast<double>(m) * static_cast<double>(n);
      if (window && !(window->first < mn && mn <= window->second)) continue;
      const cplx w = alpha[i] * beta[j];
      cop += w;
      if (static_cast<unsigned __int128>(m) * n % q == ar) prog += w;
    }
  }
  return prog.value() - cop.value() / static_cast<double>(euler_phi(q));
}

double box_progression_sum(std::span<const Box> boxes, std::uint64_t q, std::int64_t a, std::uint64_t D,
                           std::optional<double> Y0) {
  if (boxes.empty() || boxes.size() > 3) throw ArgumentError("box_progression_sum: need 1 to 3 boxes");
  if (q == 0 || D == 0) throw ArgumentError("box_progression_sum: q and D must be >= 1");
  const std::uint64_t ar = residue_of(a, q);
  if (std::gcd(ar, q) != 1 || std::gcd(q, D) != 1) throw ArgumentError("box_progression_sum: need (q, aD) = 1");
  std::vector<std::uint32_t> small_primes;
  if (Y0) {
    const double lim = std::ceil(*Y0) - 1.0;
    if (lim >= 2.0) {
      for (const auto p : primes_up_to(static_cast<std::uint64_t>(lim))) {
        if (static_cast<double>(p) < *Y0) small_primes.push_back(p);
      }
    }
  }
  using Count = unsigned __int128;
  std::vector<std::vector<Count>> hists;
  for (const auto& b : boxes) {
    const std::uint64_t tr = residue_of(b.t, D);
    if (std::gcd(tr, D) != 1) throw ArgumentError("box_progression_sum: (t, D) must be 1");
    std::vector<Count> h(q, 0);
    if (b.hi > b.lo) {
      const std::uint64_t len = b.hi - b.lo;
      std::vector<char> keep(len, 1);
      for (const std::uint64_t p : small_primes) {
        for (std::uint64_t m = (b.lo / p + 1) * p; m <= b.hi; m += p) keep[m - b.lo - 1] = 0;
      }
      for (std::uint64_t m = b.lo + 1; m <= b.hi; ++m) {
        if (!keep[m - b.lo - 1] || m % D != tr) continue;
        const std::uint64_t r = m % q;
        if (std::gcd(r, q) == 1) ++h[r];
      }
    }
    hists.push_back(std::move(h));
  }
  std::vector<Count> acc = hists[0];
  for (std::size_t i = 1; i < hists.size(); ++i) {
    std::vector<Count> next(q, 0);
    for (std::uint64_t r1 = 0; r1 < q; ++r1) {
      if (acc[r1] == 0) continue;
      for (std::uint64_t r2 = 0; r2 < q; ++r2) {
        if (hists[i][r2] == 0) continue;
        next[r1 * r2 % q] += acc[r1] * hists[i][r2];
      }
    }
    acc = std::move(next);
  }
  Count total = 0;
  for (const Count c : acc) total += c;
  return static_cast<double>(static_cast<long double>(acc[ar]) -
                             static_cast<long double>(total) / static_cast<long double>(euler_phi(q)));
}

}  // namespace plab
