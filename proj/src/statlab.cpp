#include "plab/statlab.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "plab/errors.hpp"
#include "plab/parallel.hpp"
#include "plab/rng.hpp"
#include "plab/summation.hpp"

namespace plab {

// ---------------------------------------------------------------------------
// EmpiricalDistribution

void EmpiricalDistribution::add(double value, double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) throw ArgumentError("empirical distribution: bad weight");
  if (!std::isfinite(value)) throw ArgumentError("empirical distribution: non-finite value");
  if (!samples_.empty() && value < samples_.back().first) sorted_ = false;
  samples_.emplace_back(value, weight);
  cum_.clear();
}

void EmpiricalDistribution::merge(const EmpiricalDistribution& other) {
  for (const auto& [v, w] : other.samples_) add(v, w);
}

void EmpiricalDistribution::sort() const {
  if (!sorted_) {
    std::stable_sort(samples_.begin(), samples_.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    sorted_ = true;
    cum_.clear();
  }
  if (cum_.size() != samples_.size()) {
    cum_.resize(samples_.size());
    CompensatedSum s;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      s += samples_[i].second;
      cum_[i] = s.value();
    }
  }
}

const std::vector<std::pair<double, double>>& EmpiricalDistribution::samples() const {
  sort();
  return samples_;
}

double EmpiricalDistribution::total_weight() const {
  sort();
  return cum_.empty() ? 0.0 : cum_.back();
}

double EmpiricalDistribution::cdf(double t) const {
  sort();
  const double tot = total_weight();
  if (tot <= 0.0) throw DomainError("empirical distribution has zero total weight");
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                                   [](double v, const auto& s) { return v < s.first; });
  const auto i = static_cast<std::size_t>(it - samples_.begin());
  return i == 0 ? 0.0 : cum_[i - 1] / tot;
}

double EmpiricalDistribution::cdf_left(double t) const {
  sort();
  const double tot = total_weight();
  if (tot <= 0.0) throw DomainError("empirical distribution has zero total weight");
  const auto it = std::lower_bound(samples_.begin(), samples_.end(), t,
                                   [](const auto& s, double v) { return s.first < v; });
  const auto i = static_cast<std::size_t>(it - samples_.begin());
  return i == 0 ? 0.0 : cum_[i - 1] / tot;
}

double EmpiricalDistribution::kolmogorov(const std::function<double(double)>& F) const {
  sort();
  const double tot = total_weight();
  if (tot <= 0.0) throw DomainError("empirical distribution has zero total weight");
  double d = 0.0;
  double before = 0.0;
  for (std::size_t i = 0; i < samples_.size();) {
    std::size_t j = i;
    while (j + 1 < samples_.size() && samples_[j + 1].first == samples_[i].first) ++j;
    const double after = cum_[j] / tot;
    const double f = F(samples_[i].first);
    d = std::max({d, std::fabs(after - f), std::fabs(before - f)});
    before = after;
    i = j + 1;
  }
  return d;
}

double EmpiricalDistribution::kolmogorov(const EmpiricalDistribution& other) const {
  sort();
  other.sort();
  double d = 0.0;
  // Both CDFs are right-continuous steps; compare at every jump point.
  for (const auto* src : {this, &other}) {
    for (const auto& s : src->samples_) {
      d = std::max(d, std::fabs(cdf(s.first) - other.cdf(s.first)));
    }
  }
  return d;
}

std::string EmpiricalDistribution::to_csv() const {
  sort();
  std::ostringstream out;
  out.precision(17);
  out << "value,weight,cdf\n";
  const double tot = total_weight();
  for (std::size_t i = 0; i < samples_.size();) {
    std::size_t j = i;
    CompensatedSum w;
    w += samples_[i].second;
    while (j + 1 < samples_.size() && samples_[j + 1].first == samples_[i].first) w += samples_[++j].second;
    out << samples_[i].first << ',' << w.value() << ',' << (tot > 0.0 ? cum_[j] / tot : 0.0) << '\n';
    i = j + 1;
  }
  return out.str();
}

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

// ---------------------------------------------------------------------------
// Shifted level sets

namespace {

// Calls fn(n, factors of n) for 1 < n <= x with omega(n - 1) = k, chunk by chunk.
template <typename Fn>
void for_each_shifted(const SpfTable& table, Chunk c, unsigned k, Fn&& fn) {
  FactorBuffer nb;
  const FactorScanner scanner(table);
  scanner.scan(c.lo, c.hi, [&](std::uint64_t m, std::span<const PrimePower> fm) {
    if (fm.size() != k) return;
    const std::size_t cnt = table.factorize_into(m + 1, nb);
    fn(m + 1, std::span<const PrimePower>(nb.data(), cnt));
  });
}

void check_limit(std::uint64_t x, const SpfTable& table, const char* what) {
  if (x > table.limit()) throw RangeError(std::string(what) + ": x exceeds table limit");
}

}  // namespace

std::vector<std::uint64_t> shifted_level_scan(std::uint64_t x, unsigned k, const SpfTable& table) {
  check_limit(x, table, "shifted_level_scan");
  if (x < 2) return {};
  // m = n - 1 runs over [1, x - 1]
  return parallel_map_reduce(
      1, x, kScanChunk, std::vector<std::uint64_t>{},
      [&](Chunk c) {
        std::vector<std::uint64_t> out;
        for_each_shifted(table, c, k, [&](std::uint64_t n, std::span<const PrimePower>) { out.push_back(n); });
        return out;
      },
      [](std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
      });
}

CfReport empirical_cf(std::uint64_t x, unsigned k, const AdditiveSpec& f, std::span<const double> thetas,
                      const SpfTable& table) {
  check_limit(x, table, "empirical_cf");
  struct Partial {
    std::vector<ComplexCompensatedSum> sums;
    std::uint64_t count = 0;
  };
  const std::size_t nt = thetas.size();
  Partial total = parallel_map_reduce(
      1, x < 2 ? 1 : x, kScanChunk, Partial{std::vector<ComplexCompensatedSum>(nt), 0},
      [&](Chunk c) {
        Partial p{std::vector<ComplexCompensatedSum>(nt), 0};
        for_each_shifted(table, c, k, [&](std::uint64_t, std::span<const PrimePower> fn) {
          const double v = f.eval(fn);
          ++p.count;
          for (std::size_t i = 0; i < nt; ++i) p.sums[i] += std::polar(1.0, thetas[i] * v);
        });
        return p;
      },
      [](Partial a, const Partial& b) {
        for (std::size_t i = 0; i < a.sums.size(); ++i) a.sums[i].merge(b.sums[i]);
        a.count += b.count;
        return a;
      });
  if (total.count == 0) throw DomainError("empirical_cf: shifted level set is empty");
  CfReport rep;
  rep.scanned_count = total.count;
  rep.pi_k = level_count(x, k, std::nullopt, table);
  for (std::size_t i = 0; i < nt; ++i) {
    rep.values.push_back(total.sums[i].value() / static_cast<double>(total.count));
  }
  return rep;
}

EkReport ek_distance(std::uint64_t x, unsigned k, const AdditiveSpec& f, const SpfTable& table) {
  check_limit(x, table, "ek_distance");
  if (!f.strongly_additive()) throw ArgumentError("ek_distance: f must be strongly additive");
  EkReport rep;
  const double xd = static_cast<double>(x);
  const double y = (xd > std::exp(std::exp(1.0))) ? std::pow(xd, 1.0 / std::log(std::log(xd))) : xd;
  CompensatedSum A, B2, B2y;
  for (const std::uint64_t p : primes_up_to(x)) {
    const double v = f.at(p, 1);
    const double pd = static_cast<double>(p);
    A += v / pd;
    B2 += v * v / pd;
    if (pd <= y) B2y += v * v / pd;
  }
  rep.A = A.value();
  rep.B = std::sqrt(B2.value());
  if (rep.B <= 0.0) throw DomainError("ek_distance: B_x = 0, distribution is degenerate");
  rep.kubilius_ratio = std::sqrt(B2y.value()) / rep.B;
  const auto dist = parallel_map_reduce(
      1, x < 2 ? 1 : x, kScanChunk, EmpiricalDistribution{},
      [&](Chunk c) {
        EmpiricalDistribution d;
        for_each_shifted(table, c, k, [&](std::uint64_t, std::span<const PrimePower> fn) {
          d.add((f.eval(fn) - rep.A) / rep.B);
        });
        return d;
      },
      [](EmpiricalDistribution a, const EmpiricalDistribution& b) {
        a.merge(b);
        return a;
      });
  rep.count = dist.size();
  if (rep.count == 0) throw DomainError("ek_distance: shifted level set is empty");
  rep.kolmogorov = dist.kolmogorov(normal_cdf);
  return rep;
}

// ---------------------------------------------------------------------------
// Iterated logarithm

std::vector<double> default_lil_grid(double xi, double x) {
  std::vector<double> grid;
  for (int j = 1;; ++j) {
    const double t = std::exp(std::exp(j / 4.0));
    if (t > x || !std::isfinite(t)) break;
    if (t > xi) grid.push_back(t);
  }
  return grid;
}

double lil_lambda(unsigned omega_t, double t) {
  const double l2 = std::log(std::log(t));
  const double l4 = std::log(std::log(l2));
  if (!(l4 > 0.0)) throw DomainError("lil_lambda: log4 t must be positive");
  return (static_cast<double>(omega_t) - l2) / std::sqrt(2.0 * l2 * l4);
}

namespace {

struct LilStats {
  double M;
  double plus;
  double minus;
};

LilStats lil_stats(std::span<const PrimePower> fn, const std::vector<double>& grid) {
  LilStats s{0.0, -HUGE_VAL, HUGE_VAL};
  std::size_t i = 0;
  for (const double t : grid) {
    while (i < fn.size() && static_cast<double>(fn[i].prime) <= t) ++i;
    const double v = lil_lambda(static_cast<unsigned>(i), t);
    s.M = std::max(s.M, std::fabs(v));
    s.plus = std::max(s.plus, v);
    s.minus = std::min(s.minus, v);
  }
  return s;
}

std::uint64_t isqrt_u64(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

LilProfile lil_profile(std::uint64_t x, double xi, std::vector<double> t_grid, const LilSampler& sampler,
                       const SpfTable* table) {
  if (x < 3) throw ArgumentError("lil_profile: x must be >= 3");
  std::sort(t_grid.begin(), t_grid.end());
  std::vector<double> grid;
  for (const double t : t_grid) {
    if (t <= xi) throw DomainError("lil_profile: grid points must exceed xi");
    if (t > static_cast<double>(x)) continue;
    lil_lambda(0, t);  // throws below e^{e^e}
    grid.push_back(t);
  }
  if (grid.empty()) throw DomainError("lil_profile: no grid point in (xi, x]");
  LilProfile prof;
  prof.xi = xi;
  prof.t_grid = grid;

  struct Partial {
    EmpiricalDistribution M, P, N;
    std::uint64_t count = 0;
  };
  auto reduce = [](Partial a, const Partial& b) {
    a.M.merge(b.M);
    a.P.merge(b.P);
    a.N.merge(b.N);
    a.count += b.count;
    return a;
  };

  Partial all;
  if (std::holds_alternative<FullScan>(sampler)) {
    const bool use_table = table != nullptr && table->limit() >= x;
    const FactorScanner scanner = use_table ? FactorScanner(*table) : FactorScanner(x);
    // pairs (m, m + 1) for m in [1, x - 1]; each chunk rescans its right neighbour
    all = parallel_map_reduce(1, x, kScanChunk, Partial{}, [&](Chunk c) {
      Partial p;
      std::uint64_t prev_tau = 0;
      bool have = false;
      scanner.scan(c.lo, c.hi + 1, [&](std::uint64_t, std::span<const PrimePower> fn) {
        if (have) {
          const LilStats s = lil_stats(fn, grid);
          const auto w = static_cast<double>(prev_tau);
          p.M.add(s.M, w);
          p.P.add(s.plus, w);
          p.N.add(s.minus, w);
          ++p.count;
        }
        std::uint64_t tau = 1;
        for (const auto& pp : fn) tau *= pp.exponent + 1;
        prev_tau = tau;
        have = true;
      });
      return p;
    }, reduce);
  } else {
    const auto& ws = std::get<WeightedSample>(sampler);
    const std::uint64_t X = x - 1;
    const std::uint64_t s = isqrt_u64(X);
    // region A = {(d, e) : d <= s, e <= X/d}; cumulative sizes for d = 1..s
    std::vector<std::uint64_t> cum(s + 1, 0);
    for (std::uint64_t d = 1; d <= s; ++d) cum[d] = cum[d - 1] + X / d;
    const auto small = primes_up_to(isqrt_u64(x) + 1);
    std::mt19937_64 rng(ws.seed);
    FactorBuffer buf;
    for (std::uint64_t drawn = 0; drawn < ws.size;) {
      const std::uint64_t u = uniform_below(rng, cum[s]);
      const auto d = static_cast<std::uint64_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
      const std::uint64_t e = 1 + uniform_below(rng, X / d);
      // A and its mirror image give the same m = de; points in both are halved
      if (e <= s && uniform_below(rng, 2) == 1) continue;
      std::uint64_t n = d * e + 1;
      std::size_t cnt = 0;
      for (const std::uint32_t p : small) {
        if (static_cast<std::uint64_t>(p) * p > n) break;
        if (n % p != 0) continue;
        std::uint32_t k = 0;
        while (n % p == 0) {
          n /= p;
          ++k;
        }
        buf[cnt++] = {p, k};
      }
      if (n > 1) buf[cnt++] = {n, 1};
      const LilStats st = lil_stats(std::span<const PrimePower>(buf.data(), cnt), grid);
      all.M.add(st.M);
      all.P.add(st.plus);
      all.N.add(st.minus);
      ++all.count;
      ++drawn;
    }
  }
  prof.M = std::move(all.M);
  prof.M_plus = std::move(all.P);
  prof.M_minus = std::move(all.N);
  prof.samples = all.count;
  return prof;
}

// ---------------------------------------------------------------------------
// Divisor correlations

std::complex<double> corr_tau(std::uint64_t x, const CorrWeight& weight, std::int64_t h, const SpfTable& table) {
  if (h == 0) throw ArgumentError("corr_tau: h must be nonzero");
  const std::uint64_t ah = h < 0 ? static_cast<std::uint64_t>(-h) : static_cast<std::uint64_t>(h);
  if (ah >= x) return 0.0;
  if (x + (h > 0 ? ah : 0) > table.limit()) throw RangeError("corr_tau: x + |h| exceeds table limit");
  const FactorScanner scanner(table);
  const ComplexCompensatedSum total = parallel_map_reduce(
      ah + 1, x + 1, kScanChunk, ComplexCompensatedSum{},
      [&](Chunk c) {
        ComplexCompensatedSum s;
        FactorBuffer buf;
        scanner.scan(c.lo, c.hi, [&](std::uint64_t n, std::span<const PrimePower> fn) {
          std::complex<double> w;
          if (std::holds_alternative<VonMangoldt>(weight)) {
            if (fn.size() != 1) return;
            w = std::log(static_cast<double>(fn[0].prime));
          } else {
            w = std::get<MultiplicativeSpec>(weight).eval(n, fn);
            if (w == 0.0) return;
          }
          const std::uint64_t m = h > 0 ? n + ah : n - ah;
          const std::size_t k = table.factorize_into(m, buf);
          std::uint64_t tau = 1;
          for (std::size_t i = 0; i < k; ++i) tau *= buf[i].exponent + 1;
          s += w * static_cast<double>(tau);
        });
        return s;
      },
      [](ComplexCompensatedSum a, const ComplexCompensatedSum& b) {
        a.merge(b);
        return a;
      });
  return total.value();
}

std::uint64_t hyperbola_tau(std::uint64_t x) {
  if (x == 0) throw ArgumentError("hyperbola_tau: x must be >= 1");
  const std::uint64_t s = isqrt_u64(x);
  std::uint64_t acc = 0;
  for (std::uint64_t d = 1; d <= s; ++d) acc += x / d;
  return 2 * acc - s * s;
}

LevelsetCount levelset_euler_count(std::uint64_t x, unsigned k, std::uint64_t d, const SpfTable& table) {
  check_limit(x, table, "levelset_euler_count");
  if (d == 0) throw ArgumentError("levelset_euler_count: d must be >= 1");
  if (x < 3) throw ArgumentError("levelset_euler_count: x must be >= 3");
  const FactorScanner scanner(table);
  LevelsetCount out;
  out.count = parallel_map_reduce(
      1, x + 1, kScanChunk, std::uint64_t{0},
      [&](Chunk c) {
        std::uint64_t cnt = 0;
        scanner.scan(c.lo, c.hi, [&](std::uint64_t n, std::span<const PrimePower> fn) {
          if (fn.size() == k && std::gcd(n, d) == 1) ++cnt;
        });
        return cnt;
      },
      [](std::uint64_t a, std::uint64_t b) { return a + b; });
  out.pi_k = level_count(x, k, std::nullopt, table);
  const double xd = static_cast<double>(x);
  const double r = (static_cast<double>(k) - 1.0) / std::log(std::log(xd));
  const auto fd = factorize_trial(d);
  out.main = static_cast<double>(out.pi_k) / local_factors(fd.pairs(), 0.5, r).idb_r;
  out.error = static_cast<double>(out.count) - out.main;
  return out;
}

}  // namespace plab
