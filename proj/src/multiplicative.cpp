#include "plab/multiplicative.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

namespace plab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_reduced(std::uint64_t t, std::uint64_t D) { return std::gcd(t % D, D) == 1; }

// Factorization of b*n from those of b and n; throws on 64-bit overflow.
std::vector<PrimePower> merge_factorizations(std::span<const PrimePower> a, std::span<const PrimePower> b) {
  std::vector<PrimePower> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].prime < b[j].prime)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].prime < a[i].prime) {
      out.push_back(b[j++]);
    } else {
      out.push_back({a[i].prime, a[i].exponent + b[j].exponent});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

PrimeClassRule::PrimeClassRule(std::uint64_t D, double K, std::vector<double> breakpoints,
                               std::vector<std::vector<cplx>> values, PrimePowerOverrides overrides)
    : D_(D), K_(K), breakpoints_(std::move(breakpoints)), values_(std::move(values)), overrides_(std::move(overrides)) {
  if (D_ == 0) throw ArgumentError("prime-class rule: D must be >= 1");
  if (!(K_ > 0)) throw ArgumentError("prime-class rule: K must be > 0");
  if (breakpoints_.size() < 2) throw ValidationError("prime-class rule: need at least two breakpoints");
  if (breakpoints_.front() != 2.0) throw ValidationError("prime-class rule: first breakpoint must be 2");
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    const double y = breakpoints_[i];
    const double ratio = breakpoints_[i + 1] / y;
    const double need = 1.0 + 1.0 / std::pow(std::log(2.0 * y), K_);
    if (!(breakpoints_[i + 1] > y) || ratio < need) {
      std::ostringstream os;
      os << "growth condition violated at breakpoint index " << i << ": ratio " << ratio << " < " << need;
      throw ValidationError(os.str());
    }
  }
  if (values_.size() != breakpoints_.size() - 1) {
    throw ValidationError("prime-class rule: need one value row per window (breakpoints - 1)");
  }
  for (std::size_t l = 0; l < values_.size(); ++l) {
    auto& row = values_[l];
    if (row.size() != D_) throw ValidationError("prime-class rule: each value row must have D entries");
    for (std::uint64_t t = 0; t < D_; ++t) {
      const bool missing = std::isnan(row[t].real()) || std::isnan(row[t].imag());
      if (missing) {
        if (is_reduced(t, D_)) {
          throw ValidationError("prime-class rule: missing value for reduced residue " + std::to_string(t) +
                                " in window " + std::to_string(l));
        }
        row[t] = 1.0;
      }
      if (std::abs(row[t]) > K_ + 1e-12) {
        throw ValidationError("prime-class rule: |z| > K at window " + std::to_string(l) + ", residue " +
                              std::to_string(t));
      }
    }
  }
}

std::size_t PrimeClassRule::window_of(std::uint64_t p) const {
  const auto pd = static_cast<double>(p);
  if (pd > breakpoints_.back()) {
    throw CoverageError("prime " + std::to_string(p) + " beyond last breakpoint " +
                        std::to_string(breakpoints_.back()));
  }
  // first breakpoint >= p; window l is (Y_l, Y_{l+1}]
  const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), pd);
  const auto idx = static_cast<std::size_t>(it - breakpoints_.begin());
  return idx == 0 ? 0 : idx - 1;
}

cplx PrimeClassRule::at_prime(std::uint64_t p) const { return values_[window_of(p)][p % D_]; }

cplx PrimeClassRule::at_prime_power(std::uint64_t p, std::uint32_t nu) const {
  if (nu >= 2) {
    if (auto it = overrides_.find({p, nu}); it != overrides_.end()) return it->second;
  }
  return at_prime(p);
}

cplx piltz_prime_power(cplx z, std::uint32_t nu) {
  cplx v = 1.0;
  for (std::uint32_t j = 0; j < nu; ++j) v *= (z + static_cast<double>(j)) / static_cast<double>(j + 1);
  return v;
}

MultiplicativeSpec MultiplicativeSpec::piltz(cplx z) { return {Piltz{z}, std::max(1.0, std::abs(z))}; }
MultiplicativeSpec MultiplicativeSpec::power_omega(cplx z) { return {PowerOmega{z}, std::max(1.0, std::abs(z))}; }
MultiplicativeSpec MultiplicativeSpec::moebius() { return {Moebius{}, 1.0}; }
MultiplicativeSpec MultiplicativeSpec::unit() { return {Unit{}, 1.0}; }
MultiplicativeSpec MultiplicativeSpec::two_squares() { return {TwoSquares{}, 1.0}; }

MultiplicativeSpec MultiplicativeSpec::prime_periodic(std::shared_ptr<const PrimeClassRule> rule) {
  if (!rule) throw ArgumentError("prime_periodic: null rule");
  const double K = rule->K();
  return {PrimeClassPeriodic{std::move(rule)}, K};
}

MultiplicativeSpec MultiplicativeSpec::sifted(const MultiplicativeSpec& inner, double Y0) {
  if (!(Y0 >= 2.0)) throw ArgumentError("sifted: Y0 must be >= 2");
  return {Sifted{std::make_shared<const MultiplicativeSpec>(inner), Y0}, inner.K_bound()};
}

MultiplicativeSpec MultiplicativeSpec::modified(const MultiplicativeSpec& inner, std::uint64_t b, std::uint64_t c) {
  if (b == 0 || c == 0) throw ArgumentError("modified: b and c must be >= 1");
  return {Modified{std::make_shared<const MultiplicativeSpec>(inner), b, c}, inner.K_bound()};
}

bool MultiplicativeSpec::is_multiplicative() const {
  return std::visit(overloaded{[](const Modified&) { return false; },
                               [](const Sifted& s) { return s.inner->is_multiplicative(); },
                               [](const auto&) { return true; }},
                    v_);
}

std::string MultiplicativeSpec::tag() const {
  return std::visit(overloaded{[](const PrimeClassPeriodic&) { return std::string("prime_class_periodic"); },
                               [](const Piltz&) { return std::string("piltz"); },
                               [](const PowerOmega&) { return std::string("power_omega"); },
                               [](const Moebius&) { return std::string("moebius"); },
                               [](const Unit&) { return std::string("unit"); },
                               [](const TwoSquares&) { return std::string("two_squares"); },
                               [](const Sifted&) { return std::string("sifted"); },
                               [](const Modified&) { return std::string("modified"); }},
                    v_);
}

cplx MultiplicativeSpec::eval(std::uint64_t n, std::span<const PrimePower> f) const {
  return std::visit(
      overloaded{
          [&](const PrimeClassPeriodic& r) {
            cplx v = 1.0;
            for (const auto& [p, e] : f) v *= r.rule->at_prime_power(p, e);
            return v;
          },
          [&](const Piltz& s) {
            cplx v = 1.0;
            for (const auto& pp : f) v *= piltz_prime_power(s.z, pp.exponent);
            return v;
          },
          [&](const PowerOmega& s) {
            cplx v = 1.0;
            for (std::size_t i = 0; i < f.size(); ++i) v *= s.z;
            return v;
          },
          [&](const Moebius&) {
            for (const auto& pp : f) {
              if (pp.exponent >= 2) return cplx(0.0);
            }
            return cplx(f.size() % 2 == 0 ? 1.0 : -1.0);
          },
          [&](const Unit&) { return cplx(1.0); },
          [&](const TwoSquares&) {
            for (const auto& [p, e] : f) {
              if (p % 4 == 3 && e % 2 == 1) return cplx(0.0);
            }
            return cplx(1.0);
          },
          [&](const Sifted& s) {
            if (!f.empty() && static_cast<double>(f.front().prime) < s.Y0) return cplx(0.0);
            return s.inner->eval(n, f);
          },
          [&](const Modified& m) {
            for (const auto& pp : f) {
              if (m.c % pp.prime == 0) return cplx(0.0);
            }
            if (n > std::numeric_limits<std::uint64_t>::max() / m.b) throw RangeError("modified: b*n overflows");
            const Factorization fb = factorize_trial(m.b);
            const auto merged = merge_factorizations(fb.pairs(), f);
            return m.inner->eval(m.b * n, merged);
          }},
      v_);
}

cplx eval_mult(const MultiplicativeSpec& spec, std::uint64_t n, const SpfTable& table) {
  if (n == 0) throw ArgumentError("eval_mult: n must be >= 1");
  if (n > table.limit()) throw RangeError("eval_mult: n exceeds table limit");
  FactorBuffer buf;
  const std::size_t k = table.factorize_into(n, buf);
  return spec.eval(n, std::span<const PrimePower>(buf.data(), k));
}

MultiplicativeSpec restrict_bc(const MultiplicativeSpec& spec, std::uint64_t b, std::uint64_t c) {
  return MultiplicativeSpec::modified(spec, b, c);
}

MultiplicativeSpec make_prime_periodic(std::uint64_t D, double K, std::vector<double> breakpoints,
                                       std::vector<std::vector<cplx>> values,
                                       PrimeClassRule::PrimePowerOverrides prime_power_rule) {
  auto rule = std::make_shared<const PrimeClassRule>(D, K, std::move(breakpoints), std::move(values),
                                                     std::move(prime_power_rule));
  return MultiplicativeSpec::prime_periodic(std::move(rule));
}

LevelSelector::LevelSelector(std::uint64_t D, std::vector<std::int64_t> T, std::vector<unsigned> Phi)
    : D_(D), Phi_(std::move(Phi)) {
  if (D_ == 0) throw ArgumentError("level selector: D must be >= 1");
  if (T.size() != Phi_.size()) throw ArgumentError("level selector: Phi must be defined exactly on T");
  std::set<std::uint64_t> seen;
  const auto Ds = static_cast<std::int64_t>(D_);
  for (const auto t : T) {
    const auto r = static_cast<std::uint64_t>(((t % Ds) + Ds) % Ds);
    if (!is_reduced(r, D_)) throw ArgumentError("level selector: residue " + std::to_string(t) + " not reduced");
    if (!seen.insert(r).second) throw ArgumentError("level selector: repeated residue " + std::to_string(t));
    T_.push_back(r);
  }
}

std::optional<std::size_t> LevelSelector::class_index(std::uint64_t p) const {
  const std::uint64_t r = p % D_;
  for (std::size_t i = 0; i < T_.size(); ++i) {
    if (T_[i] == r) return i;
  }
  return std::nullopt;
}

std::vector<unsigned> LevelSelector::counts(std::span<const PrimePower> f) const {
  std::vector<unsigned> c(T_.size(), 0);
  for (const auto& pp : f) {
    if (auto i = class_index(pp.prime)) ++c[*i];
  }
  return c;
}

int chi_level(const LevelSelector& sel, std::span<const PrimePower> f) {
  const auto c = sel.counts(f);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] != sel.phi()[i]) return 0;
  }
  return 1;
}

int chi_level(const LevelSelector& sel, std::uint64_t n, const SpfTable& table) {
  FactorBuffer buf;
  const std::size_t k = table.factorize_into(n, buf);
  return chi_level(sel, std::span<const PrimePower>(buf.data(), k));
}

double extraction_check(const LevelSelector& sel, std::uint64_t n, std::optional<unsigned> L,
                        const SpfTable& table) {
  FactorBuffer buf;
  const std::size_t k = table.factorize_into(n, buf);
  const std::span<const PrimePower> f(buf.data(), k);
  const auto counts = sel.counts(f);
  const unsigned max_phi = sel.phi().empty() ? 0 : *std::max_element(sel.phi().begin(), sel.phi().end());
  const unsigned max_count = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  const auto log2n = static_cast<unsigned>(std::bit_width(n) - 1);
  const unsigned order = L.value_or(std::max(1 + log2n, 1 + max_phi));
  if (order <= max_count || order <= max_phi) {
    throw DomainError("extraction_check: DFT order " + std::to_string(order) + " aliases (needs > " +
                      std::to_string(std::max(max_count, max_phi)) + ")");
  }
  const std::size_t dims = sel.residues().size();
  std::vector<cplx> roots(order);
  for (unsigned j = 0; j < order; ++j) {
    roots[j] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(order));
  }
  // class of each prime factor (or none)
  std::vector<std::optional<std::size_t>> cls(k);
  for (std::size_t i = 0; i < k; ++i) cls[i] = sel.class_index(f[i].prime);

  std::vector<unsigned> idx(dims, 0);
  std::size_t points = 1;
  for (std::size_t d = 0; d < dims; ++d) points *= order;
  cplx acc = 0.0;
  for (std::size_t pt = 0; pt < points; ++pt) {
    // f_z(n): z_t at primes in class t, 1 elsewhere (strongly multiplicative)
    cplx fz = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (cls[i]) fz *= roots[idx[*cls[i]]];
    }
    cplx weight = 1.0;
    for (std::size_t d = 0; d < dims; ++d) {
      const std::uint64_t e = (static_cast<std::uint64_t>(idx[d]) * sel.phi()[d]) % order;
      weight *= roots[(order - e) % order];
    }
    acc += fz * weight;
    for (std::size_t d = 0; d < dims; ++d) {
      if (++idx[d] < order) break;
      idx[d] = 0;
    }
  }
  acc /= static_cast<double>(points);
  return std::abs(acc - static_cast<double>(chi_level(sel, f)));
}

}  // namespace plab
