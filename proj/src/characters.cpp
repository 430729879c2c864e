#include "plab/characters.hpp"

#include <numbers>
#include <numeric>

#include "plab/errors.hpp"
#include "plab/sieve.hpp"

namespace plab {

namespace {

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

std::uint64_t primitive_root_mod_p(std::uint64_t p) {
  if (p == 2) return 1;
  const auto fac = factorize_trial(p - 1);
  for (std::uint64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (const auto& pp : fac) {
      if (pow_mod(g, (p - 1) / pp.prime, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw ArgumentError("no primitive root found");  // unreachable for prime p
}

}  // namespace

std::uint64_t DirichletCharacter::modulus() const { return group_->modulus(); }

bool DirichletCharacter::is_principal() const {
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] % group_->generator_order(i) != 0) return false;
  }
  return true;
}

std::int64_t DirichletCharacter::angle_index(std::int64_t n) const { return group_->angle_index(exps_, n); }

std::complex<double> DirichletCharacter::operator()(std::int64_t n) const {
  const auto k = angle_index(n);
  if (k < 0) return 0.0;
  return group_->root(static_cast<std::uint64_t>(k));
}

std::shared_ptr<const DirichletGroup> DirichletGroup::create(std::uint64_t m) {
  if (m == 0) throw ArgumentError("character group: modulus must be >= 1");
  if (m > kMaxModulus) throw CapacityError("character group: modulus " + std::to_string(m) + " exceeds capacity");
  return std::shared_ptr<const DirichletGroup>(new DirichletGroup(m));
}

DirichletGroup::DirichletGroup(std::uint64_t m) : m_(m) {
  for (const auto& [p, e] : factorize_trial(m)) {
    std::uint64_t pe = 1;
    for (std::uint32_t i = 0; i < e; ++i) pe *= p;
    if (p == 2) {
      if (e == 1) continue;  // (Z/2)^* is trivial
      // -1 generates an order-2 factor; for e >= 3, 5 generates order 2^(e-2)
      const std::uint64_t ord5 = (e >= 3) ? pe / 4 : 1;
      Generator minus{pe, 2, std::vector<std::int32_t>(pe, -1)};
      Generator five{pe, ord5, std::vector<std::int32_t>(pe, -1)};
      std::uint64_t v = 1;
      for (std::uint64_t b = 0; b < ord5; ++b) {
        minus.log[v] = 0;
        five.log[v] = static_cast<std::int32_t>(b);
        minus.log[pe - v] = 1;
        five.log[pe - v] = static_cast<std::int32_t>(b);
        v = v * 5 % pe;
      }
      gens_.push_back(std::move(minus));
      if (e >= 3) gens_.push_back(std::move(five));
    } else {
      std::uint64_t g = primitive_root_mod_p(p);
      if (e >= 2 && pow_mod(g, p - 1, p * p) == 1) g += p;
      const std::uint64_t order = pe / p * (p - 1);
      Generator gen{pe, order, std::vector<std::int32_t>(pe, -1)};
      std::uint64_t v = 1;
      for (std::uint64_t k = 0; k < order; ++k) {
        gen.log[v] = static_cast<std::int32_t>(k);
        v = v * g % pe;
      }
      gens_.push_back(std::move(gen));
    }
  }
  for (const auto& g : gens_) {
    size_ *= g.order;
    exponent_ = std::lcm(exponent_, g.order);
  }
  roots_.resize(exponent_);
  for (std::uint64_t k = 0; k < exponent_; ++k) {
    roots_[k] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(exponent_));
    // Quarter turns are exact.
    if ((4 * k) % exponent_ == 0) {
      static constexpr std::complex<double> kQuarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      roots_[k] = kQuarter[4 * k / exponent_];
    }
  }
}

std::int64_t DirichletGroup::angle_index(const std::vector<std::uint32_t>& exps, std::int64_t n) const {
  const auto ms = static_cast<std::int64_t>(m_);
  const auto r = static_cast<std::uint64_t>(((n % ms) + ms) % ms);
  if (std::gcd(r, m_) != 1) return -1;
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    const auto& g = gens_[i];
    const auto lg = static_cast<std::uint64_t>(g.log[r % g.component_modulus]);
    acc = (acc + (exps[i] % g.order) * lg % g.order * (exponent_ / g.order)) % exponent_;
  }
  return static_cast<std::int64_t>(acc);
}

DirichletCharacter DirichletGroup::character(std::uint64_t index) const {
  if (index >= size_) throw RangeError("character index out of range");
  std::vector<std::uint32_t> exps(gens_.size());
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    exps[i] = static_cast<std::uint32_t>(index % gens_[i].order);
    index /= gens_[i].order;
  }
  return DirichletCharacter(shared_from_this(), std::move(exps));
}

std::vector<DirichletCharacter> DirichletGroup::characters() const {
  std::vector<DirichletCharacter> out;
  out.reserve(size_);
  for (std::uint64_t i = 0; i < size_; ++i) out.push_back(character(i));
  return out;
}

std::vector<DirichletCharacter> character_group(std::uint64_t m) { return DirichletGroup::create(m)->characters(); }

}  // namespace plab
