#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

namespace plab {

class DirichletGroup;

/// A Dirichlet character mod m, stored as its exponent vector against the
/// cyclic decomposition of (Z/m)^*. Values are exact roots of unity of order
/// dividing the group exponent (0 when (n, m) > 1).
class DirichletCharacter {
 public:
  [[nodiscard]] std::uint64_t modulus() const;
  [[nodiscard]] const std::vector<std::uint32_t>& exponents() const { return exps_; }
  [[nodiscard]] bool is_principal() const;

  /// Index k in [0, exponent) with chi(n) = e(k / exponent); -1 when (n, m) > 1.
  [[nodiscard]] std::int64_t angle_index(std::int64_t n) const;
  [[nodiscard]] std::complex<double> operator()(std::int64_t n) const;

 private:
  friend class DirichletGroup;
  DirichletCharacter(std::shared_ptr<const DirichletGroup> g, std::vector<std::uint32_t> e)
      : group_(std::move(g)), exps_(std::move(e)) {}
  std::shared_ptr<const DirichletGroup> group_;
  std::vector<std::uint32_t> exps_;
};

/// (Z/m)^* decomposed by CRT into prime-power components, each cyclic except
/// 2^e with e >= 3, which splits as <-1> x <5>. Discrete logs are tabulated
/// per component, so construction costs O(m).
class DirichletGroup : public std::enable_shared_from_this<DirichletGroup> {
 public:
  static constexpr std::uint64_t kMaxModulus = 1'000'000;

  /// Throws CapacityError above kMaxModulus, ArgumentError for m = 0.
  static std::shared_ptr<const DirichletGroup> create(std::uint64_t m);

  [[nodiscard]] std::uint64_t modulus() const { return m_; }
  /// phi(m).
  [[nodiscard]] std::uint64_t size() const { return size_; }
  /// Least common multiple of the generator orders.
  [[nodiscard]] std::uint64_t exponent() const { return exponent_; }
  [[nodiscard]] std::size_t generator_count() const { return gens_.size(); }
  [[nodiscard]] std::uint64_t generator_order(std::size_t i) const { return gens_[i].order; }

  /// Character with mixed-radix index `index` in [0, size()).
  [[nodiscard]] DirichletCharacter character(std::uint64_t index) const;
  [[nodiscard]] std::vector<DirichletCharacter> characters() const;

  [[nodiscard]] std::int64_t angle_index(const std::vector<std::uint32_t>& exps, std::int64_t n) const;
  [[nodiscard]] std::complex<double> root(std::uint64_t k) const { return roots_[k % exponent_]; }

 private:
  struct Generator {
    std::uint64_t component_modulus;
    std::uint64_t order;
    std::vector<std::int32_t> log;  // residue mod component -> log, -1 if not a unit
  };
  explicit DirichletGroup(std::uint64_t m);
  std::uint64_t m_;
  std::uint64_t size_ = 1;
  std::uint64_t exponent_ = 1;
  std::vector<Generator> gens_;
  std::vector<std::complex<double>> roots_;
};

/// All phi(m) characters mod m.
std::vector<DirichletCharacter> character_group(std::uint64_t m);

}  // namespace plab
