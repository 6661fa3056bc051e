#pragma once

// Brute-force enumerators used as ground truth. Everything here runs on its
// own residue arithmetic: an element of R/(pi^k) is an integer code in
// [0, q^k) (the base-q digit expansion), and no arithmetic from the
// structural modules is called. Only plain data types are shared.

#include <cstdint>
#include <vector>

#include "dvrdual/fingen.hpp"

namespace dvrdual::oracle {

struct EnumBudget {
  /// Largest module (or hom set) an enumerator may produce.
  std::uint64_t max_elements = 4096;
  /// Largest ambient group a closure computation may visit.
  std::uint64_t max_work = std::uint64_t{1} << 20;
  std::uint64_t seed = 0;
};

/// Torsion coordinates as codes, coordinate i in [0, q^e_i).
using Coords = std::vector<std::uint64_t>;

/// An R-linear map M -> T[pi^level]: generator i goes to images[i] / pi^level.
struct RHom {
  unsigned level = 0;
  std::vector<std::uint64_t> images;

  friend bool operator==(const RHom&, const RHom&) = default;
};

/// An additive map M -> (1/p)Z/Z on an equal-characteristic module, given on
/// the F_p-basis t^j x^k of each component (component-major, then k, then j).
/// Values are numerators mod p.
struct ZHom {
  std::vector<std::uint32_t> basis_values;

  friend bool operator==(const ZHom&, const ZHom&) = default;
};

struct CokernelCount {
  std::uint64_t count = 0;
  /// by_order[k] = number of elements of order exactly pi^k.
  std::vector<std::uint64_t> by_order;
  /// Truncation exponent at which the count stabilised.
  unsigned exponent = 0;
};

class Oracle {
 public:
  explicit Oracle(const RingCtx& ctx, EnumBudget budget = {});

  std::uint64_t q() const noexcept { return q_; }
  const EnumBudget& budget() const noexcept { return budget_; }

  /// q^k, throwing BudgetExceeded past 2^62.
  std::uint64_t size(unsigned k) const;
  std::uint64_t add(std::uint64_t a, std::uint64_t b, unsigned k) const;
  std::uint64_t neg(std::uint64_t a, unsigned k) const;
  std::uint64_t mul(std::uint64_t a, std::uint64_t b, unsigned k) const;
  /// pi^j mod pi^k.
  std::uint64_t pi_pow(unsigned j, unsigned k) const;
  /// Generators of R/(pi^k) as an abelian group.
  std::vector<std::uint64_t> additive_generators(unsigned k) const;

  std::uint64_t code_of(const RElem& a, unsigned k) const;
  RElem relem_of(std::uint64_t code, unsigned k) const;
  Coords coords_of(const InvariantFactors& m, const ModElem& x) const;
  ModElem elem_of(const InvariantFactors& m, const Coords& c) const;

  Coords m_add(const InvariantFactors& m, const Coords& a, const Coords& b) const;
  Coords m_scale(const InvariantFactors& m, std::uint64_t r, const Coords& a) const;

  /// Every element, lexicographic in the coordinate codes (first coordinate
  /// most significant).
  std::vector<Coords> enum_elements(const InvariantFactors& m) const;

  /// Every R-linear map M -> T[pi^level], images filtered per generator by
  /// pi^e_i * image == 0, then combined.
  std::vector<RHom> enum_r_homs(const InvariantFactors& m, unsigned level) const;
  /// Value code v with phi(x) = v / pi^level.
  std::uint64_t eval(const InvariantFactors& m, const RHom& phi, const Coords& x) const;

  /// Every additive map M -> (1/p)Z/Z; equal characteristic only.
  std::vector<ZHom> enum_z_homs(const InvariantFactors& m) const;
  std::uint32_t eval(const InvariantFactors& m, const ZHom& phi, const Coords& x) const;

  /// Closure of the additive span of r * g (r in R, g in gens) inside M.
  std::vector<Coords> span(const InvariantFactors& m, const std::vector<Coords>& gens) const;

  /// Every R-linear map from span(gens) to T[pi^level], as the tuple of
  /// generator values (codes over pi^level).
  std::vector<std::vector<std::uint64_t>> enum_submodule_homs(const InvariantFactors& m,
                                                              const std::vector<Coords>& gens,
                                                              unsigned level) const;

  /// Counts the cokernel of the relation matrix by closing its row space in
  /// (R/pi^E)^cols for E = 1, 2, ... until |coker / pi^E| stops growing.
  /// Throws InfiniteCokernel when that never happens below the matrix
  /// precision and BudgetExceeded when (R/pi^E)^cols gets too large.
  CokernelCount cokernel_bruteforce(const PresMatrix& a) const;

 private:
  std::uint32_t fq_mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t fq_add(std::uint32_t a, std::uint32_t b) const;

  bool mixed_;
  std::uint32_t p_;
  unsigned e_;
  std::uint64_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> fq_table_;
  EnumBudget budget_;
};

}  // namespace dvrdual::oracle
