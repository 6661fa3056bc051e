#pragma once

// Circle-valued functionals and the bridge between Z-duals and R-duals:
//   * the F_q-linear identification Hom_Z(F_q, (1/p)Z/Z) = F_q,
//   * ell: continuous Z-functionals on F_q[[x]]  ->  F_q((x))/F_q[[x]],
//   * transport of R-linear functionals M -> T to additive maps M -> R/Z,
//   * the p^n-torsion count of T over Z_p,
//   * arithmetic in Z[delta] for the admissible imaginary quadratic orders.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "dvrdual/duality.hpp"

namespace dvrdual {

/// numerator / p^k + Z in the p-power torsion of R/Z, canonical: k = 0 means
/// zero, otherwise p does not divide the numerator.
struct CircleElem {
  unsigned k = 0;
  std::uint64_t numerator = 0;

  friend bool operator==(const CircleElem&, const CircleElem&) = default;
  friend auto operator<=>(const CircleElem&, const CircleElem&) = default;
};

CircleElem circle_from(std::uint32_t p, std::uint64_t numerator, unsigned k);
CircleElem circle_add(std::uint32_t p, const CircleElem& a, const CircleElem& b);
CircleElem circle_scale(std::uint32_t p, std::uint64_t n, const CircleElem& a);

/// Values of psi on the F_p-basis 1, t, ..., t^{e-1} of F_q  ->  c with
/// psi = c * psi_0, where psi_0 reads the t^{e-1} coefficient over p and
/// (c * psi)(a) = psi(c a). Every value must lie in (1/p)Z/Z.
FqElem i_iso(const RingCtx& ctx, const std::vector<CircleElem>& psi_values);
std::vector<CircleElem> i_inv(const RingCtx& ctx, const FqElem& c);

/// A finitely supported Z-functional on F_q[[x]] in coordinates
/// c_n = i(phi restricted to F_q x^n). Trailing zeros are trimmed.
struct ZDualFunctional {
  std::vector<Digit> coeffs;

  std::size_t support_bound() const noexcept { return coeffs.size(); }
  friend bool operator==(const ZDualFunctional&, const ZDualFunctional&) = default;
};

ZDualFunctional make_functional(const RingCtx& ctx, std::vector<Digit> coeffs);

/// The same functional as raw values: values[n][j] = phi(t^j x^n).
struct RawZFunctional {
  std::vector<std::vector<CircleElem>> values;

  friend bool operator==(const RawZFunctional&, const RawZFunctional&) = default;
};

RawZFunctional to_raw(const RingCtx& ctx, const ZDualFunctional& phi);
ZDualFunctional from_raw(const RingCtx& ctx, const RawZFunctional& raw);
/// phi(a) for a in F_q[[x]] known to at least the support bound.
CircleElem raw_eval(const RingCtx& ctx, const RawZFunctional& raw, const RElem& a);

/// (r . phi)(a) = phi(r a), computed in coordinates: c'_n = sum_m r_m c_{n+m}.
ZDualFunctional functional_scalar_mul(const RingCtx& ctx, const RElem& r, const ZDualFunctional& phi);
/// The same action computed on raw values by expanding r t^j x^n in the basis.
RawZFunctional raw_scalar_mul(const RingCtx& ctx, const RElem& r, const RawZFunctional& raw);

TElem ell(const RingCtx& ctx, const ZDualFunctional& phi);
ZDualFunctional ell_inv(const RingCtx& ctx, const TElem& t);

/// An additive map M -> R/Z listed on the elements of M.
struct ZFunctionalTable {
  std::vector<ModElem> elements;
  std::vector<CircleElem> values;
};

/// m |-> Phi(m)(1) where Phi(m) = ell^{-1}(psi(m)).
CircleElem transport_value(const RingCtx& ctx, const InvariantFactors& m, const DualElem& psi, const ModElem& x);
ZFunctionalTable adjoint_transport(const RingCtx& ctx, const InvariantFactors& m, const DualElem& psi);

struct TorsionCount {
  std::uint64_t count = 0;
  std::uint64_t expected = 0;

  bool holds() const noexcept { return count == expected; }
};

/// #T[p^n] by enumeration against p^n, for R = Z_p.
TorsionCount torsion_count(const RingCtx& ctx, unsigned n);

struct ZDeltaElem {
  long long x = 0;
  long long y = 0;

  friend bool operator==(const ZDeltaElem&, const ZDeltaElem&) = default;
};

struct ZDeltaRejection {
  std::string reason;
};

class ZDeltaRing;
std::variant<ZDeltaRing, ZDeltaRejection> zdelta_validate(long long a, long long b);

/// Z[delta] with delta^2 = b delta + a, a < 0 and b^2 + 4a < 0. All
/// operations throw InvalidArgument on 64-bit overflow.
class ZDeltaRing {
 public:
  long long a() const noexcept { return a_; }
  long long b() const noexcept { return b_; }
  long long discriminant() const noexcept { return b_ * b_ + 4 * a_; }

  ZDeltaElem add(const ZDeltaElem& u, const ZDeltaElem& v) const;
  ZDeltaElem neg(const ZDeltaElem& u) const;
  ZDeltaElem mul(const ZDeltaElem& u, const ZDeltaElem& v) const;
  /// x^2 + b x y - a y^2 = |x + y delta|^2.
  long long norm(const ZDeltaElem& u) const;

 private:
  friend std::variant<ZDeltaRing, ZDeltaRejection> zdelta_validate(long long a, long long b);
  ZDeltaRing(long long a, long long b) : a_(a), b_(b) {}
  long long a_, b_;
};

}  // namespace dvrdual
