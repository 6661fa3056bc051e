#pragma once

// Exact arithmetic for a compact discrete valuation ring R (Z_p or F_q[[x]])
// truncated at an explicit precision, its residue field F_q, and the
// divisible quotient T = K/R, which is represented exactly.

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dvrdual/error.hpp"

namespace dvrdual {

enum class Mode { EqualChar, MixedChar };

/// A residue-field element packed as an integer in [0, q): the coefficient of
/// t^j contributes c_j * p^j. For e = 1 this is just the residue itself.
using Digit = std::uint32_t;

/// Element of F_q = F_p[t]/(modulus) as its e coefficients, lowest first.
struct FqElem {
  std::vector<std::uint32_t> coeffs;

  friend bool operator==(const FqElem&, const FqElem&) = default;
};

class RingCtx {
 public:
  /// Z_p. The residue field is F_p with the (irrelevant) modulus t.
  static RingCtx mixed(std::uint32_t p, unsigned default_precision);

  /// F_q[[x]] with F_q = F_p[t]/(modulus). `modulus` lists c_0..c_e and must
  /// be monic and irreducible over F_p.
  static RingCtx equal(std::uint32_t p, std::vector<std::uint32_t> modulus,
                       unsigned default_precision);

  Mode mode() const noexcept { return mode_; }
  std::uint32_t p() const noexcept { return p_; }
  unsigned e() const noexcept { return e_; }
  std::uint32_t q() const noexcept { return q_; }
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }
  unsigned default_precision() const noexcept { return default_precision_; }

  /// Same ring, different default precision.
  RingCtx with_precision(unsigned precision) const;

  FqElem unpack(Digit d) const;
  Digit pack(const FqElem& a) const;

  // Residue-field operations on packed digits.
  Digit dadd(Digit a, Digit b) const;
  Digit dsub(Digit a, Digit b) const;
  Digit dneg(Digit a) const;
  Digit dmul(Digit a, Digit b) const;
  /// Throws NonUnit for 0.
  Digit dinv(Digit a) const;

  /// Human-readable ring name, e.g. "Z_3" or "F_4[[x]]".
  std::string name() const;

  friend bool operator==(const RingCtx& a, const RingCtx& b) {
    return a.mode_ == b.mode_ && a.p_ == b.p_ && a.modulus_ == b.modulus_;
  }

 private:
  struct Tables;

  RingCtx() = default;
  void build_tables();

  Mode mode_ = Mode::MixedChar;
  std::uint32_t p_ = 2;
  unsigned e_ = 1;
  std::uint32_t q_ = 2;
  std::vector<std::uint32_t> modulus_;
  unsigned default_precision_ = 1;
  std::shared_ptr<const Tables> tables_;
};

/// True when `modulus` (c_0..c_e, monic) has no monic factor of degree 1..e/2
/// over F_p, found by exhaustive trial division.
bool is_irreducible_mod_p(std::uint32_t p, const std::vector<std::uint32_t>& modulus);

FqElem fq_mul(const RingCtx& ctx, const FqElem& a, const FqElem& b);
FqElem fq_add(const RingCtx& ctx, const FqElem& a, const FqElem& b);

/// An element of R known modulo pi^precision, as pi-adic digits (least
/// significant first). Precision equals the digit count and is at least 1.
class RElem {
 public:
  explicit RElem(std::vector<Digit> digits);

  const std::vector<Digit>& digits() const noexcept { return digits_; }
  unsigned precision() const noexcept { return static_cast<unsigned>(digits_.size()); }
  Digit digit(std::size_t i) const { return digits_.at(i); }
  bool is_zero_digits() const noexcept;

  /// Digit-exact comparison including precision.
  friend bool operator==(const RElem&, const RElem&) = default;

 private:
  std::vector<Digit> digits_;
};

struct Valuation {
  unsigned value = 0;
  /// false when every digit is zero: the valuation is only known to be at
  /// least `value` (the precision).
  bool exact = true;

  friend bool operator==(const Valuation&, const Valuation&) = default;
};

RElem r_zero(const RingCtx& ctx, unsigned precision);
RElem r_one(const RingCtx& ctx, unsigned precision);
/// Non-negative n is read as base-q digits (each a packed F_q digit); in
/// MixedChar this is the ordinary p-adic expansion and negative n is allowed.
RElem r_from_int(const RingCtx& ctx, long long n, unsigned precision);
/// Validates each digit against q.
RElem r_from_digits(const RingCtx& ctx, std::vector<Digit> digits);
/// Value of `a` as an integer in [0, q^precision) when it fits in 64 bits.
std::uint64_t r_to_code(const RingCtx& ctx, const RElem& a);

RElem r_add(const RingCtx& ctx, const RElem& a, const RElem& b);
RElem r_sub(const RingCtx& ctx, const RElem& a, const RElem& b);
RElem r_neg(const RingCtx& ctx, const RElem& a);
RElem r_mul(const RingCtx& ctx, const RElem& a, const RElem& b);

/// Drops digits at or above `precision`.
RElem r_truncate(const RElem& a, unsigned precision);
/// Appends zero digits up to `precision`. The result is one lift of `a`.
RElem r_lift(const RElem& a, unsigned precision);
/// Multiplication by pi^k. The result is known to precision + k.
RElem r_shift_up(const RElem& a, unsigned k);
/// Exact division by pi^k; the low k digits must be zero. Precision drops by k.
RElem r_shift_down(const RElem& a, unsigned k);

Valuation r_valuation(const RingCtx& ctx, const RElem& a);
RElem r_unit_inverse(const RingCtx& ctx, const RElem& a);
/// Equality modulo pi^min(precisions).
bool r_congruent(const RElem& a, const RElem& b);

/// An element numerator / pi^level + R of T = K/R in canonical form:
/// level 0 is the zero of T, otherwise the numerator's constant digit is
/// nonzero. The numerator has exactly `level` digits.
class TElem {
 public:
  TElem() = default;

  unsigned level() const noexcept { return static_cast<unsigned>(numerator_.size()); }
  const std::vector<Digit>& numerator() const noexcept { return numerator_; }
  bool is_zero() const noexcept { return numerator_.empty(); }

  /// Builds from canonical data; throws InvalidArgument otherwise.
  static TElem from_canonical(std::vector<Digit> numerator);

  friend bool operator==(const TElem&, const TElem&) = default;
  /// Orders by level, then numerator digits least significant first.
  friend std::strong_ordering operator<=>(const TElem& a, const TElem& b);

 private:
  explicit TElem(std::vector<Digit> numerator) : numerator_(std::move(numerator)) {}
  friend TElem t_canonicalize(std::vector<Digit> numerator);

  std::vector<Digit> numerator_;
};

/// numerator / pi^{numerator.size()} reduced to canonical form.
TElem t_canonicalize(std::vector<Digit> numerator);

TElem t_from_fraction(const RingCtx& ctx, const RElem& a, unsigned n);
TElem t_add(const RingCtx& ctx, const TElem& s, const TElem& t);
TElem t_neg(const RingCtx& ctx, const TElem& t);
TElem t_sub(const RingCtx& ctx, const TElem& s, const TElem& t);
TElem t_scalar_mul(const RingCtx& ctx, const RElem& r, const TElem& t);

/// Numerator of t written over pi^level (level >= t.level()), i.e. the
/// unique residue a mod pi^level with t = a / pi^level.
std::vector<Digit> t_numerator_at(const TElem& t, unsigned level);

/// All TElems of level <= n, in canonical form, ordered by operator<.
std::vector<TElem> t_enumerate_torsion(const RingCtx& ctx, unsigned n);

// Low-level digit-vector kernels shared by the modules above. Each result has
// exactly `len` digits and is computed modulo pi^len.
namespace digits {
std::vector<Digit> add(const RingCtx& ctx, std::span<const Digit> a, std::span<const Digit> b,
                       std::size_t len);
std::vector<Digit> neg(const RingCtx& ctx, std::span<const Digit> a, std::size_t len);
std::vector<Digit> mul(const RingCtx& ctx, std::span<const Digit> a, std::span<const Digit> b,
                       std::size_t len);
}  // namespace digits

}  // namespace dvrdual
