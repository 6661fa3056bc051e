#pragma once

// Finitely generated R-modules in invariant-factor form
//   M = R/(pi^e_1) x ... x R/(pi^e_k) x R^f,   e_1 <= ... <= e_k,
// Smith normal form of presentation matrices, and homomorphisms between
// modules in this form.

#include <cstdint>
#include <string>
#include <vector>

#include "dvrdual/dvr_arith.hpp"

namespace dvrdual {

struct InvariantFactors {
  std::vector<unsigned> torsion_exps;
  unsigned free_rank = 0;

  /// Sorts nothing: throws InvalidArgument unless exponents are positive and
  /// non-decreasing.
  void validate() const;

  std::size_t torsion_count() const noexcept { return torsion_exps.size(); }
  std::size_t component_count() const noexcept { return torsion_exps.size() + free_rank; }
  bool is_finite() const noexcept { return free_rank == 0; }
  unsigned total_exponent() const noexcept;
  unsigned max_exponent() const noexcept;

  friend bool operator==(const InvariantFactors&, const InvariantFactors&) = default;
};

/// Builds a validated InvariantFactors, sorting the exponents first.
InvariantFactors make_factors(std::vector<unsigned> torsion_exps, unsigned free_rank);

/// |M| = q^{sum e_i} for finite M; throws BudgetExceeded past 2^63.
std::uint64_t module_cardinality(const RingCtx& ctx, const InvariantFactors& m);

/// Coordinates of an element in the chosen decomposition. Torsion coordinate
/// i is an exact residue with exactly e_i digits; free coordinates share one
/// precision.
struct ModElem {
  std::vector<RElem> torsion;
  std::vector<RElem> free;

  friend bool operator==(const ModElem&, const ModElem&) = default;
};

void validate_elem(const RingCtx& ctx, const InvariantFactors& m, const ModElem& x);

ModElem elem_zero(const RingCtx& ctx, const InvariantFactors& m, unsigned free_precision);
/// The i-th standard generator (component index, torsion components first).
ModElem elem_basis(const RingCtx& ctx, const InvariantFactors& m, std::size_t component,
                   unsigned free_precision);
ModElem elem_add(const RingCtx& ctx, const InvariantFactors& m, const ModElem& a, const ModElem& b);
ModElem elem_neg(const RingCtx& ctx, const InvariantFactors& m, const ModElem& a);
ModElem elem_sub(const RingCtx& ctx, const InvariantFactors& m, const ModElem& a, const ModElem& b);
ModElem elem_scalar_mul(const RingCtx& ctx, const InvariantFactors& m, const RElem& r, const ModElem& x);
bool elem_is_zero(const ModElem& x);

/// Every element of a finite module, torsion coordinates in odometer order.
std::vector<ModElem> all_elements(const RingCtx& ctx, const InvariantFactors& m);

/// r mod pi^a  |->  r * pi^(b-a) mod pi^b.
RElem inf_map(const RingCtx& ctx, unsigned a, unsigned b, const RElem& r);
/// r mod pi^b  |->  r mod pi^a.
RElem res_map(const RingCtx& ctx, unsigned b, unsigned a, const RElem& r);

/// Rows are relations, columns are generators; the module presented is the
/// cokernel of the row space inside R^cols.
class PresMatrix {
 public:
  PresMatrix(std::size_t rows, std::size_t cols, std::vector<RElem> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  unsigned precision() const noexcept { return precision_; }
  const RElem& at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  RElem& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const std::vector<RElem>& entries() const noexcept { return entries_; }

  friend bool operator==(const PresMatrix&, const PresMatrix&) = default;

 private:
  std::size_t rows_, cols_;
  unsigned precision_;
  std::vector<RElem> entries_;
};

PresMatrix matrix_from_ints(const RingCtx& ctx, const std::vector<std::vector<long long>>& rows,
                            unsigned precision);

/// One elementary operation on rows (or columns) of a matrix.
///   Swap:        exchange target and source
///   AddMultiple: target += scalar * source
///   ScaleUnit:   target *= scalar (scalar a unit)
struct ElementaryOp {
  enum class Kind { Swap, AddMultiple, ScaleUnit };
  Kind kind;
  std::size_t target;
  std::size_t source;
  RElem scalar;
};

void apply_row_op(const RingCtx& ctx, PresMatrix& m, const ElementaryOp& op);
void apply_col_op(const RingCtx& ctx, PresMatrix& m, const ElementaryOp& op);

/// Applies the row operations, then the column operations, in order.
PresMatrix replay_ops(const RingCtx& ctx, PresMatrix m, const std::vector<ElementaryOp>& row_ops,
                      const std::vector<ElementaryOp>& col_ops);

struct SnfOptions {
  enum class PivotRule {
    MinValuation,
    /// Fault injection for the verification suite's self test: picks the
    /// largest-valuation entry and divides by it regardless of divisibility.
    CorruptedMaxValuation,
  };
  enum class ZeroResidual {
    /// A residual block that vanishes at the working precision contributes
    /// free generators (the cokernel is determined modulo pi^precision).
    AsFree,
    /// Throw PrecisionExhausted unless that block is structurally zero,
    /// i.e. built only from zero input entries.
    Reject,
  };
  PivotRule pivot_rule = PivotRule::MinValuation;
  ZeroResidual zero_residual = ZeroResidual::AsFree;
};

struct SnfResult {
  InvariantFactors factors;
  std::vector<ElementaryOp> row_ops;
  std::vector<ElementaryOp> col_ops;
  /// Valuations of the diagonal pivots in elimination order.
  std::vector<unsigned> pivot_valuations;
};

SnfResult snf(const RingCtx& ctx, const PresMatrix& m, const SnfOptions& options = {});

/// A homomorphism between modules in invariant-factor form. Entry (i, j) is
/// the j-th coordinate of the image of the i-th domain generator:
///   torsion(a) -> torsion(b): residue mod pi^b lying in pi^max(0,b-a) R
///   torsion    -> free:       zero
///   free       -> torsion(b): any residue mod pi^b
///   free       -> free:       any RElem
struct HomMatrix {
  InvariantFactors domain;
  InvariantFactors codomain;
  std::vector<RElem> entries;  // row-major, domain components x codomain components

  const RElem& at(std::size_t i, std::size_t j) const { return entries.at(i * codomain.component_count() + j); }

  friend bool operator==(const HomMatrix&, const HomMatrix&) = default;
};

void validate_hom(const RingCtx& ctx, const HomMatrix& h);
HomMatrix hom_zero(const RingCtx& ctx, const InvariantFactors& domain, const InvariantFactors& codomain,
                   unsigned free_precision);
HomMatrix hom_identity(const RingCtx& ctx, const InvariantFactors& m, unsigned free_precision);

ModElem apply_hom(const RingCtx& ctx, const HomMatrix& h, const ModElem& x);

struct HomSpace {
  InvariantFactors structure;
  std::vector<HomMatrix> generators;
};

HomSpace hom_space(const RingCtx& ctx, const InvariantFactors& m, const InvariantFactors& n,
                   unsigned free_precision);

/// Every HomMatrix between finite modules (each entry ranges over its allowed
/// residues), in odometer order.
std::vector<HomMatrix> all_homs(const RingCtx& ctx, const InvariantFactors& m, const InvariantFactors& n);

/// a * b mod pi^b_exp where a is a residue mod pi^a_exp and, when a_exp < b_exp,
/// b is divisible by pi^(b_exp - a_exp). This is the product used by homs out
/// of torsion components.
RElem residue_mul(const RingCtx& ctx, const RElem& a, unsigned a_exp, const RElem& b, unsigned b_exp);

}  // namespace dvrdual
