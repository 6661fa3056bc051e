#pragma once

// The dual functor M -> Hom_R(M, T) for finitely generated M, written in
// explicit coordinates:
//   * a functional on R/(pi^e) is recorded by the residue b with
//     phi(1) = b / pi^e (the i_x identification), and
//   * a functional on a free factor R is recorded by phi(1) in T.
// So the dual of R/(pi^e) is again R/(pi^e) and each free factor contributes
// one copy of T.

#include <functional>
#include <vector>

#include "dvrdual/fingen.hpp"

namespace dvrdual {

struct DualModule {
  InvariantFactors source;
  std::vector<unsigned> torsion_exps;
  unsigned t_copies = 0;

  friend bool operator==(const DualModule&, const DualModule&) = default;
};

struct DualElem {
  std::vector<RElem> torsion;  // b_i with e_i digits
  std::vector<TElem> t;        // phi(1) on each free factor

  friend bool operator==(const DualElem&, const DualElem&) = default;
};

DualModule dual_structure(const InvariantFactors& m);

void validate_dual_elem(const RingCtx& ctx, const DualModule& d, const DualElem& phi);
DualElem dual_zero(const RingCtx& ctx, const DualModule& d);
DualElem dual_add(const RingCtx& ctx, const DualModule& d, const DualElem& a, const DualElem& b);
/// Every functional on a finite module, odometer order over the b_i.
std::vector<DualElem> all_dual_elements(const RingCtx& ctx, const DualModule& d);

/// phi(m) = sum_i b_i m_i / pi^e_i + sum_j m_j t_j.
TElem eval_pairing(const RingCtx& ctx, const DualModule& d, const DualElem& phi, const ModElem& m);

/// The unique b mod pi^e with t = b / pi^e. Throws NotTorsion if t has level > e.
RElem i_x_forward(const RingCtx& ctx, unsigned e, const TElem& t);
/// b mod pi^e  |->  b / pi^e in T.
TElem i_x_inverse(const RingCtx& ctx, unsigned e, const RElem& b);

/// Precomposition with h: M -> N, sending a functional on N to one on M.
DualElem apply_dual_hom(const RingCtx& ctx, const HomMatrix& h, const DualElem& phi);
/// Matrix of precomposition dual(N) -> dual(M). Both modules must be finite,
/// since the dual of a free factor (a copy of T) is not finitely generated.
HomMatrix dual_hom(const RingCtx& ctx, const HomMatrix& h);

/// Checks i_x(inf^dual(phi)) == res(i_y(phi)) for x = pi^a, y = pi^b, where
/// phi is a functional on R/(pi^b).
bool check_inf_res_square(const RingCtx& ctx, unsigned a, unsigned b, const DualElem& phi);

/// The functional phi |-> phi(m) on the dual of M.
std::function<TElem(const DualElem&)> double_dual_functional(const RingCtx& ctx, const InvariantFactors& m,
                                                             const ModElem& x);

/// The double-dual image of m, read back into M-coordinates by evaluating it
/// on the coordinate functionals of the dual: i_x on torsion factors, and on
/// each copy of T through phi |-> (phi(1/pi^n))_n, which determines an
/// element of R digit by digit.
ModElem double_dual_map(const RingCtx& ctx, const InvariantFactors& m, const ModElem& x);

/// An endomorphism of T, necessarily multiplication by an element of R.
struct TEndo {
  RElem scale;
};

TElem t_endo_apply(const RingCtx& ctx, const TEndo& f, const TElem& t);

/// Extends a functional given on the submodule generated by `gens` to all of
/// the finite module `m`. Generators are processed in order (`gens`, then the
/// standard basis of m); a new generator g with pi^k g the first multiple
/// landing in the current domain gets the value t solving pi^k t = phi(pi^k g)
/// of minimal level and smallest numerator. Throws Inconsistent when `values`
/// do not define an R-linear map on the span of `gens`.
DualElem extend_hom(const RingCtx& ctx, const InvariantFactors& m, const std::vector<ModElem>& gens,
                    const std::vector<TElem>& values);

/// Smallest solution t of pi^k t = s in T (level minimal, then the
/// lexicographically smallest numerator).
TElem t_divide_by_pi_power(const RingCtx& ctx, const TElem& s, unsigned k);

}  // namespace dvrdual
