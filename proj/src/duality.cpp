#include "dvrdual/duality.hpp"

#include <algorithm>
#include <optional>

namespace dvrdual {

DualModule dual_structure(const InvariantFactors& m) {
  m.validate();
  return DualModule{m, m.torsion_exps, m.free_rank};
}

void validate_dual_elem(const RingCtx& ctx, const DualModule& d, const DualElem& phi) {
  if (phi.torsion.size() != d.torsion_exps.size() || phi.t.size() != d.t_copies)
    throw Error(ErrorCode::ShapeMismatch, "functional has the wrong number of coordinates");
  for (std::size_t i = 0; i < phi.torsion.size(); ++i) {
    if (phi.torsion[i].precision() != d.torsion_exps[i])
      throw Error(ErrorCode::ShapeMismatch, "torsion coordinate must have exactly e_i digits");
    for (Digit x : phi.torsion[i].digits())
      if (x >= ctx.q()) throw Error(ErrorCode::DimensionMismatch, "digit out of range");
  }
  for (const auto& t : phi.t)
    for (Digit x : t.numerator())
      if (x >= ctx.q()) throw Error(ErrorCode::DimensionMismatch, "digit out of range");
}

DualElem dual_zero(const RingCtx& ctx, const DualModule& d) {
  DualElem z;
  for (unsigned e : d.torsion_exps) z.torsion.push_back(r_zero(ctx, e));
  z.t.resize(d.t_copies);
  return z;
}

DualElem dual_add(const RingCtx& ctx, const DualModule& d, const DualElem& a, const DualElem& b) {
  validate_dual_elem(ctx, d, a);
  validate_dual_elem(ctx, d, b);
  DualElem out;
  for (std::size_t i = 0; i < a.torsion.size(); ++i) out.torsion.push_back(r_add(ctx, a.torsion[i], b.torsion[i]));
  for (std::size_t j = 0; j < a.t.size(); ++j) out.t.push_back(t_add(ctx, a.t[j], b.t[j]));
  return out;
}

std::vector<DualElem> all_dual_elements(const RingCtx& ctx, const DualModule& d) {
  if (d.t_copies != 0) throw Error(ErrorCode::InvalidArgument, "the dual of a free factor is infinite");
  std::vector<DualElem> out;
  for (auto& m : all_elements(ctx, d.source)) out.push_back(DualElem{std::move(m.torsion), {}});
  return out;
}

TElem eval_pairing(const RingCtx& ctx, const DualModule& d, const DualElem& phi, const ModElem& m) {
  validate_dual_elem(ctx, d, phi);
  validate_elem(ctx, d.source, m);
  TElem acc;
  for (std::size_t i = 0; i < phi.torsion.size(); ++i) {
    const unsigned e = d.torsion_exps[i];
    acc = t_add(ctx, acc, t_from_fraction(ctx, r_mul(ctx, phi.torsion[i], m.torsion[i]), e));
  }
  for (std::size_t j = 0; j < phi.t.size(); ++j) acc = t_add(ctx, acc, t_scalar_mul(ctx, m.free[j], phi.t[j]));
  return acc;
}

RElem i_x_forward(const RingCtx& ctx, unsigned e, const TElem& t) {
  (void)ctx;
  if (e == 0) throw Error(ErrorCode::InvalidArgument, "exponent must be positive");
  if (t.level() > e) throw Error(ErrorCode::NotTorsion, "element is not killed by pi^" + std::to_string(e));
  return RElem(t_numerator_at(t, e));
}

TElem i_x_inverse(const RingCtx& ctx, unsigned e, const RElem& b) {
  if (b.precision() != e) throw Error(ErrorCode::ShapeMismatch, "residue must have exactly e digits");
  return t_from_fraction(ctx, b, e);
}

namespace {

// phi evaluated on the j-th generator of its module.
TElem value_on_generator(const RingCtx& ctx, const DualModule& d, const DualElem& phi, std::size_t j) {
  if (j < d.torsion_exps.size()) return i_x_inverse(ctx, d.torsion_exps[j], phi.torsion[j]);
  return phi.t[j - d.torsion_exps.size()];
}

}  // namespace

DualElem apply_dual_hom(const RingCtx& ctx, const HomMatrix& h, const DualElem& phi) {
  validate_hom(ctx, h);
  const DualModule dn = dual_structure(h.codomain);
  validate_dual_elem(ctx, dn, phi);
  std::vector<TElem> gen_values;
  for (std::size_t j = 0; j < h.codomain.component_count(); ++j)
    gen_values.push_back(value_on_generator(ctx, dn, phi, j));

  DualElem out;
  for (std::size_t i = 0; i < h.domain.component_count(); ++i) {
    TElem v;
    const bool dom_torsion = i < h.domain.torsion_count();
    for (std::size_t j = 0; j < h.codomain.component_count(); ++j) {
      if (dom_torsion && j >= h.codomain.torsion_count()) continue;  // torsion -> free is zero
      v = t_add(ctx, v, t_scalar_mul(ctx, h.at(i, j), gen_values[j]));
    }
    if (dom_torsion)
      out.torsion.push_back(i_x_forward(ctx, h.domain.torsion_exps[i], v));
    else
      out.t.push_back(std::move(v));
  }
  return out;
}

HomMatrix dual_hom(const RingCtx& ctx, const HomMatrix& h) {
  validate_hom(ctx, h);
  if (!h.domain.is_finite() || !h.codomain.is_finite())
    throw Error(ErrorCode::ShapeMismatch, "dual_hom as a matrix needs finite modules");
  HomMatrix out{h.codomain, h.domain, {}};
  for (std::size_t j = 0; j < h.codomain.torsion_count(); ++j) {
    const TElem gen = t_from_fraction(ctx, r_one(ctx, h.codomain.torsion_exps[j]), h.codomain.torsion_exps[j]);
    for (std::size_t i = 0; i < h.domain.torsion_count(); ++i)
      out.entries.push_back(i_x_forward(ctx, h.domain.torsion_exps[i], t_scalar_mul(ctx, h.at(i, j), gen)));
  }
  validate_hom(ctx, out);
  return out;
}

bool check_inf_res_square(const RingCtx& ctx, unsigned a, unsigned b, const DualElem& phi) {
  if (a == 0 || a > b) throw Error(ErrorCode::InvalidArgument, "the square needs 0 < a <= b");
  const InvariantFactors big{{b}, 0}, small{{a}, 0};
  validate_dual_elem(ctx, dual_structure(big), phi);
  // inf: R/(pi^a) -> R/(pi^b) as a hom matrix, and its dual.
  const HomMatrix inf{small, big, {inf_map(ctx, a, b, r_one(ctx, a))}};
  const DualElem pulled_back = apply_dual_hom(ctx, inf, phi);
  const RElem down_then_across = pulled_back.torsion.at(0);

  const TElem phi_one = i_x_inverse(ctx, b, phi.torsion.at(0));
  const RElem across_then_down = res_map(ctx, b, a, i_x_forward(ctx, b, phi_one));
  return down_then_across == across_then_down;
}

std::function<TElem(const DualElem&)> double_dual_functional(const RingCtx& ctx, const InvariantFactors& m,
                                                             const ModElem& x) {
  validate_elem(ctx, m, x);
  return [ctx, d = dual_structure(m), x](const DualElem& phi) { return eval_pairing(ctx, d, phi, x); };
}

ModElem double_dual_map(const RingCtx& ctx, const InvariantFactors& m, const ModElem& x) {
  const auto dm = double_dual_functional(ctx, m, x);
  const DualModule d = dual_structure(m);
  ModElem out;
  for (std::size_t i = 0; i < m.torsion_count(); ++i) {
    DualElem coord = dual_zero(ctx, d);
    coord.torsion[i] = r_one(ctx, m.torsion_exps[i]);
    out.torsion.push_back(i_x_forward(ctx, m.torsion_exps[i], dm(coord)));
  }
  for (std::size_t j = 0; j < m.free_rank; ++j) {
    const unsigned prec = x.free[j].precision();
    // Evaluate on phi_n with phi_n(1) = 1/pi^n; the results are the residues
    // of the coordinate mod pi^n and must form a compatible system.
    std::vector<Digit> digits;
    for (unsigned n = 1; n <= prec; ++n) {
      DualElem coord = dual_zero(ctx, d);
      coord.t[j] = t_from_fraction(ctx, r_one(ctx, n), n);
      const RElem level_n = i_x_forward(ctx, n, dm(coord));
      if (!std::equal(digits.begin(), digits.end(), level_n.digits().begin()))
        throw Error(ErrorCode::Inconsistent, "double-dual values are not compatible across levels");
      digits.push_back(level_n.digit(n - 1));
    }
    out.free.emplace_back(std::move(digits));
  }
  return out;
}

TElem t_endo_apply(const RingCtx& ctx, const TEndo& f, const TElem& t) {
  if (f.scale.precision() < t.level())
    throw Error(ErrorCode::InsufficientPrecision, "endomorphism known to too low a precision");
  return t_scalar_mul(ctx, f.scale, t);
}

TElem t_divide_by_pi_power(const RingCtx& ctx, const TElem& s, unsigned k) {
  (void)ctx;
  if (s.is_zero()) return TElem{};
  std::vector<Digit> num = s.numerator();
  num.resize(s.level() + k, 0);
  return TElem::from_canonical(std::move(num));
}

namespace {

// Span membership inside (R/pi^E)^k, via a Howell form of the generators.
// Each row carries its expression in terms of the original generators.
class SpanSolver {
 public:
  SpanSolver(const RingCtx& ctx, unsigned exponent, std::size_t dim) : ctx_(ctx), e_(exponent), dim_(dim) {}

  void add_generator(std::vector<RElem> v) {
    gens_.push_back(std::move(v));
    rebuild();
  }

  std::size_t generator_count() const { return gens_.size(); }

  /// Coefficients r with w = sum r_i gen_i, or nullopt when w is outside the span.
  std::optional<std::vector<RElem>> solve(std::vector<RElem> w) const {
    std::vector<RElem> coeffs(gens_.size(), r_zero(ctx_, e_));
    for (const auto& row : howell_) {
      const RElem& entry = w[row.pivot];
      if (entry.is_zero_digits()) continue;
      const Valuation v = r_valuation(ctx_, entry);
      if (v.value < row.valuation) return std::nullopt;
      const RElem factor = r_lift(r_shift_down(entry, row.valuation), e_);
      for (std::size_t c = 0; c < dim_; ++c) w[c] = r_sub(ctx_, w[c], r_mul(ctx_, factor, row.vec[c]));
      for (std::size_t g = 0; g < coeffs.size(); ++g)
        coeffs[g] = r_add(ctx_, coeffs[g], r_mul(ctx_, factor, row.coeffs[g]));
    }
    for (const auto& c : w)
      if (!c.is_zero_digits()) return std::nullopt;
    return coeffs;
  }

 private:
  struct Row {
    std::vector<RElem> vec;
    std::vector<RElem> coeffs;
    std::size_t pivot = 0;
    unsigned valuation = 0;
  };

  void scale(Row& row, const RElem& s) const {
    for (auto& x : row.vec) x = r_mul(ctx_, s, x);
    for (auto& x : row.coeffs) x = r_mul(ctx_, s, x);
  }

  void rebuild() {
    std::vector<Row> pending;
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      Row r{gens_[g], std::vector<RElem>(gens_.size(), r_zero(ctx_, e_))};
      r.coeffs[g] = r_one(ctx_, e_);
      pending.push_back(std::move(r));
    }
    howell_.clear();
    for (std::size_t col = 0; col < dim_; ++col) {
      std::size_t best = pending.size();
      unsigned best_val = e_;
      for (std::size_t i = 0; i < pending.size(); ++i) {
        const Valuation v = r_valuation(ctx_, pending[i].vec[col]);
        if (v.exact && v.value < best_val) {
          best = i;
          best_val = v.value;
        }
      }
      if (best == pending.size()) continue;
      Row pivot = std::move(pending[best]);
      pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
      const RElem unit = r_lift(r_shift_down(pivot.vec[col], best_val), e_);
      scale(pivot, r_lift(r_unit_inverse(ctx_, r_truncate(unit, e_ - best_val)), e_));
      pivot.pivot = col;
      pivot.valuation = best_val;
      for (auto& r : pending) {
        if (r.vec[col].is_zero_digits()) continue;
        const RElem factor = r_neg(ctx_, r_lift(r_shift_down(r.vec[col], best_val), e_));
        for (std::size_t c = 0; c < dim_; ++c) r.vec[c] = r_add(ctx_, r.vec[c], r_mul(ctx_, factor, pivot.vec[c]));
        for (std::size_t g = 0; g < r.coeffs.size(); ++g)
          r.coeffs[g] = r_add(ctx_, r.coeffs[g], r_mul(ctx_, factor, pivot.coeffs[g]));
      }
      if (best_val > 0) {
        // pi^(E-v) * pivot vanishes in this column but may not elsewhere.
        Row extra = pivot;
        const RElem pw = r_shift_up(r_one(ctx_, best_val), e_ - best_val);
        scale(extra, pw);
        pending.push_back(std::move(extra));
      }
      howell_.push_back(std::move(pivot));
    }
  }

  const RingCtx& ctx_;
  unsigned e_;
  std::size_t dim_;
  std::vector<std::vector<RElem>> gens_;
  std::vector<Row> howell_;
};

}  // namespace

DualElem extend_hom(const RingCtx& ctx, const InvariantFactors& m, const std::vector<ModElem>& gens,
                    const std::vector<TElem>& values) {
  m.validate();
  if (!m.is_finite()) throw Error(ErrorCode::InvalidArgument, "extend_hom needs a finite module");
  if (gens.size() != values.size()) throw Error(ErrorCode::ShapeMismatch, "one value per generator is required");
  for (const auto& g : gens) validate_elem(ctx, m, g);

  const unsigned big = m.max_exponent();
  const std::size_t k = m.torsion_count();
  DualElem out;
  if (k == 0) {
    for (const auto& v : values)
      if (!v.is_zero()) throw Error(ErrorCode::Inconsistent, "the zero module only carries the zero functional");
    return out;
  }

  auto embed = [&](const ModElem& x) {
    std::vector<RElem> v;
    for (std::size_t i = 0; i < k; ++i) v.push_back(inf_map(ctx, m.torsion_exps[i], big, x.torsion[i]));
    return v;
  };
  auto times_pi = [&](std::vector<RElem> v, unsigned j) {
    for (auto& c : v) c = r_truncate(r_shift_up(c, j), big);
    return v;
  };

  SpanSolver span(ctx, big, k);
  std::vector<TElem> domain_values;
  auto value_of = [&](const std::vector<RElem>& coeffs) {
    TElem acc;
    for (std::size_t g = 0; g < coeffs.size(); ++g)
      acc = t_add(ctx, acc, t_scalar_mul(ctx, coeffs[g], domain_values[g]));
    return acc;
  };

  // Returns phi(g), assigning it when `given` is empty.
  auto process = [&](const ModElem& g, const TElem* given) -> TElem {
    const auto v = embed(g);
    for (unsigned j = 0; j <= big; ++j) {
      const auto coeffs = span.solve(times_pi(v, j));
      if (!coeffs) continue;
      const TElem target = value_of(*coeffs);
      TElem value;
      if (given) {
        if (given->level() > big || !(t_scalar_mul(ctx, r_shift_up(r_one(ctx, big), j), *given) == target))
          throw Error(ErrorCode::Inconsistent, "values violate the relations among the generators");
        value = *given;
      } else {
        value = t_divide_by_pi_power(ctx, target, j);
      }
      if (j > 0) {
        span.add_generator(v);
        domain_values.push_back(value);
      }
      return value;
    }
    throw Error(ErrorCode::Inconsistent, "generator has no annihilating power");  // unreachable: pi^E g = 0
  };

  for (std::size_t i = 0; i < gens.size(); ++i) process(gens[i], &values[i]);
  for (std::size_t i = 0; i < k; ++i) {
    const TElem value = process(elem_basis(ctx, m, i, 1), nullptr);
    out.torsion.push_back(i_x_forward(ctx, m.torsion_exps[i], value));
  }
  return out;
}

}  // namespace dvrdual
