#include "dvrdual/fingen.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace dvrdual {

void InvariantFactors::validate() const {
  for (std::size_t i = 0; i < torsion_exps.size(); ++i) {
    if (torsion_exps[i] == 0) throw Error(ErrorCode::InvalidArgument, "torsion exponents must be positive");
    if (i > 0 && torsion_exps[i - 1] > torsion_exps[i])
      throw Error(ErrorCode::InvalidArgument, "torsion exponents must be non-decreasing");
  }
}

unsigned InvariantFactors::total_exponent() const noexcept {
  return std::accumulate(torsion_exps.begin(), torsion_exps.end(), 0u);
}

unsigned InvariantFactors::max_exponent() const noexcept {
  return torsion_exps.empty() ? 0 : torsion_exps.back();
}

InvariantFactors make_factors(std::vector<unsigned> torsion_exps, unsigned free_rank) {
  std::sort(torsion_exps.begin(), torsion_exps.end());
  InvariantFactors m{std::move(torsion_exps), free_rank};
  m.validate();
  return m;
}

std::uint64_t module_cardinality(const RingCtx& ctx, const InvariantFactors& m) {
  if (!m.is_finite()) throw Error(ErrorCode::InvalidArgument, "module has positive free rank");
  std::uint64_t n = 1;
  for (unsigned i = 0; i < m.total_exponent(); ++i) {
    if (n > (std::uint64_t{1} << 62) / ctx.q()) throw Error(ErrorCode::BudgetExceeded, "module too large");
    n *= ctx.q();
  }
  return n;
}

// ---------------------------------------------------------------------------
// Elements

void validate_elem(const RingCtx& ctx, const InvariantFactors& m, const ModElem& x) {
  if (x.torsion.size() != m.torsion_count() || x.free.size() != m.free_rank)
    throw Error(ErrorCode::ShapeMismatch, "element has the wrong number of coordinates");
  for (std::size_t i = 0; i < x.torsion.size(); ++i) {
    if (x.torsion[i].precision() != m.torsion_exps[i])
      throw Error(ErrorCode::ShapeMismatch, "torsion coordinate must have exactly e_i digits");
  }
  for (std::size_t i = 0; i < x.free.size(); ++i)
    if (x.free[i].precision() != x.free[0].precision())
      throw Error(ErrorCode::ShapeMismatch, "free coordinates must share one precision");
  auto check_digits = [&](const RElem& r) {
    for (Digit d : r.digits())
      if (d >= ctx.q()) throw Error(ErrorCode::DimensionMismatch, "digit out of range");
  };
  for (const auto& r : x.torsion) check_digits(r);
  for (const auto& r : x.free) check_digits(r);
}

ModElem elem_zero(const RingCtx& ctx, const InvariantFactors& m, unsigned free_precision) {
  ModElem x;
  for (unsigned e : m.torsion_exps) x.torsion.push_back(r_zero(ctx, e));
  for (unsigned j = 0; j < m.free_rank; ++j) x.free.push_back(r_zero(ctx, free_precision));
  return x;
}

ModElem elem_basis(const RingCtx& ctx, const InvariantFactors& m, std::size_t component,
                   unsigned free_precision) {
  if (component >= m.component_count()) throw Error(ErrorCode::ShapeMismatch, "component index out of range");
  ModElem x = elem_zero(ctx, m, free_precision);
  if (component < m.torsion_count())
    x.torsion[component] = r_one(ctx, m.torsion_exps[component]);
  else
    x.free[component - m.torsion_count()] = r_one(ctx, free_precision);
  return x;
}

ModElem elem_add(const RingCtx& ctx, const InvariantFactors& m, const ModElem& a, const ModElem& b) {
  validate_elem(ctx, m, a);
  validate_elem(ctx, m, b);
  ModElem out;
  for (std::size_t i = 0; i < a.torsion.size(); ++i) out.torsion.push_back(r_add(ctx, a.torsion[i], b.torsion[i]));
  for (std::size_t i = 0; i < a.free.size(); ++i) out.free.push_back(r_add(ctx, a.free[i], b.free[i]));
  return out;
}

ModElem elem_neg(const RingCtx& ctx, const InvariantFactors& m, const ModElem& a) {
  validate_elem(ctx, m, a);
  ModElem out;
  for (const auto& r : a.torsion) out.torsion.push_back(r_neg(ctx, r));
  for (const auto& r : a.free) out.free.push_back(r_neg(ctx, r));
  return out;
}

ModElem elem_sub(const RingCtx& ctx, const InvariantFactors& m, const ModElem& a, const ModElem& b) {
  return elem_add(ctx, m, a, elem_neg(ctx, m, b));
}

ModElem elem_scalar_mul(const RingCtx& ctx, const InvariantFactors& m, const RElem& r, const ModElem& x) {
  validate_elem(ctx, m, x);
  if (r.precision() < m.max_exponent())
    throw Error(ErrorCode::InsufficientPrecision, "scalar precision below the largest torsion exponent");
  ModElem out;
  for (std::size_t i = 0; i < x.torsion.size(); ++i)
    out.torsion.push_back(r_mul(ctx, r_truncate(r, m.torsion_exps[i]), x.torsion[i]));
  for (const auto& c : x.free) out.free.push_back(r_mul(ctx, r, c));
  return out;
}

bool elem_is_zero(const ModElem& x) {
  return std::all_of(x.torsion.begin(), x.torsion.end(), [](const RElem& r) { return r.is_zero_digits(); }) &&
         std::all_of(x.free.begin(), x.free.end(), [](const RElem& r) { return r.is_zero_digits(); });
}

std::vector<ModElem> all_elements(const RingCtx& ctx, const InvariantFactors& m) {
  const std::uint64_t count = module_cardinality(ctx, m);
  if (count > (std::uint64_t{1} << 24)) throw Error(ErrorCode::BudgetExceeded, "module too large to enumerate");
  std::vector<std::vector<Digit>> coords;
  for (unsigned e : m.torsion_exps) coords.emplace_back(e, 0);
  std::vector<ModElem> out;
  out.reserve(count);
  for (std::uint64_t n = 0; n < count; ++n) {
    ModElem x;
    for (const auto& c : coords) x.torsion.emplace_back(c);
    out.push_back(std::move(x));
    // Odometer: last coordinate's lowest digit moves fastest.
    for (std::size_t i = coords.size(); i-- > 0;) {
      bool carry = true;
      for (auto& d : coords[i]) {
        if (++d < ctx.q()) {
          carry = false;
          break;
        }
        d = 0;
      }
      if (!carry) break;
    }
  }
  return out;
}

RElem inf_map(const RingCtx& ctx, unsigned a, unsigned b, const RElem& r) {
  if (a > b) throw Error(ErrorCode::InvalidArgument, "inf requires a <= b");
  if (r.precision() != a) throw Error(ErrorCode::ShapeMismatch, "residue must have exactly a digits");
  (void)ctx;
  return r_shift_up(r, b - a);
}

RElem res_map(const RingCtx& ctx, unsigned b, unsigned a, const RElem& r) {
  if (a > b) throw Error(ErrorCode::InvalidArgument, "res requires a <= b");
  if (r.precision() != b) throw Error(ErrorCode::ShapeMismatch, "residue must have exactly b digits");
  (void)ctx;
  return r_truncate(r, a);
}

RElem residue_mul(const RingCtx& ctx, const RElem& a, unsigned a_exp, const RElem& b, unsigned b_exp) {
  if (a_exp >= b_exp) return r_mul(ctx, r_truncate(a, b_exp), b);
  const unsigned shift = b_exp - a_exp;
  return r_shift_up(r_mul(ctx, r_truncate(a, a_exp), r_shift_down(b, shift)), shift);
}

// ---------------------------------------------------------------------------
// Presentation matrices and Smith normal form

PresMatrix::PresMatrix(std::size_t rows, std::size_t cols, std::vector<RElem> entries)
    : rows_(rows), cols_(cols), precision_(0), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols) throw Error(ErrorCode::ShapeMismatch, "matrix is not rectangular");
  if (!entries_.empty()) {
    precision_ = entries_.front().precision();
    for (const auto& x : entries_)
      if (x.precision() != precision_) throw Error(ErrorCode::ShapeMismatch, "entries must share one precision");
  }
}

PresMatrix matrix_from_ints(const RingCtx& ctx, const std::vector<std::vector<long long>>& rows,
                            unsigned precision) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::vector<RElem> entries;
  for (const auto& row : rows) {
    if (row.size() != cols) throw Error(ErrorCode::ShapeMismatch, "matrix is not rectangular");
    for (long long v : row) entries.push_back(r_from_int(ctx, v, precision));
  }
  return PresMatrix(rows.size(), cols, std::move(entries));
}

namespace {

RElem scalar_at(const RElem& s, unsigned precision) { return r_lift(s, precision); }

}  // namespace

void apply_row_op(const RingCtx& ctx, PresMatrix& m, const ElementaryOp& op) {
  if (op.target >= m.rows() || op.source >= m.rows()) throw Error(ErrorCode::ShapeMismatch, "row index out of range");
  const unsigned n = m.precision();
  switch (op.kind) {
    case ElementaryOp::Kind::Swap:
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(op.target, c), m.at(op.source, c));
      break;
    case ElementaryOp::Kind::AddMultiple: {
      if (op.target == op.source) throw Error(ErrorCode::InvalidArgument, "AddMultiple needs distinct rows");
      const RElem s = scalar_at(op.scalar, n);
      for (std::size_t c = 0; c < m.cols(); ++c)
        m.at(op.target, c) = r_add(ctx, m.at(op.target, c), r_mul(ctx, s, m.at(op.source, c)));
      break;
    }
    case ElementaryOp::Kind::ScaleUnit: {
      if (op.scalar.digit(0) == 0) throw Error(ErrorCode::NonUnit, "row scaling needs a unit");
      const RElem s = scalar_at(op.scalar, n);
      for (std::size_t c = 0; c < m.cols(); ++c) m.at(op.target, c) = r_mul(ctx, s, m.at(op.target, c));
      break;
    }
  }
}

void apply_col_op(const RingCtx& ctx, PresMatrix& m, const ElementaryOp& op) {
  if (op.target >= m.cols() || op.source >= m.cols()) throw Error(ErrorCode::ShapeMismatch, "column index out of range");
  const unsigned n = m.precision();
  switch (op.kind) {
    case ElementaryOp::Kind::Swap:
      for (std::size_t r = 0; r < m.rows(); ++r) std::swap(m.at(r, op.target), m.at(r, op.source));
      break;
    case ElementaryOp::Kind::AddMultiple: {
      if (op.target == op.source) throw Error(ErrorCode::InvalidArgument, "AddMultiple needs distinct columns");
      const RElem s = scalar_at(op.scalar, n);
      for (std::size_t r = 0; r < m.rows(); ++r)
        m.at(r, op.target) = r_add(ctx, m.at(r, op.target), r_mul(ctx, s, m.at(r, op.source)));
      break;
    }
    case ElementaryOp::Kind::ScaleUnit: {
      if (op.scalar.digit(0) == 0) throw Error(ErrorCode::NonUnit, "column scaling needs a unit");
      const RElem s = scalar_at(op.scalar, n);
      for (std::size_t r = 0; r < m.rows(); ++r) m.at(r, op.target) = r_mul(ctx, s, m.at(r, op.target));
      break;
    }
  }
}

PresMatrix replay_ops(const RingCtx& ctx, PresMatrix m, const std::vector<ElementaryOp>& row_ops,
                      const std::vector<ElementaryOp>& col_ops) {
  for (const auto& op : row_ops) apply_row_op(ctx, m, op);
  for (const auto& op : col_ops) apply_col_op(ctx, m, op);
  return m;
}

SnfResult snf(const RingCtx& ctx, const PresMatrix& input, const SnfOptions& options) {
  using Kind = ElementaryOp::Kind;
  PresMatrix m = input;
  const std::size_t rows = m.rows(), cols = m.cols();
  const unsigned n = m.precision();
  SnfResult result;
  if (rows == 0 || cols == 0) {
    result.factors.free_rank = static_cast<unsigned>(cols);
    return result;
  }

  // Structural zeros: entries known to be exactly zero rather than merely
  // zero modulo pi^n.
  std::vector<char> exact_zero(rows * cols);
  for (std::size_t i = 0; i < rows * cols; ++i) exact_zero[i] = m.entries()[i].is_zero_digits();
  auto ez = [&](std::size_t r, std::size_t c) -> char& { return exact_zero[r * cols + c]; };

  const bool corrupted = options.pivot_rule == SnfOptions::PivotRule::CorruptedMaxValuation;

  auto row_op = [&](ElementaryOp op) {
    if (op.kind == Kind::Swap) {
      for (std::size_t c = 0; c < cols; ++c) std::swap(ez(op.target, c), ez(op.source, c));
    } else if (op.kind == Kind::AddMultiple) {
      for (std::size_t c = 0; c < cols; ++c) ez(op.target, c) = ez(op.target, c) && ez(op.source, c);
    }
    apply_row_op(ctx, m, op);
    result.row_ops.push_back(std::move(op));
  };
  auto col_op = [&](ElementaryOp op) {
    if (op.kind == Kind::Swap) {
      for (std::size_t r = 0; r < rows; ++r) std::swap(ez(r, op.target), ez(r, op.source));
    } else if (op.kind == Kind::AddMultiple) {
      for (std::size_t r = 0; r < rows; ++r) ez(r, op.target) = ez(r, op.target) && ez(r, op.source);
    }
    apply_col_op(ctx, m, op);
    result.col_ops.push_back(std::move(op));
  };
  // -(a / pi^v), lifted to full precision. Under the minimum-valuation rule
  // a is divisible by pi^v; the corrupted rule just drops the low digits.
  auto quotient = [&](const RElem& a, unsigned v) {
    std::vector<Digit> d(a.digits().begin() + v, a.digits().end());
    return r_lift(r_neg(ctx, RElem(std::move(d))), n);
  };

  const std::size_t steps = std::min(rows, cols);
  std::size_t s = 0;
  for (; s < steps; ++s) {
    std::size_t pr = rows, pc = cols;
    unsigned best = 0;
    for (std::size_t r = s; r < rows; ++r)
      for (std::size_t c = s; c < cols; ++c) {
        const Valuation v = r_valuation(ctx, m.at(r, c));
        if (!v.exact) continue;
        const bool better = pr == rows || (corrupted ? v.value >= best : v.value < best);
        if (better) {
          pr = r;
          pc = c;
          best = v.value;
        }
      }
    if (pr == rows) {
      if (options.zero_residual == SnfOptions::ZeroResidual::Reject) {
        for (std::size_t r = s; r < rows; ++r)
          for (std::size_t c = s; c < cols; ++c)
            if (!ez(r, c))
              throw Error(ErrorCode::PrecisionExhausted,
                          "residual block vanishes at precision " + std::to_string(n) +
                              " but is not known to be zero");
      }
      break;
    }
    if (pr != s) row_op({Kind::Swap, s, pr, r_zero(ctx, 1)});
    if (pc != s) col_op({Kind::Swap, s, pc, r_zero(ctx, 1)});

    const unsigned v = best;
    const RElem unit(std::vector<Digit>(m.at(s, s).digits().begin() + v, m.at(s, s).digits().end()));
    const RElem unit_inv = r_lift(r_unit_inverse(ctx, unit), n);
    if (!(unit_inv == r_one(ctx, n))) row_op({Kind::ScaleUnit, s, s, unit_inv});

    for (std::size_t r = s + 1; r < rows; ++r) {
      if (m.at(r, s).is_zero_digits()) continue;
      row_op({Kind::AddMultiple, r, s, quotient(m.at(r, s), v)});
      ez(r, s) = 1;
    }
    for (std::size_t c = s + 1; c < cols; ++c) {
      if (m.at(s, c).is_zero_digits()) continue;
      col_op({Kind::AddMultiple, c, s, quotient(m.at(s, c), v)});
      ez(s, c) = 1;
    }
    result.pivot_valuations.push_back(v);
  }

  std::vector<unsigned> exps;
  for (unsigned v : result.pivot_valuations)
    if (v > 0) exps.push_back(v);
  result.factors = make_factors(std::move(exps), static_cast<unsigned>(cols - result.pivot_valuations.size()));
  return result;
}

// ---------------------------------------------------------------------------
// Homomorphisms

void validate_hom(const RingCtx& ctx, const HomMatrix& h) {
  h.domain.validate();
  h.codomain.validate();
  const std::size_t nd = h.domain.component_count(), nc = h.codomain.component_count();
  if (h.entries.size() != nd * nc) throw Error(ErrorCode::ShapeMismatch, "hom matrix has the wrong size");
  for (std::size_t i = 0; i < nd; ++i) {
    const bool dom_torsion = i < h.domain.torsion_count();
    for (std::size_t j = 0; j < nc; ++j) {
      const RElem& x = h.at(i, j);
      for (Digit d : x.digits())
        if (d >= ctx.q()) throw Error(ErrorCode::DimensionMismatch, "digit out of range");
      const bool cod_torsion = j < h.codomain.torsion_count();
      if (cod_torsion) {
        const unsigned b = h.codomain.torsion_exps[j];
        if (x.precision() != b) throw Error(ErrorCode::ShapeMismatch, "entry into R/pi^b must have b digits");
        if (dom_torsion) {
          const unsigned a = h.domain.torsion_exps[i];
          for (unsigned k = 0; a < b && k < b - a; ++k)
            if (x.digit(k) != 0)
              throw Error(ErrorCode::InvalidArgument, "entry R/pi^a -> R/pi^b must be divisible by pi^(b-a)");
        }
      } else if (dom_torsion && !x.is_zero_digits()) {
        throw Error(ErrorCode::InvalidArgument, "torsion component cannot map nontrivially to a free one");
      }
    }
  }
}

HomMatrix hom_zero(const RingCtx& ctx, const InvariantFactors& domain, const InvariantFactors& codomain,
                   unsigned free_precision) {
  HomMatrix h{domain, codomain, {}};
  for (std::size_t i = 0; i < domain.component_count(); ++i)
    for (std::size_t j = 0; j < codomain.component_count(); ++j) {
      const unsigned prec = j < codomain.torsion_count() ? codomain.torsion_exps[j] : free_precision;
      h.entries.push_back(r_zero(ctx, prec));
    }
  return h;
}

HomMatrix hom_identity(const RingCtx& ctx, const InvariantFactors& m, unsigned free_precision) {
  HomMatrix h = hom_zero(ctx, m, m, free_precision);
  const std::size_t nc = m.component_count();
  for (std::size_t i = 0; i < nc; ++i) {
    const unsigned prec = i < m.torsion_count() ? m.torsion_exps[i] : free_precision;
    h.entries[i * nc + i] = r_one(ctx, prec);
  }
  return h;
}

ModElem apply_hom(const RingCtx& ctx, const HomMatrix& h, const ModElem& x) {
  validate_hom(ctx, h);
  validate_elem(ctx, h.domain, x);
  const auto& dom = h.domain;
  const auto& cod = h.codomain;
  ModElem out;
  for (std::size_t j = 0; j < cod.torsion_count(); ++j) {
    const unsigned b = cod.torsion_exps[j];
    RElem acc = r_zero(ctx, b);
    for (std::size_t i = 0; i < dom.torsion_count(); ++i)
      acc = r_add(ctx, acc, residue_mul(ctx, x.torsion[i], dom.torsion_exps[i], h.at(i, j), b));
    for (std::size_t i = 0; i < dom.free_rank; ++i) {
      const RElem& c = x.free[i];
      if (c.precision() < b)
        throw Error(ErrorCode::InsufficientPrecision, "free coordinate precision below the target exponent");
      acc = r_add(ctx, acc, r_mul(ctx, r_truncate(c, b), h.at(dom.torsion_count() + i, j)));
    }
    out.torsion.push_back(std::move(acc));
  }
  for (std::size_t j = 0; j < cod.free_rank; ++j) {
    const std::size_t col = cod.torsion_count() + j;
    unsigned prec = ctx.default_precision();
    if (dom.free_rank > 0) {
      prec = x.free[0].precision();
      for (std::size_t i = 0; i < dom.free_rank; ++i)
        prec = std::min(prec, h.at(dom.torsion_count() + i, col).precision());
    }
    RElem acc = r_zero(ctx, prec);
    for (std::size_t i = 0; i < dom.free_rank; ++i)
      acc = r_add(ctx, acc, r_mul(ctx, x.free[i], h.at(dom.torsion_count() + i, col)));
    out.free.push_back(std::move(acc));
  }
  // A hom into a module with free part keeps a shared free precision.
  if (!out.free.empty()) {
    unsigned prec = out.free[0].precision();
    for (const auto& r : out.free) prec = std::min(prec, r.precision());
    for (auto& r : out.free) r = r_truncate(r, prec);
  }
  return out;
}

HomSpace hom_space(const RingCtx& ctx, const InvariantFactors& m, const InvariantFactors& n,
                   unsigned free_precision) {
  m.validate();
  n.validate();
  HomSpace space;
  std::vector<unsigned> exps;
  unsigned free_rank = 0;
  const HomMatrix zero = hom_zero(ctx, m, n, free_precision);
  const std::size_t nc = n.component_count();
  for (std::size_t i = 0; i < m.component_count(); ++i) {
    const bool dom_torsion = i < m.torsion_count();
    for (std::size_t j = 0; j < nc; ++j) {
      const bool cod_torsion = j < n.torsion_count();
      HomMatrix g = zero;
      if (cod_torsion) {
        const unsigned b = n.torsion_exps[j];
        unsigned shift = 0;
        if (dom_torsion) {
          const unsigned a = m.torsion_exps[i];
          exps.push_back(std::min(a, b));
          shift = a < b ? b - a : 0;
        } else {
          exps.push_back(b);
        }
        std::vector<Digit> d(b, 0);
        d[shift] = 1;
        g.entries[i * nc + j] = RElem(std::move(d));
      } else if (!dom_torsion) {
        ++free_rank;
        g.entries[i * nc + j] = r_one(ctx, free_precision);
      } else {
        continue;  // Hom(R/pi^a, R) = 0
      }
      space.generators.push_back(std::move(g));
    }
  }
  space.structure = make_factors(std::move(exps), free_rank);
  return space;
}

std::vector<HomMatrix> all_homs(const RingCtx& ctx, const InvariantFactors& m, const InvariantFactors& n) {
  if (!m.is_finite() || !n.is_finite()) throw Error(ErrorCode::InvalidArgument, "all_homs needs finite modules");
  const std::size_t k = m.torsion_count(), l = n.torsion_count();
  // Entry (i, j) is pi^shift * c with c ranging over residues mod pi^free_digits.
  std::vector<unsigned> shift(k * l), width(k * l);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < l; ++j) {
      const unsigned a = m.torsion_exps[i], b = n.torsion_exps[j];
      shift[i * l + j] = a < b ? b - a : 0;
      width[i * l + j] = std::min(a, b);
      for (unsigned t = 0; t < width[i * l + j]; ++t) {
        total *= ctx.q();
        if (total > (std::uint64_t{1} << 24)) throw Error(ErrorCode::BudgetExceeded, "hom space too large");
      }
    }
  std::vector<std::vector<Digit>> free_digits(k * l);
  for (std::size_t t = 0; t < k * l; ++t) free_digits[t].assign(width[t], 0);
  std::vector<HomMatrix> out;
  out.reserve(total);
  for (std::uint64_t c = 0; c < total; ++c) {
    HomMatrix h{m, n, {}};
    for (std::size_t t = 0; t < k * l; ++t) {
      std::vector<Digit> d(n.torsion_exps[t % l], 0);
      for (unsigned u = 0; u < width[t]; ++u) d[shift[t] + u] = free_digits[t][u];
      h.entries.emplace_back(std::move(d));
    }
    out.push_back(std::move(h));
    for (std::size_t t = k * l; t-- > 0;) {
      bool carry = true;
      for (auto& d : free_digits[t]) {
        if (++d < ctx.q()) {
          carry = false;
          break;
        }
        d = 0;
      }
      if (!carry) break;
    }
  }
  return out;
}

}  // namespace dvrdual
