#include "dvrdual/oracle.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace dvrdual::oracle {

namespace {

std::uint64_t checked_pow(std::uint64_t base, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (r > (std::uint64_t{1} << 62) / base) throw Error(ErrorCode::BudgetExceeded, "residue ring too large");
    r *= base;
  }
  return r;
}

}  // namespace

Oracle::Oracle(const RingCtx& ctx, EnumBudget budget)
    : mixed_(ctx.mode() == Mode::MixedChar),
      p_(ctx.p()),
      e_(ctx.e()),
      q_(ctx.q()),
      modulus_(ctx.modulus()),
      budget_(budget) {
  if (budget_.max_elements == 0) throw Error(ErrorCode::InvalidArgument, "max_elements must be positive");
  if (!mixed_ && q_ <= 256) {
    std::vector<std::uint32_t> table(q_ * q_);
    for (std::uint32_t a = 0; a < q_; ++a)
      for (std::uint32_t b = 0; b < q_; ++b) table[a * q_ + b] = fq_mul(a, b);
    fq_table_ = std::move(table);
  }
}

std::uint32_t Oracle::fq_add(std::uint32_t a, std::uint32_t b) const {
  std::uint32_t r = 0, place = 1;
  for (unsigned j = 0; j < e_; ++j) {
    r += ((a % p_ + b % p_) % p_) * place;
    a /= p_;
    b /= p_;
    place *= p_;
  }
  return r;
}

std::uint32_t Oracle::fq_mul(std::uint32_t a, std::uint32_t b) const {
  if (!fq_table_.empty()) return fq_table_[a * q_ + b];
  std::vector<std::uint64_t> x(e_), y(e_), prod(2 * e_ - 1, 0);
  for (unsigned j = 0; j < e_; ++j) {
    x[j] = a % p_;
    y[j] = b % p_;
    a /= p_;
    b /= p_;
  }
  for (unsigned i = 0; i < e_; ++i)
    for (unsigned j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p_;
  // Long division by the monic modulus, top degree first.
  for (unsigned d = 2 * e_ - 1; d-- > e_;) {
    const std::uint64_t c = prod[d];
    if (c == 0) continue;
    for (unsigned j = 0; j <= e_; ++j) {
      const unsigned idx = d - e_ + j;
      prod[idx] = (prod[idx] + (p_ - c) * modulus_[j]) % p_;
    }
  }
  std::uint32_t r = 0, place = 1;
  for (unsigned j = 0; j < e_; ++j) {
    r += static_cast<std::uint32_t>(prod[j]) * place;
    place *= p_;
  }
  return r;
}

std::uint64_t Oracle::size(unsigned k) const { return checked_pow(q_, k); }

std::uint64_t Oracle::add(std::uint64_t a, std::uint64_t b, unsigned k) const {
  const std::uint64_t mod = size(k);
  if (mixed_) return (a + b) % mod;
  std::uint64_t r = 0, place = 1;
  for (unsigned i = 0; i < k; ++i) {
    r += fq_add(static_cast<std::uint32_t>(a % q_), static_cast<std::uint32_t>(b % q_)) * place;
    a /= q_;
    b /= q_;
    place *= q_;
  }
  return r;
}

std::uint64_t Oracle::neg(std::uint64_t a, unsigned k) const {
  const std::uint64_t mod = size(k);
  if (mixed_) return (mod - a % mod) % mod;
  std::uint64_t r = 0, place = 1;
  for (unsigned i = 0; i < k; ++i) {
    std::uint32_t d = static_cast<std::uint32_t>(a % q_), out = 0, pp = 1;
    for (unsigned j = 0; j < e_; ++j) {
      out += ((p_ - d % p_) % p_) * pp;
      d /= p_;
      pp *= p_;
    }
    r += out * place;
    a /= q_;
    place *= q_;
  }
  return r;
}

std::uint64_t Oracle::mul(std::uint64_t a, std::uint64_t b, unsigned k) const {
  const std::uint64_t mod = size(k);
  if (mixed_) return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a % mod) * (b % mod) % mod);
  std::vector<std::uint32_t> x(k), y(k), z(k, 0);
  for (unsigned i = 0; i < k; ++i) {
    x[i] = static_cast<std::uint32_t>(a % q_);
    y[i] = static_cast<std::uint32_t>(b % q_);
    a /= q_;
    b /= q_;
  }
  for (unsigned i = 0; i < k; ++i) {
    if (x[i] == 0) continue;
    for (unsigned j = 0; i + j < k; ++j) z[i + j] = fq_add(z[i + j], fq_mul(x[i], y[j]));
  }
  std::uint64_t r = 0, place = 1;
  for (unsigned i = 0; i < k; ++i) {
    r += z[i] * place;
    place *= q_;
  }
  return r;
}

std::uint64_t Oracle::pi_pow(unsigned j, unsigned k) const { return j >= k ? 0 : size(j); }

std::vector<std::uint64_t> Oracle::additive_generators(unsigned k) const {
  if (mixed_) return {k == 0 ? 0u : 1u};
  std::vector<std::uint64_t> gens;
  for (unsigned i = 0; i < k; ++i)
    for (unsigned j = 0; j < e_; ++j) gens.push_back(checked_pow(p_, j) * size(i));
  return gens;
}

std::uint64_t Oracle::code_of(const RElem& a, unsigned k) const {
  if (a.precision() < k) throw Error(ErrorCode::InsufficientPrecision, "element known below the requested exponent");
  std::uint64_t r = 0, place = 1;
  for (unsigned i = 0; i < k; ++i) {
    r += a.digit(i) * place;
    place *= q_;
  }
  return r;
}

RElem Oracle::relem_of(std::uint64_t code, unsigned k) const {
  std::vector<Digit> d(k);
  for (unsigned i = 0; i < k; ++i) {
    d[i] = static_cast<Digit>(code % q_);
    code /= q_;
  }
  return RElem(std::move(d));
}

Coords Oracle::coords_of(const InvariantFactors& m, const ModElem& x) const {
  Coords c;
  for (std::size_t i = 0; i < m.torsion_count(); ++i) c.push_back(code_of(x.torsion.at(i), m.torsion_exps[i]));
  return c;
}

ModElem Oracle::elem_of(const InvariantFactors& m, const Coords& c) const {
  ModElem x;
  for (std::size_t i = 0; i < m.torsion_count(); ++i) x.torsion.push_back(relem_of(c.at(i), m.torsion_exps[i]));
  return x;
}

Coords Oracle::m_add(const InvariantFactors& m, const Coords& a, const Coords& b) const {
  Coords c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = add(a[i], b[i], m.torsion_exps[i]);
  return c;
}

Coords Oracle::m_scale(const InvariantFactors& m, std::uint64_t r, const Coords& a) const {
  Coords c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const unsigned e = m.torsion_exps[i];
    c[i] = mul(r % size(e), a[i], e);
  }
  return c;
}

namespace {

// Mixed-radix index of a coordinate tuple, first coordinate most significant.
struct Indexer {
  std::vector<std::uint64_t> radix;

  std::uint64_t total() const {
    std::uint64_t t = 1;
    for (auto r : radix) t *= r;
    return t;
  }
  std::uint64_t index(const Coords& c) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < radix.size(); ++i) idx = idx * radix[i] + c[i];
    return idx;
  }
  Coords coords(std::uint64_t idx) const {
    Coords c(radix.size());
    for (std::size_t i = radix.size(); i-- > 0;) {
      c[i] = idx % radix[i];
      idx /= radix[i];
    }
    return c;
  }
};

}  // namespace

std::vector<Coords> Oracle::enum_elements(const InvariantFactors& m) const {
  if (!m.is_finite()) throw Error(ErrorCode::InvalidArgument, "enumeration needs a finite module");
  Indexer ix;
  std::uint64_t total = 1;
  for (unsigned e : m.torsion_exps) {
    ix.radix.push_back(size(e));
    if (total > budget_.max_elements / ix.radix.back())
      throw Error(ErrorCode::BudgetExceeded, "module exceeds the element budget");
    total *= ix.radix.back();
  }
  std::vector<Coords> out;
  out.reserve(total);
  for (std::uint64_t i = 0; i < total; ++i) out.push_back(ix.coords(i));
  return out;
}

std::vector<RHom> Oracle::enum_r_homs(const InvariantFactors& m, unsigned level) const {
  if (!m.is_finite()) throw Error(ErrorCode::InvalidArgument, "enumeration needs a finite module");
  if (level < m.max_exponent()) throw Error(ErrorCode::InvalidArgument, "level below the module exponent");
  const std::uint64_t mod = size(level);
  std::vector<std::vector<std::uint64_t>> choices;
  std::uint64_t total = 1;
  for (unsigned e : m.torsion_exps) {
    std::vector<std::uint64_t> ok;
    const std::uint64_t pe = pi_pow(e, level);
    for (std::uint64_t a = 0; a < mod; ++a)
      if (mul(pe, a, level) == 0) ok.push_back(a);
    if (total > budget_.max_elements / ok.size()) throw Error(ErrorCode::BudgetExceeded, "hom set exceeds the budget");
    total *= ok.size();
    choices.push_back(std::move(ok));
  }
  std::vector<RHom> out;
  out.reserve(total);
  std::vector<std::size_t> pos(choices.size(), 0);
  for (std::uint64_t n = 0; n < total; ++n) {
    RHom h{level, {}};
    for (std::size_t i = 0; i < choices.size(); ++i) h.images.push_back(choices[i][pos[i]]);
    out.push_back(std::move(h));
    for (std::size_t i = choices.size(); i-- > 0;) {
      if (++pos[i] < choices[i].size()) break;
      pos[i] = 0;
    }
  }
  return out;
}

std::uint64_t Oracle::eval(const InvariantFactors& m, const RHom& phi, const Coords& x) const {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < m.torsion_count(); ++i) v = add(v, mul(x.at(i), phi.images.at(i), phi.level), phi.level);
  return v;
}

std::vector<ZHom> Oracle::enum_z_homs(const InvariantFactors& m) const {
  if (mixed_) throw Error(ErrorCode::WrongMode, "additive duals are enumerated in equal characteristic only");
  if (!m.is_finite()) throw Error(ErrorCode::InvalidArgument, "enumeration needs a finite module");
  const unsigned dim = e_ * m.total_exponent();
  std::uint64_t total = 1;
  for (unsigned i = 0; i < dim; ++i) {
    if (total > budget_.max_elements / p_) throw Error(ErrorCode::BudgetExceeded, "hom set exceeds the budget");
    total *= p_;
  }
  std::vector<ZHom> out;
  out.reserve(total);
  std::vector<std::uint32_t> v(dim, 0);
  for (std::uint64_t n = 0; n < total; ++n) {
    out.push_back(ZHom{v});
    for (std::size_t i = dim; i-- > 0;) {
      if (++v[i] < p_) break;
      v[i] = 0;
    }
  }
  return out;
}

std::uint32_t Oracle::eval(const InvariantFactors& m, const ZHom& phi, const Coords& x) const {
  std::uint64_t acc = 0;
  std::size_t b = 0;
  for (std::size_t i = 0; i < m.torsion_count(); ++i) {
    std::uint64_t code = x.at(i);
    for (unsigned k = 0; k < m.torsion_exps[i]; ++k) {
      std::uint64_t d = code % q_;
      code /= q_;
      for (unsigned j = 0; j < e_; ++j, ++b) {
        acc += (d % p_) * phi.basis_values.at(b);
        d /= p_;
      }
    }
  }
  return static_cast<std::uint32_t>(acc % p_);
}

std::vector<Coords> Oracle::span(const InvariantFactors& m, const std::vector<Coords>& gens) const {
  Indexer ix;
  for (unsigned e : m.torsion_exps) ix.radix.push_back(size(e));
  const std::uint64_t total = ix.total();
  if (total > budget_.max_work) throw Error(ErrorCode::BudgetExceeded, "module exceeds the work budget");
  std::vector<Coords> steps;
  for (const auto& g : gens)
    for (std::uint64_t a : additive_generators(m.max_exponent())) steps.push_back(m_scale(m, a, g));
  std::vector<char> seen(total, 0);
  std::deque<std::uint64_t> queue{0};
  seen[0] = 1;
  while (!queue.empty()) {
    const Coords x = ix.coords(queue.front());
    queue.pop_front();
    for (const auto& s : steps) {
      const std::uint64_t y = ix.index(m_add(m, x, s));
      if (!seen[y]) {
        seen[y] = 1;
        queue.push_back(y);
      }
    }
  }
  std::vector<Coords> out;
  for (std::uint64_t i = 0; i < total; ++i)
    if (seen[i]) out.push_back(ix.coords(i));
  return out;
}

std::vector<std::vector<std::uint64_t>> Oracle::enum_submodule_homs(const InvariantFactors& m,
                                                                    const std::vector<Coords>& gens,
                                                                    unsigned level) const {
  if (level < m.max_exponent()) throw Error(ErrorCode::InvalidArgument, "level below the module exponent");
  Indexer ix;
  for (unsigned e : m.torsion_exps) ix.radix.push_back(size(e));
  const std::uint64_t total = ix.total();
  if (total > budget_.max_work) throw Error(ErrorCode::BudgetExceeded, "module exceeds the work budget");
  const std::uint64_t mod = size(level);
  const auto addgens = additive_generators(level);

  // Coefficients (over pi^level) expressing each element of the current span
  // in terms of the generators processed so far.
  std::vector<std::vector<std::uint64_t>> coeff(total);
  std::vector<char> seen(total, 0);
  seen[0] = 1;
  std::vector<std::uint64_t> members{0};

  std::vector<std::vector<std::uint64_t>> partial{{}};
  for (std::size_t j = 0; j < gens.size(); ++j) {
    for (std::uint64_t idx : members) coeff[idx].resize(j, 0);
    const Coords& g = gens[j];

    // Smallest k with pi^k g already in the span.
    unsigned k = 0;
    Coords pkg = g;
    while (!seen[ix.index(pkg)]) {
      ++k;
      pkg = m_scale(m, q_, pkg);
    }
    const auto& c = coeff[ix.index(pkg)];

    std::vector<std::vector<std::uint64_t>> by_target(mod);
    const std::uint64_t pk = pi_pow(k, level);
    for (std::uint64_t v = 0; v < mod; ++v) by_target[mul(pk, v, level)].push_back(v);

    std::vector<std::vector<std::uint64_t>> next;
    for (const auto& vals : partial) {
      std::uint64_t target = 0;
      for (std::size_t i = 0; i < j; ++i) target = add(target, mul(c.at(i), vals[i], level), level);
      for (std::uint64_t v : by_target[target]) {
        if (next.size() >= budget_.max_elements) throw Error(ErrorCode::BudgetExceeded, "hom set exceeds the budget");
        auto ext = vals;
        ext.push_back(v);
        next.push_back(std::move(ext));
      }
    }
    partial = std::move(next);

    // Grow the span by the new generator, recording coefficients.
    std::deque<std::uint64_t> queue(members.begin(), members.end());
    for (std::uint64_t idx : members) coeff[idx].push_back(0);
    std::vector<std::pair<Coords, std::uint64_t>> steps;
    for (std::uint64_t a : addgens) steps.emplace_back(m_scale(m, a, g), a);
    while (!queue.empty()) {
      const std::uint64_t xi = queue.front();
      queue.pop_front();
      const Coords x = ix.coords(xi);
      for (const auto& [s, a] : steps) {
        const std::uint64_t y = ix.index(m_add(m, x, s));
        if (seen[y]) continue;
        seen[y] = 1;
        coeff[y] = coeff[xi];
        coeff[y][j] = add(coeff[y][j], a, level);
        members.push_back(y);
        queue.push_back(y);
      }
    }
  }
  return partial;
}

CokernelCount Oracle::cokernel_bruteforce(const PresMatrix& a) const {
  const std::size_t n = a.cols();
  std::uint64_t prev_count = 0;
  for (unsigned E = 1; E <= a.precision(); ++E) {
    Indexer ix;
    ix.radix.assign(n, size(E));
    std::uint64_t total = 1;
    for (std::size_t c = 0; c < n; ++c) {
      if (total > budget_.max_work / ix.radix[c])
        throw Error(ErrorCode::BudgetExceeded, "ambient group exceeds the work budget");
      total *= ix.radix[c];
    }
    const std::uint64_t mod = size(E);
    auto vadd = [&](const Coords& x, const Coords& y) {
      Coords z(n);
      for (std::size_t c = 0; c < n; ++c) z[c] = add(x[c], y[c], E);
      return z;
    };

    std::vector<Coords> steps;
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (std::uint64_t s : additive_generators(E)) {
        Coords row(n);
        for (std::size_t c = 0; c < n; ++c) row[c] = mul(s, code_of(a.at(r, c), E), E);
        steps.push_back(std::move(row));
      }

    std::vector<char> in_h(total, 0);
    in_h[0] = 1;
    std::uint64_t h_size = 1;
    std::deque<std::uint64_t> queue{0};
    while (!queue.empty()) {
      const Coords x = ix.coords(queue.front());
      queue.pop_front();
      for (const auto& s : steps) {
        const std::uint64_t y = ix.index(vadd(x, s));
        if (!in_h[y]) {
          in_h[y] = 1;
          ++h_size;
          queue.push_back(y);
        }
      }
    }
    const std::uint64_t count = total / h_size;
    if (E > 1 && count == prev_count) {
      // Stable: coker / pi^E = coker. #C[pi^k] = #{g : pi^k g in H} / |H|.
      CokernelCount out{count, {}, E};
      std::vector<std::uint64_t> killed(E + 1, 0);
      for (std::uint64_t gi = 0; gi < total; ++gi) {
        const Coords g = ix.coords(gi);
        for (unsigned k = 0; k <= E; ++k) {
          Coords pg(n);
          const std::uint64_t shift = pi_pow(k, E);
          for (std::size_t c = 0; c < n; ++c) pg[c] = static_cast<std::uint64_t>(
              static_cast<unsigned __int128>(g[c]) * shift % mod);
          if (in_h[ix.index(pg)]) {
            for (unsigned kk = k; kk <= E; ++kk) ++killed[kk];
            break;
          }
        }
      }
      std::uint64_t below = 0;
      for (unsigned k = 0; k <= E; ++k) {
        const std::uint64_t at_most = killed[k] / h_size;
        out.by_order.push_back(at_most - below);
        below = at_most;
      }
      while (out.by_order.size() > 1 && out.by_order.back() == 0) out.by_order.pop_back();
      return out;
    }
    prev_count = count;
  }
  throw Error(ErrorCode::InfiniteCokernel, "cokernel does not stabilise below the matrix precision");
}

}  // namespace dvrdual::oracle
