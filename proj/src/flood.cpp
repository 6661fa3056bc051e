#include "dvrdual/flood.hpp"

#include <algorithm>

namespace dvrdual {

namespace {

std::uint64_t power(std::uint64_t base, unsigned k) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (r > (std::uint64_t{1} << 62) / base) throw Error(ErrorCode::InvalidArgument, "p^k overflows 64 bits");
    r *= base;
  }
  return r;
}

void require_equal_char(const RingCtx& ctx, const char* what) {
  if (ctx.mode() != Mode::EqualChar)
    throw Error(ErrorCode::WrongMode, std::string(what) + " is defined only in equal characteristic");
}

// Coefficient of t^{e-1} in a packed F_q digit.
std::uint32_t top_coefficient(const RingCtx& ctx, Digit d) { return ctx.unpack(d).coeffs.back(); }

Digit basis_digit(const RingCtx& ctx, unsigned j) { return static_cast<Digit>(power(ctx.p(), j)); }

void trim(std::vector<Digit>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

}  // namespace

CircleElem circle_from(std::uint32_t p, std::uint64_t numerator, unsigned k) {
  numerator %= power(p, k);
  while (k > 0 && numerator % p == 0) {
    numerator /= p;
    --k;
  }
  if (numerator == 0) k = 0;
  return CircleElem{k, numerator};
}

CircleElem circle_add(std::uint32_t p, const CircleElem& a, const CircleElem& b) {
  const unsigned k = std::max(a.k, b.k);
  const std::uint64_t mod = power(p, k);
  const std::uint64_t x = a.numerator * power(p, k - a.k) % mod;
  const std::uint64_t y = b.numerator * power(p, k - b.k) % mod;
  return circle_from(p, (x + y) % (mod ? mod : 1), k);
}

CircleElem circle_scale(std::uint32_t p, std::uint64_t n, const CircleElem& a) {
  const std::uint64_t mod = power(p, a.k);
  const unsigned __int128 prod = static_cast<unsigned __int128>(n % mod) * a.numerator;
  return circle_from(p, static_cast<std::uint64_t>(prod % mod), a.k);
}

std::vector<CircleElem> i_inv(const RingCtx& ctx, const FqElem& c) {
  const Digit cd = ctx.pack(c);
  std::vector<CircleElem> out;
  for (unsigned j = 0; j < ctx.e(); ++j)
    out.push_back(circle_from(ctx.p(), top_coefficient(ctx, ctx.dmul(cd, basis_digit(ctx, j))), 1));
  return out;
}

FqElem i_iso(const RingCtx& ctx, const std::vector<CircleElem>& psi_values) {
  const unsigned e = ctx.e();
  const std::uint32_t p = ctx.p();
  if (psi_values.size() != e) throw Error(ErrorCode::DimensionMismatch, "need one value per basis element");
  // Augmented system A c = v over F_p with A[j][m] = psi_0(t^m t^j).
  std::vector<std::vector<std::uint64_t>> a(e, std::vector<std::uint64_t>(e + 1, 0));
  for (unsigned j = 0; j < e; ++j) {
    const CircleElem& v = psi_values[j];
    if (v.k > 1) throw Error(ErrorCode::InvalidArgument, "value lies outside (1/p)Z/Z");
    for (unsigned m = 0; m < e; ++m)
      a[j][m] = top_coefficient(ctx, ctx.dmul(basis_digit(ctx, m), basis_digit(ctx, j)));
    a[j][e] = v.k == 1 ? v.numerator % p : 0;
  }
  auto inv = [&](std::uint64_t x) {
    std::uint64_t r = 1, b = x % p;
    for (std::uint32_t k = p - 2; k; k >>= 1) {
      if (k & 1) r = r * b % p;
      b = b * b % p;
    }
    return r;
  };
  for (unsigned col = 0; col < e; ++col) {
    unsigned piv = col;
    while (piv < e && a[piv][col] == 0) ++piv;
    if (piv == e) throw Error(ErrorCode::InvalidArgument, "trace pairing is degenerate");  // cannot happen
    std::swap(a[piv], a[col]);
    const std::uint64_t s = inv(a[col][col]);
    for (auto& x : a[col]) x = x * s % p;
    for (unsigned r = 0; r < e; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const std::uint64_t f = a[r][col];
      for (unsigned m = 0; m <= e; ++m) a[r][m] = (a[r][m] + (p - f) * a[col][m]) % p;
    }
  }
  FqElem c;
  for (unsigned m = 0; m < e; ++m) c.coeffs.push_back(static_cast<std::uint32_t>(a[m][e]));
  return c;
}

ZDualFunctional make_functional(const RingCtx& ctx, std::vector<Digit> coeffs) {
  for (Digit d : coeffs)
    if (d >= ctx.q()) throw Error(ErrorCode::DimensionMismatch, "coefficient out of range for F_q");
  trim(coeffs);
  return ZDualFunctional{std::move(coeffs)};
}

RawZFunctional to_raw(const RingCtx& ctx, const ZDualFunctional& phi) {
  RawZFunctional raw;
  for (Digit c : phi.coeffs) raw.values.push_back(i_inv(ctx, ctx.unpack(c)));
  return raw;
}

ZDualFunctional from_raw(const RingCtx& ctx, const RawZFunctional& raw) {
  std::vector<Digit> coeffs;
  for (const auto& row : raw.values) coeffs.push_back(ctx.pack(i_iso(ctx, row)));
  return make_functional(ctx, std::move(coeffs));
}

CircleElem raw_eval(const RingCtx& ctx, const RawZFunctional& raw, const RElem& a) {
  if (a.precision() < raw.values.size())
    throw Error(ErrorCode::InsufficientPrecision, "argument known below the support of the functional");
  CircleElem acc;
  for (std::size_t n = 0; n < raw.values.size(); ++n) {
    const FqElem an = ctx.unpack(a.digit(n));
    for (unsigned j = 0; j < ctx.e(); ++j) acc = circle_add(ctx.p(), acc, circle_scale(ctx.p(), an.coeffs[j], raw.values[n][j]));
  }
  return acc;
}

ZDualFunctional functional_scalar_mul(const RingCtx& ctx, const RElem& r, const ZDualFunctional& phi) {
  const std::size_t s = phi.support_bound();
  if (s > 0 && r.precision() < s)
    throw Error(ErrorCode::InsufficientPrecision, "scalar known below the support of the functional");
  std::vector<Digit> out(s, 0);
  for (std::size_t n = 0; n < s; ++n)
    for (std::size_t m = 0; n + m < s; ++m) out[n] = ctx.dadd(out[n], ctx.dmul(r.digit(m), phi.coeffs[n + m]));
  return make_functional(ctx, std::move(out));
}

RawZFunctional raw_scalar_mul(const RingCtx& ctx, const RElem& r, const RawZFunctional& raw) {
  const std::size_t s = raw.values.size();
  if (s > 0 && r.precision() < s)
    throw Error(ErrorCode::InsufficientPrecision, "scalar known below the support of the functional");
  RawZFunctional out;
  out.values.assign(s, std::vector<CircleElem>(ctx.e()));
  for (std::size_t n = 0; n < s; ++n)
    for (unsigned j = 0; j < ctx.e(); ++j) {
      // phi(r t^j x^n) = sum_m phi((r_m t^j) x^{n+m}), with r_m t^j expanded over F_p.
      CircleElem acc;
      for (std::size_t m = 0; n + m < s; ++m) {
        const FqElem prod = ctx.unpack(ctx.dmul(r.digit(m), basis_digit(ctx, j)));
        for (unsigned jj = 0; jj < ctx.e(); ++jj)
          acc = circle_add(ctx.p(), acc, circle_scale(ctx.p(), prod.coeffs[jj], raw.values[n + m][jj]));
      }
      out.values[n][j] = acc;
    }
  while (!out.values.empty() &&
         std::all_of(out.values.back().begin(), out.values.back().end(), [](const CircleElem& c) { return c.k == 0; }))
    out.values.pop_back();
  return out;
}

TElem ell(const RingCtx& ctx, const ZDualFunctional& phi) {
  require_equal_char(ctx, "ell");
  std::vector<Digit> c = phi.coeffs;
  trim(c);
  if (c.empty()) return TElem{};
  // sum_n c_n x^{-(n+1)} = (sum_n c_n x^{m-n}) / x^{m+1}
  std::reverse(c.begin(), c.end());
  return t_canonicalize(std::move(c));
}

ZDualFunctional ell_inv(const RingCtx& ctx, const TElem& t) {
  require_equal_char(ctx, "ell_inv");
  std::vector<Digit> c = t.numerator();
  std::reverse(c.begin(), c.end());
  return make_functional(ctx, std::move(c));
}

CircleElem transport_value(const RingCtx& ctx, const InvariantFactors& m, const DualElem& psi, const ModElem& x) {
  require_equal_char(ctx, "adjoint transport");
  const TElem value = eval_pairing(ctx, dual_structure(m), psi, x);
  const ZDualFunctional z = ell_inv(ctx, value);
  const Digit c0 = z.coeffs.empty() ? 0 : z.coeffs.front();
  return i_inv(ctx, ctx.unpack(c0)).front();
}

ZFunctionalTable adjoint_transport(const RingCtx& ctx, const InvariantFactors& m, const DualElem& psi) {
  require_equal_char(ctx, "adjoint transport");
  if (!m.is_finite()) throw Error(ErrorCode::InvalidArgument, "adjoint transport tables need a finite module");
  ZFunctionalTable table;
  table.elements = all_elements(ctx, m);
  for (const auto& x : table.elements) table.values.push_back(transport_value(ctx, m, psi, x));
  return table;
}

TorsionCount torsion_count(const RingCtx& ctx, unsigned n) {
  if (ctx.mode() != Mode::MixedChar)
    throw Error(ErrorCode::WrongMode, "the torsion count is stated for mixed characteristic");
  const std::uint64_t expected = power(ctx.p(), n);
  if (expected > (std::uint64_t{1} << 24)) throw Error(ErrorCode::BudgetExceeded, "p^n too large to enumerate");
  const auto elems = t_enumerate_torsion(ctx, n);
  return TorsionCount{elems.size(), expected};
}

// ---------------------------------------------------------------------------
// Z[delta]

namespace {

long long ck_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::InvalidArgument, "Z[delta] arithmetic overflow");
  return r;
}

long long ck_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::InvalidArgument, "Z[delta] arithmetic overflow");
  return r;
}

}  // namespace

std::variant<ZDeltaRing, ZDeltaRejection> zdelta_validate(long long a, long long b) {
  if (a >= 0) return ZDeltaRejection{"a = " + std::to_string(a) + " is not negative"};
  const __int128 disc = static_cast<__int128>(b) * b + static_cast<__int128>(4) * a;
  if (disc == 0) return ZDeltaRejection{"b^2 + 4a = 0: boundary case, delta is real"};
  if (disc > 0) return ZDeltaRejection{"b^2 + 4a > 0: |b| >= 2 sqrt(-a), delta is real"};
  if (b > (1LL << 31) || b < -(1LL << 31) || a < -(1LL << 60))
    return ZDeltaRejection{"parameters exceed the supported 64-bit range"};
  return ZDeltaRing(a, b);
}

ZDeltaElem ZDeltaRing::add(const ZDeltaElem& u, const ZDeltaElem& v) const {
  return {ck_add(u.x, v.x), ck_add(u.y, v.y)};
}

ZDeltaElem ZDeltaRing::neg(const ZDeltaElem& u) const { return {ck_mul(u.x, -1), ck_mul(u.y, -1)}; }

ZDeltaElem ZDeltaRing::mul(const ZDeltaElem& u, const ZDeltaElem& v) const {
  // (x + y d)(s + t d) = xs + (xt + ys) d + yt d^2,  d^2 = b d + a
  const long long yt = ck_mul(u.y, v.y);
  return {ck_add(ck_mul(u.x, v.x), ck_mul(yt, a_)),
          ck_add(ck_add(ck_mul(u.x, v.y), ck_mul(u.y, v.x)), ck_mul(yt, b_))};
}

long long ZDeltaRing::norm(const ZDeltaElem& u) const {
  return ck_add(ck_add(ck_mul(u.x, u.x), ck_mul(ck_mul(b_, u.x), u.y)), ck_mul(ck_mul(-a_, u.y), u.y));
}

}  // namespace dvrdual
