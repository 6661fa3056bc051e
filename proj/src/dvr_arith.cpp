#include "dvrdual/dvr_arith.hpp"

#include <algorithm>
#include <limits>

namespace dvrdual {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonUnit: return "NonUnit";
    case ErrorCode::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NotTorsion: return "NotTorsion";
    case ErrorCode::Inconsistent: return "Inconsistent";
    case ErrorCode::WrongMode: return "WrongMode";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::InfiniteCokernel: return "InfiniteCokernel";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

namespace {

constexpr std::uint32_t kMaxQ = 1u << 16;
constexpr std::uint32_t kTableQ = 256;

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint32_t inv_mod_p(std::uint32_t a, std::uint32_t p) {
  // a^(p-2) mod p
  std::uint64_t result = 1, base = a % p;
  for (std::uint32_t k = p - 2; k; k >>= 1) {
    if (k & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

// Remainder of `a` modulo the monic polynomial `m` over F_p. Coefficients low first.
std::vector<std::uint32_t> poly_rem(std::vector<std::uint32_t> a, const std::vector<std::uint32_t>& m,
                                    std::uint32_t p) {
  const std::size_t dm = m.size() - 1;
  for (std::size_t i = a.size(); i-- > dm;) {
    const std::uint32_t c = a[i] % p;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dm; ++j) {
      const std::uint64_t sub = static_cast<std::uint64_t>(c) * m[j] % p;
      a[i - dm + j] = static_cast<std::uint32_t>((a[i - dm + j] + p - sub) % p);
    }
  }
  a.resize(std::min(a.size(), dm));
  return a;
}

}  // namespace

bool is_irreducible_mod_p(std::uint32_t p, const std::vector<std::uint32_t>& modulus) {
  if (modulus.size() < 2 || modulus.back() != 1) return false;
  const std::size_t deg = modulus.size() - 1;
  if (deg == 1) return true;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    // Enumerate monic divisors of degree d by their low coefficients.
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t code = 0; code < count; ++code) {
      std::vector<std::uint32_t> g(d + 1, 0);
      std::uint64_t c = code;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(c % p);
        c /= p;
      }
      g[d] = 1;
      auto r = poly_rem(modulus, g, p);
      if (std::all_of(r.begin(), r.end(), [](std::uint32_t x) { return x == 0; })) return false;
    }
  }
  return true;
}

struct RingCtx::Tables {
  std::vector<Digit> add, mul, neg, inv;
};

RingCtx RingCtx::mixed(std::uint32_t p, unsigned default_precision) {
  if (!is_prime(p) || p >= kMaxQ) throw Error(ErrorCode::InvalidArgument, "p must be a prime below 65536");
  if (default_precision < 1) throw Error(ErrorCode::InvalidArgument, "precision must be at least 1");
  RingCtx ctx;
  ctx.mode_ = Mode::MixedChar;
  ctx.p_ = p;
  ctx.e_ = 1;
  ctx.q_ = p;
  ctx.modulus_ = {0, 1};
  ctx.default_precision_ = default_precision;
  ctx.build_tables();
  return ctx;
}

RingCtx RingCtx::equal(std::uint32_t p, std::vector<std::uint32_t> modulus, unsigned default_precision) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, "p must be prime");
  if (modulus.size() < 2) throw Error(ErrorCode::InvalidArgument, "modulus must have degree at least 1");
  for (auto c : modulus)
    if (c >= p) throw Error(ErrorCode::InvalidArgument, "modulus coefficients must lie in [0, p)");
  if (modulus.back() != 1) throw Error(ErrorCode::InvalidArgument, "modulus must be monic");
  if (!is_irreducible_mod_p(p, modulus))
    throw Error(ErrorCode::InvalidArgument, "modulus is reducible over F_p");
  if (default_precision < 1) throw Error(ErrorCode::InvalidArgument, "precision must be at least 1");
  const unsigned e = static_cast<unsigned>(modulus.size() - 1);
  std::uint64_t q = 1;
  for (unsigned i = 0; i < e; ++i) {
    q *= p;
    if (q >= kMaxQ) throw Error(ErrorCode::InvalidArgument, "q must be below 65536");
  }
  RingCtx ctx;
  ctx.mode_ = Mode::EqualChar;
  ctx.p_ = p;
  ctx.e_ = e;
  ctx.q_ = static_cast<std::uint32_t>(q);
  ctx.modulus_ = std::move(modulus);
  ctx.default_precision_ = default_precision;
  ctx.build_tables();
  return ctx;
}

RingCtx RingCtx::with_precision(unsigned precision) const {
  if (precision < 1) throw Error(ErrorCode::InvalidArgument, "precision must be at least 1");
  RingCtx copy = *this;
  copy.default_precision_ = precision;
  return copy;
}

std::string RingCtx::name() const {
  if (mode_ == Mode::MixedChar) return "Z_" + std::to_string(p_);
  return "F_" + std::to_string(q_) + "[[x]]";
}

FqElem RingCtx::unpack(Digit d) const {
  if (d >= q_) throw Error(ErrorCode::DimensionMismatch, "digit out of range for F_q");
  FqElem a;
  a.coeffs.resize(e_);
  for (unsigned j = 0; j < e_; ++j) {
    a.coeffs[j] = d % p_;
    d /= p_;
  }
  return a;
}

Digit RingCtx::pack(const FqElem& a) const {
  if (a.coeffs.size() != e_) throw Error(ErrorCode::DimensionMismatch, "FqElem has wrong length");
  Digit d = 0;
  for (unsigned j = e_; j-- > 0;) {
    if (a.coeffs[j] >= p_) throw Error(ErrorCode::DimensionMismatch, "FqElem coefficient out of range");
    d = d * p_ + a.coeffs[j];
  }
  return d;
}

namespace {

FqElem fq_mul_raw(std::uint32_t p, const std::vector<std::uint32_t>& modulus, const FqElem& a,
                  const FqElem& b) {
  const std::size_t e = modulus.size() - 1;
  std::vector<std::uint32_t> prod(2 * e - 1, 0);
  for (std::size_t i = 0; i < e; ++i)
    for (std::size_t j = 0; j < e; ++j)
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(a.coeffs[i]) * b.coeffs[j]) % p);
  auto r = poly_rem(std::move(prod), modulus, p);
  r.resize(e, 0);
  return FqElem{std::move(r)};
}

}  // namespace

void RingCtx::build_tables() {
  if (q_ > kTableQ) return;
  auto t = std::make_shared<Tables>();
  t->add.resize(q_ * q_);
  t->mul.resize(q_ * q_);
  t->neg.resize(q_);
  t->inv.resize(q_, 0);
  std::vector<FqElem> elems;
  elems.reserve(q_);
  for (Digit d = 0; d < q_; ++d) elems.push_back(unpack(d));
  for (Digit a = 0; a < q_; ++a) {
    FqElem n = elems[a];
    for (auto& c : n.coeffs) c = (p_ - c) % p_;
    t->neg[a] = pack(n);
    for (Digit b = 0; b < q_; ++b) {
      FqElem s = elems[a];
      for (unsigned j = 0; j < e_; ++j) s.coeffs[j] = (s.coeffs[j] + elems[b].coeffs[j]) % p_;
      t->add[a * q_ + b] = pack(s);
      const Digit m = pack(fq_mul_raw(p_, modulus_, elems[a], elems[b]));
      t->mul[a * q_ + b] = m;
      if (m == 1) t->inv[a] = b;
    }
  }
  tables_ = std::move(t);
}

Digit RingCtx::dadd(Digit a, Digit b) const {
  if (tables_) return tables_->add[a * q_ + b];
  FqElem x = unpack(a), y = unpack(b);
  for (unsigned j = 0; j < e_; ++j) x.coeffs[j] = (x.coeffs[j] + y.coeffs[j]) % p_;
  return pack(x);
}

Digit RingCtx::dneg(Digit a) const {
  if (tables_) return tables_->neg[a];
  FqElem x = unpack(a);
  for (auto& c : x.coeffs) c = (p_ - c) % p_;
  return pack(x);
}

Digit RingCtx::dsub(Digit a, Digit b) const { return dadd(a, dneg(b)); }

Digit RingCtx::dmul(Digit a, Digit b) const {
  if (tables_) return tables_->mul[a * q_ + b];
  if (e_ == 1) return static_cast<Digit>(static_cast<std::uint64_t>(a) * b % p_);
  return pack(fq_mul_raw(p_, modulus_, unpack(a), unpack(b)));
}

Digit RingCtx::dinv(Digit a) const {
  if (a == 0) throw Error(ErrorCode::NonUnit, "zero has no inverse in F_q");
  if (tables_) return tables_->inv[a];
  if (e_ == 1) return inv_mod_p(a, p_);
  // a^(q-2)
  Digit result = 1, base = a;
  for (std::uint32_t k = q_ - 2; k; k >>= 1) {
    if (k & 1) result = dmul(result, base);
    base = dmul(base, base);
  }
  return result;
}

FqElem fq_mul(const RingCtx& ctx, const FqElem& a, const FqElem& b) {
  return ctx.unpack(ctx.dmul(ctx.pack(a), ctx.pack(b)));
}

FqElem fq_add(const RingCtx& ctx, const FqElem& a, const FqElem& b) {
  return ctx.unpack(ctx.dadd(ctx.pack(a), ctx.pack(b)));
}

// ---------------------------------------------------------------------------
// RElem

RElem::RElem(std::vector<Digit> digits) : digits_(std::move(digits)) {
  if (digits_.empty()) throw Error(ErrorCode::InvalidArgument, "RElem precision must be at least 1");
}

bool RElem::is_zero_digits() const noexcept {
  return std::all_of(digits_.begin(), digits_.end(), [](Digit d) { return d == 0; });
}

namespace digits {

std::vector<Digit> add(const RingCtx& ctx, std::span<const Digit> a, std::span<const Digit> b,
                       std::size_t len) {
  std::vector<Digit> out(len, 0);
  auto at = [](std::span<const Digit> v, std::size_t i) -> Digit { return i < v.size() ? v[i] : 0; };
  if (ctx.mode() == Mode::EqualChar) {
    for (std::size_t i = 0; i < len; ++i) out[i] = ctx.dadd(at(a, i), at(b, i));
    return out;
  }
  const std::uint64_t p = ctx.p();
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < len; ++i) {
    const std::uint64_t s = std::uint64_t{at(a, i)} + at(b, i) + carry;
    out[i] = static_cast<Digit>(s % p);
    carry = s / p;
  }
  return out;
}

std::vector<Digit> neg(const RingCtx& ctx, std::span<const Digit> a, std::size_t len) {
  std::vector<Digit> out(len, 0);
  auto at = [&](std::size_t i) -> Digit { return i < a.size() ? a[i] : 0; };
  if (ctx.mode() == Mode::EqualChar) {
    for (std::size_t i = 0; i < len; ++i) out[i] = ctx.dneg(at(i));
    return out;
  }
  // p^len - a: complement every digit against p-1, then add one.
  const Digit p = ctx.p();
  std::uint64_t carry = 1;
  for (std::size_t i = 0; i < len; ++i) {
    const std::uint64_t s = std::uint64_t{p - 1 - at(i)} + carry;
    out[i] = static_cast<Digit>(s % p);
    carry = s / p;
  }
  return out;
}

std::vector<Digit> mul(const RingCtx& ctx, std::span<const Digit> a, std::span<const Digit> b,
                       std::size_t len) {
  const std::size_t na = std::min(a.size(), len), nb = std::min(b.size(), len);
  if (ctx.mode() == Mode::EqualChar) {
    std::vector<Digit> out(len, 0);
    for (std::size_t i = 0; i < na; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < nb && i + j < len; ++j)
        out[i + j] = ctx.dadd(out[i + j], ctx.dmul(a[i], b[j]));
    }
    return out;
  }
  // Schoolbook with 64-bit column accumulators; each product is below 2^32.
  const std::uint64_t p = ctx.p();
  std::vector<std::uint64_t> acc(len, 0);
  for (std::size_t i = 0; i < na; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < nb && i + j < len; ++j) acc[i + j] += std::uint64_t{a[i]} * b[j];
  }
  std::vector<Digit> out(len, 0);
  std::uint64_t carry = 0;
  for (std::size_t k = 0; k < len; ++k) {
    const std::uint64_t s = acc[k] + carry;
    out[k] = static_cast<Digit>(s % p);
    carry = s / p;
  }
  return out;
}

}  // namespace digits

RElem r_zero(const RingCtx&, unsigned precision) {
  if (precision < 1) throw Error(ErrorCode::InvalidArgument, "precision must be at least 1");
  return RElem(std::vector<Digit>(precision, 0));
}

RElem r_one(const RingCtx& ctx, unsigned precision) {
  auto r = r_zero(ctx, precision);
  std::vector<Digit> d = r.digits();
  d[0] = 1;
  return RElem(std::move(d));
}

RElem r_from_int(const RingCtx& ctx, long long n, unsigned precision) {
  if (precision < 1) throw Error(ErrorCode::InvalidArgument, "precision must be at least 1");
  if (n < 0 && ctx.mode() == Mode::EqualChar)
    throw Error(ErrorCode::InvalidArgument, "negative integers have no meaning in equal characteristic");
  unsigned long long m = n < 0 ? 0ULL - static_cast<unsigned long long>(n) : static_cast<unsigned long long>(n);
  std::vector<Digit> d(precision, 0);
  for (unsigned i = 0; i < precision && m; ++i) {
    d[i] = static_cast<Digit>(m % ctx.q());
    m /= ctx.q();
  }
  if (n < 0) return RElem(digits::neg(ctx, d, precision));
  return RElem(std::move(d));
}

RElem r_from_digits(const RingCtx& ctx, std::vector<Digit> d) {
  for (Digit x : d)
    if (x >= ctx.q()) throw Error(ErrorCode::DimensionMismatch, "digit out of range for the residue field");
  return RElem(std::move(d));
}

std::uint64_t r_to_code(const RingCtx& ctx, const RElem& a) {
  std::uint64_t code = 0;
  const auto& d = a.digits();
  for (std::size_t i = d.size(); i-- > 0;) {
    if (code > (std::numeric_limits<std::uint64_t>::max() - d[i]) / ctx.q())
      throw Error(ErrorCode::InvalidArgument, "element does not fit in 64 bits");
    code = code * ctx.q() + d[i];
  }
  return code;
}

RElem r_add(const RingCtx& ctx, const RElem& a, const RElem& b) {
  return RElem(digits::add(ctx, a.digits(), b.digits(), std::min(a.precision(), b.precision())));
}

RElem r_neg(const RingCtx& ctx, const RElem& a) { return RElem(digits::neg(ctx, a.digits(), a.precision())); }

RElem r_sub(const RingCtx& ctx, const RElem& a, const RElem& b) {
  const auto len = std::min(a.precision(), b.precision());
  return RElem(digits::add(ctx, a.digits(), digits::neg(ctx, b.digits(), len), len));
}

RElem r_mul(const RingCtx& ctx, const RElem& a, const RElem& b) {
  return RElem(digits::mul(ctx, a.digits(), b.digits(), std::min(a.precision(), b.precision())));
}

RElem r_truncate(const RElem& a, unsigned precision) {
  if (precision < 1) throw Error(ErrorCode::InvalidArgument, "precision must be at least 1");
  if (precision > a.precision())
    throw Error(ErrorCode::InsufficientPrecision, "cannot truncate to a higher precision");
  return RElem(std::vector<Digit>(a.digits().begin(), a.digits().begin() + precision));
}

RElem r_lift(const RElem& a, unsigned precision) {
  if (precision <= a.precision()) return r_truncate(a, precision);
  std::vector<Digit> d = a.digits();
  d.resize(precision, 0);
  return RElem(std::move(d));
}

RElem r_shift_up(const RElem& a, unsigned k) {
  std::vector<Digit> d(k, 0);
  d.insert(d.end(), a.digits().begin(), a.digits().end());
  return RElem(std::move(d));
}

RElem r_shift_down(const RElem& a, unsigned k) {
  if (k >= a.precision()) throw Error(ErrorCode::InsufficientPrecision, "shift exhausts the precision");
  for (unsigned i = 0; i < k; ++i)
    if (a.digit(i) != 0) throw Error(ErrorCode::InvalidArgument, "element is not divisible by pi^k");
  return RElem(std::vector<Digit>(a.digits().begin() + k, a.digits().end()));
}

Valuation r_valuation(const RingCtx&, const RElem& a) {
  const auto& d = a.digits();
  for (unsigned i = 0; i < d.size(); ++i)
    if (d[i] != 0) return {i, true};
  return {a.precision(), false};
}

RElem r_unit_inverse(const RingCtx& ctx, const RElem& a) {
  if (a.digit(0) == 0) throw Error(ErrorCode::NonUnit, "constant digit is zero");
  const unsigned n = a.precision();
  // Newton iteration b <- b (2 - a b), doubling the correct digits each round.
  std::vector<Digit> b{ctx.dinv(a.digit(0))};
  for (unsigned known = 1; known < n;) {
    const unsigned next = std::min(2 * known, n);
    const auto ab = digits::mul(ctx, a.digits(), b, next);
    const auto two = digits::add(ctx, std::vector<Digit>{1}, std::vector<Digit>{1}, next);
    const auto corr = digits::add(ctx, two, digits::neg(ctx, ab, next), next);
    b = digits::mul(ctx, b, corr, next);
    known = next;
  }
  return RElem(std::move(b));
}

bool r_congruent(const RElem& a, const RElem& b) {
  const auto len = std::min(a.precision(), b.precision());
  return std::equal(a.digits().begin(), a.digits().begin() + len, b.digits().begin());
}

// ---------------------------------------------------------------------------
// TElem

TElem TElem::from_canonical(std::vector<Digit> numerator) {
  if (!numerator.empty() && numerator.front() == 0)
    throw Error(ErrorCode::InvalidArgument, "TElem numerator must have nonzero constant digit");
  return TElem(std::move(numerator));
}

std::strong_ordering operator<=>(const TElem& a, const TElem& b) {
  if (auto c = a.level() <=> b.level(); c != 0) return c;
  return a.numerator_ <=> b.numerator_;
}

TElem t_canonicalize(std::vector<Digit> numerator) {
  std::size_t v = 0;
  while (v < numerator.size() && numerator[v] == 0) ++v;
  numerator.erase(numerator.begin(), numerator.begin() + static_cast<std::ptrdiff_t>(v));
  return TElem(std::move(numerator));
}

TElem t_from_fraction(const RingCtx& ctx, const RElem& a, unsigned n) {
  (void)ctx;
  if (a.precision() < n)
    throw Error(ErrorCode::InsufficientPrecision, "numerator precision below the denominator exponent");
  return t_canonicalize(std::vector<Digit>(a.digits().begin(), a.digits().begin() + n));
}

std::vector<Digit> t_numerator_at(const TElem& t, unsigned level) {
  if (level < t.level()) throw Error(ErrorCode::NotTorsion, "element has level above the requested one");
  std::vector<Digit> d(level - t.level(), 0);
  d.insert(d.end(), t.numerator().begin(), t.numerator().end());
  return d;
}

TElem t_add(const RingCtx& ctx, const TElem& s, const TElem& t) {
  const unsigned level = std::max(s.level(), t.level());
  return t_canonicalize(digits::add(ctx, t_numerator_at(s, level), t_numerator_at(t, level), level));
}

TElem t_neg(const RingCtx& ctx, const TElem& t) {
  return t_canonicalize(digits::neg(ctx, t.numerator(), t.level()));
}

TElem t_sub(const RingCtx& ctx, const TElem& s, const TElem& t) { return t_add(ctx, s, t_neg(ctx, t)); }

TElem t_scalar_mul(const RingCtx& ctx, const RElem& r, const TElem& t) {
  if (r.precision() < t.level())
    throw Error(ErrorCode::InsufficientPrecision, "scalar precision below the level of the T element");
  return t_canonicalize(digits::mul(ctx, r.digits(), t.numerator(), t.level()));
}

std::vector<TElem> t_enumerate_torsion(const RingCtx& ctx, unsigned n) {
  std::vector<TElem> out;
  out.emplace_back();
  const Digit q = ctx.q();
  for (unsigned level = 1; level <= n; ++level) {
    std::vector<Digit> num(level, 0);
    num[0] = 1;
    while (true) {
      out.push_back(TElem::from_canonical(num));
      // Odometer over digits 1.. with digit 0 ranging over units.
      std::size_t i = 0;
      for (; i < level; ++i) {
        if (++num[i] < q) break;
        num[i] = i == 0 ? 1 : 0;
      }
      if (i == level) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dvrdual
