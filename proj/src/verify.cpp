#include "dvrdual/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <ctime>
#include <functional>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "dvrdual/duality.hpp"
#include "dvrdual/flood.hpp"
#include "dvrdual/io.hpp"

namespace dvrdual::verify {

using nlohmann::json;
using oracle::Coords;
using oracle::Oracle;

namespace {

// ---------------------------------------------------------------------------
// Plumbing

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : gen_() % n; }
  long long between(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  bool coin(unsigned num, unsigned den) { return below(den) < num; }

 private:
  std::mt19937_64 gen_;
};

std::uint64_t entry_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (h | 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Records outcomes; keeps the first counterexample.
struct Recorder {
  Entry& entry;

  template <class Detail>
  void check(bool ok, Detail&& detail) {
    ++entry.cases;
    if (!ok && entry.passed) {
      entry.passed = false;
      entry.counterexample = detail();
    }
  }
  void skip() { ++entry.skipped; }
  bool failed() const { return !entry.passed; }
};

std::uint64_t code_of_digits(const RingCtx& ctx, const std::vector<Digit>& d) {
  std::uint64_t r = 0, place = 1;
  for (Digit x : d) {
    r += x * place;
    place *= ctx.q();
  }
  return r;
}

std::uint64_t ipow(std::uint64_t b, unsigned k) {
  std::uint64_t r = 1;
  while (k--) r *= b;
  return r;
}

RElem random_relem(const RingCtx& ctx, Rng& rng, unsigned precision) {
  std::vector<Digit> d(precision);
  for (auto& x : d) x = static_cast<Digit>(rng.below(ctx.q()));
  return RElem(std::move(d));
}

RElem random_unit(const RingCtx& ctx, Rng& rng, unsigned precision) {
  auto d = random_relem(ctx, rng, precision).digits();
  d[0] = static_cast<Digit>(1 + rng.below(ctx.q() - 1));
  return RElem(std::move(d));
}

TElem random_telem(const RingCtx& ctx, Rng& rng, unsigned max_level) {
  const unsigned n = static_cast<unsigned>(rng.below(max_level + 1));
  if (n == 0) return TElem{};
  return t_from_fraction(ctx, random_relem(ctx, rng, n), n);
}

ModElem random_elem(const RingCtx& ctx, Rng& rng, const InvariantFactors& m, unsigned free_precision) {
  ModElem x;
  for (unsigned e : m.torsion_exps) x.torsion.push_back(random_relem(ctx, rng, e));
  for (unsigned j = 0; j < m.free_rank; ++j) x.free.push_back(random_relem(ctx, rng, free_precision));
  return x;
}

// Every torsion module with sum of exponents <= max_sum and at most
// max_card elements, by increasing sum.
std::vector<InvariantFactors> torsion_corpus(const RingCtx& ctx, unsigned max_sum, std::uint64_t max_card) {
  std::vector<InvariantFactors> out;
  std::vector<unsigned> cur;
  std::function<void(unsigned, unsigned)> rec = [&](unsigned remaining, unsigned min_part) {
    out.push_back(InvariantFactors{cur, 0});
    for (unsigned part = min_part; part <= remaining; ++part) {
      cur.push_back(part);
      rec(remaining - part, part);
      cur.pop_back();
    }
  };
  rec(max_sum, 1);
  std::erase_if(out, [&](const InvariantFactors& m) {
    return m.total_exponent() > 62 || ipow(ctx.q(), m.total_exponent()) > max_card;
  });
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.total_exponent() < b.total_exponent();
  });
  return out;
}

unsigned corpus_sum_cap(const RingCtx& ctx) { return ctx.mode() == Mode::MixedChar && ctx.p() == 2 ? 12 : 7; }

json mod_json(const InvariantFactors& m) { return io::format_module(m); }

// T value a / pi^level as a code.
std::uint64_t t_code(const RingCtx& ctx, const TElem& t, unsigned level) {
  return code_of_digits(ctx, t_numerator_at(t, level));
}

// ---------------------------------------------------------------------------
// dvr_arith

void ring_laws(const RingCtx& ctx, const VerifyConfig& cfg, Rng& rng, Recorder& rec) {
  const unsigned n = 8;
  const Oracle orc(ctx, cfg.budget);
  for (int i = 0; i < 1000; ++i) {
    const RElem a = random_relem(ctx, rng, n), b = random_relem(ctx, rng, n), c = random_relem(ctx, rng, n);
    auto detail = [&] { return json{{"a", io::to_json(a)}, {"b", io::to_json(b)}, {"c", io::to_json(c)}}; };
    rec.check(r_add(ctx, r_add(ctx, a, b), c) == r_add(ctx, a, r_add(ctx, b, c)), detail);
    rec.check(r_mul(ctx, r_mul(ctx, a, b), c) == r_mul(ctx, a, r_mul(ctx, b, c)), detail);
    rec.check(r_mul(ctx, a, r_add(ctx, b, c)) == r_add(ctx, r_mul(ctx, a, b), r_mul(ctx, a, c)), detail);
    rec.check(r_mul(ctx, a, b) == r_mul(ctx, b, a), detail);
    rec.check(r_add(ctx, a, r_neg(ctx, a)) == r_zero(ctx, n), detail);
    rec.check(orc.code_of(r_mul(ctx, a, b), n) == orc.mul(orc.code_of(a, n), orc.code_of(b, n), n), detail);
    rec.check(orc.code_of(r_add(ctx, a, b), n) == orc.add(orc.code_of(a, n), orc.code_of(b, n), n), detail);
  }
}

void unit_inverse(const RingCtx& ctx, const VerifyConfig&, Rng& rng, Recorder& rec) {
  for (int i = 0; i < 500; ++i) {
    const unsigned n = 1 + static_cast<unsigned>(rng.below(10));
    const RElem a = random_unit(ctx, rng, n);
    const RElem b = r_unit_inverse(ctx, a);
    rec.check(r_mul(ctx, a, b) == r_one(ctx, n), [&] { return json{{"a", io::to_json(a)}, {"inverse", io::to_json(b)}}; });
  }
  bool threw = false;
  try {
    r_unit_inverse(ctx, r_zero(ctx, 3));
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::NonUnit;
  }
  rec.check(threw, [] { return json{{"error", "inverse of 0 did not raise NonUnit"}}; });
}

bool canonical(const TElem& t) { return t.is_zero() || t.numerator().front() != 0; }

void action_compatibility(const RingCtx& ctx, const VerifyConfig&, Rng& rng, Recorder& rec) {
  for (int i = 0; i < 500; ++i) {
    const TElem t = random_telem(ctx, rng, 6), u = random_telem(ctx, rng, 6);
    const RElem r = random_relem(ctx, rng, 8), s = random_relem(ctx, rng, 8);
    auto detail = [&] {
      return json{{"r", io::to_json(r)}, {"s", io::to_json(s)}, {"t", io::to_json(t)}, {"u", io::to_json(u)}};
    };
    const TElem lhs = t_scalar_mul(ctx, r_mul(ctx, r, s), t);
    const TElem rhs = t_scalar_mul(ctx, r, t_scalar_mul(ctx, s, t));
    rec.check(lhs == rhs, detail);
    rec.check(canonical(lhs) && canonical(t_add(ctx, t, u)), detail);
    rec.check(t_scalar_mul(ctx, r, t_add(ctx, t, u)) == t_add(ctx, t_scalar_mul(ctx, r, t), t_scalar_mul(ctx, r, u)),
              detail);
    rec.check(t_scalar_mul(ctx, r_add(ctx, r, s), t) == t_add(ctx, t_scalar_mul(ctx, r, t), t_scalar_mul(ctx, s, t)),
              detail);
    rec.check(t_scalar_mul(ctx, r_one(ctx, 8), t) == t, detail);
  }
}

void torsion_canonical_count(const RingCtx& ctx, const VerifyConfig& cfg, Rng&, Recorder& rec) {
  for (unsigned n = 0; n <= 6; ++n) {
    const std::uint64_t expected = ipow(ctx.q(), n);
    if (expected > cfg.budget.max_elements) {
      rec.skip();
      continue;
    }
    const auto all = t_enumerate_torsion(ctx, n);
    const std::set<TElem> distinct(all.begin(), all.end());
    const bool ok = all.size() == expected && distinct.size() == all.size() &&
                    std::all_of(all.begin(), all.end(), [&](const TElem& t) { return canonical(t) && t.level() <= n; });
    rec.check(ok, [&] { return json{{"n", n}, {"count", all.size()}, {"expected", expected}}; });
  }
}

// ---------------------------------------------------------------------------
// fingen

PresMatrix random_matrix(const RingCtx& ctx, Rng& rng, unsigned precision) {
  const std::size_t rows = 1 + rng.below(4), cols = 1 + rng.below(4);
  std::vector<RElem> entries;
  for (std::size_t i = 0; i < rows * cols; ++i) {
    if (rng.coin(1, 4)) {
      entries.push_back(r_zero(ctx, precision));
      continue;
    }
    const unsigned v = static_cast<unsigned>(rng.below(4));
    entries.push_back(r_shift_up(random_unit(ctx, rng, precision - v), v));
  }
  return PresMatrix(rows, cols, std::move(entries));
}

ElementaryOp random_op(const RingCtx& ctx, Rng& rng, std::size_t dim, unsigned precision) {
  using Kind = ElementaryOp::Kind;
  const std::size_t t = rng.below(dim);
  std::size_t s = rng.below(dim);
  switch (dim > 1 ? rng.below(3) : 2) {
    case 0:
      if (s == t) s = (t + 1) % dim;
      return {Kind::Swap, t, s, r_zero(ctx, 1)};
    case 1:
      if (s == t) s = (t + 1) % dim;
      return {Kind::AddMultiple, t, s, random_relem(ctx, rng, precision)};
    default:
      return {Kind::ScaleUnit, t, t, random_unit(ctx, rng, precision)};
  }
}

json matrix_json(const PresMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(io::to_json(m.at(r, c)));
    rows.push_back(row);
  }
  return rows;
}

SnfOptions snf_options(const VerifyConfig& cfg) {
  SnfOptions o;
  if (cfg.fault == Fault::SnfPivot) o.pivot_rule = SnfOptions::PivotRule::CorruptedMaxValuation;
  return o;
}

constexpr unsigned kMatrixPrecision = 12;

void snf_invariance(const RingCtx& ctx, const VerifyConfig& cfg, Rng& rng, Recorder& rec) {
  const SnfOptions opts = snf_options(cfg);
  for (int i = 0; i < 500; ++i) {
    const PresMatrix m = random_matrix(ctx, rng, kMatrixPrecision);
    const InvariantFactors base = snf(ctx, m, opts).factors;
    for (int s = 0; s < 20; ++s) {
      PresMatrix scrambled = m;
      for (int k = 0; k < 6; ++k) {
        if (rng.coin(1, 2))
          apply_row_op(ctx, scrambled, random_op(ctx, rng, m.rows(), kMatrixPrecision));
        else
          apply_col_op(ctx, scrambled, random_op(ctx, rng, m.cols(), kMatrixPrecision));
      }
      const InvariantFactors f = snf(ctx, scrambled, opts).factors;
      rec.check(f == base, [&] {
        return json{{"matrix", matrix_json(m)},
                    {"scrambled", matrix_json(scrambled)},
                    {"factors", io::to_json(base)},
                    {"scrambled_factors", io::to_json(f)}};
      });
      if (rec.failed()) return;
    }
  }
}

void snf_cokernel_oracle(const RingCtx& ctx, const VerifyConfig& cfg, Rng& rng, Recorder& rec) {
  const SnfOptions opts = snf_options(cfg);
  const Oracle orc(ctx, cfg.budget);
  for (int i = 0; i < 500; ++i) {
    const PresMatrix m = random_matrix(ctx, rng, kMatrixPrecision);
    const InvariantFactors f = snf(ctx, m, opts).factors;
    oracle::CokernelCount cc;
    try {
      cc = orc.cokernel_bruteforce(m);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::BudgetExceeded) {
        rec.skip();
        continue;
      }
      if (e.code() != ErrorCode::InfiniteCokernel) throw;
      rec.check(f.free_rank > 0, [&] {
        return json{{"matrix", matrix_json(m)}, {"factors", io::to_json(f)}, {"oracle", "infinite"}};
      });
      continue;
    }
    // Elements of order dividing pi^k: prod q^min(e_i, k).
    std::vector<std::uint64_t> by_order;
    std::uint64_t below = 0;
    const unsigned top = std::max(f.max_exponent(), cc.exponent);
    for (unsigned k = 0; k <= top; ++k) {
      std::uint64_t at_most = 1;
      for (unsigned e : f.torsion_exps) at_most *= ipow(ctx.q(), std::min(e, k));
      by_order.push_back(at_most - below);
      below = at_most;
    }
    while (by_order.size() > 1 && by_order.back() == 0) by_order.pop_back();
    const bool ok = f.free_rank == 0 && cc.count == ipow(ctx.q(), f.total_exponent()) && cc.by_order == by_order;
    rec.check(ok, [&] {
      return json{{"matrix", matrix_json(m)},
                  {"factors", io::to_json(f)},
                  {"oracle_count", cc.count},
                  {"oracle_by_order", cc.by_order}};
    });
  }
}

void inf_res_identities(const RingCtx& ctx, const VerifyConfig& cfg, Rng&, Recorder& rec) {
  const Oracle orc(ctx, cfg.budget);
  for (unsigned b = 1; b <= 5; ++b)
    for (unsigned a = 1; a <= b; ++a) {
      if (orc.size(b) > cfg.budget.max_work) {
        rec.skip();
        continue;
      }
      const std::uint64_t pba = orc.pi_pow(b - a, b);
      std::set<std::vector<Digit>> images;
      for (std::uint64_t code = 0; code < orc.size(a); ++code) {
        const RElem r = orc.relem_of(code, a);
        const RElem up = inf_map(ctx, a, b, r);
        images.insert(up.digits());
        const RElem round = res_map(ctx, b, a, up);
        rec.check(orc.code_of(up, b) == orc.mul(code, pba, b) &&
                      orc.code_of(round, a) == orc.mul(code, orc.pi_pow(b - a, a), a),
                  [&] { return json{{"a", a}, {"b", b}, {"r", io::to_json(r)}}; });
      }
      rec.check(images.size() == orc.size(a), [&] { return json{{"a", a}, {"b", b}, {"error", "inf not injective"}}; });
      for (std::uint64_t code = 0; code < orc.size(b); ++code) {
        const RElem s = orc.relem_of(code, b);
        const RElem down_up = inf_map(ctx, a, b, res_map(ctx, b, a, s));
        rec.check(orc.code_of(down_up, b) == orc.mul(code, pba, b),
                  [&] { return json{{"a", a}, {"b", b}, {"s", io::to_json(s)}}; });
      }
    }
}

// Number of R-linear maps M -> N: each generator of order pi^e goes to any
// element of N killed by pi^e. Saturates at UINT64_MAX.
std::uint64_t oracle_hom_count(const Oracle& orc, const InvariantFactors& m, const InvariantFactors& n) {
  const auto elems = orc.enum_elements(n);
  std::uint64_t total = 1;
  for (unsigned e : m.torsion_exps) {
    std::uint64_t killed = 0;
    for (const auto& y : elems) {
      const Coords z = orc.m_scale(n, orc.size(e), y);
      killed += std::all_of(z.begin(), z.end(), [](std::uint64_t c) { return c == 0; });
    }
    if (__builtin_mul_overflow(total, killed, &total)) return UINT64_MAX;
  }
  return total;
}

void hom_space_cardinality(const RingCtx& ctx, const VerifyConfig& cfg, Rng&, Recorder& rec) {
  const Oracle orc(ctx, cfg.budget);
  const auto corpus = torsion_corpus(ctx, 8, 256);
  for (const auto& m : corpus)
    for (const auto& n : corpus) {
      const HomSpace hs = hom_space(ctx, m, n, 1);
      const std::uint64_t expected = oracle_hom_count(orc, m, n);
      if (expected == UINT64_MAX) {
        rec.skip();
        continue;
      }
      const std::uint64_t structural =
          hs.structure.free_rank ? 0 : ipow(ctx.q(), hs.structure.total_exponent());
      std::uint64_t enumerated = structural;
      if (expected <= 1024) enumerated = all_homs(ctx, m, n).size();
      rec.check(structural == expected && enumerated == expected, [&] {
        return json{{"M", mod_json(m)}, {"N", mod_json(n)}, {"structure", io::to_json(hs.structure)},
                    {"oracle", expected}, {"enumerated", enumerated}};
      });
    }
  // Free parts: Hom(R, R/pi^b) = R/pi^b, Hom(R/pi^a, R) = 0, Hom(R, R) = R.
  const InvariantFactors free1{{}, 1};
  for (unsigned b = 1; b <= 3; ++b) {
    const InvariantFactors tb{{b}, 0};
    rec.check(hom_space(ctx, free1, tb, 4).structure == InvariantFactors{{b}, 0},
              [&] { return json{{"M", "[];f=1"}, {"N", mod_json(tb)}}; });
    rec.check(hom_space(ctx, tb, free1, 4).structure == InvariantFactors{{}, 0},
              [&] { return json{{"M", mod_json(tb)}, {"N", "[];f=1"}}; });
  }
  rec.check(hom_space(ctx, free1, free1, 4).structure == InvariantFactors{{}, 1},
            [] { return json{{"M", "[];f=1"}, {"N", "[];f=1"}}; });
}

void hom_linearity(const RingCtx& ctx, const VerifyConfig& cfg, Rng& rng, Recorder& rec) {
  const Oracle orc(ctx, cfg.budget);
  const auto corpus = torsion_corpus(ctx, 3, 16);
  for (const auto& m : corpus)
    for (const auto& n : corpus) {
      const auto homs = all_homs(ctx, m, n);
      const auto xs = all_elements(ctx, m);
      std::set<std::vector<std::vector<Digit>>> tables;
      for (const auto& h : homs) {
        validate_hom(ctx, h);
        std::vector<std::vector<Digit>> table;
        for (const auto& x : xs) {
          const ModElem hx = apply_hom(ctx, h, x);
          for (const auto& c : hx.torsion) table.push_back(c.digits());
          const ModElem y = xs[rng.below(xs.size())];
          const RElem r = random_relem(ctx, rng, std::max({1u, m.max_exponent(), n.max_exponent()}));
          auto detail = [&] { return json{{"M", mod_json(m)}, {"N", mod_json(n)}, {"x", io::to_json(x)}}; };
          rec.check(apply_hom(ctx, h, elem_add(ctx, m, x, y)) == elem_add(ctx, n, hx, apply_hom(ctx, h, y)), detail);
          rec.check(apply_hom(ctx, h, elem_scalar_mul(ctx, m, r, x)) == elem_scalar_mul(ctx, n, r, hx), detail);
        }
        tables.insert(std::move(table));
      }
      // Distinct matrices give distinct maps, and there are exactly as many
      // as the oracle counts.
      rec.check(tables.size() == homs.size() && homs.size() == oracle_hom_count(orc, m, n),
                [&] { return json{{"M", mod_json(m)}, {"N", mod_json(n)}, {"homs", homs.size()}}; });
    }
}

// ---------------------------------------------------------------------------
// duality

void dual_counting(const RingCtx& ctx, const VerifyConfig& cfg, Rng&, Recorder& rec) {
  const Oracle orc(ctx, cfg.budget);
  for (const auto& m : torsion_corpus(ctx, corpus_sum_cap(ctx), cfg.budget.max_elements)) {
    const std::uint64_t card = module_cardinality(ctx, m);
    const unsigned level = std::max(1u, m.max_exponent());
    const auto homs = orc.enum_r_homs(m, level);
    const DualModule d = dual_structure(m);
    const auto duals = all_dual_elements(ctx, d);
    const bool shape = d.torsion_exps == m.torsion_exps && d.t_copies == 0;
    rec.check(homs.size() == card && duals.size() == card && shape, [&] {
      return json{{"M", mod_json(m)}, {"order", card}, {"oracle_homs", homs.size()}, {"dual_elements", duals.size()}};
    });
    if (card > 64) continue;

    // Bijection: the pairing tables of the dual elements are exactly the
    // oracle's R-linear maps, and each oracle map is R-linear.
    const auto xs = orc.enum_elements(m);
    std::set<std::vector<std::uint64_t>> oracle_tables, dual_tables;
    for (const auto& h : homs) {
      std::vector<std::uint64_t> table;
      for (const auto& x : xs) table.push_back(orc.eval(m, h, x));
      for (const auto& x : xs)
        for (const auto& y : xs) {
          const bool additive = orc.eval(m, h, orc.m_add(m, x, y)) ==
                                orc.add(orc.eval(m, h, x), orc.eval(m, h, y), level);
          const bool linear = orc.eval(m, h, orc.m_scale(m, orc.q(), x)) ==
                              orc.mul(orc.q(), orc.eval(m, h, x), level);
          rec.check(additive && linear, [&] { return json{{"M", mod_json(m)}, {"oracle_hom", h.images}}; });
        }
      oracle_tables.insert(std::move(table));
    }
    for (const auto& phi : duals) {
      std::vector<std::uint64_t> table;
      for (const auto& x : xs) table.push_back(t_code(ctx, eval_pairing(ctx, d, phi, orc.elem_of(m, x)), level));
      dual_tables.insert(std::move(table));
    }
    rec.check(oracle_tables == dual_tables && dual_tables.size() == card,
              [&] { return json{{"M", mod_json(m)}, {"error", "pairing tables differ from oracle maps"}}; });
  }
}

void double_dual_identity(const RingCtx& ctx, const VerifyConfig& cfg, Rng& rng, Recorder& rec) {
  for (const auto& m : torsion_corpus(ctx, corpus_sum_cap(ctx), std::min<std::uint64_t>(1024, cfg.budget.max_elements)))
    for (const auto& x : all_elements(ctx, m)) {
      const ModElem back = double_dual_map(ctx, m, x);
      rec.check(back == x, [&] { return json{{"M", mod_json(m)}, {"m", io::to_json(x)}, {"dd", io::to_json(back)}}; });
    }
  const std::vector<std::vector<unsigned>> torsion_parts{{}, {1}, {2}, {1, 2}, {3}};
  for (unsigned f = 1; f <= 2; ++f)
    for (const auto& tp : torsion_parts) {
      const InvariantFactors m{tp, f};
      for (int i = 0; i < 100; ++i) {
        const ModElem x = random_elem(ctx, rng, m, 8);
        const ModElem back = double_dual_map(ctx, m, x);
        rec.check(back == x, [&] { return json{{"M", mod_json(m)}, {"m", io::to_json(x)}, {"dd", io::to_json(back)}}; });
      }
    }
}

void commuting_square(const RingCtx& ctx, const VerifyConfig& cfg, Rng&, Recorder& rec) {
  const Oracle orc(ctx, cfg.budget);
  for (unsigned b = 1; b <= 5; ++b)
    for (unsigned a = 1; a <= b; ++a) {
      if (orc.size(b) > cfg.budget.max_work) {
        rec.skip();
        continue;
      }
      const InvariantFactors big{{b}, 0}, small{{a}, 0};
      const HomMatrix inf{small, big, {inf_map(ctx, a, b, r_one(ctx, a))}};
      for (std::uint64_t code = 0; code < orc.size(b); ++code) {
        const DualElem phi{{orc.relem_of(code, b)}, {}};
        // (phi o inf)(1) = pi^(b-a) code / pi^b = code / pi^a, so i_x reads code mod pi^a.
        const bool square = check_inf_res_square(ctx, a, b, phi);
        const bool value = apply_dual_hom(ctx, inf, phi).torsion.at(0) == orc.relem_of(code % orc.size(a), a);
        rec.check(square && value, [&] { return json{{"a", a}, {"b", b}, {"phi", io::to_json(phi)}}; });
      }
    }
}

void naturality_pair(const RingCtx& ctx, const InvariantFactors& m, const InvariantFactors& n,
                     const std::vector<HomMatrix>& homs, Recorder& rec) {
  const DualModule dm = dual_structure(m), dn = dual_structure(n);
  const auto xs = all_elements(ctx, m);
  const auto phis = all_dual_elements(ctx, dn);
  for (const auto& h : homs) {
    const HomMatrix dh = dual_hom(ctx, h);
    for (const auto& phi : phis) {
      const DualElem pulled = apply_dual_hom(ctx, h, phi);
      const ModElem via_matrix = apply_hom(ctx, dh, ModElem{phi.torsion, {}});
      rec.check(via_matrix.torsion == pulled.torsion,
                [&] { return json{{"M", mod_json(m)}, {"N", mod_json(n)}, {"phi", io::to_json(phi)}}; });
      for (const auto& x : xs) {
        const bool ok = eval_pairing(ctx, dm, pulled, x) == eval_pairing(ctx, dn, phi, apply_hom(ctx, h, x));
        rec.check(ok, [&] {
          return json{{"M", mod_json(m)}, {"N", mod_json(n)}, {"phi", io::to_json(phi)}, {"m", io::to_json(x)}};
        });
      }
    }
  }
}

void pairing_naturality(const RingCtx& ctx, const VerifyConfig&, Rng& rng, Recorder& rec) {
  const auto tiny = torsion_corpus(ctx, 3, 8);
  for (const auto& m : tiny)
    for (const auto& n : tiny) naturality_pair(ctx, m, n, all_homs(ctx, m, n), rec);
  const auto small = torsion_corpus(ctx, 6, 64);
  for (int i = 0; i < 40; ++i) {
    const auto& m = small[rng.below(small.size())];
    const auto& n = small[rng.below(small.size())];
    const auto space = hom_space(ctx, m, n, 1);
    std::vector<HomMatrix> homs;
    for (int k = 0; k < 8; ++k) {
      // Random R-combination of the generators.
      HomMatrix h = hom_zero(ctx, m, n, 1);
      for (const auto& g : space.generators) {
        const RElem r = random_relem(ctx, rng, std::max(1u, n.max_exponent()));
        for (std::size_t j = 0; j < h.entries.size(); ++j) {
          const std::size_t col = j % n.component_count();
          const unsigned b = n.torsion_exps[col];
          h.entries[j] = r_add(ctx, h.entries[j], r_mul(ctx, r_truncate(r_lift(r, b), b), g.entries[j]));
        }
      }
      homs.push_back(std::move(h));
    }
    naturality_pair(ctx, m, n, homs, rec);
  }
}

void kernel_triviality(const RingCtx& ctx, const VerifyConfig&, Rng&, Recorder& rec) {
  for (const auto& m : torsion_corpus(ctx, 8, 256)) {
    const DualModule d = dual_structure(m);
    const auto phis = all_dual_elements(ctx, d);
    for (const auto& x : all_elements(ctx, m)) {
      const bool detected = std::any_of(phis.begin(), phis.end(),
                                        [&](const DualElem& phi) { return !eval_pairing(ctx, d, phi, x).is_zero(); });
      rec.check(detected != elem_is_zero(x), [&] { return json{{"M", mod_json(m)}, {"m", io::to_json(x)}}; });
    }
  }
}

void hom_lifting(const RingCtx& ctx, const VerifyConfig& cfg, Rng& rng, Recorder& rec) {
  oracle::EnumBudget budget = cfg.budget;
  budget.max_elements = std::max<std::uint64_t>(budget.max_elements, 1024);
  const Oracle orc(ctx, budget);
  auto corpus = torsion_corpus(ctx, corpus_sum_cap(ctx), 1024);
  std::erase_if(corpus, [](const InvariantFactors& m) { return m.torsion_exps.empty(); });
  for (int chain = 0; chain < 200; ++chain) {
    const auto& m = corpus[rng.below(corpus.size())];
    const unsigned level = m.max_exponent();
    std::vector<Coords> gens;
    const std::size_t k = 1 + rng.below(3);
    for (std::size_t j = 0; j < k; ++j) {
      Coords g;
      for (unsigned e : m.torsion_exps) g.push_back(rng.below(orc.size(e)));
      gens.push_back(std::move(g));
    }
    std::vector<ModElem> gen_elems;
    for (const auto& g : gens) gen_elems.push_back(orc.elem_of(m, g));
    const auto sub = orc.span(m, gens);
    const auto phis = orc.enum_submodule_homs(m, gens, level);
    rec.check(phis.size() == sub.size(), [&] {
      return json{{"M", mod_json(m)}, {"gens", gens}, {"homs", phis.size()}, {"submodule_order", sub.size()}};
    });
    const DualModule d = dual_structure(m);
    for (const auto& vals : phis) {
      std::vector<TElem> values;
      for (auto v : vals) values.push_back(t_from_fraction(ctx, orc.relem_of(v, level), level));
      const DualElem psi = extend_hom(ctx, m, gen_elems, values);
      bool ok = true;
      for (std::size_t j = 0; j < gens.size(); ++j) ok = ok && eval_pairing(ctx, d, psi, gen_elems[j]) == values[j];
      rec.check(ok, [&] { return json{{"M", mod_json(m)}, {"gens", gens}, {"values", vals}, {"lift", io::to_json(psi)}}; });
    }
  }
}

// ---------------------------------------------------------------------------
// flood

ZDualFunctional functional_add(const RingCtx& ctx, const ZDualFunctional& a, const ZDualFunctional& b) {
  std::vector<Digit> c(std::max(a.coeffs.size(), b.coeffs.size()), 0);
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = ctx.dadd(i < a.coeffs.size() ? a.coeffs[i] : 0, i < b.coeffs.size() ? b.coeffs[i] : 0);
  return make_functional(ctx, std::move(c));
}

void check_ell_case(const RingCtx& ctx, const ZDualFunctional& phi, const ZDualFunctional& other, const RElem& r,
                    Recorder& rec) {
  auto detail = [&] {
    return json{{"phi", io::to_json(phi)}, {"psi", io::to_json(other)}, {"scalar", io::to_json(r)}};
  };
  const TElem t = ell(ctx, phi);
  rec.check(ell_inv(ctx, t) == phi && ell(ctx, ell_inv(ctx, t)) == t, detail);
  rec.check(ell(ctx, functional_scalar_mul(ctx, r, phi)) == t_scalar_mul(ctx, r, t), detail);
  rec.check(to_raw(ctx, functional_scalar_mul(ctx, r, phi)) == raw_scalar_mul(ctx, r, to_raw(ctx, phi)), detail);
  rec.check(ell(ctx, functional_add(ctx, phi, other)) == t_add(ctx, t, ell(ctx, other)), detail);
}

void ell_isomorphism(const RingCtx& ctx, const VerifyConfig&, Rng& rng, Recorder& rec) {
  const unsigned prec = 8;
  if (ipow(ctx.q(), 3) <= 4096) {
    // Exhaustive over support <= 3 and monomial scalars h x^k, k <= 3.
    std::vector<ZDualFunctional> all;
    for (std::uint64_t code = 0; code < ipow(ctx.q(), 3); ++code) {
      std::vector<Digit> c(3);
      for (unsigned i = 0, v = static_cast<unsigned>(code); i < 3; ++i, v /= ctx.q()) c[i] = v % ctx.q();
      all.push_back(make_functional(ctx, c));
    }
    std::set<TElem> images;
    for (const auto& phi : all) {
      images.insert(ell(ctx, phi));
      for (Digit h = 1; h < ctx.q(); ++h)
        for (unsigned k = 0; k <= 3; ++k) {
          std::vector<Digit> d(prec, 0);
          d[k] = h;
          check_ell_case(ctx, phi, all[rng.below(all.size())], RElem(d), rec);
        }
    }
    rec.check(images.size() == all.size(), [] { return json{{"error", "ell is not injective"}}; });
    for (const auto& t : t_enumerate_torsion(ctx, 3)) {
      const ZDualFunctional z = ell_inv(ctx, t);
      rec.check(z.support_bound() <= 3 && ell(ctx, z) == t, [&] { return json{{"t", io::to_json(t)}}; });
    }
  }
  for (int i = 0; i < 500; ++i) {
    auto random_functional = [&] {
      std::vector<Digit> c(rng.below(7));
      for (auto& x : c) x = static_cast<Digit>(rng.below(ctx.q()));
      return make_functional(ctx, c);
    };
    check_ell_case(ctx, random_functional(), random_functional(), random_relem(ctx, rng, prec), rec);
  }
}

CircleElem eval_on(const RingCtx& ctx, const std::vector<CircleElem>& psi, Digit a) {
  const FqElem c = ctx.unpack(a);
  CircleElem acc;
  for (unsigned j = 0; j < ctx.e(); ++j) acc = circle_add(ctx.p(), acc, circle_scale(ctx.p(), c.coeffs[j], psi[j]));
  return acc;
}

void i_iso_linearity(const RingCtx& ctx, const VerifyConfig&, Rng&, Recorder& rec) {
  if (ctx.q() > 64) {
    rec.skip();
    return;
  }
  for (Digit c = 0; c < ctx.q(); ++c) {
    const auto psi = i_inv(ctx, ctx.unpack(c));
    rec.check(ctx.pack(i_iso(ctx, psi)) == c, [&] { return json{{"c", c}}; });
    for (Digit cp = 0; cp < ctx.q(); ++cp) {
      std::vector<CircleElem> scaled;
      for (unsigned j = 0; j < ctx.e(); ++j) scaled.push_back(eval_on(ctx, psi, ctx.dmul(cp, static_cast<Digit>(ipow(ctx.p(), j)))));
      rec.check(ctx.pack(i_iso(ctx, scaled)) == ctx.dmul(cp, c), [&] { return json{{"c", c}, {"scalar", cp}}; });
    }
  }
  // Every map F_q -> (1/p)Z/Z is hit exactly once.
  std::set<Digit> seen;
  for (std::uint64_t code = 0; code < ctx.q(); ++code) {
    std::vector<CircleElem> psi;
    for (unsigned j = 0, v = static_cast<unsigned>(code); j < ctx.e(); ++j, v /= ctx.p())
      psi.push_back(circle_from(ctx.p(), v % ctx.p(), 1));
    const FqElem c = i_iso(ctx, psi);
    seen.insert(ctx.pack(c));
    rec.check(i_inv(ctx, c) == psi, [&] { return json{{"psi_code", code}}; });
  }
  rec.check(seen.size() == ctx.q(), [] { return json{{"error", "i is not bijective"}}; });
}

void adjoint_transport_suite(const RingCtx& ctx, const VerifyConfig& cfg, Rng&, Recorder& rec) {
  const Oracle orc(ctx, cfg.budget);
  for (const auto& m : torsion_corpus(ctx, 8, 256)) {
    const auto xs = orc.enum_elements(m);
    std::vector<ModElem> elems;
    for (const auto& x : xs) elems.push_back(orc.elem_of(m, x));
    std::set<std::vector<std::uint32_t>> additive;
    for (const auto& z : orc.enum_z_homs(m)) {
      std::vector<std::uint32_t> key;
      for (const auto& x : xs) key.push_back(orc.eval(m, z, x));
      additive.insert(std::move(key));
    }
    std::set<std::vector<std::uint32_t>> transported;
    const auto psis = all_dual_elements(ctx, dual_structure(m));
    for (const auto& psi : psis) {
      std::vector<std::uint32_t> key;
      bool in_range = true;
      for (const auto& x : elems) {
        const CircleElem c = transport_value(ctx, m, psi, x);
        in_range = in_range && c.k <= 1;
        key.push_back(static_cast<std::uint32_t>(c.numerator));
      }
      rec.check(in_range && additive.count(key) == 1,
                [&] { return json{{"M", mod_json(m)}, {"psi", io::to_json(psi)}, {"error", "not an additive map"}}; });
      transported.insert(std::move(key));
    }
    const std::uint64_t card = xs.size();
    rec.check(transported.size() == psis.size() && psis.size() == card && additive.size() == card, [&] {
      return json{{"M", mod_json(m)}, {"order", card}, {"transported", transported.size()}, {"additive", additive.size()}};
    });
  }
}

// ---------------------------------------------------------------------------
// Ring-independent suites

void torsion_count_zp(const VerifyConfig&, Rng&, Recorder& rec) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const RingCtx ctx = RingCtx::mixed(p, 8);
    for (unsigned n = 0; n <= 6; ++n) {
      const TorsionCount tc = torsion_count(ctx, n);
      // Independent count: fractions a / p^n in [0, 1).
      const std::uint64_t fractions = ipow(p, n);
      rec.check(tc.holds() && tc.count == fractions,
                [&] { return json{{"p", p}, {"n", n}, {"count", tc.count}, {"expected", tc.expected}}; });
    }
  }
}

void zdelta_predicate(const VerifyConfig&, Rng&, Recorder& rec) {
  for (long long a = -10; a <= 3; ++a)
    for (long long b = -7; b <= 7; ++b) {
      const bool accepted = std::holds_alternative<ZDeltaRing>(zdelta_validate(a, b));
      const long long disc = b * b + 4 * a;
      rec.check(accepted == (a < 0 && disc < 0), [&] { return json{{"a", a}, {"b", b}, {"accepted", accepted}}; });
    }
}

void zdelta_ring_laws(const VerifyConfig&, Rng& rng, Recorder& rec) {
  std::vector<ZDeltaRing> rings;
  for (long long a = -10; a <= -1; ++a)
    for (long long b = -7; b <= 7; ++b)
      if (auto r = zdelta_validate(a, b); std::holds_alternative<ZDeltaRing>(r)) rings.push_back(std::get<ZDeltaRing>(r));
  for (int i = 0; i < 1000; ++i) {
    const ZDeltaRing& R = rings[rng.below(rings.size())];
    auto el = [&] { return ZDeltaElem{rng.between(-1000, 1000), rng.between(-1000, 1000)}; };
    const ZDeltaElem u = el(), v = el(), w = el();
    auto detail = [&] {
      return json{{"a", R.a()}, {"b", R.b()}, {"u", {u.x, u.y}}, {"v", {v.x, v.y}}, {"w", {w.x, w.y}}};
    };
    rec.check(R.mul(R.mul(u, v), w) == R.mul(u, R.mul(v, w)), detail);
    rec.check(R.mul(u, R.add(v, w)) == R.add(R.mul(u, v), R.mul(u, w)), detail);
    rec.check(R.mul(u, v) == R.mul(v, u), detail);
    rec.check(R.norm(R.mul(u, v)) == R.norm(u) * R.norm(v), detail);
    // Exact: 4 N = (2x + b y)^2 - (b^2 + 4a) y^2.
    const __int128 lhs = static_cast<__int128>(4) * R.norm(u);
    const __int128 s = 2 * static_cast<__int128>(u.x) + static_cast<__int128>(R.b()) * u.y;
    const __int128 rhs = s * s - static_cast<__int128>(R.discriminant()) * u.y * u.y;
    // Floating: |x + y delta|^2 with delta = (b + i sqrt(-(b^2 + 4a))) / 2.
    const std::complex<double> delta(R.b() / 2.0, std::sqrt(static_cast<double>(-R.discriminant())) / 2.0);
    const double approx = std::norm(static_cast<double>(u.x) + static_cast<double>(u.y) * delta);
    const double exact = static_cast<double>(R.norm(u));
    rec.check(lhs == rhs && std::abs(approx - exact) <= 1e-9 * std::max(1.0, exact), detail);
  }
}

// ---------------------------------------------------------------------------
// Registry

using RingSuite = void (*)(const RingCtx&, const VerifyConfig&, Rng&, Recorder&);
using GlobalSuite = void (*)(const VerifyConfig&, Rng&, Recorder&);

struct SuiteDef {
  std::string name;
  RingSuite ring = nullptr;
  GlobalSuite global = nullptr;
  bool equal_only = false;
};

const std::vector<SuiteDef>& registry() {
  static const std::vector<SuiteDef> defs{
      {"ring-laws", ring_laws},
      {"unit-inverse", unit_inverse},
      {"action-compatibility", action_compatibility},
      {"torsion-canonical-count", torsion_canonical_count},
      {"snf-invariance", snf_invariance},
      {"snf-cokernel-oracle", snf_cokernel_oracle},
      {"inf-res-identities", inf_res_identities},
      {"hom-space-cardinality", hom_space_cardinality},
      {"hom-linearity", hom_linearity},
      {"dual-counting", dual_counting},
      {"double-dual-identity", double_dual_identity},
      {"commuting-square", commuting_square},
      {"pairing-naturality", pairing_naturality},
      {"kernel-triviality", kernel_triviality},
      {"hom-lifting", hom_lifting},
      {"ell-isomorphism", ell_isomorphism, nullptr, true},
      {"i-iso-linearity", i_iso_linearity, nullptr, true},
      {"adjoint-transport", adjoint_transport_suite, nullptr, true},
      {"torsion-count-zp", nullptr, torsion_count_zp},
      {"zdelta-predicate", nullptr, zdelta_predicate},
      {"zdelta-ring-laws", nullptr, zdelta_ring_laws},
  };
  return defs;
}

template <class Body>
Entry run_entry(const std::string& suite, const std::string& ring, std::uint64_t seed, Body&& body) {
  Entry e;
  e.suite = suite;
  e.ring = ring;
  Rng rng(entry_seed(seed, e.name()));
  Recorder rec{e};
  const auto start = std::chrono::steady_clock::now();
  try {
    body(rng, rec);
  } catch (const std::exception& ex) {
    if (e.passed) e.counterexample = json{{"error", ex.what()}};
    e.passed = false;
  }
  e.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return e;
}

}  // namespace

VerifyConfig default_config() {
  VerifyConfig c;
  c.rings = {"mode=mixed,p=2,e=1,prec=16", "mode=mixed,p=3,e=1,prec=16", "mode=equal,p=2,e=1,prec=16",
             "mode=equal,p=2,e=2,poly=1,1,1,prec=16"};
  return c;
}

Fault parse_fault(const std::string& name) {
  if (name == "none") return Fault::None;
  if (name == "snf-pivot") return Fault::SnfPivot;
  throw Error(ErrorCode::Parse, "unknown fault '" + name + "' (expected none or snf-pivot)");
}

VerifyConfig config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "verify config must be a JSON object");
  VerifyConfig c = default_config();
  try {
    if (j.contains("rings")) c.rings = j.at("rings").get<std::vector<std::string>>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("budget")) {
      const json& b = j.at("budget");
      if (b.contains("max_elements")) c.budget.max_elements = b.at("max_elements").get<std::uint64_t>();
      if (b.contains("max_work")) c.budget.max_work = b.at("max_work").get<std::uint64_t>();
    }
    if (j.contains("suites")) c.suites = j.at("suites").get<std::vector<std::string>>();
    if (j.contains("fault")) c.fault = parse_fault(j.at("fault").get<std::string>());
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::Parse, std::string("bad verify config: ") + ex.what());
  }
  if (c.suites)
    for (const auto& s : *c.suites)
      if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
        throw Error(ErrorCode::Parse, "unknown suite '" + s + "'");
  return c;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& d : registry()) n.push_back(d.name);
    return n;
  }();
  return names;
}

bool VerifyReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const Entry& e) { return e.passed; });
}

VerifyReport run_suite(const VerifyConfig& config) {
  if (config.budget.max_elements == 0 || config.budget.max_work == 0)
    throw Error(ErrorCode::Parse, "budgets must be positive");
  std::vector<RingCtx> rings;
  for (const auto& spec : config.rings) rings.push_back(io::parse_ring(spec));
  if (config.suites)
    for (const auto& s : *config.suites)
      if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
        throw Error(ErrorCode::Parse, "unknown suite '" + s + "'");

  VerifyReport report;
  report.seed = config.seed;
  for (const auto& r : rings) report.rings.push_back(io::format_ring(r));
  for (const auto& def : registry()) {
    if (config.suites && std::find(config.suites->begin(), config.suites->end(), def.name) == config.suites->end())
      continue;
    if (def.global) {
      report.entries.push_back(
          run_entry(def.name, "", config.seed, [&](Rng& rng, Recorder& rec) { def.global(config, rng, rec); }));
      continue;
    }
    for (const auto& ctx : rings) {
      if (def.equal_only && ctx.mode() != Mode::EqualChar) continue;
      report.entries.push_back(run_entry(def.name, ctx.name(), config.seed,
                                         [&](Rng& rng, Recorder& rec) { def.ring(ctx, config, rng, rec); }));
    }
  }
  return report;
}

json report_json(const VerifyReport& report, bool with_timestamps) {
  json entries = json::array();
  std::size_t passed = 0;
  for (const auto& e : report.entries) {
    passed += e.passed;
    entries.push_back(json{{"name", e.name()},
                           {"suite", e.suite},
                           {"ring", e.ring},
                           {"status", e.passed ? "pass" : "fail"},
                           {"cases", e.cases},
                           {"skipped", e.skipped},
                           {"counterexample", e.passed ? json(nullptr) : e.counterexample}});
  }
  json out{{"schema", "dvrdual-verify/1"},
           {"status", report.passed() ? "pass" : "fail"},
           {"seed", report.seed},
           {"rings", report.rings},
           {"totals", {{"entries", report.entries.size()}, {"passed", passed}, {"failed", report.entries.size() - passed}}},
           {"entries", entries}};
  if (with_timestamps) {
    json elapsed = json::object();
    for (const auto& e : report.entries) elapsed[e.name()] = std::round(e.elapsed_ms * 1000.0) / 1000.0;
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ts;
    ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    out["timestamps"] = json{{"generated_at", ts.str()}, {"elapsed_ms", elapsed}};
  }
  return out;
}

std::string report_text(const VerifyReport& report) {
  std::ostringstream out;
  std::size_t passed = 0;
  for (const auto& e : report.entries) {
    passed += e.passed;
    out << (e.passed ? "PASS " : "FAIL ") << e.name() << "  cases=" << e.cases;
    if (e.skipped) out << " skipped=" << e.skipped;
    out << "  (" << std::fixed << std::setprecision(1) << e.elapsed_ms << " ms)\n";
    if (!e.passed) out << "     counterexample: " << e.counterexample.dump() << "\n";
  }
  out << (report.passed() ? "PASS" : "FAIL") << ": " << passed << "/" << report.entries.size()
      << " entries passed, seed " << report.seed << "\n";
  return out.str();
}

}  // namespace dvrdual::verify
