#include <doctest.h>

#include <random>

#include "dvrdual/dvr_arith.hpp"

using namespace dvrdual;

namespace {

RingCtx z(std::uint32_t p, unsigned prec = 8) { return RingCtx::mixed(p, prec); }
RingCtx f2x(unsigned prec = 8) { return RingCtx::equal(2, {0, 1}, prec); }
RingCtx f4x(unsigned prec = 8) { return RingCtx::equal(2, {1, 1, 1}, prec); }

RElem ds(std::vector<Digit> d) { return RElem(std::move(d)); }

}  // namespace

TEST_CASE("residue field F_4") {
  const RingCtx ctx = f4x();
  CHECK(ctx.q() == 4);
  const Digit t = 2, t1 = 3;
  CHECK(ctx.dmul(t, t) == t1);
  CHECK(ctx.dmul(1, t) == t);
  CHECK(ctx.dmul(t, t1) == 1);
  CHECK(ctx.dadd(t, t1) == 1);
  CHECK(ctx.dinv(t) == t1);
  CHECK_THROWS_AS(ctx.dinv(0), Error);
  CHECK(ctx.unpack(t1) == FqElem{{1, 1}});
  CHECK(ctx.pack(FqElem{{0, 1}}) == t);
  CHECK(fq_mul(ctx, FqElem{{0, 1}}, FqElem{{0, 1}}) == FqElem{{1, 1}});
}

TEST_CASE("irreducibility") {
  CHECK(is_irreducible_mod_p(2, {1, 1, 1}));
  CHECK_FALSE(is_irreducible_mod_p(2, {1, 0, 1}));
  CHECK(is_irreducible_mod_p(3, {1, 0, 1}));
  CHECK_THROWS_AS(RingCtx::equal(2, {1, 0, 1}, 4), Error);
  CHECK_THROWS_AS(RingCtx::mixed(4, 4), Error);
}

TEST_CASE("ring names") {
  CHECK(z(3).name() == "Z_3");
  CHECK(f2x().name() == "F_2[[x]]");
  CHECK(f4x().name() == "F_4[[x]]");
}

TEST_CASE("multiplication") {
  const RingCtx z5 = z(5, 3);
  CHECK(r_mul(z5, r_from_int(z5, 7, 3), r_from_int(z5, 8, 3)) == ds({1, 1, 2}));
  const RingCtx f2 = f2x(4);
  const RElem one_x = ds({1, 1, 0, 0});
  CHECK(r_mul(f2, one_x, one_x) == ds({1, 0, 1, 0}));
  CHECK(r_mul(z5, r_from_int(z5, 7, 3), r_zero(z5, 2)) == r_zero(z5, 2));
  // Precision is the minimum of the operands.
  CHECK(r_mul(z5, r_from_int(z5, 7, 3), r_from_int(z5, 8, 2)).precision() == 2);
}

TEST_CASE("mixed characteristic carries") {
  const RingCtx z3 = z(3, 8);
  CHECK(r_to_code(z3, r_mul(z3, r_from_int(z3, 2782, 8), r_from_int(z3, 416, 8))) == 2782ULL * 416 % 6561);
  CHECK(r_to_code(z3, r_add(z3, r_from_int(z3, 6560, 8), r_from_int(z3, 1, 8))) == 0);
  CHECK(r_from_int(z3, -1, 4) == ds({2, 2, 2, 2}));
  CHECK(r_neg(z3, r_one(z3, 3)) == ds({2, 2, 2}));
  CHECK_THROWS_AS(r_from_int(f2x(), -1, 4), Error);
}

TEST_CASE("valuation") {
  const RingCtx z3 = z(3, 4);
  CHECK(r_valuation(z3, r_from_int(z3, 18, 4)) == Valuation{2, true});
  CHECK(r_valuation(z3, r_zero(z3, 4)) == Valuation{4, false});
  CHECK(r_valuation(z3, r_one(z3, 4)) == Valuation{0, true});
}

TEST_CASE("unit inverse") {
  const RingCtx z5 = z(5, 2);
  CHECK(r_to_code(z5, r_unit_inverse(z5, r_from_int(z5, 2, 2))) == 13);
  const RingCtx f2 = f2x(3);
  CHECK(r_unit_inverse(f2, ds({1, 1, 0})) == ds({1, 1, 1}));
  CHECK(r_unit_inverse(f2, r_one(f2, 3)) == r_one(f2, 3));
  CHECK_THROWS_AS(r_unit_inverse(z5, r_from_int(z5, 5, 2)), Error);
}

TEST_CASE("shifts and truncation") {
  const RElem a = ds({1, 2, 0});
  CHECK(r_shift_up(a, 2) == ds({0, 0, 1, 2, 0}));
  CHECK(r_shift_down(ds({0, 0, 1, 2}), 2) == ds({1, 2}));
  CHECK_THROWS_AS(r_shift_down(ds({1, 0}), 1), Error);
  CHECK(r_truncate(a, 2) == ds({1, 2}));
  CHECK(r_lift(a, 5) == ds({1, 2, 0, 0, 0}));
  CHECK(r_congruent(a, ds({1, 2})));
  CHECK_FALSE(r_congruent(a, ds({1, 1})));
  CHECK_THROWS_AS(r_from_digits(z(3), {3}), Error);
  CHECK_THROWS_AS(RElem({}), Error);
}

TEST_CASE("T elements") {
  const RingCtx z3 = z(3);
  const TElem ninth = t_from_fraction(z3, r_one(z3, 2), 2);
  CHECK(t_from_fraction(z3, r_from_int(z3, 3, 3), 3) == ninth);
  CHECK(ninth.level() == 2);
  CHECK(t_from_fraction(z3, r_zero(z3, 5), 5).is_zero());
  const TElem four_ninths = t_from_fraction(z3, r_from_int(z3, 4, 2), 2);
  CHECK(four_ninths.level() == 2);
  CHECK(four_ninths.numerator() == std::vector<Digit>{1, 1});

  const RingCtx z2 = z(2);
  const TElem half = t_from_fraction(z2, r_one(z2, 1), 1);
  const TElem quarter = t_from_fraction(z2, r_one(z2, 2), 2);
  CHECK(t_add(z2, half, half).is_zero());
  const TElem three_quarters = t_add(z2, quarter, half);
  CHECK(three_quarters.level() == 2);
  CHECK(three_quarters.numerator() == std::vector<Digit>{1, 1});
  CHECK(t_add(z2, quarter, TElem{}) == quarter);
  CHECK(t_sub(z2, three_quarters, half) == quarter);
  CHECK(t_add(z2, quarter, t_neg(z2, quarter)).is_zero());

  const TElem third = t_scalar_mul(z3, r_from_int(z3, 3, 4), ninth);
  CHECK(third == t_from_fraction(z3, r_one(z3, 1), 1));
  CHECK(t_scalar_mul(z3, r_one(z3, 4), ninth) == ninth);
  CHECK(t_scalar_mul(z3, r_from_int(z3, 9, 4), ninth).is_zero());
  CHECK_THROWS_AS(t_scalar_mul(z3, r_one(z3, 1), ninth), Error);
  CHECK(t_numerator_at(third, 3) == std::vector<Digit>{0, 0, 1});
}

TEST_CASE("torsion enumeration") {
  const RingCtx z3 = z(3);
  CHECK(t_enumerate_torsion(z3, 2).size() == 9);
  CHECK(t_enumerate_torsion(z3, 0).size() == 1);
  CHECK(t_enumerate_torsion(f4x(), 2).size() == 16);
}

TEST_CASE("ring laws on random elements") {
  std::mt19937_64 rng(7);
  for (const RingCtx& ctx : {z(2), z(3), z(5), f2x(), f4x()}) {
    auto rand = [&] {
      std::vector<Digit> d(6);
      for (auto& x : d) x = static_cast<Digit>(rng() % ctx.q());
      return RElem(d);
    };
    for (int i = 0; i < 200; ++i) {
      const RElem a = rand(), b = rand(), c = rand();
      CHECK(r_add(ctx, a, b) == r_add(ctx, b, a));
      CHECK(r_mul(ctx, a, b) == r_mul(ctx, b, a));
      CHECK(r_mul(ctx, r_mul(ctx, a, b), c) == r_mul(ctx, a, r_mul(ctx, b, c)));
      CHECK(r_mul(ctx, a, r_add(ctx, b, c)) == r_add(ctx, r_mul(ctx, a, b), r_mul(ctx, a, c)));
      CHECK(r_sub(ctx, r_add(ctx, a, b), b) == a);
      if (a.digit(0) != 0) CHECK(r_mul(ctx, a, r_unit_inverse(ctx, a)) == r_one(ctx, 6));
    }
  }
}
