#include <doctest.h>

#include "dvrdual/duality.hpp"
#include "dvrdual/oracle.hpp"

using namespace dvrdual;

namespace {

ModElem tors(std::vector<RElem> t) { return ModElem{std::move(t), {}}; }

TElem frac(const RingCtx& ctx, long long a, unsigned n) { return t_from_fraction(ctx, r_from_int(ctx, a, n), n); }

}  // namespace

TEST_CASE("dual structure") {
  const DualModule d = dual_structure({{1, 2}, 1});
  CHECK(d.torsion_exps == std::vector<unsigned>{1, 2});
  CHECK(d.t_copies == 1);
  CHECK(dual_structure({{}, 0}).torsion_exps.empty());
  CHECK(dual_structure({{3}, 0}).torsion_exps == std::vector<unsigned>{3});
  CHECK(dual_structure({{3}, 0}).t_copies == 0);
}

TEST_CASE("pairing") {
  const RingCtx z3 = RingCtx::mixed(3, 8);
  const InvariantFactors m{{2}, 0};
  const DualModule d = dual_structure(m);
  const DualElem phi{{r_from_int(z3, 2, 2)}, {}};
  CHECK(eval_pairing(z3, d, phi, tors({r_from_int(z3, 6, 2)})) == frac(z3, 1, 1));
  CHECK(eval_pairing(z3, d, dual_zero(z3, d), tors({r_from_int(z3, 6, 2)})).is_zero());

  const InvariantFactors f{{}, 1};
  const DualElem psi{{}, {frac(z3, 1, 1)}};
  const ModElem two{{}, {r_from_int(z3, 2, 4)}};
  CHECK(eval_pairing(z3, dual_structure(f), psi, two) == frac(z3, 2, 1));
}

TEST_CASE("i_x identification") {
  const RingCtx z5 = RingCtx::mixed(5, 4);
  CHECK(r_to_code(z5, i_x_forward(z5, 2, frac(z5, 7, 2))) == 7);
  CHECK(i_x_forward(z5, 2, TElem{}).is_zero_digits());
  const RingCtx z2 = RingCtx::mixed(2, 4);
  CHECK(r_to_code(z2, i_x_forward(z2, 3, frac(z2, 1, 1))) == 4);
  CHECK_THROWS_AS(i_x_forward(z2, 1, frac(z2, 1, 2)), Error);
  for (unsigned b = 0; b < 8; ++b) CHECK(r_to_code(z2, i_x_forward(z2, 3, i_x_inverse(z2, 3, r_from_int(z2, b, 3)))) == b);
}

TEST_CASE("dual of a hom") {
  const RingCtx z2 = RingCtx::mixed(2, 4);
  const HomMatrix inf{{{1}, 0}, {{2}, 0}, {r_from_int(z2, 2, 2)}};
  const HomMatrix dh = dual_hom(z2, inf);
  CHECK(apply_hom(z2, dh, tors({r_from_int(z2, 3, 2)})) == tors({r_one(z2, 1)}));
  const DualElem pulled = apply_dual_hom(z2, inf, DualElem{{r_from_int(z2, 3, 2)}, {}});
  CHECK(pulled.torsion[0] == r_one(z2, 1));
  // The pairing identity over all pairs.
  for (unsigned b = 0; b < 4; ++b) {
    const DualElem phi{{r_from_int(z2, b, 2)}, {}};
    const DualElem back = apply_dual_hom(z2, inf, phi);
    for (unsigned m = 0; m < 2; ++m) {
      const ModElem x = tors({r_from_int(z2, m, 1)});
      CHECK(eval_pairing(z2, dual_structure({{1}, 0}), back, x) ==
            eval_pairing(z2, dual_structure({{2}, 0}), phi, apply_hom(z2, inf, x)));
    }
  }
  const InvariantFactors m{{1, 2}, 0};
  CHECK(dual_hom(z2, hom_identity(z2, m, 1)) == hom_identity(z2, m, 1));
  CHECK(dual_hom(z2, hom_zero(z2, m, m, 1)) == hom_zero(z2, m, m, 1));
  CHECK_THROWS_AS(dual_hom(z2, hom_identity(z2, {{}, 1}, 4)), Error);
}

TEST_CASE("inf/res square") {
  const RingCtx f2 = RingCtx::equal(2, {0, 1}, 4);
  CHECK(check_inf_res_square(f2, 1, 2, DualElem{{RElem({1, 1})}, {}}));
  CHECK(check_inf_res_square(f2, 2, 2, DualElem{{RElem({1, 1})}, {}}));
  const RingCtx z2 = RingCtx::mixed(2, 4);
  CHECK(check_inf_res_square(z2, 1, 3, DualElem{{r_from_int(z2, 5, 3)}, {}}));
  const HomMatrix inf{{{1}, 0}, {{3}, 0}, {inf_map(z2, 1, 3, r_one(z2, 1))}};
  CHECK(apply_dual_hom(z2, inf, DualElem{{r_from_int(z2, 5, 3)}, {}}).torsion[0] == r_one(z2, 1));
}

TEST_CASE("double dual") {
  const RingCtx z2 = RingCtx::mixed(2, 4);
  CHECK(double_dual_map(z2, {{2}, 0}, tors({r_from_int(z2, 3, 2)})) == tors({r_from_int(z2, 3, 2)}));
  CHECK(double_dual_map(z2, {{2}, 0}, tors({r_zero(z2, 2)})) == tors({r_zero(z2, 2)}));
  const RingCtx z3 = RingCtx::mixed(3, 4);
  const ModElem two{{}, {r_from_int(z3, 2, 4)}};
  CHECK(double_dual_map(z3, {{}, 1}, two) == two);
  const InvariantFactors mixed{{1, 3}, 2};
  const ModElem x{{r_one(z3, 1), r_from_int(z3, 20, 3)}, {r_from_int(z3, 50, 5), r_from_int(z3, -7, 5)}};
  CHECK(double_dual_map(z3, mixed, x) == x);
  for (const auto& y : all_elements(z3, {{1, 2}, 0})) CHECK(double_dual_map(z3, {{1, 2}, 0}, y) == y);
}

TEST_CASE("endomorphisms of T") {
  const RingCtx z3 = RingCtx::mixed(3, 4);
  const TElem ninth = frac(z3, 1, 2);
  CHECK(t_endo_apply(z3, {r_from_int(z3, 2, 4)}, ninth) == frac(z3, 2, 2));
  CHECK(t_endo_apply(z3, {r_one(z3, 4)}, ninth) == ninth);
  CHECK(t_endo_apply(z3, {r_from_int(z3, 3, 4)}, ninth) == frac(z3, 1, 1));
}

TEST_CASE("extension of functionals") {
  const RingCtx z2 = RingCtx::mixed(2, 4);
  const InvariantFactors m{{2}, 0};
  const ModElem two = tors({r_from_int(z2, 2, 2)});
  const DualElem psi = extend_hom(z2, m, {two}, {frac(z2, 1, 1)});
  CHECK(eval_pairing(z2, dual_structure(m), psi, tors({r_one(z2, 2)})) == frac(z2, 1, 2));
  CHECK(extend_hom(z2, m, {two}, {TElem{}}) == dual_zero(z2, dual_structure(m)));
  const ModElem one = tors({r_one(z2, 2)});
  const DualElem same = extend_hom(z2, m, {one}, {frac(z2, 3, 2)});
  CHECK(same.torsion[0] == r_from_int(z2, 3, 2));
  // 2 * (1/4) = 1/2, so a value of 1/4 on 2 is inconsistent with order 2.
  CHECK_THROWS_AS(extend_hom(z2, m, {two}, {frac(z2, 1, 2)}), Error);
  CHECK(t_divide_by_pi_power(z2, frac(z2, 1, 1), 1) == frac(z2, 1, 2));
}

TEST_CASE("dual elements count equals the module") {
  for (const RingCtx& ctx : {RingCtx::mixed(2, 4), RingCtx::mixed(3, 4), RingCtx::equal(2, {1, 1, 1}, 4)}) {
    const oracle::Oracle orc(ctx);
    for (const InvariantFactors& m : {InvariantFactors{{1}, 0}, InvariantFactors{{1, 2}, 0}, InvariantFactors{{}, 0}}) {
      const auto duals = all_dual_elements(ctx, dual_structure(m));
      CHECK(duals.size() == module_cardinality(ctx, m));
      CHECK(orc.enum_r_homs(m, std::max(1u, m.max_exponent())).size() == duals.size());
    }
  }
}
