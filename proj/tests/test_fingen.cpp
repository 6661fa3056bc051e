#include <doctest.h>

#include <random>
#include <set>

#include "dvrdual/fingen.hpp"
#include "dvrdual/oracle.hpp"

using namespace dvrdual;

namespace {

RingCtx z2(unsigned prec = 8) { return RingCtx::mixed(2, prec); }

ModElem tors(std::vector<RElem> t) { return ModElem{std::move(t), {}}; }

}  // namespace

TEST_CASE("invariant factors") {
  CHECK(make_factors({2, 1}, 0) == InvariantFactors{{1, 2}, 0});
  CHECK_THROWS_AS(make_factors({0, 1}, 0), Error);
  CHECK_THROWS_AS((InvariantFactors{{2, 1}, 0}.validate()), Error);
  CHECK(module_cardinality(RingCtx::mixed(3, 4), {{1, 2}, 0}) == 27);
  CHECK(module_cardinality(z2(), {{}, 0}) == 1);
  CHECK_THROWS_AS(module_cardinality(z2(), {{}, 1}), Error);
}

TEST_CASE("module arithmetic") {
  const RingCtx ctx = z2();
  const InvariantFactors m{{2}, 0};
  const ModElem three = tors({r_from_int(ctx, 3, 2)});
  const ModElem one = tors({r_from_int(ctx, 1, 2)});
  CHECK(elem_is_zero(elem_add(ctx, m, three, one)));
  CHECK(elem_scalar_mul(ctx, m, r_one(ctx, 8), three) == three);

  const RingCtx z3 = RingCtx::mixed(3, 4);
  const InvariantFactors m12{{1, 2}, 0};
  const ModElem x = tors({r_from_int(z3, 1, 1), r_from_int(z3, 4, 2)});
  const ModElem two_x = elem_scalar_mul(z3, m12, r_from_int(z3, 2, 4), x);
  CHECK(two_x == tors({r_from_int(z3, 2, 1), r_from_int(z3, 8, 2)}));
  CHECK_THROWS_AS(validate_elem(z3, m12, tors({r_from_int(z3, 1, 2), r_from_int(z3, 4, 2)})), Error);
}

TEST_CASE("all_elements order and count") {
  const RingCtx ctx = z2();
  const auto xs = all_elements(ctx, {{2}, 0});
  REQUIRE(xs.size() == 4);
  for (unsigned v = 0; v < 4; ++v) CHECK(r_to_code(ctx, xs[v].torsion[0]) == v);
  CHECK(all_elements(ctx, {{}, 0}).size() == 1);
  CHECK(all_elements(RingCtx::equal(2, {0, 1}, 4), {{1, 1}, 0}).size() == 4);
}

TEST_CASE("inf and res") {
  const RingCtx ctx = z2();
  CHECK(r_to_code(ctx, inf_map(ctx, 1, 3, r_one(ctx, 1))) == 4);
  CHECK(inf_map(ctx, 2, 2, r_from_int(ctx, 3, 2)) == r_from_int(ctx, 3, 2));
  const RingCtx f2 = RingCtx::equal(2, {0, 1}, 4);
  CHECK(inf_map(f2, 1, 2, r_one(f2, 1)) == RElem({0, 1}));
  CHECK(r_to_code(ctx, res_map(ctx, 3, 1, r_from_int(ctx, 5, 3))) == 1);
  CHECK(res_map(ctx, 2, 2, r_from_int(ctx, 3, 2)) == r_from_int(ctx, 3, 2));
  const RingCtx z3 = RingCtx::mixed(3, 4);
  CHECK(r_to_code(z3, res_map(z3, 2, 1, r_from_int(z3, 7, 2))) == 1);
  CHECK_THROWS_AS(inf_map(ctx, 3, 1, r_one(ctx, 3)), Error);
}

TEST_CASE("smith normal form examples") {
  const RingCtx ctx = z2(8);
  CHECK(snf(ctx, matrix_from_ints(ctx, {{2, 0}, {0, 4}}, 8)).factors == InvariantFactors{{1, 2}, 0});
  CHECK(snf(ctx, matrix_from_ints(ctx, {{2, 2}, {2, 4}}, 8)).factors == InvariantFactors{{1, 1}, 0});
  CHECK(snf(ctx, matrix_from_ints(ctx, {{2, 0}}, 8)).factors == InvariantFactors{{1}, 1});
  CHECK(snf(ctx, matrix_from_ints(ctx, {{1, 0}, {0, 1}}, 8)).factors == InvariantFactors{{}, 0});
}

TEST_CASE("smith normal form zero residual") {
  const RingCtx ctx = z2(4);
  // The residual 17 - 1 = 16 vanishes at precision 4.
  const PresMatrix m = matrix_from_ints(ctx, {{1, 1}, {1, 17}}, 4);
  CHECK(snf(ctx, m).factors == InvariantFactors{{}, 1});
  CHECK(snf(ctx, matrix_from_ints(ctx, {{16}}, 4)).factors == InvariantFactors{{}, 1});
  SnfOptions reject;
  reject.zero_residual = SnfOptions::ZeroResidual::Reject;
  CHECK_THROWS_AS(snf(ctx, m, reject), Error);
  // Structurally zero entries are fine.
  CHECK(snf(ctx, matrix_from_ints(ctx, {{2, 0}}, 4), reject).factors == InvariantFactors{{1}, 1});
}

TEST_CASE("smith normal form replays its operations") {
  const RingCtx ctx = RingCtx::mixed(3, 8);
  const PresMatrix m = matrix_from_ints(ctx, {{3, 6, 9}, {2, 4, 0}}, 8);
  const SnfResult r = snf(ctx, m);
  const PresMatrix d = replay_ops(ctx, m, r.row_ops, r.col_ops);
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      if (i != j) CHECK(d.at(i, j).is_zero_digits());
}

TEST_CASE("smith normal form agrees with the cokernel oracle") {
  std::mt19937_64 rng(11);
  for (const RingCtx& ctx : {z2(10), RingCtx::mixed(3, 10), RingCtx::equal(2, {0, 1}, 10)}) {
    const oracle::Oracle orc(ctx);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t rows = 1 + rng() % 3, cols = 1 + rng() % 2;
      std::vector<RElem> entries;
      for (std::size_t k = 0; k < rows * cols; ++k) {
        std::vector<Digit> d(10, 0);
        const unsigned v = rng() % 3;
        for (unsigned i = v; i < 10; ++i) d[i] = static_cast<Digit>(rng() % ctx.q());
        entries.emplace_back(d);
      }
      const PresMatrix m(rows, cols, entries);
      const InvariantFactors f = snf(ctx, m).factors;
      try {
        const auto cc = orc.cokernel_bruteforce(m);
        CHECK(f.free_rank == 0);
        std::uint64_t card = 1;
        for (unsigned e : f.torsion_exps)
          for (unsigned i = 0; i < e; ++i) card *= ctx.q();
        CHECK(cc.count == card);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::InfiniteCokernel) CHECK(f.free_rank > 0);
        else CHECK(e.code() == ErrorCode::BudgetExceeded);
      }
    }
  }
}

TEST_CASE("hom spaces") {
  const RingCtx ctx = z2();
  CHECK(hom_space(ctx, {{1, 2}, 0}, {{2}, 0}, 1).structure == InvariantFactors{{1, 2}, 0});
  CHECK(all_homs(ctx, {{1, 2}, 0}, {{2}, 0}).size() == 8);
  CHECK(hom_space(ctx, {{1}, 0}, {{}, 1}, 4).structure == InvariantFactors{{}, 0});
  CHECK(hom_space(ctx, {{}, 1}, {{3}, 0}, 4).structure == InvariantFactors{{3}, 0});
}

TEST_CASE("hom application") {
  const RingCtx ctx = z2();
  const InvariantFactors m{{1, 2}, 0};
  const auto x = tors({r_one(ctx, 1), r_from_int(ctx, 3, 2)});
  CHECK(apply_hom(ctx, hom_identity(ctx, m, 1), x) == x);
  CHECK(elem_is_zero(apply_hom(ctx, hom_zero(ctx, m, {{2}, 0}, 1), x)));
  const HomMatrix inf{{{1}, 0}, {{2}, 0}, {r_from_int(ctx, 2, 2)}};
  validate_hom(ctx, inf);
  CHECK(apply_hom(ctx, inf, tors({r_one(ctx, 1)})) == tors({r_from_int(ctx, 2, 2)}));
  const HomMatrix bad{{{1}, 0}, {{2}, 0}, {r_from_int(ctx, 1, 2)}};
  CHECK_THROWS_AS(validate_hom(ctx, bad), Error);
}

TEST_CASE("every enumerated hom is linear and distinct") {
  const RingCtx ctx = RingCtx::mixed(3, 4);
  const InvariantFactors m{{1, 2}, 0}, n{{2}, 0};
  const auto homs = all_homs(ctx, m, n);
  const auto xs = all_elements(ctx, m);
  std::set<std::vector<std::vector<Digit>>> tables;
  for (const auto& h : homs) {
    std::vector<std::vector<Digit>> table;
    for (const auto& x : xs) {
      table.push_back(apply_hom(ctx, h, x).torsion[0].digits());
      for (const auto& y : xs)
        CHECK(apply_hom(ctx, h, elem_add(ctx, m, x, y)) ==
              elem_add(ctx, n, apply_hom(ctx, h, x), apply_hom(ctx, h, y)));
    }
    tables.insert(table);
  }
  CHECK(tables.size() == homs.size());
  CHECK(homs.size() == 27);
}
