#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "dvrdual/oracle.hpp"

using namespace dvrdual;
using oracle::Coords;
using oracle::Oracle;

TEST_CASE("oracle arithmetic matches the library") {
  std::mt19937_64 rng(3);
  for (const RingCtx& ctx : {RingCtx::mixed(2, 8), RingCtx::mixed(5, 8), RingCtx::equal(2, {0, 1}, 8),
                             RingCtx::equal(3, {1, 0, 1}, 8)}) {
    const Oracle orc(ctx);
    const unsigned k = 5;
    for (int i = 0; i < 300; ++i) {
      const std::uint64_t a = rng() % orc.size(k), b = rng() % orc.size(k);
      const RElem ra = orc.relem_of(a, k), rb = orc.relem_of(b, k);
      CHECK(orc.code_of(ra, k) == a);
      CHECK(orc.code_of(r_add(ctx, ra, rb), k) == orc.add(a, b, k));
      CHECK(orc.code_of(r_mul(ctx, ra, rb), k) == orc.mul(a, b, k));
      CHECK(orc.code_of(r_neg(ctx, ra), k) == orc.neg(a, k));
    }
    CHECK(orc.code_of(r_shift_up(r_one(ctx, k - 2), 2), k) == orc.pi_pow(2, k));
  }
}

TEST_CASE("element enumeration") {
  const Oracle z2(RingCtx::mixed(2, 8));
  const auto xs = z2.enum_elements({{2}, 0});
  REQUIRE(xs.size() == 4);
  for (std::uint64_t v = 0; v < 4; ++v) CHECK(xs[v] == Coords{v});
  CHECK(z2.enum_elements({{}, 0}).size() == 1);
  const Oracle f2(RingCtx::equal(2, {0, 1}, 8));
  CHECK(f2.enum_elements({{1, 1}, 0}).size() == 4);
  CHECK_THROWS_AS(z2.enum_elements({{}, 1}), Error);
  const Oracle tiny(RingCtx::mixed(2, 8), oracle::EnumBudget{16, 1 << 10, 0});
  CHECK_THROWS_AS(tiny.enum_elements({{5}, 0}), Error);
}

TEST_CASE("R-linear hom enumeration") {
  const Oracle z2(RingCtx::mixed(2, 8));
  CHECK(z2.enum_r_homs({{2}, 0}, 2).size() == 4);
  CHECK(z2.enum_r_homs({{}, 0}, 1).size() == 1);
  CHECK(z2.enum_r_homs({{1, 1}, 0}, 1).size() == 4);
  const InvariantFactors m{{1, 2}, 0};
  const auto xs = z2.enum_elements(m);
  for (const auto& h : z2.enum_r_homs(m, 2))
    for (const auto& x : xs)
      for (const auto& y : xs) CHECK(z2.eval(m, h, z2.m_add(m, x, y)) == (z2.eval(m, h, x) + z2.eval(m, h, y)) % 4);
}

TEST_CASE("additive hom enumeration") {
  const Oracle f2(RingCtx::equal(2, {0, 1}, 8));
  CHECK(f2.enum_z_homs({{1}, 0}).size() == 2);
  CHECK(f2.enum_z_homs({{}, 0}).size() == 1);
  const Oracle f4(RingCtx::equal(2, {1, 1, 1}, 8));
  CHECK(f4.enum_z_homs({{1}, 0}).size() == 4);
  CHECK_THROWS_AS(Oracle(RingCtx::mixed(2, 8)).enum_z_homs({{1}, 0}), Error);
}

TEST_CASE("cokernel brute force") {
  const RingCtx ctx = RingCtx::mixed(2, 8);
  const Oracle orc(ctx);
  const auto a = orc.cokernel_bruteforce(matrix_from_ints(ctx, {{2, 0}, {0, 4}}, 8));
  CHECK(a.count == 8);
  CHECK(a.by_order == std::vector<std::uint64_t>{1, 3, 4});
  CHECK(orc.cokernel_bruteforce(matrix_from_ints(ctx, {{1, 0}, {0, 1}}, 8)).count == 1);
  const auto b = orc.cokernel_bruteforce(matrix_from_ints(ctx, {{2, 2}, {2, 4}}, 8));
  CHECK(b.count == 4);
  CHECK(b.by_order == std::vector<std::uint64_t>{1, 3});
  CHECK_THROWS_AS(orc.cokernel_bruteforce(matrix_from_ints(ctx, {{2, 0}}, 8)), Error);
}

TEST_CASE("submodule homs are well defined") {
  // Brute force: every assignment of values to the generators that extends to
  // an additive, R-linear map on the span must be listed, and nothing else.
  const RingCtx ctx = RingCtx::mixed(2, 8);
  const Oracle orc(ctx);
  const InvariantFactors m{{1, 2}, 0};
  const std::vector<Coords> gens{{1, 2}, {0, 2}};
  const unsigned level = 2;
  const auto listed = orc.enum_submodule_homs(m, gens, level);
  const auto span = orc.span(m, gens);
  std::size_t consistent = 0;
  for (std::uint64_t v0 = 0; v0 < 4; ++v0)
    for (std::uint64_t v1 = 0; v1 < 4; ++v1) {
      // Every r0 g0 + r1 g1 must get one value.
      std::map<Coords, std::uint64_t> value;
      bool ok = true;
      for (std::uint64_t r0 = 0; r0 < 4 && ok; ++r0)
        for (std::uint64_t r1 = 0; r1 < 4 && ok; ++r1) {
          const Coords x = orc.m_add(m, orc.m_scale(m, r0, gens[0]), orc.m_scale(m, r1, gens[1]));
          const std::uint64_t v = (r0 * v0 + r1 * v1) % 4;
          const auto [it, fresh] = value.emplace(x, v);
          ok = fresh || it->second == v;
        }
      if (!ok) continue;
      ++consistent;
      CHECK(std::find(listed.begin(), listed.end(), std::vector<std::uint64_t>{v0, v1}) != listed.end());
    }
  CHECK(listed.size() == consistent);
  CHECK(span.size() == 4);
  CHECK(listed.size() == span.size());
}
