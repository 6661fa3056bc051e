#include <doctest.h>

#include <set>

#include "dvrdual/flood.hpp"
#include "dvrdual/oracle.hpp"

using namespace dvrdual;

namespace {

RingCtx f2x(unsigned prec = 8) { return RingCtx::equal(2, {0, 1}, prec); }
RingCtx f4x(unsigned prec = 8) { return RingCtx::equal(2, {1, 1, 1}, prec); }

const CircleElem half{1, 1};

}  // namespace

TEST_CASE("circle arithmetic") {
  CHECK(circle_from(2, 2, 2) == half);
  CHECK(circle_from(3, 9, 2) == CircleElem{});
  CHECK(circle_add(2, half, half) == CircleElem{});
  CHECK(circle_add(2, CircleElem{2, 1}, half) == CircleElem{2, 3});
  CHECK(circle_scale(3, 4, CircleElem{1, 1}) == CircleElem{1, 1});
}

TEST_CASE("i over F_2 and F_4") {
  const RingCtx f2 = f2x();
  CHECK(i_iso(f2, {half}) == FqElem{{1}});
  CHECK(i_iso(f2, {CircleElem{}}) == FqElem{{0}});
  const RingCtx f4 = f4x();
  CHECK(i_iso(f4, {CircleElem{}, half}) == FqElem{{1, 0}});
  CHECK(i_iso(f4, {half, half}) == FqElem{{0, 1}});
  CHECK_THROWS_AS(i_iso(f4, {CircleElem{2, 1}, half}), Error);
  CHECK_THROWS_AS(i_iso(f4, {half}), Error);
}

TEST_CASE("i is an F_q-linear bijection") {
  for (const RingCtx& ctx : {f2x(), f4x()}) {
    std::set<std::vector<CircleElem>> seen;
    for (Digit c = 0; c < ctx.q(); ++c) {
      const auto psi = i_inv(ctx, ctx.unpack(c));
      seen.insert(psi);
      CHECK(ctx.pack(i_iso(ctx, psi)) == c);
      for (Digit s = 0; s < ctx.q(); ++s) {
        // (s . psi)(t^j) = psi(s t^j); in coordinates it is c * s.
        CHECK(ctx.pack(i_iso(ctx, i_inv(ctx, ctx.unpack(ctx.dmul(s, c))))) == ctx.dmul(s, c));
      }
    }
    CHECK(seen.size() == ctx.q());
  }
}

TEST_CASE("ell examples") {
  const RingCtx ctx = f2x();
  CHECK(ell(ctx, make_functional(ctx, {1})) == TElem::from_canonical({1}));
  CHECK(ell(ctx, make_functional(ctx, {0, 1})) == TElem::from_canonical({1, 0}));
  CHECK(ell(ctx, make_functional(ctx, {})).is_zero());
  CHECK(ell_inv(ctx, TElem::from_canonical({1})) == make_functional(ctx, {1}));
  CHECK(ell_inv(ctx, TElem{}) == make_functional(ctx, {}));
  CHECK(ell_inv(ctx, TElem::from_canonical({1, 1})) == make_functional(ctx, {1, 1}));
  CHECK(make_functional(ctx, {1, 0, 0}).coeffs == std::vector<Digit>{1});
  CHECK_THROWS_AS(ell(RingCtx::mixed(2, 4), make_functional(RingCtx::mixed(2, 4), {1})), Error);
}

TEST_CASE("ell is R-linear on small supports") {
  for (const RingCtx& ctx : {f2x(), f4x()}) {
    const Digit q = ctx.q();
    for (Digit code = 0; code < q * q * q; ++code) {
      const ZDualFunctional phi = make_functional(ctx, {code % q, code / q % q, code / q / q});
      CHECK(ell_inv(ctx, ell(ctx, phi)) == phi);
      CHECK(from_raw(ctx, to_raw(ctx, phi)) == phi);
      for (Digit h = 1; h < q; ++h)
        for (unsigned k = 0; k <= 3; ++k) {
          std::vector<Digit> d(8, 0);
          d[k] = h;
          const RElem r(d);
          const ZDualFunctional rphi = functional_scalar_mul(ctx, r, phi);
          CHECK(ell(ctx, rphi) == t_scalar_mul(ctx, r, ell(ctx, phi)));
          CHECK(from_raw(ctx, raw_scalar_mul(ctx, r, to_raw(ctx, phi))) == rphi);
        }
    }
  }
}

TEST_CASE("adjoint transport") {
  const RingCtx ctx = f2x();
  const InvariantFactors m{{1}, 0};
  const ZFunctionalTable table = adjoint_transport(ctx, m, DualElem{{RElem({1})}, {}});
  REQUIRE(table.values.size() == 2);
  CHECK(table.values[0] == CircleElem{});
  CHECK(table.values[1] == half);
  for (const auto& v : adjoint_transport(ctx, m, DualElem{{RElem({0})}, {}}).values) CHECK(v == CircleElem{});
}

TEST_CASE("transport is a bijection onto the additive dual") {
  for (const RingCtx& ctx : {f2x(), f4x()}) {
    const oracle::Oracle orc(ctx);
    for (const InvariantFactors& m : {InvariantFactors{{1}, 0}, InvariantFactors{{1, 2}, 0}, InvariantFactors{{2}, 0}}) {
      std::set<std::vector<CircleElem>> images;
      const auto duals = all_dual_elements(ctx, dual_structure(m));
      for (const auto& psi : duals) {
        const ZFunctionalTable t = adjoint_transport(ctx, m, psi);
        for (std::size_t a = 0; a < t.elements.size(); ++a)
          for (std::size_t b = 0; b < t.elements.size(); ++b) {
            const ModElem s = elem_add(ctx, m, t.elements[a], t.elements[b]);
            CHECK(transport_value(ctx, m, psi, s) == circle_add(ctx.p(), t.values[a], t.values[b]));
          }
        images.insert(t.values);
      }
      CHECK(images.size() == duals.size());
      CHECK(duals.size() == module_cardinality(ctx, m));
      CHECK(orc.enum_z_homs(m).size() == duals.size());
    }
  }
}

TEST_CASE("torsion counts") {
  CHECK(torsion_count(RingCtx::mixed(3, 4), 2).count == 9);
  CHECK(torsion_count(RingCtx::mixed(3, 4), 2).holds());
  CHECK(torsion_count(RingCtx::mixed(3, 4), 0).count == 1);
  CHECK(torsion_count(RingCtx::mixed(2, 4), 3).count == 8);
  for (std::uint32_t p : {2u, 3u, 5u})
    for (unsigned n = 0; n <= 6; ++n) CHECK(torsion_count(RingCtx::mixed(p, 4), n).holds());
  CHECK_THROWS_AS(torsion_count(f2x(), 2), Error);
}

TEST_CASE("Z[delta] predicate") {
  CHECK(std::holds_alternative<ZDeltaRing>(zdelta_validate(-1, 0)));
  CHECK(std::holds_alternative<ZDeltaRing>(zdelta_validate(-1, 1)));
  CHECK(std::holds_alternative<ZDeltaRejection>(zdelta_validate(-1, 2)));
  CHECK(std::holds_alternative<ZDeltaRejection>(zdelta_validate(0, 0)));
  CHECK(std::holds_alternative<ZDeltaRejection>(zdelta_validate(1, 0)));
  for (long long a = -10; a <= -1; ++a)
    for (long long b = -7; b <= 7; ++b)
      CHECK(std::holds_alternative<ZDeltaRing>(zdelta_validate(a, b)) == (b * b + 4 * a < 0));
}

TEST_CASE("Z[delta] arithmetic") {
  const ZDeltaRing gauss = std::get<ZDeltaRing>(zdelta_validate(-1, 0));
  // (1 + i)^2 = 2i.
  CHECK(gauss.mul({1, 1}, {1, 1}) == ZDeltaElem{0, 2});
  CHECK(gauss.norm({3, 4}) == 25);
  const ZDeltaRing eis = std::get<ZDeltaRing>(zdelta_validate(-1, 1));
  // delta^2 = delta - 1.
  CHECK(eis.mul({0, 1}, {0, 1}) == ZDeltaElem{-1, 1});
  const ZDeltaElem u{2, -3}, v{-1, 5};
  CHECK(eis.norm(eis.mul(u, v)) == eis.norm(u) * eis.norm(v));
  CHECK(eis.add(u, eis.neg(u)) == ZDeltaElem{});
  CHECK_THROWS_AS(gauss.mul({1LL << 40, 0}, {1LL << 40, 0}), Error);
}
