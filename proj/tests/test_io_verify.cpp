#include <doctest.h>

#include "dvrdual/io.hpp"
#include "dvrdual/verify.hpp"

using namespace dvrdual;
using nlohmann::json;

TEST_CASE("ring specs") {
  const RingCtx f4 = io::parse_ring("mode=equal,p=2,e=2,poly=1,1,1,prec=12");
  CHECK(f4.q() == 4);
  CHECK(f4.default_precision() == 12);
  CHECK(io::format_ring(f4) == "mode=equal,p=2,e=2,poly=1,1,1,prec=12");
  const RingCtx z3 = io::parse_ring("mode=mixed,p=3");
  CHECK(z3.default_precision() == 16);
  CHECK(io::format_ring(z3) == "mode=mixed,p=3,e=1,prec=16");
  CHECK(io::parse_ring("mode=equal,p=2").q() == 2);
  CHECK_THROWS_AS(io::parse_ring("mode=mixed,p=3,e=2"), Error);
  CHECK_THROWS_AS(io::parse_ring("mode=equal,p=2,e=2"), Error);
  CHECK_THROWS_AS(io::parse_ring("p=2"), Error);
  CHECK_THROWS_AS(io::parse_ring("mode=odd,p=2"), Error);
  CHECK_THROWS_AS(io::parse_ring("mode=mixed,p=x"), Error);
  CHECK_THROWS_AS(io::parse_ring("mode=mixed,p=2,color=red"), Error);
}

TEST_CASE("module specs") {
  CHECK(io::parse_module("[1,2];f=1") == InvariantFactors{{1, 2}, 1});
  CHECK(io::parse_module("[]") == InvariantFactors{{}, 0});
  CHECK(io::parse_module("[2, 1]") == InvariantFactors{{1, 2}, 0});
  CHECK(io::format_module({{1, 2}, 1}) == "[1,2];f=1");
  CHECK_THROWS_AS(io::parse_module("1,2"), Error);
  CHECK_THROWS_AS(io::parse_module("[0]"), Error);
  CHECK_THROWS_AS(io::parse_module("[1];g=2"), Error);
}

TEST_CASE("element formats") {
  const RingCtx z2 = RingCtx::mixed(2, 8);
  CHECK(io::relem_from_json(z2, 5, 4) == RElem({1, 0, 1, 0}));
  CHECK(io::relem_from_json(z2, "101", 4) == RElem({1, 0, 1, 0}));
  CHECK(io::relem_from_json(z2, "1 0 1", 3) == RElem({1, 0, 1}));
  CHECK(io::relem_from_json(z2, json::array({1, 1}), 2) == RElem({1, 1}));
  CHECK_THROWS_AS(io::relem_from_json(z2, "12", 2), Error);
  CHECK_THROWS_AS(io::relem_from_json(z2, json::object(), 2), Error);

  const TElem t = io::telem_from_json(z2, json{{"n", 3}, {"num", 2}});
  CHECK(t.level() == 2);
  CHECK(io::to_json(t) == json{{"n", 2}, {"num", {1, 0}}});

  const InvariantFactors m{{1, 2}, 1};
  const ModElem x = io::elem_from_json(z2, m, json{{"torsion", {1, 3}}, {"free", {7}}}, 4);
  CHECK(io::to_json(x) == json{{"torsion", {{1}, {1, 1}}}, {"free", {{1, 1, 1, 0}}}});
  CHECK_THROWS_AS(io::elem_from_json(z2, m, json{{"torsion", {1}}}, 4), Error);
  CHECK(io::elem_from_json(z2, {{2}, 0}, 3, 4).torsion[0] == RElem({1, 1}));

  const DualElem phi = io::dual_from_json(z2, m, json{{"torsion", {1, 2}}, {"t", {{{"n", 1}, {"num", 1}}}}});
  CHECK(io::to_json(phi)["t"][0] == json{{"n", 1}, {"num", {1}}});
}

TEST_CASE("matrix files") {
  const auto mf = io::matrix_from_json(json{{"ring", "mode=mixed,p=2,prec=8"}, {"rows", {{2, 0}, {0, 4}}}});
  CHECK(snf(mf.ring, mf.matrix).factors == InvariantFactors{{1, 2}, 0});
  const auto over = io::matrix_from_json(json{{"rows", {{3}}}}, RingCtx::mixed(3, 4));
  CHECK(snf(over.ring, over.matrix).factors == InvariantFactors{{1}, 0});
  CHECK_THROWS_AS(io::matrix_from_json(json{{"rows", {{3}}}}), Error);
  CHECK_THROWS_AS(io::matrix_from_json(json{{"ring", "mode=mixed,p=2"}, {"rows", {{1, 2}, {3}}}}), Error);
  CHECK_THROWS_AS(io::load_matrix_file("/nonexistent/matrix.json"), Error);
}

TEST_CASE("verify configuration") {
  const auto cfg = verify::config_from_json(json{{"rings", {"mode=mixed,p=5"}}, {"seed", 9}, {"suites", {"ring-laws"}}});
  CHECK(cfg.rings == std::vector<std::string>{"mode=mixed,p=5"});
  CHECK(cfg.seed == 9);
  CHECK(cfg.fault == verify::Fault::None);
  CHECK(verify::parse_fault("snf-pivot") == verify::Fault::SnfPivot);
  CHECK_THROWS_AS(verify::parse_fault("bogus"), Error);
  CHECK_THROWS_AS(verify::config_from_json(json{{"suites", {"no-such-suite"}}}), Error);
  CHECK(verify::default_config().rings.size() == 4);
}

TEST_CASE("verify runs") {
  auto cfg = verify::default_config();
  cfg.suites = std::vector<std::string>{};
  const auto empty = verify::run_suite(cfg);
  CHECK(empty.passed());
  CHECK(empty.entries.empty());

  cfg.suites = std::vector<std::string>{"ring-laws", "zdelta-predicate"};
  const auto a = verify::run_suite(cfg);
  CHECK(a.passed());
  CHECK(a.entries.size() == 5);
  const auto b = verify::run_suite(cfg);
  CHECK(verify::report_json(a, false).dump() == verify::report_json(b, false).dump());
  const json j = verify::report_json(a);
  CHECK(j["schema"] == "dvrdual-verify/1");
  CHECK(j["status"] == "pass");
  CHECK(j.contains("timestamps"));
  CHECK_FALSE(verify::report_json(a, false).contains("timestamps"));

  cfg.suites = std::vector<std::string>{"snf-invariance"};
  cfg.fault = verify::Fault::SnfPivot;
  const auto bad = verify::run_suite(cfg);
  CHECK_FALSE(bad.passed());
  CHECK(bad.entries.at(0).suite == "snf-invariance");
  CHECK_FALSE(bad.entries.at(0).counterexample.is_null());
}
