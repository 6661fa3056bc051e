// dvrdual: command-line front end for the duality library.
//
// Exit status: 0 success (or a passing check), 1 a property failed,
// 2 usage or parse error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dvrdual/duality.hpp"
#include "dvrdual/flood.hpp"
#include "dvrdual/io.hpp"
#include "dvrdual/verify.hpp"

using namespace dvrdual;
using nlohmann::json;

namespace {

struct Common {
  std::string ring;
  std::string module;
  std::string format = "json";
  std::string out;
};

json parse_json_arg(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    throw Error(ErrorCode::Parse, std::string("--") + what + " is not valid JSON: " + text);
  }
}

RingCtx need_ring(const Common& c) {
  if (c.ring.empty()) throw Error(ErrorCode::Parse, "--ring is required");
  return io::parse_ring(c.ring);
}

InvariantFactors need_module(const Common& c) {
  if (c.module.empty()) throw Error(ErrorCode::Parse, "--module is required");
  return io::parse_module(c.module);
}

void text_lines(std::ostream& os, const json& j, const std::string& prefix) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.value().is_object() && !it.value().empty())
        text_lines(os, it.value(), prefix + it.key() + ".");
      else
        os << prefix << it.key() << ": " << it.value().dump() << "\n";
    }
  } else {
    os << j.dump() << "\n";
  }
}

void emit(const Common& c, const json& j, const std::string& text = {}) {
  std::ostringstream body;
  if (c.format == "text") {
    if (text.empty())
      text_lines(body, j, "");
    else
      body << text;
  } else {
    body << j.dump(2) << "\n";
  }
  if (c.out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(c.out);
    if (!f) throw Error(ErrorCode::Parse, "cannot write " + c.out);
    f << body.str();
  }
}

void add_common(CLI::App* sub, Common& c, bool module) {
  sub->add_option("--ring", c.ring, "ring spec, e.g. mode=mixed,p=2,e=1,prec=8");
  if (module) sub->add_option("--module", c.module, "module spec, e.g. [1,2];f=1");
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "text"}));
  sub->add_option("--out", c.out, "write output to this file instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact duality computations for modules over compact DVRs"};
  app.require_subcommand(1);

  Common common;
  int status = 0;
  std::function<void()> action;

  // snf
  auto* snf_cmd = app.add_subcommand("snf", "invariant factors of a presentation matrix (rows are relations)");
  std::string matrix_path;
  bool reject_zero = false;
  add_common(snf_cmd, common, false);
  snf_cmd->add_option("--matrix", matrix_path, "matrix JSON file")->required();
  snf_cmd->add_flag("--reject-vanishing", reject_zero,
                    "fail when a residual block vanishes only modulo the working precision");
  snf_cmd->callback([&] {
    action = [&] {
      const std::optional<RingCtx> ring =
          common.ring.empty() ? std::nullopt : std::optional<RingCtx>(io::parse_ring(common.ring));
      const auto mf = io::load_matrix_file(matrix_path, ring);
      SnfOptions opts;
      if (reject_zero) opts.zero_residual = SnfOptions::ZeroResidual::Reject;
      const SnfResult r = snf(mf.ring, mf.matrix, opts);
      emit(common, json{{"ring", io::format_ring(mf.ring)},
                        {"module", io::format_module(r.factors)},
                        {"factors", io::to_json(r.factors)},
                        {"pivot_valuations", r.pivot_valuations},
                        {"row_ops", r.row_ops.size()},
                        {"col_ops", r.col_ops.size()}});
    };
  });

  // dual
  auto* dual_cmd = app.add_subcommand("dual", "structure of the dual module");
  add_common(dual_cmd, common, true);
  dual_cmd->callback([&] {
    action = [&] {
      const RingCtx ctx = need_ring(common);
      const InvariantFactors m = need_module(common);
      const DualModule d = dual_structure(m);
      json j{{"module", io::format_module(m)},
             {"dual", {{"torsion", d.torsion_exps}, {"t_copies", d.t_copies}}}};
      j["order"] = m.is_finite() ? json(module_cardinality(ctx, m)) : json(nullptr);
      emit(common, j);
    };
  });

  // pair
  auto* pair_cmd = app.add_subcommand("pair", "evaluate a functional on an element");
  std::string phi_text, elem_text;
  add_common(pair_cmd, common, true);
  pair_cmd->add_option("--phi", phi_text, "dual element JSON")->required();
  pair_cmd->add_option("--elem", elem_text, "module element JSON")->required();
  pair_cmd->callback([&] {
    action = [&] {
      const RingCtx ctx = need_ring(common);
      const InvariantFactors m = need_module(common);
      const DualElem phi = io::dual_from_json(ctx, m, parse_json_arg(phi_text, "phi"));
      const ModElem x = io::elem_from_json(ctx, m, parse_json_arg(elem_text, "elem"), ctx.default_precision());
      emit(common, json{{"value", io::to_json(eval_pairing(ctx, dual_structure(m), phi, x))}});
    };
  });

  // double-dual
  auto* dd_cmd = app.add_subcommand("double-dual", "image of an element under the double-dual map");
  add_common(dd_cmd, common, true);
  dd_cmd->add_option("--elem", elem_text, "module element JSON")->required();
  dd_cmd->callback([&] {
    action = [&] {
      const RingCtx ctx = need_ring(common);
      const InvariantFactors m = need_module(common);
      const ModElem x = io::elem_from_json(ctx, m, parse_json_arg(elem_text, "elem"), ctx.default_precision());
      const ModElem back = double_dual_map(ctx, m, x);
      if (!(back == x)) status = 1;
      emit(common, json{{"elem", io::to_json(x)}, {"double_dual", io::to_json(back)}, {"identity", back == x}});
    };
  });

  // square
  auto* sq_cmd = app.add_subcommand("square", "check the inf-dual / res square for R/(pi^a) -> R/(pi^b)");
  unsigned sq_a = 1, sq_b = 1;
  add_common(sq_cmd, common, false);
  sq_cmd->add_option("--a", sq_a, "exponent of the source")->required();
  sq_cmd->add_option("--b", sq_b, "exponent of the target")->required();
  sq_cmd->add_option("--phi", phi_text, "functional on R/(pi^b): its residue b with phi(1) = b / pi^b")->required();
  sq_cmd->callback([&] {
    action = [&] {
      const RingCtx ctx = need_ring(common);
      if (sq_a == 0 || sq_a > sq_b) throw Error(ErrorCode::Parse, "need 0 < a <= b");
      const RElem b = io::relem_from_json(ctx, parse_json_arg(phi_text, "phi"), sq_b);
      const DualElem phi{{b}, {}};
      const HomMatrix inf{{{sq_a}, 0}, {{sq_b}, 0}, {inf_map(ctx, sq_a, sq_b, r_one(ctx, sq_a))}};
      const bool holds = check_inf_res_square(ctx, sq_a, sq_b, phi);
      if (!holds) status = 1;
      emit(common, json{{"phi_of_one", io::to_json(i_x_inverse(ctx, sq_b, b))},
                        {"dual_then_ix", io::to_json(apply_dual_hom(ctx, inf, phi).torsion.at(0))},
                        {"ix_then_res", io::to_json(res_map(ctx, sq_b, sq_a, b))},
                        {"holds", holds}});
    };
  });

  // ell
  auto* ell_cmd = app.add_subcommand("ell", "the map from Z-functionals on F_q[[x]] to F_q((x))/F_q[[x]]");
  std::string t_text;
  add_common(ell_cmd, common, false);
  ell_cmd->add_option("--phi", phi_text, "functional JSON {\"coeffs\": [...]}");
  ell_cmd->add_option("--t", t_text, "T element JSON {\"n\": .., \"num\": [..]} to invert instead");
  ell_cmd->callback([&] {
    action = [&] {
      const RingCtx ctx = need_ring(common);
      if (phi_text.empty() == t_text.empty()) throw Error(ErrorCode::Parse, "give exactly one of --phi and --t");
      if (!phi_text.empty()) {
        const ZDualFunctional phi = io::functional_from_json(ctx, parse_json_arg(phi_text, "phi"));
        emit(common, json{{"phi", io::to_json(phi)}, {"ell", io::to_json(ell(ctx, phi))}});
      } else {
        const TElem t = io::telem_from_json(ctx, parse_json_arg(t_text, "t"));
        emit(common, json{{"t", io::to_json(t)}, {"ell_inv", io::to_json(ell_inv(ctx, t))}});
      }
    };
  });

  // transport
  auto* tr_cmd = app.add_subcommand("transport", "R/Z-valued table m -> psi(m) read through ell");
  std::string psi_text;
  add_common(tr_cmd, common, true);
  tr_cmd->add_option("--psi", psi_text, "dual element JSON")->required();
  tr_cmd->callback([&] {
    action = [&] {
      const RingCtx ctx = need_ring(common);
      const InvariantFactors m = need_module(common);
      const DualElem psi = io::dual_from_json(ctx, m, parse_json_arg(psi_text, "psi"));
      const ZFunctionalTable table = adjoint_transport(ctx, m, psi);
      json rows = json::array();
      for (std::size_t i = 0; i < table.elements.size(); ++i)
        rows.push_back(json{{"m", io::to_json(table.elements[i])}, {"value", io::to_json(table.values[i])}});
      emit(common, json{{"module", io::format_module(m)}, {"table", rows}});
    };
  });

  // torsion-count
  auto* tc_cmd = app.add_subcommand("torsion-count", "enumerate T[p^n] for R = Z_p");
  unsigned tc_n = 0;
  add_common(tc_cmd, common, false);
  tc_cmd->add_option("--n", tc_n, "exponent n")->required();
  tc_cmd->callback([&] {
    action = [&] {
      const TorsionCount tc = torsion_count(need_ring(common), tc_n);
      if (!tc.holds()) status = 1;
      emit(common, json{{"n", tc_n}, {"count", tc.count}, {"expected", tc.expected}, {"holds", tc.holds()}});
    };
  });

  // zdelta
  auto* zd_cmd = app.add_subcommand("zdelta", "admissibility of Z[delta] with delta^2 = b delta + a");
  long long zd_a = 0, zd_b = 0;
  zd_cmd->add_option("--a", zd_a, "constant term a")->required();
  zd_cmd->add_option("--b", zd_b, "linear term b")->required();
  zd_cmd->add_option("--format", common.format, "output format")->check(CLI::IsMember({"json", "text"}));
  zd_cmd->add_option("--out", common.out, "write output to this file instead of stdout");
  zd_cmd->callback([&] {
    action = [&] {
      const auto r = zdelta_validate(zd_a, zd_b);
      json j{{"a", zd_a}, {"b", zd_b}, {"accepted", std::holds_alternative<ZDeltaRing>(r)}};
      if (const auto* ring = std::get_if<ZDeltaRing>(&r)) {
        j["discriminant"] = ring->discriminant();
        j["rule"] = "delta^2 = " + std::to_string(zd_b) + " delta + " + std::to_string(zd_a);
      } else {
        j["reason"] = std::get<ZDeltaRejection>(r).reason;
      }
      emit(common, j);
    };
  });

  // verify
  auto* ver_cmd = app.add_subcommand("verify", "run the property suite against the brute-force oracles");
  std::string config_path, fault_name;
  std::vector<std::string> rings, suites;
  std::uint64_t seed = 0, budget = 0;
  bool no_suites = false;
  ver_cmd->add_option("--config", config_path, "JSON config file");
  ver_cmd->add_option("--ring", rings, "ring spec (repeatable; replaces the configured rings)");
  ver_cmd->add_option("--suite", suites, "suite name (repeatable; default all)");
  ver_cmd->add_flag("--no-suites", no_suites, "select no suites at all");
  ver_cmd->add_option("--seed", seed, "seed for every random choice");
  ver_cmd->add_option("--budget", budget, "oracle element budget (max_elements)");
  ver_cmd->add_option("--fault", fault_name, "inject a fault: none | snf-pivot");
  ver_cmd->add_option("--format", common.format, "output format")->check(CLI::IsMember({"json", "text"}));
  ver_cmd->add_option("--out", common.out, "write the report to this file instead of stdout");
  ver_cmd->callback([&] {
    action = [&] {
      verify::VerifyConfig cfg = verify::default_config();
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw Error(ErrorCode::Parse, "cannot open config " + config_path);
        json j;
        try {
          in >> j;
        } catch (const json::exception& ex) {
          throw Error(ErrorCode::Parse, std::string("malformed config: ") + ex.what());
        }
        cfg = verify::config_from_json(j);
      }
      if (ver_cmd->count("--seed")) cfg.seed = seed;
      if (ver_cmd->count("--budget")) cfg.budget.max_elements = budget;
      if (!rings.empty()) cfg.rings = rings;
      if (!suites.empty()) cfg.suites = suites;
      if (no_suites) cfg.suites = std::vector<std::string>{};
      if (!fault_name.empty()) cfg.fault = verify::parse_fault(fault_name);
      const verify::VerifyReport report = verify::run_suite(cfg);
      status = report.passed() ? 0 : 1;
      emit(common, verify::report_json(report), verify::report_text(report));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    action();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return status;
}
