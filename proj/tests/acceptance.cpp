// Runs every acceptance criterion at its pinned configuration and prints one
// line per criterion. Exit status is non-zero when any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dvrdual/verify.hpp"

using namespace dvrdual;

namespace {

const std::string kZ2 = "mode=mixed,p=2,e=1,prec=16";
const std::string kZ3 = "mode=mixed,p=3,e=1,prec=16";
const std::string kF2 = "mode=equal,p=2,e=1,prec=16";
const std::string kF4 = "mode=equal,p=2,e=2,poly=1,1,1,prec=16";

struct Outcome {
  bool passed = true;
  std::string detail;
};

// Every requested suite must produce at least one entry with at least one
// checked case, and every entry must pass.
Outcome run(const std::vector<std::string>& suites, const std::vector<std::string>& rings) {
  verify::VerifyConfig cfg = verify::default_config();
  cfg.rings = rings;
  cfg.suites = suites;
  Outcome out;
  try {
    const verify::VerifyReport report = verify::run_suite(cfg);
    std::uint64_t cases = 0;
    for (const auto& e : report.entries) {
      cases += e.cases;
      if (!e.passed) {
        out.passed = false;
        out.detail += " " + e.name() + " " + e.counterexample.dump();
      }
      if (e.cases == 0) {
        out.passed = false;
        out.detail += " " + e.name() + " checked nothing";
      }
    }
    if (report.entries.empty()) {
      out.passed = false;
      out.detail += " no entries";
    }
    if (out.passed) out.detail = " (" + std::to_string(report.entries.size()) + " entries, " + std::to_string(cases) + " cases)";
  } catch (const std::exception& ex) {
    out.passed = false;
    out.detail = std::string(" error: ") + ex.what();
  }
  return out;
}

nlohmann::json run_cli(const std::string& out_path) {
  const std::string cmd = std::string(DVRDUAL_CLI) + " verify --seed 7 --format json --out " + out_path;
  if (std::system(cmd.c_str()) != 0) throw std::runtime_error("verify exited non-zero");
  std::ifstream in(out_path);
  nlohmann::json j = nlohmann::json::parse(in);
  j.erase("timestamps");
  return j;
}

Outcome determinism() {
  Outcome out;
  try {
    const std::string dir = std::string(ACCEPTANCE_WORKDIR);
    const nlohmann::json a = run_cli(dir + "/acceptance_run_a.json");
    const nlohmann::json b = run_cli(dir + "/acceptance_run_b.json");
    const std::string da = a.dump(2), db = b.dump(2);
    out.passed = da == db && a.at("status") == "pass";
    out.detail = out.passed ? " (" + std::to_string(da.size()) + " bytes identical)" : " reports differ or failed";
  } catch (const std::exception& ex) {
    out.passed = false;
    out.detail = std::string(" error: ") + ex.what();
  }
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* description;
    Outcome outcome;
  };
  std::vector<Criterion> criteria;
  auto add = [&](const char* description, Outcome o) {
    std::cout << "criterion " << criteria.size() + 1 << ": " << (o.passed ? "PASS " : "FAIL ") << description
              << o.detail << std::endl;
    criteria.push_back({description, std::move(o)});
  };

  add("dual counting", run({"dual-counting"}, {kZ2, kZ3, kF2, kF4}));
  add("double-dual identity", run({"double-dual-identity"}, {kZ2, kZ3, kF2, kF4}));
  add("commuting square", run({"commuting-square"}, {kZ2, kF2}));
  add("SNF soundness", run({"snf-invariance", "snf-cokernel-oracle"}, {kZ2, kZ3, kF2}));
  add("ell isomorphism", run({"ell-isomorphism"}, {kF2, kF4}));
  add("adjoint transport", run({"adjoint-transport"}, {kF2}));
  add("hom lifting", run({"hom-lifting"}, {kZ2, kF2}));
  add("torsion counts", run({"torsion-count-zp"}, {}));
  add("Z[delta] predicate", run({"zdelta-predicate", "zdelta-ring-laws"}, {}));
  add("report determinism", determinism());

  bool all = true;
  for (const auto& c : criteria) all = all && c.outcome.passed;
  std::cout << (all ? "all criteria passed" : "some criteria failed") << std::endl;
  return all ? 0 : 1;
}
