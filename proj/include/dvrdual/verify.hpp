#pragma once

// The property suite behind `dvrdual verify`: every structural computation is
// checked against the oracle or against an identity it must satisfy, and the
// outcome is collected into a deterministic report.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dvrdual/oracle.hpp"

namespace dvrdual::verify {

enum class Fault {
  None,
  /// Runs the SNF checks with the corrupted pivot rule.
  SnfPivot,
};

struct VerifyConfig {
  std::vector<std::string> rings;
  std::uint64_t seed = 0;
  oracle::EnumBudget budget;
  /// nullopt runs every suite; an empty list runs none.
  std::optional<std::vector<std::string>> suites;
  Fault fault = Fault::None;
};

/// Z_2, Z_3, F_2[[x]], F_4[[x]] with the default budget.
VerifyConfig default_config();

/// Reads {"rings": [...], "seed": n, "budget": {"max_elements": n,
/// "max_work": n}, "suites": [...], "fault": "none" | "snf-pivot"}; absent
/// keys keep their defaults. Throws Error(Parse) on bad input.
VerifyConfig config_from_json(const nlohmann::json& j);

Fault parse_fault(const std::string& name);

struct Entry {
  std::string suite;
  /// Ring name, or empty for suites that fix their own rings.
  std::string ring;
  bool passed = true;
  std::uint64_t cases = 0;
  /// Cases left out because the oracle would exceed its budget.
  std::uint64_t skipped = 0;
  nlohmann::json counterexample;
  double elapsed_ms = 0;

  std::string name() const { return ring.empty() ? suite : suite + "[" + ring + "]"; }
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<std::string> rings;
  std::vector<Entry> entries;

  bool passed() const;
};

/// Every suite name in execution order.
const std::vector<std::string>& suite_names();

VerifyReport run_suite(const VerifyConfig& config);

/// The JSON report. Wall-clock data lives under "timestamps" and is the only
/// part that changes between runs with the same configuration.
nlohmann::json report_json(const VerifyReport& report, bool with_timestamps = true);
std::string report_text(const VerifyReport& report);

}  // namespace dvrdual::verify
