#pragma once

// Text and JSON formats shared by the CLI, the verification report and the
// tests.
//
//   ring spec    mode=equal|mixed,p=<prime>,e=<deg>,poly=<c0,...,ce>,prec=<N>
//   module spec  [e1,e2,...];f=<rank>
//   RElem        [d0, d1, ...]  packed digits, least significant first
//   TElem        {"n": level, "num": [digits]}
//   DualElem     {"torsion": [RElem...], "t": [TElem...]}
//   functional   {"coeffs": [packed F_q digits]}
//   matrix file  {"ring": "<ring spec>", "rows": [[int | "digit string", ...], ...]}

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "dvrdual/duality.hpp"
#include "dvrdual/flood.hpp"

namespace dvrdual::io {

using nlohmann::json;

RingCtx parse_ring(std::string_view spec);
std::string format_ring(const RingCtx& ctx);

InvariantFactors parse_module(std::string_view spec);
std::string format_module(const InvariantFactors& m);

json to_json(const RElem& a);
json to_json(const TElem& t);
json to_json(const ModElem& x);
json to_json(const DualElem& phi);
json to_json(const ZDualFunctional& phi);
json to_json(const CircleElem& c);
json to_json(const InvariantFactors& m);

/// An integer (base-q digits, negatives allowed in mixed characteristic), a
/// digit list, or a digit string ("1 0 1", "1,0,1", or "101" when q <= 10).
RElem relem_from_json(const RingCtx& ctx, const json& j, unsigned precision);
TElem telem_from_json(const RingCtx& ctx, const json& j);
/// {"torsion": [...], "free": [...]} or, for a module with one component, a
/// bare RElem value. Free coordinates are read at `free_precision`.
ModElem elem_from_json(const RingCtx& ctx, const InvariantFactors& m, const json& j, unsigned free_precision);
DualElem dual_from_json(const RingCtx& ctx, const InvariantFactors& m, const json& j);
ZDualFunctional functional_from_json(const RingCtx& ctx, const json& j);

struct MatrixFile {
  RingCtx ring;
  PresMatrix matrix;
};

/// `ring_override` replaces the file's ring when given.
MatrixFile matrix_from_json(const json& j, const std::optional<RingCtx>& ring_override = std::nullopt);
MatrixFile load_matrix_file(const std::string& path, const std::optional<RingCtx>& ring_override = std::nullopt);

}  // namespace dvrdual::io
