#include "dvrdual/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace dvrdual::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::Parse, what); }

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

long long parse_int(std::string_view text, const char* what) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    fail(std::string("expected an integer for ") + what + ", got '" + t + "'");
  return v;
}

unsigned parse_unsigned(std::string_view text, const char* what) {
  const long long v = parse_int(text, what);
  if (v < 0 || v > 0xFFFFFFFFLL) fail(std::string(what) + " must be a non-negative 32-bit integer");
  return static_cast<unsigned>(v);
}

std::vector<Digit> digits_from_string(const RingCtx& ctx, const std::string& s) {
  std::vector<Digit> d;
  const bool separated = s.find_first_of(" ,") != std::string::npos;
  if (separated) {
    std::string token;
    std::istringstream in(s);
    while (std::getline(in, token, ',')) {
      std::istringstream words(token);
      std::string w;
      while (words >> w) d.push_back(parse_unsigned(w, "digit"));
    }
  } else {
    if (ctx.q() > 10) fail("unseparated digit strings need q <= 10");
    for (char c : s) {
      if (!std::isdigit(static_cast<unsigned char>(c))) fail("bad digit '" + std::string(1, c) + "'");
      d.push_back(static_cast<Digit>(c - '0'));
    }
  }
  if (d.empty()) fail("empty digit string");
  return d;
}

std::vector<Digit> digit_list(const json& j) {
  if (!j.is_array()) fail("expected a digit list");
  std::vector<Digit> d;
  for (const auto& x : j) {
    if (!x.is_number_integer() || x.get<long long>() < 0) fail("digits must be non-negative integers");
    d.push_back(x.get<Digit>());
  }
  return d;
}

}  // namespace

RingCtx parse_ring(std::string_view spec) {
  std::optional<std::string> mode;
  std::optional<unsigned> p, e, prec;
  std::vector<std::uint32_t> poly;
  bool have_poly = false;
  std::string key;
  std::istringstream in{std::string(spec)};
  std::string token;
  while (std::getline(in, token, ',')) {
    token = trim(token);
    const auto eq = token.find('=');
    std::string value;
    if (eq == std::string::npos) {
      if (key != "poly") fail("unexpected token '" + token + "' in ring spec");
      value = token;
    } else {
      key = trim(std::string_view(token).substr(0, eq));
      value = trim(std::string_view(token).substr(eq + 1));
    }
    if (key == "mode") {
      if (value != "equal" && value != "mixed") fail("mode must be equal or mixed");
      mode = value;
    } else if (key == "p") {
      p = parse_unsigned(value, "p");
    } else if (key == "e") {
      e = parse_unsigned(value, "e");
    } else if (key == "prec") {
      prec = parse_unsigned(value, "prec");
    } else if (key == "poly") {
      have_poly = true;
      poly.push_back(parse_unsigned(value, "poly coefficient"));
    } else {
      fail("unknown ring spec key '" + key + "'");
    }
  }
  if (!mode) fail("ring spec needs mode=");
  if (!p) fail("ring spec needs p=");
  const unsigned precision = prec.value_or(16);
  if (*mode == "mixed") {
    if (e.value_or(1) != 1) fail("mixed characteristic requires e = 1");
    if (have_poly && poly != std::vector<std::uint32_t>{0, 1}) fail("mixed characteristic takes no modulus");
    return RingCtx::mixed(*p, precision);
  }
  const unsigned deg = e.value_or(have_poly ? static_cast<unsigned>(poly.size()) - 1 : 1);
  if (!have_poly) {
    if (deg != 1) fail("poly= is required when e > 1");
    poly = {0, 1};
  }
  if (poly.size() != deg + 1) fail("poly must list e+1 coefficients");
  return RingCtx::equal(*p, poly, precision);
}

std::string format_ring(const RingCtx& ctx) {
  std::string s = ctx.mode() == Mode::MixedChar ? "mode=mixed" : "mode=equal";
  s += ",p=" + std::to_string(ctx.p()) + ",e=" + std::to_string(ctx.e());
  if (ctx.mode() == Mode::EqualChar && ctx.e() > 1) {
    s += ",poly=";
    for (std::size_t i = 0; i < ctx.modulus().size(); ++i) s += (i ? "," : "") + std::to_string(ctx.modulus()[i]);
  }
  s += ",prec=" + std::to_string(ctx.default_precision());
  return s;
}

InvariantFactors parse_module(std::string_view spec) {
  const std::string s = trim(spec);
  if (s.empty() || s.front() != '[') fail("module spec must start with '['");
  const auto close = s.find(']');
  if (close == std::string::npos) fail("module spec is missing ']'");
  std::vector<unsigned> exps;
  const std::string inner = trim(std::string_view(s).substr(1, close - 1));
  if (!inner.empty()) {
    std::istringstream in(inner);
    std::string tok;
    while (std::getline(in, tok, ',')) exps.push_back(parse_unsigned(tok, "torsion exponent"));
  }
  unsigned f = 0;
  std::string rest = trim(std::string_view(s).substr(close + 1));
  if (!rest.empty()) {
    if (rest.front() != ';') fail("expected ';f=' after the exponent list");
    rest = trim(std::string_view(rest).substr(1));
    if (rest.rfind("f", 0) != 0) fail("expected f=<rank>");
    rest = trim(std::string_view(rest).substr(1));
    if (rest.empty() || rest.front() != '=') fail("expected f=<rank>");
    f = parse_unsigned(std::string_view(rest).substr(1), "free rank");
  }
  for (unsigned e : exps)
    if (e == 0) fail("torsion exponents must be positive");
  return make_factors(std::move(exps), f);
}

std::string format_module(const InvariantFactors& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.torsion_exps.size(); ++i) s += (i ? "," : "") + std::to_string(m.torsion_exps[i]);
  return s + "];f=" + std::to_string(m.free_rank);
}

json to_json(const RElem& a) { return a.digits(); }

json to_json(const TElem& t) { return json{{"n", t.level()}, {"num", t.numerator()}}; }

json to_json(const ModElem& x) {
  json t = json::array(), f = json::array();
  for (const auto& r : x.torsion) t.push_back(to_json(r));
  for (const auto& r : x.free) f.push_back(to_json(r));
  return json{{"torsion", t}, {"free", f}};
}

json to_json(const DualElem& phi) {
  json t = json::array(), v = json::array();
  for (const auto& r : phi.torsion) t.push_back(to_json(r));
  for (const auto& s : phi.t) v.push_back(to_json(s));
  return json{{"torsion", t}, {"t", v}};
}

json to_json(const ZDualFunctional& phi) { return json{{"coeffs", phi.coeffs}}; }

json to_json(const CircleElem& c) { return json{{"k", c.k}, {"num", c.numerator}}; }

json to_json(const InvariantFactors& m) { return json{{"torsion", m.torsion_exps}, {"free", m.free_rank}}; }

RElem relem_from_json(const RingCtx& ctx, const json& j, unsigned precision) {
  if (j.is_number_integer()) return r_from_int(ctx, j.get<long long>(), precision);
  std::vector<Digit> d;
  if (j.is_string())
    d = digits_from_string(ctx, j.get<std::string>());
  else if (j.is_array())
    d = digit_list(j);
  else
    fail("expected an integer, digit list or digit string");
  d.resize(precision, 0);
  return r_from_digits(ctx, std::move(d));
}

TElem telem_from_json(const RingCtx& ctx, const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("num")) fail("T element must be {\"n\": level, \"num\": ...}");
  const unsigned n = j.at("n").get<unsigned>();
  if (n == 0) return TElem{};
  return t_from_fraction(ctx, relem_from_json(ctx, j.at("num"), n), n);
}

ModElem elem_from_json(const RingCtx& ctx, const InvariantFactors& m, const json& j, unsigned free_precision) {
  ModElem x;
  if (!j.is_object()) {
    if (m.component_count() != 1) fail("a bare value needs a module with one component");
    if (m.free_rank == 0)
      x.torsion.push_back(relem_from_json(ctx, j, m.torsion_exps[0]));
    else
      x.free.push_back(relem_from_json(ctx, j, free_precision));
    return x;
  }
  const json t = j.value("torsion", json::array());
  const json f = j.value("free", json::array());
  if (t.size() != m.torsion_count() || f.size() != m.free_rank) fail("element does not match the module shape");
  for (std::size_t i = 0; i < t.size(); ++i) x.torsion.push_back(relem_from_json(ctx, t[i], m.torsion_exps[i]));
  for (const auto& v : f) x.free.push_back(relem_from_json(ctx, v, free_precision));
  validate_elem(ctx, m, x);
  return x;
}

DualElem dual_from_json(const RingCtx& ctx, const InvariantFactors& m, const json& j) {
  if (!j.is_object()) fail("dual element must be a JSON object");
  const json t = j.value("torsion", json::array());
  const json v = j.value("t", json::array());
  if (t.size() != m.torsion_count() || v.size() != m.free_rank) fail("dual element does not match the module shape");
  DualElem phi;
  for (std::size_t i = 0; i < t.size(); ++i) phi.torsion.push_back(relem_from_json(ctx, t[i], m.torsion_exps[i]));
  for (const auto& s : v) phi.t.push_back(telem_from_json(ctx, s));
  validate_dual_elem(ctx, dual_structure(m), phi);
  return phi;
}

ZDualFunctional functional_from_json(const RingCtx& ctx, const json& j) {
  if (!j.is_object() || !j.contains("coeffs")) fail("functional must be {\"coeffs\": [...]}");
  return make_functional(ctx, digit_list(j.at("coeffs")));
}

MatrixFile matrix_from_json(const json& j, const std::optional<RingCtx>& ring_override) {
  if (!j.is_object() || !j.contains("rows")) fail("matrix file needs \"rows\"");
  std::optional<RingCtx> ring = ring_override;
  if (!ring) {
    if (!j.contains("ring")) fail("matrix file needs \"ring\" unless --ring is given");
    ring = parse_ring(j.at("ring").get<std::string>());
  }
  const json& rows = j.at("rows");
  if (!rows.is_array()) fail("\"rows\" must be an array");
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows[0].size() : 0;
  std::vector<RElem> entries;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != c) fail("matrix rows must have equal length");
    for (const auto& v : row) entries.push_back(relem_from_json(*ring, v, ring->default_precision()));
  }
  return MatrixFile{*ring, PresMatrix(r, c, std::move(entries))};
}

MatrixFile load_matrix_file(const std::string& path, const std::optional<RingCtx>& ring_override) {
  std::ifstream in(path);
  if (!in) fail("cannot open matrix file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    fail(std::string("malformed JSON in ") + path + ": " + ex.what());
  }
  return matrix_from_json(j, ring_override);
}

}  // namespace dvrdual::io
