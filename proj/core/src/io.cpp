#include "hqmaps/io.hpp"

#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "hqmaps/errors.hpp"

namespace hq {

using nlohmann::json;

namespace {

json poly_to_array(const CPoly2& p) {
  json arr = json::array();
  for (const auto& [k, v] : p.terms())
    arr.push_back({k.e[0], k.e[1], v.real(), v.imag()});
  return arr;
}

CPoly2 poly_from_array(const json& arr) {
  if (!arr.is_array()) throw Error("polynomial JSON must be an array");
  CPoly2 p;
  for (const json& term : arr) {
    if (!term.is_array() || term.size() != 4)
      throw Error("polynomial term must be [i, k, re, im]");
    const int i = term[0].get<int>();
    const int k = term[1].get<int>();
    if (i < 0 || k < 0) throw Error("polynomial exponents must be >= 0");
    p.add_term(ij(i, k), C(term[2].get<double>(), term[3].get<double>()));
  }
  return p;
}

json complex_to_array(C v) { return json{v.real(), v.imag()}; }

C complex_from_array(const json& j, const char* name) {
  if (!j.is_array() || j.size() != 2)
    throw Error(std::string("field '") + name + "' must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

const json& require_field(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end())
    throw Error(std::string("missing JSON field '") + name + "'");
  return *it;
}

json parse_object(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("expected a JSON object");
  return j;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string map_to_json(const RationalMapGerm& H) {
  json comps = json::array();
  for (const RationalGerm& c : H.comp)
    comps.push_back({{"num", poly_to_array(c.num)},
                     {"den", poly_to_array(c.den)}});
  return json{{"components", comps}}.dump();
}

RationalMapGerm map_from_json(const std::string& text) {
  const json j = parse_object(text);
  const json& comps = require_field(j, "components");
  if (!comps.is_array() || comps.empty())
    throw Error("'components' must be a non-empty array");
  RationalMapGerm H;
  for (const json& c : comps) {
    RationalGerm r;
    r.num = poly_from_array(require_field(c, "num"));
    r.den = poly_from_array(require_field(c, "den"));
    if (r.den.coeff(ij(0, 0)) == C(0.0))
      throw Error("component denominator vanishes at the origin");
    H.comp.push_back(std::move(r));
  }
  return H;
}

std::string gamma_to_json(const GammaParams& g) {
  return json{{"lambda", g.lambda},
              {"r", g.r},
              {"u", complex_to_array(g.u)},
              {"c", complex_to_array(g.c)}}
      .dump();
}

GammaParams gamma_from_json(const std::string& text) {
  const json j = parse_object(text);
  GammaParams g;
  g.lambda = require_field(j, "lambda").get<double>();
  g.r = require_field(j, "r").get<double>();
  g.u = complex_from_array(require_field(j, "u"), "u");
  g.c = complex_from_array(require_field(j, "c"), "c");
  g.validate();
  return g;
}

std::string gamma_prime_to_json(const GammaPrimeParams& g) {
  return json{{"lambda", g.lambda},
              {"r", g.r},
              {"u", complex_to_array(g.u)},
              {"a1", complex_to_array(g.a1)},
              {"a2", complex_to_array(g.a2)},
              {"c1", complex_to_array(g.c1)},
              {"c2", complex_to_array(g.c2)},
              {"sigma_sign", g.sigma_sign}}
      .dump();
}

GammaPrimeParams gamma_prime_from_json(const std::string& text) {
  const json j = parse_object(text);
  GammaPrimeParams g;
  g.lambda = require_field(j, "lambda").get<double>();
  g.r = require_field(j, "r").get<double>();
  g.u = complex_from_array(require_field(j, "u"), "u");
  g.a1 = complex_from_array(require_field(j, "a1"), "a1");
  g.a2 = complex_from_array(require_field(j, "a2"), "a2");
  g.c1 = complex_from_array(require_field(j, "c1"), "c1");
  g.c2 = complex_from_array(require_field(j, "c2"), "c2");
  g.sigma_sign = require_field(j, "sigma_sign").get<int>();
  return g;
}

std::string jets_to_json(const JetCoords& jc) {
  json vals = json::array();
  for (const C& v : jc.v) vals.push_back(complex_to_array(v));
  return json{{"order", jc.order}, {"values", vals}}.dump();
}

std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
  const auto field = [](const std::string& s) -> std::string {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    q += '"';
    return q;
  };
  std::ostringstream out;
  const auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << field(row[i]);
    }
    out << '\n';
  };
  write_row(header);
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw Error("CSV row width does not match the header");
    write_row(row);
  }
  return out.str();
}

std::map<std::string, std::string> parse_flat_toml(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  const auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    // Strip comments (a '#' outside a quoted string).
    bool in_quote = false;
    std::string body;
    for (char ch : line) {
      if (ch == '"') in_quote = !in_quote;
      if (ch == '#' && !in_quote) break;
      body += ch;
    }
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw Error("config line " + std::to_string(lineno) +
                  ": expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty())
      throw Error("config line " + std::to_string(lineno) +
                  ": empty key or value");
    if (value.front() == '"') {
      if (value.size() < 2 || value.back() != '"')
        throw Error("config line " + std::to_string(lineno) +
                    ": unterminated string");
      value = value.substr(1, value.size() - 2);
    }
    kv[key] = value;
  }
  return kv;
}

void RunConfig::validate() const {
  require_signature(eps);
  if (!(membership_tol > 0.0) || !(jet_tol > 0.0) || !(solver_tol > 0.0))
    throw Error("all tolerances must be positive");
  if (jet_order < 3)
    throw Error("jet order must be >= 3 (third-order jets determine a map)");
  if (samples < 1) throw Error("sample count must be positive");
  if (format != "json" && format != "csv")
    throw Error("format must be 'json' or 'csv'");
}

void RunConfig::apply_toml(const std::string& text) {
  const auto parse_int = [](const std::string& key, const std::string& v,
                            long long lo, long long hi) {
    std::size_t pos = 0;
    long long n = 0;
    try {
      n = std::stoll(v, &pos);
    } catch (const std::exception&) {
      throw Error("config key '" + key + "': not an integer: " + v);
    }
    if (pos != v.size())
      throw Error("config key '" + key + "': not an integer: " + v);
    if (n < lo || n > hi) throw Error("config key '" + key + "' out of range");
    return n;
  };
  const auto parse_real = [](const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
      x = std::stod(v, &pos);
    } catch (const std::exception&) {
      throw Error("config key '" + key + "': not a number: " + v);
    }
    if (pos != v.size())
      throw Error("config key '" + key + "': not a number: " + v);
    return x;
  };
  for (const auto& [key, value] : parse_flat_toml(text)) {
    if (key == "eps")
      eps = static_cast<Signature>(parse_int(key, value, -1, 1));
    else if (key == "membership_tol")
      membership_tol = parse_real(key, value);
    else if (key == "jet_tol")
      jet_tol = parse_real(key, value);
    else if (key == "solver_tol")
      solver_tol = parse_real(key, value);
    else if (key == "jet_order")
      jet_order = static_cast<int>(parse_int(key, value, 3, 64));
    else if (key == "seed")
      seed = static_cast<std::uint64_t>(
          parse_int(key, value, 0, std::numeric_limits<long long>::max()));
    else if (key == "samples")
      samples = static_cast<int>(parse_int(key, value, 1, 1 << 24));
    else if (key == "format")
      format = value;
    else if (key == "out")
      out = value;
    else
      throw Error("unknown config key '" + key + "'");
  }
  validate();
}

}  // namespace hq
