#pragma once

// Serialization for maps, parameters, and reports (JSON text in, JSON text
// out), a small CSV writer, a flat TOML-subset reader for configuration
// files, and the run configuration shared by the command-line subcommands.
// All output is deterministic: fixed input produces byte-identical text.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hqmaps/algebra.hpp"
#include "hqmaps/catalog.hpp"
#include "hqmaps/hypersurfaces.hpp"
#include "hqmaps/isotropies.hpp"

namespace hq {

// %.17g rendering, enough digits for a lossless double round-trip; used by
// the CSV writer (JSON uses the shortest lossless form instead).
std::string format_double(double x);

// Rational map <-> JSON. Schema:
//   {"components": [{"num": [[i, k, re, im], ...],
//                    "den": [[i, k, re, im], ...]}, ...]}
// with integer exponents i, k and coefficient re + i*im.
std::string map_to_json(const RationalMapGerm& H);
RationalMapGerm map_from_json(const std::string& text);

// Isotropy parameters <-> JSON. Complex values are [re, im] pairs.
std::string gamma_to_json(const GammaParams& g);
GammaParams gamma_from_json(const std::string& text);
std::string gamma_prime_to_json(const GammaPrimeParams& g);
GammaPrimeParams gamma_prime_from_json(const std::string& text);

// Jet coordinates as {"order": k, "values": [[re, im], ...]}.
std::string jets_to_json(const JetCoords& jc);

// CSV with a header row; fields containing commas, quotes, or newlines are
// quoted and inner quotes doubled.
std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows);

// Flat TOML subset: one `key = value` per line, full-line or trailing `#`
// comments, values either double-quoted strings or bare scalar tokens.
// Returns raw value strings keyed by name; malformed lines throw Error.
std::map<std::string, std::string> parse_flat_toml(const std::string& text);

// Configuration shared by CLI subcommands. Precedence is handled by the
// caller: defaults below, overlaid by a config file, overlaid by flags.
struct RunConfig {
  Signature eps = 1;
  double membership_tol = 1e-10;
  double jet_tol = 1e-8;
  double solver_tol = 1e-10;
  int jet_order = 4;
  std::uint64_t seed = 42;
  int samples = 1000;
  std::string format = "json";  // "json" or "csv"
  std::string out;              // empty writes to stdout

  void validate() const;
  // Overlays values from a flat-TOML config text; unknown keys throw Error.
  void apply_toml(const std::string& text);
};

}  // namespace hq
