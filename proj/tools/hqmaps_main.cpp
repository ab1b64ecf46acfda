// hqmaps — command-line front end for the rational-map toolkit: catalog
// access, series expansion, membership checks, normalization and
// classification, isotropy actions, stabilizer and orbit-rank reports, orbit
// sweeps, the accumulation search, the component census, and the end-to-end
// verification suite.
//
// Exit codes: 0 success, 1 domain error ({"error": ...} on stderr),
// 2 usage error. Output goes to stdout or --out; fixed flags and seed give
// byte-identical output. Configuration precedence: flags > --config file >
// built-in defaults.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hqmaps/acceptance.hpp"
#include "hqmaps/algebra.hpp"
#include "hqmaps/catalog.hpp"
#include "hqmaps/errors.hpp"
#include "hqmaps/group_action.hpp"
#include "hqmaps/hypersurfaces.hpp"
#include "hqmaps/io.hpp"
#include "hqmaps/isotropies.hpp"
#include "hqmaps/normalization.hpp"
#include "hqmaps/rng.hpp"
#include "hqmaps/topology_lab.hpp"

namespace {

using hq::C;
using json = nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hq::Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_to(const std::string& path, std::string text) {
  if (text.empty() || text.back() != '\n') text += '\n';
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hq::Error("cannot write file: " + path);
  out << text;
}

// Main result of a subcommand: honors --out, appends a trailing newline.
void emit(const hq::RunConfig& cfg, const std::string& text) {
  write_to(cfg.out, text);
}

std::string dump(const json& j) { return j.dump(2); }

json cjson(C z) { return json::array({z.real(), z.imag()}); }

json map_json(const hq::RationalMapGerm& H) {
  return json::parse(hq::map_to_json(H));
}

json gamma_json(const hq::GammaParams& g) {
  return json::parse(hq::gamma_to_json(g));
}

json gamma_prime_json(const hq::GammaPrimeParams& g) {
  return json::parse(hq::gamma_prime_to_json(g));
}

std::string fd(double x) { return hq::format_double(x); }

// Coefficient table of a rational map as CSV rows
// component,part,z_power,w_power,re,im (terms in the canonical sorted order).
std::string map_csv(const hq::RationalMapGerm& H) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t ci = 0; ci < H.comp.size(); ++ci) {
    const auto add = [&](const char* part, const hq::CPoly2& p) {
      for (const auto& [e, c] : p.terms())
        rows.push_back({std::to_string(ci), part, std::to_string(e.e[0]),
                        std::to_string(e.e[1]), fd(c.real()), fd(c.imag())});
    };
    add("num", H.comp[ci].num);
    add("den", H.comp[ci].den);
  }
  return hq::to_csv({"component", "part", "z_power", "w_power", "re", "im"},
                    rows);
}

// ---------------------------------------------------------------------------
// Shared option groups
// ---------------------------------------------------------------------------

// --eps with per-run default resolution (flag > config > default).
struct EpsOpt {
  int value = 1;
  CLI::Option* opt = nullptr;

  void attach(CLI::App* sub) {
    opt = sub->add_option("--eps", value, "Target signature (+1 or -1)")
              ->check(CLI::IsMember({1, -1}));
  }
  hq::Signature resolve(const hq::RunConfig& cfg) const {
    return opt->count() ? value : cfg.eps;
  }
};

// A map given either as --in FILE (JSON), a normal-form reference
// --family N [--s S], or a compact-model index --index K.
struct MapSource {
  std::string in_path;
  int family = 0;
  double s = 0.0;
  int index = 0;
  CLI::Option* opt_in = nullptr;
  CLI::Option* opt_family = nullptr;
  CLI::Option* opt_s = nullptr;
  CLI::Option* opt_index = nullptr;

  void attach(CLI::App* sub, bool allow_index) {
    opt_in = sub->add_option("--in", in_path, "Input map as a JSON file");
    opt_family =
        sub->add_option("--family", family, "Normal-form family (1, 2, or 3)")
            ->check(CLI::IsMember({1, 2, 3}));
    opt_s = sub->add_option("--s", s, "Normal-form parameter s >= 0")
                ->check(CLI::NonNegativeNumber);
    opt_in->excludes(opt_family);
    if (allow_index) {
      opt_index =
          sub->add_option("--index", index, "Compact-model map index (1..7)")
              ->check(CLI::Range(1, 7));
      opt_index->excludes(opt_family);
      opt_index->excludes(opt_in);
    }
  }

  bool compact() const { return opt_index && opt_index->count() > 0; }

  hq::RationalMapGerm load(hq::Signature eps) const {
    if (opt_in->count()) return hq::map_from_json(read_file(in_path));
    if (compact()) return hq::faran_lebl_map(index, eps);
    if (!opt_family->count())
      throw hq::Error(
          "no input map: provide --in FILE, --family N [--s S], or --index K");
    hq::NormalFormID id{family, s, eps};
    id.validate();
    return hq::normal_form_map(id);
  }
};

// ---------------------------------------------------------------------------
// catalog list / emit / jets
// ---------------------------------------------------------------------------

json degrees_json(const hq::RationalMapGerm& H) {
  json a = json::array();
  for (const auto& c : H.comp)
    a.push_back(json::array({c.num.total_degree(), c.den.total_degree()}));
  return a;
}

int cmd_catalog_list(const hq::RunConfig& cfg, hq::Signature eps) {
  json fams = json::array();
  const char* stab[] = {
      "circle",
      "circle at s = 0, trivial for s > 0",
      "two-element at s = 0, trivial for s > 0",
  };
  for (int fam : {1, 2, 3}) {
    const double rep_s = fam == 1 ? 0.0 : 1.0;
    const hq::NormalFormID id{fam, rep_s, eps};
    json e;
    e["family"] = fam;
    e["parameter"] = fam == 1 ? "none" : "s >= 0";
    e["representative_s"] = rep_s;
    e["label"] = id.label();
    e["component_degrees"] = degrees_json(hq::normal_form_map(id));
    e["stabilizer"] = stab[fam - 1];
    fams.push_back(e);
  }
  json compact = json::array();
  const int max_index = eps == 1 ? 4 : 7;
  for (int idx = 1; idx <= max_index; ++idx) {
    json e;
    e["index"] = idx;
    e["component_degrees"] = degrees_json(hq::faran_lebl_map(idx, eps));
    if (idx == 3) e["note"] = "one component singular at z = 0";
    if (idx == 7) e["note"] = "degenerate (outside the nondegenerate class)";
    compact.push_back(e);
  }
  if (cfg.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : fams)
      rows.push_back({"normal_form", std::to_string(int(e["family"])),
                      e["label"].get<std::string>(),
                      e["stabilizer"].get<std::string>()});
    for (const auto& e : compact)
      rows.push_back({"compact", std::to_string(int(e["index"])), "",
                      e.contains("note") ? e["note"].get<std::string>() : ""});
    emit(cfg, hq::to_csv({"kind", "id", "label", "note"}, rows));
  } else {
    emit(cfg, dump({{"signature", int(eps)},
                    {"normal_forms", fams},
                    {"compact_model_maps", compact}}));
  }
  return 0;
}

int cmd_catalog_emit(const hq::RunConfig& cfg, const MapSource& src,
                     hq::Signature eps) {
  const hq::RationalMapGerm H = src.load(eps);
  emit(cfg, cfg.format == "csv" ? map_csv(H) : hq::map_to_json(H));
  return 0;
}

int cmd_catalog_jets(const hq::RunConfig& cfg, const MapSource& src,
                     hq::Signature eps) {
  const hq::JetCoords jc = hq::jet_coordinates(src.load(eps), cfg.jet_order);
  if (cfg.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < jc.v.size(); ++i)
      rows.push_back({std::to_string(i), fd(jc.v[i].real()),
                      fd(jc.v[i].imag())});
    emit(cfg, hq::to_csv({"entry", "re", "im"}, rows));
  } else {
    emit(cfg, hq::jets_to_json(jc));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// expand
// ---------------------------------------------------------------------------

int cmd_expand(const hq::RunConfig& cfg, const MapSource& src,
               hq::Signature eps) {
  const std::vector<hq::Jet> jets =
      hq::expand_map(src.load(eps), cfg.jet_order);
  if (cfg.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t ci = 0; ci < jets.size(); ++ci)
      for (const auto& [e, c] : jets[ci].coeffs)
        rows.push_back({std::to_string(ci), std::to_string(e.e[0]),
                        std::to_string(e.e[1]), fd(c.real()), fd(c.imag())});
    emit(cfg,
         hq::to_csv({"component", "z_power", "w_power", "re", "im"}, rows));
  } else {
    json comps = json::array();
    for (const auto& jet : jets) {
      json terms = json::array();
      for (const auto& [e, c] : jet.coeffs)
        terms.push_back(json::array({e.e[0], e.e[1], c.real(), c.imag()}));
      comps.push_back(terms);
    }
    emit(cfg, dump({{"order", cfg.jet_order}, {"components", comps}}));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// check-membership
// ---------------------------------------------------------------------------

struct MembershipArgs {
  MapSource src;
  EpsOpt eps;
  int n = 0;
  double radius = 0.1;
  double tol = 0.0;
  CLI::Option* opt_n = nullptr;
  CLI::Option* opt_tol = nullptr;
};

int cmd_check_membership(const hq::RunConfig& cfg, const MembershipArgs& a) {
  const hq::Signature eps = a.eps.resolve(cfg);
  const hq::RationalMapGerm H = a.src.load(eps);
  const int n = a.opt_n->count() ? a.n : cfg.samples;
  const double tol = a.opt_tol->count() ? a.tol : cfg.membership_tol;
  const hq::MembershipReport rep =
      a.src.compact()
          ? hq::maps_sphere_model(H, eps, n, tol, cfg.seed)
          : hq::maps_hypersurface(H, eps, n, a.radius, tol, cfg.seed);
  if (cfg.format == "csv") {
    emit(cfg, hq::to_csv({"pass", "max_residual", "evaluated", "skipped"},
                         {{rep.pass ? "true" : "false", fd(rep.max_residual),
                           std::to_string(rep.evaluated),
                           std::to_string(rep.skipped)}}));
  } else {
    json failures = json::array();
    if (!rep.pass)
      failures.push_back({{"point", json::array({cjson(rep.worst_point[0]),
                                                 cjson(rep.worst_point[1])})},
                          {"residual", rep.max_residual}});
    emit(cfg, dump({{"pass", rep.pass},
                    {"max_residual", rep.max_residual},
                    {"evaluated", rep.evaluated},
                    {"skipped", rep.skipped},
                    {"failures", failures}}));
  }
  return rep.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// normalize / classify
// ---------------------------------------------------------------------------

struct SolveArgs {
  MapSource src;
  EpsOpt eps;
  double tol = 0.0;
  int max_iter = 100;
  bool perturb = false;
  CLI::Option* opt_tol = nullptr;

  void attach(CLI::App* sub, bool allow_index) {
    src.attach(sub, allow_index);
    eps.attach(sub);
    opt_tol = sub->add_option("--tol", tol, "Acceptance residual threshold")
                  ->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", max_iter, "Polish iteration cap")->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_flag("--perturb", perturb,
                  "Apply a seeded random isotropy pair before solving");
  }

  hq::NormalizeOptions options(const hq::RunConfig& cfg) const {
    hq::NormalizeOptions o;
    o.target_residual = cfg.solver_tol;
    o.accept_residual = opt_tol->count() ? tol : cfg.jet_tol;
    o.max_iterations = max_iter;
    return o;
  }

  // Loads the map; with --perturb acts on it by a seeded random pair whose
  // parameters are reported through `applied`.
  hq::RationalMapGerm load(const hq::RunConfig& cfg, hq::Signature e,
                           json* applied) const {
    hq::RationalMapGerm H = src.load(e);
    if (perturb) {
      hq::Rng rng(cfg.seed);
      const hq::GammaParams g = hq::sample_gamma(rng);
      const hq::GammaPrimeParams gp = hq::sample_gamma_prime(rng, e);
      if (applied) {
        (*applied)["gamma"] = gamma_json(g);
        (*applied)["gamma_p"] = gamma_prime_json(gp);
        (*applied)["distance_to_trivial"] =
            hq::distance_to_trivial(g) + hq::distance_to_trivial(gp);
      }
      H = hq::act(g, gp, H, e);
    }
    return H;
  }
};

int cmd_normalize(const hq::RunConfig& cfg, const SolveArgs& a) {
  const hq::Signature eps = a.eps.resolve(cfg);
  json applied;
  const hq::RationalMapGerm H = a.load(cfg, eps, &applied);
  const hq::NormalizationResult res = hq::normalize(H, eps, a.options(cfg));
  if (cfg.format == "csv") {
    std::vector<std::string> row{fd(res.residual_norm),
                                 res.polished ? "true" : "false",
                                 res.gauge_note};
    for (double c : res.residuals.residuals) row.push_back(fd(c));
    emit(cfg,
         hq::to_csv({"residual_norm", "polished", "gauge_note", "cond0",
                     "cond1", "cond2", "cond3", "cond4", "cond5", "cond6"},
                    {row}));
  } else {
    json out{{"residual_norm", res.residual_norm},
             {"polished", res.polished},
             {"gauge_note", res.gauge_note},
             {"conditions", res.residuals.residuals},
             {"sign_defect", res.residuals.sign_defect},
             {"gamma", gamma_json(res.gamma)},
             {"gamma_p", gamma_prime_json(res.gamma_p)},
             {"normalized", map_json(res.normalized)}};
    if (!applied.empty()) out["applied"] = applied;
    emit(cfg, dump(out));
  }
  return 0;
}

int cmd_classify(const hq::RunConfig& cfg, const SolveArgs& a) {
  const hq::Signature eps = a.eps.resolve(cfg);
  json applied;
  const hq::RationalMapGerm H = a.load(cfg, eps, &applied);
  const hq::Classification c = hq::classify(H, eps, a.options(cfg));

  // With --perturb on a catalog reference the recovered member must match
  // the requested one; a mismatch is a domain failure.
  bool match = true;
  const bool check_roundtrip = a.perturb && a.src.opt_family->count() > 0;
  if (check_roundtrip)
    match = c.id.family == a.src.family && std::abs(c.id.s - a.src.s) < 1e-6;

  if (cfg.format == "csv") {
    emit(cfg,
         hq::to_csv({"family", "s", "eps", "label", "certificate",
                     "residual_norm", "match"},
                    {{std::to_string(c.id.family), fd(c.id.s),
                      std::to_string(int(c.id.eps)), c.id.label(),
                      fd(c.certificate),
                      fd(c.normalization.residual_norm),
                      match ? "true" : "false"}}));
  } else {
    json out{{"family", c.id.family},
             {"s", c.id.s},
             {"eps", int(c.id.eps)},
             {"label", c.id.label()},
             {"certificate", c.certificate},
             {"residual_norm", c.normalization.residual_norm},
             {"polished", c.normalization.polished}};
    if (!applied.empty()) out["applied"] = applied;
    if (check_roundtrip) {
      out["requested"] = {{"family", a.src.family}, {"s", a.src.s}};
      out["match"] = match;
    }
    emit(cfg, dump(out));
  }
  return match ? 0 : 1;
}

// ---------------------------------------------------------------------------
// act
// ---------------------------------------------------------------------------

struct ActArgs {
  MapSource src;
  EpsOpt eps;
  std::string params_path;
  bool random = false;
  CLI::Option* opt_params = nullptr;
};

int cmd_act(const hq::RunConfig& cfg, const ActArgs& a) {
  const hq::Signature eps = a.eps.resolve(cfg);
  const hq::RationalMapGerm H = a.src.load(eps);

  hq::GammaParams g;
  hq::GammaPrimeParams gp;
  if (a.opt_params->count()) {
    const json doc = json::parse(read_file(a.params_path));
    if (!doc.is_object() || !doc.contains("gamma") || !doc.contains("gamma_p"))
      throw hq::Error(
          "parameter file must be {\"gamma\": {...}, \"gamma_p\": {...}}");
    g = hq::gamma_from_json(doc["gamma"].dump());
    gp = hq::gamma_prime_from_json(doc["gamma_p"].dump());
  } else if (a.random) {
    hq::Rng rng(cfg.seed);
    g = hq::sample_gamma(rng);
    gp = hq::sample_gamma_prime(rng, eps);
  }  // else: trivial parameters, the identity action.

  const hq::RationalMapGerm moved = hq::act(g, gp, H, eps);
  const hq::MembershipReport rep =
      hq::maps_hypersurface(moved, eps, 300, 0.1, cfg.membership_tol,
                            cfg.seed);
  if (cfg.format == "csv") {
    emit(cfg, map_csv(moved));
  } else {
    emit(cfg, dump({{"gamma", gamma_json(g)},
                    {"gamma_p", gamma_prime_json(gp)},
                    {"map", map_json(moved)},
                    {"membership",
                     {{"pass", rep.pass},
                      {"max_residual", rep.max_residual}}}}));
  }
  return rep.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// stabilizer
// ---------------------------------------------------------------------------

struct StabilizerArgs {
  MapSource src;
  EpsOpt eps;
  int circle_samples = 16;
  int random_samples = 200;
};

// The candidate subgroup pairing (u z, w) with (u z1', u^2 z2', w') at a
// given unit u, used to report an explicit witness element.
void candidate_pair(C u, hq::GammaParams& g, hq::GammaPrimeParams& gp) {
  g = hq::GammaParams{};
  g.u = u;
  gp = hq::GammaPrimeParams{};
  gp.u = u * u * u;
  gp.a1 = std::conj(u) * std::conj(u);
}

int cmd_stabilizer(const hq::RunConfig& cfg, const StabilizerArgs& a) {
  const hq::Signature eps = a.eps.resolve(cfg);
  const hq::RationalMapGerm H = a.src.load(eps);
  const hq::StabilizerReport rep = hq::stabilizer_classify(
      H, eps, a.circle_samples, a.random_samples, cfg.seed);

  json witness;
  if (rep.kind != hq::StabilizerKind::trivial) {
    const C u = rep.kind == hq::StabilizerKind::circle
                    ? std::polar(1.0, 2.0 * kPi / 5.0)
                    : C(-1.0, 0.0);
    hq::GammaParams g;
    hq::GammaPrimeParams gp;
    candidate_pair(u, g, gp);
    witness = {{"gamma", gamma_json(g)},
               {"gamma_p", gamma_prime_json(gp)},
               {"residual", hq::jet_distance(hq::act(g, gp, H, eps), H)}};
  }

  if (cfg.format == "csv") {
    emit(cfg, hq::to_csv({"kind", "s", "circle_max_residual",
                          "two_element_residual", "random_min_residual"},
                         {{rep.kind_name(), fd(rep.s),
                           fd(rep.circle_max_residual),
                           fd(rep.two_element_residual),
                           fd(rep.random_min_residual)}}));
  } else {
    emit(cfg, dump({{"kind", rep.kind_name()},
                    {"s", rep.s},
                    {"circle_residuals", rep.circle_residuals},
                    {"circle_max_residual", rep.circle_max_residual},
                    {"two_element_residual", rep.two_element_residual},
                    {"random_min_residual", rep.random_min_residual},
                    {"random_argmin_distance", rep.random_argmin_distance},
                    {"witness", witness.empty() ? json() : witness}}));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// rank
// ---------------------------------------------------------------------------

struct RankArgs {
  int family = 2;
  double s0 = 0.5;
  EpsOpt eps;
  double step = 1e-6;
  double rel_tol = 1e-8;
  bool freeze_s = false;
};

int cmd_rank(const hq::RunConfig& cfg, const RankArgs& a) {
  const hq::RankReport rep = hq::rank_at_base(
      a.family, a.eps.resolve(cfg), a.s0, a.step, a.rel_tol, a.freeze_s);
  const int shown = std::min<int>(20, static_cast<int>(rep.singular_values.size()));
  if (cfg.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < shown; ++i)
      rows.push_back({std::to_string(i), fd(rep.singular_values(i))});
    emit(cfg, hq::to_csv({"index", "singular_value"}, rows));
  } else {
    json sv = json::array();
    for (int i = 0; i < shown; ++i) sv.push_back(rep.singular_values(i));
    emit(cfg, dump({{"rank", rep.rank},
                    {"rows", rep.rows},
                    {"cols", rep.cols},
                    {"singular_values", sv}}));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepArgs {
  int base_family = 2;
  double base_s = 0.0;
  EpsOpt eps;
  std::string grid_spec = "0.6,0.8,0.3,0.6,50";
};

// "z_re,z_im,re_w_rate,t_max,n"
std::vector<hq::SourcePoint> parse_grid_spec(const std::string& spec) {
  std::vector<double> v;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &pos);
    } catch (const std::exception&) {
      throw hq::Error("bad --grid-spec entry: " + tok);
    }
    if (pos != tok.size()) throw hq::Error("bad --grid-spec entry: " + tok);
    v.push_back(x);
  }
  if (v.size() != 5)
    throw hq::Error(
        "--grid-spec needs 5 comma-separated values: z_re,z_im,re_w,t_max,n");
  const int n = static_cast<int>(v[4]);
  if (n < 1 || v[4] != n) throw hq::Error("--grid-spec point count must be a positive integer");
  return hq::ray_grid(C(v[0], v[1]), v[2], v[3], n);
}

std::string sweep_csv(const hq::SweepReport& rep) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : rep.records) {
    std::vector<std::string> row{fd(r.p.z.real()), fd(r.p.z.imag()),
                                 fd(r.p.u)};
    if (r.valid) {
      row.push_back(std::to_string(r.classified.family));
      row.push_back(fd(r.classified.s));
      row.push_back(fd(r.certificate));
    } else {
      row.insert(row.end(), {"", "", ""});
    }
    row.push_back(r.flag);
    rows.push_back(row);
  }
  return hq::to_csv(
      {"p_re", "p_im", "p_u", "family", "s", "certificate", "flags"}, rows);
}

int cmd_sweep(const hq::RunConfig& cfg, const SweepArgs& a,
              bool format_explicit) {
  const hq::Signature eps = a.eps.resolve(cfg);
  const hq::NormalFormID base{a.base_family, a.base_s, eps};
  base.validate();
  const hq::SweepReport rep =
      hq::orbit_sweep(base, parse_grid_spec(a.grid_spec));

  // CSV is the plotting interface and the default here; --format json (or a
  // config file) switches the full report to JSON.
  if (format_explicit && cfg.format == "json") {
    json records = json::array();
    for (const auto& r : rep.records) {
      json e{{"p", {{"z", cjson(r.p.z)}, {"re_w", r.p.u}}},
             {"valid", r.valid},
             {"flag", r.flag}};
      if (r.valid) {
        e["family"] = r.classified.family;
        e["s"] = r.classified.s;
        e["certificate"] = r.certificate;
        e["other_family_distance"] = r.other_family_distance;
      }
      records.push_back(e);
    }
    emit(cfg, dump({{"base", rep.base.label()},
                    {"valid_count", rep.valid_count},
                    {"s_min", rep.s_min},
                    {"s_max", rep.s_max},
                    {"records", records}}));
    return 0;
  }

  emit(cfg, sweep_csv(rep));
  if (!cfg.out.empty()) {
    // Table went to the file; leave a one-object summary on stdout.
    std::cout << dump({{"base", rep.base.label()},
                       {"points", static_cast<int>(rep.records.size())},
                       {"valid_count", rep.valid_count},
                       {"s_min", rep.s_min},
                       {"s_max", rep.s_max},
                       {"out", cfg.out}})
              << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// accumulate
// ---------------------------------------------------------------------------

struct AccumulateArgs {
  EpsOpt eps;
  int source_family = 3;
  double source_s = 0.0;
  int target_family = 2;
  double target_s = 0.5;
  hq::AccumulationOptions opt;
  bool strict = false;
};

int cmd_accumulate(const hq::RunConfig& cfg, const AccumulateArgs& a) {
  const hq::Signature eps = a.eps.resolve(cfg);
  hq::AccumulationOptions opt = a.opt;
  opt.throw_on_stall = a.strict;
  const hq::AccumulationReport rep =
      hq::accumulation_search({a.source_family, a.source_s, eps},
                              {a.target_family, a.target_s, eps}, opt);

  const json summary{
      {"source", rep.source.label()},
      {"target", rep.target.label()},
      {"best_distance", rep.best_distance},
      {"stalled", rep.stalled},
      {"best_point", {{"z", cjson(rep.best_p.z)}, {"re_w", rep.best_p.u}}},
      {"source_family_members", rep.source_family_count},
      {"target_family_members", rep.target_family_count},
      {"unclassified", rep.unclassified_count},
      {"evaluations",
       rep.trace.empty() ? 0 : rep.trace.back().evaluation}};
  std::cout << dump(summary) << "\n";

  if (!cfg.out.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& t : rep.trace)
      rows.push_back({std::to_string(t.evaluation), fd(t.rho), fd(t.phi),
                      fd(t.re_w), fd(t.distance)});
    write_to(cfg.out, hq::to_csv(
        {"evaluation", "rho", "phi", "re_w", "distance"}, rows));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// census
// ---------------------------------------------------------------------------

struct CensusArgs {
  EpsOpt eps;
  int s_samples = 33;
  double s_max = 1.0;
  double join_tol = 1e-6;
};

int cmd_census(const hq::RunConfig& cfg, const CensusArgs& a) {
  const hq::CensusReport rep = hq::component_census(
      a.eps.resolve(cfg), a.s_samples, a.s_max, a.join_tol);
  if (cfg.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t ci = 0; ci < rep.components.size(); ++ci)
      for (const auto& label : rep.components[ci])
        rows.push_back({std::to_string(ci), label});
    emit(cfg, hq::to_csv({"component", "label"}, rows));
  } else {
    emit(cfg, dump({{"eps", int(rep.eps)},
                    {"component_count", rep.component_count},
                    {"components", rep.components},
                    {"max_path_step", rep.max_path_step},
                    {"min_cross_family_distance",
                     rep.min_cross_family_distance}}));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const hq::RunConfig& cfg, int criterion) {
  const std::vector<hq::CriterionResult> results =
      hq::run_acceptance(criterion);
  std::ostringstream out;
  int passed = 0;
  for (const auto& r : results) {
    out << hq::format_criterion_line(r) << "\n";
    if (r.pass) ++passed;
  }
  out << passed << "/" << results.size() << " criteria passed\n";
  emit(cfg, out.str());
  return passed == static_cast<int>(results.size()) && !results.empty() ? 0
                                                                        : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "hqmaps: rational maps between model hypersurfaces — catalog, "
      "normalization, classification, group actions, and orbit-topology "
      "experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  // Global options (valid before or after the subcommand name).
  std::string config_path, format, out_path;
  std::uint64_t seed = 42;
  int jet_order = 4;
  auto* opt_config = app.add_option(
      "--config", config_path, "Flat TOML config file (flags take precedence)");
  auto* opt_seed =
      app.add_option("--seed", seed, "Random seed for all sampling")->capture_default_str();
  auto* opt_jet_order =
      app.add_option("--jet-order", jet_order,
                     "Expansion order for series output (>= 3)")->capture_default_str();
  auto* opt_format = app.add_option("--format", format, "Output format")
                         ->check(CLI::IsMember({"json", "csv"}));
  auto* opt_out =
      app.add_option("--out", out_path, "Write output to a file instead of stdout");

  // catalog
  auto* sub_catalog = app.add_subcommand(
      "catalog", "List or emit the built-in model maps");
  sub_catalog->require_subcommand(1);
  sub_catalog->fallthrough();
  auto* cat_list = sub_catalog->add_subcommand(
      "list", "Tabulate the normal forms and compact-model maps");
  cat_list->fallthrough();
  EpsOpt list_eps;
  list_eps.attach(cat_list);
  auto* cat_emit = sub_catalog->add_subcommand(
      "emit", "Emit one map's exact coefficients");
  cat_emit->fallthrough();
  MapSource emit_src;
  EpsOpt emit_eps;
  emit_src.attach(cat_emit, /*allow_index=*/true);
  emit_eps.attach(cat_emit);
  auto* cat_jets = sub_catalog->add_subcommand(
      "jets", "Emit one map's identifying jet coordinates");
  cat_jets->fallthrough();
  MapSource jets_src;
  EpsOpt jets_eps;
  jets_src.attach(cat_jets, /*allow_index=*/true);
  jets_eps.attach(cat_jets);

  // expand
  auto* sub_expand = app.add_subcommand(
      "expand", "Taylor-expand a map to the configured order");
  sub_expand->fallthrough();
  MapSource expand_src;
  EpsOpt expand_eps;
  expand_src.attach(sub_expand, /*allow_index=*/true);
  expand_eps.attach(sub_expand);

  // check-membership
  auto* sub_member = app.add_subcommand(
      "check-membership", "Test whether a map sends one model into the other");
  sub_member->fallthrough();
  MembershipArgs member;
  member.src.attach(sub_member, /*allow_index=*/true);
  member.eps.attach(sub_member);
  member.opt_n = sub_member->add_option(
      "--samples,--n", member.n, "Number of sampled hypersurface points");
  sub_member->add_option("--radius", member.radius,
                         "Sampling radius around the origin")->capture_default_str();
  member.opt_tol =
      sub_member->add_option("--tol", member.tol, "Residual tolerance");

  // normalize / classify
  auto* sub_normalize = app.add_subcommand(
      "normalize", "Bring a map to normalized form by isotropies");
  sub_normalize->fallthrough();
  SolveArgs normalize_args;
  normalize_args.attach(sub_normalize, /*allow_index=*/false);
  auto* sub_classify = app.add_subcommand(
      "classify", "Normalize a map and locate it in the catalog");
  sub_classify->fallthrough();
  SolveArgs classify_args;
  classify_args.attach(sub_classify, /*allow_index=*/false);

  // act
  auto* sub_act = app.add_subcommand(
      "act", "Apply a source/target isotropy pair to a map");
  sub_act->fallthrough();
  ActArgs act_args;
  act_args.src.attach(sub_act, /*allow_index=*/false);
  act_args.eps.attach(sub_act);
  act_args.opt_params = sub_act->add_option(
      "--params", act_args.params_path,
      "JSON file {\"gamma\": {...}, \"gamma_p\": {...}}");
  sub_act->add_flag("--random", act_args.random,
                    "Use a seeded random isotropy pair");
  act_args.opt_params->excludes("--random");

  // stabilizer
  auto* sub_stab = app.add_subcommand(
      "stabilizer", "Classify the isotropy stabilizer of a normalized map");
  sub_stab->fallthrough();
  StabilizerArgs stab_args;
  stab_args.src.attach(sub_stab, /*allow_index=*/false);
  stab_args.eps.attach(sub_stab);
  sub_stab->add_option("--circle-samples", stab_args.circle_samples,
                       "Sampled points on the candidate circle")->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub_stab->add_option("--samples", stab_args.random_samples,
                       "Random nontrivial pairs to test")->capture_default_str()
      ->check(CLI::PositiveNumber);

  // rank
  auto* sub_rank = app.add_subcommand(
      "rank", "Rank of the orbit-map Jacobian at a catalog base point");
  sub_rank->fallthrough();
  RankArgs rank_args;
  sub_rank->add_option("--family", rank_args.family,
                       "Normal-form family (2 or 3)")->capture_default_str()
      ->check(CLI::IsMember({2, 3}));
  sub_rank->add_option("--s0,--s", rank_args.s0, "Base parameter s0 > 0")->capture_default_str()
      ->check(CLI::PositiveNumber);
  rank_args.eps.attach(sub_rank);
  sub_rank->add_option("--step", rank_args.step,
                       "Finite-difference step")->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub_rank->add_option("--rel-tol", rank_args.rel_tol,
                       "Relative singular-value cutoff")->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub_rank->add_flag("--freeze-s", rank_args.freeze_s,
                     "Drop the parameter direction (15 columns)");

  // sweep
  auto* sub_sweep = app.add_subcommand(
      "sweep", "Classify recentered germs along a ray of base points");
  sub_sweep->fallthrough();
  SweepArgs sweep_args;
  sub_sweep->add_option("--base-family", sweep_args.base_family,
                        "Family of the swept catalog member")->capture_default_str()
      ->check(CLI::IsMember({1, 2, 3}));
  sub_sweep->add_option("--base-s", sweep_args.base_s,
                        "Parameter of the swept catalog member")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  sweep_args.eps.attach(sub_sweep);
  sub_sweep->add_option("--grid-spec", sweep_args.grid_spec,
                        "Ray grid: z_re,z_im,re_w_rate,t_max,n")->capture_default_str();

  // accumulate
  auto* sub_accumulate = app.add_subcommand(
      "accumulate",
      "Search the translated orbit of one catalog member for points "
      "approaching another");
  sub_accumulate->fallthrough();
  AccumulateArgs acc_args;
  acc_args.eps.attach(sub_accumulate);
  sub_accumulate->add_option("--source-family", acc_args.source_family,
                             "Family whose orbit is searched")->capture_default_str();
  sub_accumulate->add_option("--source-s", acc_args.source_s,
                             "Parameter of the searched member")->capture_default_str();
  sub_accumulate->add_option("--target-family", acc_args.target_family,
                             "Family of the approach target")->capture_default_str();
  sub_accumulate->add_option("--target-s", acc_args.target_s,
                             "Parameter of the approach target")->capture_default_str();
  sub_accumulate->add_option("--rho-max", acc_args.opt.rho_max,
                             "Coarse grid translation modulus bound")->capture_default_str();
  sub_accumulate->add_option("--grid-rho", acc_args.opt.grid_rho,
                             "Coarse grid radial resolution")->capture_default_str();
  sub_accumulate->add_option("--grid-phi", acc_args.opt.grid_phi,
                             "Coarse grid angular resolution")->capture_default_str();
  sub_accumulate->add_option("--refine", acc_args.opt.refine_steps,
                             "Simplex refinement iterations")->capture_default_str();
  sub_accumulate->add_option("--stall-threshold",
                             acc_args.opt.stall_threshold,
                             "Distance above which the search counts as "
                             "stalled")->capture_default_str();
  sub_accumulate->add_flag("--strict", acc_args.strict,
                           "Treat a stalled search as an error (exit 1)");

  // census
  auto* sub_census = app.add_subcommand(
      "census", "Connected components of the sampled catalog under jet "
                "distance");
  sub_census->fallthrough();
  CensusArgs census_args;
  census_args.eps.attach(sub_census);
  sub_census->add_option("--s-samples", census_args.s_samples,
                         "Samples per family curve")->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub_census->add_option("--s-max", census_args.s_max,
                         "Largest sampled parameter")->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub_census->add_option("--join-tol", census_args.join_tol,
                         "Jet distance that identifies two members")->capture_default_str()
      ->check(CLI::PositiveNumber);

  // verify
  auto* sub_verify = app.add_subcommand(
      "verify", "Run the acceptance suite (one line per criterion)");
  sub_verify->fallthrough();
  std::string suite = "all";
  int criterion = 0;
  sub_verify->add_option("--suite", suite, "Criteria set")->capture_default_str()
      ->check(CLI::IsMember({"all"}));
  auto* opt_criterion =
      sub_verify->add_option("--criterion", criterion,
                             "Run a single criterion (1..9)")
          ->check(CLI::Range(1, 9));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    // Configuration: defaults, then the config file, then explicit flags.
    hq::RunConfig cfg;
    bool format_from_config = false;
    if (opt_config->count()) {
      const std::string text = read_file(config_path);
      format_from_config = hq::parse_flat_toml(text).count("format") > 0;
      cfg.apply_toml(text);
    }
    if (opt_seed->count()) cfg.seed = seed;
    if (opt_jet_order->count()) cfg.jet_order = jet_order;
    if (opt_format->count()) cfg.format = format;
    if (opt_out->count()) cfg.out = out_path;
    cfg.validate();
    const bool format_explicit = opt_format->count() > 0 || format_from_config;

    if (*cat_list) return cmd_catalog_list(cfg, list_eps.resolve(cfg));
    if (*cat_emit) return cmd_catalog_emit(cfg, emit_src, emit_eps.resolve(cfg));
    if (*cat_jets) return cmd_catalog_jets(cfg, jets_src, jets_eps.resolve(cfg));
    if (*sub_expand)
      return cmd_expand(cfg, expand_src, expand_eps.resolve(cfg));
    if (*sub_member) return cmd_check_membership(cfg, member);
    if (*sub_normalize) return cmd_normalize(cfg, normalize_args);
    if (*sub_classify) return cmd_classify(cfg, classify_args);
    if (*sub_act) return cmd_act(cfg, act_args);
    if (*sub_stab) return cmd_stabilizer(cfg, stab_args);
    if (*sub_rank) return cmd_rank(cfg, rank_args);
    if (*sub_sweep) return cmd_sweep(cfg, sweep_args, format_explicit);
    if (*sub_accumulate) return cmd_accumulate(cfg, acc_args);
    if (*sub_census) return cmd_census(cfg, census_args);
    if (*sub_verify)
      return cmd_verify(cfg, opt_criterion->count() ? criterion : 0);
    throw hq::Error("no subcommand selected");
  } catch (const hq::Error& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
}
