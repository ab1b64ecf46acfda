#include "hqmaps/topology_lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "hqmaps/errors.hpp"
#include "hqmaps/isotropies.hpp"

namespace hq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Minimizes fn over [lo, hi] by a coarse scan followed by golden-section
// refinement of the best bracket; fn need not be globally unimodal.
double scan_minimize(const std::function<double(double)>& fn, double lo,
                     double hi, int coarse = 64, int refine = 48) {
  double best_x = lo, best_f = kInf;
  for (int i = 0; i <= coarse; ++i) {
    const double x = lo + (hi - lo) * i / coarse;
    const double f = fn(x);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  const double h = (hi - lo) / coarse;
  double a = std::max(lo, best_x - h), b = std::min(hi, best_x + h);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int i = 0; i < refine; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = fn(d);
    }
  }
  return std::min({best_f, fc, fd});
}

// Jet distance from a normalized map to the nearest sampled member of every
// family other than `own`, minimized over that family's parameter.
double nearest_other_family(const JetCoords& jets, int own, Signature eps,
                            double s_hint) {
  double best = kInf;
  for (int family : {1, 2, 3}) {
    if (family == own) continue;
    if (family == 1) {
      best = std::min(
          best, jet_distance(jets, jet_coordinates(normal_form_map(
                                       {1, 0.0, eps}))));
      continue;
    }
    const double s_hi = std::max(1.5, s_hint + 1.0);
    const auto fn = [&](double s) {
      return jet_distance(
          jets, jet_coordinates(normal_form_map({family, s, eps})));
    };
    best = std::min(best, scan_minimize(fn, 0.0, s_hi));
  }
  return best;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void join(int i, int j) { parent[find(i)] = find(j); }
};

}  // namespace

RationalMapGerm recenter(const RationalMapGerm& H, const SourcePoint& p,
                         Signature eps) {
  const RationalMapGerm to_p = source_translation(p);
  const std::vector<C> q = H.eval(p.coords());
  const RationalMapGerm3 back =
      target_translation_inverse({q[0], q[1], q[2]}, eps);
  return rational_compose(back, rational_compose(H, to_p));
}

std::vector<SourcePoint> ray_grid(C z_dir, double re_w_rate, double t_max,
                                  int n) {
  if (n < 1) throw Error("ray_grid: need at least one step");
  std::vector<SourcePoint> grid;
  grid.reserve(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    const double t = t_max * j / n;
    grid.push_back(SourcePoint{t * z_dir, t * re_w_rate});
  }
  return grid;
}

SweepReport orbit_sweep(const NormalFormID& base,
                        const std::vector<SourcePoint>& grid) {
  base.validate();
  const Signature eps = base.eps;
  const RationalMapGerm H = normal_form_map(base);

  SweepReport rep;
  rep.base = base;
  rep.records.reserve(grid.size());
  double s_lo = kInf, s_hi = -kInf;

  for (const SourcePoint& p : grid) {
    SweepRecord rec;
    rec.p = p;
    try {
      const RationalMapGerm moved = recenter(H, p, eps);
      const Classification cl = classify(moved, eps);
      rec.valid = true;
      rec.classified = cl.id;
      rec.certificate = cl.certificate;
      rec.other_family_distance = nearest_other_family(
          jet_coordinates(cl.normalization.normalized), cl.id.family, eps,
          cl.id.s);
      ++rep.valid_count;
      s_lo = std::min(s_lo, cl.id.s);
      s_hi = std::max(s_hi, cl.id.s);
    } catch (const Error& e) {
      rec.flag = std::string("out_of_class: ") + e.what();
    }
    rep.records.push_back(rec);
  }
  if (rep.valid_count > 0) {
    rep.s_min = s_lo;
    rep.s_max = s_hi;
  }
  return rep;
}

AccumulationReport accumulation_search(const NormalFormID& source,
                                       const NormalFormID& target,
                                       const AccumulationOptions& opt) {
  source.validate();
  target.validate();
  if (source.eps != target.eps)
    throw Error("accumulation_search: source and target signatures differ");
  const Signature eps = source.eps;
  const RationalMapGerm src_map = normal_form_map(source);
  const JetCoords tgt_jets = jet_coordinates(normal_form_map(target));

  AccumulationReport rep;
  rep.source = source;
  rep.target = target;
  rep.best_distance = kInf;
  int n_eval = 0;

  const auto objective = [&](double rho, double phi, double re_w) -> double {
    ++n_eval;
    if (rho < 0.0 || rho > 1.5) return kInf;
    const SourcePoint p{std::polar(rho, phi), re_w};
    double dist = kInf;
    try {
      const RationalMapGerm moved = recenter(src_map, p, eps);
      const Classification cl = classify(moved, eps);
      if (cl.id.family == source.family)
        ++rep.source_family_count;
      else if (cl.id.family == target.family)
        ++rep.target_family_count;
      dist = jet_distance(jet_coordinates(cl.normalization.normalized),
                          tgt_jets);
    } catch (const Error&) {
      ++rep.unclassified_count;
      return kInf;
    }
    if (dist < rep.best_distance) {
      rep.best_distance = dist;
      rep.best_p = p;
      rep.trace.push_back({n_eval, rho, phi, re_w, dist});
    }
    return dist;
  };

  // Coarse polar grid over the translation point, starting at the trivial
  // translation.
  objective(0.0, 0.0, 0.0);
  for (int i = 1; i <= opt.grid_rho; ++i) {
    const double rho = opt.rho_max * i / opt.grid_rho;
    for (int j = 0; j < opt.grid_phi; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / opt.grid_phi;
      objective(rho, phi, 0.0);
    }
  }

  // Derivative-free simplex refinement around the coarse minimum.
  std::array<double, 3> x0{rep.best_p.z == C(0.0) ? 0.0 : std::abs(rep.best_p.z),
                           rep.best_p.z == C(0.0) ? 0.0
                                                  : std::arg(rep.best_p.z),
                           rep.best_p.u};
  struct Vertex {
    std::array<double, 3> x;
    double f;
  };
  const auto eval = [&](const std::array<double, 3>& x) {
    return objective(x[0], x[1], x[2]);
  };
  std::array<Vertex, 4> simplex;
  simplex[0] = {x0, eval(x0)};
  for (int i = 0; i < 3; ++i) {
    std::array<double, 3> x = x0;
    x[static_cast<std::size_t>(i)] += 0.05;
    simplex[static_cast<std::size_t>(i) + 1] = {x, eval(x)};
  }
  for (int it = 0; it < opt.refine_steps; ++it) {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    std::array<double, 3> centroid{0, 0, 0};
    for (int v = 0; v < 3; ++v)
      for (int i = 0; i < 3; ++i)
        centroid[static_cast<std::size_t>(i)] +=
            simplex[static_cast<std::size_t>(v)]
                .x[static_cast<std::size_t>(i)] /
            3.0;
    const auto blend = [&](double t) {
      std::array<double, 3> x;
      for (int i = 0; i < 3; ++i)
        x[static_cast<std::size_t>(i)] =
            centroid[static_cast<std::size_t>(i)] +
            t * (centroid[static_cast<std::size_t>(i)] -
                 simplex[3].x[static_cast<std::size_t>(i)]);
      return x;
    };
    const std::array<double, 3> xr = blend(1.0);
    const double fr = eval(xr);
    if (fr < simplex[0].f) {
      const std::array<double, 3> xe = blend(2.0);
      const double fe = eval(xe);
      simplex[3] = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
    } else if (fr < simplex[2].f) {
      simplex[3] = {xr, fr};
    } else {
      const std::array<double, 3> xc = blend(0.5);
      const double fc = eval(xc);
      if (fc < simplex[3].f) {
        simplex[3] = {xc, fc};
      } else {
        for (int v = 1; v < 4; ++v)
          for (int i = 0; i < 3; ++i)
            simplex[static_cast<std::size_t>(v)]
                .x[static_cast<std::size_t>(i)] =
                0.5 * (simplex[static_cast<std::size_t>(v)]
                           .x[static_cast<std::size_t>(i)] +
                       simplex[0].x[static_cast<std::size_t>(i)]);
        for (int v = 1; v < 4; ++v)
          simplex[static_cast<std::size_t>(v)].f =
              eval(simplex[static_cast<std::size_t>(v)].x);
      }
    }
  }

  rep.stalled = !(rep.best_distance < opt.stall_threshold);
  if (rep.stalled && opt.throw_on_stall) {
    std::ostringstream msg;
    msg << "accumulation search from " << source.label() << " toward "
        << target.label() << " stalled at distance " << rep.best_distance;
    throw SearchStalled(msg.str(), rep.best_distance);
  }
  return rep;
}

CensusReport component_census(Signature eps, int s_samples, double s_max,
                              double join_tol) {
  require_signature(eps);
  if (s_samples < 3) throw Error("component_census: need at least 3 samples");
  if (!(s_max > 0.5)) throw Error("component_census: s_max must exceed 1/2");

  std::vector<double> s_grid;
  for (int j = 0; j < s_samples; ++j)
    s_grid.push_back(s_max * j / (s_samples - 1));
  if (std::none_of(s_grid.begin(), s_grid.end(),
                   [](double s) { return std::abs(s - 0.5) < 1e-15; }))
    s_grid.push_back(0.5);
  std::sort(s_grid.begin(), s_grid.end());

  struct Node {
    NormalFormID id;
    JetCoords jets;
  };
  std::vector<Node> nodes;
  nodes.push_back({{1, 0.0, eps}, jet_coordinates(normal_form_map({1, 0.0, eps}))});
  for (int family : {2, 3})
    for (double s : s_grid)
      nodes.push_back(
          {{family, s, eps}, jet_coordinates(normal_form_map({family, s, eps}))});

  CensusReport rep;
  rep.eps = eps;
  UnionFind uf(static_cast<int>(nodes.size()));
  rep.min_cross_family_distance = kInf;

  // Join along the explicit continuous s-curves of each family and record
  // the largest jet step (the continuity evidence).
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (nodes[i].id.family != nodes[i + 1].id.family) continue;
    uf.join(static_cast<int>(i), static_cast<int>(i + 1));
    rep.max_path_step = std::max(
        rep.max_path_step, jet_distance(nodes[i].jets, nodes[i + 1].jets));
  }
  // Join coincident members across families.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (nodes[i].id.family == nodes[j].id.family) continue;
      const double d = jet_distance(nodes[i].jets, nodes[j].jets);
      rep.min_cross_family_distance =
          std::min(rep.min_cross_family_distance, d);
      if (d < join_tol) uf.join(static_cast<int>(i), static_cast<int>(j));
    }
  }

  std::vector<int> roots;
  std::vector<std::vector<std::string>> groups;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const int r = uf.find(static_cast<int>(i));
    std::size_t g = 0;
    for (; g < roots.size(); ++g)
      if (roots[g] == r) break;
    if (g == roots.size()) {
      roots.push_back(r);
      groups.emplace_back();
    }
    groups[g].push_back(nodes[i].id.label());
  }
  rep.component_count = static_cast<int>(groups.size());
  rep.components = std::move(groups);
  return rep;
}

QuotientProbeReport quotient_topology_probe(
    Signature eps, const AccumulationReport* accumulation) {
  require_signature(eps);
  QuotientProbeReport rep;
  rep.eps = eps;
  rep.s_star = 0.5;
  const JetCoords star =
      jet_coordinates(normal_form_map({2, rep.s_star, eps}));

  // (a) classification is continuous along s_n = s_star + 1/n.
  for (int n = 1; n <= 12; ++n) {
    const Classification cl =
        classify(normal_form_map({2, rep.s_star + 1.0 / n, eps}), eps);
    rep.continuity_distances.push_back(jet_distance(
        jet_coordinates(cl.normalization.normalized), star));
  }
  const double first = rep.continuity_distances.front();
  const double last = rep.continuity_distances.back();
  rep.continuity_ok = last < first / 5.0 && last < 0.2;

  // (b) cross-family proximity along the matched-s slice.
  rep.min_interfamily_distance = kInf;
  const int n_grid = 121;
  for (int j = 0; j < n_grid; ++j) {
    const double s = 1.2 * j / (n_grid - 1);
    const double d =
        jet_distance(jet_coordinates(normal_form_map({2, s, eps})),
                     jet_coordinates(normal_form_map({3, s, eps})));
    if (d < rep.min_interfamily_distance) {
      rep.min_interfamily_distance = d;
      rep.argmin_s = s;
    }
  }
  rep.families_meet = rep.min_interfamily_distance < 1e-6;

  if (accumulation != nullptr)
    rep.accumulation_best_distance = accumulation->best_distance;

  std::ostringstream sum;
  sum << "continuity along s -> " << rep.s_star << ": distances "
      << first << " -> " << last
      << (rep.continuity_ok ? " (decaying)" : " (NOT decaying)")
      << "; min cross-family distance " << rep.min_interfamily_distance
      << " at s = " << rep.argmin_s
      << (rep.families_meet ? " (families meet)" : " (families separated)");
  if (rep.accumulation_best_distance >= 0.0)
    sum << "; accumulation search best distance "
        << rep.accumulation_best_distance;
  rep.summary = sum.str();
  return rep;
}

}  // namespace hq
