#pragma once

// Desk-scale topology experiments on the catalog orbits: translation sweeps
// tracing orbit curves through the normal-form parameter space, the
// accumulation search between two distinct orbits, the connected-component
// census of the catalog, and the quotient-topology probe that summarizes
// continuity and accumulation evidence.

#include <string>
#include <vector>

#include "hqmaps/catalog.hpp"
#include "hqmaps/hypersurfaces.hpp"
#include "hqmaps/normalization.hpp"

namespace hq {

// The germ of H at the source point p, recentered so it fixes the origin
// again: target_translation(H(p))^{-1} . H . source_translation(p). The
// result is equivalent to H under the full (non-isotropic) automorphism
// groups, so classifying it traces the orbit of H through the catalog.
RationalMapGerm recenter(const RationalMapGerm& H, const SourcePoint& p,
                         Signature eps);

// n+1 source-hypersurface points p(t) = (t z_dir, t re_w_rate + i |t z_dir|^2)
// for t = j t_max / n, j = 0..n; the straight rays used by sweeps.
std::vector<SourcePoint> ray_grid(C z_dir, double re_w_rate, double t_max,
                                  int n);

// One grid point of an orbit sweep.
struct SweepRecord {
  SourcePoint p;
  bool valid = false;  // recentered map classified with a tight certificate
  NormalFormID classified;  // meaningful only when valid
  double certificate = 0.0;
  // Jet distance from the normalized recentered map to the nearest catalog
  // member of any *other* family (distance minimized over that family's
  // parameter); the crossing shows up as this dropping to ~0.
  double other_family_distance = 0.0;
  std::string flag;  // empty, or "out_of_class: <reason>"
};

struct SweepReport {
  NormalFormID base;
  std::vector<SweepRecord> records;
  int valid_count = 0;

  double s_min = 0.0, s_max = 0.0;  // observed parameter range over valid records
};

// Classifies the recentered germ at every grid point. Per-point failures
// (the recentered map leaving the handled class, or classification not
// converging) are recorded in the flag, never fatal.
SweepReport orbit_sweep(const NormalFormID& base,
                        const std::vector<SourcePoint>& grid);

struct AccumulationOptions {
  double rho_max = 0.9;     // coarse stage: translation modulus grid
  int grid_rho = 20;
  int grid_phi = 20;
  int refine_steps = 200;   // Nelder-Mead iterations over (rho, phi, Re w)
  double stall_threshold = 1e-2;
  bool throw_on_stall = false;  // throw SearchStalled instead of flagging
};

struct AccumulationTracePoint {
  int evaluation = 0;
  double rho = 0.0, phi = 0.0, re_w = 0.0;
  double distance = 0.0;  // best distance so far (monotone decreasing)
};

struct AccumulationReport {
  NormalFormID source, target;
  double best_distance = 0.0;
  SourcePoint best_p;
  std::vector<AccumulationTracePoint> trace;
  bool stalled = false;
  // Families observed among the classifiable evaluated orbit members.
  int source_family_count = 0;
  int target_family_count = 0;
  int unclassified_count = 0;
};

// Minimizes the jet distance between normalized recentered orbit members of
// `source` and the catalog member `target` over the translation point, by a
// coarse polar grid followed by derivative-free simplex refinement.
AccumulationReport accumulation_search(const NormalFormID& source,
                                       const NormalFormID& target,
                                       const AccumulationOptions& opt = {});

struct CensusReport {
  Signature eps = 1;
  int component_count = 0;
  // Labels of the sampled catalog members, grouped by component.
  std::vector<std::vector<std::string>> components;
  // Continuity evidence along the family curves: the largest jet step
  // between adjacent s-samples (shrinks as the grid refines).
  double max_path_step = 0.0;
  // Smallest cross-family jet distance found (the crossing for eps = -1).
  double min_cross_family_distance = 0.0;
};

// Connected components of the sampled catalog: members are joined along the
// explicit continuous s-curves of their own family and whenever two sampled
// members coincide in jet coordinates (distance < join_tol). The s-grid
// always contains 0, 1/2 and s_max exactly.
CensusReport component_census(Signature eps, int s_samples = 33,
                              double s_max = 1.0, double join_tol = 1e-6);

struct QuotientProbeReport {
  Signature eps = -1;
  // (a) Continuity: jet distance of classified catalog members along the
  // sequence s_n = s_star + 1/n to the member at s_star.
  double s_star = 0.5;
  std::vector<double> continuity_distances;
  bool continuity_ok = false;
  // (b) Cross-family proximity near the crossing parameter: the minimum jet
  // distance between same-s members of families 2 and 3 over an s-grid.
  double min_interfamily_distance = 0.0;
  double argmin_s = 0.0;
  bool families_meet = false;  // < meet_tol somewhere (expected for eps=-1)
  // Imported accumulation evidence, when supplied.
  double accumulation_best_distance = -1.0;  // negative when absent
  std::string summary;
};

// Evidence report for the identification of the quotient and jet topologies:
// classification is continuous along convergent catalog sequences, and for
// eps = -1 the two family curves meet at the crossing while for eps = +1
// they stay separated. Pass an accumulation report to embed its distance.
QuotientProbeReport quotient_topology_probe(
    Signature eps = -1, const AccumulationReport* accumulation = nullptr);

}  // namespace hq
