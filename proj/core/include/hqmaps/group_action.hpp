#pragma once

// The 16-parameter orbit map through the two-parameter catalog families:
// isotropy pair plus the family parameter s, its Jacobian rank at the
// trivial-isotropy base point, stabilizer classification by explicit
// candidate subgroups plus seeded random search, and the convergence
// experiment measuring how parameter sequences and their acted maps decay
// together.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hqmaps/catalog.hpp"
#include "hqmaps/isotropies.hpp"

namespace hq {

// A point of the parameter space Gamma x Gamma' x R_{>0} in a fixed global
// chart of 16 real coordinates:
//   [0] lambda    [1] r       [2] arg u     [3] Re c      [4] Im c
//   [5] lambda'   [6] r'      [7] arg u'    [8] arg a1'   [9] Re a2'
//   [10] Im a2'   [11] Re c1' [12] Im c1'   [13] Re c2'   [14] Im c2'
//   [15] s
// with |a1'| = sqrt(1 - eps |a2'|^2), so the constraint
// |a1'|^2 + eps |a2'|^2 = 1 holds by construction (sigma = +1 branch).
struct OrbitParams {
  GammaParams gamma;
  GammaPrimeParams gamma_p;
  double s = 0.5;

  // Trivial isotropy pair over parameter s0.
  static OrbitParams base(double s0);
  static OrbitParams from_chart(const Eigen::VectorXd& chart, Signature eps);
  Eigen::VectorXd chart() const;

  void validate(Signature eps) const;
};

// Jet coordinates of act(gamma, gamma_p, G_{family,s,eps}); family in {2,3}.
JetCoords orbit_map(const OrbitParams& xi, int family, Signature eps);

struct RankReport {
  int rank = 0;
  Eigen::VectorXd singular_values;  // descending
  int rows = 0;
  int cols = 0;
};

// Rank of the real Jacobian (34 rows: 17 complex jet coordinates split into
// real and imaginary parts; 16 columns, or 15 with freeze_s) of the orbit
// map at the trivial-isotropy base point over G_{family,s0,eps}. Central
// differences with one Richardson refinement; the rank counts singular
// values >= rel_tol * sigma_max.
RankReport rank_at_base(int family, Signature eps, double s0,
                        double step = 1e-6, double rel_tol = 1e-8,
                        bool freeze_s = false);

enum class StabilizerKind { trivial, circle, two_element };

struct StabilizerReport {
  StabilizerKind kind = StabilizerKind::trivial;
  double s = 0.0;  // determining invariant of the input map
  // Candidate circle subgroup (u z, w) paired with (u z1', u^2 z2', w'):
  // residual at each sampled u (none of them 1).
  std::vector<double> circle_residuals;
  double circle_max_residual = 0.0;
  // Candidate two-element subgroup: the u = -1 slice of the same pairing.
  double two_element_residual = 0.0;
  // Seeded random nontrivial pairs: smallest action residual found and the
  // parameter distance to trivial of that minimizer.
  double random_min_residual = 0.0;
  double random_argmin_distance = 0.0;

  std::string kind_name() const;
};

// Classifies the stabilizer of a normalized map (one that passes
// verify_normal_conditions) by testing the explicit candidate subgroups and
// running a seeded random residual search. Witnesses are cross-checked
// against the parameter-based prediction (s > 0 => trivial; s = 0 => circle
// or two-element); disagreement throws Inconsistent.
StabilizerReport stabilizer_classify(const RationalMapGerm& H, Signature eps,
                                     int circle_samples = 16,
                                     int random_samples = 200,
                                     std::uint64_t seed = 42);

// One term of a parameter sequence acting on a catalog member.
struct ConvergencePoint {
  int n = 0;
  bool evaluated = false;     // action and jet extraction succeeded
  double param_distance = 0.0;  // distance of (gamma_n, gamma'_n) to trivial
  double image_distance = 0.0;  // jet distance of the acted map to the base
};

struct SequenceSpec {
  NormalFormID base;  // the (constant) catalog member being acted on
  // n >= 1 -> the isotropy pair applied at step n.
  std::function<std::pair<GammaParams, GammaPrimeParams>(int)> params_at;
  int n_terms = 12;
  std::string name;
};

struct ConvergenceReport {
  std::string name;
  std::vector<ConvergencePoint> points;
  bool divergent = false;  // a term failed to evaluate or image jets blew up
  // Least-squares slope of log(param_distance) against log(n) over points
  // with positive distance; ~-1 for a 1/n sequence, 0 when undefined.
  double fitted_decay_rate = 0.0;
};

// Runs the sequence and records both decay curves: parameter distance to the
// trivial pair and jet distance of the acted map to the base member. A
// sequence whose image jets grow beyond 1e3, grow tenfold, or fail to
// evaluate is flagged divergent.
ConvergenceReport convergence_experiment(const SequenceSpec& seq);

}  // namespace hq
