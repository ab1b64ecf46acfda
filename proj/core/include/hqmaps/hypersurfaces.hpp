#pragma once

// The two model hypersurfaces and their membership tests:
//   source  Im w  = |z|^2                       in C^2,
//   target  Im w' = |z1'|^2 + eps |z2'|^2       in C^3, eps = +1 or -1,
// together with the Cayley transforms linking them to the compact models
//   |z|^2 + |w|^2 = 1  and  |z1|^2 + |z2|^2 + eps |z3|^2 = 1,
// and the membership test for the class of 2-nondegenerate transversal maps
// that the normalization machinery operates on.

#include <array>
#include <complex>
#include <cstdint>
#include <string>

#include "hqmaps/algebra.hpp"
#include "hqmaps/errors.hpp"

namespace hq {

// Signature of the target hyperquadric; must be +1 or -1.
using Signature = int;

void require_signature(Signature eps);

// A point of the source hypersurface, encoded so membership holds exactly:
// the point is (z, u + i |z|^2).
struct SourcePoint {
  C z{0.0, 0.0};
  double u = 0.0;

  C w() const { return {u, std::norm(z)}; }
  std::array<C, 2> coords() const { return {z, w()}; }
};

double source_residual(C z, C w);
double target_residual(Signature eps, C z1, C z2, C w);

// Defect of a point of the compact target model |z1|^2+|z2|^2+eps|z3|^2 = 1.
double sphere_target_residual(Signature eps, C z1, C z2, C z3);

struct MembershipReport {
  double max_residual = 0.0;
  bool pass = false;
  int evaluated = 0;
  int skipped = 0;  // samples where a denominator was too small to evaluate
  std::array<C, 2> worst_point{};
};

// Samples n source-hypersurface points with |z|, |u| <= radius (seeded,
// deterministic), pushes them through H and reports the worst target
// residual. Samples at which a component denominator nearly vanishes are
// skipped and counted, never silently dropped.
MembershipReport maps_hypersurface(const RationalMapGerm& H, Signature eps,
                                   int n, double radius, double tol,
                                   std::uint64_t seed = 42);

// The analogous check for the compact models: samples n points of the unit
// sphere |z|^2 + |w|^2 = 1 in C^2 and tests the image against the compact
// target model of signature eps.
MembershipReport maps_sphere_model(const RationalMapGerm& H, Signature eps,
                                   int n, double tol, std::uint64_t seed = 42);

struct F2Diagnostics {
  bool fixes_origin = false;
  bool nondegenerate = false;     // |f1_z f2_z2 - f2_z f1_z2| > tol_nd at 0
  bool transversal = false;       // g_w(0) real-positive
  bool on_hypersurface = false;   // sampled membership
  bool holomorphic = false;       // denominators nonzero at 0
  double origin_norm = 0.0;
  C determinant{0.0, 0.0};
  double g_w_real = 0.0;
  double g_w_imag = 0.0;
  double membership_residual = 0.0;

  bool pass() const {
    return holomorphic && fixes_origin && nondegenerate && transversal &&
           on_hypersurface;
  }
  std::string summary() const;
};

inline constexpr double kNondegeneracyTol = 1e-9;
inline constexpr double kTransversalityTol = 1e-9;

// Membership test for the map class handled by the normalization: fixes 0,
// 2-nondegenerate, transversal, and maps the source hypersurface into the
// target one. Never throws; the diagnostics carry the failure reasons.
F2Diagnostics is_in_F2(const RationalMapGerm& H, Signature eps,
                       int membership_samples = 400,
                       double membership_radius = 0.1,
                       double membership_tol = 1e-9);

// Cayley transforms. The source transform maps the compact model onto the
// unbounded one with base point (0, 1) -> 0; its inverse reverses that. The
// target transforms do the same in C^3 with base point (0, 1, 0) -> 0. Each
// constructed map is self-checked on `self_check_samples` sampled model
// points (residual < 1e-10) and construction throws SelfCheckFailed if the
// check fails.
RationalMapGerm cayley_source(int self_check_samples = 500);
RationalMapGerm cayley_source_inverse(int self_check_samples = 500);
RationalMapGerm3 cayley_target(Signature eps, int self_check_samples = 500);
RationalMapGerm3 cayley_target_inverse(Signature eps,
                                       int self_check_samples = 500);

}  // namespace hq
