#pragma once
// Catalog of exact rational model maps: the three normal-form families on the
// hyperquadric model and the seven classical maps on the compact model,
// together with the jet coordinates that identify a germ.

#include <array>
#include <string>

#include "hqmaps/algebra.hpp"
#include "hqmaps/errors.hpp"
#include "hqmaps/hypersurfaces.hpp"

namespace hq {

// Identifies one member of the normal-form catalog: family in {1,2,3},
// parameter s >= 0 (family 1 carries no parameter), target signature eps.
struct NormalFormID {
  int family = 1;
  double s = 0.0;
  Signature eps = 1;

  void validate() const;
  std::string label() const;
};

// Exact rational representative of the given catalog member, written in the
// hyperquadric coordinates. All coefficients are exact in double precision.
RationalMapGerm normal_form_map(const NormalFormID& id);

// The classical classification list between the compact models (unit sphere
// in C^2 to the signature-eps model in C^3), indexed 1..7. Indices 5..7
// require eps = -1. Index 3 has a component singular at z = 0; index 7 is
// the degenerate map (1, w, w) and lies outside the nondegenerate class.
RationalMapGerm faran_lebl_map(int index, Signature eps);

// 17 derivative values identifying a germ: d/dz, d/dw, d2/dz2, d2/dzdw,
// d2/dw2 of each of the three components (grouped by derivative), then
// d3/dz2dw of the first two components.
struct JetCoords {
  std::array<C, 17> v{};
  int order = 3;
};

JetCoords jet_coordinates(const RationalMapGerm& H, int order = 3);
double jet_distance(const JetCoords& a, const JetCoords& b);
double jet_distance(const RationalMapGerm& A, const RationalMapGerm& B);

// Derivative values that locate a normalized map inside the catalog:
// s = 2|f1_ww(0)|, x = f2_ww(0), y = Im f2_zzw(0).
struct DeterminingInvariants {
  double s = 0.0;
  C x{0.0, 0.0};
  double y = 0.0;
};

DeterminingInvariants determining_invariants(const RationalMapGerm& H);

}  // namespace hq
