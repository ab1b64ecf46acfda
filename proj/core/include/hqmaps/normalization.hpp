#pragma once
// Two-stage normalization of a class member onto the catalog normal form,
// and classification of the result.

#include <array>
#include <string>

#include "hqmaps/algebra.hpp"
#include "hqmaps/catalog.hpp"
#include "hqmaps/hypersurfaces.hpp"
#include "hqmaps/isotropies.hpp"

namespace hq {

// Residuals of the seven normalization conditions, one magnitude each:
//  0: |H_z(0) - (1,0,0)|        1: |H_w(0) - (0,0,1)|
//  2: |f2_zz(0) - 2|            3: |f2_zw(0)|
//  4: |Im f1_ww(0)|             5: |Re g_ww(0)|
//  6: |Re f2_zzw(0)|
// Condition 4 also requires Re f1_ww(0) >= 0; its negative part is recorded
// separately as sign_defect.
struct SevenConditionReport {
  std::array<double, 7> residuals{};
  double sign_defect = 0.0;

  double max_residual() const;
  bool pass(double tol = 1e-8) const;
};

SevenConditionReport verify_normal_conditions(const RationalMapGerm& H,
                                              Signature eps);

struct NormalizationResult {
  RationalMapGerm normalized;
  // Parameters in the action convention: act(gamma, gamma_p, input) equals
  // `normalized` on jets.
  GammaParams gamma;
  GammaPrimeParams gamma_p;
  SevenConditionReport residuals;
  double residual_norm = 0.0;  // Euclidean norm of the 19 scalar residuals
  bool polished = false;       // the least-squares stage was engaged
  std::string gauge_note;      // set when s = 0 leaves a stabilizer gauge
};

// Options for the two-stage solver; defaults match the documented contract.
struct NormalizeOptions {
  double target_residual = 1e-10;   // stage-B stopping target
  double accept_residual = 1e-8;    // final acceptance threshold
  int max_iterations = 100;         // stage-B iteration cap
};

// Brings H to normalized form by a staged closed-form elimination (stage A)
// followed, if needed, by a Levenberg-Marquardt polish of all 15 real
// isotropy parameters against the 19 scalar residuals (stage B).
// Throws NotInF2 when the input fails the class test and NoConvergence when
// the final residual exceeds the acceptance threshold.
NormalizationResult normalize(const RationalMapGerm& H, Signature eps,
                              const NormalizeOptions& opt = {});

struct Classification {
  NormalFormID id;
  double certificate = 0.0;  // jet distance to the chosen catalog member
  NormalizationResult normalization;
};

// Normalizes H and locates it in the catalog via the determining invariants
// (s, x, y). Throws Unclassifiable when the certificate exceeds 1e-6.
Classification classify(const RationalMapGerm& H, Signature eps,
                        const NormalizeOptions& opt = {});

inline constexpr double kCertificateTol = 1e-6;

}  // namespace hq
