#pragma once

// The isotropy groups of the two model hypersurfaces at the origin as
// parametrized families of rational maps, their inverses, the group action
// on hypersurface maps, and the (non-isotropic) hypersurface translations
// used to move base points during orbit sweeps.

#include <array>
#include <complex>

#include "hqmaps/algebra.hpp"
#include "hqmaps/hypersurfaces.hpp"
#include "hqmaps/rng.hpp"

namespace hq {

// Standard parameters (lambda, r, u, c) of a source isotropy
//   sigma(z, w) = ( lambda u (z + c w), lambda^2 w )
//                 / ( 1 - 2i conj(c) z + (r - i|c|^2) w ).
struct GammaParams {
  double lambda = 1.0;
  double r = 0.0;
  C u{1.0, 0.0};
  C c{0.0, 0.0};

  void validate() const;
  bool trivial(double tol = 1e-12) const;
};

// Standard parameters (lambda', r', u', a', c', sigma) of a target isotropy
//   sigma'(z', w') = ( lambda' U' (z' + c' w'), sigma lambda'^2 w' ) / D,
//   D = 1 - 2i (conj(c1') z1' + eps conj(c2') z2')
//         + (r' - i (|c1'|^2 + eps |c2'|^2)) w',
//   U' = [ [u' a1', -eps u' a2'], [conj(a2'), conj(a1')] ],
// subject to |a1'|^2 + eps |a2'|^2 = sigma. For the action on hypersurface
// maps only sigma = +1 is used; the sigma = -1 branch exists for eps = -1.
struct GammaPrimeParams {
  double lambda = 1.0;
  double r = 0.0;
  C u{1.0, 0.0};
  C a1{1.0, 0.0};
  C a2{0.0, 0.0};
  C c1{0.0, 0.0};
  C c2{0.0, 0.0};
  int sigma_sign = 1;

  void validate(Signature eps) const;
  bool trivial(double tol = 1e-12) const;
  std::array<std::array<C, 2>, 2> matrix_u(Signature eps) const;
};

RationalMapGerm sigma_map(const GammaParams& g);
RationalMapGerm3 sigma_prime_map(const GammaPrimeParams& g, Signature eps);

// Closed-form inverse parameters, verified on return by composing the two
// maps and comparing the order-4 jet against the identity (tolerance 1e-10);
// verification failure throws SolveFailed.
GammaParams invert_gamma(const GammaParams& g, bool verify = true);
GammaPrimeParams invert_gamma_prime(const GammaPrimeParams& g, Signature eps,
                                    bool verify = true);

// The left action (g, g', H) -> sigma'_{g'} . H . sigma_g^{-1}.
RationalMapGerm act(const GammaParams& g, const GammaPrimeParams& gp,
                    const RationalMapGerm& H, Signature eps);

// Recovers standard parameters from a group element given as a rational map
// (via its 2-jet). Used to verify group closure and to report witnesses.
GammaParams extract_gamma(const RationalMapGerm& m);
GammaPrimeParams extract_gamma_prime(const RationalMapGerm3& m, Signature eps);

// Parameter-space distances to the trivial element (used for stabilizer and
// round-trip reports).
double distance_to_trivial(const GammaParams& g);
double distance_to_trivial(const GammaPrimeParams& g);

// Seeded draws from a bounded parameter box (lambda in [1/2, 2], |r| <= 1,
// |u| = 1, |c|, |a2'|, |c1'|, |c2'| <= 1/2, |a1'| fixed by the constraint with
// a uniform phase). Used for round-trip checks, stabilizer searches, and
// randomized perturbations.
GammaParams sample_gamma(Rng& rng);
GammaPrimeParams sample_gamma_prime(Rng& rng, Signature eps);

// Hypersurface translations (automorphisms that do not fix the origin).
// source_translation(p) maps 0 -> p on the source hypersurface;
// source_translation_inverse(p) maps p -> 0. Likewise for the target with a
// point q = (q1, q2, q3) satisfying Im q3 = |q1|^2 + eps |q2|^2 (checked to
// 1e-12, else NotOnHypersurface). Each map is self-checked on
// `self_check_samples` hypersurface points (residual < 1e-12).
RationalMapGerm source_translation(const SourcePoint& p,
                                   int self_check_samples = 200);
RationalMapGerm source_translation_inverse(const SourcePoint& p,
                                           int self_check_samples = 200);
RationalMapGerm3 target_translation(const std::array<C, 3>& q, Signature eps,
                                    int self_check_samples = 200);
RationalMapGerm3 target_translation_inverse(const std::array<C, 3>& q,
                                            Signature eps,
                                            int self_check_samples = 200);

}  // namespace hq
