#include "hqmaps/isotropies.hpp"

#include <cmath>

#include "hqmaps/rng.hpp"

namespace hq {

namespace {

constexpr double kUnitTol = 1e-12;

double jet_distance4(const RationalMapGerm& A, const RationalMapGerm& B) {
  double s = 0.0;
  for (int c = 0; c < A.components(); ++c) {
    Jet ja = expand(A.comp[c], 4), jb = expand(B.comp[c], 4);
    for (const auto& [k, v] : ja.coeffs) s += std::norm(v - jb.coeff(k.e[0], k.e[1]));
    for (const auto& [k, v] : jb.coeffs)
      if (ja.coeffs.find(k) == ja.coeffs.end()) s += std::norm(v);
  }
  return std::sqrt(s);
}

// Total-order-2 Taylor coefficients of a trivariate rational germ, used to
// read parameters back off a group element.
CPoly3 trivariate_jet2(const Rational<3>& r) {
  const C d0 = r.den.coeff(ijk(0, 0, 0));
  if (std::abs(d0) == 0.0)
    throw DenominatorVanishes("trivariate_jet2: denominator vanishes at 0");
  CPoly3 d;
  for (const auto& [k, v] : r.den.terms())
    if (k.total() > 0) d.add_term(k, -v / d0);
  CPoly3 inv = CPoly3::constant(C(1.0)) + d + (d * d).truncated(2);
  CPoly3 series = (r.num.truncated(2) * inv.truncated(2)).truncated(2);
  return (1.0 / d0) * series;
}

}  // namespace

void GammaParams::validate() const {
  if (!(lambda > 0.0))
    throw ConstraintViolated("source isotropy: lambda must be positive");
  if (std::abs(std::abs(u) - 1.0) > kUnitTol)
    throw ConstraintViolated("source isotropy: |u| must be 1");
}

bool GammaParams::trivial(double tol) const {
  return std::abs(lambda - 1.0) <= tol && std::abs(r) <= tol &&
         std::abs(u - C(1.0)) <= tol && std::abs(c) <= tol;
}

void GammaPrimeParams::validate(Signature eps) const {
  require_signature(eps);
  if (!(lambda > 0.0))
    throw ConstraintViolated("target isotropy: lambda must be positive");
  if (std::abs(std::abs(u) - 1.0) > kUnitTol)
    throw ConstraintViolated("target isotropy: |u| must be 1");
  if (sigma_sign != 1 && sigma_sign != -1)
    throw ConstraintViolated("target isotropy: sigma must be +1 or -1");
  if (eps == 1 && sigma_sign != 1)
    throw ConstraintViolated(
        "target isotropy: sigma = -1 exists only for signature -1");
  const double s =
      std::norm(a1) + static_cast<double>(eps) * std::norm(a2);
  if (std::abs(s - static_cast<double>(sigma_sign)) > kUnitTol)
    throw ConstraintViolated(
        "target isotropy: |a1|^2 + eps |a2|^2 must equal sigma");
}

bool GammaPrimeParams::trivial(double tol) const {
  return std::abs(lambda - 1.0) <= tol && std::abs(r) <= tol &&
         std::abs(u - C(1.0)) <= tol && std::abs(a1 - C(1.0)) <= tol &&
         std::abs(a2) <= tol && std::abs(c1) <= tol && std::abs(c2) <= tol &&
         sigma_sign == 1;
}

std::array<std::array<C, 2>, 2> GammaPrimeParams::matrix_u(Signature eps) const {
  return {{{u * a1, -static_cast<double>(eps) * u * a2},
           {std::conj(a2), std::conj(a1)}}};
}

RationalMapGerm sigma_map(const GammaParams& g) {
  g.validate();
  CPoly2 den{{ij(0, 0), C(1.0)},
             {ij(1, 0), C(0.0, -2.0) * std::conj(g.c)},
             {ij(0, 1), C(g.r, -std::norm(g.c))}};
  RationalMapGerm m;
  m.comp.push_back(
      {CPoly2{{ij(1, 0), g.lambda * g.u}, {ij(0, 1), g.lambda * g.u * g.c}},
       den});
  m.comp.push_back({CPoly2{{ij(0, 1), C(g.lambda * g.lambda)}}, den});
  return m;
}

RationalMapGerm3 sigma_prime_map(const GammaPrimeParams& g, Signature eps) {
  g.validate(eps);
  const double e = static_cast<double>(eps);
  const auto U = g.matrix_u(eps);
  CPoly3 den{{ijk(0, 0, 0), C(1.0)},
             {ijk(1, 0, 0), C(0.0, -2.0) * std::conj(g.c1)},
             {ijk(0, 1, 0), C(0.0, -2.0) * e * std::conj(g.c2)},
             {ijk(0, 0, 1), C(g.r, -(std::norm(g.c1) + e * std::norm(g.c2)))}};
  RationalMapGerm3 m;
  for (int i = 0; i < 2; ++i) {
    CPoly3 num{{ijk(1, 0, 0), g.lambda * U[i][0]},
               {ijk(0, 1, 0), g.lambda * U[i][1]},
               {ijk(0, 0, 1), g.lambda * (U[i][0] * g.c1 + U[i][1] * g.c2)}};
    m.comp.push_back({num, den});
  }
  m.comp.push_back(
      {CPoly3{{ijk(0, 0, 1),
               C(static_cast<double>(g.sigma_sign) * g.lambda * g.lambda)}},
       den});
  return m;
}

GammaParams invert_gamma(const GammaParams& g, bool verify) {
  g.validate();
  GammaParams inv;
  inv.lambda = 1.0 / g.lambda;
  inv.r = -g.r / (g.lambda * g.lambda);
  inv.u = std::conj(g.u);
  inv.c = -g.u * g.c / g.lambda;
  if (verify) {
    double d = jet_distance4(rational_compose(sigma_map(inv), sigma_map(g)),
                             identity_map2());
    if (d > 1e-10)
      throw SolveFailed("invert_gamma: inverse verification failed");
  }
  return inv;
}

GammaPrimeParams invert_gamma_prime(const GammaPrimeParams& g, Signature eps,
                                    bool verify) {
  g.validate(eps);
  const double sg = static_cast<double>(g.sigma_sign);
  const auto U = g.matrix_u(eps);
  GammaPrimeParams inv;
  inv.lambda = 1.0 / g.lambda;
  inv.r = -sg * g.r / (g.lambda * g.lambda);
  inv.u = std::conj(g.u);
  inv.a1 = sg * std::conj(g.a1);
  inv.a2 = -sg * g.u * g.a2;
  inv.c1 = -(U[0][0] * g.c1 + U[0][1] * g.c2) / (sg * g.lambda);
  inv.c2 = -(U[1][0] * g.c1 + U[1][1] * g.c2) / (sg * g.lambda);
  inv.sigma_sign = g.sigma_sign;
  if (verify) {
    auto comp =
        rational_compose(sigma_prime_map(inv, eps), sigma_prime_map(g, eps));
    double s = 0.0;
    const auto id3 = identity_map3();
    // Pointwise jets are unavailable for trivariate maps; compare the
    // order-2 Taylor data plus sampled values instead.
    for (int c = 0; c < 3; ++c) {
      CPoly3 a = trivariate_jet2(comp.comp[c]);
      CPoly3 b = trivariate_jet2(id3.comp[c]);
      CPoly3 diff = a - b;
      for (const auto& [k, v] : diff.terms()) s += std::norm(v);
    }
    Rng rng(7);
    double worst = std::sqrt(s);
    for (int i = 0; i < 8; ++i) {
      std::array<C, 3> pt{rng.disk(0.1), rng.disk(0.1), rng.disk(0.1)};
      auto va = comp.eval(pt);
      for (int c = 0; c < 3; ++c)
        worst = std::max(worst, std::abs(va[c] - pt[c]));
    }
    if (worst > 1e-10)
      throw SolveFailed("invert_gamma_prime: inverse verification failed");
  }
  return inv;
}

RationalMapGerm act(const GammaParams& g, const GammaPrimeParams& gp,
                    const RationalMapGerm& H, Signature eps) {
  if (gp.sigma_sign != 1)
    throw ConstraintViolated("act: the action uses sigma = +1 only");
  // The inverse formula is exact (property-tested separately); skip the
  // per-call verification in this hot path.
  RationalMapGerm inner =
      rational_compose(H, sigma_map(invert_gamma(g, /*verify=*/false)));
  return rational_compose(sigma_prime_map(gp, eps), inner);
}

GammaParams extract_gamma(const RationalMapGerm& m) {
  auto j = expand_map(m, 2);
  const C lw = j[1].coeff(0, 1);
  if (!(lw.real() > 0.0))
    throw SolveFailed("extract_gamma: w-coefficient is not positive");
  GammaParams g;
  g.lambda = std::sqrt(lw.real());
  g.u = j[0].coeff(1, 0) / g.lambda;
  g.c = j[0].coeff(0, 1) / (g.lambda * g.u);
  g.r = (-j[1].coeff(0, 2) / lw).real();
  return g;
}

GammaPrimeParams extract_gamma_prime(const RationalMapGerm3& m, Signature eps) {
  require_signature(eps);
  const double e = static_cast<double>(eps);
  std::array<CPoly3, 3> j;
  for (int c = 0; c < 3; ++c) j[c] = trivariate_jet2(m.comp[c]);
  const C sw = j[2].coeff(ijk(0, 0, 1));
  GammaPrimeParams g;
  g.sigma_sign = sw.real() >= 0.0 ? 1 : -1;
  const double sg = static_cast<double>(g.sigma_sign);
  g.lambda = std::sqrt(std::abs(sw.real()));
  std::array<std::array<C, 2>, 2> U;
  U[0] = {j[0].coeff(ijk(1, 0, 0)) / g.lambda, j[0].coeff(ijk(0, 1, 0)) / g.lambda};
  U[1] = {j[1].coeff(ijk(1, 0, 0)) / g.lambda, j[1].coeff(ijk(0, 1, 0)) / g.lambda};
  g.a1 = std::conj(U[1][1]);
  g.a2 = std::conj(U[1][0]);
  g.u = std::abs(g.a1) > std::abs(g.a2) ? U[0][0] / g.a1
                                        : -U[0][1] / (e * g.a2);
  // Denominator data read off the w'-component series:
  // coeff(z_j w) = sg lambda'^2 * 2i conj(c_j) * (eps for j = 2).
  const C lw2 = C(sg * g.lambda * g.lambda);
  g.c1 = std::conj(j[2].coeff(ijk(1, 0, 1)) / (C(0.0, 2.0) * lw2));
  g.c2 = std::conj(j[2].coeff(ijk(0, 1, 1)) / (C(0.0, 2.0) * e * lw2));
  g.r = (-j[2].coeff(ijk(0, 0, 2)) / lw2).real();
  return g;
}

double distance_to_trivial(const GammaParams& g) {
  return std::abs(g.lambda - 1.0) + std::abs(g.r) + std::abs(g.u - C(1.0)) +
         std::abs(g.c);
}

double distance_to_trivial(const GammaPrimeParams& g) {
  return std::abs(g.lambda - 1.0) + std::abs(g.r) + std::abs(g.u - C(1.0)) +
         std::abs(g.a1 - C(1.0)) + std::abs(g.a2) + std::abs(g.c1) +
         std::abs(g.c2);
}

GammaParams sample_gamma(Rng& rng) {
  GammaParams g;
  g.lambda = rng.uniform(0.5, 2.0);
  g.r = rng.uniform(-1.0, 1.0);
  g.u = rng.unit_complex();
  g.c = rng.disk(0.5);
  return g;
}

GammaPrimeParams sample_gamma_prime(Rng& rng, Signature eps) {
  constexpr double kTwoPi = 6.28318530717958648;
  GammaPrimeParams gp;
  gp.lambda = rng.uniform(0.5, 2.0);
  gp.r = rng.uniform(-1.0, 1.0);
  gp.u = rng.unit_complex();
  const C a2 = rng.disk(0.5);
  // |a2| <= 1/2 keeps 1 - eps |a2|^2 >= 3/4 for either signature.
  gp.a1 = std::polar(std::sqrt(1.0 - static_cast<double>(eps) * std::norm(a2)),
                     rng.uniform(0.0, kTwoPi));
  gp.a2 = a2;
  gp.c1 = rng.disk(0.5);
  gp.c2 = rng.disk(0.5);
  return gp;
}

namespace {

RationalMapGerm source_translation_by(C z0, C w0) {
  RationalMapGerm m;
  const CPoly2 one = CPoly2::constant(C(1.0));
  m.comp.push_back({CPoly2{{ij(1, 0), C(1.0)}, {ij(0, 0), z0}}, one});
  m.comp.push_back({CPoly2{{ij(0, 1), C(1.0)},
                           {ij(0, 0), w0},
                           {ij(1, 0), C(0.0, 2.0) * std::conj(z0)}},
                    one});
  return m;
}

void self_check_source_translation(const RationalMapGerm& m, int n) {
  Rng rng(42);
  for (int i = 0; i < n; ++i) {
    SourcePoint p{rng.disk(0.8), rng.uniform(-0.8, 0.8)};
    auto img = m.eval(p.coords());
    if (std::abs(source_residual(img[0], img[1])) > 1e-12)
      throw SelfCheckFailed("source translation failed its self-check");
  }
}

RationalMapGerm3 target_translation_by(const std::array<C, 3>& q,
                                       Signature eps) {
  const double e = static_cast<double>(eps);
  RationalMapGerm3 m;
  const CPoly3 one = CPoly3::constant(C(1.0));
  m.comp.push_back({CPoly3{{ijk(1, 0, 0), C(1.0)}, {ijk(0, 0, 0), q[0]}}, one});
  m.comp.push_back({CPoly3{{ijk(0, 1, 0), C(1.0)}, {ijk(0, 0, 0), q[1]}}, one});
  m.comp.push_back({CPoly3{{ijk(0, 0, 1), C(1.0)},
                           {ijk(0, 0, 0), q[2]},
                           {ijk(1, 0, 0), C(0.0, 2.0) * std::conj(q[0])},
                           {ijk(0, 1, 0), C(0.0, 2.0) * e * std::conj(q[1])}},
                    one});
  return m;
}

void self_check_target_translation(const RationalMapGerm3& m, Signature eps,
                                   int n) {
  Rng rng(42);
  for (int i = 0; i < n; ++i) {
    C q1 = rng.disk(0.7), q2 = rng.disk(0.7);
    double u = rng.uniform(-0.7, 0.7);
    C w{u, std::norm(q1) + static_cast<double>(eps) * std::norm(q2)};
    auto img = m.eval({q1, q2, w});
    if (std::abs(target_residual(eps, img[0], img[1], img[2])) > 1e-12)
      throw SelfCheckFailed("target translation failed its self-check");
  }
}

void require_on_target(const std::array<C, 3>& q, Signature eps) {
  if (std::abs(target_residual(eps, q[0], q[1], q[2])) > 1e-12)
    throw NotOnHypersurface(
        "target translation: point is not on the hyperquadric");
}

}  // namespace

RationalMapGerm source_translation(const SourcePoint& p,
                                   int self_check_samples) {
  RationalMapGerm m = source_translation_by(p.z, p.w());
  if (self_check_samples > 0)
    self_check_source_translation(m, self_check_samples);
  return m;
}

RationalMapGerm source_translation_inverse(const SourcePoint& p,
                                           int self_check_samples) {
  // The group inverse of translation by p is translation by (-z0, -conj(w0)),
  // which is again a hypersurface point.
  RationalMapGerm m = source_translation_by(-p.z, -std::conj(p.w()));
  if (self_check_samples > 0)
    self_check_source_translation(m, self_check_samples);
  return m;
}

RationalMapGerm3 target_translation(const std::array<C, 3>& q, Signature eps,
                                    int self_check_samples) {
  require_signature(eps);
  require_on_target(q, eps);
  RationalMapGerm3 m = target_translation_by(q, eps);
  if (self_check_samples > 0)
    self_check_target_translation(m, eps, self_check_samples);
  return m;
}

RationalMapGerm3 target_translation_inverse(const std::array<C, 3>& q,
                                            Signature eps,
                                            int self_check_samples) {
  require_signature(eps);
  require_on_target(q, eps);
  RationalMapGerm3 m =
      target_translation_by({-q[0], -q[1], -std::conj(q[2])}, eps);
  if (self_check_samples > 0)
    self_check_target_translation(m, eps, self_check_samples);
  return m;
}

}  // namespace hq
