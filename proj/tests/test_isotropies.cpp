#include <doctest.h>

#include <cmath>

#include "hqmaps/catalog.hpp"
#include "hqmaps/errors.hpp"
#include "hqmaps/isotropies.hpp"
#include "hqmaps/rng.hpp"

using namespace hq;

TEST_SUITE("isotropies") {

TEST_CASE("parameter validation") {
  GammaParams g;
  g.lambda = -1.0;
  CHECK_THROWS_AS(g.validate(), ConstraintViolated);
  g.lambda = 1.0;
  g.u = C(0.5, 0.0);
  CHECK_THROWS_AS(g.validate(), ConstraintViolated);

  GammaPrimeParams gp;
  gp.a1 = C(0.8, 0.0);  // breaks |a1|^2 + eps |a2|^2 = sigma
  CHECK_THROWS_AS(gp.validate(1), ConstraintViolated);
  gp.a1 = C(1.0, 0.0);
  gp.sigma_sign = -1;
  CHECK_THROWS_AS(gp.validate(1), ConstraintViolated);
  // sigma = -1 is admissible for the signature target: |a1|^2 - |a2|^2 = -1.
  gp.a1 = C(0.0, 0.0);
  gp.a2 = C(1.0, 0.0);
  CHECK_NOTHROW(gp.validate(-1));
}

TEST_CASE("source automorphisms preserve the hypersurface") {
  Rng rng(101);
  for (int i = 0; i < 20; ++i) {
    RationalMapGerm s = sigma_map(sample_gamma(rng));
    SourcePoint p{rng.disk(0.3), rng.uniform(-0.3, 0.3)};
    auto v = s.eval(p.coords());
    CHECK(std::abs(source_residual(v[0], v[1])) < 1e-12);
  }
}

TEST_CASE("target automorphisms preserve the hyperquadric") {
  Rng rng(103);
  for (Signature eps : {1, -1}) {
    for (int i = 0; i < 20; ++i) {
      RationalMapGerm3 s = sigma_prime_map(sample_gamma_prime(rng, eps), eps);
      C q1 = rng.disk(0.3), q2 = rng.disk(0.3);
      double u = rng.uniform(-0.3, 0.3);
      C w{u, std::norm(q1) + static_cast<double>(eps) * std::norm(q2)};
      auto v = s.eval({q1, q2, w});
      CHECK(std::abs(target_residual(eps, v[0], v[1], v[2])) < 1e-11);
    }
  }
}

TEST_CASE("closed-form inverses pass their composition self-check") {
  Rng rng(107);
  for (int i = 0; i < 10; ++i) {
    GammaParams g = sample_gamma(rng);
    CHECK_NOTHROW(invert_gamma(g, true));
    GammaParams gi = invert_gamma(g);
    GammaParams gii = invert_gamma(gi);
    CHECK(std::abs(gii.lambda - g.lambda) < 1e-12);
    CHECK(std::abs(gii.u - g.u) < 1e-12);
    CHECK(std::abs(gii.c - g.c) < 1e-12);
    CHECK(std::abs(gii.r - g.r) < 1e-12);
  }
  for (Signature eps : {1, -1})
    for (int i = 0; i < 10; ++i)
      CHECK_NOTHROW(invert_gamma_prime(sample_gamma_prime(rng, eps), eps, true));
}

TEST_CASE("group action preserves class membership") {
  Rng rng(109);
  for (Signature eps : {1, -1}) {
    RationalMapGerm H = normal_form_map({2, 0.7, eps});
    RationalMapGerm moved = act(sample_gamma(rng),
                                sample_gamma_prime(rng, eps), H, eps);
    MembershipReport rep = maps_hypersurface(moved, eps, 300, 0.1, 1e-9);
    CHECK(rep.pass);
    F2Diagnostics d = is_in_F2(moved, eps);
    CHECK(d.pass());
  }
}

TEST_CASE("action by trivial parameters is the identity on jets") {
  RationalMapGerm H = normal_form_map({3, 0.4, -1});
  RationalMapGerm moved = act(GammaParams{}, GammaPrimeParams{}, H, -1);
  CHECK(jet_distance(moved, H) < 1e-13);
}

TEST_CASE("action composes like a left action") {
  // act(g2, act(g1, H)) with composed parameters equals acting component-wise:
  // verify on jets via the defining formula rather than parameter algebra.
  Rng rng(113);
  Signature eps = -1;
  RationalMapGerm H = normal_form_map({2, 0.5, eps});
  GammaParams g1 = sample_gamma(rng), g2 = sample_gamma(rng);
  GammaPrimeParams gp1 = sample_gamma_prime(rng, eps);
  GammaPrimeParams gp2 = sample_gamma_prime(rng, eps);
  RationalMapGerm step = act(g2, gp2, act(g1, gp1, H, eps), eps);
  // Composite parameters, read off the composed automorphisms directly.
  GammaParams gc = extract_gamma(
      rational_compose(sigma_map(g2), sigma_map(g1)));
  GammaPrimeParams gpc = extract_gamma_prime(
      rational_compose(sigma_prime_map(gp2, eps), sigma_prime_map(gp1, eps)),
      eps);
  RationalMapGerm direct = act(gc, gpc, H, eps);
  CHECK(jet_distance(step, direct) < 1e-8);
}

TEST_CASE("parameter extraction inverts the map constructors") {
  Rng rng(127);
  for (int i = 0; i < 10; ++i) {
    GammaParams g = sample_gamma(rng);
    GammaParams e = extract_gamma(sigma_map(g));
    CHECK(std::abs(e.lambda - g.lambda) < 1e-10);
    CHECK(std::abs(e.r - g.r) < 1e-10);
    CHECK(std::abs(e.u - g.u) < 1e-10);
    CHECK(std::abs(e.c - g.c) < 1e-10);
  }
  for (Signature eps : {1, -1}) {
    for (int i = 0; i < 10; ++i) {
      GammaPrimeParams g = sample_gamma_prime(rng, eps);
      GammaPrimeParams e = extract_gamma_prime(sigma_prime_map(g, eps), eps);
      CHECK(std::abs(e.lambda - g.lambda) < 1e-10);
      CHECK(std::abs(e.r - g.r) < 1e-10);
      CHECK(std::abs(e.u - g.u) < 1e-10);
      CHECK(std::abs(e.a1 - g.a1) < 1e-10);
      CHECK(std::abs(e.a2 - g.a2) < 1e-10);
      CHECK(std::abs(e.c1 - g.c1) < 1e-10);
      CHECK(std::abs(e.c2 - g.c2) < 1e-10);
      CHECK(e.sigma_sign == g.sigma_sign);
    }
  }
}

TEST_CASE("distance to trivial vanishes exactly at the identity") {
  CHECK(distance_to_trivial(GammaParams{}) == 0.0);
  CHECK(distance_to_trivial(GammaPrimeParams{}) == 0.0);
  GammaParams g;
  g.c = C(0.0, 0.1);
  CHECK(distance_to_trivial(g) == doctest::Approx(0.1));
}

TEST_CASE("translations recenter hypersurface points to the origin") {
  Rng rng(131);
  for (int i = 0; i < 10; ++i) {
    SourcePoint p{rng.disk(0.4), rng.uniform(-0.4, 0.4)};
    RationalMapGerm fwd = source_translation(p, 50);
    RationalMapGerm bwd = source_translation_inverse(p, 50);
    auto v = fwd.eval({C(0.0), C(0.0)});
    CHECK(std::abs(v[0] - p.z) < 1e-14);
    CHECK(std::abs(v[1] - p.w()) < 1e-14);
    auto roundtrip = rational_compose(bwd, fwd);
    std::array<C, 2> pt{rng.disk(0.2), rng.disk(0.2)};
    auto rv = roundtrip.eval(pt);
    CHECK(std::abs(rv[0] - pt[0]) < 1e-13);
    CHECK(std::abs(rv[1] - pt[1]) < 1e-13);
  }
  for (Signature eps : {1, -1}) {
    C q1 = rng.disk(0.4), q2 = rng.disk(0.4);
    double u = rng.uniform(-0.4, 0.4);
    std::array<C, 3> q{q1, q2,
                       C(u, std::norm(q1) +
                             static_cast<double>(eps) * std::norm(q2))};
    RationalMapGerm3 fwd = target_translation(q, eps, 50);
    auto v = fwd.eval({C(0.0), C(0.0), C(0.0)});
    for (int c = 0; c < 3; ++c) CHECK(std::abs(v[c] - q[c]) < 1e-14);
    RationalMapGerm3 bwd = target_translation_inverse(q, eps, 50);
    auto rt = rational_compose(bwd, fwd);
    std::array<C, 3> pt{rng.disk(0.2), rng.disk(0.2), rng.disk(0.2)};
    auto rv = rt.eval(pt);
    for (int c = 0; c < 3; ++c) CHECK(std::abs(rv[c] - pt[c]) < 1e-13);
  }
  std::array<C, 3> off{C(0.3), C(0.0), C(0.0)};
  CHECK_THROWS_AS(target_translation(off, 1, 0), NotOnHypersurface);
}

TEST_CASE("stabilizer pairings fix their catalog members") {
  Rng rng(137);
  for (Signature eps : {1, -1}) {
    for (int i = 0; i < 4; ++i) {
      C u = rng.unit_complex();
      GammaParams g;
      g.u = u;
      GammaPrimeParams gp;
      gp.u = u * u * u;
      gp.a1 = std::conj(u) * std::conj(u);
      for (int fam : {1, 2}) {
        RationalMapGerm H = normal_form_map({fam, 0.0, eps});
        CHECK(jet_distance(act(g, gp, H, eps), H) < 1e-12);
      }
      // The same pairing moves a generic member (s > 0).
      RationalMapGerm Hs = normal_form_map({2, 0.8, eps});
      if (std::abs(u - C(1.0)) > 0.3)
        CHECK(jet_distance(act(g, gp, Hs, eps), Hs) > 1e-3);
    }
    // Two-element stabilizer of the third family at s = 0.
    GammaParams g;
    g.u = C(-1.0, 0.0);
    GammaPrimeParams gp;
    gp.u = C(-1.0, 0.0);
    gp.a1 = C(1.0, 0.0);
    RationalMapGerm H3 = normal_form_map({3, 0.0, eps});
    CHECK(jet_distance(act(g, gp, H3, eps), H3) < 1e-12);
  }
}

}  // TEST_SUITE
