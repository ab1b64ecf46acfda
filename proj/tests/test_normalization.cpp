#include <doctest.h>

#include <cmath>

#include "hqmaps/catalog.hpp"
#include "hqmaps/errors.hpp"
#include "hqmaps/normalization.hpp"
#include "hqmaps/rng.hpp"

using namespace hq;

namespace {

// Distance of a recovered-composed-with-applied isotropy pair to the
// identity, measured on the automorphisms themselves.
double pair_inversion_defect(const GammaParams& rec, const GammaParams& app,
                             const GammaPrimeParams& recp,
                             const GammaPrimeParams& appp, Signature eps) {
  RationalMapGerm comp = rational_compose(sigma_map(rec), sigma_map(app));
  double d = distance_to_trivial(extract_gamma(comp));
  RationalMapGerm3 comp3 = rational_compose(sigma_prime_map(recp, eps),
                                            sigma_prime_map(appp, eps));
  return d + distance_to_trivial(extract_gamma_prime(comp3, eps));
}

}  // namespace

TEST_SUITE("normalization") {

TEST_CASE("catalog members satisfy all conditions and normalize trivially") {
  for (Signature eps : {1, -1}) {
    for (const NormalFormID id :
         {NormalFormID{1, 0.0, eps}, NormalFormID{2, 0.6, eps},
          NormalFormID{3, 1.2, eps}}) {
      RationalMapGerm G = normal_form_map(id);
      SevenConditionReport rep = verify_normal_conditions(G, eps);
      INFO(id.label());
      CHECK(rep.max_residual() < 1e-12);
      CHECK(rep.pass(1e-12));

      NormalizationResult nr = normalize(G, eps);
      CHECK(nr.residual_norm < 1e-10);
      CHECK(jet_distance(nr.normalized, G) < 1e-8);
      CHECK(distance_to_trivial(nr.gamma) < 1e-6);
      CHECK(distance_to_trivial(nr.gamma_p) < 1e-6);
    }
  }
}

TEST_CASE("moved maps violate the conditions before renormalization") {
  Rng rng(71);
  RationalMapGerm G = normal_form_map({2, 1.0, 1});
  RationalMapGerm moved =
      act(sample_gamma(rng), sample_gamma_prime(rng, 1), G, 1);
  CHECK(verify_normal_conditions(moved, 1).max_residual() > 1e-3);
}

TEST_CASE("round-trip recovery for generic parameters") {
  Rng rng(202);
  for (Signature eps : {1, -1}) {
    for (const NormalFormID id :
         {NormalFormID{2, 0.3, eps}, NormalFormID{2, 1.3, eps},
          NormalFormID{3, 0.7, eps}}) {
      RationalMapGerm G = normal_form_map(id);
      GammaParams g0 = sample_gamma(rng);
      GammaPrimeParams gp0 = sample_gamma_prime(rng, eps);
      RationalMapGerm moved = act(g0, gp0, G, eps);

      NormalizationResult nr = normalize(moved, eps);
      INFO(id.label());
      CHECK(nr.residual_norm < 1e-9);
      CHECK(jet_distance(nr.normalized, G) < 1e-7);
      // act(gamma, gamma_p, moved) must reproduce the normalized map.
      CHECK(jet_distance(act(nr.gamma, nr.gamma_p, moved, eps),
                         nr.normalized) < 1e-8);
      // For s > 0 the stabilizer is trivial, so the recovered pair is the
      // exact inverse of the applied one.
      CHECK(pair_inversion_defect(nr.gamma, g0, nr.gamma_p, gp0, eps) < 1e-6);
    }
  }
}

TEST_CASE("round-trip recovery at s = 0 recovers the map up to gauge") {
  Rng rng(203);
  for (Signature eps : {1, -1}) {
    for (int family : {1, 2, 3}) {
      RationalMapGerm G = normal_form_map({family, 0.0, eps});
      GammaParams g0 = sample_gamma(rng);
      GammaPrimeParams gp0 = sample_gamma_prime(rng, eps);
      RationalMapGerm moved = act(g0, gp0, G, eps);
      NormalizationResult nr = normalize(moved, eps);
      INFO("family ", family, " eps ", eps);
      CHECK(jet_distance(nr.normalized, G) < 1e-8);
      CHECK_FALSE(nr.gauge_note.empty());
    }
  }
}

TEST_CASE("idempotence: renormalizing a normalized map is trivial") {
  Rng rng(205);
  for (Signature eps : {1, -1}) {
    RationalMapGerm moved = act(sample_gamma(rng),
                                sample_gamma_prime(rng, eps),
                                normal_form_map({3, 0.5, eps}), eps);
    NormalizationResult first = normalize(moved, eps);
    NormalizationResult second = normalize(first.normalized, eps);
    CHECK(jet_distance(second.normalized, first.normalized) < 1e-8);
    CHECK(distance_to_trivial(second.gamma) < 1e-8);
    CHECK(distance_to_trivial(second.gamma_p) < 1e-8);
  }
}

TEST_CASE("classification identifies catalog members and their orbits") {
  Rng rng(207);
  for (Signature eps : {1, -1}) {
    for (const NormalFormID id :
         {NormalFormID{1, 0.0, eps}, NormalFormID{2, 0.0, eps},
          NormalFormID{2, 0.7, eps}, NormalFormID{3, 0.0, eps},
          NormalFormID{3, 1.3, eps}}) {
      Classification direct = classify(normal_form_map(id), eps);
      INFO(id.label());
      CHECK(direct.id.family == id.family);
      CHECK(std::abs(direct.id.s - id.s) < 1e-8);
      CHECK(direct.certificate < 1e-8);

      RationalMapGerm moved = act(sample_gamma(rng),
                                  sample_gamma_prime(rng, eps),
                                  normal_form_map(id), eps);
      Classification orbit = classify(moved, eps);
      CHECK(orbit.id.family == id.family);
      CHECK(std::abs(orbit.id.s - id.s) < 1e-6);
      CHECK(orbit.certificate < 1e-6);
    }
  }
}

TEST_CASE("classification is equivariant under fresh parameters") {
  Rng rng(211);
  Signature eps = -1;
  RationalMapGerm H = act(sample_gamma(rng), sample_gamma_prime(rng, eps),
                          normal_form_map({3, 0.9, eps}), eps);
  Classification base = classify(H, eps);
  RationalMapGerm moved = act(sample_gamma(rng),
                              sample_gamma_prime(rng, eps), H, eps);
  Classification again = classify(moved, eps);
  CHECK(base.id.family == again.id.family);
  CHECK(std::abs(base.id.s - again.id.s) < 1e-6);
}

TEST_CASE("inputs outside the class are rejected") {
  // The degenerate compact-model map does not fix 0 and is not in the class.
  CHECK_THROWS_AS(normalize(faran_lebl_map(7, -1), -1), NotInF2);
  // A map with reversed orientation on the transversal direction as well.
  RationalMapGerm bad = normal_form_map({2, 0.5, 1});
  for (auto& comp : bad.comp) comp.num = C(-1.0) * comp.num;
  CHECK_THROWS_AS(normalize(bad, 1), NotInF2);
}

}  // TEST_SUITE
