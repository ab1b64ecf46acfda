#include <doctest.h>

#include <cmath>

#include "hqmaps/catalog.hpp"
#include "hqmaps/errors.hpp"
#include "hqmaps/hypersurfaces.hpp"
#include "hqmaps/rng.hpp"

using namespace hq;

TEST_SUITE("hypersurfaces") {

TEST_CASE("source points satisfy the defining equation exactly") {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    SourcePoint p{rng.disk(1.0), rng.uniform(-1.0, 1.0)};
    CHECK(std::abs(source_residual(p.z, p.w())) < 1e-15);
  }
}

TEST_CASE("signature validation") {
  CHECK_THROWS_AS(require_signature(0), InvalidSignature);
  CHECK_THROWS_AS(require_signature(2), InvalidSignature);
  CHECK_NOTHROW(require_signature(1));
  CHECK_NOTHROW(require_signature(-1));
}

TEST_CASE("target residual sign convention") {
  // Im w - |z1|^2 - eps |z2|^2.
  CHECK(target_residual(1, C(1.0), C(0.0), C(0.0, 1.0)) == doctest::Approx(0.0));
  CHECK(target_residual(-1, C(0.0), C(1.0), C(0.0, -1.0)) ==
        doctest::Approx(0.0));
  CHECK(target_residual(-1, C(0.0), C(1.0), C(0.0, 1.0)) ==
        doctest::Approx(2.0));
}

TEST_CASE("membership check accepts a catalog map and rejects a broken one") {
  RationalMapGerm H = normal_form_map({2, 0.7, 1});
  MembershipReport ok = maps_hypersurface(H, 1, 500, 0.1, 1e-10);
  CHECK(ok.pass);
  CHECK(ok.evaluated == 500);
  CHECK(ok.max_residual < 1e-12);

  // Same map against the wrong signature must fail decisively.
  MembershipReport bad = maps_hypersurface(H, -1, 500, 0.1, 1e-10);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_residual > 1e-4);
}

TEST_CASE("membership skips near-pole samples instead of failing") {
  // The third classical map has a component singular along z = 0.
  RationalMapGerm H = faran_lebl_map(3, -1);
  MembershipReport rep = maps_sphere_model(H, -1, 400, 1e-10);
  CHECK(rep.pass);
  CHECK(rep.evaluated > 300);
}

TEST_CASE("class membership diagnostics on catalog maps") {
  for (Signature eps : {1, -1}) {
    F2Diagnostics d = is_in_F2(normal_form_map({3, 0.5, eps}), eps);
    CHECK(d.pass());
    CHECK(d.g_w_real > 0.1);
  }
  // The degenerate classical map (1, w, w) fixes no origin and fails.
  F2Diagnostics bad = is_in_F2(faran_lebl_map(7, -1), -1);
  CHECK_FALSE(bad.pass());
  CHECK_FALSE(bad.fixes_origin);
}

TEST_CASE("linear embedding is in the class only after moving to the germ model") {
  // (z, w, 0) on the compact model: its germ-model counterpart is the first
  // catalog family; the compact-model map itself does not fix 0.
  F2Diagnostics d = is_in_F2(normal_form_map({1, 0.0, 1}), 1);
  CHECK(d.pass());
}

TEST_CASE("cayley transforms are mutually inverse near the base point") {
  RationalMapGerm fwd = cayley_source(200);
  RationalMapGerm bwd = cayley_source_inverse(200);
  RationalMapGerm round = rational_compose(bwd, fwd);
  Rng rng(9);
  for (int i = 0; i < 40; ++i) {
    std::array<C, 2> pt{rng.disk(0.3), rng.disk(0.3)};
    auto v = round.eval(pt);
    CHECK(std::abs(v[0] - pt[0]) < 1e-12);
    CHECK(std::abs(v[1] - pt[1]) < 1e-12);
  }
  for (Signature eps : {1, -1}) {
    RationalMapGerm3 tf = cayley_target(eps, 200);
    RationalMapGerm3 tb = cayley_target_inverse(eps, 200);
    RationalMapGerm3 round3 = rational_compose(tf, tb);
    for (int i = 0; i < 40; ++i) {
      std::array<C, 3> pt{rng.disk(0.2), rng.disk(0.2), rng.disk(0.2)};
      auto v = round3.eval(pt);
      for (int c = 0; c < 3; ++c) CHECK(std::abs(v[c] - pt[c]) < 1e-10);
    }
  }
}

TEST_CASE("cayley transforms carry one model to the other") {
  // Source: a hypersurface point maps to the unit sphere of C^2.
  RationalMapGerm inv = cayley_source_inverse(0);
  Rng rng(17);
  for (int i = 0; i < 60; ++i) {
    SourcePoint p{rng.disk(0.7), rng.uniform(-0.7, 0.7)};
    auto v = inv.eval(p.coords());
    double r = std::norm(v[0]) + std::norm(v[1]) - 1.0;
    CHECK(std::abs(r) < 1e-12);
  }
  // Target: compact-model points map to the hyperquadric model.
  for (Signature eps : {1, -1}) {
    RationalMapGerm3 fwd = cayley_target(eps, 0);
    for (int i = 0; i < 60; ++i) {
      C z3 = rng.disk(0.8);
      double m = 1.0 - static_cast<double>(eps) * std::norm(z3);
      if (m <= 0.01) continue;
      C dir1 = rng.gauss_complex(), dir2 = rng.gauss_complex();
      double nn = std::sqrt(std::norm(dir1) + std::norm(dir2));
      C z1 = std::sqrt(m) * dir1 / nn, z2 = std::sqrt(m) * dir2 / nn;
      if (std::abs(z2 + C(1.0)) < 0.05) continue;
      auto v = fwd.eval({z1, z2, z3});
      CHECK(std::abs(target_residual(eps, v[0], v[1], v[2])) < 1e-10);
    }
  }
}

TEST_CASE("germ-model catalog equals cayley conjugation of compact maps") {
  // The first classical map conjugated by the transforms reproduces a map of
  // the class (linear family): check membership of the conjugated map.
  for (Signature eps : {1, -1}) {
    RationalMapGerm inner = rational_compose(
        faran_lebl_map(1, eps), cayley_source_inverse(0));
    RationalMapGerm conj = rational_compose(cayley_target(eps, 0), inner);
    MembershipReport rep = maps_hypersurface(conj, eps, 300, 0.1, 1e-9);
    CHECK(rep.pass);
  }
}

}  // TEST_SUITE
