#include <doctest.h>

#include <cmath>
#include <vector>

#include "hqmaps/catalog.hpp"
#include "hqmaps/errors.hpp"
#include "hqmaps/hypersurfaces.hpp"

using namespace hq;

TEST_SUITE("catalog") {

TEST_CASE("identifier validation") {
  CHECK_THROWS_AS((NormalFormID{0, 0.0, 1}.validate()), Error);
  CHECK_THROWS_AS((NormalFormID{4, 0.0, 1}.validate()), Error);
  CHECK_THROWS_AS((NormalFormID{2, -0.5, 1}.validate()), Error);
  CHECK_THROWS_AS((NormalFormID{1, 0.5, 1}.validate()), Error);
  CHECK_THROWS_AS((NormalFormID{2, 0.5, 0}.validate()), InvalidSignature);
  CHECK_NOTHROW((NormalFormID{1, 0.0, -1}.validate()));
  CHECK((NormalFormID{2, 0.5, -1}).label() == "G2(s=0.5)[-]");
}

TEST_CASE("every catalog member lies on its hyperquadric") {
  for (Signature eps : {1, -1}) {
    std::vector<NormalFormID> grid{{1, 0.0, eps}};
    for (double s : {0.0, 0.25, 0.5, 1.0, 2.0}) {
      grid.push_back({2, s, eps});
      grid.push_back({3, s, eps});
    }
    for (const auto& id : grid) {
      MembershipReport rep =
          maps_hypersurface(normal_form_map(id), eps, 1000, 0.1, 1e-10);
      INFO(id.label());
      CHECK(rep.pass);
      CHECK(rep.max_residual < 1e-12);
      CHECK(is_in_F2(normal_form_map(id), eps).pass());
    }
  }
}

TEST_CASE("second family at s = 0 matches its closed form") {
  // (4z + i e z w, 4 z^2, w(4 - i e w)) / (4 - i e w)
  for (Signature eps : {1, -1}) {
    RationalMapGerm H = normal_form_map({2, 0.0, eps});
    const double e = static_cast<double>(eps);
    CHECK(H.comp[0].num.coeff(ij(1, 0)) == C(4.0));
    CHECK(H.comp[0].num.coeff(ij(1, 1)) == C(0.0, e));
    CHECK(H.comp[1].num.coeff(ij(2, 0)) == C(4.0));
    CHECK(H.comp[2].num.coeff(ij(0, 1)) == C(4.0));
    CHECK(H.comp[2].num.coeff(ij(0, 2)) == C(0.0, -e));
    CHECK(H.comp[0].den.coeff(ij(0, 0)) == C(4.0));
    CHECK(H.comp[0].den.coeff(ij(0, 1)) == C(0.0, -e));
  }
}

TEST_CASE("first family g-component has the documented closed form") {
  RationalMapGerm H = normal_form_map({1, 0.0, 1});
  CHECK(H.comp[2].num.coeff(ij(0, 1)) == C(4.0));
  CHECK(H.comp[2].den.coeff(ij(0, 0)) == C(4.0));
  CHECK(H.comp[2].den.coeff(ij(0, 2)) == C(-1.0));
}

TEST_CASE("normalized jets are forced to the documented values") {
  for (Signature eps : {1, -1}) {
    for (const NormalFormID id :
         {NormalFormID{1, 0.0, eps}, NormalFormID{2, 0.9, eps},
          NormalFormID{3, 1.3, eps}}) {
      JetCoords j = jet_coordinates(normal_form_map(id));
      const double e = static_cast<double>(eps);
      // H_z = (1, 0, 0); H_w = (0, 0, 1).
      CHECK(std::abs(j.v[0] - C(1.0)) < 1e-13);
      CHECK(std::abs(j.v[1]) < 1e-13);
      CHECK(std::abs(j.v[2]) < 1e-13);
      CHECK(std::abs(j.v[3]) < 1e-13);
      CHECK(std::abs(j.v[4]) < 1e-13);
      CHECK(std::abs(j.v[5] - C(1.0)) < 1e-13);
      // H_zz = (0, 2, 0); H_zw = (i e / 2, 0, 0).
      CHECK(std::abs(j.v[6]) < 1e-13);
      CHECK(std::abs(j.v[7] - C(2.0)) < 1e-13);
      CHECK(std::abs(j.v[8]) < 1e-13);
      CHECK(std::abs(j.v[9] - C(0.0, e / 2.0)) < 1e-13);
      CHECK(std::abs(j.v[10]) < 1e-13);
      CHECK(std::abs(j.v[11]) < 1e-13);
      // g-component second derivatives vanish.
      CHECK(std::abs(j.v[14]) < 1e-13);
    }
  }
}

TEST_CASE("determining invariants separate the three families") {
  for (Signature eps : {1, -1}) {
    const double e = static_cast<double>(eps);
    DeterminingInvariants i1 = determining_invariants(normal_form_map({1, 0.0, eps}));
    CHECK(i1.s == doctest::Approx(0.0));
    CHECK(std::abs(i1.x) < 1e-13);
    CHECK(i1.y == doctest::Approx(0.0));
    for (double s : {0.0, 0.4, 1.1}) {
      DeterminingInvariants i2 =
          determining_invariants(normal_form_map({2, s, eps}));
      CHECK(i2.s == doctest::Approx(s).epsilon(1e-10));
      CHECK(std::abs(i2.x - C(s * s / 2.0)) < 1e-12);
      CHECK(i2.y == doctest::Approx((e + s * s) / 2.0).epsilon(1e-10));
      DeterminingInvariants i3 =
          determining_invariants(normal_form_map({3, s, eps}));
      CHECK(i3.s == doctest::Approx(s).epsilon(1e-10));
      CHECK(std::abs(i3.x - C(-e / 8.0)) < 1e-12);
      CHECK(i3.y == doctest::Approx(3.0 * e / 8.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("jet distance separates distinct catalog maps") {
  CHECK(jet_distance(normal_form_map({2, 0.3, 1}), normal_form_map({2, 0.4, 1})) >
        1e-3);
  CHECK(jet_distance(normal_form_map({2, 0.0, 1}), normal_form_map({3, 0.0, 1})) >
        0.1);
  JetCoords a = jet_coordinates(normal_form_map({2, 0.5, -1}));
  CHECK(jet_distance(a, a) == 0.0);
  JetCoords b = jet_coordinates(normal_form_map({2, 0.5, -1}), 4);
  CHECK_THROWS_AS(jet_distance(a, b), OrderMismatch);
}

TEST_CASE("catalog grid members are distinct maps except the known crossing") {
  for (Signature eps : {1, -1}) {
    std::vector<NormalFormID> grid{{1, 0.0, eps}};
    for (int k : {2, 3})
      for (int i = 0; i <= 20; ++i) grid.push_back({k, 0.1 * i, eps});
    for (std::size_t a = 0; a < grid.size(); ++a)
      for (std::size_t b = a + 1; b < grid.size(); ++b) {
        double d = jet_distance(normal_form_map(grid[a]),
                                normal_form_map(grid[b]));
        bool crossing = eps == -1 && grid[a].family != grid[b].family &&
                        grid[a].family != 1 && grid[b].family != 1 &&
                        std::abs(grid[a].s - 0.5) < 1e-12 &&
                        std::abs(grid[b].s - 0.5) < 1e-12;
        INFO(grid[a].label() << " vs " << grid[b].label());
        if (crossing)
          CHECK(d < 1e-12);
        else
          CHECK(d > 1e-6);
      }
  }
}

TEST_CASE("the crossing pair coincides as rational maps") {
  // At s = 1/2 and signature -1 the second and third families meet: the
  // cross-multiplied coefficient tables cancel identically.
  RationalMapGerm A = normal_form_map({2, 0.5, -1});
  RationalMapGerm B = normal_form_map({3, 0.5, -1});
  for (int c = 0; c < 3; ++c) {
    CPoly2 diff = A.comp[c].num * B.comp[c].den - B.comp[c].num * A.comp[c].den;
    double worst = 0.0;
    for (const auto& [k, v] : diff.terms())
      worst = std::max(worst, std::abs(v));
    CHECK(worst < 1e-12);
  }
  // The same pair at the sphere signature stays far apart.
  CHECK(jet_distance(normal_form_map({2, 0.5, 1}), normal_form_map({3, 0.5, 1})) >
        1e-2);
}

TEST_CASE("compact-model maps satisfy the compact membership test") {
  for (int idx = 1; idx <= 4; ++idx) {
    MembershipReport rep = maps_sphere_model(faran_lebl_map(idx, 1), 1, 400, 1e-10);
    INFO("index ", idx, " signature +1");
    CHECK(rep.pass);
  }
  for (int idx = 1; idx <= 6; ++idx) {
    MembershipReport rep =
        maps_sphere_model(faran_lebl_map(idx, -1), -1, 400, 1e-10);
    INFO("index ", idx, " signature -1");
    CHECK(rep.pass);
  }
}

TEST_CASE("compact-model list enforces its signature restrictions") {
  CHECK_THROWS_AS(faran_lebl_map(5, 1), InvalidSignature);
  CHECK_THROWS_AS(faran_lebl_map(7, 1), InvalidSignature);
  CHECK_THROWS_AS(faran_lebl_map(0, 1), Error);
  CHECK_THROWS_AS(faran_lebl_map(8, -1), Error);
  // Index 2 at the sphere signature is (z^2, sqrt(2) z w, w^2).
  RationalMapGerm w2 = faran_lebl_map(2, 1);
  CHECK(std::abs(w2.comp[1].num.coeff(ij(1, 1)) - C(std::sqrt(2.0))) < 1e-15);
  CHECK(w2.comp[1].num.coeff(ij(0, 1)) == C(0.0));
}

}  // TEST_SUITE
