#include <doctest.h>

#include <cmath>
#include <complex>

#include "hqmaps/catalog.hpp"
#include "hqmaps/errors.hpp"
#include "hqmaps/hypersurfaces.hpp"
#include "hqmaps/topology_lab.hpp"

using namespace hq;

TEST_SUITE_BEGIN("topology_lab");

TEST_CASE("recentering at the origin is the identity") {
  for (Signature eps : {+1, -1}) {
    const RationalMapGerm H = normal_form_map({2, 0.4, eps});
    CHECK(jet_distance(recenter(H, SourcePoint{}, eps), H) < 1e-13);
  }
}

TEST_CASE("recentering keeps the map on the hypersurface and in class") {
  const SourcePoint p{C(0.15, -0.1), 0.2};
  for (Signature eps : {+1, -1}) {
    const RationalMapGerm H = normal_form_map({3, 0.6, eps});
    const RationalMapGerm moved = recenter(H, p, eps);
    CHECK(maps_hypersurface(moved, eps, 400, 0.25, 1e-10).pass);
    CHECK(is_in_F2(moved, eps).pass());
    // The recentered germ is orbit-equivalent, so it classifies to the same
    // family (signature +1 keeps even the parameter nearly unchanged only
    // at p = 0; here only the family is pinned).
    CHECK(classify(moved, eps).id.family == 3);
  }
}

TEST_CASE("ray grids lie on the source hypersurface") {
  const std::vector<SourcePoint> grid = ray_grid(C(0.6, 0.8), 0.3, 0.6, 50);
  REQUIRE(grid.size() == 51);
  CHECK(grid.front().z == C(0.0));
  for (const SourcePoint& p : grid)
    CHECK(source_residual(p.z, p.w()) < 1e-15);
  CHECK(std::abs(grid.back().z) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK_THROWS_AS(ray_grid(C(1.0, 0.0), 0.0, 0.5, 0), Error);
}

TEST_CASE("sweep of the eps=+1 family-2 base covers an s-interval") {
  const SweepReport rep =
      orbit_sweep({2, 0.0, +1}, ray_grid(C(0.6, 0.8), 0.3, 0.6, 50));
  REQUIRE(rep.records.size() == 51);
  CHECK(rep.valid_count == 51);

  // The trivial translation reproduces the base member.
  CHECK(rep.records.front().valid);
  CHECK(rep.records.front().classified.family == 2);
  CHECK(rep.records.front().classified.s < 1e-8);
  CHECK(rep.records.front().certificate < 1e-10);

  double prev_s = -1.0;
  for (const SweepRecord& rec : rep.records) {
    REQUIRE(rec.valid);
    CHECK(rec.classified.family == 2);  // +1 sweeps never change family
    CHECK(rec.certificate < 1e-6);
    CHECK(rec.classified.s > prev_s - 1e-9);  // s grows along this ray
    prev_s = rec.classified.s;
  }
  CHECK(rep.s_min < 1e-8);
  CHECK(rep.s_max > 0.5);

  // Coverage has no gaps wider than 0.1 on [0, 0.5].
  std::vector<double> ss;
  for (const SweepRecord& rec : rep.records) ss.push_back(rec.classified.s);
  std::sort(ss.begin(), ss.end());
  double gap = ss.front();
  for (std::size_t i = 0; i + 1 < ss.size(); ++i)
    if (ss[i] < 0.5) gap = std::max(gap, std::min(ss[i + 1], 0.5) - ss[i]);
  CHECK(gap < 0.1);
}

TEST_CASE("sweep of the eps=+1 family-3 base stays in family 3") {
  const SweepReport rep =
      orbit_sweep({3, 0.0, +1}, ray_grid(C(0.6, 0.8), 0.3, 0.5, 20));
  CHECK(rep.valid_count == 21);
  for (const SweepRecord& rec : rep.records) {
    REQUIRE(rec.valid);
    CHECK(rec.classified.family == 3);
    // Family 3 sits at jet distance >= 1/8 from the other families when
    // eps = +1 (second-component ww derivative is pinned at -1/8).
    CHECK(rec.other_family_distance > 0.05);
  }
}

TEST_CASE("grid refinement preserves families on common points") {
  const NormalFormID base{2, 0.0, +1};
  const SweepReport coarse =
      orbit_sweep(base, ray_grid(C(0.6, 0.8), 0.3, 0.5, 10));
  const SweepReport fine =
      orbit_sweep(base, ray_grid(C(0.6, 0.8), 0.3, 0.5, 20));
  REQUIRE(coarse.records.size() == 11);
  REQUIRE(fine.records.size() == 21);
  CHECK(fine.records.size() <= 2 * coarse.records.size());
  for (std::size_t j = 0; j < coarse.records.size(); ++j) {
    const SweepRecord& a = coarse.records[j];
    const SweepRecord& b = fine.records[2 * j];  // same t
    REQUIRE(std::abs(a.p.z - b.p.z) < 1e-15);
    CHECK(a.valid == b.valid);
    CHECK(a.classified.family == b.classified.family);
    CHECK(std::abs(a.classified.s - b.classified.s) < 1e-9);
  }
}

TEST_CASE("eps=-1 family-3 sweep approaches the other family") {
  // Along the real ray the family-3 orbit parameter climbs toward 1/2 while
  // the orbit curve closes in on the family-2 curve.
  const SweepReport rep =
      orbit_sweep({3, 0.0, -1}, ray_grid(C(1.0, 0.0), 0.0, 0.72, 24));
  CHECK(rep.valid_count == 25);
  double min_other = 1e9;
  for (const SweepRecord& rec : rep.records) {
    REQUIRE(rec.valid);
    CHECK(rec.classified.family == 3);
    min_other = std::min(min_other, rec.other_family_distance);
  }
  CHECK(rep.s_max > 0.3);
  CHECK(rep.s_max < 0.5 + 1e-6);
  CHECK(min_other < 1e-2);
}

TEST_CASE("accumulation search: same-orbit sanity run hits zero") {
  AccumulationOptions opt;
  opt.grid_rho = 4;
  opt.grid_phi = 4;
  opt.refine_steps = 10;
  const AccumulationReport rep =
      accumulation_search({2, 0.5, -1}, {2, 0.5, -1}, opt);
  CHECK(rep.best_distance < 1e-10);
  CHECK_FALSE(rep.stalled);
  CHECK(std::abs(rep.best_p.z) < 1e-12);
  for (std::size_t i = 0; i + 1 < rep.trace.size(); ++i)
    CHECK(rep.trace[i + 1].distance <= rep.trace[i].distance);
}

TEST_CASE("accumulation search: eps=-1 orbit accumulates on the crossing") {
  AccumulationOptions opt;
  opt.grid_rho = 12;
  opt.grid_phi = 8;
  opt.refine_steps = 120;
  const AccumulationReport rep =
      accumulation_search({3, 0.0, -1}, {2, 0.5, -1}, opt);
  CHECK(rep.best_distance < 1e-2);
  CHECK_FALSE(rep.stalled);
  // Every classifiable orbit member stayed in family 3.
  CHECK(rep.source_family_count > 0);
  CHECK(rep.target_family_count == 0);
  for (std::size_t i = 0; i + 1 < rep.trace.size(); ++i)
    CHECK(rep.trace[i + 1].distance <= rep.trace[i].distance);
}

TEST_CASE("accumulation search: eps=+1 control stalls") {
  AccumulationOptions opt;
  opt.grid_rho = 8;
  opt.grid_phi = 6;
  opt.refine_steps = 60;
  const AccumulationReport rep =
      accumulation_search({3, 0.0, +1}, {2, 0.5, +1}, opt);
  CHECK(rep.stalled);
  CHECK(rep.best_distance > 0.05);

  opt.refine_steps = 10;
  opt.grid_rho = 3;
  opt.grid_phi = 3;
  opt.throw_on_stall = true;
  CHECK_THROWS_AS(accumulation_search({3, 0.0, +1}, {2, 0.5, +1}, opt),
                  SearchStalled);
}

TEST_CASE("component census finds 3 components for +1 and 2 for -1") {
  const CensusReport plus = component_census(+1);
  CHECK(plus.component_count == 3);
  CHECK(plus.min_cross_family_distance > 1e-2);

  const CensusReport minus = component_census(-1);
  CHECK(minus.component_count == 2);
  CHECK(minus.min_cross_family_distance < 1e-12);

  // The first family is alone in its component in both cases.
  for (const CensusReport& rep : {plus, minus}) {
    bool found = false;
    for (const auto& comp : rep.components) {
      const bool has_g1 =
          std::any_of(comp.begin(), comp.end(), [](const std::string& l) {
            return l.rfind("G1", 0) == 0;
          });
      if (has_g1) {
        found = true;
        CHECK(comp.size() == 1);
      }
    }
    CHECK(found);
  }
}

TEST_CASE("census path steps shrink under grid refinement") {
  for (Signature eps : {+1, -1}) {
    const CensusReport coarse = component_census(eps, 17);
    const CensusReport fine = component_census(eps, 33);
    CHECK(fine.component_count == coarse.component_count);
    CHECK(fine.max_path_step < 0.7 * coarse.max_path_step);
  }
}

TEST_CASE("quotient topology probe") {
  const QuotientProbeReport minus = quotient_topology_probe(-1);
  CHECK(minus.continuity_ok);
  CHECK(minus.families_meet);
  CHECK(minus.argmin_s == doctest::Approx(0.5).epsilon(0.02));
  CHECK(minus.continuity_distances.front() >
        minus.continuity_distances.back());
  CHECK_FALSE(minus.summary.empty());
  CHECK(minus.accumulation_best_distance < 0.0);  // none supplied

  const QuotientProbeReport plus = quotient_topology_probe(+1);
  CHECK(plus.continuity_ok);
  CHECK_FALSE(plus.families_meet);
  CHECK(plus.min_interfamily_distance > 1e-2);

  AccumulationReport acc;
  acc.best_distance = 3e-4;
  const QuotientProbeReport with_acc = quotient_topology_probe(-1, &acc);
  CHECK(with_acc.accumulation_best_distance == 3e-4);
  CHECK(with_acc.summary.find("accumulation") != std::string::npos);
}

TEST_SUITE_END();
