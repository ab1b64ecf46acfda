#include "hqmaps/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "hqmaps/catalog.hpp"
#include "hqmaps/errors.hpp"
#include "hqmaps/group_action.hpp"
#include "hqmaps/hypersurfaces.hpp"
#include "hqmaps/isotropies.hpp"
#include "hqmaps/normalization.hpp"
#include "hqmaps/rng.hpp"
#include "hqmaps/topology_lab.hpp"

namespace hq {

namespace {

struct Check {
  bool ok = true;
  double worst = 0.0;  // largest deviation seen (meaning depends on context)

  void require(bool cond) { ok = ok && cond; }
  void track(double dev, double tol) {
    worst = std::max(worst, dev);
    ok = ok && dev < tol;
  }
};

std::string sci(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

// The catalog members bound by the membership and jet-table criteria:
// the parameterless first family plus both others over the fixed s-grid.
std::vector<NormalFormID> criterion_grid() {
  std::vector<NormalFormID> ids;
  for (Signature eps : {+1, -1}) {
    ids.push_back({1, 0.0, eps});
    for (int family : {2, 3})
      for (double s : {0.0, 0.25, 0.5, 1.0, 2.0})
        ids.push_back({family, s, eps});
  }
  return ids;
}

// ---------------------------------------------------------------------------
// 1. Catalog membership: hyperquadric members and compact-model maps.
// ---------------------------------------------------------------------------
void criterion_membership(CriterionResult& r) {
  Check chk;
  double worst = 0.0;
  for (const NormalFormID& id : criterion_grid()) {
    const MembershipReport rep =
        maps_hypersurface(normal_form_map(id), id.eps, 1000, 0.1, 1e-10);
    chk.require(rep.pass);
    worst = std::max(worst, rep.max_residual);
  }
  double worst_sphere = 0.0;
  for (Signature eps : {+1, -1}) {
    const int top = eps == 1 ? 4 : 6;
    for (int index = 1; index <= top; ++index) {
      const MembershipReport rep =
          maps_sphere_model(faran_lebl_map(index, eps), eps, 1000, 1e-10);
      chk.require(rep.pass);
      chk.require(rep.evaluated >= 300);  // pole-skipping must not eat the sample
      worst_sphere = std::max(worst_sphere, rep.max_residual);
    }
  }
  r.pass = chk.ok;
  r.detail = "worst residual: hyperquadric " + sci(worst) + ", compact model " +
             sci(worst_sphere);
}

// ---------------------------------------------------------------------------
// 2. Forced jet table and the parameter readout 2|f1_ww(0)| = s.
// ---------------------------------------------------------------------------
void criterion_jet_table(CriterionResult& r) {
  Check chk;
  double worst_forced = 0.0, worst_s = 0.0;
  for (const NormalFormID& id : criterion_grid()) {
    const JetCoords jc = jet_coordinates(normal_form_map(id));
    const C half_i_eps(0.0, 0.5 * id.eps);
    const C forced[12] = {C(1), C(0), C(0),          // d/dz
                          C(0), C(0), C(1),          // d/dw
                          C(0), C(2), C(0),          // d2/dz2
                          half_i_eps, C(0), C(0)};   // d2/dzdw
    double dev = 0.0;
    for (int i = 0; i < 12; ++i)
      dev = std::max(dev, std::abs(jc.v[static_cast<std::size_t>(i)] -
                                   forced[i]));
    worst_forced = std::max(worst_forced, dev);
    chk.require(dev < 1e-12);
    const double s_dev = std::abs(2.0 * std::abs(jc.v[12]) - id.s);
    worst_s = std::max(worst_s, s_dev);
    chk.require(s_dev < 1e-10);
  }
  r.pass = chk.ok;
  r.detail = "max forced-entry deviation " + sci(worst_forced) +
             ", max parameter readout deviation " + sci(worst_s);
}

// ---------------------------------------------------------------------------
// 3. Normalization round-trip under 100 seeded isotropy pairs.
// ---------------------------------------------------------------------------
double pair_inversion_defect(const GammaParams& applied,
                             const GammaPrimeParams& applied_p,
                             const GammaParams& recovered,
                             const GammaPrimeParams& recovered_p,
                             Signature eps) {
  const RationalMapGerm comp =
      rational_compose(sigma_map(recovered), sigma_map(applied));
  const RationalMapGerm3 comp3 = rational_compose(
      sigma_prime_map(recovered_p, eps), sigma_prime_map(applied_p, eps));
  return distance_to_trivial(extract_gamma(comp)) +
         distance_to_trivial(extract_gamma_prime(comp3, eps));
}

void criterion_round_trip(CriterionResult& r) {
  std::vector<NormalFormID> ids;
  for (int family : {2, 3})
    for (double s : {0.3, 0.7, 1.3})
      for (Signature eps : {+1, -1}) ids.push_back({family, s, eps});

  Check chk;
  double worst_ds = 0.0, worst_jet = 0.0, worst_inv = 0.0;
  for (int t = 0; t < 100; ++t) {
    const NormalFormID id = ids[static_cast<std::size_t>(t) % ids.size()];
    Rng rng(1000 + static_cast<std::uint64_t>(t));
    const GammaParams g = sample_gamma(rng);
    const GammaPrimeParams gp = sample_gamma_prime(rng, id.eps);
    const RationalMapGerm member = normal_form_map(id);
    const RationalMapGerm moved = act(g, gp, member, id.eps);

    const Classification cl = classify(moved, id.eps);
    chk.require(cl.id.family == id.family);
    worst_ds = std::max(worst_ds, std::abs(cl.id.s - id.s));
    chk.track(std::abs(cl.id.s - id.s), 1e-6);
    const double jd = jet_distance(cl.normalization.normalized, member);
    worst_jet = std::max(worst_jet, jd);
    chk.require(jd < 1e-8);
    const double inv = pair_inversion_defect(
        g, gp, cl.normalization.gamma, cl.normalization.gamma_p, id.eps);
    worst_inv = std::max(worst_inv, inv);
    chk.require(inv < 1e-6);
  }
  r.pass = chk.ok;
  r.detail = "worst |ds| " + sci(worst_ds) + ", jet distance " +
             sci(worst_jet) + ", pair inversion " + sci(worst_inv);
}

// ---------------------------------------------------------------------------
// 4. Stabilizer witnesses and the random residual floor.
// ---------------------------------------------------------------------------
void criterion_stabilizers(CriterionResult& r) {
  Check chk;
  double worst_circle = 0.0, worst_two = 0.0;
  double random_floor = 1e9;
  for (Signature eps : {+1, -1}) {
    for (int family : {1, 2}) {
      const StabilizerReport rep = stabilizer_classify(
          normal_form_map({family, 0.0, eps}), eps, 16, 200);
      chk.require(rep.kind == StabilizerKind::circle);
      chk.require(rep.circle_residuals.size() == 16);
      worst_circle = std::max(worst_circle, rep.circle_max_residual);
      chk.require(rep.circle_max_residual < 1e-12);
    }
    {
      const StabilizerReport rep =
          stabilizer_classify(normal_form_map({3, 0.0, eps}), eps, 16, 200);
      chk.require(rep.kind == StabilizerKind::two_element);
      worst_two = std::max(worst_two, rep.two_element_residual);
      chk.require(rep.two_element_residual < 1e-12);
    }
    for (int family : {2, 3}) {
      for (double s : {0.1, 0.5, 1.0}) {
        const StabilizerReport rep = stabilizer_classify(
            normal_form_map({family, s, eps}), eps, 16, 10000);
        chk.require(rep.kind == StabilizerKind::trivial);
        random_floor = std::min(random_floor, rep.random_min_residual);
        chk.require(rep.random_min_residual > 1e-8);
      }
    }
  }
  r.pass = chk.ok;
  r.detail = "worst circle residual " + sci(worst_circle) +
             ", two-element residual " + sci(worst_two) +
             ", random-search floor " + sci(random_floor);
}

// ---------------------------------------------------------------------------
// 5. Orbit rank 16 (and 15 with the parameter frozen).
// ---------------------------------------------------------------------------
void criterion_rank(CriterionResult& r) {
  Check chk;
  double min_gap = 1e9;
  for (int family : {2, 3}) {
    for (Signature eps : {+1, -1}) {
      for (double s0 : {0.1, 0.5, 1.0, 2.0}) {
        const RankReport rep = rank_at_base(family, eps, s0);
        chk.require(rep.rank == 16);
        const double gap =
            rep.singular_values[15] / rep.singular_values[0];
        min_gap = std::min(min_gap, gap);
        chk.require(gap >= 1e-6);
        const RankReport frozen =
            rank_at_base(family, eps, s0, 1e-6, 1e-8, /*freeze_s=*/true);
        chk.require(frozen.rank == 15);
      }
    }
  }
  r.pass = chk.ok;
  r.detail = "min sigma_16/sigma_1 " + sci(min_gap) +
             "; frozen-parameter rank 15 at every grid point";
}

// ---------------------------------------------------------------------------
// 6. Accumulation dichotomy between the signatures.
// ---------------------------------------------------------------------------
void criterion_dichotomy(CriterionResult& r) {
  Check chk;
  const AccumulationReport minus =
      accumulation_search({3, 0.0, -1}, {2, 0.5, -1});
  chk.require(minus.best_distance < 1e-2);
  chk.require(!minus.stalled);
  chk.require(minus.source_family_count > 0);
  chk.require(minus.target_family_count == 0);

  const AccumulationReport plus =
      accumulation_search({3, 0.0, +1}, {2, 0.5, +1});
  chk.require(plus.stalled);
  chk.require(plus.best_distance > 0.05);

  r.pass = chk.ok;
  r.detail = "negative signature reaches " + sci(minus.best_distance) +
             " (all " + std::to_string(minus.source_family_count) +
             " classified members stayed in family 3); positive signature "
             "stalls at " +
             sci(plus.best_distance);
}

// ---------------------------------------------------------------------------
// 7. Positive-signature sweeps stay in-family and cover [0, 0.5].
// ---------------------------------------------------------------------------
void criterion_sweeps(CriterionResult& r) {
  Check chk;
  double worst_gap = 0.0;
  for (int family : {2, 3}) {
    const SweepReport rep = orbit_sweep(
        {family, 0.0, +1}, ray_grid(C(0.6, 0.8), 0.3, 0.6, 50));
    chk.require(rep.valid_count == static_cast<int>(rep.records.size()));
    std::vector<double> ss;
    for (const SweepRecord& rec : rep.records) {
      chk.require(rec.valid);
      chk.require(rec.classified.family == family);
      ss.push_back(rec.classified.s);
    }
    std::sort(ss.begin(), ss.end());
    double gap = ss.empty() ? 0.5 : ss.front();
    for (std::size_t i = 0; i + 1 < ss.size(); ++i)
      if (ss[i] < 0.5)
        gap = std::max(gap, std::min(ss[i + 1], 0.5) - ss[i]);
    if (!ss.empty() && ss.back() < 0.5) gap = std::max(gap, 0.5 - ss.back());
    worst_gap = std::max(worst_gap, gap);
    chk.require(gap < 0.1);
  }
  r.pass = chk.ok;
  r.detail = "both sweeps single-family; worst coverage gap on [0, 0.5] is " +
             sci(worst_gap);
}

// ---------------------------------------------------------------------------
// 8. Component census.
// ---------------------------------------------------------------------------
void criterion_census(CriterionResult& r) {
  const CensusReport plus = component_census(+1);
  const CensusReport minus = component_census(-1);
  r.pass = plus.component_count == 3 && minus.component_count == 2;
  r.detail = "components: " + std::to_string(plus.component_count) +
             " (positive), " + std::to_string(minus.component_count) +
             " (negative)";
}

// ---------------------------------------------------------------------------
// 9. Algebra property kit: 1000 seeded cases.
// ---------------------------------------------------------------------------
RationalGerm random_germ(Rng& rng, bool fix_origin) {
  CPoly2 num, den = CPoly2::constant(C(1.0));
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; i + j <= 2; ++j) {
      if (fix_origin && i == 0 && j == 0) continue;
      num.add_term(ij(i, j), 0.5 * rng.gauss_complex());
      if (i + j > 0) den.add_term(ij(i, j), 0.2 * rng.gauss_complex());
    }
  return {num, den};
}

RationalMapGerm random_self_map(Rng& rng) {
  return RationalMapGerm{{random_germ(rng, true), random_germ(rng, true)}};
}

double jet_diff(const RationalMapGerm& A, const RationalMapGerm& B, int K) {
  double worst = 0.0;
  for (int c = 0; c < A.components(); ++c) {
    const Jet ja = expand(A.comp[static_cast<std::size_t>(c)], K);
    const Jet jb = expand(B.comp[static_cast<std::size_t>(c)], K);
    for (const auto& [k, v] : ja.coeffs)
      worst = std::max(worst, std::abs(v - jb.coeff(k.e[0], k.e[1])));
    for (const auto& [k, v] : jb.coeffs)
      worst = std::max(worst, std::abs(v - ja.coeff(k.e[0], k.e[1])));
  }
  return worst;
}

void criterion_algebra(CriterionResult& r) {
  Check chk;
  double worst_assoc = 0.0, worst_chain = 0.0, worst_inv = 0.0;

  {  // Composition associativity on order-4 jets: 334 cases. Intermediate
     // compositions are truncated at total degree 4: when the inner map
     // fixes the origin, order-4 jets of a composition depend only on the
     // degree-<=4 terms of the outer map, so the truncation is exact here
     // and keeps the polynomial degrees from compounding.
    const auto trunc4 = [](const RationalMapGerm& H) {
      RationalMapGerm R;
      for (const RationalGerm& c : H.comp)
        R.comp.push_back({c.num.truncated(4), c.den.truncated(4)});
      return R;
    };
    Rng rng(90001);
    for (int t = 0; t < 334; ++t) {
      const RationalMapGerm f = random_self_map(rng);
      const RationalMapGerm g = random_self_map(rng);
      const RationalMapGerm h = random_self_map(rng);
      const double dev = jet_diff(
          rational_compose(trunc4(rational_compose(f, g)), h),
          rational_compose(f, trunc4(rational_compose(g, h))), 4);
      worst_assoc = std::max(worst_assoc, dev);
      chk.require(dev < 1e-10);
    }
  }
  {  // First-derivative chain rule: 333 cases.
    Rng rng(90002);
    for (int t = 0; t < 333; ++t) {
      const RationalMapGerm A = random_self_map(rng);
      const RationalMapGerm B = random_self_map(rng);
      const RationalMapGerm comp = rational_compose(A, B);
      const auto ja = expand_map(A, 1);
      const auto jb = expand_map(B, 1);
      const auto jc = expand_map(comp, 1);
      for (int row = 0; row < 2; ++row) {
        const std::size_t rr = static_cast<std::size_t>(row);
        const C az = jet_derivative(ja[rr], 1, 0);
        const C aw = jet_derivative(ja[rr], 0, 1);
        const C want_z = az * jet_derivative(jb[0], 1, 0) +
                         aw * jet_derivative(jb[1], 1, 0);
        const C want_w = az * jet_derivative(jb[0], 0, 1) +
                         aw * jet_derivative(jb[1], 0, 1);
        const double dev =
            std::max(std::abs(jet_derivative(jc[rr], 1, 0) - want_z),
                     std::abs(jet_derivative(jc[rr], 0, 1) - want_w));
        worst_chain = std::max(worst_chain, dev);
        chk.require(dev < 1e-10);
      }
    }
  }
  {  // Group inverse laws via parameter extraction: 333 cases.
    Rng rng(90003);
    for (int t = 0; t < 333; ++t) {
      const Signature eps = (t % 2 == 0) ? +1 : -1;
      const GammaParams g = sample_gamma(rng);
      const double dg = distance_to_trivial(extract_gamma(
          rational_compose(sigma_map(g), sigma_map(invert_gamma(g)))));
      const GammaPrimeParams gp = sample_gamma_prime(rng, eps);
      const double dgp = distance_to_trivial(extract_gamma_prime(
          rational_compose(sigma_prime_map(gp, eps),
                           sigma_prime_map(invert_gamma_prime(gp, eps), eps)),
          eps));
      const double dev = dg + dgp;
      worst_inv = std::max(worst_inv, dev);
      chk.require(dev < 1e-8);
    }
  }
  double cross_min = 1e9, same_min = 1e9;
  {  // Jet-coordinate injectivity over the catalog grid, per signature.
    for (Signature eps : {+1, -1}) {
      std::vector<NormalFormID> grid{{1, 0.0, eps}};
      for (int family : {2, 3})
        for (int j = 1; j <= 20; ++j)
          grid.push_back({family, 0.05 * j, eps});
      std::vector<JetCoords> jets;
      jets.reserve(grid.size());
      for (const NormalFormID& id : grid)
        jets.push_back(jet_coordinates(normal_form_map(id)));
      for (std::size_t a = 0; a < grid.size(); ++a) {
        for (std::size_t b = a + 1; b < grid.size(); ++b) {
          const double d = jet_distance(jets[a], jets[b]);
          const bool crossing =
              eps == -1 && grid[a].family != grid[b].family &&
              grid[a].family != 1 && grid[b].family != 1 &&
              std::abs(grid[a].s - 0.5) < 1e-12 &&
              std::abs(grid[b].s - 0.5) < 1e-12;
          if (crossing) {
            cross_min = std::min(cross_min, d);
            chk.require(d < 1e-12);  // the one coincident pair
          } else {
            same_min = std::min(same_min, d);
            chk.require(d > 1e-6);  // everything else is separated
          }
        }
      }
    }
  }
  r.pass = chk.ok;
  r.detail = "worst: associativity " + sci(worst_assoc) + ", chain rule " +
             sci(worst_chain) + ", inverse laws " + sci(worst_inv) +
             "; grid separation " + sci(same_min) + ", crossing " +
             sci(cross_min);
}

}  // namespace

std::vector<CriterionResult> run_acceptance(int only) {
  struct Entry {
    int id;
    const char* name;
    double limit;
    void (*fn)(CriterionResult&);
  };
  const Entry entries[] = {
      {1, "catalog-membership", 10.0, criterion_membership},
      {2, "forced-jet-table", 5.0, criterion_jet_table},
      {3, "normalization-round-trip", 120.0, criterion_round_trip},
      {4, "stabilizer-witnesses", 60.0, criterion_stabilizers},
      {5, "orbit-rank", 30.0, criterion_rank},
      {6, "accumulation-dichotomy", 600.0, criterion_dichotomy},
      {7, "positive-signature-sweeps", 300.0, criterion_sweeps},
      {8, "component-census", 0.0, criterion_census},
      {9, "algebra-properties", 60.0, criterion_algebra},
  };
  if (only < 0 || only > 9)
    throw Error("acceptance criterion id must be 1..9 (or 0 for all)");

  std::vector<CriterionResult> results;
  for (const Entry& e : entries) {
    if (only != 0 && e.id != only) continue;
    CriterionResult r;
    r.id = e.id;
    r.name = e.name;
    r.limit_seconds = e.limit;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      e.fn(r);
    } catch (const Error& err) {
      r.pass = false;
      r.detail = std::string("error: ") + err.what();
    }
    r.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    if (r.limit_seconds > 0.0 && r.seconds >= r.limit_seconds) {
      r.pass = false;
      r.detail += " [over budget]";
    }
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_criterion_line(const CriterionResult& r) {
  std::ostringstream line;
  line << (r.pass ? "PASS" : "FAIL") << " " << r.id << " " << r.name << " [";
  line.precision(1);
  line << std::fixed << r.seconds << "s";
  if (r.limit_seconds > 0.0) line << "/" << r.limit_seconds << "s";
  line << "] " << r.detail;
  return line.str();
}

}  // namespace hq
