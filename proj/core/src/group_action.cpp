#include "hqmaps/group_action.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "hqmaps/errors.hpp"
#include "hqmaps/normalization.hpp"
#include "hqmaps/rng.hpp"

namespace hq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Residual tolerance below which a candidate subgroup element is accepted as
// an actual stabilizer witness. Nontrivial non-stabilizing elements move
// catalog jets by >= 1e-3, so this leaves six orders of margin.
constexpr double kWitnessTol = 1e-10;

// The circle-candidate pairing: source (u z, w) with target
// (u z1', u^2 z2', w'). In standard parameters the target element is
// u' = u^3, a1' = conj(u)^2 (then the matrix U' is diag(u, u^2)).
GammaParams circle_gamma(C u) {
  GammaParams g;
  g.u = u;
  return g;
}

GammaPrimeParams circle_gamma_prime(C u) {
  GammaPrimeParams gp;
  gp.u = u * u * u;
  gp.a1 = std::conj(u) * std::conj(u);
  return gp;
}

}  // namespace

OrbitParams OrbitParams::base(double s0) {
  OrbitParams xi;
  xi.s = s0;
  return xi;
}

Eigen::VectorXd OrbitParams::chart() const {
  Eigen::VectorXd x(16);
  x[0] = gamma.lambda;
  x[1] = gamma.r;
  x[2] = std::arg(gamma.u);
  x[3] = gamma.c.real();
  x[4] = gamma.c.imag();
  x[5] = gamma_p.lambda;
  x[6] = gamma_p.r;
  x[7] = std::arg(gamma_p.u);
  x[8] = std::arg(gamma_p.a1);
  x[9] = gamma_p.a2.real();
  x[10] = gamma_p.a2.imag();
  x[11] = gamma_p.c1.real();
  x[12] = gamma_p.c1.imag();
  x[13] = gamma_p.c2.real();
  x[14] = gamma_p.c2.imag();
  x[15] = s;
  return x;
}

OrbitParams OrbitParams::from_chart(const Eigen::VectorXd& chart,
                                    Signature eps) {
  if (chart.size() != 16)
    throw Error("orbit chart must have 16 coordinates");
  OrbitParams xi;
  xi.gamma.lambda = chart[0];
  xi.gamma.r = chart[1];
  xi.gamma.u = std::polar(1.0, chart[2]);
  xi.gamma.c = C(chart[3], chart[4]);
  xi.gamma_p.lambda = chart[5];
  xi.gamma_p.r = chart[6];
  xi.gamma_p.u = std::polar(1.0, chart[7]);
  const C a2{chart[9], chart[10]};
  const double a1_sq = 1.0 - static_cast<double>(eps) * std::norm(a2);
  if (a1_sq <= 0.0)
    throw ConstraintViolated(
        "orbit chart leaves the admissible sheet: 1 - eps |a2'|^2 <= 0");
  xi.gamma_p.a1 = std::polar(std::sqrt(a1_sq), chart[8]);
  xi.gamma_p.a2 = a2;
  xi.gamma_p.c1 = C(chart[11], chart[12]);
  xi.gamma_p.c2 = C(chart[13], chart[14]);
  xi.s = chart[15];
  xi.validate(eps);
  return xi;
}

void OrbitParams::validate(Signature eps) const {
  gamma.validate();
  gamma_p.validate(eps);
  if (gamma_p.sigma_sign != 1)
    throw ConstraintViolated("orbit parameters use the sigma = +1 branch");
  if (!std::isfinite(s) || s <= 0.0)
    throw ConstraintViolated("orbit parameter s must be positive");
}

JetCoords orbit_map(const OrbitParams& xi, int family, Signature eps) {
  if (family != 2 && family != 3)
    throw Error("orbit_map: family must be 2 or 3");
  xi.validate(eps);
  const RationalMapGerm G = normal_form_map({family, xi.s, eps});
  return jet_coordinates(act(xi.gamma, xi.gamma_p, G, eps));
}

RankReport rank_at_base(int family, Signature eps, double s0, double step,
                        double rel_tol, bool freeze_s) {
  if (family != 2 && family != 3)
    throw Error("rank_at_base: family must be 2 or 3");
  if (!std::isfinite(s0) || s0 <= 0.0)
    throw Error("rank_at_base: s0 must be positive");

  const RealFunction f = [family, eps, s0,
                          freeze_s](const Eigen::VectorXd& x) {
    Eigen::VectorXd full(16);
    if (freeze_s) {
      full.head(15) = x;
      full[15] = s0;
    } else {
      full = x;
    }
    const JetCoords jc =
        orbit_map(OrbitParams::from_chart(full, eps), family, eps);
    Eigen::VectorXd out(34);
    for (int i = 0; i < 17; ++i) {
      out[2 * i] = jc.v[static_cast<std::size_t>(i)].real();
      out[2 * i + 1] = jc.v[static_cast<std::size_t>(i)].imag();
    }
    return out;
  };

  const Eigen::VectorXd x_full = OrbitParams::base(s0).chart();
  const Eigen::VectorXd x0 =
      freeze_s ? Eigen::VectorXd(x_full.head(15)) : x_full;
  const Eigen::MatrixXd J = real_jacobian(f, x0, step, /*richardson=*/true);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  RankReport rep;
  rep.singular_values = svd.singularValues();
  rep.rows = static_cast<int>(J.rows());
  rep.cols = static_cast<int>(J.cols());
  const double smax =
      rep.singular_values.size() > 0 ? rep.singular_values[0] : 0.0;
  for (Eigen::Index i = 0; i < rep.singular_values.size(); ++i)
    if (rep.singular_values[i] >= rel_tol * smax) ++rep.rank;
  return rep;
}

std::string StabilizerReport::kind_name() const {
  switch (kind) {
    case StabilizerKind::trivial:
      return "trivial";
    case StabilizerKind::circle:
      return "circle";
    case StabilizerKind::two_element:
      return "two_element";
  }
  return "unknown";
}

StabilizerReport stabilizer_classify(const RationalMapGerm& H, Signature eps,
                                     int circle_samples, int random_samples,
                                     std::uint64_t seed) {
  const SevenConditionReport cond = verify_normal_conditions(H, eps);
  if (!cond.pass(1e-8))
    throw Error("stabilizer_classify requires a normalized map; conditions "
                "residual " +
                std::to_string(cond.max_residual()));

  StabilizerReport rep;
  rep.s = determining_invariants(H).s;
  const JetCoords jet_h = jet_coordinates(H);

  // Circle candidate at sampled u = exp(2 pi i j / (n+1)), j = 1..n: never
  // trivial, and (for odd n+1) never the u = -1 slice either.
  rep.circle_residuals.reserve(static_cast<std::size_t>(circle_samples));
  for (int j = 1; j <= circle_samples; ++j) {
    const C u = std::polar(1.0, kTwoPi * j / (circle_samples + 1));
    const double res = jet_distance(
        jet_coordinates(act(circle_gamma(u), circle_gamma_prime(u), H, eps)),
        jet_h);
    rep.circle_residuals.push_back(res);
    rep.circle_max_residual = std::max(rep.circle_max_residual, res);
  }

  // Two-element candidate: (-z, w) with (-z1', z2', w').
  rep.two_element_residual = jet_distance(
      jet_coordinates(act(circle_gamma(C(-1.0)),
                          circle_gamma_prime(C(-1.0)), H, eps)),
      jet_h);

  // Seeded random nontrivial pairs; for a trivial stabilizer every residual
  // stays far above kWitnessTol.
  Rng rng(seed);
  rep.random_min_residual = std::numeric_limits<double>::infinity();
  int tried = 0;
  while (tried < random_samples) {
    const GammaParams g = sample_gamma(rng);
    const GammaPrimeParams gp = sample_gamma_prime(rng, eps);
    const double dist = distance_to_trivial(g) + distance_to_trivial(gp);
    if (dist < 0.1) continue;  // keep only clearly nontrivial samples
    ++tried;
    const double res =
        jet_distance(jet_coordinates(act(g, gp, H, eps)), jet_h);
    if (res < rep.random_min_residual) {
      rep.random_min_residual = res;
      rep.random_argmin_distance = dist;
    }
  }

  const bool circle_ok = rep.circle_max_residual < kWitnessTol;
  const bool two_ok = rep.two_element_residual < kWitnessTol;
  if (circle_ok)
    rep.kind = StabilizerKind::circle;
  else if (two_ok)
    rep.kind = StabilizerKind::two_element;
  else
    rep.kind = StabilizerKind::trivial;

  // Cross-check against the parameter rule: s > 0 predicts a trivial
  // stabilizer; s = 0 members carry the circle (families 1, 2) or the
  // two-element group (family 3).
  if (rep.s > 1e-6 && rep.kind != StabilizerKind::trivial)
    throw Inconsistent("nontrivial stabilizer witness on a map with s = " +
                       std::to_string(rep.s));
  if (rep.s > 1e-6 && rep.random_min_residual < 1e-8)
    throw Inconsistent(
        "random search found a near-stabilizing pair at parameter distance " +
        std::to_string(rep.random_argmin_distance) + " on a map with s = " +
        std::to_string(rep.s));
  if (rep.s <= 1e-6 && rep.kind == StabilizerKind::trivial)
    throw Inconsistent(
        "no stabilizer witness on a map with s = 0; expected one");
  return rep;
}

ConvergenceReport convergence_experiment(const SequenceSpec& seq) {
  if (!seq.params_at) throw Error("convergence_experiment: empty sequence");
  if (seq.n_terms < 2)
    throw Error("convergence_experiment: need at least two terms");
  seq.base.validate();

  ConvergenceReport rep;
  rep.name = seq.name;
  const RationalMapGerm base_map = normal_form_map(seq.base);
  const JetCoords base_jets = jet_coordinates(base_map);

  for (int n = 1; n <= seq.n_terms; ++n) {
    ConvergencePoint pt;
    pt.n = n;
    try {
      const auto [g, gp] = seq.params_at(n);
      pt.param_distance = distance_to_trivial(g) + distance_to_trivial(gp);
      pt.image_distance = jet_distance(
          jet_coordinates(act(g, gp, base_map, seq.base.eps)), base_jets);
      pt.evaluated = true;
    } catch (const Error&) {
      pt.evaluated = false;
      rep.divergent = true;
    }
    rep.points.push_back(pt);
  }

  // Decay fit: slope of log(param_distance) vs log(n).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const ConvergencePoint& pt : rep.points) {
    if (!pt.evaluated || pt.param_distance <= 0.0) continue;
    const double lx = std::log(static_cast<double>(pt.n));
    const double ly = std::log(pt.param_distance);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (m >= 2 && sxx * m - sx * sx > 1e-12)
    rep.fitted_decay_rate = (m * sxy - sx * sy) / (m * sxx - sx * sx);

  // Divergence: the image curve must head toward the base. A sequence whose
  // final image distance exceeds its first (beyond noise) or blows up never
  // converged to the base member.
  const ConvergencePoint* first = nullptr;
  const ConvergencePoint* last = nullptr;
  for (const ConvergencePoint& pt : rep.points) {
    if (!pt.evaluated) continue;
    if (first == nullptr) first = &pt;
    last = &pt;
  }
  if (first != nullptr && last != nullptr) {
    if (last->image_distance > 1e3 ||
        (last->image_distance > first->image_distance &&
         last->image_distance > 1e-2))
      rep.divergent = true;
  }
  return rep;
}

}  // namespace hq
