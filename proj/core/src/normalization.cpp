#include "hqmaps/normalization.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace hq {

namespace {

// Values H_z(0), H_w(0) of the input map; fixed throughout the solve.
struct FirstOrderData {
  std::array<C, 3> A{};
  std::array<C, 3> B{};
  double gw = 0.0;  // Re g_w(0), positive for transversal maps
  double S = 0.0;   // |f1_z|^2 + eps |f2_z|^2, positive inside the class
};

FirstOrderData first_order_data(const RationalMapGerm& H, Signature eps) {
  auto jH = expand_map(H, 1);
  FirstOrderData d;
  for (int c = 0; c < 3; ++c) {
    d.A[c] = jet_derivative(jH[c], 1, 0);
    d.B[c] = jet_derivative(jH[c], 0, 1);
  }
  d.gw = d.B[2].real();
  d.S = std::norm(d.A[0]) + static_cast<double>(eps) * std::norm(d.A[1]);
  if (d.S <= 0.0 || d.gw <= 0.0)
    throw NotInF2(
        "normalize: first-order data violates the class conditions "
        "(transversality or nondegeneracy fails at 0)");
  return d;
}

// Free coordinates of the staged solve. The source rotation enters through
// m = u * c (solving for m instead of c decouples the phase conditions), and
// beta is the phase of the target frame factor.
struct StageState {
  double lam_t = 1.0;
  double r_t = 0.0;
  double th_t = 0.0;
  C m_t{0.0, 0.0};
  double beta = 0.0;
  double rp = 0.0;
};

// Closed-form completion: given the free coordinates, the remaining primed
// parameters are forced by the first-order conditions.
std::pair<GammaParams, GammaPrimeParams> assemble_pair(const FirstOrderData& fo,
                                                       const StageState& st) {
  GammaParams g;
  g.lambda = st.lam_t;
  g.r = st.r_t;
  g.u = std::polar(1.0, st.th_t);
  g.c = std::conj(g.u) * st.m_t;
  GammaPrimeParams gp;
  gp.lambda = 1.0 / (st.lam_t * std::sqrt(fo.gw));
  gp.r = st.rp;
  const C nu = std::polar(1.0, st.beta) / std::sqrt(fo.S);
  gp.a1 = nu * std::conj(fo.A[0]);
  gp.a2 = -nu * std::conj(fo.A[1]);
  gp.u = std::conj(g.u) * std::polar(1.0, -st.beta);
  gp.c1 = -(st.m_t * fo.A[0] / st.lam_t + fo.B[0]) / fo.gw;
  gp.c2 = -(st.m_t * fo.A[1] / st.lam_t + fo.B[1]) / fo.gw;
  return {g, gp};
}

RationalMapGerm conjugated(const RationalMapGerm& H, Signature eps,
                           const GammaParams& g, const GammaPrimeParams& gp) {
  return rational_compose(sigma_prime_map(gp, eps),
                          rational_compose(H, sigma_map(g)));
}

// The 19 scalar residuals of the normalization conditions (real and
// imaginary parts of the complex ones).
Eigen::VectorXd residuals19(const std::vector<Jet>& jM) {
  Eigen::VectorXd r(19);
  const std::array<C, 3> tz{C(1.0), C(0.0), C(0.0)};
  const std::array<C, 3> tw{C(0.0), C(0.0), C(1.0)};
  int idx = 0;
  for (int c = 0; c < 3; ++c) {
    C d = jet_derivative(jM[c], 1, 0) - tz[c];
    r(idx++) = d.real();
    r(idx++) = d.imag();
  }
  for (int c = 0; c < 3; ++c) {
    C d = jet_derivative(jM[c], 0, 1) - tw[c];
    r(idx++) = d.real();
    r(idx++) = d.imag();
  }
  const C f2zz = jet_derivative(jM[1], 2, 0) - C(2.0);
  r(idx++) = f2zz.real();
  r(idx++) = f2zz.imag();
  const C f2zw = jet_derivative(jM[1], 1, 1);
  r(idx++) = f2zw.real();
  r(idx++) = f2zw.imag();
  r(idx++) = jet_derivative(jM[0], 0, 2).imag();
  r(idx++) = jet_derivative(jM[2], 0, 2).real();
  r(idx++) = jet_derivative(jM[1], 2, 1).real();
  return r;
}

struct StageAResult {
  StageState st;
  double residual = std::numeric_limits<double>::infinity();
};

// Stage A: staged elimination. Per sweep: 2D Newton in m for f2_zw = 0,
// scaling in lambda for |f2_zz| = 2, an exact phase solve aligning f2_zz to
// the positive real axis and f1_ww to the nonnegative real axis (or, when
// f1_ww vanishes, the gauge rotation putting f2_ww on the -eps ray), and a
// 2D Newton in (r, r') for the two real third-order conditions.
StageAResult stage_a(const RationalMapGerm& H, Signature eps,
                     const FirstOrderData& fo, int sweeps = 5) {
  StageAResult out;
  StageState& st = out.st;
  const double e = static_cast<double>(eps);

  auto jets_at = [&](const StageState& s) {
    auto [g, gp] = assemble_pair(fo, s);
    return expand_map(conjugated(H, eps, g, gp), 3);
  };

  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int it = 0; it < 15; ++it) {  // f2_zw = 0 via m
      C F0 = jet_derivative(jets_at(st)[1], 1, 1);
      if (std::abs(F0) < 1e-14) break;
      const double h = 1e-7;
      StageState sa = st, sb = st;
      sa.m_t += h;
      sb.m_t += C(0.0, h);
      C Fa = (jet_derivative(jets_at(sa)[1], 1, 1) - F0) / h;
      C Fb = (jet_derivative(jets_at(sb)[1], 1, 1) - F0) / h;
      Eigen::Matrix2d Jm;
      Jm << Fa.real(), Fb.real(), Fa.imag(), Fb.imag();
      Eigen::Vector2d rhs(-F0.real(), -F0.imag());
      Eigen::Vector2d dx = Jm.partialPivLu().solve(rhs);
      st.m_t += C(dx(0), dx(1));
    }
    for (int it = 0; it < 10; ++it) {  // |f2_zz| = 2 via lambda
      double m = std::abs(jet_derivative(jets_at(st)[1], 2, 0));
      if (std::abs(m - 2.0) < 1e-14) break;
      st.lam_t *= 2.0 / m;
    }
    {  // exact phase alignment
      auto jM = jets_at(st);
      const C a = jet_derivative(jM[1], 2, 0);
      const C b = jet_derivative(jM[0], 0, 2);
      double dth = 0.0;
      if (std::abs(b) > 1e-8) {
        dth = std::arg(b);
      } else {
        const C xx = jet_derivative(jM[1], 0, 2);
        if (std::abs(xx) > 1e-8) dth = std::arg(-e * xx) / 2.0;
      }
      st.th_t += dth;
      st.beta += std::arg(a) + 2.0 * dth;
    }
    for (int it = 0; it < 8; ++it) {  // Re g_ww = Re f2_zzw = 0 via (r, r')
      auto jM = jets_at(st);
      Eigen::Vector2d F0(jet_derivative(jM[2], 0, 2).real(),
                         jet_derivative(jM[1], 2, 1).real());
      if (F0.cwiseAbs().maxCoeff() < 1e-14) break;
      const double h = 1e-7;
      StageState sa = st, sb = st;
      sa.r_t += h;
      sb.rp += h;
      auto ja = jets_at(sa), jb = jets_at(sb);
      Eigen::Matrix2d Jm;
      Jm << (jet_derivative(ja[2], 0, 2).real() - F0(0)) / h,
          (jet_derivative(jb[2], 0, 2).real() - F0(0)) / h,
          (jet_derivative(ja[1], 2, 1).real() - F0(1)) / h,
          (jet_derivative(jb[1], 2, 1).real() - F0(1)) / h;
      Eigen::Vector2d d = Jm.partialPivLu().solve(-F0);
      st.r_t += d(0);
      st.rp += d(1);
    }
    out.residual = residuals19(jets_at(st)).norm();
    if (out.residual < 5e-13) break;
  }
  return out;
}

// Stage-B chart: 15 real coordinates covering both isotropy groups with the
// frame constraint satisfied identically (trigonometric for the sphere
// target, hyperbolic for the signature target — no clamping anywhere).
Eigen::VectorXd pack_chart(const GammaParams& g, const GammaPrimeParams& gp,
                           Signature eps) {
  Eigen::VectorXd x(15);
  const double a2m = std::abs(gp.a2);
  const double psi =
      eps > 0 ? std::asin(std::min(a2m, 1.0)) : std::asinh(a2m);
  x << std::log(g.lambda), g.r, std::arg(g.u), g.c.real(), g.c.imag(),
      std::log(gp.lambda), gp.r, std::arg(gp.u), std::arg(gp.a1), psi,
      (a2m > 1e-14 ? std::arg(gp.a2) : 0.0), gp.c1.real(), gp.c1.imag(),
      gp.c2.real(), gp.c2.imag();
  return x;
}

std::pair<GammaParams, GammaPrimeParams> unpack_chart(const Eigen::VectorXd& x,
                                                      Signature eps) {
  GammaParams g;
  g.lambda = std::exp(x(0));
  g.r = x(1);
  g.u = std::polar(1.0, x(2));
  g.c = C(x(3), x(4));
  GammaPrimeParams gp;
  gp.lambda = std::exp(x(5));
  gp.r = x(6);
  gp.u = std::polar(1.0, x(7));
  double a1m, a2m;
  if (eps > 0) {
    a1m = std::cos(x(9));
    a2m = std::sin(x(9));
  } else {
    // sqrt(1 + sinh^2) instead of cosh keeps the frame constraint exact to
    // the last ulp even for large chart values.
    a2m = std::sinh(x(9));
    a1m = std::sqrt(1.0 + a2m * a2m);
  }
  gp.a1 = a1m * std::polar(1.0, x(8));
  gp.a2 = a2m * std::polar(1.0, x(10));
  gp.c1 = C(x(11), x(12));
  gp.c2 = C(x(13), x(14));
  return {g, gp};
}

// Stage B: Levenberg-Marquardt over the 15-real chart against the 19 scalar
// residuals. Returns the final residual norm; x is updated in place.
double lm_polish(const RationalMapGerm& H, Signature eps, Eigen::VectorXd& x,
                 const NormalizeOptions& opt) {
  RealFunction residual = [&](const Eigen::VectorXd& xv) {
    auto [g, gp] = unpack_chart(xv, eps);
    return residuals19(expand_map(conjugated(H, eps, g, gp), 3));
  };
  double mu = 1e-4;
  Eigen::VectorXd F = residual(x);
  double cost = F.squaredNorm();
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (std::sqrt(cost) < opt.target_residual) break;
    Eigen::MatrixXd Jm = real_jacobian(residual, x, 1e-7);
    Eigen::MatrixXd A = Jm.transpose() * Jm;
    Eigen::VectorXd gvec = Jm.transpose() * F;
    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      Eigen::MatrixXd Areg =
          A + mu * Eigen::MatrixXd::Identity(A.rows(), A.cols());
      Eigen::VectorXd d = Areg.ldlt().solve(-gvec);
      Eigen::VectorXd xn = x + d;
      Eigen::VectorXd Fn = residual(xn);
      double cn = Fn.squaredNorm();
      if (cn < cost) {
        x = xn;
        F = Fn;
        cost = cn;
        mu = std::max(mu * 0.3, 1e-14);
        improved = true;
        break;
      }
      mu *= 8.0;
    }
    if (!improved) break;
  }
  return std::sqrt(cost);
}

}  // namespace

double SevenConditionReport::max_residual() const {
  double m = sign_defect;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

bool SevenConditionReport::pass(double tol) const {
  if (sign_defect > 1e-12) return false;
  for (double r : residuals)
    if (!(r <= tol)) return false;
  return true;
}

SevenConditionReport verify_normal_conditions(const RationalMapGerm& H,
                                              Signature eps) {
  require_signature(eps);
  auto jM = expand_map(H, 3);
  SevenConditionReport rep;
  const std::array<C, 3> tz{C(1.0), C(0.0), C(0.0)};
  const std::array<C, 3> tw{C(0.0), C(0.0), C(1.0)};
  double nz = 0.0, nw = 0.0;
  for (int c = 0; c < 3; ++c) {
    nz += std::norm(jet_derivative(jM[c], 1, 0) - tz[c]);
    nw += std::norm(jet_derivative(jM[c], 0, 1) - tw[c]);
  }
  rep.residuals[0] = std::sqrt(nz);
  rep.residuals[1] = std::sqrt(nw);
  rep.residuals[2] = std::abs(jet_derivative(jM[1], 2, 0) - C(2.0));
  rep.residuals[3] = std::abs(jet_derivative(jM[1], 1, 1));
  const C f1ww = jet_derivative(jM[0], 0, 2);
  rep.residuals[4] = std::abs(f1ww.imag());
  rep.sign_defect = std::max(0.0, -f1ww.real());
  rep.residuals[5] = std::abs(jet_derivative(jM[2], 0, 2).real());
  rep.residuals[6] = std::abs(jet_derivative(jM[1], 2, 1).real());
  return rep;
}

NormalizationResult normalize(const RationalMapGerm& H, Signature eps,
                              const NormalizeOptions& opt) {
  require_signature(eps);
  F2Diagnostics diag = is_in_F2(H, eps);
  if (!diag.pass())
    throw NotInF2("normalize: input fails the class test: " + diag.summary());

  const FirstOrderData fo = first_order_data(H, eps);
  StageAResult sa = stage_a(H, eps, fo);
  auto [g_t, gp] = assemble_pair(fo, sa.st);
  bool polished = false;
  if (!(sa.residual < 1e-11)) {
    polished = true;
    Eigen::VectorXd x = pack_chart(g_t, gp, eps);
    lm_polish(H, eps, x, opt);
    std::tie(g_t, gp) = unpack_chart(x, eps);
  }
  RationalMapGerm M = conjugated(H, eps, g_t, gp);
  const double res = residuals19(expand_map(M, 3)).norm();
  if (!(res <= opt.accept_residual)) {
    std::ostringstream os;
    os << "normalize: residual " << res
       << " exceeds the acceptance threshold " << opt.accept_residual;
    throw NoConvergence(os.str(), res);
  }

  NormalizationResult out;
  out.normalized = M;
  out.gamma = invert_gamma(g_t);  // report in the action convention
  out.gamma_p = gp;
  out.residuals = verify_normal_conditions(M, eps);
  out.residual_norm = res;
  out.polished = polished;
  if (determining_invariants(M).s < 1e-6)
    out.gauge_note =
        "s = 0: the recovered isotropies are unique only up to the "
        "stabilizer gauge";
  return out;
}

Classification classify(const RationalMapGerm& H, Signature eps,
                        const NormalizeOptions& opt) {
  Classification out;
  out.normalization = normalize(H, eps, opt);
  const DeterminingInvariants di =
      determining_invariants(out.normalization.normalized);
  const double e = static_cast<double>(eps);

  struct Candidate {
    int family;
    double s;
    C x;
    double y;
  };
  std::array<Candidate, 3> cands{
      {{1, 0.0, C(0.0), 0.0},
       {2, di.s, C(di.s * di.s / 2.0), (e + di.s * di.s) / 2.0},
       {3, di.s, C(-e / 8.0), 3.0 * e / 8.0}}};
  const int first = di.s < 1e-6 ? 0 : 1;
  int best = first;
  double best_d = std::numeric_limits<double>::infinity();
  for (int i = first; i < 3; ++i) {
    double d = std::abs(di.x - cands[i].x) + std::abs(di.y - cands[i].y);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  out.id = NormalFormID{cands[best].family, cands[best].s, eps};
  out.certificate =
      jet_distance(out.normalization.normalized, normal_form_map(out.id));
  if (!(out.certificate < kCertificateTol)) {
    std::ostringstream os;
    os << "classify: certificate " << out.certificate
       << " exceeds the threshold " << kCertificateTol << " (nearest: "
       << out.id.label() << ")";
    throw Unclassifiable(os.str(), out.certificate);
  }
  return out;
}

}  // namespace hq
