#include "hqmaps/hypersurfaces.hpp"

#include <cmath>
#include <sstream>

#include "hqmaps/rng.hpp"

namespace hq {

void require_signature(Signature eps) {
  if (eps != 1 && eps != -1)
    throw InvalidSignature("signature must be +1 or -1");
}

double source_residual(C z, C w) { return w.imag() - std::norm(z); }

double target_residual(Signature eps, C z1, C z2, C w) {
  return w.imag() - std::norm(z1) - static_cast<double>(eps) * std::norm(z2);
}

double sphere_target_residual(Signature eps, C z1, C z2, C z3) {
  return std::norm(z1) + std::norm(z2) + static_cast<double>(eps) * std::norm(z3) -
         1.0;
}

MembershipReport maps_hypersurface(const RationalMapGerm& H, Signature eps,
                                   int n, double radius, double tol,
                                   std::uint64_t seed) {
  require_signature(eps);
  Rng rng(seed);
  MembershipReport rep;
  for (int i = 0; i < n; ++i) {
    double rho = rng.uniform() * radius;
    double th = rng.uniform() * 2.0 * std::numbers::pi;
    double u = (2.0 * rng.uniform() - 1.0) * radius;
    SourcePoint p{rho * C(std::cos(th), std::sin(th)), u};
    std::vector<C> img;
    try {
      img = H.eval(p.coords(), 1e-8);
    } catch (const DenominatorVanishes&) {
      ++rep.skipped;
      continue;
    }
    double res = std::abs(target_residual(eps, img[0], img[1], img[2]));
    ++rep.evaluated;
    if (res > rep.max_residual) {
      rep.max_residual = res;
      rep.worst_point = p.coords();
    }
  }
  rep.pass = rep.evaluated > 0 && rep.max_residual <= tol;
  return rep;
}

MembershipReport maps_sphere_model(const RationalMapGerm& H, Signature eps,
                                   int n, double tol, std::uint64_t seed) {
  require_signature(eps);
  Rng rng(seed);
  MembershipReport rep;
  for (int i = 0; i < n; ++i) {
    C z = rng.gauss_complex(), w = rng.gauss_complex();
    double nrm = std::sqrt(std::norm(z) + std::norm(w));
    while (nrm < 1e-6) {
      z = rng.gauss_complex();
      w = rng.gauss_complex();
      nrm = std::sqrt(std::norm(z) + std::norm(w));
    }
    std::array<C, 2> pt{z / nrm, w / nrm};
    std::vector<C> img;
    try {
      // A generous denominator floor keeps the cancellation error in the
      // residual far below tol even for maps with poles on the sphere.
      img = H.eval(pt, 0.05);
    } catch (const DenominatorVanishes&) {
      ++rep.skipped;
      continue;
    }
    double res = std::abs(sphere_target_residual(eps, img[0], img[1], img[2]));
    ++rep.evaluated;
    if (res > rep.max_residual) {
      rep.max_residual = res;
      rep.worst_point = pt;
    }
  }
  rep.pass = rep.evaluated > 0 && rep.max_residual <= tol;
  return rep;
}

std::string F2Diagnostics::summary() const {
  std::ostringstream os;
  os << (pass() ? "in class" : "not in class") << ": holomorphic=" << holomorphic
     << " fixes_origin=" << fixes_origin << " (|H(0)|=" << origin_norm << ")"
     << " nondegenerate=" << nondegenerate << " (|det|=" << std::abs(determinant)
     << ")"
     << " transversal=" << transversal << " (g_w(0)=" << g_w_real << "+"
     << g_w_imag << "i)"
     << " membership=" << on_hypersurface << " (res=" << membership_residual
     << ")";
  return os.str();
}

F2Diagnostics is_in_F2(const RationalMapGerm& H, Signature eps,
                       int membership_samples, double membership_radius,
                       double membership_tol) {
  require_signature(eps);
  F2Diagnostics d;
  if (H.components() != 3) return d;
  for (const auto& c : H.comp)
    if (!c.holomorphic_at_origin()) return d;
  d.holomorphic = true;

  std::vector<Jet> j;
  try {
    j = expand_map(H, 2);
  } catch (const DenominatorVanishes&) {
    d.holomorphic = false;
    return d;
  }

  d.origin_norm = std::max({std::abs(j[0].coeff(0, 0)), std::abs(j[1].coeff(0, 0)),
                            std::abs(j[2].coeff(0, 0))});
  d.fixes_origin = d.origin_norm <= 1e-10;

  const C f1z = jet_derivative(j[0], 1, 0), f2z = jet_derivative(j[1], 1, 0);
  const C f1z2 = jet_derivative(j[0], 2, 0), f2z2 = jet_derivative(j[1], 2, 0);
  d.determinant = f1z * f2z2 - f2z * f1z2;
  d.nondegenerate = std::abs(d.determinant) > kNondegeneracyTol;

  const C gw = jet_derivative(j[2], 0, 1);
  d.g_w_real = gw.real();
  d.g_w_imag = gw.imag();
  d.transversal =
      gw.real() > kTransversalityTol && std::abs(gw.imag()) < kNondegeneracyTol;

  MembershipReport mem = maps_hypersurface(H, eps, membership_samples,
                                           membership_radius, membership_tol);
  d.membership_residual = mem.max_residual;
  d.on_hypersurface = mem.pass;
  return d;
}

namespace {

RationalGerm make_r2(CPoly2 num, CPoly2 den) {
  return RationalGerm{std::move(num), std::move(den)};
}

void self_check_source_to_heisenberg(const RationalMapGerm& M, int n) {
  Rng rng(42);
  int done = 0;
  while (done < n) {
    C z = rng.gauss_complex(), w = rng.gauss_complex();
    double nrm = std::sqrt(std::norm(z) + std::norm(w));
    if (nrm < 1e-6) continue;
    std::array<C, 2> pt{z / nrm, w / nrm};
    std::vector<C> img;
    try {
      img = M.eval(pt, 0.05);
    } catch (const DenominatorVanishes&) {
      continue;  // pole of the transform; not part of the check
    }
    if (std::abs(source_residual(img[0], img[1])) > 1e-10)
      throw SelfCheckFailed("source Cayley transform failed its self-check");
    ++done;
  }
}

void self_check_heisenberg_to_source_sphere(const RationalMapGerm& M, int n) {
  Rng rng(42);
  for (int i = 0; i < n; ++i) {
    SourcePoint p{rng.disk(0.8), rng.uniform(-0.8, 0.8)};
    auto img = M.eval(p.coords());
    if (std::abs(std::norm(img[0]) + std::norm(img[1]) - 1.0) > 1e-10)
      throw SelfCheckFailed(
          "inverse source Cayley transform failed its self-check");
  }
}

std::array<C, 3> sample_compact_target_point(Rng& rng, Signature eps) {
  if (eps == 1) {
    while (true) {
      C z1 = rng.gauss_complex(), z2 = rng.gauss_complex(),
        z3 = rng.gauss_complex();
      double nrm = std::sqrt(std::norm(z1) + std::norm(z2) + std::norm(z3));
      if (nrm < 1e-6) continue;
      return {z1 / nrm, z2 / nrm, z3 / nrm};
    }
  }
  // Signature (2,1): |z1|^2 + |z2|^2 = 1 + |z3|^2 with free z3.
  C z3 = rng.disk(1.0);
  double radius = std::sqrt(1.0 + std::norm(z3));
  while (true) {
    C z1 = rng.gauss_complex(), z2 = rng.gauss_complex();
    double nrm = std::sqrt(std::norm(z1) + std::norm(z2));
    if (nrm < 1e-6) continue;
    return {radius * z1 / nrm, radius * z2 / nrm, z3};
  }
}

void self_check_target_to_heisenberg(const RationalMapGerm3& M, Signature eps,
                                     int n) {
  Rng rng(42);
  int done = 0;
  while (done < n) {
    auto pt = sample_compact_target_point(rng, eps);
    std::vector<C> img;
    try {
      img = M.eval(pt, 0.05);
    } catch (const DenominatorVanishes&) {
      continue;
    }
    if (std::abs(target_residual(eps, img[0], img[1], img[2])) > 1e-10)
      throw SelfCheckFailed("target Cayley transform failed its self-check");
    ++done;
  }
}

void self_check_heisenberg_to_compact_target(const RationalMapGerm3& M,
                                             Signature eps, int n) {
  Rng rng(42);
  for (int i = 0; i < n; ++i) {
    C q1 = rng.disk(0.5), q2 = rng.disk(0.5);
    double u = rng.uniform(-0.5, 0.5);
    C w{u, std::norm(q1) + static_cast<double>(eps) * std::norm(q2)};
    auto img = M.eval({q1, q2, w});
    if (std::abs(sphere_target_residual(eps, img[0], img[1], img[2])) > 1e-10)
      throw SelfCheckFailed(
          "inverse target Cayley transform failed its self-check");
  }
}

}  // namespace

RationalMapGerm cayley_source(int self_check_samples) {
  // (z, w) -> ( z/(1+w), i(1-w)/(1+w) ); base point (0, 1) -> 0.
  CPoly2 den{{ij(0, 0), C(1.0)}, {ij(0, 1), C(1.0)}};
  RationalMapGerm M;
  M.comp.push_back(make_r2(CPoly2{{ij(1, 0), C(1.0)}}, den));
  M.comp.push_back(
      make_r2(CPoly2{{ij(0, 0), C(0.0, 1.0)}, {ij(0, 1), C(0.0, -1.0)}}, den));
  if (self_check_samples > 0)
    self_check_source_to_heisenberg(M, self_check_samples);
  return M;
}

RationalMapGerm cayley_source_inverse(int self_check_samples) {
  // (z, w) -> ( 2z/(1-iw), (1+iw)/(1-iw) ); 0 -> (0, 1).
  CPoly2 den{{ij(0, 0), C(1.0)}, {ij(0, 1), C(0.0, -1.0)}};
  RationalMapGerm M;
  M.comp.push_back(make_r2(CPoly2{{ij(1, 0), C(2.0)}}, den));
  M.comp.push_back(
      make_r2(CPoly2{{ij(0, 0), C(1.0)}, {ij(0, 1), C(0.0, 1.0)}}, den));
  if (self_check_samples > 0)
    self_check_heisenberg_to_source_sphere(M, self_check_samples);
  return M;
}

RationalMapGerm3 cayley_target(Signature eps, int self_check_samples) {
  require_signature(eps);
  // (z1, z2, z3) -> ( z1/(1+z2), z3/(1+z2), i(1-z2)/(1+z2) );
  // base point (0, 1, 0) -> 0. The pivot coordinate is z2 so that the
  // signed coordinate z3 of the compact model lands in the signed slot z2'
  // of the unbounded model.
  CPoly3 den{{ijk(0, 0, 0), C(1.0)}, {ijk(0, 1, 0), C(1.0)}};
  RationalMapGerm3 M;
  M.comp.push_back({CPoly3{{ijk(1, 0, 0), C(1.0)}}, den});
  M.comp.push_back({CPoly3{{ijk(0, 0, 1), C(1.0)}}, den});
  M.comp.push_back(
      {CPoly3{{ijk(0, 0, 0), C(0.0, 1.0)}, {ijk(0, 1, 0), C(0.0, -1.0)}}, den});
  if (self_check_samples > 0)
    self_check_target_to_heisenberg(M, eps, self_check_samples);
  return M;
}

RationalMapGerm3 cayley_target_inverse(Signature eps, int self_check_samples) {
  require_signature(eps);
  // (z1', z2', w') -> ( 2z1'/(1-iw'), (1+iw')/(1-iw'), 2z2'/(1-iw') ).
  CPoly3 den{{ijk(0, 0, 0), C(1.0)}, {ijk(0, 0, 1), C(0.0, -1.0)}};
  RationalMapGerm3 M;
  M.comp.push_back({CPoly3{{ijk(1, 0, 0), C(2.0)}}, den});
  M.comp.push_back(
      {CPoly3{{ijk(0, 0, 0), C(1.0)}, {ijk(0, 0, 1), C(0.0, 1.0)}}, den});
  M.comp.push_back({CPoly3{{ijk(0, 1, 0), C(2.0)}}, den});
  if (self_check_samples > 0)
    self_check_heisenberg_to_compact_target(M, eps, self_check_samples);
  return M;
}

}  // namespace hq
