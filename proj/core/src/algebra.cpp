#include "hqmaps/algebra.hpp"

namespace hq {

RationalMapGerm identity_map2() {
  RationalMapGerm m;
  m.comp.push_back({CPoly2::variable(0), CPoly2::constant(C(1.0))});
  m.comp.push_back({CPoly2::variable(1), CPoly2::constant(C(1.0))});
  return m;
}

RationalMapGerm3 identity_map3() {
  RationalMapGerm3 m;
  for (int i = 0; i < 3; ++i)
    m.comp.push_back({CPoly3::variable(i), CPoly3::constant(C(1.0))});
  return m;
}

Jet expand(const RationalGerm& r, int K) {
  const C d0 = r.den.coeff(ij(0, 0));
  if (std::abs(d0) == 0.0)
    throw DenominatorVanishes("expand: denominator vanishes at the origin");

  // den = d0 (1 - d)  with  d = -(den - d0)/d0, so 1/den = (1/d0) sum d^k.
  CPoly2 d;
  for (const auto& [k, v] : r.den.terms())
    if (k.total() > 0) d.add_term(k, -v / d0);

  CPoly2 inv = CPoly2::constant(C(1.0));
  CPoly2 term = CPoly2::constant(C(1.0));
  for (int k = 1; k <= K; ++k) {
    term = (term * d).truncated(K);
    if (term.is_zero()) break;
    inv += term;
  }
  CPoly2 series = (r.num.truncated(K) * inv).truncated(K);

  Jet j;
  j.order = K;
  for (const auto& [k, v] : series.terms()) j.coeffs.emplace(k, v / d0);
  return j;
}

C jet_derivative(const Jet& j, int i, int k) {
  if (i + k > j.order)
    throw OrderExceeded("jet_derivative: requested order exceeds jet order");
  double fact = 1.0;
  for (int t = 2; t <= i; ++t) fact *= t;
  for (int t = 2; t <= k; ++t) fact *= t;
  return fact * j.coeff(i, k);
}

std::vector<Jet> expand_map(const RationalMapGerm& H, int K) {
  std::vector<Jet> v;
  v.reserve(H.comp.size());
  for (const auto& c : H.comp) v.push_back(expand(c, K));
  return v;
}

namespace {

Eigen::MatrixXd central_jacobian(const RealFunction& f,
                                 const Eigen::VectorXd& x0, double h) {
  Eigen::VectorXd probe;
  try {
    probe = f(x0);
  } catch (const std::exception& e) {
    throw EvaluationFailed(std::string("real_jacobian: ") + e.what());
  }
  const int m = static_cast<int>(probe.size());
  const int n = static_cast<int>(x0.size());
  Eigen::MatrixXd J(m, n);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd xp = x0, xm = x0;
    xp[j] += h;
    xm[j] -= h;
    try {
      J.col(j) = (f(xp) - f(xm)) / (2.0 * h);
    } catch (const std::exception& e) {
      throw EvaluationFailed(std::string("real_jacobian: ") + e.what());
    }
  }
  return J;
}

}  // namespace

Eigen::MatrixXd real_jacobian(const RealFunction& f, const Eigen::VectorXd& x0,
                              double h, bool richardson) {
  Eigen::MatrixXd J = central_jacobian(f, x0, h);
  if (!richardson) return J;
  Eigen::MatrixXd J2 = central_jacobian(f, x0, h / 2.0);
  return (4.0 * J2 - J) / 3.0;
}

}  // namespace hq
