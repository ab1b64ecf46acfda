#pragma once

// Sparse polynomial / rational-germ arithmetic over complex coefficients and
// truncated Taylor (jet) expansion at the origin. Everything downstream —
// group actions, normalization, classification — reduces to the operations in
// this header.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <compare>
#include <functional>
#include <initializer_list>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "hqmaps/errors.hpp"

namespace hq {

using C = std::complex<double>;

// ---------------------------------------------------------------------------
// Exponents and sparse polynomials
// ---------------------------------------------------------------------------

template <int N>
struct Expo {
  std::array<int, N> e{};

  int total() const {
    int t = 0;
    for (int x : e) t += x;
    return t;
  }
  Expo operator+(const Expo& o) const {
    Expo r;
    for (int k = 0; k < N; ++k) r.e[k] = e[k] + o.e[k];
    return r;
  }
  auto operator<=>(const Expo&) const = default;
};

// Sparse polynomial in N complex variables. Canonical form: no stored
// coefficient is exactly zero (pruned at exact equality, never at a
// tolerance, so the algebra introduces no hidden truncation).
template <int N>
class Poly {
 public:
  using Key = Expo<N>;
  using Terms = std::map<Key, C>;

  Poly() = default;
  Poly(std::initializer_list<std::pair<Key, C>> terms) {
    for (const auto& [k, v] : terms) add_term(k, v);
  }

  static Poly constant(C v) {
    Poly p;
    p.add_term(Key{}, v);
    return p;
  }
  static Poly variable(int idx) {
    Poly p;
    Key k{};
    k.e[idx] = 1;
    p.add_term(k, C(1.0));
    return p;
  }

  const Terms& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  C coeff(const Key& k) const {
    auto it = t_.find(k);
    return it == t_.end() ? C(0.0) : it->second;
  }

  void add_term(const Key& k, C v) {
    auto it = t_.find(k);
    if (it == t_.end()) {
      if (v != C(0.0)) t_.emplace(k, v);
    } else {
      it->second += v;
      if (it->second == C(0.0)) t_.erase(it);
    }
  }

  int total_degree() const {
    int d = 0;
    for (const auto& [k, v] : t_) d = std::max(d, k.total());
    return d;
  }

  Poly truncated(int max_total_degree) const {
    Poly r;
    for (const auto& [k, v] : t_)
      if (k.total() <= max_total_degree) r.t_.emplace(k, v);
    return r;
  }

  C eval(const std::array<C, N>& pt) const {
    C s(0.0);
    for (const auto& [k, v] : t_) {
      C m = v;
      for (int i = 0; i < N; ++i)
        for (int p = 0; p < k.e[i]; ++p) m *= pt[i];
      s += m;
    }
    return s;
  }

  Poly& operator+=(const Poly& o) {
    for (const auto& [k, v] : o.t_) add_term(k, v);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    for (const auto& [k, v] : o.t_) add_term(k, -v);
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ka, va] : a.t_)
      for (const auto& [kb, vb] : b.t_) r.add_term(ka + kb, va * vb);
    return r;
  }
  friend Poly operator*(C s, const Poly& a) {
    Poly r;
    for (const auto& [k, v] : a.t_) r.add_term(k, s * v);
    return r;
  }
  bool operator==(const Poly& o) const { return t_ == o.t_; }

 private:
  Terms t_;
};

using CPoly2 = Poly<2>;
using CPoly3 = Poly<3>;

// Convenience term constructors used by the explicit map catalog.
inline CPoly2::Key ij(int i, int j) { return CPoly2::Key{{i, j}}; }
inline CPoly3::Key ijk(int i, int j, int k) { return CPoly3::Key{{i, j, k}}; }

inline C poly_eval(const CPoly2& p, C z, C w) { return p.eval({z, w}); }
inline CPoly2 poly_mul(const CPoly2& a, const CPoly2& b) { return a * b; }

// ---------------------------------------------------------------------------
// Rational germs and rational maps
// ---------------------------------------------------------------------------

// A ratio of polynomials. Construction is permissive about the denominator
// vanishing at the origin (some explicit sphere-model maps are singular
// there); operations that require a germ at 0 — expand, composition — check
// and throw DenominatorVanishes.
template <int N>
struct Rational {
  Poly<N> num;
  Poly<N> den = Poly<N>::constant(C(1.0));

  // Pointwise value; throws when the denominator magnitude at the point is
  // below `den_floor` (relative to nothing — these maps are O(1)-scaled).
  C eval(const std::array<C, N>& pt, double den_floor = 1e-14) const {
    C d = den.eval(pt);
    if (std::abs(d) <= den_floor)
      throw DenominatorVanishes("denominator ~ 0 at evaluation point");
    return num.eval(pt) / d;
  }

  bool holomorphic_at_origin() const {
    return std::abs(den.coeff(typename Poly<N>::Key{})) > 0.0;
  }
};

using RationalGerm = Rational<2>;
using RationalGerm3 = Rational<3>;

// A tuple of rational components with a common source space: N source
// variables, any number of components. Maps used here are C^2 -> C^2 (group
// elements of the source), C^2 -> C^3 (the hypersurface maps), and
// C^3 -> C^3 (group elements of the target).
template <int N>
struct RationalMap {
  std::vector<Rational<N>> comp;

  int components() const { return static_cast<int>(comp.size()); }

  std::vector<C> eval(const std::array<C, N>& pt,
                      double den_floor = 1e-14) const {
    std::vector<C> v;
    v.reserve(comp.size());
    for (const auto& c : comp) v.push_back(c.eval(pt, den_floor));
    return v;
  }
};

using RationalMapGerm = RationalMap<2>;    // source C^2
using RationalMapGerm3 = RationalMap<3>;   // source C^3

RationalMapGerm identity_map2();
RationalMapGerm3 identity_map3();

// ---------------------------------------------------------------------------
// Composition
// ---------------------------------------------------------------------------

namespace detail {

// Rewrites the components of `inner` over one common denominator D,
// returning the numerators. When all component denominators are equal
// (the common case: group elements and catalog maps share one denominator)
// D is that polynomial; otherwise D is the product of the denominators.
template <int NI>
std::pair<std::vector<Poly<NI>>, Poly<NI>> common_denominator(
    const RationalMap<NI>& inner) {
  const auto& c = inner.comp;
  bool all_equal = true;
  for (size_t i = 1; i < c.size(); ++i)
    if (!(c[i].den == c[0].den)) all_equal = false;
  std::vector<Poly<NI>> nums;
  if (all_equal) {
    for (const auto& r : c) nums.push_back(r.num);
    return {nums, c[0].den};
  }
  Poly<NI> D = Poly<NI>::constant(C(1.0));
  for (const auto& r : c) D = D * r.den;
  for (size_t i = 0; i < c.size(); ++i) {
    Poly<NI> n = c[i].num;
    for (size_t j = 0; j < c.size(); ++j)
      if (j != i) n = n * c[j].den;
    nums.push_back(n);
  }
  return {nums, D};
}

// Substitutes x_k = N_k / D into p and clears denominators by homogenizing
// to total degree d >= deg p: returns sum_alpha c_alpha N^alpha D^{d-|alpha|},
// so that p(N/D) = result / D^d.
template <int NO, int NI>
Poly<NI> substitute_homogenized(const Poly<NO>& p,
                                const std::vector<Poly<NI>>& nums,
                                const Poly<NI>& D, int d) {
  // Power tables keep the inner loop cheap at desk scale.
  std::array<int, NO> max_pow{};
  int max_rem = 0;
  for (const auto& [k, v] : p.terms()) {
    for (int i = 0; i < NO; ++i) max_pow[i] = std::max(max_pow[i], k.e[i]);
    max_rem = std::max(max_rem, d - k.total());
  }
  auto powers = [](const Poly<NI>& b, int up) {
    std::vector<Poly<NI>> pw;
    pw.push_back(Poly<NI>::constant(C(1.0)));
    for (int i = 1; i <= up; ++i) pw.push_back(pw.back() * b);
    return pw;
  };
  std::vector<std::vector<Poly<NI>>> npow;
  for (int i = 0; i < NO; ++i) npow.push_back(powers(nums[i], max_pow[i]));
  std::vector<Poly<NI>> dpow = powers(D, max_rem);

  Poly<NI> acc;
  for (const auto& [k, v] : p.terms()) {
    Poly<NI> t = Poly<NI>::constant(v);
    for (int i = 0; i < NO; ++i) t = t * npow[i][k.e[i]];
    t = t * dpow[d - k.total()];
    acc += t;
  }
  return acc;
}

}  // namespace detail

// Exact composition outer(inner) as a rational map: each outer component's
// numerator and denominator have the inner components substituted, cleared to
// a single ratio. The result must again be holomorphic at the origin;
// otherwise DenominatorVanishes is thrown (the composition left the germ
// category). `inner` is *not* required to fix 0 — hypersurface translations
// legitimately move the base point, and the substitution is purely algebraic.
template <int NO, int NI>
RationalMap<NI> rational_compose(const RationalMap<NO>& outer,
                                 const RationalMap<NI>& inner) {
  if (inner.components() != NO)
    throw Error("rational_compose: inner component count != outer arity");
  auto [nums, D] = detail::common_denominator(inner);
  RationalMap<NI> out;
  for (const auto& rc : outer.comp) {
    int d = std::max(rc.num.total_degree(), rc.den.total_degree());
    Rational<NI> r;
    r.num = detail::substitute_homogenized<NO, NI>(rc.num, nums, D, d);
    r.den = detail::substitute_homogenized<NO, NI>(rc.den, nums, D, d);
    if (!r.holomorphic_at_origin())
      throw DenominatorVanishes(
          "rational_compose: composed denominator vanishes at the origin");
    out.comp.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Jets
// ---------------------------------------------------------------------------

// Truncated Taylor expansion at the origin: coeffs[(i,j)] is the coefficient
// of z^i w^j, stored for i + j <= order.
struct Jet {
  int order = 0;
  std::map<Expo<2>, C> coeffs;

  C coeff(int i, int j) const {
    auto it = coeffs.find(Expo<2>{{i, j}});
    return it == coeffs.end() ? C(0.0) : it->second;
  }
};

// Taylor expansion of num/den to total order K via the finite geometric
// series num * den(0)^{-1} * (1 - d)^{-1}, d the normalized nonconstant part
// of the denominator.
Jet expand(const RationalGerm& r, int K);

// The partial derivative value h_{z^i w^k}(0) = i! k! coeff(i,k).
C jet_derivative(const Jet& j, int i, int k);

std::vector<Jet> expand_map(const RationalMapGerm& H, int K);

// ---------------------------------------------------------------------------
// Numerical differentiation
// ---------------------------------------------------------------------------

using RealFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Central finite-difference Jacobian with componentwise step h; one optional
// Richardson refinement halves the step and extrapolates the O(h^2) error.
Eigen::MatrixXd real_jacobian(const RealFunction& f, const Eigen::VectorXd& x0,
                              double h = 1e-6, bool richardson = false);

}  // namespace hq
