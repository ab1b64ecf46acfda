#include "hqmaps/catalog.hpp"

#include <cmath>
#include <sstream>

namespace hq {

namespace {

const C kI{0.0, 1.0};

RationalMapGerm family1(double e) {
  CPoly2 den{{ij(0, 0), C(4.0)}, {ij(0, 2), C(-1.0)}};
  RationalMapGerm m;
  m.comp.push_back({CPoly2{{ij(1, 0), C(4.0)}, {ij(1, 1), 2.0 * kI * e}}, den});
  m.comp.push_back({CPoly2{{ij(2, 0), C(4.0)}}, den});
  m.comp.push_back({CPoly2{{ij(0, 1), C(4.0)}}, den});
  return m;
}

RationalMapGerm family2(double s, double e) {
  CPoly2 den{{ij(0, 0), C(4.0)},
             {ij(1, 0), C(-4.0 * e * s)},
             {ij(0, 1), -kI * (e + s * s)},
             {ij(1, 1), -2.0 * kI * s},
             {ij(0, 2), C(-e * s * s)}};
  CPoly2 n1{{ij(1, 0), C(4.0)},
            {ij(2, 0), C(-4.0 * e * s)},
            {ij(1, 1), kI * (e - s * s)},
            {ij(0, 2), C(s)}};
  CPoly2 n2{{ij(2, 0), C(4.0)}, {ij(0, 2), C(s * s)}};
  CPoly2 n3{{ij(0, 1), C(4.0)},
            {ij(1, 1), C(-4.0 * e * s)},
            {ij(0, 2), -kI * (e + s * s)}};
  return RationalMapGerm{{{n1, den}, {n2, den}, {n3, den}}};
}

RationalMapGerm family3(double s, double e) {
  CPoly2 den{{ij(0, 0), C(256.0 * e)},
             {ij(0, 1), C(0.0, -32.0)},
             {ij(2, 0), C(64.0)},
             {ij(1, 1), -192.0 * kI * e * s},
             {ij(0, 2), C(-(17.0 * e + 144.0 * s * s))},
             {ij(2, 1), 32.0 * kI * e},
             {ij(1, 2), C(24.0 * s)},
             {ij(0, 3), kI}};
  CPoly2 n1{{ij(1, 0), C(256.0 * e)},
            {ij(1, 1), C(0.0, 96.0)},
            {ij(0, 2), C(64.0 * e * s)},
            {ij(3, 0), C(64.0)},
            {ij(2, 1), 64.0 * kI * e * s},
            {ij(1, 2), C(-3.0 * (3.0 * e - 16.0 * s * s))},
            {ij(0, 3), 4.0 * kI * s}};
  CPoly2 n2{{ij(2, 0), C(256.0 * e)},
            {ij(0, 2), C(-16.0)},
            {ij(3, 0), C(256.0 * s)},
            {ij(2, 1), C(0.0, 16.0)},
            {ij(1, 2), C(-16.0 * e * s)},
            {ij(0, 3), -kI * e}};
  CPoly2 n3{{ij(0, 1), C(256.0 * e)},
            {ij(0, 2), C(0.0, -32.0)},
            {ij(2, 1), C(64.0)},
            {ij(1, 2), -64.0 * kI * e * s},
            {ij(0, 3), C(-(e + 16.0 * s * s))}};
  return RationalMapGerm{{{n1, den}, {n2, den}, {n3, den}}};
}

}  // namespace

void NormalFormID::validate() const {
  require_signature(eps);
  if (family < 1 || family > 3)
    throw Error("normal form family must be 1, 2 or 3");
  if (!(s >= 0.0) || !std::isfinite(s))
    throw Error("normal form parameter s must be finite and nonnegative");
  if (family == 1 && s != 0.0)
    throw Error("family 1 carries no parameter; s must be 0");
}

std::string NormalFormID::label() const {
  std::ostringstream os;
  os << "G" << family;
  if (family != 1) os << "(s=" << s << ")";
  os << (eps == 1 ? "[+]" : "[-]");
  return os.str();
}

RationalMapGerm normal_form_map(const NormalFormID& id) {
  id.validate();
  const double e = static_cast<double>(id.eps);
  switch (id.family) {
    case 1:
      return family1(e);
    case 2:
      return family2(id.s, e);
    default:
      return family3(id.s, e);
  }
}

RationalMapGerm faran_lebl_map(int index, Signature eps) {
  require_signature(eps);
  if (index < 1 || index > 7)
    throw Error("compact-model map index must be between 1 and 7");
  if (index >= 5 && eps != -1)
    throw InvalidSignature(
        "compact-model maps 5..7 exist only for signature -1");
  const double e = static_cast<double>(eps);
  const CPoly2 one = CPoly2::constant(C(1.0));
  const double rt2 = std::sqrt(2.0), rt3 = std::sqrt(3.0);
  RationalMapGerm m;
  switch (index) {
    case 1:
      m.comp.push_back({CPoly2{{ij(1, 0), C(1.0)}}, one});
      m.comp.push_back({CPoly2{{ij(0, 1), C(1.0)}}, one});
      m.comp.push_back({CPoly2{}, one});
      return m;
    case 2:
      m.comp.push_back({CPoly2{{ij(2, 0), C(1.0)}}, one});
      m.comp.push_back({CPoly2{{ij(0, 1), C((1.0 - e) / rt2)},
                               {ij(1, 1), C((1.0 + e) / rt2)}},
                        one});
      m.comp.push_back({CPoly2{{ij(0, 2), C(1.0)}}, one});
      return m;
    case 3: {
      CPoly2 den{{ij(1, 0), C(2.0)}};
      m.comp.push_back({CPoly2{{ij(1, 0), C(1.0)}}, one});
      m.comp.push_back(
          {CPoly2{{ij(0, 1), C(1.0 - e)}, {ij(2, 1), C(1.0 + e)}}, den});
      m.comp.push_back(
          {CPoly2{{ij(0, 2), C(1.0 - e)}, {ij(1, 2), C(1.0 + e)}}, den});
      return m;
    }
    case 4: {
      CPoly2 den{{ij(0, 0), C(1.0 + 3.0 * e)}, {ij(0, 2), C(3.0 * (1.0 - e))}};
      m.comp.push_back({CPoly2{{ij(3, 0), C(4.0)}}, den});
      m.comp.push_back({CPoly2{{ij(0, 1), C(3.0 * (1.0 - e))},
                               {ij(0, 3), C(1.0 + 3.0 * e)}},
                        den});
      m.comp.push_back({CPoly2{{ij(1, 0), C(rt3 * (1.0 - e))},
                               {ij(1, 1), C(2.0 * rt3 * (1.0 + e))},
                               {ij(1, 2), C(rt3 * (1.0 - e))}},
                        den});
      return m;
    }
    case 5: {
      CPoly2 den{{ij(0, 0), C(1.0)}, {ij(1, 0), C(rt2)}, {ij(0, 1), C(1.0)}};
      m.comp.push_back(
          {CPoly2{{ij(1, 0), C(2.0)}, {ij(2, 0), C(rt2)}}, den});
      m.comp.push_back({CPoly2{{ij(0, 1), C(1.0)}}, one});
      m.comp.push_back({CPoly2{{ij(1, 0), C(1.0)},
                               {ij(2, 0), C(rt2)},
                               {ij(1, 1), C(-1.0)}},
                        den});
      return m;
    }
    case 6: {
      CPoly2 den{{ij(0, 0), C(1.0)}, {ij(0, 1), C(-1.0)}, {ij(0, 2), C(-1.0)}};
      m.comp.push_back(
          {CPoly2{{ij(1, 0), C(1.0)}, {ij(1, 1), C(-1.0)}}, den});
      m.comp.push_back({CPoly2{{ij(0, 0), C(1.0)},
                               {ij(0, 1), C(1.0)},
                               {ij(0, 2), C(-1.0)}},
                        den});
      m.comp.push_back(
          {CPoly2{{ij(1, 0), C(1.0)}, {ij(1, 1), C(1.0)}}, den});
      return m;
    }
    default:
      // Degenerate representative with h(z,w) = w; not 2-nondegenerate.
      m.comp.push_back({CPoly2::constant(C(1.0)), one});
      m.comp.push_back({CPoly2{{ij(0, 1), C(1.0)}}, one});
      m.comp.push_back({CPoly2{{ij(0, 1), C(1.0)}}, one});
      return m;
  }
}

JetCoords jet_coordinates(const RationalMapGerm& H, int order) {
  if (order < 3)
    throw OrderExceeded("jet coordinates require expansion order >= 3");
  if (H.components() != 3)
    throw Error("jet coordinates require a map with three components");
  auto J = expand_map(H, order);
  JetCoords out;
  out.order = order;
  static constexpr std::array<std::array<int, 2>, 5> kOrders{
      {{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}};
  int idx = 0;
  for (const auto& ik : kOrders)
    for (int c = 0; c < 3; ++c)
      out.v[idx++] = jet_derivative(J[c], ik[0], ik[1]);
  out.v[idx++] = jet_derivative(J[0], 2, 1);
  out.v[idx++] = jet_derivative(J[1], 2, 1);
  return out;
}

double jet_distance(const JetCoords& a, const JetCoords& b) {
  if (a.order != b.order)
    throw OrderMismatch("jet coordinate vectors use different jet orders");
  double s = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) s += std::norm(a.v[i] - b.v[i]);
  return std::sqrt(s);
}

double jet_distance(const RationalMapGerm& A, const RationalMapGerm& B) {
  return jet_distance(jet_coordinates(A), jet_coordinates(B));
}

DeterminingInvariants determining_invariants(const RationalMapGerm& H) {
  if (H.components() != 3)
    throw Error("determining invariants require a map with three components");
  auto J = expand_map(H, 3);
  DeterminingInvariants inv;
  inv.s = 2.0 * std::abs(jet_derivative(J[0], 0, 2));
  inv.x = jet_derivative(J[1], 0, 2);
  inv.y = jet_derivative(J[1], 2, 1).imag();
  return inv;
}

}  // namespace hq
