#pragma once

#include <array>

#include "lcqft/dirac_algebra.hpp"

namespace lcqft::spin {

using dirac::CliffordElement;
using dirac::Mat4;
using dirac::Mat4c;

struct SpinElement {
  Mat4c S;  // Weyl representation
};

struct LorentzMatrix {
  Mat4 L;  // L(a, b) = Lambda^a_b
  double defect() const;  // max of |L^T eta L - eta| and orthochronous / det violations
};

struct BivectorElement {
  // Coefficients on g0g1, g0g2, g0g3, g1g2, g1g3, g2g3.
  std::array<double, 6> lambda_coeffs{};
  CliffordElement to_clifford() const;
};

enum class Membership { NotPin, PinOnly, SpinNotIdentityComponent, SpinZero };
const char* membership_name(Membership m);

// Curves through the identity: boost c_i(t) = g0 (cosh t g0 + sinh t g_i),
// rotation d_ij(t) = -g_i (cos t g_i - sin t g_j).
CliffordElement boost_curve(int i, double t);
CliffordElement rotation_curve(int i, int j, double t);
SpinElement to_spin(const CliffordElement& e);

// Lambda^a_b(S) = 1/4 eta^{ac} Tr(g_c S g_b S^-1).
Mat4 lambda_of(const Mat4c& S);
LorentzMatrix covering_map(const SpinElement& S);

// dLambda^a_b(s) for an element s of the Lie algebra (in the Weyl rep).
Mat4 d_lambda(const Mat4c& s);
BivectorElement d_lambda_inverse(const Mat4& lambda);

SpinElement lift(const LorentzMatrix& L);

Membership spin_membership(const Mat4c& S);

}  // namespace lcqft::spin
