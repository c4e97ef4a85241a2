#include "lcqft/spin_group.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "lcqft/errors.hpp"

namespace lcqft::spin {

namespace {

using dirac::GammaRep;
using dirac::Signature;

const GammaRep& weyl() {
  static const GammaRep rep = dirac::weyl_representation();
  return rep;
}

const Mat4c& weyl_A() {
  static const Mat4c A = dirac::find_adjoint_conjugation(weyl()).A;
  return A;
}

constexpr std::array<std::array<int, 2>, 6> kPairs = {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

bool is_pin(const Mat4c& S, double tol) {
  // Rounding in det grows with the Hadamard bound prod |col|.
  double hadamard = 1.0;
  for (int c = 0; c < 4; ++c) hadamard *= S.col(c).norm();
  if (std::abs(S.determinant() - 1.0) > tol * std::max(1.0, hadamard)) return false;
  const Mat4c Si = S.inverse();
  for (const Mat4c& g : weyl().gammas) {
    const Mat4c M = S * g * Si;
    // Rounding in S g S^-1 scales with |S| |S^-1|, not with the (possibly small) result.
    const double scale = 1.0 + M.cwiseAbs().maxCoeff() + S.cwiseAbs().maxCoeff() * Si.cwiseAbs().maxCoeff();
    Mat4c rebuilt = Mat4c::Zero();
    for (int b = 0; b < 4; ++b) {
      const auto ub = static_cast<std::size_t>(b);
      const std::complex<double> c = Signature::diag(b) * (weyl().gammas[ub] * M).trace() / 4.0;
      if (std::abs(c.imag()) > tol * scale) return false;
      rebuilt += c.real() * weyl().gammas[ub];
    }
    if ((rebuilt - M).cwiseAbs().maxCoeff() > tol * scale) return false;
  }
  return true;
}

bool is_even(const Mat4c& S, double tol) {
  const Mat4c& g5 = weyl().gamma5;
  return (S * g5 - g5 * S).cwiseAbs().maxCoeff() <= tol * (1.0 + S.cwiseAbs().maxCoeff());
}

}  // namespace

const char* membership_name(Membership m) {
  switch (m) {
    case Membership::NotPin: return "NotPin";
    case Membership::PinOnly: return "PinOnly";
    case Membership::SpinNotIdentityComponent: return "SpinNotIdentityComponent";
    case Membership::SpinZero: return "SpinZero";
  }
  return "?";
}

double LorentzMatrix::defect() const {
  const Mat4 eta = Signature().eta;
  double d = (L.transpose() * eta * L - eta).cwiseAbs().maxCoeff();
  d = std::max(d, std::abs(L.determinant() - 1.0));
  if (L(0, 0) < 1.0) d = std::max(d, 1.0 - L(0, 0));
  return d;
}

CliffordElement BivectorElement::to_clifford() const {
  CliffordElement e;
  for (std::size_t k = 0; k < 6; ++k) e[5 + static_cast<int>(k)] = lambda_coeffs[k];
  return e;
}

CliffordElement boost_curve(int i, double t) {
  const CliffordElement g0 = CliffordElement::gamma(0);
  return g0 * (g0 * std::cosh(t) + CliffordElement::gamma(i) * std::sinh(t));
}

CliffordElement rotation_curve(int i, int j, double t) {
  const CliffordElement gi = CliffordElement::gamma(i);
  return -(gi * (gi * std::cos(t) - CliffordElement::gamma(j) * std::sin(t)));
}

SpinElement to_spin(const CliffordElement& e) { return {dirac::represent(e, weyl())}; }

Mat4 lambda_of(const Mat4c& S) {
  const Mat4c Si = S.inverse();
  Mat4 L;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const auto ua = static_cast<std::size_t>(a);
      const auto ub = static_cast<std::size_t>(b);
      L(a, b) = 0.25 * Signature::diag(a) * (weyl().gammas[ua] * S * weyl().gammas[ub] * Si).trace().real();
    }
  return L;
}

LorentzMatrix covering_map(const SpinElement& S) {
  if (spin_membership(S.S) != Membership::SpinZero)
    throw Error(ErrorCode::NotInSpinGroup, "matrix is not in the identity component of Spin");
  return {lambda_of(S.S)};
}

Mat4 d_lambda(const Mat4c& s) {
  Mat4 L;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const auto ua = static_cast<std::size_t>(a);
      const auto ub = static_cast<std::size_t>(b);
      const Mat4c& gc = weyl().gammas[ua];
      const Mat4c& gb = weyl().gammas[ub];
      L(a, b) = 0.25 * Signature::diag(a) * (gc * (s * gb - gb * s)).trace().real();
    }
  return L;
}

BivectorElement d_lambda_inverse(const Mat4& lambda) {
  const Mat4 M = lambda * Signature().eta;  // lambda^a_b eta^{bc}
  const double scale = 1.0 + M.cwiseAbs().maxCoeff();
  if ((M + M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw Error(ErrorCode::BadGenerator, "lambda eta is not antisymmetric");
  BivectorElement out;
  for (std::size_t k = 0; k < 6; ++k) {
    const int a = kPairs[k][0];
    const int c = kPairs[k][1];
    out.lambda_coeffs[k] = 0.25 * (M(a, c) - M(c, a));
  }
  return out;
}

SpinElement lift(const LorentzMatrix& Lm) {
  const Mat4& L = Lm.L;
  if (Lm.defect() > 1e-8) throw Error(ErrorCode::InvalidArgument, "lift requires a proper orthochronous Lorentz matrix");
  // Polar decomposition L = B R: B is the pure boost taking e0 to L e0.
  const Eigen::Vector4d u = L.col(0);
  const double sp = u.tail<3>().norm();
  const double phi = std::asinh(sp);
  Mat4 logB = Mat4::Zero();
  Mat4 Binv = Mat4::Identity();
  if (sp > 0.0) {
    const Eigen::Vector3d n = u.tail<3>() / sp;
    logB.block<1, 3>(0, 1) = phi * n.transpose();
    logB.block<3, 1>(1, 0) = phi * n;
    Binv(0, 0) = u(0);
    Binv.block<1, 3>(0, 1) = -sp * n.transpose();
    Binv.block<3, 1>(1, 0) = -sp * n;
    Binv.block<3, 3>(1, 1) += (u(0) - 1.0) * n * n.transpose();
  }
  const Mat4 R = Binv * L;

  const Eigen::Matrix3d R3 = R.block<3, 3>(1, 1);
  const double c = std::clamp((R3.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double theta = std::acos(c);
  const double pi = std::acos(-1.0);
  if (std::abs(theta - pi) < 1e-10) throw Error(ErrorCode::LogBranchFailure, "rotation angle is pi");
  Mat4 logR = Mat4::Zero();
  if (theta > 1e-14) logR.block<3, 3>(1, 1) = theta / (2.0 * std::sin(theta)) * (R3 - R3.transpose());
  else logR.block<3, 3>(1, 1) = 0.5 * (R3 - R3.transpose());

  const Mat4c sB = dirac::represent(d_lambda_inverse(logB).to_clifford(), weyl());
  const Mat4c sR = dirac::represent(d_lambda_inverse(logR).to_clifford(), weyl());
  Mat4c S = sB.exp() * sR.exp();
  if (S.trace().real() < 0.0) S = -S;
  return {S};
}

Membership spin_membership(const Mat4c& S) {
  constexpr double tol = 1e-10;
  if (!S.allFinite() || !is_pin(S, tol)) return Membership::NotPin;
  if (!is_even(S, tol)) return Membership::PinOnly;
  const Mat4c& A = weyl_A();
  const Mat4c M = S.adjoint() * A * S;
  const double scale = 1.0 + M.cwiseAbs().maxCoeff();
  if ((M - A).cwiseAbs().maxCoeff() <= tol * scale) return Membership::SpinZero;
  return Membership::SpinNotIdentityComponent;
}

}  // namespace lcqft::spin
