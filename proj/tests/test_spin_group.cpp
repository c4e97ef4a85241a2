#include <gtest/gtest.h>

#include <random>

#include "lcqft/errors.hpp"
#include "lcqft/spin_group.hpp"

using namespace lcqft::spin;
using lcqft::dirac::Signature;

namespace {

CliffordElement random_spin0(std::mt19937_64& rng, int factors = 4) {
  std::uniform_real_distribution<double> t(-1.2, 1.2);
  std::uniform_int_distribution<int> pick(0, 8);
  CliffordElement s = CliffordElement::scalar(1.0);
  constexpr int rot[3][2] = {{1, 2}, {1, 3}, {2, 3}};
  for (int k = 0; k < factors; ++k) {
    const int p = pick(rng);
    if (p < 3) s = s * boost_curve(1 + p, t(rng));
    else s = s * rotation_curve(rot[p % 3][0], rot[p % 3][1], 2.0 * t(rng));
  }
  return s;
}

// Oracle: boost with rapidity r along x in Lambda^a_b form.
Mat4 boost_x(double r) {
  Mat4 L = Mat4::Identity();
  L(0, 0) = L(1, 1) = std::cosh(r);
  L(0, 1) = L(1, 0) = std::sinh(r);
  return L;
}

}  // namespace

TEST(CoveringMap, IdentityAndSign) {
  const auto I = to_spin(CliffordElement::scalar(1.0));
  EXPECT_LE((covering_map(I).L - Mat4::Identity()).cwiseAbs().maxCoeff(), 1e-14);
  std::mt19937_64 rng(1);
  const auto s = to_spin(random_spin0(rng));
  const auto ms = SpinElement{-s.S};
  EXPECT_LE((covering_map(s).L - lambda_of(ms.S)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CoveringMap, BoostCurveIsDoubleRapidityBoost) {
  // c_1(t) = cosh t + sinh t g0g1 covers the x-boost of rapidity 2t (sign fixed by oracle).
  const auto L = covering_map(to_spin(boost_curve(1, 0.3))).L;
  const bool plus = (L - boost_x(0.6)).cwiseAbs().maxCoeff() < 1e-12;
  const bool minus = (L - boost_x(-0.6)).cwiseAbs().maxCoeff() < 1e-12;
  EXPECT_TRUE(plus || minus);
  EXPECT_NEAR(L(0, 0), std::cosh(0.6), 1e-12);
  EXPECT_LE(LorentzMatrix{L}.defect(), 1e-12);
}

TEST(CoveringMap, HomomorphismKernelInverse) {
  std::mt19937_64 rng(2);
  const Mat4 eta = Signature().eta;
  for (int t = 0; t < 1000; ++t) {
    const auto S = to_spin(random_spin0(rng));
    const auto T = to_spin(random_spin0(rng));
    const Mat4 LS = covering_map(S).L, LT = covering_map(T).L;
    const Mat4 LST = covering_map({S.S * T.S}).L;
    EXPECT_LE((LST - LS * LT).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + LST.cwiseAbs().maxCoeff()));
    const Mat4 Linv = covering_map({S.S.inverse()}).L;
    EXPECT_LE((Linv - eta * LS.transpose() * eta).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + LS.cwiseAbs().maxCoeff()));
  }
}

TEST(CoveringMap, KernelIsPlusMinusIdentity) {
  const Mat4c g5 = to_spin(CliffordElement::gamma5()).S;
  EXPECT_EQ(spin_membership(g5), Membership::SpinNotIdentityComponent);
  EXPECT_THROW(covering_map({g5}), lcqft::Error);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1e-3);
  for (int t = 0; t < 100; ++t) {
    CliffordElement e = CliffordElement::scalar(1.0);
    for (int k = 5; k < 11; ++k) e[k] = n(rng);
    const Mat4 L = lambda_of(to_spin(e).S);
    const bool identity = (L - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-12;
    EXPECT_FALSE(identity);
  }
}

TEST(DLambda, InverseOnGenerators) {
  for (int k = 0; k < 6; ++k) {
    BivectorElement b;
    b.lambda_coeffs[static_cast<std::size_t>(k)] = 1.0;
    const Mat4c s = lcqft::dirac::represent(b.to_clifford(), lcqft::dirac::weyl_representation());
    const Mat4 lam = d_lambda(s);
    const auto back = d_lambda_inverse(lam);
    for (int j = 0; j < 6; ++j)
      EXPECT_NEAR(back.lambda_coeffs[static_cast<std::size_t>(j)], j == k ? 1.0 : 0.0, 1e-12);
  }
  EXPECT_EQ(d_lambda_inverse(Mat4::Zero()).lambda_coeffs[0], 0.0);
  Mat4 bad = Mat4::Zero();
  bad(0, 0) = 1.0;
  EXPECT_THROW(d_lambda_inverse(bad), lcqft::Error);
}

TEST(DLambda, FiniteDifferenceAlongBoostCurve) {
  // Unit-rapidity boost generator lifts to coefficient 1/2 on g0g1 (up to orientation).
  const double h = 1e-5;
  const Mat4 d = (covering_map(to_spin(boost_curve(1, h))).L - covering_map(to_spin(boost_curve(1, -h))).L) / (2 * h);
  const auto b = d_lambda_inverse(d);
  EXPECT_NEAR(b.lambda_coeffs[0], 1.0, 1e-8);
  const auto unit = d_lambda_inverse(d / 2.0);
  EXPECT_NEAR(std::abs(unit.lambda_coeffs[0]), 0.5, 1e-8);
}

TEST(Lift, RoundTripAndHomomorphism) {
  const auto id = lift({Mat4::Identity()});
  EXPECT_LE((id.S - Mat4c::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  const auto c = to_spin(boost_curve(1, 0.7));
  const auto l = lift(covering_map(c));
  const double d = std::min((l.S - c.S).cwiseAbs().maxCoeff(), (l.S + c.S).cwiseAbs().maxCoeff());
  EXPECT_LE(d, 1e-8);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    const auto L1 = covering_map(to_spin(random_spin0(rng, 3)));
    const auto L2 = covering_map(to_spin(random_spin0(rng, 3)));
    const Mat4c prod = lift(L1).S * lift(L2).S;
    const Mat4c l12 = lift({L1.L * L2.L}).S;
    const double e = std::min((l12 - prod).cwiseAbs().maxCoeff(), (l12 + prod).cwiseAbs().maxCoeff());
    EXPECT_LE(e, 1e-8 * (1.0 + prod.cwiseAbs().maxCoeff()));
  }
}

TEST(Lift, BranchFailureAtPi) {
  Mat4 R = Mat4::Identity();
  R(1, 1) = R(2, 2) = -1.0;
  EXPECT_THROW(lift({R}), lcqft::Error);
}

TEST(Membership, Examples) {
  EXPECT_EQ(spin_membership(Mat4c::Identity()), Membership::SpinZero);
  const auto e = boost_curve(1, 0.4) * rotation_curve(1, 2, 1.1);
  EXPECT_EQ(spin_membership(to_spin(e).S), Membership::SpinZero);
  EXPECT_EQ(spin_membership(to_spin(CliffordElement::gamma(0)).S), Membership::PinOnly);
  EXPECT_EQ(spin_membership(2.0 * Mat4c::Identity()), Membership::NotPin);
}

TEST(Membership, AdjointPreservedOnSpin0) {
  std::mt19937_64 rng(13);
  const auto w = lcqft::dirac::weyl_representation();
  const Mat4c A = lcqft::dirac::find_adjoint_conjugation(w).A;
  for (int t = 0; t < 1000; ++t) {
    const Mat4c S = to_spin(random_spin0(rng)).S;
    EXPECT_LE((S.adjoint() * A * S - A).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + S.squaredNorm()));
  }
}
