#include <gtest/gtest.h>

#include <random>

#include "lcqft/dirac_algebra.hpp"
#include "lcqft/errors.hpp"

using namespace lcqft::dirac;

namespace {

CliffordElement random_element(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CliffordElement e;
  for (int i = 0; i < kBasisSize; ++i) e[i] = n(rng);
  return e;
}

// Independent oracle: multiply the Weyl matrices directly and read the result
// back through the trace inner product on the monomial basis.
CliffordElement product_via_matrices(const CliffordElement& a, const CliffordElement& b) {
  const GammaRep rep = weyl_representation();
  const Mat4c m = represent(a, rep) * represent(b, rep);
  CliffordElement out;
  for (int i = 0; i < kBasisSize; ++i) {
    const Mat4c basis = rep.monomial(i);
    out[i] = ((basis.inverse() * m).trace() / 4.0).real();
  }
  return out;
}

Mat4c random_invertible(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat4c M;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) M(i, j) = {n(rng), n(rng)};
  return M;
}

}  // namespace

TEST(CliffordProduct, FrozenExamples) {
  const auto g0 = CliffordElement::gamma(0);
  const auto g1 = CliffordElement::gamma(1);
  const auto g2 = CliffordElement::gamma(2);
  EXPECT_EQ((g0 * g0)[0], 1.0);
  EXPECT_EQ((g1 * g1)[0], -1.0);
  const auto g01 = g0 * g1;
  EXPECT_EQ(g01[basis_index(0b0011)], 1.0);
  EXPECT_EQ((g1 * g0)[basis_index(0b0011)], -1.0);
  const auto g5 = CliffordElement::gamma5();
  EXPECT_EQ((g5 * g5)[0], -1.0);
  // g0g1 * g1g2 = -g0g2
  EXPECT_EQ((g01 * (g1 * g2))[basis_index(0b0101)], 1.0 * -1.0);
  EXPECT_EQ(basis_label(15), "g5");
  EXPECT_EQ(basis_label(8), "g1g2");
}

TEST(CliffordProduct, TableMatchesMatrixOracle) {
  for (int i = 0; i < kBasisSize; ++i)
    for (int j = 0; j < kBasisSize; ++j) {
      const auto a = CliffordElement::basis(i);
      const auto b = CliffordElement::basis(j);
      const auto t = a * b;
      const auto o = product_via_matrices(a, b);
      for (int k = 0; k < kBasisSize; ++k) EXPECT_NEAR(t[k], o[k], 1e-14) << i << " " << j;
    }
}

TEST(CliffordProduct, AssociativeAndGraded) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = random_element(rng), b = random_element(rng), c = random_element(rng);
    const auto d = (a * b) * c - a * (b * c);
    EXPECT_LE(d.max_abs(), 1e-12 * (1.0 + a.max_abs() * b.max_abs() * c.max_abs()));
  }
  for (int i = 0; i < kBasisSize; ++i)
    for (int j = 0; j < kBasisSize; ++j) {
      const auto p = CliffordElement::basis(i) * CliffordElement::basis(j);
      const bool even = (basis_grade(i) + basis_grade(j)) % 2 == 0;
      EXPECT_EQ(even ? p.is_even() : p.is_odd(), true);
    }
}

TEST(CliffordProduct, CenterIsScalar) {
  for (int i = 0; i < kBasisSize; ++i) {
    bool central = true;
    for (int a = 0; a < 4; ++a) {
      const auto x = CliffordElement::basis(i);
      const auto g = CliffordElement::gamma(a);
      if ((x * g - g * x).max_abs() != 0.0) central = false;
    }
    EXPECT_EQ(central, i == 0) << basis_label(i);
  }
}

TEST(WeylRep, PrintedMatricesAndRelations) {
  const GammaRep rep = weyl_representation();
  Mat4c g0 = Mat4c::Zero();
  g0.block<2, 2>(0, 2).setIdentity();
  g0.block<2, 2>(2, 0).setIdentity();
  EXPECT_EQ(rep.gammas[0], g0);
  EXPECT_LE((rep.gammas[1] * rep.gammas[1] + Mat4c::Identity()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LE((rep.gammas[0] * rep.gammas[1] + rep.gammas[1] * rep.gammas[0]).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LE(rep.relation_defect(), 1e-13);
  EXPECT_LE(standard_representation().relation_defect(), 1e-13);
}

TEST(TraceDet, FrozenValues) {
  const GammaRep rep = weyl_representation();
  const auto g = [](int a) { return CliffordElement::gamma(a); };
  EXPECT_NEAR(std::abs(represent_trace_det(g(0) * g(0), rep).trace - 4.0), 0.0, 1e-14);
  const auto comm = g(1) * g(2) - g(2) * g(1);
  EXPECT_NEAR(std::abs(represent_trace_det(comm * g(3) * g(0), rep).trace), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(represent_trace_det(g(0) * 2.0, rep).det - 16.0), 0.0, 1e-12);
  // det u = ||u||^4 for a vector u with ||u||^2 = eta(u,u): u = 2 g0 + g1.
  const auto u = g(0) * 2.0 + g(1);
  EXPECT_NEAR(std::abs(represent_trace_det(u, rep).det - 9.0), 0.0, 1e-12);
  // Tr(g_a g_b) = 4 eta_ab
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const double expect = a == b ? 4.0 * Signature::diag(a) : 0.0;
      EXPECT_NEAR(std::abs(represent_trace_det(g(a) * g(b), rep).trace - expect), 0.0, 1e-13);
    }
}

TEST(TraceDet, RepresentationIndependent) {
  std::mt19937_64 rng(11);
  const GammaRep w = weyl_representation();
  const GammaRep other = w.conjugated(random_invertible(rng));
  for (int t = 0; t < 100; ++t) {
    const auto e = random_element(rng);
    const auto r1 = represent_trace_det(e, w);
    const auto r2 = represent_trace_det(e, other);
    EXPECT_LE(std::abs(r1.trace - r2.trace), 1e-10 * (1.0 + std::abs(r1.trace)));
    EXPECT_LE(std::abs(r1.det - r2.det), 1e-10 * (1.0 + std::abs(r1.det)));
  }
}

TEST(Intertwiner, IdentityAndConjugator) {
  const GammaRep w = weyl_representation();
  const auto id = find_intertwiner(w, w);
  EXPECT_LE((id.L - Mat4c::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const Mat4c M = random_invertible(rng);
    const auto r = find_intertwiner(w, w.conjugated(M));
    EXPECT_LT(r.residual, 1e-10);
    const Mat4c Mn = normalize_unit_det(M);
    EXPECT_LE((r.L - Mn).cwiseAbs().maxCoeff(), 1e-9 * Mn.cwiseAbs().maxCoeff());
  }
  EXPECT_LT(find_intertwiner(w, standard_representation()).residual, 1e-10);
}

TEST(Intertwiner, RejectsInvalidRep) {
  const GammaRep w = weyl_representation();
  GammaRep bad = w;
  bad.gammas[1] = w.gammas[0];
  EXPECT_THROW(find_intertwiner(w, bad), lcqft::Error);
}

TEST(AdjointConjugation, WeylMatchesPrintedChoice) {
  const GammaRep w = weyl_representation();
  const auto ac = find_adjoint_conjugation(w);
  EXPECT_LE((ac.A - w.gammas[0]).cwiseAbs().maxCoeff(), 1e-12);
  // C proportional to gamma2
  const Mat4c ratio_check = ac.C * w.gammas[2].inverse();
  EXPECT_LE((ratio_check - ratio_check(0, 0) * Mat4c::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(ac.defect(w), 1e-12);
}

TEST(AdjointConjugation, RelativeDefectIsScaleFree) {
  std::mt19937_64 rng(11);
  const GammaRep w = weyl_representation();
  const auto ac = find_adjoint_conjugation(w);
  EXPECT_LE(ac.relative_defect(w), 1e-14);
  for (int t = 0; t < 20; ++t) {
    const GammaRep r = w.conjugated(random_invertible(rng));
    const auto p = find_adjoint_conjugation(r);
    EXPECT_LE(p.relative_defect(r), 1e-12);
    EXPECT_LE(p.relative_defect(r), p.defect(r) + 1e-300);
  }
  // A wrong C is still caught.
  AdjointPair broken = ac;
  broken.C = w.gammas[1];
  EXPECT_GT(broken.relative_defect(w), 0.1);
}

TEST(AdjointConjugation, TransportAndPositivity) {
  std::mt19937_64 rng(5);
  const GammaRep w = weyl_representation();
  const auto ac1 = find_adjoint_conjugation(w);
  for (int t = 0; t < 20; ++t) {
    const Mat4c K = random_invertible(rng);
    const GammaRep r2 = w.conjugated(K.inverse());
    const auto ac2 = find_adjoint_conjugation(r2);
    EXPECT_LE(ac2.defect(r2), 1e-10);
    const Mat4c At = K.adjoint() * ac1.A * K;
    const Mat4c Ct = K.conjugate().inverse() * ac1.C * K;
    const std::complex<double> sa = (ac2.A.array() / At.array())(0, 0);
    EXPECT_LE((ac2.A - sa * At).cwiseAbs().maxCoeff(), 1e-9 * ac2.A.cwiseAbs().maxCoeff());
    EXPECT_GT(sa.real(), 0.0);
    Eigen::Index r, c;
    Ct.cwiseAbs().maxCoeff(&r, &c);
    const std::complex<double> sc = ac2.C(r, c) / Ct(r, c);
    EXPECT_LE((ac2.C - sc * Ct).cwiseAbs().maxCoeff(), 1e-9 * ac2.C.cwiseAbs().maxCoeff());
  }
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    Eigen::Vector4d n(0, u(rng), u(rng), u(rng));
    n(0) = n.tail<3>().norm() + 0.01 + std::abs(u(rng));
    Eigen::SelfAdjointEigenSolver<Mat4c> es(ac1.A * w.slash(n));
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  }
}
