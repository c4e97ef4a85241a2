#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "lcqft/errors.hpp"
#include "lcqft/frame_geometry.hpp"

using namespace lcqft::geometry;

namespace {

const cplx I(0.0, 1.0);

Grid centred_grid(int n, double h) {
  Grid g;
  g.n = {n, n, n, n};
  g.h = Vec4::Constant(h);
  g.origin = Vec4::Constant(-h * (n - 1) / 2.0);
  return g;
}

Mat4 random_symmetric(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Mat4 S;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) S(i, j) = S(j, i) = nd(rng);
  return S;
}

MetricFamily bump_family(const MetricField& g0, const Mat4& S, const Vec4& c, double w) {
  return [=](double e) {
    MetricField m;
    m.eval = [=](const Vec4& x) { return Mat4(g0(x) + e * smooth_bump((x - c).norm() / w) * S); };
    return m;
  };
}

Mat4c kslash(const Vec4& kcov) {
  Mat4c ks = Mat4c::Zero();
  for (int a = 0; a < 4; ++a) ks += field_rep().upper(a) * kcov(a);
  return ks;
}

// Null vector of M (smallest singular direction).
Vec4c null_vector(const Mat4c& M) {
  Eigen::JacobiSVD<Mat4c> svd(M, Eigen::ComputeFullV);
  return svd.matrixV().col(3);
}

// Plane wave amp exp(-i k.x) with contravariant k; kcov are the covariant components seen by the derivative.
struct Wave {
  Vec4 k;
  Vec4 kcov;
  Vec4c amp;
  Vec4c operator()(const Vec4& x) const {
    const double kx = k(0) * x(0) - k.tail<3>().dot(x.tail<3>());
    return amp * std::exp(cplx(0.0, -kx));
  }
};

// Continuum on-shell wave: kslash u = m u (spinor) or v kslash = -m v (cospinor).
Wave continuum_wave(const Vec4& kspatial, double m, SpinorKind kind) {
  Wave w;
  w.k = kspatial;
  w.k(0) = std::sqrt(m * m + kspatial.tail<3>().squaredNorm());
  w.kcov = w.k;
  w.kcov.tail<3>() *= -1.0;
  const Mat4c ks = kslash(w.kcov);
  w.amp = null_vector(kind == SpinorKind::Spinor ? Mat4c(ks - m * Mat4c::Identity())
                                                 : Mat4c(ks.transpose() + m * Mat4c::Identity()));
  return w;
}

// Exact solution of the discretized equation: the stencil wavenumbers lie on the mass shell.
Wave discrete_wave(const Vec4& kspatial, double m, double h, SpinorKind kind) {
  Vec4 keff;
  for (int i = 1; i < 4; ++i) keff(i) = stencil_wavenumber(kspatial(i), h);
  keff(0) = std::sqrt(m * m + keff.tail<3>().squaredNorm());
  double k0 = keff(0);
  for (int it = 0; it < 60; ++it) {
    const double f = stencil_wavenumber(k0, h) - keff(0);
    const double df = (stencil_wavenumber(k0 + 1e-7, h) - stencil_wavenumber(k0 - 1e-7, h)) / 2e-7;
    k0 -= f / df;
  }
  Wave w;
  w.k = kspatial;
  w.k(0) = k0;
  w.kcov = keff;
  w.kcov.tail<3>() *= -1.0;
  const Mat4c ks = kslash(w.kcov);
  w.amp = null_vector(kind == SpinorKind::Spinor ? Mat4c(ks - m * Mat4c::Identity())
                                                 : Mat4c(ks.transpose() + m * Mat4c::Identity()));
  return w;
}

SpinorGridField gaussian_field(const Grid& grid, SpinorKind kind) {
  Vec4c u0;
  u0 << cplx(1.0, 0.2), cplx(-0.3, 0.5), cplx(0.4, -0.1), cplx(0.2, 0.3);
  return SpinorGridField::sample(grid, kind, [&](const Vec4& x) {
    return Vec4c(u0 * std::exp(cplx(-x.squaredNorm(), 0.7 * x(0) - 1.1 * x(2))));
  });
}

MetricField perturbed_frw() {
  const MetricField frw = MetricField::frw(1.0, 0.1);
  MetricField g;
  g.eval = [frw](const Vec4& x) {
    Mat4 P;
    P << 0.0, 0.1, 0.0, 0.05, 0.1, 0.2, 0.0, 0.0, 0.0, 0.0, -0.1, 0.05, 0.05, 0.0, 0.05, 0.0;
    return Mat4(frw(x) + std::sin(x(0) + 2.0 * x(1) - x(3)) * P * 0.5);
  };
  return g;
}

}  // namespace

TEST(Christoffel, MinkowskiVanishes) {
  const auto chr = christoffel(MetricField::minkowski(), Vec4(0.3, -0.1, 0.2, 0.5));
  for (const auto& c : chr) EXPECT_EQ(c.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Christoffel, FrwOracle) {
  // Oracle for diag(1, -a^2, -a^2, -a^2): Gamma^0_ii = a adot, Gamma^i_0i = adot / a.
  const double a0 = 1.0, adot = 0.1;
  MetricField fd = MetricField::frw(a0, adot);
  fd.deriv = nullptr;
  for (double t : {0.0, 0.7}) {
    const Vec4 x(t, 0.2, -0.4, 0.1);
    const double a = a0 + adot * t;
    for (const MetricField& g : {MetricField::frw(a0, adot), fd}) {
      const auto chr = christoffel(g, x);
      for (int i = 1; i < 4; ++i) {
        EXPECT_NEAR(chr[0](i, i), a * adot, 1e-9);
        EXPECT_NEAR(chr[static_cast<std::size_t>(i)](0, i), adot / a, 1e-9);
        EXPECT_NEAR(chr[static_cast<std::size_t>(i)](i, 0), adot / a, 1e-9);
      }
    }
  }
  EXPECT_NEAR(christoffel(MetricField::frw(a0, adot), Vec4::Zero())[0](1, 1), 0.1, 1e-15);
}

TEST(Christoffel, SymmetricOnBumps) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int k = 0; k < 20; ++k) {
    const MetricField g = MetricField::bump(Vec4(u(rng), u(rng), u(rng), u(rng)), 1.2, 0.2);
    const auto chr = christoffel(g, Vec4(u(rng), u(rng), u(rng), u(rng)));
    for (const auto& c : chr) EXPECT_EQ((c - c.transpose()).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Christoffel, SingularMetricRejected) {
  MetricField g;
  g.eval = [](const Vec4&) { return Mat4(Vec4(1.0, -1.0, 0.0, -1.0).asDiagonal()); };
  EXPECT_THROW(christoffel(g, Vec4::Zero()), lcqft::Error);
  MetricField riemannian;
  riemannian.eval = [](const Vec4&) { return Mat4(Mat4::Identity()); };
  EXPECT_THROW(vierbein(riemannian, Vec4::Zero()), lcqft::Error);
}

TEST(Vierbein, ClosedForms) {
  const Vierbein e0 = vierbein(MetricField::minkowski(), Vec4(1.0, 2.0, 3.0, 4.0));
  EXPECT_EQ((e0.e - Mat4::Identity()).cwiseAbs().maxCoeff(), 0.0);
  const double a = 1.0 + 0.1 * 0.5;
  const Vierbein ef = vierbein(MetricField::frw(1.0, 0.1), Vec4(0.5, 0.0, 0.0, 0.0));
  EXPECT_LT((ef.e - Mat4(Vec4(1.0, 1.0 / a, 1.0 / a, 1.0 / a).asDiagonal())).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Vierbein, OrthonormalOnRandomMetrics) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int k = 0; k < 200; ++k) {
    Mat4 P = Mat4::Zero();
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) P(i, j) = P(j, i) = u(rng);
    MetricField g;
    g.eval = [P](const Vec4&) { return Mat4(Mat4(Vec4(1.0, -1.0, -1.0, -1.0).asDiagonal()) + P); };
    const Vierbein e = vierbein(g, Vec4::Zero());
    EXPECT_LT(e.defect(g(Vec4::Zero())), 1e-12);
    EXPECT_GT(e.e(0, 0), 0.0);
  }
}

TEST(SpinConnection, MinkowskiAndFrw) {
  const ConnectionData m = spin_connection(MetricField::minkowski(), Vec4(0.1, 0.2, 0.3, 0.4));
  for (const auto& s : m.spin_sigma) EXPECT_EQ(s.cwiseAbs().maxCoeff(), 0.0);
  for (double t : {0.0, 0.5}) {
    const ConnectionData f = spin_connection(MetricField::frw(1.0, 0.1), Vec4(t, 0.1, -0.2, 0.3));
    EXPECT_LT(f.covgamma_defect(), 1e-6);
    EXPECT_LT(f.antisymmetry_defect(), 1e-8);
    EXPECT_GT(f.spin_sigma[1].cwiseAbs().maxCoeff(), 0.01);
  }
}

TEST(SpinConnection, RandomBumps) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  for (int k = 0; k < 30; ++k) {
    const MetricField g = MetricField::bump(Vec4(u(rng), u(rng), u(rng), u(rng)), 1.0, 0.25);
    const Vec4 x(u(rng), u(rng), u(rng), u(rng));
    const ConnectionData c = spin_connection(g, x);
    EXPECT_LT(c.covgamma_defect(), 1e-6);
    EXPECT_LT(c.antisymmetry_defect(), 1e-8);
    EXPECT_LT(c.frame.defect(c.g), 1e-12);
  }
}

TEST(MetricPresets, Parse) {
  EXPECT_EQ(MetricField::from_preset("minkowski").name, "minkowski");
  const MetricField f = MetricField::from_preset("frw(1.0, 0.1)");
  EXPECT_NEAR(f(Vec4(1.0, 0.0, 0.0, 0.0))(1, 1), -1.21, 1e-14);
  const MetricField b = MetricField::from_preset("bump(0,0,0,0,0.5,0.1)");
  EXPECT_NEAR(b(Vec4::Zero())(0, 0), 1.06, 1e-14);
  EXPECT_THROW(MetricField::from_preset("frw(1)"), lcqft::Error);
  EXPECT_THROW(MetricField::from_preset("schwarzschild"), lcqft::Error);
}

TEST(Dirac, ConstantSpinorMassless) {
  const Grid grid = centred_grid(7, 0.1);
  const auto u = SpinorGridField::sample(grid, SpinorKind::Spinor, [](const Vec4&) {
    return Vec4c(cplx(1.0, 0.5), 0.3, cplx(0.0, -1.0), 2.0);
  });
  EXPECT_LT(dirac_apply(u, MetricField::minkowski(), 0.0).max_abs(), 1e-12);
}

TEST(Dirac, PlaneWaveFourthOrder) {
  for (auto kind : {SpinorKind::Spinor, SpinorKind::Cospinor}) {
    const Wave w = continuum_wave(Vec4(0.0, 1.3, -0.7, 0.9), 1.0, kind);
    double res[2];
    int i = 0;
    for (double h : {0.1, 0.05}) {
      const auto u = SpinorGridField::sample(centred_grid(7, h), kind, w);
      res[i++] = dirac_apply(u, MetricField::minkowski(), 1.0).max_abs();
    }
    EXPECT_LT(res[0], 1e-3);
    EXPECT_GT(res[0] / res[1], 12.0);
    const Wave d = discrete_wave(Vec4(0.0, 1.3, -0.7, 0.9), 1.0, 0.1, kind);
    EXPECT_LT(dirac_apply(SpinorGridField::sample(centred_grid(7, 0.1), kind, d), MetricField::minkowski(), 1.0).max_abs(),
              1e-13);
  }
}

TEST(Dirac, AdjointAndChargeConjugationIntertwine) {
  const Grid grid = centred_grid(7, 0.1);
  const GridGeometry geo = grid_geometry(grid, perturbed_frw());
  for (auto kind : {SpinorKind::Spinor, SpinorKind::Cospinor}) {
    const auto u = gaussian_field(grid, kind);
    const auto Du = dirac_slash(u, geo);
    EXPECT_LT(dirac_adjoint(Du).max_abs_diff(dirac_slash(dirac_adjoint(u), geo)), 1e-10);
    EXPECT_LT((charge_conjugate(Du) + dirac_slash(charge_conjugate(u), geo)).max_abs(), 1e-10);
    EXPECT_GT(Du.max_abs(), 0.1);
  }
}

TEST(Dirac, GridTooSmall) {
  const auto u = gaussian_field(centred_grid(4, 0.1), SpinorKind::Spinor);
  EXPECT_THROW(dirac_apply(u, MetricField::minkowski(), 1.0), lcqft::Error);
}

TEST(Variation, ConstantFamilyVanishes) {
  const Grid grid = centred_grid(9, 0.05);
  const MetricField frw = MetricField::frw(1.0, 0.1);
  const MetricFamily fam = [frw](double) { return frw; };
  for (auto kind : {SpinorKind::Spinor, SpinorKind::Cospinor}) {
    const auto t = dirac_variation(fam, gaussian_field(grid, kind));
    EXPECT_LT(t.total.max_abs(), 1e-12);
  }
}

TEST(Variation, MatchesEpsilonDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  const Grid grid = centred_grid(11, 0.025);
  for (int trial = 0; trial < 3; ++trial) {
    const MetricFamily fam =
        bump_family(MetricField::frw(1.0, 0.1), random_symmetric(rng), Vec4(u(rng), u(rng), u(rng), u(rng)), 0.8);
    for (auto kind : {SpinorKind::Cospinor, SpinorKind::Spinor}) {
      const auto v = gaussian_field(grid, kind);
      const auto t = dirac_variation(fam, v);
      const auto fd = dirac_variation_fd(fam, v, 1e-4);
      EXPECT_LT(fd.max_abs_diff(t.total), 1e-4 * t.total.max_abs()) << trial;
      EXPECT_GT(t.dc_total.max_abs(), 1e-2);
    }
  }
}

TEST(Variation, RotatedFrameFamilyMatchesDifferences) {
  std::mt19937_64 rng(13);
  const Grid grid = centred_grid(11, 0.025);
  const MetricFamily fam = bump_family(MetricField::frw(1.0, 0.1), random_symmetric(rng), Vec4::Zero(), 0.8);
  Mat4 K = Mat4::Zero();
  K(0, 1) = K(1, 0) = 1.0;
  K(2, 3) = 0.7;
  K(3, 2) = -0.7;
  const GaugeFamily gauge = [K](double e) {
    return FrameGauge([=](const Vec4& x) { return Mat4((e * smooth_bump(x.norm() / 0.8) * K).exp()); });
  };
  for (auto kind : {SpinorKind::Cospinor, SpinorKind::Spinor}) {
    const auto v = gaussian_field(grid, kind);
    const auto plain = dirac_variation(fam, v);
    const auto rotated = dirac_variation(fam, v, {1.0, 1e-4, gauge});
    const auto fd = dirac_variation_fd(fam, v, 1e-4, gauge);
    EXPECT_LT(fd.max_abs_diff(rotated.total), 1e-4 * rotated.total.max_abs());
    // Pointwise the two families differ; only the delta-e terms carry the difference.
    EXPECT_GT(plain.total.max_abs_diff(rotated.total), 1e-2);
    EXPECT_LT(plain.metric.max_abs_diff(rotated.metric), 1e-12);
  }
}

TEST(Variation, OnShellWeakReduction) {
  // Exact discrete solutions make summation by parts exact: the D-terms pair to zero with phi and
  // the pairing reduces to the two delta g^{ab} terms, for either frame family.
  const double h = 0.1, m = 1.0;
  const Grid grid = centred_grid(15, h);
  std::mt19937_64 rng(17);
  const MetricFamily fam = bump_family(MetricField::minkowski(), random_symmetric(rng), Vec4::Zero(), 0.3);
  Mat4 K = Mat4::Zero();
  K(0, 2) = K(2, 0) = 0.8;
  K(1, 3) = 0.5;
  K(3, 1) = -0.5;
  const GaugeFamily gauge = [K](double e) {
    return FrameGauge([=](const Vec4& x) { return Mat4((e * smooth_bump(x.norm() / 0.3) * K).exp()); });
  };
  const auto v = SpinorGridField::sample(grid, SpinorKind::Cospinor,
                                         discrete_wave(Vec4(0.0, 0.8, -0.5, 0.3), m, h, SpinorKind::Cospinor));
  const auto phi = SpinorGridField::sample(grid, SpinorKind::Spinor,
                                           discrete_wave(Vec4(0.0, -0.4, 0.9, 0.2), m, h, SpinorKind::Spinor));
  ASSERT_LT(dirac_apply(v, MetricField::minkowski(), m).max_abs(), 1e-12);
  ASSERT_LT(dirac_apply(phi, MetricField::minkowski(), m).max_abs(), 1e-12);
  const auto plain = dirac_variation(fam, v, {m, 1e-4, {}});
  const auto rotated = dirac_variation(fam, v, {m, 1e-4, gauge});
  const cplx ref = grid_pairing(plain.metric, phi);
  ASSERT_GT(std::abs(ref), 1.0);
  EXPECT_LT(std::abs(grid_pairing(plain.total, phi) - ref), 1e-10 * std::abs(ref));
  EXPECT_LT(std::abs(grid_pairing(rotated.total, phi) - ref), 1e-10 * std::abs(ref));
  EXPECT_GT(plain.total.max_abs_diff(plain.metric), 1e-2);
}

TEST(Semt, PlaneWave) {
  const double h = 0.1, m = 1.0;
  const Grid grid = centred_grid(7, h);
  const Wave w = discrete_wave(Vec4(0.0, 0.6, 0.2, -0.9), m, h, SpinorKind::Spinor);
  const auto u = SpinorGridField::sample(grid, SpinorKind::Spinor, w);
  const GridGeometry geo = grid_geometry(grid, MetricField::minkowski());
  const auto T = semt_classical(u, geo);
  const Mat4c& A = field_adjoint().A;
  Mat4c expect;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const cplx ja = (w.amp.adjoint() * A * field_rep().gammas[static_cast<std::size_t>(a)] * w.amp)(0, 0);
      const cplx jb = (w.amp.adjoint() * A * field_rep().gammas[static_cast<std::size_t>(b)] * w.amp)(0, 0);
      expect(a, b) = 0.5 * (w.kcov(a) * jb + w.kcov(b) * ja);
    }
  for (int i = 0; i < grid.size(); ++i) {
    if (!grid.interior(i, T.margin)) continue;
    const Mat4c& t = T.values[static_cast<std::size_t>(i)];
    EXPECT_LT((t - expect).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ((t - t.transpose()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LT(t.imag().cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Semt, ConservationConverges) {
  const double m = 1.0;
  const Wave w1 = continuum_wave(Vec4(0.0, 0.9, -0.4, 0.3), m, SpinorKind::Spinor);
  const Wave w2 = continuum_wave(Vec4(0.0, -0.5, 0.7, 1.1), m, SpinorKind::Spinor);
  double res[2];
  int i = 0;
  for (double h : {0.1, 0.05}) {
    const Grid grid = centred_grid(9, h);
    const auto u = SpinorGridField::sample(grid, SpinorKind::Spinor, [&](const Vec4& x) { return Vec4c(w1(x) + 0.7 * w2(x)); });
    const GridGeometry geo = grid_geometry(grid, MetricField::minkowski());
    int margin = 0;
    const auto div = semt_divergence(semt_classical(u, geo), geo, &margin);
    double mx = 0.0;
    for (int p = 0; p < grid.size(); ++p)
      if (grid.interior(p, margin)) mx = std::max(mx, div[static_cast<std::size_t>(p)].cwiseAbs().maxCoeff());
    res[i++] = mx;
  }
  EXPECT_LT(res[0], 1e-3);
  EXPECT_GT(res[0] / res[1], 4.0);
}
