#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lcqft/causal_lattice.hpp"
#include "lcqft/errors.hpp"

using namespace lcqft::lattice;

namespace {

LatticeSpacetime random_medium(std::mt19937_64& rng, int nt, int nx) {
  std::uniform_real_distribution<double> b(0.3, 2.0), hh(0.5, 2.0);
  auto l = LatticeSpacetime::flat(nt, nx);
  for (auto& v : l.beta) v = b(rng);
  for (auto& v : l.h) v = hh(rng);
  return l;
}

Region point(const LatticeSpacetime& l, int i, int j) {
  Region r = Region::like(l);
  r.set(i, j);
  return r;
}

Region diamond(const LatticeSpacetime& l, int pi, int pj, int qi, int qj) {
  return causal_future(l, point(l, pi, pj), Mode::Outer) & causal_past(l, point(l, qi, qj), Mode::Outer);
}

}  // namespace

TEST(CausalFuture, MinkowskiCone) {
  auto l = LatticeSpacetime::flat(21, 41);
  auto O = point(l, 5, 20);
  auto out = causal_future(l, O, Mode::Outer);
  auto in = causal_future(l, O, Mode::Inner);
  for (int i = 0; i < l.nt; ++i)
    for (int j = 0; j < l.nx; ++j) {
      int di = i - 5, dj = std::abs(j - 20);
      EXPECT_EQ(out.contains(i, j), di >= 0 && dj <= di) << i << "," << j;
      EXPECT_EQ(in.contains(i, j), di >= 0 && (dj < di || dj == 0)) << i << "," << j;
    }
}

TEST(CausalFuture, DualityAndMonotonicity) {
  std::mt19937_64 rng(21);
  auto l = random_medium(rng, 24, 32);
  std::uniform_int_distribution<int> ri(0, l.nt - 1), rj(0, l.nx - 1);
  for (Mode m : {Mode::Inner, Mode::Outer}) {
    for (int k = 0; k < 40; ++k) {
      int pi = ri(rng), pj = rj(rng);
      auto fut = causal_future(l, point(l, pi, pj), m);
      for (int i = 0; i < l.nt; i += 3)
        for (int j = 0; j < l.nx; j += 2) {
          bool back = causal_past(l, point(l, i, j), m).contains(pi, pj);
          EXPECT_EQ(fut.contains(i, j), back);
        }
    }
  }
  for (int k = 0; k < 50; ++k) {
    Region O = Region::like(l), O2;
    for (int n = 0; n < 3; ++n) O.set(ri(rng), rj(rng));
    O2 = O;
    for (int n = 0; n < 3; ++n) O2.set(ri(rng), rj(rng));
    EXPECT_TRUE(causal_future(l, O, Mode::Outer).subset_of(causal_future(l, O2, Mode::Outer)));
    EXPECT_TRUE(causal_past(l, O, Mode::Inner).subset_of(causal_past(l, O2, Mode::Inner)));
    EXPECT_TRUE(causal_future(l, O, Mode::Inner).subset_of(causal_future(l, O, Mode::Outer)));
    EXPECT_TRUE(causal_past(l, O, Mode::Inner).subset_of(causal_past(l, O, Mode::Outer)));
    EXPECT_TRUE(causal_complement(l, O, Mode::Inner).subset_of(causal_complement(l, O, Mode::Outer)));
  }
}

TEST(CausalFuture, ApertureScalesWithRootBeta) {
  auto width = [](double beta) {
    auto l = LatticeSpacetime::flat(201, 801);
    for (auto& b : l.beta) b = beta;
    auto J = causal_future(l, point(l, 0, 400), Mode::Outer);
    int w = 0;
    for (int j = 0; j < l.nx; ++j) w += J.contains(200, j);
    return (w - 1) / 2.0;
  };
  double prev = width(1.0);
  EXPECT_EQ(prev, 200.0);
  for (double beta : {0.5, 0.25, 0.125}) {
    double w = width(beta);
    EXPECT_NEAR(prev / w, std::sqrt(2.0), 0.02) << beta;
    prev = w;
  }
}

TEST(Convexity, DiamondAndComplement) {
  auto l = LatticeSpacetime::flat(40, 61);
  auto D = diamond(l, 5, 30, 25, 30);
  EXPECT_EQ(is_causally_convex(l, D), Verdict::True);
  EXPECT_EQ(is_causally_convex(l, causal_complement(l, D, Mode::Inner)), Verdict::True);
  // the outer complement is built from slower cones, so faster outer cones cannot certify it
  EXPECT_NE(is_causally_convex(l, causal_complement(l, D, Mode::Outer)), Verdict::False);
}

TEST(Convexity, SpacelikeUnionWithStripIsNotConvex) {
  auto l = LatticeSpacetime::flat(30, 61);
  auto A = diamond(l, 8, 20, 12, 20);
  auto B = diamond(l, 11, 44, 15, 44);
  // A and B are spacelike separated
  EXPECT_TRUE((causal_future(l, A, Mode::Outer) & B).empty());
  EXPECT_TRUE((causal_past(l, A, Mode::Outer) & B).empty());
  // the strip ends one row below B's bottom tip, leaving the cell between them out
  auto strip = Region::box(l, 9, 9, 20, 44);
  auto O = A | B | strip;
  EXPECT_FALSE(O.contains(10, 44));
  EXPECT_EQ(is_causally_convex(l, O), Verdict::False);
}

TEST(Convexity, IntersectionsOfRandomDiamonds) {
  std::mt19937_64 rng(8);
  auto l = random_medium(rng, 30, 40);
  std::uniform_int_distribution<int> lo(0, 12), hi(17, 29), col(5, 34), d(-4, 4);
  int certified = 0;
  for (int k = 0; k < 200; ++k) {
    auto A = diamond(l, lo(rng), col(rng), hi(rng), col(rng));
    auto B = diamond(l, lo(rng), col(rng), hi(rng), col(rng));
    auto va = is_causally_convex(l, A), vb = is_causally_convex(l, B);
    EXPECT_EQ(va, Verdict::True);
    EXPECT_EQ(vb, Verdict::True);
    if (va == Verdict::True && vb == Verdict::True) {
      EXPECT_EQ(is_causally_convex(l, A & B), Verdict::True);
      ++certified;
    }
  }
  EXPECT_EQ(certified, 200);
}

TEST(DomainOfDependence, FullSliceAndInterval) {
  auto l = LatticeSpacetime::flat(21, 41);
  auto slice = Region::box(l, 10, 10, 0, 40);
  for (Mode m : {Mode::Inner, Mode::Outer}) EXPECT_EQ(domain_of_dependence(l, slice, m).count(), l.nt * l.nx);

  auto R = Region::box(l, 10, 10, 15, 25);
  for (Mode m : {Mode::Inner, Mode::Outer}) {
    auto D = domain_of_dependence(l, R, m);
    for (int i = 0; i < l.nt; ++i)
      for (int j = 0; j < l.nx; ++j) EXPECT_EQ(D.contains(i, j), std::abs(j - 20) + std::abs(i - 10) <= 5) << i << "," << j;
    EXPECT_EQ(is_causally_convex(l, D), Verdict::True);
  }
}

TEST(DomainOfDependence, RandomMediumInnerInsideOuter) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 10; ++k) {
    auto l = random_medium(rng, 24, 40);
    auto R = Region::box(l, 12, 12, 10 + k, 25 + k);
    auto in = domain_of_dependence(l, R, Mode::Inner), out = domain_of_dependence(l, R, Mode::Outer);
    EXPECT_TRUE(R.subset_of(in));
    EXPECT_TRUE(in.subset_of(out));
    EXPECT_NE(is_causally_convex(l, in), Verdict::False);
  }
}

TEST(DomainOfDependence, RejectsChronalSets) {
  auto l = LatticeSpacetime::flat(20, 20);
  Region R = point(l, 5, 10) | point(l, 8, 10);
  try {
    domain_of_dependence(l, R, Mode::Inner);
    FAIL();
  } catch (const lcqft::Error& e) {
    EXPECT_EQ(e.code(), lcqft::ErrorCode::NotAchronal);
  }
  EXPECT_TRUE(is_achronal(l, point(l, 5, 2) | point(l, 8, 10)));
}

TEST(Deformation, StandardScenario) {
  auto wide = standard_scenario(32);
  auto r = deform_and_certify(wide.spec, wide.K1, wide.K2);
  EXPECT_TRUE(r.certified);
  EXPECT_EQ(r.halvings, 0);

  auto narrow = standard_scenario(16);
  auto n = deform_and_certify(narrow.spec, narrow.K1, narrow.K2);
  EXPECT_TRUE(n.certified);
  EXPECT_GE(n.halvings, 1);
  RecordProperty("narrow_halvings", n.halvings);
  EXPECT_LE(n.halvings, 12);
  for (int k = n.halvings; k <= 20; ++k)
    EXPECT_TRUE(deformation_holds(narrow.spec, std::ldexp(1.0, -k), narrow.K1, narrow.K2)) << k;

  auto none = standard_scenario(-1);
  auto e = deform_and_certify(none.spec, none.K1, none.K2);
  EXPECT_FALSE(e.certified);
  EXPECT_EQ(e.halvings, 20);
  EXPECT_DOUBLE_EQ(e.beta_scale, std::ldexp(1.0, -20));
}

TEST(Deformation, MetricAndErrors) {
  auto s = standard_scenario(16);
  auto g = deformed_metric(s.spec);
  EXPECT_EQ(g.h[g.index(52, 64)], s.spec.g2.h[g.index(52, 64)]);
  EXPECT_EQ(g.beta[g.index(10, 3)], 1.0);
  s.spec.beta_scale = 0.25;
  auto g2 = deformed_metric(s.spec);
  EXPECT_DOUBLE_EQ(g2.beta[g2.index(30, 3)], 0.25);
  EXPECT_DOUBLE_EQ(g2.beta[g2.index(41, 3)], 1.0);
  auto bad = Region::box(s.spec.g1, 30, 30, 60, 68);
  EXPECT_THROW(deform_and_certify(s.spec, bad, s.K2), lcqft::Error);
}
