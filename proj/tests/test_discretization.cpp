#include <gtest/gtest.h>

#include "incdual/convex_kernel.hpp"
#include "test_util.hpp"

using namespace incdual;
using incdual::testing::random_vec;
using incdual::testing::scalar;
using incdual::testing::seq;
using incdual::testing::vec;

namespace {

GridDualVars barred(std::vector<Vector> x, std::vector<Vector> mu) {
  GridDualVars g;
  g.K = static_cast<int>(mu.size());
  g.barred = true;
  g.xstar = std::move(x);
  g.mustar = std::move(mu);
  return g;
}

GridDualVars random_barred(std::mt19937_64& rng, int K, double scale = 2.0) {
  std::vector<Vector> x, mu;
  for (int k = 0; k <= K; ++k) x.push_back(random_vec(rng, 1, scale));
  for (int k = 0; k < K; ++k) mu.push_back(random_vec(rng, 1, scale));
  return barred(x, mu);
}

TabulatedMap random_table(std::mt19937_64& rng, int count) {
  std::uniform_int_distribution<int> d(-3, 3);
  std::vector<GraphTriple> t;
  for (int i = 0; i < count; ++i) t.push_back({vec({d(rng) / 2.0}), vec({d(rng) / 2.0}), vec({d(rng) / 2.0})});
  return TabulatedMap(t);
}

}  // namespace

TEST(MeshSpecTest, UnitFractionsOnly) {
  EXPECT_EQ(MeshSpec::from_delta(0.125).K(), 8);
  EXPECT_EQ(MeshSpec::from_delta(0.5).K(), 2);
  EXPECT_EQ(MeshSpec::from_delta(1.0 / 3.0).K(), 3);
  EXPECT_THROW(MeshSpec::from_delta(0.3), Error);
  EXPECT_THROW(MeshSpec::from_delta(0.4), Error);
  EXPECT_THROW(MeshSpec::from_delta(1.0), Error);
  EXPECT_THROW(MeshSpec(1), Error);
  const auto r = rational_approx(0.375);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->first, 3);
  EXPECT_EQ(r->second, 8);
}

TEST(GMapTest, Examples) {
  const auto g1 = std::get<SemilinearMap>(
      g_map(SemilinearMap(scalar(0), scalar(0), scalar(1), ConvexSet::box(vec({-1}), vec({1}))), 0.5));
  EXPECT_DOUBLE_EQ(g1.A0(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(g1.A1(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(g1.B(0, 0), 0.25);
  const auto g2 = std::get<SemilinearMap>(
      g_map(SemilinearMap(scalar(1), scalar(1), scalar(1), ConvexSet::box(vec({-1}), vec({1}))), 1.0));
  EXPECT_DOUBLE_EQ(g2.A0(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(g2.A1(0, 0), 3.0);
  EXPECT_DOUBLE_EQ(g2.B(0, 0), 1.0);
  const auto g3 = std::get<TabulatedMap>(g_map(TabulatedMap({{vec({1}), vec({1}), vec({1})}}), 1.0));
  ASSERT_EQ(g3.triples.size(), 1u);
  EXPECT_EQ(g3.triples[0].x(0), 1.0);
  EXPECT_EQ(g3.triples[0].y(0), 2.0);
  EXPECT_EQ(g3.triples[0].z(0), 4.0);
}

TEST(GMapTest, SemilinearMatchesDefiningFormula) {
  std::mt19937_64 rng(21);
  const SemilinearMap F(incdual::testing::random_mat(rng, 2, 2), incdual::testing::random_mat(rng, 2, 2),
                        incdual::testing::random_mat(rng, 2, 1), ConvexSet::box(vec({-1}), vec({1})));
  const double delta = 0.25;
  const auto G = std::get<SemilinearMap>(g_map(F, delta));
  for (int trial = 0; trial < 50; ++trial) {
    const Vector x = random_vec(rng, 2), y = random_vec(rng, 2), u = random_vec(rng, 1);
    const Vector direct = 2 * y - x + delta * delta * (F.A0 * x + F.A1 * (y - x) / delta + F.B * u);
    EXPECT_LE((G.A0 * x + G.A1 * y + G.B * u - direct).norm(), 1e-12);
  }
}

TEST(GMapTest, PreservesGraphConvexity) {
  std::mt19937_64 rng(22);
  const SemilinearMap F(scalar(0.5), scalar(1), scalar(2), ConvexSet::box(vec({-1}), vec({1})));
  const auto G = std::get<SemilinearMap>(g_map(F, 0.5));
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x1 = random_vec(rng, 1), y1 = random_vec(rng, 1), x2 = random_vec(rng, 1), y2 = random_vec(rng, 1);
    const Vector z1 = G.A0 * x1 + G.A1 * y1 + G.B * vec({u(rng)});
    const Vector z2 = G.A0 * x2 + G.A1 * y2 + G.B * vec({u(rng)});
    const Vector xm = 0.5 * (x1 + x2), ym = 0.5 * (y1 + y2), zm = 0.5 * (z1 + z2);
    EXPECT_TRUE(G.U.contains((zm - G.A0 * xm - G.A1 * ym) / G.B(0, 0)));
  }
}

TEST(MGFormulaTest, Examples) {
  const InclusionMap F = TabulatedMap({{vec({0}), vec({0}), vec({0})},
                                       {vec({0}), vec({0}), vec({1})},
                                       {vec({1}), vec({1}), vec({1})}});
  EXPECT_DOUBLE_EQ(m_g_via_formula(F, 1.0, vec({1}), vec({1}), vec({1})).value(), -1.0);
  EXPECT_DOUBLE_EQ(m_function(g_map(F, 1.0), vec({1}), vec({1}), vec({1})).value(), -1.0);
  EXPECT_DOUBLE_EQ(m_g_via_formula(F, 0.5, vec({0}), vec({0}), vec({0})).value(), 0.0);
}

TEST(MGFormulaTest, IdentityOnRandomInputs) {
  std::mt19937_64 rng(23);
  for (double delta : {1.0, 0.5, 0.25}) {
    for (int trial = 0; trial < 50; ++trial) {
      const InclusionMap T = random_table(rng, 6);
      const Vector a = random_vec(rng, 1, 2), b = random_vec(rng, 1, 2), c = random_vec(rng, 1, 2);
      EXPECT_NEAR(m_function(g_map(T, delta), a, b, c).value(), m_g_via_formula(T, delta, a, b, c).value(), 1e-9);

      // Semilinear: dual points on the subspace where M_G is finite, plus a random one.
      const SemilinearMap F(scalar(random_vec(rng, 1)(0)), scalar(random_vec(rng, 1)(0)), scalar(1),
                            ConvexSet::box(vec({-1}), vec({1})));
      const auto G = std::get<SemilinearMap>(g_map(F, delta));
      const Vector z = random_vec(rng, 1, 2);
      const Vector x = G.A0.transpose() * z, y = G.A1.transpose() * z;
      const ExtReal lhs = m_function(G, x, y, z), rhs = m_g_via_formula(F, delta, x, y, z);
      ASSERT_TRUE(lhs.is_finite());
      EXPECT_NEAR(lhs.value(), rhs.value(), 1e-9);
      EXPECT_EQ(m_function(G, a, b, c), m_g_via_formula(F, delta, a, b, c));
    }
  }
}

TEST(PhiLiftTest, Examples) {
  EXPECT_DOUBLE_EQ(phi_lift_conjugate(ConvexFn::norm2sq(2), 1.0, vec({1}), vec({1})).value(), 2.5);
  const ConvexFn second = ConvexFn::coordinate_select(2, {1});
  EXPECT_DOUBLE_EQ(phi_lift_conjugate(second, 0.5, vec({-2}), vec({2})).value(), 0.0);
  EXPECT_TRUE(phi_lift_conjugate(second, 0.5, vec({-1}), vec({2})).is_plus_inf());
  EXPECT_DOUBLE_EQ(phi_lift_conjugate(ConvexFn::norm2sq(2), 0.5, vec({2}), vec({0})).value(), 2.0);
}

TEST(PhiLiftTest, SampledLiftAgrees) {
  const double delta = 0.5;
  const ConvexFn lift = ConvexFn::lifted(ConvexFn::norm2sq(2), delta);
  const ConvexFn sampled = sample(lift, GridSpec{vec({-4, -4}), vec({4, 4}), 161});
  for (const Vector& p : {vec({2, 0}), vec({1, -1}), vec({-0.5, 1.5}), vec({0, 0})}) {
    const double closed = phi_lift_conjugate(ConvexFn::norm2sq(2), delta, p.head(1), p.tail(1)).value();
    const double numeric = lf_numeric(sampled, p).value();
    EXPECT_LE(numeric, closed + 1e-12);
    EXPECT_NEAR(numeric, closed, 0.05);
    EXPECT_NEAR(lift.conjugate(p).value(), closed, 1e-12);
  }
}

TEST(PhiLiftTest, InverseAdjointBlockMatrix) {
  std::mt19937_64 rng(24);
  const int n = 2;
  for (double delta : {1.0, 0.5, 0.125}) {
    const Matrix E = Matrix::Identity(n, n);
    Matrix A = Matrix::Zero(2 * n, 2 * n);
    A.block(0, 0, n, n) = E;
    A.block(n, 0, n, n) = -E / delta;
    A.block(n, n, n, n) = E / delta;
    Matrix expected = Matrix::Zero(2 * n, 2 * n);
    expected.block(0, 0, n, n) = E;
    expected.block(0, n, n, n) = E;
    expected.block(n, n, n, n) = delta * E;
    const Matrix inv_adj = A.inverse().transpose();
    EXPECT_LE((inv_adj - expected).norm(), 1e-12);

    Matrix P = incdual::testing::random_mat(rng, 2 * n, 2 * n);
    const ConvexFn phi = ConvexFn::quadratic(P * P.transpose() + Matrix::Identity(2 * n, 2 * n), Vector::Zero(2 * n), 0);
    for (int trial = 0; trial < 20; ++trial) {
      const Vector xs = random_vec(rng, n), ys = random_vec(rng, n);
      Vector p(2 * n);
      p << xs, ys;
      EXPECT_NEAR(phi_lift_conjugate(phi, delta, xs, ys).value(), phi.conjugate(inv_adj * p).value(), 1e-9);
    }
  }
}

TEST(PascalTest, Examples) {
  const auto out = pascal_args(2, 0.5, seq({1, 1, 1}));
  EXPECT_EQ(out[0](0), 3.0);
  EXPECT_EQ(out[1](0), 1.5);
  EXPECT_EQ(out[2](0), 0.25);
  const auto row = pascal_args(3, 1.0, seq({0, 0, 0, 1}));
  const double want[] = {1, 3, 3, 1};
  for (int j = 0; j < 4; ++j) EXPECT_EQ(row[j](0), want[j]);
  EXPECT_THROW(pascal_args(2, 0.5, seq({1, 1})), Error);
}

TEST(PascalTest, OrderOneAndTwoMatchClosedForms) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 100; ++trial) {
    const double delta = 1.0 / (2 + trial % 7);
    const Vector x = random_vec(rng, 2), y1 = random_vec(rng, 2), y2 = random_vec(rng, 2);
    const auto m1 = pascal_args(1, delta, {x, y1});
    EXPECT_EQ(m1[0], Vector(x + y1));
    EXPECT_EQ(m1[1], Vector(delta * y1));
    const auto m2 = pascal_args(2, delta, {x, y1, y2});
    EXPECT_EQ(m2[0], Vector(x + y1 + y2));
    EXPECT_EQ(m2[1], Vector(delta * (y1 + 2.0 * y2)));
    EXPECT_EQ(m2[2], Vector(delta * delta * y2));
  }
}

TEST(PascalTest, IntegerExactBinomials) {
  EXPECT_EQ(binomial(20, 10), 184756u);
  EXPECT_EQ(binomial(62, 31), 465428353255261088ULL);
  const PascalTransform T(20, 1.0);
  EXPECT_EQ(T.matrix()(10, 20), 184756.0);
  EXPECT_EQ(T.matrix()(5, 3), 0.0);
  EXPECT_THROW(PascalTransform(21, 0.5), Error);
}

TEST(DualBridgeTest, Examples) {
  const GridDualVars one = dual_bridge(barred(seq({1, 2, 3}), seq({4, 5})), 1.0);
  EXPECT_EQ(one.xstar[2](0), 3.0);
  EXPECT_EQ(one.vstar[1](0), 5.0 - 2.0 * 3.0);
  // mu*(t + delta) = 1 and x*(t + 2 delta) = 0.25 in scaled units.
  const GridDualVars half = dual_bridge(barred(seq({0, 0, 0.5}), seq({0, 2})), 0.5);
  EXPECT_EQ(half.mustar[1](0), 1.0);
  EXPECT_EQ(half.xstar[2](0), 0.25);
  EXPECT_EQ(half.vstar[1](0), 1.0);
  EXPECT_THROW(dual_bridge(barred(seq({1, 2}), seq({4, 5})), 0.5), Error);
}

TEST(DualBridgeTest, MTermIdentity) {
  std::mt19937_64 rng(26);
  const double delta = 0.25;
  for (int trial = 0; trial < 100; ++trial) {
    const InclusionMap T = random_table(rng, 5);
    const GridDualVars g = random_barred(rng, 4);
    for (int k = 0; k + 2 <= 4; ++k) {
      const BridgePair bp = m_term_bridge(T, delta, g, k);
      EXPECT_NEAR(bp.lhs.value(), bp.rhs.value(), 1e-9);
    }
  }
}

TEST(DualBridgeTest, MTermIdentitySemilinear) {
  std::mt19937_64 rng(27);
  const double delta = 0.25;
  const ContinuousProblem cp = incdual::testing::double_integrator();
  const DiscreteProblem p = build_pda(cp, MeshSpec(4));
  const auto& G = p.semilinear();
  for (int trial = 0; trial < 50; ++trial) {
    // Barred variables on the adjoint subspace of G.
    std::vector<Vector> x(5), mu(4);
    x[4] = random_vec(rng, 1, 2);
    x[3] = random_vec(rng, 1, 2);
    for (int t = 2; t >= 0; --t) x[t] = G.A0.transpose() * x[t + 2] + G.A1.transpose() * x[t + 1];
    for (int t = 0; t + 2 <= 4; ++t) mu[t + 1] = G.A1.transpose() * x[t + 2];
    mu[0] = x[0] - G.A0.transpose() * x[2];
    const GridDualVars g = barred(x, mu);
    for (int k = 0; k + 2 <= 4; ++k) {
      const BridgePair bp = m_term_bridge(cp.map, delta, g, k);
      ASSERT_TRUE(bp.lhs.is_finite());
      EXPECT_NEAR(bp.lhs.value(), bp.rhs.value(), 1e-9);
    }
  }
}

TEST(TerminalBridgeTest, Examples) {
  const BridgePair zero = terminal_bridge(ConvexFn::norm2sq(2), 0.5, barred(seq({0, 0, 0}), seq({0, 0})));
  EXPECT_EQ(zero.lhs.value(), 0.0);
  EXPECT_EQ(zero.rhs.value(), 0.0);
  const BridgePair one = terminal_bridge(ConvexFn::norm2sq(2), 1.0, barred(seq({0, -1}), seq({0})));
  EXPECT_NEAR(one.lhs.value(), one.rhs.value(), 1e-12);
  // phi(x, y) = y at delta = 1/2: finite only at mu*(K-1) - x*(K-1) = -2, x*(K) = -2.
  const ConvexFn second = ConvexFn::coordinate_select(2, {1});
  const BridgePair fin = terminal_bridge(second, 0.5, barred(seq({0, -2, -2}), seq({0, -4})));
  EXPECT_EQ(fin.lhs.value(), 0.0);
  EXPECT_EQ(fin.rhs.value(), 0.0);
  const BridgePair inf = terminal_bridge(second, 0.5, barred(seq({0, -2, -2}), seq({0, 1})));
  EXPECT_TRUE(inf.lhs.is_plus_inf());
  EXPECT_TRUE(inf.rhs.is_plus_inf());
}

TEST(TerminalBridgeTest, RandomDraws) {
  std::mt19937_64 rng(28);
  for (int trial = 0; trial < 100; ++trial) {
    const double delta = trial % 2 ? 0.25 : 0.5;
    const int K = static_cast<int>(1 / delta);
    const GridDualVars g = random_barred(rng, K);
    const BridgePair bp = terminal_bridge(ConvexFn::norm2sq(2), delta, g);
    EXPECT_NEAR(bp.lhs.value(), bp.rhs.value(), 1e-9 * (1 + std::abs(bp.lhs.value())));
  }
}

TEST(SupportBridgeTest, Examples) {
  const ConvexSet I = ConvexSet::box(vec({-1}), vec({1}));
  const BridgePair bp = support_bridge_check(I, I, 0.5, barred(seq({2, 2, 0}), seq({1, 0})));
  EXPECT_DOUBLE_EQ(bp.lhs.value(), 4.0);
  EXPECT_DOUBLE_EQ(bp.rhs.value(), 4.0);
  const BridgePair zero = support_bridge_check(I, I, 0.5, barred(seq({0, 0, 0}), seq({0, 0})));
  EXPECT_EQ(zero.lhs.value(), 0.0);
  EXPECT_EQ(zero.rhs.value(), 0.0);
}

TEST(SupportBridgeTest, InequalityOnRandomDraws) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const ConvexSet Q0 = incdual::testing::random_set(rng, 1), Q1 = incdual::testing::random_set(rng, 1);
    const BridgePair bp = support_bridge_check(Q0, Q1, 0.25, random_barred(rng, 4));
    EXPECT_GE(bp.lhs.value(), bp.rhs.value() - 1e-9);
  }
}

TEST(BuildPdaTest, DoubleIntegrator) {
  const ContinuousProblem cp = incdual::testing::double_integrator();
  const DiscreteProblem p4 = build_pda(cp, MeshSpec::from_delta(0.25));
  EXPECT_EQ(p4.N, 4);
  const auto& G = p4.semilinear();
  EXPECT_EQ(G.A0(0, 0), -1.0);
  EXPECT_EQ(G.A1(0, 0), 2.0);
  EXPECT_EQ(G.B(0, 0), 1.0 / 16);
  EXPECT_EQ(p4.Q1.kind(), "singleton");
  EXPECT_EQ(p4.Q1.support(vec({1})), 0.0);
  const DiscreteProblem p8 = build_pda(cp, MeshSpec::from_delta(0.125));
  EXPECT_EQ(p8.semilinear().B(0, 0), 1.0 / 64);
}

TEST(BuildPdaTest, FirstStepSetIsMinkowskiSum) {
  const ConvexSet s = first_step_set(ConvexSet::box(vec({0}), vec({1})), ConvexSet::box(vec({-1}), vec({1})), 0.5);
  const auto [lo, hi] = s.bounds();
  EXPECT_DOUBLE_EQ(lo(0), -0.5);
  EXPECT_DOUBLE_EQ(hi(0), 1.5);
}

TEST(BuildPdaTest, TerminalCostIsLift) {
  const DiscreteProblem p = build_pda(incdual::testing::double_integrator(), MeshSpec(4));
  // Phi(x, y) = phi(x, (y - x) / delta) = x for phi(x, y) = x.
  EXPECT_DOUBLE_EQ(p.phi.value(vec({0.3, 0.7})).value(), 0.3);
  const ContinuousProblem cp{1, 1, incdual::testing::double_integrator().map, ConvexFn::coordinate_select(2, {1}),
                             ConvexSet::singleton(vec({0})), ConvexSet::singleton(vec({0}))};
  EXPECT_DOUBLE_EQ(build_pda(cp, MeshSpec(4)).phi.value(vec({0.3, 0.7})).value(), 1.6);
}

TEST(DualObjectiveDaTest, DoubleIntegratorSeed) {
  // Scaled dual grid functions v* = 0 and x*(t) = t - 1 at delta = 1/4.
  const double delta = 0.25;
  GridDualVars s;
  s.K = 4;
  s.barred = false;
  for (int k = 0; k <= 4; ++k) s.xstar.push_back(vec({k * delta - 1}));
  for (int k = 0; k < 4; ++k) s.vstar.push_back(vec({0}));
  const ExtReal v = dual_objective_da(incdual::testing::double_integrator(), MeshSpec(4), s);
  EXPECT_NEAR(v.value(), -0.1875, 1e-12);
}
