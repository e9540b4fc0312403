#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "mwk/error.hpp"
#include "mwk/hessian.hpp"
#include "oracles.hpp"

using mwk::AnglePoint;
using oracle::kHalfPi;
using oracle::kPi;

TEST(Region, Membership) {
  EXPECT_TRUE(mwk::in_region({kPi / 3, kPi / 3}));
  EXPECT_TRUE(mwk::in_region({kHalfPi, kHalfPi}));
  EXPECT_FALSE(mwk::in_region({0.5, 0.5}));
  EXPECT_FALSE(mwk::in_region({kPi / 4, kPi / 4}));
  EXPECT_FALSE(mwk::in_region({1.7, 1.0}));
  EXPECT_THROW(mwk::f_value({0.4, 0.4}), mwk::Error);
}

TEST(Legs, NapierLabeling) {
  const auto l = mwk::intermediate_ab({kPi / 3, kHalfPi});
  EXPECT_NEAR(l.a, kPi / 3, 1e-15);
  EXPECT_NEAR(l.b, kHalfPi, 1e-15);
  // Rebuild the right triangle from the legs and read its angles.
  oracle::Rng rng(51);
  for (int k = 0; k < 50; ++k) {
    const auto [A, B] = oracle::random_region_point(rng, 1e-3);
    const auto legs = mwk::intermediate_ab({A, B});
    const Eigen::Matrix3d T = oracle::right_triangle(legs.a, legs.b);
    EXPECT_NEAR(oracle::angle_at(T.col(0), T.col(1), T.col(2)), A, 1e-9);
    EXPECT_NEAR(oracle::angle_at(T.col(1), T.col(0), T.col(2)), B, 1e-9);
  }
}

TEST(FValue, KnownPoints) {
  const double c = std::acos(1 / std::sqrt(3.0));
  EXPECT_NEAR(mwk::f_value({kPi / 3, kPi / 3}), c * std::sin(c), 1e-15);
  EXPECT_NEAR(mwk::f_value({kPi / 3, kPi / 3}), 0.78001, 1e-5);
  EXPECT_NEAR(mwk::f_value({kHalfPi, kHalfPi}), kHalfPi, 1e-15);
  oracle::Rng rng(52);
  for (int k = 0; k < 100; ++k) {
    const auto [A, B] = oracle::random_region_point(rng, 1e-4);
    EXPECT_NEAR(mwk::f_value({A, B}), oracle::f_ab(A, B), 1e-14);
  }
}

TEST(Gradient, CornerValue) {
  const auto g = mwk::gradient({kHalfPi, kHalfPi});
  EXPECT_NEAR(g.f_A, 1.0, 1e-14);
  EXPECT_NEAR(g.f_B, 0.0, 1e-14);
}

TEST(Gradient, MatchesFourthOrderDifferences) {
  // Includes the asymmetric pair used to check the labeling.
  for (AnglePoint p : {AnglePoint{kPi / 3, kHalfPi - 0.05}, AnglePoint{kHalfPi - 0.05, kPi / 3},
                       AnglePoint{1.0, 1.2}, AnglePoint{1.4, 0.6}}) {
    const auto g = mwk::gradient(p);
    const auto d = oracle::fd_derivs(p.A, p.B, 1e-3, 1e-3);
    EXPECT_NEAR(g.f_A, d.fA, 1e-8) << p.A << ' ' << p.B;
    EXPECT_NEAR(g.f_B, d.fB, 1e-8) << p.A << ' ' << p.B;
  }
  const auto g1 = mwk::gradient({kPi / 3, kHalfPi - 0.05});
  const auto g2 = mwk::gradient({kHalfPi - 0.05, kPi / 3});
  EXPECT_GT(std::abs(g1.f_A - g2.f_B), 1e-3);
}

TEST(Gradient, LegPartialsChainRule) {
  const AnglePoint p{1.1, 0.9};
  const auto lp = mwk::leg_partials(p);
  const double h = 1e-6;
  const auto up = mwk::intermediate_ab({p.A + h, p.B}), dn = mwk::intermediate_ab({p.A - h, p.B});
  EXPECT_NEAR(lp.da_dA, (up.a - dn.a) / (2 * h), 1e-8);
  EXPECT_NEAR(lp.db_dA, (up.b - dn.b) / (2 * h), 1e-8);
  const auto rt = mwk::intermediate_ab({p.A, p.B + h}), lf = mwk::intermediate_ab({p.A, p.B - h});
  EXPECT_NEAR(lp.da_dB, (rt.a - lf.a) / (2 * h), 1e-8);
  EXPECT_NEAR(lp.db_dB, (rt.b - lf.b) / (2 * h), 1e-8);
}

TEST(PQR, Values) {
  const auto z = mwk::pqr(0.0, 0.0);
  EXPECT_NEAR(z.P, 0.0, 1e-15);
  EXPECT_NEAR(z.Q, 0.0, 1e-15);
  ASSERT_TRUE(z.R.has_value());
  EXPECT_NEAR(*z.R, 0.0, 1e-15);
  for (double x : {0.0, 0.3, 0.7}) {
    const auto v = mwk::pqr(x, 1.0);
    EXPECT_NEAR(v.P, -1.0, 1e-14) << x;
    EXPECT_NEAR(v.Q, 2.0, 1e-14) << x;
  }
  EXPECT_FALSE(mwk::pqr(1.0, 0.5).R.has_value());
}

TEST(PQR, SimplifiedMatchesRaw) {
  oracle::Rng rng(53);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int k = 0; k < 2000; ++k) {
    const double x = u(rng), y = u(rng);
    const auto s = mwk::pqr(x, y), r = mwk::pqr_raw(x, y);
    const double scale = 1.0 + 1.0 / (y * y);
    EXPECT_NEAR(s.P, r.P, 1e-12 * scale);
    EXPECT_NEAR(s.Q, r.Q, 1e-12 * scale);
    ASSERT_TRUE(s.R && r.R);
    EXPECT_NEAR(*s.R, *r.R, 1e-12 * scale * std::max(1.0, std::abs(*r.R)));
    EXPECT_NEAR(mwk::r_factored(x, y), *s.R, 1e-11 * std::max(1.0, std::abs(*s.R)));
  }
}

TEST(Hessian, AnalyticMatchesDifferences) {
  oracle::Rng rng(54);
  for (int k = 0; k < 100; ++k) {
    const auto [A, B] = oracle::random_region_point(rng, 2e-2);
    const auto h = mwk::hessian_analytic({A, B});
    const auto d = oracle::fd_derivs(A, B, 1e-3, 2e-3);
    EXPECT_NEAR(h.f_AA, d.fAA, 1e-5);
    EXPECT_NEAR(h.f_AB, d.fAB, 1e-5);
    EXPECT_NEAR(h.f_BB, d.fBB, 1e-5);
    EXPECT_TRUE(h.negative_definite);
    EXPECT_LT(h.pqr_residual, 1e-10);
    EXPECT_LT(h.reduced_residual, 1e-9);
    EXPECT_NEAR(h.det_hess, h.f_AA * h.f_BB - h.f_AB * h.f_AB, 1e-12);
  }
}

TEST(Hessian, LimitFormIsContinuous) {
  // Along A = pi/2, cos a = 0; approach it from inside.
  const double B = 1.0;
  const auto at = mwk::hessian_analytic({kHalfPi, B});
  EXPECT_TRUE(at.limit_form);
  const auto near = mwk::hessian_analytic({kHalfPi - 1e-6, B});
  EXPECT_FALSE(near.limit_form);
  EXPECT_NEAR(at.f_AA, near.f_AA, 1e-4);
  EXPECT_NEAR(at.f_AB, near.f_AB, 1e-4);
  EXPECT_NEAR(at.f_BB, near.f_BB, 1e-4);
  EXPECT_LT(at.f_AA, 0.0);
}

TEST(Hessian, FdHelpers) {
  const AnglePoint p{1.2, 1.0};
  const auto g = mwk::gradient(p), fg = mwk::fd_gradient(p);
  EXPECT_NEAR(g.f_A, fg.f_A, 1e-8);
  EXPECT_NEAR(g.f_B, fg.f_B, 1e-8);
  const auto h = mwk::hessian_analytic(p);
  const auto fh = mwk::fd_hessian(p);
  EXPECT_NEAR(h.f_AA, fh.f_AA, 1e-6);
  EXPECT_NEAR(h.f_AB, fh.f_AB, 1e-6);
  EXPECT_NEAR(h.f_BB, fh.f_BB, 1e-6);
}

TEST(ReducedDeterminant, Values) {
  const auto r = mwk::reduced_determinant(kPi / 4);
  const double a = kPi / 4;
  EXPECT_NEAR(r.value, a * a - (1 - a) * (1 - a), 1e-15);
  EXPECT_NEAR(r.value, 0.57080, 1e-4);
  EXPECT_LT(r.sin_chain_factor, 0.0);
  EXPECT_GT(r.tan_chain_factor, 0.0);
  EXPECT_TRUE(mwk::reduced_det_positive(1e-3));
  EXPECT_TRUE(mwk::reduced_det_positive(kHalfPi - 1e-6));
  for (double x = 1e-3; x < kHalfPi; x += 0.01) {
    EXPECT_TRUE(mwk::reduced_det_positive(x)) << x;
    const auto q = mwk::reduced_determinant(x);
    EXPECT_NEAR(q.value, -q.sin_chain_factor * q.tan_chain_factor,
                1e-9 * std::max(1.0, std::abs(q.value)))
        << x;
  }
}

TEST(RegionScan, NoViolations) {
  const auto s = mwk::region_scan(50);
  EXPECT_EQ(s.grid_n, 50);
  EXPECT_FALSE(s.rows.empty());
  EXPECT_EQ(s.violations(), 0);
  EXPECT_GT(s.min_det_hess, 0.0);
  EXPECT_GT(s.min_neg_f_AA, 0.0);
  EXPECT_LT(mwk::region_scan(10).max_fd_gap, 1e-5);
  for (const auto& r : s.rows) {
    EXPECT_TRUE(mwk::in_region({r.A, r.B})) << r.A << ' ' << r.B;
  }
}

TEST(RegionScan, Csv) {
  const auto s = mwk::region_scan(5);
  std::ostringstream out;
  mwk::write_scan_csv(s, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "A,B,f,f_AA,det_hess,reduced_det,fd_gap");
  std::size_t n = 0;
  while (std::getline(in, line)) ++n;
  EXPECT_EQ(n, s.rows.size());
  EXPECT_THROW(mwk::region_scan(1), mwk::Error);
}
