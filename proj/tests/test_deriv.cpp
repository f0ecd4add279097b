#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bisz/deriv.hpp"
#include "bisz/fnexpr.hpp"
#include "bisz/kernel.hpp"

using namespace bisz;

namespace {
BivariateFn one() { return BivariateFn("1", [](double, double) { return 1.0; }, Growth{0, 0}); }
}  // namespace

TEST(Deriv, ConstantHasZeroDerivative) {
  for (double x : {0.0, 5e-5, 0.3, 4.0}) {
    const OperatorParams p(9, 4, 1.32);
    EXPECT_NEAR(dx_yhat(p, one(), x, 0.5).value, 0.0, 1e-9) << x;
    EXPECT_NEAR(dy_yhat(p, one(), 0.5, x).value, 0.0, 1e-9) << x;
  }
}

TEST(Deriv, LinearCoordinates) {
  const OperatorParams p(6, 11, 1.7);
  const auto fx = from_expression("x");
  const auto fy = from_expression("y");
  for (double t : {0.0, 1e-5, 0.2, 3.0}) {
    EXPECT_NEAR(dx_yhat(p, fx, t, 0.4).value, lambda(6, 1.7), 1e-9) << t;
    EXPECT_NEAR(dy_yhat(p, fy, 0.4, t).value, lambda(11, 1.7), 1e-9) << t;
  }
}

TEST(Deriv, ProductClosedForm) {
  const OperatorParams p(50, 50, 1.32);
  const double l = lambda(50, 1.32);
  const auto r = dy_yhat(p, builtin("xy"), 1.0, 1.0);
  EXPECT_NEAR(r.value, l * l, 1e-9);
  EXPECT_LE(std::fabs(r.value - 1.0), 2 * (1 - l));
}

TEST(Deriv, MethodSwitch) {
  const OperatorParams p(10, 10, 1.32);
  const auto f = builtin("t2-poly");
  const auto a = dx_yhat(p, f, kIdentitySwitch, 0.3);
  EXPECT_EQ(a.method, DerivMethod::Identity);
  EXPECT_FALSE(a.step.has_value());
  const auto b = dx_yhat(p, f, kIdentitySwitch / 2, 0.3);
  EXPECT_EQ(b.method, DerivMethod::FiniteDifference);
  ASSERT_TRUE(b.step.has_value());
  EXPECT_GT(*b.step, 0.0);
  const auto c = dy_yhat(p, f, 0.3, 0.0);
  EXPECT_EQ(c.method, DerivMethod::FiniteDifference);
}

TEST(Deriv, IdentityAgreesWithCentralDifference) {
  std::mt19937_64 rng(44);
  std::uniform_int_distribution<int> md(1, 40);
  std::uniform_real_distribution<double> ad(1.05, 4.0), xd(0.1, 5.0);
  for (const auto& name : {"xy", "t2-poly", "fig5"}) {
    const auto f = builtin(name);
    for (int i = 0; i < 8; ++i) {
      const OperatorParams p(md(rng), md(rng), ad(rng));
      const double x = xd(rng), y = xd(rng);
      const double idx = dx_yhat(p, f, x, y).value;
      const double fdx = finite_difference_dx(p, f, x, y, 1e-5);
      EXPECT_LE(std::fabs(idx - fdx), 1e-5 * (1 + std::fabs(idx))) << name << " x " << x << " " << y;
      const double idy = dy_yhat(p, f, x, y).value;
      const double fdy = finite_difference_dy(p, f, x, y, 1e-5);
      EXPECT_LE(std::fabs(idy - fdy), 1e-5 * (1 + std::fabs(idy))) << name << " y " << x << " " << y;
    }
  }
}

TEST(Deriv, ConvergesForExponentialExample) {
  const auto f = builtin("fig6");
  const double x = 0.4, y = 0.4;
  const double want = f.partials()->fx(x, y);
  double prev = 1e300;
  for (int m : {10, 30, 100}) {
    const double err = std::fabs(dx_yhat(OperatorParams(m, m, 1.32), f, x, y).value - want);
    EXPECT_LT(err, prev) << m;
    prev = err;
  }
}

TEST(Deriv, RejectsBadInput) {
  const OperatorParams p(3, 3, 2.0);
  EXPECT_THROW(dx_yhat(p, one(), -0.1, 0.0), InvalidParameter);
  EXPECT_THROW(finite_difference_dx(p, one(), 1.0, 1.0, 0.0), InvalidParameter);
}
