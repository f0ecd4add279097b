#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bisz/analysis.hpp"
#include "bisz/moments.hpp"
#include "oracle.hpp"

using namespace bisz;
using oracle::ld;

namespace {

struct Draw {
  int m, n;
  double a, x, y;
};

std::vector<Draw> draws(int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> md(1, 50);
  std::uniform_real_distribution<double> ad(1.0001, 10.0), xd(0.0, 20.0);
  std::vector<Draw> out;
  for (int i = 0; i < count; ++i) out.push_back({md(rng), md(rng), ad(rng), xd(rng), xd(rng)});
  return out;
}

ld axis_moment(int m, double a, double x, int r, ld center) {
  return oracle::expect1(m, oracle::mean(m, a, x), [&](ld t) { return std::pow(t - center, r); });
}

void expect_rel(double got, ld want, double tol, const char* what, const Draw& d) {
  const double w = static_cast<double>(want);
  EXPECT_LE(std::fabs(got - w), tol * std::fabs(w) + 1e-300) << what << " m=" << d.m << " n=" << d.n
                                                              << " a=" << d.a << " x=" << d.x << " y=" << d.y;
}

}  // namespace

TEST(RawMoments, Examples) {
  const auto z = raw_moments(OperatorParams(3, 4, 2.0), 0.0, 0.0);
  EXPECT_EQ(z.e10, 0.0);
  EXPECT_EQ(z.e01, 0.0);
  EXPECT_EQ(z.e20, 0.0);
  EXPECT_EQ(z.e02, 0.0);
  EXPECT_NEAR(raw_moments(OperatorParams(1, 1, std::numbers::e), 1.0, 0.0).e10, 1.0 / (std::numbers::e - 1.0),
              1e-15);
  const auto ms = moment_set(OperatorParams(5, 5, 1.32), 0.1, 0.1);
  EXPECT_NEAR(ms.raw.e10, 0.1 * lambda(5, 1.32), 1e-16);
}

TEST(ClosedForms, AgreeWithSeriesOracle) {
  for (const auto& d : draws(50, 17)) {
    const OperatorParams p(d.m, d.n, d.a);
    const auto ms = moment_set(p, d.x, d.y);
    expect_rel(ms.raw.e10, axis_moment(d.m, d.a, d.x, 1, 0), 1e-8, "e10", d);
    expect_rel(ms.raw.e01, axis_moment(d.n, d.a, d.y, 1, 0), 1e-8, "e01", d);
    expect_rel(ms.raw.e20, axis_moment(d.m, d.a, d.x, 2, 0), 1e-8, "e20", d);
    expect_rel(ms.raw.e02, axis_moment(d.n, d.a, d.y, 2, 0), 1e-8, "e02", d);
    expect_rel(ms.central.c1x, axis_moment(d.m, d.a, d.x, 1, d.x), 1e-8, "c1x", d);
    expect_rel(ms.central.c1y, axis_moment(d.n, d.a, d.y, 1, d.y), 1e-8, "c1y", d);
    expect_rel(ms.central.c2x, axis_moment(d.m, d.a, d.x, 2, d.x), 1e-8, "c2x", d);
    expect_rel(ms.central.c2y, axis_moment(d.n, d.a, d.y, 2, d.y), 1e-8, "c2y", d);
    expect_rel(ms.central.c4x, axis_moment(d.m, d.a, d.x, 4, d.x), 1e-8, "c4x", d);
    expect_rel(ms.central.c4y, axis_moment(d.n, d.a, d.y, 4, d.y), 1e-8, "c4y", d);

    const auto mixed = mixed_weighted_moments(p, d.x, d.y);
    const ld ex = d.x * oracle::lambda(d.m, d.a);
    const ld self = oracle::expect1(d.m, oracle::mean(d.m, d.a, d.x), [&](ld t) {
      return (t - ex) * (t - ex) * (t - d.x) * (t - d.x);
    });
    const ld cross = axis_moment(d.m, d.a, d.x, 2, ex) * axis_moment(d.n, d.a, d.y, 2, d.y);
    expect_rel(mixed.self, self, 1e-8, "mixed self", d);
    expect_rel(mixed.cross, cross, 1e-8, "mixed cross", d);
  }
}

TEST(ClosedForms, PrintedTranscriptionsAgreeWithStableForms) {
  for (const auto& d : draws(50, 18)) {
    const OperatorParams p(d.m, d.n, d.a);
    const auto ms = moment_set(p, d.x, d.y);
    const auto mixed = mixed_weighted_moments(p, d.x, d.y);
    EXPECT_LT(oracle::rel(printed::e10(d.m, d.a, d.x), ms.raw.e10), 1e-8);
    EXPECT_LT(oracle::rel(printed::e20(d.m, d.a, d.x), ms.raw.e20), 1e-8);
    EXPECT_LT(oracle::rel(printed::c1(d.m, d.a, d.x), ms.central.c1x), 1e-8);
    EXPECT_LT(oracle::rel(printed::c2(d.m, d.a, d.x), ms.central.c2x), 1e-8);
    EXPECT_LT(oracle::rel(printed::c4(d.m, d.a, d.x), ms.central.c4x), 1e-8);
    EXPECT_LT(oracle::rel(printed::mixed_self(d.m, d.a, d.x), mixed.self), 1e-8);
    // the printed cross form is the m = n specialization
    const auto diag = mixed_weighted_moments(OperatorParams(d.m, d.m, d.a), d.x, d.y);
    EXPECT_LT(oracle::rel(printed::mixed_cross(d.m, d.a, d.x, d.y), diag.cross), 1e-8);
  }
}

TEST(CentralMoments, Examples) {
  const auto c0 = central_moments(OperatorParams(4, 4, 2.0), 0.0, 0.0);
  EXPECT_EQ(c0.c2x, 0.0);
  EXPECT_EQ(c0.c4x, 0.0);
  const auto c = central_moments(OperatorParams(10, 10, 1.32), 1.0, 1.0);
  const double want = static_cast<double>(axis_moment(10, 1.32, 1.0, 4, 1.0L));
  EXPECT_LT(oracle::rel(c.c4x, want), 1e-9);
  const auto c3 = central_moments(OperatorParams(3, 8, 1.7), 2.2, 0.4);
  EXPECT_NEAR(c3.c1x, 2.2 * (lambda(3, 1.7) - 1.0), 1e-15);
}

TEST(CentralMoments, SignAndBoundInvariants) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> md(1, 2000);
  std::uniform_real_distribution<double> ad(1.001, 10.0), xd(0.0, 100.0);
  for (int i = 0; i < 2000; ++i) {
    const int m = md(rng), n = md(rng);
    const double a = ad(rng), x = xd(rng), y = xd(rng);
    const OperatorParams p(m, n, a);
    const auto c = central_moments(p, x, y);
    const auto dp = delta_prime(p, x, y);
    EXPECT_LE(c.c1x, 0.0);
    EXPECT_LE(c.c1y, 0.0);
    EXPECT_GE(c.c2x, 0.0);
    EXPECT_GE(c.c2y, 0.0);
    EXPECT_GE(c.c4x, c.c2x * c.c2x * (1 - 1e-12));
    EXPECT_GE(c.c4y, c.c2y * c.c2y * (1 - 1e-12));
    {
      EXPECT_LE(c.c2x, dp.dm * dp.dm * (1 + 1e-12)) << m << " " << a << " " << x;
      EXPECT_LE(c.c2y, dp.dn * dp.dn * (1 + 1e-12)) << n << " " << a << " " << y;
    }
  }
}

TEST(DeltaPrime, Examples) {
  EXPECT_EQ(delta_prime(OperatorParams(4, 4, 2.0), 0.0, 0.0).dm, 0.0);
  EXPECT_NEAR(delta_prime(OperatorParams(4, 9, 2.0), 1.0, 2.0).dm, std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(delta_prime(OperatorParams(4, 9, 2.0), 1.0, 2.0).dn, std::sqrt(6.0 / 9.0), 1e-15);
  double prev = 1e300;
  for (int m = 1; m < 100; ++m) {
    const double dm = delta_prime(OperatorParams(m, 1, 2.0), 0.7, 0.0).dm;
    EXPECT_LT(dm, prev);
    prev = dm;
  }
}

TEST(LambdaBound, HoldsOverSweep) {
  for (int m = 1; m <= 100000; m = m < 1000 ? m + 1 : m * 2) EXPECT_TRUE(lambda_bound_holds(m, 1.32)) << m;
  EXPECT_FALSE(find_lambda_bound_failure(1.0, 40.0, 400, 2000).has_value());
  // Far outside the sweep the inequality eventually breaks.
  EXPECT_TRUE(find_lambda_bound_failure(40.0, 1e6, 50, 3).has_value());
}

TEST(LambdaMinusOne, MatchesOracleAcrossSeriesSwitch) {
  for (double a : {1.0001, 1.32, 2.0, 30.0}) {
    for (int m : {1, 3, 10, 100, 1000, 100000}) {
      const ld want = oracle::lambda_minus_one(m, a);
      EXPECT_LT(oracle::rel(lambda_minus_one(m, a), static_cast<double>(want)), 1e-9) << a << " " << m;
    }
  }
}

TEST(AsymptoticLimits, Examples) {
  const auto z = asymptotic_limits(0.0, 2.0);
  EXPECT_EQ(z.m_c1, 0.0);
  EXPECT_EQ(z.m2_c4, 0.0);
  const auto e = asymptotic_limits(1.0, std::numbers::e);
  EXPECT_NEAR(e.m_c1, -0.5, 1e-15);
  EXPECT_EQ(e.m_c2, 1.0);
  EXPECT_EQ(e.c4, 0.0);
  EXPECT_EQ(e.m_c4, 0.0);
  EXPECT_EQ(e.m2_c4, 3.0);
}

TEST(AsymptoticLimits, RichardsonExtrapolationRecoversLimits) {
  const double x = 1.0, a = std::numbers::e;
  const auto lim = asymptotic_limits(x, a);
  const int m = 1 << 12;
  const auto s1 = scaled_central_moments(m, a, x);
  const auto s2 = scaled_central_moments(2 * m, a, x);
  EXPECT_NEAR(2 * s2.m_c1 - s1.m_c1, lim.m_c1, 1e-6);
  EXPECT_NEAR(2 * s2.m_c2 - s1.m_c2, lim.m_c2, 1e-6);
  EXPECT_NEAR(2 * s2.m2_c4 - s1.m2_c4, lim.m2_c4, 1e-5);
}

TEST(AsymptoticLimits, FirstMomentConvergesAtRateOne) {
  const double x = 1.0, a = 1.32;
  const double target = asymptotic_limits(x, a).m_c1;
  std::vector<std::pair<double, double>> s;
  for (int m : {100, 1000, 10000, 100000}) s.emplace_back(m, std::fabs(scaled_central_moments(m, a, x).m_c1 - target));
  EXPECT_NEAR(order_fit(s).order, 1.0, 0.05);
}

TEST(MixedMoments, Examples) {
  const auto z = mixed_weighted_moments(OperatorParams(3, 3, 2.0), 0.0, 0.5);
  EXPECT_EQ(z.self, 0.0);
  EXPECT_EQ(z.cross, 0.0);
  const int m = 10000;
  const auto r = mixed_weighted_moments(OperatorParams(m, m, 1.32), 1.0, 1.0);
  EXPECT_NEAR(static_cast<double>(m) * m * r.cross, 1.0, 0.01);
  EXPECT_NEAR(static_cast<double>(m) * m * r.self, 3.0, 0.03);
  const auto b = mixed_weighted_moments(OperatorParams(5, 5, 1.5), 0.7, 0.3);
  const ld ex = 0.7L * oracle::lambda(5, 1.5L);
  const ld self = oracle::expect1(5, oracle::mean(5, 1.5L, 0.7L),
                                  [&](ld t) { return (t - ex) * (t - ex) * (t - 0.7L) * (t - 0.7L); });
  EXPECT_LT(oracle::rel(b.self, static_cast<double>(self)), 1e-8);
}

TEST(WeightedBoundedness, ZeroWeightIsExact) {
  const OperatorParams p(7, 1, 1.32);
  const auto w = weighted_boundedness(p, 2.5, 0);
  EXPECT_EQ(w.first, 1.0);
  EXPECT_EQ(w.second, central_moments(p, 2.5, 0.0).c2x);
}

TEST(WeightedBoundedness, MatchesSeriesOracle) {
  for (int N : {1, 2, 4, 8}) {
    for (int m : {1, 6, 40}) {
      for (double x : {0.0, 0.4, 3.0, 25.0}) {
        const auto w = weighted_boundedness(OperatorParams(m, 1, 1.32), x, N);
        const ld wt = 1.0L / (1.0L + std::pow(static_cast<ld>(x), N));
        const ld mu = oracle::mean(m, 1.32L, x);
        const ld first = wt * oracle::expect1(m, mu, [&](ld t) { return 1.0L + std::pow(t, N); });
        const ld second = wt * oracle::expect1(m, mu, [&](ld t) { return (t - x) * (t - x) * (1.0L + std::pow(t, N)); });
        EXPECT_LT(oracle::rel(w.first, static_cast<double>(first)), 1e-10) << N << " " << m << " " << x;
        EXPECT_NEAR(w.second, static_cast<double>(second), 1e-10 * (1 + static_cast<double>(second)))
            << N << " " << m << " " << x;
      }
    }
  }
}

TEST(WeightedBoundedness, QuadraticWeightStaysBelowBound) {
  for (int m = 1; m <= 100; ++m) {
    for (int i = 0; i <= 400; ++i) {
      const double x = 0.25 * i;
      EXPECT_LE(weighted_boundedness(OperatorParams(m, 1, 1.32), x, 2).first, 2.5) << m << " " << x;
    }
  }
  EXPECT_THROW(weighted_boundedness(OperatorParams(1, 1, 1.32), 1.0, 9), InvalidParameter);
  EXPECT_THROW(weighted_boundedness(OperatorParams(1, 1, 1.32), 1.0, -1), InvalidParameter);
}
