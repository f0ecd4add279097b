#pragma once

#include <optional>

#include "bisz/kernel.hpp"

namespace bisz {

/// Yhat(e10), Yhat(e01), Yhat(e20), Yhat(e02).
struct RawMoments {
  double e10 = 0.0;
  double e01 = 0.0;
  double e20 = 0.0;
  double e02 = 0.0;
};

/// Yhat((t-x)^j) and Yhat((s-y)^j) for j = 1, 2, 4.
struct CentralMoments {
  double c1x = 0.0;
  double c1y = 0.0;
  double c2x = 0.0;
  double c2y = 0.0;
  double c4x = 0.0;
  double c4y = 0.0;
};

struct MomentSet {
  OperatorParams params;
  double x = 0.0;
  double y = 0.0;
  RawMoments raw;
  CentralMoments central;
};

struct DeltaPrime {
  double dm = 0.0;  // sqrt(x(1+x)/m)
  double dn = 0.0;  // sqrt(y(1+y)/n)
};

/// Limits of m c1, m c2, c4, m c4, m^2 c4 as m -> infinity.
struct AsymptoticLimits {
  double m_c1 = 0.0;
  double m_c2 = 0.0;
  double c4 = 0.0;
  double m_c4 = 0.0;
  double m2_c4 = 0.0;
};

/// Yhat((t - x lambda_m)^2 (t-x)^2) and Yhat((t - x lambda_m)^2 (s-y)^2).
struct MixedMoments {
  double self = 0.0;
  double cross = 0.0;
};

/// lambda(m, a) - 1 without cancellation for small log(a)/m.
double lambda_minus_one(int m, double a);

RawMoments raw_moments(const OperatorParams& params, double x, double y);

/// Central moments through an exact bias-plus-cumulant expansion of the
/// underlying Poisson law; algebraically equal to the printed rational forms
/// in bisz::printed but free of their cancellation for large m.
CentralMoments central_moments(const OperatorParams& params, double x, double y);

MomentSet moment_set(const OperatorParams& params, double x, double y);

DeltaPrime delta_prime(const OperatorParams& params, double x, double y);

AsymptoticLimits asymptotic_limits(double x, double a);

/// (m c1x, m c2x, c4x, m c4x, m^2 c4x) for the x-axis index m.
AsymptoticLimits scaled_central_moments(int m, double a, double x);

MixedMoments mixed_weighted_moments(const OperatorParams& params, double x, double y);

/// w_N(x) = 1 for N = 0, (1 + x^N)^{-1} otherwise.
double weight_1d(int N, double x);

struct WeightedBoundedness {
  double first = 0.0;   // w_N(x) Yhat(1/w_N; x)
  double second = 0.0;  // w_N(x) Yhat((t-x)^2/w_N; x)
};

/// Exact, via Poisson raw moments up to order N1+2. N1 in [0, 8].
WeightedBoundedness weighted_boundedness(const OperatorParams& params, double x, int N1);

/// (lambda_m - 1)^2 <= 1/m, which the second-moment bound x(1+x)/m relies on.
bool lambda_bound_holds(int m, double a);

struct LambdaBoundFailure {
  double a;
  int m;
};

/// Scans a over `steps` uniform points of (a_lo, a_hi] and m in [1, m_max];
/// returns the first (a, m) violating lambda_bound_holds.
std::optional<LambdaBoundFailure> find_lambda_bound_failure(double a_lo, double a_hi, int steps,
                                                            int m_max);

/// Literal transcriptions of the published closed forms, in terms of
/// d = a^{1/m} - 1 and log(a). Kept as an independent check on the stable
/// forms above; they lose precision once log(a)/m is small.
namespace printed {

double e10(int m, double a, double x);
double e20(int m, double a, double x);
double c1(int m, double a, double x);
double c2(int m, double a, double x);
double c4(int m, double a, double x);
/// Yhat_{m,m,a}((t - x lambda_m)^2 (t-x)^2)
double mixed_self(int m, double a, double x);
/// Yhat_{m,m,a}((t - x lambda_m)^2 (s-y)^2); printed for m = n only.
double mixed_cross(int m, double a, double x, double y);

}  // namespace printed

}  // namespace bisz
