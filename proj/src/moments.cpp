#include "bisz/moments.hpp"

#include <cmath>
#include <string>

#include "bisz/error.hpp"

namespace bisz {

namespace {

void check_point(double x, double y) {
  if (!(x >= 0.0) || !(y >= 0.0)) throw InvalidParameter("moments require x >= 0, y >= 0");
}

struct AxisLaw {
  double bias;  // E[T] - x
  double var;   // Var T
  double k3;    // third cumulant of T
  double k4;    // fourth cumulant of T
};

// T = K/m with K ~ Poisson(m x lambda_m); all cumulants of K equal its mean.
AxisLaw axis_law(int m, double a, double x) {
  const double mu = poisson_mean(m, a, x);
  const double md = m;
  return AxisLaw{x * lambda_minus_one(m, a), mu / (md * md), mu / (md * md * md),
                 mu / (md * md * md * md)};
}

double second_central(const AxisLaw& l) { return l.bias * l.bias + l.var; }

double fourth_central(const AxisLaw& l) {
  const double b = l.bias;
  const double b2 = b * b;
  return b2 * b2 + 6.0 * b2 * l.var + 4.0 * b * l.k3 + l.k4 + 3.0 * l.var * l.var;
}

}  // namespace

double lambda_minus_one(int m, double a) {
  if (m < 1 || !(a > 1.0)) return lambda(m, a) - 1.0;  // throws
  const double u = std::log(a) / m;
  if (u < 1e-2) {
    const double u2 = u * u;
    return -u / 2.0 + u2 / 12.0 - u2 * u2 / 720.0 + u2 * u2 * u2 / 30240.0;
  }
  return lambda(m, a) - 1.0;
}

RawMoments raw_moments(const OperatorParams& params, double x, double y) {
  check_point(x, y);
  const int m = params.m();
  const int n = params.n();
  const double a = params.a();
  const double mux = poisson_mean(m, a, x);
  const double muy = poisson_mean(n, a, y);
  return RawMoments{x * lambda(m, a), y * lambda(n, a),
                    (mux * mux + mux) / (static_cast<double>(m) * m),
                    (muy * muy + muy) / (static_cast<double>(n) * n)};
}

CentralMoments central_moments(const OperatorParams& params, double x, double y) {
  check_point(x, y);
  const AxisLaw lx = axis_law(params.m(), params.a(), x);
  const AxisLaw ly = axis_law(params.n(), params.a(), y);
  return CentralMoments{lx.bias,           ly.bias,           second_central(lx),
                        second_central(ly), fourth_central(lx), fourth_central(ly)};
}

MomentSet moment_set(const OperatorParams& params, double x, double y) {
  return MomentSet{params, x, y, raw_moments(params, x, y), central_moments(params, x, y)};
}

DeltaPrime delta_prime(const OperatorParams& params, double x, double y) {
  check_point(x, y);
  return DeltaPrime{std::sqrt(x * (1.0 + x) / params.m()), std::sqrt(y * (1.0 + y) / params.n())};
}

AsymptoticLimits asymptotic_limits(double x, double a) {
  if (!(x >= 0.0)) throw InvalidParameter("x must be >= 0");
  if (!(a > 1.0)) throw InvalidParameter("a must be > 1");
  return AsymptoticLimits{-x * std::log(a) / 2.0, x, 0.0, 0.0, 3.0 * x * x};
}

AsymptoticLimits scaled_central_moments(int m, double a, double x) {
  const auto c = central_moments(OperatorParams(m, 1, a), x, 0.0);
  const double md = m;
  return AsymptoticLimits{md * c.c1x, md * c.c2x, c.c4x, md * c.c4x, md * md * c.c4x};
}

MixedMoments mixed_weighted_moments(const OperatorParams& params, double x, double y) {
  check_point(x, y);
  const AxisLaw lx = axis_law(params.m(), params.a(), x);
  const AxisLaw ly = axis_law(params.n(), params.a(), y);
  // Z = T - E[T]: E[Z^2 (Z + b)^2] = E Z^4 + 2 b E Z^3 + b^2 E Z^2.
  const double ez4 = lx.k4 + 3.0 * lx.var * lx.var;
  const double self = ez4 + 2.0 * lx.bias * lx.k3 + lx.bias * lx.bias * lx.var;
  return MixedMoments{self, lx.var * second_central(ly)};
}

double weight_1d(int N, double x) {
  if (N < 0) throw InvalidParameter("weight exponent must be >= 0");
  return N == 0 ? 1.0 : 1.0 / (1.0 + std::pow(x, N));
}

WeightedBoundedness weighted_boundedness(const OperatorParams& params, double x, int N1) {
  if (N1 < 0) throw InvalidParameter("N1 must be >= 0");
  if (N1 > 8) throw InvalidParameter("weighted boundedness supports N1 <= 8, got " + std::to_string(N1));
  check_point(x, 0.0);
  const int m = params.m();
  const auto c = central_moments(params, x, 0.0);
  if (N1 == 0) return WeightedBoundedness{1.0, c.c2x};

  const double mu = poisson_mean(m, params.a(), x);
  auto t_moment = [&](int r) { return poisson_raw_moment(r, mu) / std::pow(static_cast<double>(m), r); };
  const double w = weight_1d(N1, x);
  const double first = w * (1.0 + t_moment(N1));
  // (t-x)^2 (1 + t^N) = (t-x)^2 + t^{N+2} - 2x t^{N+1} + x^2 t^N
  const double tail = t_moment(N1 + 2) - 2.0 * x * t_moment(N1 + 1) + x * x * t_moment(N1);
  return WeightedBoundedness{first, w * (c.c2x + tail)};
}

bool lambda_bound_holds(int m, double a) {
  const double d = lambda_minus_one(m, a);
  return d * d <= 1.0 / m;
}

std::optional<LambdaBoundFailure> find_lambda_bound_failure(double a_lo, double a_hi, int steps,
                                                            int m_max) {
  if (!(a_lo >= 1.0) || !(a_hi > a_lo) || steps < 1 || m_max < 1) {
    throw InvalidParameter("invalid sweep for the lambda bound");
  }
  for (int i = 1; i <= steps; ++i) {
    const double a = a_lo + (a_hi - a_lo) * i / steps;
    for (int m = 1; m <= m_max; ++m) {
      if (!lambda_bound_holds(m, a)) return LambdaBoundFailure{a, m};
    }
  }
  return std::nullopt;
}

namespace printed {

namespace {
struct Sym {
  double md;
  double d;
  double L;
};
Sym sym(int m, double a) { return Sym{static_cast<double>(m), root_minus_one(m, a), std::log(a)}; }
}  // namespace

double e10(int m, double a, double x) {
  const auto [md, d, L] = sym(m, a);
  return x * L / (md * d);
}

double e20(int m, double a, double x) {
  const auto [md, d, L] = sym(m, a);
  return x * L * (d + x * L) / (md * md * d * d);
}

double c1(int m, double a, double x) {
  // m a^{1/m} - log a - m, with a^{1/m} = 1 + d
  const auto [md, d, L] = sym(m, a);
  return -x * (md * (1.0 + d) - L - md) / (md * d);
}

double c2(int m, double a, double x) {
  const auto [md, d, L] = sym(m, a);
  return x * (md * md * x * d * d - d * L * (2.0 * md * x - 1.0) + x * L * L) / (md * md * d * d);
}

double c4(int m, double a, double x) {
  const auto [md, d, L] = sym(m, a);
  const double m2 = md * md;
  const double m3 = m2 * md;
  const double m4 = m2 * m2;
  const double x2 = x * x;
  const double x3 = x2 * x;
  const double d2 = d * d;
  const double d3 = d2 * d;
  const double d4 = d2 * d2;
  const double body = m4 * x3 * d4 - d3 * (-1.0 + 4.0 * md * x - 6.0 * m2 * x2 + 4.0 * m3 * x3) * L +
                      d2 * x * (7.0 - 12.0 * md * x + 6.0 * m2 * x2) * L * L -
                      2.0 * d * x2 * (-3.0 + 2.0 * md * x) * L * L * L + x3 * L * L * L * L;
  return x / (m4 * d4) * body;
}

double mixed_self(int m, double a, double x) {
  const auto [md, d, L] = sym(m, a);
  const double inner = d * d * (md * x - 1.0) * (md * x - 1.0) - x * d * L * (2.0 * md * x - 5.0) +
                       x * x * L * L;
  return x * L * inner / (d * d * d * md * md * md * md);
}

double mixed_cross(int m, double a, double x, double y) {
  const auto [md, d, L] = sym(m, a);
  const double inner = md * md * y * d * d - d * L * (2.0 * md * y - 1.0) + y * L * L;
  return x * y * L / (md * md * md * md * d * d * d) * inner;
}

}  // namespace printed

}  // namespace bisz
