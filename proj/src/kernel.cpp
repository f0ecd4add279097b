#include "bisz/kernel.hpp"
#include "bisz/summation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "bisz/error.hpp"

namespace bisz {

namespace {

// Below this u = log(a)/m the series for u / expm1(u) is used.
constexpr double kLambdaSeriesCutoff = 1e-6;

void check_base(int m, double a) {
  if (m < 1) {
    throw InvalidParameter("series index must be >= 1, got " + std::to_string(m));
  }
  if (!(a > 1.0) || !std::isfinite(a)) {
    throw InvalidParameter("base a must be a finite real > 1, got " + std::to_string(a));
  }
}

}  // namespace

OperatorParams::OperatorParams(int m, int n, double a) : m_(m), n_(n), a_(a) {
  check_base(m, a);
  check_base(n, a);
}

double root_minus_one(int m, double a) {
  check_base(m, a);
  return std::expm1(std::log(a) / m);
}

double lambda(int m, double a) {
  check_base(m, a);
  const double u = std::log(a) / m;
  if (u < kLambdaSeriesCutoff) {
    return 1.0 - u / 2.0 + u * u / 12.0;
  }
  return u / std::expm1(u);
}

double poisson_mean(int m, double a, double x) {
  if (!(x >= 0.0)) {
    throw InvalidParameter("evaluation point must be >= 0");
  }
  return x * std::log(a) / root_minus_one(m, a);
}

KernelFactors kernel_factors(const OperatorParams& params, double x, double y) {
  return KernelFactors{lambda(params.m(), params.a()), poisson_mean(params.m(), params.a(), x),
                       lambda(params.n(), params.a()), poisson_mean(params.n(), params.a(), y)};
}

namespace {

// e^{-mu} mu^k / k! as a plain value when representable; std::nullopt otherwise.
std::optional<double> poisson_pmf(std::int64_t k, double mu) {
  if (k < 0) throw InvalidParameter("Poisson index must be >= 0");
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw InvalidParameter("Poisson mean must be finite and >= 0");
  if (mu == 0.0) return k == 0 ? 1.0 : 0.0;
  const double p = boost::math::gamma_p_derivative(static_cast<double>(k) + 1.0, mu);
  if (p >= 1e-290) return p;
  return std::nullopt;
}

double log_weight_lgamma(std::int64_t k, double mu) {
  const double kd = static_cast<double>(k);
  return kd * std::log(mu) - mu - std::lgamma(kd + 1.0);
}

}  // namespace

double log_weight_1d(std::int64_t k, double mu) {
  if (const auto p = poisson_pmf(k, mu)) {
    return *p == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(*p);
  }
  return log_weight_lgamma(k, mu);
}

double kernel_weight(const OperatorParams& params, std::int64_t k1, std::int64_t k2, double x,
                     double y) {
  const auto f = kernel_factors(params, x, y);
  const auto p1 = poisson_pmf(k1, f.mu_x);
  const auto p2 = poisson_pmf(k2, f.mu_y);
  if (p1 && p2) return *p1 * *p2;
  return std::exp(log_weight_1d(k1, f.mu_x) + log_weight_1d(k2, f.mu_y));
}

double poisson_raw_moment(int r, double mu) {
  constexpr int kMax = 24;
  if (r < 0 || r > kMax) {
    throw InvalidParameter("raw moment order out of range: " + std::to_string(r));
  }
  // Stirling numbers of the second kind S(r, j).
  std::array<std::array<double, kMax + 1>, kMax + 1> s{};
  s[0][0] = 1.0;
  for (int i = 1; i <= r; ++i) {
    for (int j = 1; j <= i; ++j) {
      s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
    }
  }
  // Horner in mu over j = r..1.
  double acc = 0.0;
  for (int j = r; j >= 1; --j) {
    acc = (acc + s[r][j]) * mu;
  }
  return r == 0 ? 1.0 : acc;
}

double poisson_lower_tail(std::int64_t k, double mu) {
  if (k <= 0) return 0.0;
  if (mu == 0.0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(k), mu);
}

double poisson_upper_tail(std::int64_t k, double mu) {
  if (k < 0) return 1.0;
  if (mu == 0.0) return 0.0;
  return boost::math::gamma_p(static_cast<double>(k + 1), mu);
}

PoissonWindow poisson_window(double mu, double spread) {
  PoissonWindow win;
  win.mu = mu;
  if (mu == 0.0) {
    win.weights = {1.0};
    return win;
  }
  const double half = spread * std::sqrt(mu + 1.0) + 20.0;
  win.first = static_cast<std::int64_t>(std::max(0.0, std::floor(mu - half)));
  win.last = static_cast<std::int64_t>(std::ceil(mu + half));
  win.mass_below = poisson_lower_tail(win.first, mu);
  win.mass_above = poisson_upper_tail(win.last, mu);

  // Shape by ratio recurrence outward from the mode, then scale to the exact
  // in-window mass. exp(log_weight_1d) alone carries |log w| * eps relative error.
  win.weights.assign(static_cast<std::size_t>(win.size()), 0.0);
  const std::int64_t mode = std::clamp(static_cast<std::int64_t>(std::floor(mu)), win.first, win.last);
  const auto at = [&](std::int64_t k) -> double& { return win.weights[static_cast<std::size_t>(k - win.first)]; };
  at(mode) = 1.0;
  for (std::int64_t k = mode + 1; k <= win.last; ++k) at(k) = at(k - 1) * (mu / static_cast<double>(k));
  for (std::int64_t k = mode - 1; k >= win.first; --k) at(k) = at(k + 1) * (static_cast<double>(k + 1) / mu);
  CompensatedSum total;
  for (const double w : win.weights) total += w;
  const double scale = (1.0 - win.omitted_mass()) / total.value();
  for (double& w : win.weights) w *= scale;
  return win;
}

}  // namespace bisz
