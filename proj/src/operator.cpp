#include "bisz/operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "bisz/error.hpp"
#include "bisz/summation.hpp"

namespace bisz {

namespace {

constexpr double kInitialSpread = 10.0;

void check_point(double x, double y) {
  if (!(x >= 0.0) || !(y >= 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
    throw InvalidParameter("evaluation point must satisfy x >= 0, y >= 0");
  }
}

PoissonWindow checked_window(double mu, double spread, const EvalConfig& cfg) {
  const double half = spread * std::sqrt(mu + 1.0) + 20.0;
  if (2.0 * half + 1.0 > static_cast<double>(cfg.max_terms_per_axis) && mu > 0.0) {
    std::ostringstream os;
    os << "truncation failure: tail bound not met within " << cfg.max_terms_per_axis
       << " terms per axis (mu = " << mu << ")";
    throw TruncationFailure(os.str());
  }
  return poisson_window(mu, spread);
}

// E[(1 + (K/m)^N)^p] for p = 1, 2.
double growth_moment(int m, double mu, int n, int p) {
  const double scale = std::pow(static_cast<double>(m), -n);
  const double e_n = poisson_raw_moment(n, mu) * scale;
  if (p == 1) return 1.0 + e_n;
  return 1.0 + 2.0 * e_n + poisson_raw_moment(2 * n, mu) * scale * scale;
}

[[noreturn]] void rethrow_at(const EvaluationError& e, double t, double s) {
  std::ostringstream os;
  os << e.what() << " at lattice point (" << t << ", " << s << ")";
  throw EvaluationError(e.span(), os.str());
}

}  // namespace

void EvalConfig::validate() const {
  if (!(tail_tol > 0.0)) throw InvalidParameter("tail_tol must be > 0");
  if (max_terms_per_axis < 1) throw InvalidParameter("max_terms_per_axis must be >= 1");
}

EvalResult lattice_expectation(int m, double mu_x, int n, double mu_y, const BivariateFn& f,
                               const EvalConfig& cfg) {
  cfg.validate();
  const auto& growth = f.growth();
  for (double spread = kInitialSpread;; spread *= 2.0) {
    const PoissonWindow wx = checked_window(mu_x, spread, cfg);
    const PoissonWindow wy = checked_window(mu_y, spread, cfg);

    CompensatedSum acc;
    double boundary = 0.0;
    for (std::int64_t i = 0; i < wx.size(); ++i) {
      const std::int64_t k1 = wx.first + i;
      const double t = static_cast<double>(k1) / m;
      const double w1 = wx.weights[static_cast<std::size_t>(i)];
      const bool edge_row = (i == 0 || i + 1 == wx.size());
      for (std::int64_t j = 0; j < wy.size(); ++j) {
        const std::int64_t k2 = wy.first + j;
        const double s = static_cast<double>(k2) / n;
        double v;
        try {
          v = f(t, s);
        } catch (const EvaluationError& e) {
          rethrow_at(e, t, s);
        }
        acc += w1 * wy.weights[static_cast<std::size_t>(j)] * v;
        if (edge_row || j == 0 || j + 1 == wy.size()) boundary = std::max(boundary, std::fabs(v));
      }
    }

    double tail = 0.0;
    if (growth) {
      // Cauchy-Schwarz on each omitted strip with exact Poisson moments.
      const double c = f.growth_constant();
      const double tx = wx.omitted_mass();
      const double ty = wy.omitted_mass();
      if (tx > 0.0) {
        tail += c * std::sqrt(tx) * std::sqrt(growth_moment(m, mu_x, growth->n1, 2)) *
                growth_moment(n, mu_y, growth->n2, 1);
      }
      if (ty > 0.0) {
        tail += c * std::sqrt(ty) * std::sqrt(growth_moment(n, mu_y, growth->n2, 2)) *
                growth_moment(m, mu_x, growth->n1, 1);
      }
    } else {
      tail = (wx.omitted_mass() + wy.omitted_mass()) * boundary;
    }
    if (tail <= cfg.tail_tol) {
      return EvalResult{acc.value(), wx.last, wy.last, tail};
    }
  }
}

EvalResult lattice_expectation_1d(int m, double mu, const Fn1& f, const EvalConfig& cfg) {
  cfg.validate();
  for (double spread = kInitialSpread;; spread *= 2.0) {
    const PoissonWindow w = checked_window(mu, spread, cfg);
    CompensatedSum acc;
    double boundary = 0.0;
    for (std::int64_t i = 0; i < w.size(); ++i) {
      const double t = static_cast<double>(w.first + i) / m;
      double v;
      try {
        v = f(t);
      } catch (const EvaluationError& e) {
        rethrow_at(e, t, 0.0);
      }
      acc += w.weights[static_cast<std::size_t>(i)] * v;
      if (i == 0 || i + 1 == w.size()) boundary = std::max(boundary, std::fabs(v));
    }
    const double tail = w.omitted_mass() * boundary;
    if (tail <= cfg.tail_tol) {
      return EvalResult{acc.value(), w.last, 0, tail};
    }
  }
}

EvalResult apply_yhat(const OperatorParams& params, const BivariateFn& f, double x, double y,
                      const EvalConfig& cfg) {
  check_point(x, y);
  const auto k = kernel_factors(params, x, y);
  return lattice_expectation(params.m(), k.mu_x, params.n(), k.mu_y, f, cfg);
}

EvalResult apply_szasz(int m, int n, const BivariateFn& f, double x, double y,
                       const EvalConfig& cfg) {
  check_point(x, y);
  if (m < 1 || n < 1) throw InvalidParameter("series indices must be >= 1");
  return lattice_expectation(m, m * x, n, n * y, f, cfg);
}

EvalResult apply_univariate(int m, double a, const Fn1& f1, double x, const EvalConfig& cfg) {
  check_point(x, 0.0);
  return lattice_expectation_1d(m, poisson_mean(m, a, x), f1, cfg);
}

EvalResult apply_yhat_tensor(const OperatorParams& params, const Fn1& f1, const Fn1& f2, double x,
                             double y, const EvalConfig& cfg) {
  check_point(x, y);
  cfg.validate();
  EvalConfig sub = cfg;
  for (int attempt = 0; attempt < 8; ++attempt) {
    const auto rx = apply_univariate(params.m(), params.a(), f1, x, sub);
    const auto ry = apply_univariate(params.n(), params.a(), f2, y, sub);
    // |R1 R2 - r1 r2| <= e1 |r2| + e2 |r1| + e1 e2
    const double tail = rx.tail_bound * std::fabs(ry.value) + ry.tail_bound * std::fabs(rx.value) +
                        rx.tail_bound * ry.tail_bound;
    if (tail <= cfg.tail_tol) {
      return EvalResult{rx.value * ry.value, rx.k1_max, ry.k1_max, tail};
    }
    sub.tail_tol = sub.tail_tol * cfg.tail_tol / (2.0 * tail);
  }
  throw TruncationFailure("truncation failure: tensor product tail bound not met");
}

}  // namespace bisz
