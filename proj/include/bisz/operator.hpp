#pragma once

#include <cstdint>

#include "bisz/fnexpr.hpp"
#include "bisz/kernel.hpp"

namespace bisz {

enum class Summation { CompensatedAscending };

struct EvalConfig {
  double tail_tol = 1e-12;                     // absolute bound on the omitted series mass
  std::int64_t max_terms_per_axis = 1'000'000;
  Summation summation = Summation::CompensatedAscending;

  /// Throws InvalidParameter on a nonpositive tolerance or term cap.
  void validate() const;
};

struct EvalResult {
  double value = 0.0;
  std::int64_t k1_max = 0;
  std::int64_t k2_max = 0;
  double tail_bound = 0.0;  // <= tail_tol on success
};

/// E[f(K1/m, K2/n)] for independent K1 ~ Poisson(mu_x), K2 ~ Poisson(mu_y),
/// truncated to a window whose omitted contribution is bounded by tail_tol.
/// Rows are k1 ascending, inner loop k2 ascending, compensated accumulation.
EvalResult lattice_expectation(int m, double mu_x, int n, double mu_y, const BivariateFn& f,
                               const EvalConfig& cfg = {});

/// One-axis version of lattice_expectation.
EvalResult lattice_expectation_1d(int m, double mu, const Fn1& f, const EvalConfig& cfg = {});

/// Yhat_{m,n,a}(f; x, y).
EvalResult apply_yhat(const OperatorParams& params, const BivariateFn& f, double x, double y,
                      const EvalConfig& cfg = {});

/// Classical bivariate Szasz-Mirakjan operator S_{m,n}(f; x, y).
EvalResult apply_szasz(int m, int n, const BivariateFn& f, double x, double y,
                       const EvalConfig& cfg = {});

/// Yhat on f(t, s) = f1(t) f2(s) as a product of two univariate sums.
EvalResult apply_yhat_tensor(const OperatorParams& params, const Fn1& f1, const Fn1& f2, double x,
                             double y, const EvalConfig& cfg = {});

/// Univariate operator R_{m,a}(f1; x). k2_max is reported as 0.
EvalResult apply_univariate(int m, double a, const Fn1& f1, double x, const EvalConfig& cfg = {});

}  // namespace bisz
