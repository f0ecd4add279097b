#pragma once

#include <cstdint>
#include <vector>

namespace bisz {

/// Series indices (m, n) and the fixed base a > 1 of the operator.
class OperatorParams {
 public:
  /// Throws InvalidParameter unless m >= 1, n >= 1 and a > 1.
  OperatorParams(int m, int n, double a);

  int m() const noexcept { return m_; }
  int n() const noexcept { return n_; }
  double a() const noexcept { return a_; }

 private:
  int m_;
  int n_;
  double a_;
};

/// a^{1/m} - 1, computed without cancellation.
double root_minus_one(int m, double a);

/// log(a) / (m (a^{1/m} - 1)); lies in (0, 1) and increases to 1 with m.
double lambda(int m, double a);

/// Mean of the Poisson law behind the kernel: x log(a) / (a^{1/m} - 1).
double poisson_mean(int m, double a, double x);

struct KernelFactors {
  double lambda_m = 0.0;
  double mu_x = 0.0;
  double lambda_n = 0.0;
  double mu_y = 0.0;
};

KernelFactors kernel_factors(const OperatorParams& params, double x, double y);

/// log(mu^k e^{-mu} / k!). At mu == 0 this is 0 for k == 0 and -inf otherwise.
double log_weight_1d(std::int64_t k, double mu);

/// Kernel s^a_{m,n}(x, y) at lattice index (k1, k2).
double kernel_weight(const OperatorParams& params, std::int64_t k1, std::int64_t k2,
                     double x, double y);

/// E[K^r] for K ~ Poisson(mu), via Stirling numbers of the second kind.
double poisson_raw_moment(int r, double mu);

/// P(K < k) and P(K > k) for K ~ Poisson(mu).
double poisson_lower_tail(std::int64_t k, double mu);
double poisson_upper_tail(std::int64_t k, double mu);

/// Contiguous block of Poisson weights w[k - first] for k in [first, last].
struct PoissonWindow {
  std::int64_t first = 0;
  std::int64_t last = 0;
  double mu = 0.0;
  std::vector<double> weights;
  double mass_below = 0.0;  // P(K < first)
  double mass_above = 0.0;  // P(K > last)

  double omitted_mass() const noexcept { return mass_below + mass_above; }
  std::int64_t size() const noexcept { return last - first + 1; }
};

/// Window mu +- (spread * sqrt(mu + 1) + 20), clipped at 0. mu == 0 gives the
/// exact point mass at k = 0.
PoissonWindow poisson_window(double mu, double spread);

}  // namespace bisz
