#pragma once

#include <optional>

#include "bisz/operator.hpp"

namespace bisz {

enum class DerivMethod { Identity, FiniteDifference };

struct DerivResult {
  double value = 0.0;
  DerivMethod method = DerivMethod::Identity;
  std::optional<double> step;  // set for FiniteDifference
};

/// Below this distance from the axis the identity's m/x factor is replaced by
/// a finite difference of the operator.
inline constexpr double kIdentitySwitch = 1e-4;

/// d/dx Yhat(f; x, y) = -(log a / (a^{1/m} - 1)) Yhat(f) + (m/x) Yhat(t f).
DerivResult dx_yhat(const OperatorParams& params, const BivariateFn& f, double x, double y,
                    const EvalConfig& cfg = {});

/// d/dy Yhat(f; x, y), the same identity on the second axis.
DerivResult dy_yhat(const OperatorParams& params, const BivariateFn& f, double x, double y,
                    const EvalConfig& cfg = {});

/// Central difference of apply_yhat in x with step h; forward when x < h.
double finite_difference_dx(const OperatorParams& params, const BivariateFn& f, double x, double y,
                            double h, const EvalConfig& cfg = {});
double finite_difference_dy(const OperatorParams& params, const BivariateFn& f, double x, double y,
                            double h, const EvalConfig& cfg = {});

}  // namespace bisz
