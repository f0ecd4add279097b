#include "bisz/deriv.hpp"

#include <algorithm>
#include <cmath>

#include "bisz/error.hpp"

namespace bisz {

namespace {

enum class Axis { X, Y };

// f multiplied by the lattice coordinate of one axis. For f in C_{N1,N2} the
// product lies in C_{N1+1,N2} with constant at most 2 C_f.
BivariateFn times_coordinate(const BivariateFn& f, Axis axis) {
  std::optional<Growth> growth;
  std::optional<double> constant;
  if (f.growth()) {
    growth = *f.growth();
    (axis == Axis::X ? growth->n1 : growth->n2) += 1;
    constant = 2.0 * f.growth_constant();
  }
  if (axis == Axis::X) {
    return BivariateFn(
        "t*(" + f.label() + ")", [f](double t, double s) { return t * f(t, s); }, growth,
        std::nullopt, constant);
  }
  return BivariateFn(
      "s*(" + f.label() + ")", [f](double t, double s) { return s * f(t, s); }, growth,
      std::nullopt, constant);
}

double fd(const OperatorParams& params, const BivariateFn& f, double x, double y, double h,
          const EvalConfig& cfg, Axis axis) {
  if (!(h > 0.0)) throw InvalidParameter("finite-difference step must be > 0");
  const double p = axis == Axis::X ? x : y;
  auto at = [&](double v) {
    return axis == Axis::X ? apply_yhat(params, f, v, y, cfg).value
                           : apply_yhat(params, f, x, v, cfg).value;
  };
  if (p - h < 0.0) return (at(p + h) - at(p)) / h;
  return (at(p + h) - at(p - h)) / (2.0 * h);
}

DerivResult derivative(const OperatorParams& params, const BivariateFn& f, double x, double y,
                       const EvalConfig& cfg, Axis axis) {
  if (!(x >= 0.0) || !(y >= 0.0)) throw InvalidParameter("derivative requires x >= 0, y >= 0");
  const double p = axis == Axis::X ? x : y;
  if (p < kIdentitySwitch) {
    const double h = std::max(1e-6, p / 2.0);
    return DerivResult{fd(params, f, x, y, h, cfg, axis), DerivMethod::FiniteDifference, h};
  }
  const int k = axis == Axis::X ? params.m() : params.n();
  const double rate = std::log(params.a()) / root_minus_one(k, params.a());
  EvalConfig tight = cfg;
  tight.tail_tol = cfg.tail_tol * 1e-2;
  const double base = apply_yhat(params, f, x, y, tight).value;
  const double moment = apply_yhat(params, times_coordinate(f, axis), x, y, tight).value;
  return DerivResult{-rate * base + (k / p) * moment, DerivMethod::Identity, std::nullopt};
}

}  // namespace

DerivResult dx_yhat(const OperatorParams& params, const BivariateFn& f, double x, double y,
                    const EvalConfig& cfg) {
  return derivative(params, f, x, y, cfg, Axis::X);
}

DerivResult dy_yhat(const OperatorParams& params, const BivariateFn& f, double x, double y,
                    const EvalConfig& cfg) {
  return derivative(params, f, x, y, cfg, Axis::Y);
}

double finite_difference_dx(const OperatorParams& params, const BivariateFn& f, double x, double y,
                            double h, const EvalConfig& cfg) {
  return fd(params, f, x, y, h, cfg, Axis::X);
}

double finite_difference_dy(const OperatorParams& params, const BivariateFn& f, double x, double y,
                            double h, const EvalConfig& cfg) {
  return fd(params, f, x, y, h, cfg, Axis::Y);
}

}  // namespace bisz
