#include "bisz/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include <boost/math/quadrature/gauss.hpp>

#include "bisz/error.hpp"
#include "bisz/kernel.hpp"
#include "bisz/moments.hpp"

namespace bisz {

namespace {

double grid_coord(double lo, double hi, int i, int n) { return lo + (hi - lo) * i / (n - 1); }

void check_grid(int grid_n) {
  if (grid_n < 2) throw InvalidParameter("grid needs at least 2 points per axis");
}

}  // namespace

double WeightSpace::weight(double x, double y) const { return weight_1d(n1, x) * weight_1d(n2, y); }

void WeightSpace::validate() const {
  if (n1 < 0 || n2 < 0) throw InvalidParameter("weight exponents must be >= 0");
  if (!(x_max > 0.0) || !(y_max > 0.0)) throw InvalidParameter("domain cap must be > 0");
}

double weighted_sup_norm(const BivariateFn& f, const WeightSpace& ws, int grid_n) {
  ws.validate();
  check_grid(grid_n);
  double sup = 0.0;
  for (int i = 0; i < grid_n; ++i) {
    const double x = grid_coord(0.0, ws.x_max, i, grid_n);
    for (int j = 0; j < grid_n; ++j) {
      const double y = grid_coord(0.0, ws.y_max, j, grid_n);
      sup = std::max(sup, ws.weight(x, y) * std::fabs(f(x, y)));
    }
  }
  return sup;
}

ModulusEstimate modulus(const BivariateFn& f, const WeightSpace& ws, double delta1, double delta2,
                        int grid_n, int shift_samples) {
  ws.validate();
  check_grid(grid_n);
  if (!(delta1 > 0.0) || !(delta2 > 0.0)) throw InvalidParameter("modulus deltas must be > 0");
  if (shift_samples < 2) throw InvalidParameter("need at least 2 shift samples");

  // f and w on the base grid are shared by every shift.
  std::vector<double> xs(static_cast<std::size_t>(grid_n));
  std::vector<double> ys(static_cast<std::size_t>(grid_n));
  for (int i = 0; i < grid_n; ++i) {
    xs[i] = grid_coord(0.0, ws.x_max, i, grid_n);
    ys[i] = grid_coord(0.0, ws.y_max, i, grid_n);
  }
  std::vector<double> base(xs.size() * ys.size());
  std::vector<double> weight(base.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      base[i * ys.size() + j] = f(xs[i], ys[j]);
      weight[i * ys.size() + j] = ws.weight(xs[i], ys[j]);
    }
  }

  double sup = 0.0;
  for (int a = 0; a < shift_samples; ++a) {
    const double h1 = delta1 * a / (shift_samples - 1);
    for (int b = 0; b < shift_samples; ++b) {
      const double h2 = delta2 * b / (shift_samples - 1);
      if (a == 0 && b == 0) continue;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ys.size(); ++j) {
          const std::size_t k = i * ys.size() + j;
          sup = std::max(sup, weight[k] * std::fabs(f(xs[i] + h1, ys[j] + h2) - base[k]));
        }
      }
    }
  }
  return ModulusEstimate{delta1, delta2, sup, grid_n, shift_samples};
}

BivariateFn steklov(const BivariateFn& f, double h1, double h2) {
  if (!(h1 > 0.0) || !(h2 > 0.0)) throw InvalidParameter("Steklov steps must be > 0");
  using Rule = boost::math::quadrature::gauss<double, 16>;
  // Nodes and weights mapped to [0, 1]; the rule stores the positive half.
  std::array<double, 16> node{};
  std::array<double, 16> wt{};
  const auto& abs = Rule::abscissa();
  const auto& w = Rule::weights();
  for (std::size_t i = 0; i < abs.size(); ++i) {
    node[2 * i] = 0.5 * (1.0 - abs[i]);
    node[2 * i + 1] = 0.5 * (1.0 + abs[i]);
    wt[2 * i] = 0.5 * w[i];
    wt[2 * i + 1] = 0.5 * w[i];
  }
  std::ostringstream label;
  label << "steklov(" << f.label() << ", " << h1 << ", " << h2 << ")";
  return BivariateFn(
      label.str(),
      [f, node, wt, h1, h2](double x, double y) {
        double acc = 0.0;
        for (std::size_t i = 0; i < node.size(); ++i) {
          double row = 0.0;
          for (std::size_t j = 0; j < node.size(); ++j) {
            row += wt[j] * f(x + h1 * node[i], y + h2 * node[j]);
          }
          acc += wt[i] * row;
        }
        return acc;
      },
      f.growth());
}

const ReferenceTable1& reference_table1() {
  static const ReferenceTable1 table{
      {5, 15, 35, 50, 80, 120, 275, 350, 500},
      {{.1, .1}, {.1, .3}, {.1, .6}, {.2, .1}, {.2, .4}, {.3, .4},
       {.6, .2}, {.7, .8}, {.8, .7}, {.9, .3}, {.9, .9}},
      {
          {.000542559, .000183666, .0000790616, .000055398, .0000346538, .0000231137,
           .0000100915, 7.92971e-6, 5.55135e-6},
          {.00162768, .000550997, .000237185, .000166194, .000103961, .0000693411, .0000302744,
           .0000237891, .0000166541},
          {.00325536, .00110199, .00047437, .000332388, .000207923, .000138682, .0000605487,
           .0000475783, .0000333081},
          {.00108512, .000367331, .000158123, .000110796, .0000693076, .0000462274, .0000201829,
           .0000158594, .0000111027},
          {.00434047, .00146933, .000632493, .000443184, .000277231, .000184909, .0000807316,
           .0000634377, .0000444108},
          {.00651071, .00220399, .000948739, .000664776, .000415846, .000277364, .000121097,
           .0000951566, .0000666162},
          {.00651071, .00220399, .000948739, .000664776, .000415846, .000277364, .000121097,
           .0000951566, .0000666162},
          {.0303833, .0102853, .00442745, .00310229, .00194061, .00129437, .000565121, .000444064,
           .000310876},
          {.0303833, .0102853, .00442745, .00310229, .00194061, .00129437, .000565121, .000444064,
           .000310876},
          {.0146491, .00495897, .00213466, .00149575, .000935653, .00062407, .000272469,
           .000214102, .000149886},
          {.0439473, .0148769, .00640399, .00448724, .00280696, .00187221, .000817408, .000642307,
           .000449659},
      }};
  return table;
}

const ReferenceTable2& reference_table2() {
  static const ReferenceTable2 table{
      {3, 13, 23, 33, 53, 103, 163, 333, 543},
      {0.219254, 0.0521816, 0.0296115, 0.0206706, 0.0128878, 0.00663879, 0.00419684, 0.00205507,
       0.00126047},
      {0.235444, 0.0541361, 0.0305841, 0.0213122, 0.0132677, 0.00682619, 0.00431326, 0.0021112,
       0.00129469}};
  return table;
}

double table1_closed_form(double x, double y, int m, double a) {
  const double l = lambda(m, a);
  return x * y * (1.0 - l * l);
}

std::pair<double, double> table2_closed_form(double x, double y, int m, double a) {
  const double md = m;
  auto f = [](double t, double s) { return t * t * t * s + 6.0 * s * s + t * t; };
  auto image = [&](double mux, double muy) {
    const double t2 = poisson_raw_moment(2, mux) / (md * md);
    const double t3 = poisson_raw_moment(3, mux) / (md * md * md);
    const double s1 = muy / md;
    const double s2 = poisson_raw_moment(2, muy) / (md * md);
    return t3 * s1 + 6.0 * s2 + t2;
  };
  const double yhat = image(poisson_mean(m, a, x), poisson_mean(m, a, y));
  const double szasz = image(md * x, md * y);
  return {yhat - f(x, y), szasz - f(x, y)};
}

RecoveredPoint recover_table2_point(double a, double tolerance) {
  const auto& ref = reference_table2();
  const int m_first = ref.ms[0];
  const int m_second = ref.ms[1];

  auto validate = [&](double x, double y) {
    RecoveredPoint p{x, y, 0.0, 0.0};
    for (std::size_t i = 0; i < ref.ms.size(); ++i) {
      const auto [ey, es] = table2_closed_form(x, y, ref.ms[i], a);
      p.max_rel_dev_yhat = std::max(p.max_rel_dev_yhat, std::fabs(std::fabs(ey) / ref.yhat[i] - 1.0));
      p.max_rel_dev_szasz =
          std::max(p.max_rel_dev_szasz, std::fabs(std::fabs(es) / ref.szasz[i] - 1.0));
    }
    return p;
  };

  std::optional<RecoveredPoint> best;
  for (const double s1 : {1.0, -1.0}) {
    for (const double s2 : {1.0, -1.0}) {
      auto residual = [&](double x, double y) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        if (!(x >= 0.0) || !(y >= 0.0)) return std::array<double, 2>{inf, inf};
        return std::array<double, 2>{
            table2_closed_form(x, y, m_first, a).first - s1 * ref.yhat[0],
            table2_closed_form(x, y, m_second, a).first - s2 * ref.yhat[1]};
      };
      auto norm = [](const std::array<double, 2>& r) {
        return std::max(std::fabs(r[0]), std::fabs(r[1]));
      };
      for (int gi = 0; gi < 20; ++gi) {
        for (int gj = 0; gj < 20; ++gj) {
          double x = 0.05 + 0.1 * gi;
          double y = 0.05 + 0.1 * gj;
          auto r = residual(x, y);
          for (int iter = 0; iter < 60 && norm(r) > 1e-15; ++iter) {
            constexpr double h = 1e-7;
            const auto rxp = residual(x + h, y);
            const auto rxm = residual(x - h, y);
            const auto ryp = residual(x, y + h);
            const auto rym = residual(x, y - h);
            const double j00 = (rxp[0] - rxm[0]) / (2 * h);
            const double j10 = (rxp[1] - rxm[1]) / (2 * h);
            const double j01 = (ryp[0] - rym[0]) / (2 * h);
            const double j11 = (ryp[1] - rym[1]) / (2 * h);
            const double det = j00 * j11 - j01 * j10;
            if (!std::isfinite(det) || std::fabs(det) < 1e-300) break;
            const double dx = (j11 * r[0] - j01 * r[1]) / det;
            const double dy = (-j10 * r[0] + j00 * r[1]) / det;
            double step = 1.0;
            bool moved = false;
            for (int k = 0; k < 40; ++k, step *= 0.5) {
              const double nx = x - step * dx;
              const double ny = y - step * dy;
              const auto nr = residual(nx, ny);
              if (std::isfinite(nr[0]) && std::isfinite(nr[1]) && norm(nr) < norm(r)) {
                x = nx;
                y = ny;
                r = nr;
                moved = true;
                break;
              }
            }
            if (!moved) break;
          }
          if (!(x >= 0.0) || !(y >= 0.0) || norm(r) > 1e-10) continue;
          const auto cand = validate(x, y);
          const double score = std::max(cand.max_rel_dev_yhat, cand.max_rel_dev_szasz);
          if (!best || score < std::max(best->max_rel_dev_yhat, best->max_rel_dev_szasz)) {
            best = cand;
          }
        }
      }
    }
  }
  if (!best || best->max_rel_dev_yhat > tolerance || best->max_rel_dev_szasz > tolerance) {
    std::ostringstream os;
    os << "table2 point recovery failed for a = " << a;
    if (best) {
      os << ": best candidate (" << best->x << ", " << best->y << ") deviates by "
         << std::max(best->max_rel_dev_yhat, best->max_rel_dev_szasz);
    }
    throw Error(os.str());
  }
  return *best;
}

ErrorTable error_table(TablePreset preset, double a,
                       std::optional<std::pair<double, double>> point_override,
                       const EvalConfig& cfg) {
  if (!(a > 1.0)) throw InvalidParameter("a must be > 1");
  ErrorTable table;
  table.preset = preset;
  table.a = a;

  if (preset == TablePreset::Table1) {
    const auto& ref = reference_table1();
    table.ms = ref.ms;
    const BivariateFn f = builtin("xy");
    std::vector<std::pair<double, double>> points = ref.points;
    table.point_provenance = "grid";
    if (point_override) {
      points = {*point_override};
      table.point_provenance = "given";
    }
    for (const auto& [x, y] : points) {
      TableRow row{x, y, {}, {}};
      for (const int m : table.ms) {
        const double v = apply_yhat(OperatorParams(m, m, a), f, x, y, cfg).value;
        row.error_yhat.push_back(std::fabs(v - f(x, y)));
      }
      table.rows.push_back(std::move(row));
    }
    return table;
  }

  const auto& ref = reference_table2();
  table.ms = ref.ms;
  double x = 0.0;
  double y = 0.0;
  if (point_override) {
    std::tie(x, y) = *point_override;
    table.point_provenance = "given";
  } else {
    table.recovery = recover_table2_point(a);
    x = table.recovery->x;
    y = table.recovery->y;
    table.point_provenance = "recovered";
  }
  const BivariateFn f = builtin("t2-poly");
  TableRow row{x, y, {}, {}};
  for (const int m : table.ms) {
    const double fy = apply_yhat(OperatorParams(m, m, a), f, x, y, cfg).value;
    const double fs = apply_szasz(m, m, f, x, y, cfg).value;
    row.error_yhat.push_back(std::fabs(fy - f(x, y)));
    row.error_szasz.push_back(std::fabs(fs - f(x, y)));
  }
  table.rows.push_back(std::move(row));
  return table;
}

double voronovskaya_limit(double x, double y, double a, double fx, double fy, double fxx,
                          double fyy) {
  const double L = std::log(a);
  return -(x * L / 2.0) * fx - (y * L / 2.0) * fy + (x / 2.0) * fxx + (y / 2.0) * fyy;
}

OrderFit order_fit(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3) throw InvalidParameter("order fit needs at least 3 samples");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [m, err] : samples) {
    if (!(m > 0.0) || !(err > 0.0) || !std::isfinite(err)) {
      throw InvalidParameter("order fit needs positive m and positive finite errors");
    }
    const double lx = std::log(m);
    const double ly = std::log(err);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(samples.size());
  const double denom = n * sxx - sx * sx;
  if (!(denom > 1e-12 * n * sxx)) throw InvalidParameter("order fit needs distinct m values");
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;
  return OrderFit{-slope, std::exp(intercept)};
}

VoronovskayaReport voronovskaya_check(const BivariateFn& f, double x, double y, double a,
                                      const std::vector<int>& m_list, const EvalConfig& cfg) {
  if (!(x >= 0.0) || !(y >= 0.0)) throw InvalidParameter("point must satisfy x, y >= 0");
  if (!(a > 1.0)) throw InvalidParameter("a must be > 1");
  if (m_list.empty()) throw InvalidParameter("m list is empty");

  VoronovskayaReport report;
  double fx, fy, fxx, fyy;
  if (f.partials()) {
    const auto& p = *f.partials();
    fx = p.fx(x, y);
    fy = p.fy(x, y);
    fxx = p.fxx(x, y);
    fyy = p.fyy(x, y);
    report.exact_partials = true;
  } else {
    constexpr double h = 1e-4;
    const double f0 = f(x, y);
    auto first = [&](double p, auto at) {
      return p >= h ? (at(p + h) - at(p - h)) / (2 * h) : (at(p + h) - at(p)) / h;
    };
    auto second = [&](double p, auto at) {
      return p >= h ? (at(p + h) - 2 * f0 + at(p - h)) / (h * h)
                    : (at(p + 2 * h) - 2 * at(p + h) + f0) / (h * h);
    };
    auto along_x = [&](double v) { return f(v, y); };
    auto along_y = [&](double v) { return f(x, v); };
    fx = first(x, along_x);
    fy = first(y, along_y);
    fxx = second(x, along_x);
    fyy = second(y, along_y);
  }
  report.limit = voronovskaya_limit(x, y, a, fx, fy, fxx, fyy);

  const double f0 = f(x, y);
  std::vector<std::pair<double, double>> fit;
  bool fittable = m_list.size() >= 3;
  for (const int m : m_list) {
    const double v = apply_yhat(OperatorParams(m, m, a), f, x, y, cfg).value;
    VoronovskayaRecord rec{m, m * (v - f0), 0.0};
    rec.residual = std::fabs(rec.scaled - report.limit);
    if (!(rec.residual > 0.0)) fittable = false;
    fit.emplace_back(m, rec.residual);
    report.records.push_back(rec);
  }
  report.order = fittable ? order_fit(fit).order : std::numeric_limits<double>::quiet_NaN();
  return report;
}

std::vector<GridRecord> comparison_grid(const BivariateFn& f, const OperatorParams& params,
                                        const Domain& domain, int steps, const EvalConfig& cfg) {
  check_grid(steps);
  if (!(domain.x0 >= 0.0) || !(domain.y0 >= 0.0) || !(domain.x1 >= domain.x0) ||
      !(domain.y1 >= domain.y0)) {
    throw InvalidParameter("domain must lie in [0, inf)^2 with x0 <= x1, y0 <= y1");
  }
  std::vector<GridRecord> out;
  out.reserve(static_cast<std::size_t>(steps) * steps);
  for (int i = 0; i < steps; ++i) {
    const double x = grid_coord(domain.x0, domain.x1, i, steps);
    for (int j = 0; j < steps; ++j) {
      const double y = grid_coord(domain.y0, domain.y1, j, steps);
      GridRecord r;
      r.x = x;
      r.y = y;
      r.f = f(x, y);
      r.yhat = apply_yhat(params, f, x, y, cfg).value;
      r.szasz = apply_szasz(params.m(), params.n(), f, x, y, cfg).value;
      r.error_yhat = std::fabs(r.yhat - r.f);
      r.error_szasz = std::fabs(r.szasz - r.f);
      out.push_back(r);
    }
  }
  return out;
}

double derivative_bound_ratio(const BivariateFn& f, const OperatorParams& params,
                              const WeightSpace& ws, double x, double y, const EvalConfig& cfg) {
  if (!f.partials()) throw InvalidParameter("derivative bound ratio needs exact partials");
  const auto& p = *f.partials();
  const double nx = weighted_sup_norm(BivariateFn("f_x", p.fx), ws);
  const double ny = weighted_sup_norm(BivariateFn("f_y", p.fy), ws);
  const auto dp = delta_prime(params, x, y);
  const double denom = nx * dp.dm + ny * dp.dn;
  const double err = ws.weight(x, y) * std::fabs(apply_yhat(params, f, x, y, cfg).value - f(x, y));
  if (denom == 0.0) return err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return err / denom;
}

}  // namespace bisz
