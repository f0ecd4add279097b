#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bisz/analysis.hpp"
#include "bisz/deriv.hpp"
#include "bisz/error.hpp"
#include "bisz/moments.hpp"
#include "bisz/operator.hpp"
#include "output.hpp"

namespace bisz::cli {

namespace {

struct Common {
  std::string format = "csv";
  std::string output;
  int precision = 9;
  double tol = 1e-12;
  std::int64_t max_terms = 1'000'000;

  OutputSpec spec() const {
    OutputSpec s;
    s.format = format == "json" ? Format::Json : Format::Csv;
    s.path = output;
    s.precision = precision;
    return s;
  }

  EvalConfig config() const {
    EvalConfig c;
    c.tail_tol = tol;
    c.max_terms_per_axis = max_terms;
    return c;
  }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--output", c.output, "Write to this file instead of standard output");
  cmd->add_option("--precision", c.precision, "Significant digits")
      ->check(CLI::Range(1, 17))
      ->capture_default_str();
  cmd->add_option("--tol", c.tol, "Absolute tail tolerance of the series")->capture_default_str();
  cmd->add_option("--max-terms", c.max_terms, "Maximum series terms per axis")
      ->capture_default_str();
}

std::vector<double> parse_reals(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw InvalidParameter(std::string("malformed ") + what + ": '" + text + "'");
    }
    out.push_back(v);
  }
  if (expected != 0 && out.size() != expected) {
    throw InvalidParameter(std::string("expected ") + std::to_string(expected) + " values for " +
                           what + ", got '" + text + "'");
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (const double v : parse_reals(text, 0, "m list")) {
    if (v != std::trunc(v) || v < 1 || v > std::numeric_limits<int>::max()) {
      throw InvalidParameter("m list entries must be positive integers: '" + text + "'");
    }
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw InvalidParameter("m list is empty");
  return out;
}

std::optional<std::pair<double, double>> parse_point(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto v = parse_reals(text, 2, "point X,Y");
  return std::make_pair(v[0], v[1]);
}

void emit(const RecordSet& records, const Common& c, std::ostream& out) {
  const auto spec = c.spec();
  const std::string text = records.render(spec);
  if (spec.path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(spec.path, std::ios::binary);
  if (!file) throw InvalidParameter("cannot open output file '" + spec.path + "'");
  file << text;
}

const char* preset_name(TablePreset p) { return p == TablePreset::Table1 ? "table1" : "table2"; }

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bivariate Szasz-Mirakjan type operators: evaluation, moments and error studies",
               "bisz"};
  app.require_subcommand(1);

  // eval
  Common eval_c;
  std::string eval_f, eval_op = "yhat";
  int eval_m = 0, eval_n = 0;
  double eval_a = 0.0, eval_x = 0.0, eval_y = 0.0;
  auto* eval = app.add_subcommand("eval", "Evaluate an operator at one point");
  eval->add_option("--f", eval_f, "Expression in x, y or builtin:NAME")->required();
  eval->add_option("--m", eval_m)->required();
  eval->add_option("--n", eval_n)->required();
  auto* eval_a_opt = eval->add_option("--a", eval_a, "Base a > 1 (yhat only)");
  eval->add_option("--x", eval_x)->required();
  eval->add_option("--y", eval_y)->required();
  eval->add_option("--operator", eval_op)->check(CLI::IsMember({"yhat", "szasz"}))->capture_default_str();
  add_common(eval, eval_c);

  // table
  Common table_c;
  std::string table_preset, table_point;
  double table_a = 0.0;
  auto* table = app.add_subcommand("table", "Reproduce an error table");
  table->add_option("--preset", table_preset)->required()->check(CLI::IsMember({"table1", "table2"}));
  auto* table_a_opt = table->add_option("--a", table_a, "Base (default 1.32 for table1, 1.30 for table2)");
  table->add_option("--point", table_point, "Evaluation point X,Y");
  add_common(table, table_c);

  // moments
  Common mom_c;
  int mom_m = 0, mom_n = 0;
  double mom_a = 0.0, mom_x = 0.0, mom_y = 0.0;
  auto* moments = app.add_subcommand("moments", "Closed-form moments at one point");
  moments->add_option("--m", mom_m)->required();
  moments->add_option("--n", mom_n)->required();
  moments->add_option("--a", mom_a)->required();
  moments->add_option("--x", mom_x)->required();
  moments->add_option("--y", mom_y)->required();
  add_common(moments, mom_c);

  // voronovskaya
  Common vor_c;
  std::string vor_f, vor_ms = "100,200,400,800";
  double vor_a = 0.0, vor_x = 0.0, vor_y = 0.0;
  auto* vor = app.add_subcommand("voronovskaya", "Scaled error m (Yhat f - f) against its limit");
  vor->add_option("--f", vor_f)->required();
  vor->add_option("--x", vor_x)->required();
  vor->add_option("--y", vor_y)->required();
  vor->add_option("--a", vor_a)->required();
  vor->add_option("--m-list", vor_ms, "Comma-separated m values (n = m)")->capture_default_str();
  add_common(vor, vor_c);

  // deriv
  Common der_c;
  std::string der_f, der_axis = "x";
  int der_m = 0, der_n = 0;
  double der_a = 0.0, der_x = 0.0, der_y = 0.0;
  auto* deriv = app.add_subcommand("deriv", "Partial derivative of Yhat f");
  deriv->add_option("--f", der_f)->required();
  deriv->add_option("--m", der_m)->required();
  deriv->add_option("--n", der_n)->required();
  deriv->add_option("--a", der_a)->required();
  deriv->add_option("--x", der_x)->required();
  deriv->add_option("--y", der_y)->required();
  deriv->add_option("--axis", der_axis)->check(CLI::IsMember({"x", "y"}))->capture_default_str();
  add_common(deriv, der_c);

  // grid
  Common grid_c;
  std::string grid_f, grid_domain = "0,1,0,1";
  int grid_m = 0, grid_n = 0, grid_steps = 11;
  double grid_a = 0.0;
  auto* grid = app.add_subcommand("grid", "Yhat and S errors on a grid");
  grid->add_option("--f", grid_f)->required();
  grid->add_option("--m", grid_m)->required();
  grid->add_option("--n", grid_n)->required();
  grid->add_option("--a", grid_a)->required();
  grid->add_option("--domain", grid_domain, "x0,x1,y0,y1")->capture_default_str();
  grid->add_option("--steps", grid_steps, "Points per axis")->capture_default_str();
  add_common(grid, grid_c);

  // order
  Common ord_c;
  std::string ord_preset, ord_point, ord_samples;
  bool ord_computed = false;
  double ord_a = 0.0;
  auto* order = app.add_subcommand("order", "Fit the decay order of an error column");
  order->add_option("--preset", ord_preset)->check(CLI::IsMember({"table1", "table2"}));
  order->add_option("--point", ord_point, "Row of the preset (table1)");
  order->add_option("--samples", ord_samples, "Explicit data m:err,m:err,...");
  order->add_flag("--computed", ord_computed, "Fit freshly computed errors instead of the reference values");
  auto* ord_a_opt = order->add_option("--a", ord_a, "Base used with --computed");
  add_common(order, ord_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*eval) {
      const BivariateFn f = function_from_spec(eval_f);
      const auto cfg = eval_c.config();
      const bool yhat = eval_op == "yhat";
      if (yhat && eval_a_opt->count() == 0) throw InvalidParameter("--a is required for yhat");
      const EvalResult r = yhat ? apply_yhat(OperatorParams(eval_m, eval_n, eval_a), f, eval_x, eval_y, cfg)
                                : apply_szasz(eval_m, eval_n, f, eval_x, eval_y, cfg);
      const double fv = f(eval_x, eval_y);
      RecordSet rs("eval", {"operator", "m", "n", "a", "x", "y", "value", "f",
                            yhat ? "error_yhat" : "error_szasz", "k1_max", "k2_max", "tail_bound"});
      rs.add_row({eval_op, std::int64_t{eval_m}, std::int64_t{eval_n},
                  yhat ? Cell{eval_a} : Cell{std::string()}, eval_x, eval_y, r.value, fv,
                  std::fabs(r.value - fv), r.k1_max, r.k2_max, r.tail_bound});
      rs.add_meta("function", f.label());
      emit(rs, eval_c, out);
    } else if (*table) {
      const TablePreset preset = table_preset == "table1" ? TablePreset::Table1 : TablePreset::Table2;
      const double a = table_a_opt->count() ? table_a
                                            : (preset == TablePreset::Table1 ? kTable1Base : kTable2Base);
      const ErrorTable t = error_table(preset, a, parse_point(table_point), table_c.config());
      const bool both = preset == TablePreset::Table2;
      std::vector<std::string> cols = {"x", "y", "m", "n", "a", "error_yhat"};
      if (both) cols.push_back("error_szasz");
      cols.push_back("point_source");
      RecordSet rs("table", cols);
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < t.ms.size(); ++i) {
          std::vector<Cell> cells = {row.x, row.y, std::int64_t{t.ms[i]}, std::int64_t{t.ms[i]}, t.a,
                                     row.error_yhat[i]};
          if (both) cells.emplace_back(row.error_szasz[i]);
          cells.emplace_back(t.point_provenance);
          rs.add_row(std::move(cells));
        }
      }
      rs.add_meta("preset", std::string(preset_name(preset)));
      rs.add_meta("a", t.a);
      rs.add_meta("point_source", t.point_provenance);
      if (t.recovery) {
        rs.add_meta("x", t.recovery->x);
        rs.add_meta("y", t.recovery->y);
        rs.add_meta("max_rel_dev_yhat", t.recovery->max_rel_dev_yhat);
        rs.add_meta("max_rel_dev_szasz", t.recovery->max_rel_dev_szasz);
      }
      emit(rs, table_c, out);
    } else if (*moments) {
      const OperatorParams p(mom_m, mom_n, mom_a);
      const auto ms = moment_set(p, mom_x, mom_y);
      const auto dp = delta_prime(p, mom_x, mom_y);
      const auto mixed = mixed_weighted_moments(p, mom_x, mom_y);
      RecordSet rs("moments", {"m", "n", "a", "x", "y", "lambda_m", "lambda_n", "e10", "e01", "e20",
                               "e02", "c1x", "c1y", "c2x", "c2y", "c4x", "c4y", "delta_m", "delta_n",
                               "mixed_self", "mixed_cross"});
      rs.add_row({std::int64_t{mom_m}, std::int64_t{mom_n}, mom_a, mom_x, mom_y, lambda(mom_m, mom_a),
                  lambda(mom_n, mom_a), ms.raw.e10, ms.raw.e01, ms.raw.e20, ms.raw.e02, ms.central.c1x,
                  ms.central.c1y, ms.central.c2x, ms.central.c2y, ms.central.c4x, ms.central.c4y,
                  dp.dm, dp.dn, mixed.self, mixed.cross});
      emit(rs, mom_c, out);
    } else if (*vor) {
      const BivariateFn f = function_from_spec(vor_f);
      const auto rep = voronovskaya_check(f, vor_x, vor_y, vor_a, parse_ints(vor_ms), vor_c.config());
      RecordSet rs("voronovskaya", {"m", "n", "a", "x", "y", "value", "limit", "residual", "order"});
      for (const auto& r : rep.records) {
        rs.add_row({std::int64_t{r.m}, std::int64_t{r.m}, vor_a, vor_x, vor_y, r.scaled, rep.limit,
                    r.residual, rep.order});
      }
      rs.add_meta("limit", rep.limit);
      rs.add_meta("order", rep.order);
      rs.add_meta("exact_partials", std::string(rep.exact_partials ? "true" : "false"));
      emit(rs, vor_c, out);
    } else if (*deriv) {
      const BivariateFn f = function_from_spec(der_f);
      const OperatorParams p(der_m, der_n, der_a);
      const auto r = der_axis == "x" ? dx_yhat(p, f, der_x, der_y, der_c.config())
                                     : dy_yhat(p, f, der_x, der_y, der_c.config());
      RecordSet rs("deriv", {"m", "n", "a", "x", "y", "axis", "value", "method", "step"});
      rs.add_row({std::int64_t{der_m}, std::int64_t{der_n}, der_a, der_x, der_y, der_axis, r.value,
                  std::string(r.method == DerivMethod::Identity ? "identity" : "finite-difference"),
                  r.step ? Cell{*r.step} : Cell{std::string()}});
      emit(rs, der_c, out);
    } else if (*grid) {
      const BivariateFn f = function_from_spec(grid_f);
      const auto d = parse_reals(grid_domain, 4, "domain x0,x1,y0,y1");
      const auto recs = comparison_grid(f, OperatorParams(grid_m, grid_n, grid_a),
                                        Domain{d[0], d[1], d[2], d[3]}, grid_steps, grid_c.config());
      RecordSet rs("grid", {"m", "n", "a", "x", "y", "f", "yhat", "szasz", "error_yhat", "error_szasz"});
      for (const auto& r : recs) {
        rs.add_row({std::int64_t{grid_m}, std::int64_t{grid_n}, grid_a, r.x, r.y, r.f, r.yhat, r.szasz,
                    r.error_yhat, r.error_szasz});
      }
      rs.add_meta("function", f.label());
      emit(rs, grid_c, out);
    } else if (*order) {
      std::vector<std::pair<double, double>> samples;
      if (!ord_samples.empty()) {
        std::stringstream ss(ord_samples);
        std::string item;
        while (std::getline(ss, item, ',')) {
          const auto colon = item.find(':');
          if (colon == std::string::npos) throw InvalidParameter("samples must be m:err pairs");
          const auto m = parse_reals(item.substr(0, colon), 1, "sample m");
          const auto e = parse_reals(item.substr(colon + 1), 1, "sample error");
          samples.emplace_back(m[0], e[0]);
        }
      } else if (ord_preset == "table1") {
        const auto point = parse_point(ord_point);
        if (!point) throw InvalidParameter("--point is required with --preset table1");
        const auto& ref = reference_table1();
        if (ord_computed) {
          const auto t = error_table(TablePreset::Table1, ord_a_opt->count() ? ord_a : kTable1Base, point,
                                     ord_c.config());
          for (std::size_t i = 0; i < t.ms.size(); ++i) samples.emplace_back(t.ms[i], t.rows[0].error_yhat[i]);
        } else {
          std::optional<std::size_t> row;
          for (std::size_t i = 0; i < ref.points.size(); ++i) {
            if (std::fabs(ref.points[i].first - point->first) < 1e-9 &&
                std::fabs(ref.points[i].second - point->second) < 1e-9) {
              row = i;
            }
          }
          if (!row) throw InvalidParameter("point is not a row of table1");
          for (std::size_t i = 0; i < ref.ms.size(); ++i) samples.emplace_back(ref.ms[i], ref.values[*row][i]);
        }
      } else if (ord_preset == "table2") {
        const auto& ref = reference_table2();
        if (ord_computed) {
          const auto t = error_table(TablePreset::Table2, ord_a_opt->count() ? ord_a : kTable2Base,
                                     parse_point(ord_point), ord_c.config());
          for (std::size_t i = 0; i < t.ms.size(); ++i) samples.emplace_back(t.ms[i], t.rows[0].error_yhat[i]);
        } else {
          for (std::size_t i = 0; i < ref.ms.size(); ++i) samples.emplace_back(ref.ms[i], ref.yhat[i]);
        }
      } else {
        throw InvalidParameter("order needs --preset or --samples");
      }
      const auto fit = order_fit(samples);
      RecordSet rs("order", {"order", "constant", "samples"});
      rs.add_row({fit.order, fit.constant, static_cast<std::int64_t>(samples.size())});
      emit(rs, ord_c, out);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnknownBuiltin& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace bisz::cli
