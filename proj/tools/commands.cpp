#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "spin7lab/bubble.hpp"
#include "spin7lab/csv.hpp"
#include "spin7lab/energy.hpp"
#include "spin7lab/instanton.hpp"
#include "spin7lab/manifest.hpp"
#include "spin7lab/metric.hpp"
#include "spin7lab/runconfig.hpp"
#include "spin7lab/schemas.hpp"
#include "spin7lab/svg.hpp"
#include "spin7lab/verify.hpp"

namespace spin7lab::cli {

namespace {

namespace fs = std::filesystem;
using report::CsvTable;
using report::RunConfig;
using report::RunManifest;
using report::usage_error;

std::string join_args(const std::vector<std::string>& args) {
  std::string out = "spin7lab";
  for (const auto& a : args) {
    out += ' ';
    out += a;
  }
  return out;
}

struct OutputSink {
  fs::path dir;
  RunManifest manifest;

  OutputSink(const std::string& out_dir, const std::vector<std::string>& args,
             const RunConfig& cfg)
      : dir(out_dir) {
    fs::create_directories(dir);
    manifest.command = join_args(args);
    manifest.config_echo = cfg.echo();
  }

  void write(const std::string& filename, const std::string& bytes, std::size_t rows) {
    report::write_file_atomic(dir / filename, bytes);
    manifest.outputs.push_back({filename, rows, report::fnv1a64(bytes)});
    std::cout << "wrote " << (dir / filename).string() << "\n";
  }

  void finish() {
    const std::string bytes = manifest.to_string();
    report::write_file_atomic(dir / "manifest.txt", bytes);
    std::cout << "wrote " << (dir / "manifest.txt").string() << "\n";
  }
};

template <std::size_t N>
std::vector<std::string> column_vector(const std::array<std::string_view, N>& names) {
  return std::vector<std::string>(names.begin(), names.end());
}

double resolve_r_max(const RunConfig& cfg, const MetricBackground& bg) {
  if (cfg.nu_max2) {
    if (!(*cfg.nu_max2 > cfg.nu0 * cfg.nu0)) {
      throw usage_error("nu-max2 must exceed nu0^2");
    }
    return bg.r_of_nu(std::sqrt(*cfg.nu_max2), cfg.budget);
  }
  return cfg.r_max;
}

int cmd_metric(const std::vector<std::string>& args, const RunConfig& cfg) {
  const MetricBackground bg(cfg.nu0, cfg.vol_star);
  const double r_max = resolve_r_max(cfg, bg);
  if (!(r_max > 0.0)) throw usage_error("r-max must be positive");
  const RadialTrajectory traj = bg.integrate(r_max, cfg.budget, r_max / 400.0);

  CsvTable table;
  table.comments = {"columns r, nu, t carry length units; conserved_level length^10;",
                    "g_rr_in_nu dimensionless; volume_density length^7 per unit "
                    "cross-section volume"};
  table.columns = column_vector(report::schema::metric_columns);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double r = traj.r(i), t = traj.t(i), nu = traj.nu(i);
    const double t_closed = std::sqrt(std::max(bg.t_squared_of_nu(nu), 0.0));
    const double g_rr = nu > cfg.nu0 ? bg.metric_coefficients(nu).g_rr_in_nu
                                     : std::numeric_limits<double>::quiet_NaN();
    table.add_row({r, nu, t, t_closed, conserved_level(t, nu), g_rr, t * t * t * nu * nu * nu * nu});
  }

  OutputSink sink(cfg.out_dir, args, cfg);
  sink.write("metric.csv", table.to_string(), table.rows.size());
  sink.finish();
  return 0;
}

int cmd_levelsets(const std::vector<std::string>& args, const RunConfig& cfg) {
  std::vector<double> levels = cfg.levels;
  if (levels.empty()) levels = {-100.0, -1.0, 0.0, 0.01, 1.0, 100.0};
  LevelSetWindow window;
  if (cfg.nu_max2) window.nu_max = std::sqrt(*cfg.nu_max2);

  OutputSink sink(cfg.out_dir, args, cfg);
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const double level = levels[li];
    const auto points = trace_level_set(level, window);
    CsvTable table;
    table.comments = {"level = " + report::format_double(level),
                      "points on nu^4 (nu^2 - 5 t^2)^3 = level; lengths dimensionless "
                      "in nu0 units"};
    table.columns = column_vector(report::schema::levelset_columns);
    for (const auto& [nu, t] : points) {
      table.add_row({nu, t, conserved_level(t, nu) - level});
    }
    char name[48];
    std::snprintf(name, sizeof(name), "levelset_%02zu.csv", li);
    sink.write(name, table.to_string(), table.rows.size());
  }
  sink.finish();
  return 0;
}

int cmd_instanton(const std::vector<std::string>& args, const RunConfig& cfg) {
  const int selectors = (cfg.y0 ? 1 : 0) + (cfg.limit_profile ? 1 : 0) +
                        (cfg.flat_profile ? 1 : 0);
  if (selectors != 1) {
    throw usage_error("instanton: exactly one of --y0 <real> | --limit | --flat");
  }
  const MetricBackground bg(cfg.nu0, cfg.vol_star);
  const InstantonProfile profile = cfg.limit_profile ? InstantonProfile::limit(bg)
                                   : cfg.flat_profile
                                       ? InstantonProfile::flat(bg)
                                       : InstantonProfile::finite(bg, *cfg.y0);

  OutputSink sink(cfg.out_dir, args, cfg);
  double r_end = resolve_r_max(cfg, bg);
  if (!profile.globally_defined()) {
    const BlowupBoundary boundary = blowup_boundary(*cfg.y0, bg, cfg.budget);
    r_end = std::min(r_end, 0.99 * boundary.r_star);
    sink.manifest.notes.push_back(
        "blow-up boundary: nu_star^2 = " + report::format_double(boundary.nu_star_sq) +
        ", r_star = " + report::format_double(boundary.r_star) +
        "; output truncated at 0.99 r_star");
  }
  if (!(r_end > 0.0)) throw usage_error("instanton: empty radial span");

  const RadialTrajectory traj = bg.integrate(r_end, cfg.budget, r_end / 400.0);
  CsvTable table;
  table.comments = {"x dimensionless; dx_dr per length; energy_density length^-4;",
                    "connection_gap_to_a_inf = |x - 3/5| sqrt(6)/t, per length"};
  table.columns = column_vector(report::schema::instanton_columns);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double r = traj.r(i), t = traj.t(i), nu = traj.nu(i);
    const double x = profile.x_of_nu(nu);
    const double gap = std::abs(x - 0.6) * std::sqrt(6.0) / t;
    table.add_row({r, nu, x, profile.dx_dr(nu), energy_density(profile, nu), gap});
  }
  sink.write("instanton.csv", table.to_string(), table.rows.size());
  sink.finish();
  return 0;
}

int cmd_energy(const std::vector<std::string>& args, const RunConfig& cfg) {
  const MetricBackground bg(cfg.nu0, cfg.vol_star);
  std::vector<double> y0s = cfg.y0_list;
  if (y0s.empty()) y0s = {1e2, 1e3, 1e4, 1e5};
  const double s0 = cfg.nu0 * cfg.nu0;
  const NuSqRegion region = cfg.region ? NuSqRegion{cfg.region->first, cfg.region->second}
                                       : NuSqRegion{s0, 4.0 * s0};
  if (!(region.lo >= s0) || !(region.hi > region.lo) || !std::isfinite(region.hi)) {
    throw usage_error("region must be a finite nu^2 interval inside [nu0^2, inf)");
  }

  OutputSink sink(cfg.out_dir, args, cfg);
  CsvTable reports;
  reports.comments = {"value = integral of the energy-density difference to the limit "
                      "member over the region,",
                      "against (1/6) t^2 nu^4 dnu^2, per unit cross-section volume Vol*"};
  reports.columns = column_vector(report::schema::energy_report_columns);

  try {
    for (double y0 : y0s) {
      const EnergyRegionReport rep = region_energy_difference(y0, bg, region, cfg.budget);
      reports.add_row({rep.y0, rep.region.lo, rep.region.hi, rep.value, rep.error_estimate});
    }
  } catch (const num::non_convergent&) {
    sink.manifest.notes.push_back("quadrature non-convergent; partial results preserved");
    sink.write("energy_reports.csv", reports.to_string(), reports.rows.size());
    sink.finish();
    throw;
  }

  std::vector<double> values;
  values.reserve(reports.rows.size());
  for (const auto& row : reports.rows) values.push_back(row[3]);
  const num::LimitFit fit = num::extrapolate_limit(y0s, values);
  double ss = 0.0;
  for (std::size_t i = 0; i < y0s.size(); ++i) {
    const double r = values[i] - (fit.limit + fit.coefficient / y0s[i]);
    ss += r * r;
  }
  const double rms = std::sqrt(ss / static_cast<double>(y0s.size()));
  const double target = 4.0 * s0 * s0;
  const TailExponent tail = radial_tail_exponent(1.0, bg, 100.0 * cfg.nu0, 1000.0 * cfg.nu0);

  CsvTable summary;
  summary.comments = {
      "limit_estimate extrapolates value(y0) = L + c/y0 over the sweep;",
      "concentration constant: 4 nu0^4 per unit Vol*; with nu0^4 Vol* = 2 pi^2 Vol(Z)",
      "this is the 8 pi^2 Vol(Z) mass of the zero-section current",
      "tail_exponent: fitted log-log slope of the radial integrand on nu in "
      "[100 nu0, 1000 nu0] at y0 = 1 (reported measurement)"};
  summary.columns = column_vector(report::schema::energy_summary_columns);
  summary.add_row({region.lo, region.hi, fit.limit, fit.coefficient, rms,
                   fit.limit - target, tail.exponent, tail.fit_residual});

  sink.write("energy_reports.csv", reports.to_string(), reports.rows.size());
  sink.write("energy_summary.csv", summary.to_string(), summary.rows.size());
  sink.finish();
  return 0;
}

int cmd_bubble(const std::vector<std::string>& args, const RunConfig& cfg) {
  const MetricBackground bg(cfg.nu0, cfg.vol_star);
  std::vector<double> kappas = cfg.kappa_list;
  if (kappas.empty()) kappas = {0.5, 1.0, 2.0};
  std::vector<double> y0s = cfg.y0_list;
  if (y0s.empty()) y0s = {1e2, 1e3, 1e4};
  if (cfg.k_max < 0 || cfg.k_max > 2) throw usage_error("bubble: k-max must be 0..2");
  if (cfg.grid < 64) throw usage_error("bubble: grid must be >= 64");

  CsvTable table;
  table.comments = {"distances are sup-norms on the unit normal ball, grid " +
                    std::to_string(cfg.grid) + ";",
                    "lambda = sqrt(kappa/y0); dist_k products test the kappa^2/y0 bound"};
  table.columns = {"kappa", "y0", "lambda"};
  for (int k = 0; k <= cfg.k_max; ++k) table.columns.push_back("dist" + std::to_string(k));
  for (int k = 0; k <= cfg.k_max; ++k) {
    table.columns.push_back("dist" + std::to_string(k) + "_y0_over_kappa2");
  }

  for (double kappa : kappas) {
    for (double y0 : y0s) {
      const BubbleReport rep =
          bubble_distance(BubbleParams::make(kappa, y0, cfg.k_max), bg, cfg.grid, cfg.budget);
      std::vector<double> row{kappa, y0, rep.params.lambda};
      for (int k = 0; k <= cfg.k_max; ++k) {
        row.push_back(rep.distances[static_cast<std::size_t>(k)]);
      }
      for (int k = 0; k <= cfg.k_max; ++k) {
        row.push_back(rep.distances[static_cast<std::size_t>(k)] * y0 / (kappa * kappa));
      }
      table.add_row(std::move(row));
    }
  }

  OutputSink sink(cfg.out_dir, args, cfg);
  sink.write("bubble.csv", table.to_string(), table.rows.size());
  sink.finish();
  return 0;
}

int cmd_verify(const std::vector<std::string>& args, const RunConfig& cfg) {
  verify::Options options;
  options.budget = cfg.budget;
  options.perturb_x0 = cfg.perturb_x0;
  const std::vector<verify::CheckResult> results = verify::run_checks(options);
  const std::string report_text = verify::render_report(results);

  OutputSink sink(cfg.out_dir, args, cfg);
  sink.write("verify_report.txt", report_text, results.size());
  sink.finish();
  std::cout << report_text;
  return verify::has_failure(results) ? 1 : 0;
}

int cmd_plot(const std::vector<std::string>& args, const RunConfig& cfg) {
  if (cfg.inputs.empty()) throw usage_error("plot: at least one CSV path required");
  if (cfg.x_column.empty()) throw usage_error("plot: --x <column> required");
  if (cfg.y_columns.empty()) throw usage_error("plot: --y <column[,column...]> required");
  const std::string out_path = cfg.out_dir == "out" ? "plot.svg" : cfg.out_dir;

  std::vector<report::PlotSeries> series;
  for (const std::string& path : cfg.inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("plot: cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    CsvTable table;
    try {
      table = report::parse_csv(buf.str());
    } catch (const std::runtime_error& e) {
      throw usage_error("plot: " + std::string(e.what()));
    }
    if (table.rows.empty()) throw usage_error("plot: " + path + " has no data rows");
    const auto xi = table.column_index(cfg.x_column);
    if (!xi) throw usage_error("plot: column '" + cfg.x_column + "' missing in " + path);
    for (const std::string& ycol : cfg.y_columns) {
      const auto yi = table.column_index(ycol);
      if (!yi) throw usage_error("plot: column '" + ycol + "' missing in " + path);
      report::PlotSeries s;
      s.label = cfg.inputs.size() > 1 ? fs::path(path).stem().string() + ":" + ycol : ycol;
      for (const auto& row : table.rows) {
        s.x.push_back(row[*xi]);
        s.y.push_back(row[*yi]);
      }
      series.push_back(std::move(s));
    }
  }

  report::PlotOptions options;
  options.log_x = cfg.log_x;
  options.log_y = cfg.log_y;
  options.x_label = cfg.x_column;
  options.y_label = cfg.y_columns.size() == 1 ? cfg.y_columns[0] : "";
  std::string svg;
  try {
    svg = report::render_line_plot(series, options);
  } catch (const std::invalid_argument& e) {
    throw usage_error("plot: " + std::string(e.what()));
  }

  const fs::path out(out_path);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  report::write_file_atomic(out, svg);
  std::cout << "wrote " << out.string() << "\n";

  RunManifest manifest;
  manifest.command = join_args(args);
  manifest.config_echo = cfg.echo();
  manifest.outputs.push_back({out.filename().string(), series.size(), report::fnv1a64(svg)});
  const fs::path mpath = out.has_parent_path() ? out.parent_path() / "manifest.txt"
                                               : fs::path("manifest.txt");
  report::write_file_atomic(mpath, manifest.to_string());
  std::cout << "wrote " << mpath.string() << "\n";
  return 0;
}

}  // namespace

std::string usage_text() {
  return R"(spin7lab - numerical laboratory for the cohomogeneity-one Spin(7) background
and its radial instanton family

usage: spin7lab <command> [flags]

commands:
  metric     evolution-system trajectory, closed forms, conserved level (CSV)
  levelsets  implicit level curves of nu^4 (nu^2 - 5 t^2)^3 (CSV per level)
  instanton  one family member: profile, derivative, energy density (CSV)
  energy     region energy differences, concentration extrapolation (CSV)
  bubble     rescaled-vs-ASD profile distances and scaling products (CSV)
  verify     run the full invariant + acceptance suite (report, exit code)
  plot       polyline SVG from CSV columns

common flags:
  --nu0 <v>          zero-section scale (default 1)
  --vol-star <v>     cross-section volume constant (default 1)
  --out <dir>        output directory (default ./out); for plot: the SVG path
  --config <file>    read `key = value` lines first (flags override)
  --budget k=v       rel_tol / abs_tol / max_steps override (repeatable)

command flags:
  metric     --r-max <v> | --nu-max2 <v>
  levelsets  --levels <l1,l2,...>  --nu-max2 <v>
  instanton  --y0 <v> | --limit | --flat, --r-max <v> | --nu-max2 <v>
  energy     --y0-list <v,...>  --region <lo,hi>    (nu^2 interval)
  bubble     --kappa <v,...>  --y0-list <v,...>  --grid <n>  --k-max <0..2>
  verify     --perturb-x0 <v>
  plot       <csv...> --x <col> --y <col[,col...]> [--logx] [--logy] --out <svg>

exit codes: 0 success, 1 verification failure, 2 usage/config error,
            3 numerical non-convergence
)";
}

int run_command(const std::vector<std::string>& args) {
  if (args.empty() || args[0] == "--help" || args[0] == "help") {
    std::cout << usage_text();
    return args.empty() ? 2 : 0;
  }
  const std::string command = args[0];
  const std::vector<std::string> rest(args.begin() + 1, args.end());

  try {
    const RunConfig cfg = report::parse_run_config(rest);
    if (command == "metric") return cmd_metric(args, cfg);
    if (command == "levelsets") return cmd_levelsets(args, cfg);
    if (command == "instanton") return cmd_instanton(args, cfg);
    if (command == "energy") return cmd_energy(args, cfg);
    if (command == "bubble") return cmd_bubble(args, cfg);
    if (command == "verify") return cmd_verify(args, cfg);
    if (command == "plot") return cmd_plot(args, cfg);
    throw usage_error("unknown command: " + command);
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const num::non_convergent& e) {
    std::cerr << "numerical non-convergence: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace spin7lab::cli
