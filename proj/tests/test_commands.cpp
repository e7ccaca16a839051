#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "spin7lab/csv.hpp"
#include "spin7lab/numerics.hpp"

namespace fs = std::filesystem;
using spin7lab::cli::run_command;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("spin7lab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

spin7lab::report::CsvTable load_csv(const fs::path& p) {
  return spin7lab::report::parse_csv(slurp(p));
}

}  // namespace

TEST_CASE("metric command emits the documented schema and first row") {
  const fs::path dir = fresh_dir("metric");
  REQUIRE(run_command({"metric", "--nu0", "1", "--r-max", "5", "--out", dir.string()}) == 0);
  const auto table = load_csv(dir / "metric.csv");
  CHECK(table.columns ==
        std::vector<std::string>{"r", "nu", "t", "t_closed_form", "conserved_level",
                                 "g_rr_in_nu", "volume_density"});
  REQUIRE(!table.rows.empty());
  const auto& first = table.rows.front();
  CHECK(first[0] == 0.0);
  CHECK(first[1] == 1.0);
  CHECK(first[2] == 0.0);
  CHECK(first[3] == 0.0);
  CHECK(first[4] == 1.0);
  CHECK(std::isnan(first[5]));  // g_rr diverges at the zero section
  CHECK(first[6] == 0.0);

  const auto level_col = table.column_index("conserved_level");
  for (const auto& row : table.rows) {
    CHECK(std::abs(row[*level_col] - 1.0) <= 1e-8);
  }
  CHECK(fs::exists(dir / "manifest.txt"));
}

TEST_CASE("identical configs give byte-identical CSV output") {
  const fs::path a = fresh_dir("det_a");
  const fs::path b = fresh_dir("det_b");
  REQUIRE(run_command({"metric", "--r-max", "2", "--out", a.string()}) == 0);
  REQUIRE(run_command({"metric", "--r-max", "2", "--out", b.string()}) == 0);
  CHECK(slurp(a / "metric.csv") == slurp(b / "metric.csv"));
}

TEST_CASE("metric command scales the conserved level with nu0") {
  const fs::path dir = fresh_dir("metric2");
  REQUIRE(run_command({"metric", "--nu0", "2", "--r-max", "4", "--out", dir.string()}) == 0);
  const auto table = load_csv(dir / "metric.csv");
  for (const auto& row : table.rows) {
    CHECK(row[4] == doctest::Approx(1024.0).epsilon(1e-8));
  }
}

TEST_CASE("levelsets command: zero level exact, residuals bounded") {
  const fs::path dir = fresh_dir("levels");
  REQUIRE(run_command({"levelsets", "--levels", "-1,0,1", "--out", dir.string()}) == 0);
  const auto zero = load_csv(dir / "levelset_01.csv");
  for (const auto& row : zero.rows) {
    CHECK(row[1] == doctest::Approx(row[0] / std::sqrt(5.0)).epsilon(1e-13));
  }
  for (const char* name : {"levelset_00.csv", "levelset_02.csv"}) {
    const auto table = load_csv(dir / name);
    REQUIRE(!table.rows.empty());
    for (const auto& row : table.rows) CHECK(std::abs(row[2]) <= 1e-8);
  }
}

TEST_CASE("instanton command: flat profile and the special member") {
  const fs::path flat_dir = fresh_dir("inst_flat");
  REQUIRE(run_command({"instanton", "--flat", "--out", flat_dir.string()}) == 0);
  for (const auto& row : load_csv(flat_dir / "instanton.csv").rows) {
    CHECK(row[2] == 0.0);  // x column identically zero
  }

  const fs::path dir = fresh_dir("inst_y3");
  REQUIRE(run_command({"instanton", "--y0", "3", "--nu0", "1", "--out", dir.string()}) == 0);
  const auto table = load_csv(dir / "instanton.csv");
  for (const auto& row : table.rows) {
    const double nu = row[1];
    CHECK(row[2] == doctest::Approx(0.6 * (1.0 - std::pow(nu, -10.0 / 3.0))).epsilon(1e-10));
  }
}

TEST_CASE("instanton CSV carries the -3 connection-gap decay in its tail") {
  const fs::path dir = fresh_dir("inst_tail");
  REQUIRE(run_command({"instanton", "--y0", "1", "--nu-max2", "10000", "--out",
                       dir.string()}) == 0);
  const auto table = load_csv(dir / "instanton.csv");
  const auto r_col = table.column_index("r");
  const auto gap_col = table.column_index("connection_gap_to_a_inf");
  std::vector<double> rs, gaps;
  for (const auto& row : table.rows) {
    if (row[*r_col] >= 20.0) {
      rs.push_back(row[*r_col]);
      gaps.push_back(row[*gap_col]);
    }
  }
  REQUIRE(rs.size() >= 10);
  const auto fit = spin7lab::num::loglog_slope(rs, gaps);
  CHECK(fit.slope == doctest::Approx(-3.0).epsilon(0.02));
}

TEST_CASE("instanton command rejects ambiguous selectors") {
  const fs::path dir = fresh_dir("inst_bad");
  CHECK(run_command({"instanton", "--out", dir.string()}) == 2);
  CHECK(run_command({"instanton", "--y0", "1", "--limit", "--out", dir.string()}) == 2);
}

TEST_CASE("instanton command truncates local-only members and notes the boundary") {
  const fs::path dir = fresh_dir("inst_neg");
  REQUIRE(run_command({"instanton", "--y0", "-1", "--nu0", "1", "--out", dir.string()}) == 0);
  const std::string manifest = slurp(dir / "manifest.txt");
  CHECK(manifest.find("nu_star^2 = 4") != std::string::npos);
  const auto table = load_csv(dir / "instanton.csv");
  const double r_star = 1.0844527247561533;
  CHECK(table.rows.back()[0] <= 0.99 * r_star + 1e-12);
}

TEST_CASE("energy command produces reports and the extrapolation summary") {
  const fs::path dir = fresh_dir("energy");
  REQUIRE(run_command({"energy", "--out", dir.string()}) == 0);
  const auto reports = load_csv(dir / "energy_reports.csv");
  CHECK(reports.columns ==
        std::vector<std::string>{"y0", "region_lo2", "region_hi2", "value",
                                 "error_estimate"});
  REQUIRE(reports.rows.size() == 4);

  const auto summary = load_csv(dir / "energy_summary.csv");
  REQUIRE(summary.rows.size() == 1);
  const auto limit_col = summary.column_index("limit_estimate");
  CHECK(summary.rows[0][*limit_col] == doctest::Approx(4.0).epsilon(0.01));
  const auto tail_col = summary.column_index("tail_exponent");
  CHECK(summary.rows[0][*tail_col] == doctest::Approx(1.0).epsilon(0.1));
  bool conversion_note = false;
  for (const auto& comment : summary.comments) {
    conversion_note |= comment.find("8 pi^2") != std::string::npos;
  }
  CHECK(conversion_note);
}

TEST_CASE("energy command: off-section region decays with y0") {
  const fs::path dir = fresh_dir("energy_off");
  REQUIRE(run_command({"energy", "--region", "2,4", "--y0-list", "1e2,1e5", "--out",
                       dir.string()}) == 0);
  const auto reports = load_csv(dir / "energy_reports.csv");
  REQUIRE(reports.rows.size() == 2);
  CHECK(std::abs(reports.rows[1][3]) <= std::abs(reports.rows[0][3]) / 500.0);
}

TEST_CASE("energy command aborts with exit 3 when quadrature cannot converge") {
  const fs::path dir = fresh_dir("energy_nc");
  // A 40-evaluation budget cannot meet rel_tol 1e-10 on the region integral.
  CHECK(run_command({"energy", "--budget", "max_steps=40", "--y0-list", "1e2", "--out",
                     dir.string()}) == 3);
  CHECK(fs::exists(dir / "energy_reports.csv"));  // partial output preserved
  const std::string manifest = slurp(dir / "manifest.txt");
  CHECK(manifest.find("non-convergent") != std::string::npos);
}

TEST_CASE("bubble command: lambda column exact, products tabulated") {
  const fs::path dir = fresh_dir("bubble");
  REQUIRE(run_command({"bubble", "--kappa", "1", "--y0-list", "1e2,1e3", "--grid", "128",
                       "--out", dir.string()}) == 0);
  const auto table = load_csv(dir / "bubble.csv");
  REQUIRE(table.rows.size() == 2);
  for (const auto& row : table.rows) {
    CHECK(row[2] == std::sqrt(row[0] / row[1]));  // lambda exactly sqrt(kappa/y0)
  }
  // dist0 * y0 roughly constant across the y0 sweep (1/y0 scaling).
  const double p0 = table.rows[0][3] * table.rows[0][1];
  const double p1 = table.rows[1][3] * table.rows[1][1];
  CHECK(std::max(p0, p1) <= 1.1 * std::min(p0, p1));
}

TEST_CASE("config file merges under explicit flags; unknown keys rejected") {
  const fs::path dir = fresh_dir("config");
  const fs::path cfg = dir / "run.cfg";
  {
    std::ofstream out(cfg);
    out << "# comment line\n";
    out << "nu0 = 2\n";
    out << "r-max = 1.5\n";
  }
  REQUIRE(run_command({"metric", "--config", cfg.string(), "--nu0", "1", "--out",
                       (dir / "out").string()}) == 0);
  const auto table = load_csv(dir / "out" / "metric.csv");
  // Flag overrides the file: nu0 = 1, so the conserved level is 1.
  CHECK(table.rows.front()[4] == 1.0);
  // r-max from the file: trajectory ends at 1.5.
  CHECK(table.rows.back()[0] == doctest::Approx(1.5).epsilon(1e-12));

  const fs::path bad = dir / "bad.cfg";
  {
    std::ofstream out(bad);
    out << "zebra = 1\n";
  }
  CHECK(run_command({"metric", "--config", bad.string(), "--out", dir.string()}) == 2);
  CHECK(run_command({"metric", "--config", (dir / "missing.cfg").string()}) == 2);
}

TEST_CASE("plot command: figure generation and usage errors") {
  const fs::path dir = fresh_dir("plot");
  REQUIRE(run_command({"levelsets", "--levels", "0,1", "--out", dir.string()}) == 0);
  const fs::path svg = dir / "fig.svg";
  REQUIRE(run_command({"plot", (dir / "levelset_00.csv").string(),
                       (dir / "levelset_01.csv").string(), "--x", "nu", "--y", "t",
                       "--out", svg.string()}) == 0);
  const std::string a = slurp(svg);
  CHECK(a.find("<svg") != std::string::npos);

  // Deterministic bytes on rerun.
  REQUIRE(run_command({"plot", (dir / "levelset_00.csv").string(),
                       (dir / "levelset_01.csv").string(), "--x", "nu", "--y", "t",
                       "--out", svg.string()}) == 0);
  CHECK(slurp(svg) == a);

  // Missing column and empty CSV are usage errors; no file written.
  CHECK(run_command({"plot", (dir / "levelset_00.csv").string(), "--x", "zz", "--y", "t",
                     "--out", (dir / "x.svg").string()}) == 2);
  CHECK_FALSE(fs::exists(dir / "x.svg"));
  const fs::path empty = dir / "empty.csv";
  {
    std::ofstream out(empty);
    out << "a,b\n";
  }
  CHECK(run_command({"plot", empty.string(), "--x", "a", "--y", "b", "--out",
                     (dir / "y.svg").string()}) == 2);
  CHECK_FALSE(fs::exists(dir / "y.svg"));
}

TEST_CASE("verify command: report bytes, exit codes, and modes") {
  const fs::path a_dir = fresh_dir("verify_a");
  const fs::path b_dir = fresh_dir("verify_b");
  // The acceptance suite currently carries one honestly red criterion
  // (the bubbling-band operationalization), so default verify exits 1.
  const int rc_a = run_command({"verify", "--out", a_dir.string()});
  const int rc_b = run_command({"verify", "--out", b_dir.string()});
  CHECK(rc_a == rc_b);
  const std::string report_a = slurp(a_dir / "verify_report.txt");
  const std::string report_b = slurp(b_dir / "verify_report.txt");
  CHECK(report_a == report_b);  // byte-identical across consecutive runs
  CHECK(report_a.find("acceptance/01-first-integral") != std::string::npos);
  CHECK(report_a.find("summary:") != std::string::npos);

  // Injected perturbation is reported as the expected failure.
  const fs::path p_dir = fresh_dir("verify_p");
  run_command({"verify", "--perturb-x0", "0.5", "--out", p_dir.string()});
  const std::string perturbed = slurp(p_dir / "verify_report.txt");
  CHECK(perturbed.find("energy/perturbed-profile") != std::string::npos);
  CHECK(perturbed.find("XFAIL") != std::string::npos);

  // A loosened budget downgrades tolerance-sensitive checks to warnings
  // and the run exits 0.
  const fs::path l_dir = fresh_dir("verify_l");
  CHECK(run_command({"verify", "--budget", "rel_tol=1e-2", "--out", l_dir.string()}) == 0);
  CHECK(slurp(l_dir / "verify_report.txt").find("WARN") != std::string::npos);
}

TEST_CASE("unknown command and missing flags give usage errors") {
  CHECK(run_command({"frobnicate"}) == 2);
  CHECK(run_command({"metric", "--r-max"}) == 2);
  CHECK(run_command({}) == 2);
  CHECK(run_command({"--help"}) == 0);
}

TEST_CASE("out-of-domain numeric flags are usage errors, not crashes") {
  const fs::path dir = fresh_dir("usage");
  CHECK(run_command({"energy", "--region", "4,1", "--out", dir.string()}) == 2);
  CHECK(run_command({"energy", "--region", "0.5,4", "--out", dir.string()}) == 2);
  CHECK(run_command({"bubble", "--grid", "10", "--out", dir.string()}) == 2);
  CHECK(run_command({"metric", "--nu-max2", "0.5", "--out", dir.string()}) == 2);
  CHECK(run_command({"metric", "--r-max", "-2", "--out", dir.string()}) == 2);
}
