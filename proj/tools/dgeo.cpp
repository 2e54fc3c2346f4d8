// dgeo: run verification suites from spec files or the built-in catalog.
//
// Exit status: 0 all suite checks pass (or are not failures), 1 a suite
// check failed, 2 bad usage or a malformed spec.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "dgeo/cli.hpp"

namespace {

using namespace dgeo;
using namespace dgeo::cli;

struct RunFlags {
  std::vector<std::string> suite;
  std::optional<std::size_t> points;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string report;
  bool machine = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--suite", f.suite, "Check ids to run instead of the spec suite (comma separated)")
      ->delimiter(',');
  cmd->add_option("--points", f.points, "Number of sample points");
  cmd->add_option("--seed", f.seed, "Sampling seed (overrides DGEO_SEED and the spec)");
  cmd->add_option("--tol", f.tol, "Global tolerance");
  cmd->add_option("--report", f.report, "Also write the machine-readable report to this path");
  cmd->add_flag("--machine", f.machine, "Print the machine-readable report instead of the table");
}

int run(const Config& cfg, const RunFlags& f, const CLI::App* cmd) {
  RunOptions opt;
  if (cmd->count("--suite")) opt.suite = f.suite;
  opt.points = f.points;
  opt.seed = f.seed;
  opt.tol = f.tol;
  Report rep = run_suite(cfg, opt);
  std::cout << (f.machine ? emit_machine(rep) : emit_human(rep));
  if (!f.report.empty()) {
    std::ofstream out(f.report);
    if (!out) throw SpecError(f.report, 0, "", "cannot write report");
    out << emit_machine(rep);
  }
  return exit_status(rep);
}

int geodesic(const Config& cfg, const std::vector<double>& from, const std::vector<double>& dir,
             std::optional<double> t, std::optional<double> dt, const std::string& monitor,
             const std::string& trajectory) {
  GeodesicSpec gs;
  if (cfg.geodesic) {
    gs = *cfg.geodesic;
  } else {
    gs.manifold = cfg.primary().name;
  }
  if (!from.empty()) gs.from = from;
  if (!dir.empty()) gs.dir = dir;
  if (t) gs.t = *t;
  if (dt) gs.dt = *dt;
  if (!monitor.empty()) {
    if (monitor != "clairaut") throw SpecError("--monitor", 0, "", "only 'clairaut' can be monitored");
    gs.monitor_clairaut = true;
  }
  const auto& m = cfg.manifold(gs.manifold);
  auto n = static_cast<std::size_t>(m.chart->dim());
  if (gs.from.size() != n || gs.dir.size() != n)
    throw SpecError("geodesic", 0, "", "--from and --dir need " + std::to_string(n) + " values");
  GeodesicOptions opts;
  if (gs.monitor_clairaut) opts.clairaut_coord = -1;
  Eigen::VectorXd v0 = Eigen::Map<const Eigen::VectorXd>(gs.dir.data(), static_cast<Eigen::Index>(n));
  GeodesicResult res = geodesic_integrate(*m.metric, m.chart->point(gs.from), v0, gs.t, gs.dt, opts);
  std::printf("geodesic on %s: t=%g dt=%g steps=%zu halvings=%zu\n", gs.manifold.c_str(), gs.t, gs.dt,
              res.trajectory.size(), res.halvings);
  std::printf("energy drift   %.3e\n", res.max_energy_drift);
  if (res.clairaut_coord)
    std::printf("clairaut drift %.3e (coordinate %s)\n", res.max_clairaut_drift,
                m.chart->coords()[static_cast<std::size_t>(*res.clairaut_coord)].c_str());
  const auto& last = res.trajectory.back();
  std::printf("end point     ");
  for (Eigen::Index i = 0; i < last.x.size(); ++i) std::printf(" %.10g", last.x(i));
  std::printf("\n");
  if (!trajectory.empty()) {
    std::ofstream out(trajectory);
    if (!out) throw SpecError(trajectory, 0, "", "cannot write trajectory");
    out.precision(17);
    for (const auto& s : res.trajectory) {
      out << s.t;
      for (Eigen::Index i = 0; i < s.x.size(); ++i) out << ',' << s.x(i);
      for (Eigen::Index i = 0; i < s.v.size(); ++i) out << ',' << s.v(i);
      out << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential-geometry verification suites"};
  app.require_subcommand(1);

  RunFlags check_flags;
  std::string spec_path;
  auto* check = app.add_subcommand("check", "Run the suite of a spec file");
  check->add_option("spec", spec_path, "Spec file")->required();
  add_run_flags(check, check_flags);

  auto* catalog = app.add_subcommand("catalog", "Built-in example specs");
  catalog->require_subcommand(1);
  auto* list = catalog->add_subcommand("list", "List catalog entries");
  std::string cat_name;
  auto* show = catalog->add_subcommand("show", "Print the spec text of an entry");
  show->add_option("name", cat_name)->required();
  RunFlags cat_flags;
  auto* cat_run = catalog->add_subcommand("run", "Run the suite of an entry");
  cat_run->add_option("name", cat_name)->required();
  add_run_flags(cat_run, cat_flags);

  std::string geo_spec, monitor, trajectory;
  std::vector<double> from, dir;
  std::optional<double> t, dt;
  auto* geo = app.add_subcommand("geodesic", "Integrate a geodesic on the spec's manifold");
  geo->add_option("spec", geo_spec, "Spec file or catalog:NAME")->required();
  geo->add_option("--from", from, "Start point (comma separated)")->delimiter(',');
  geo->add_option("--dir", dir, "Initial velocity (comma separated)")->delimiter(',');
  geo->add_option("--t", t, "End time");
  geo->add_option("--dt", dt, "Step size");
  geo->add_option("--monitor", monitor, "Conserved quantity to monitor (clairaut)");
  geo->add_option("--trajectory", trajectory, "Write t,x,v rows as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto load = [](const std::string& s) {
    if (s.starts_with("catalog:")) return catalog_config(s.substr(8));
    return load_spec(s);
  };

  try {
    if (*check) return run(load(spec_path), check_flags, check);
    if (*list) {
      for (const auto& n : catalog_names()) std::printf("%-20s %s\n", n.c_str(), catalog_description(n).c_str());
      return 0;
    }
    if (*show) {
      std::cout << catalog_text(cat_name);
      return 0;
    }
    if (*cat_run) return run(catalog_config(cat_name), cat_flags, cat_run);
    if (*geo) return geodesic(load(geo_spec), from, dir, t, dt, monitor, trajectory);
  } catch (const SpecError& e) {
    std::fprintf(stderr, "dgeo: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "dgeo: error: %s\n", e.what());
    return 2;
  }
  return 2;
}
