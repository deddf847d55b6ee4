// Command-line front end. Links the C interface only, so everything here is
// reachable by any other language binding as well.

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "egc/egc.h"

namespace {

// 0 success, 1 runtime or gate failure, 2 usage/config error
int exit_code(egc_status s) {
  switch (s) {
    case EGC_OK:
      return 0;
    case EGC_ERR_INVALID_ARGUMENT:
    case EGC_ERR_IO:
    case EGC_ERR_PARSE:
      return 2;
    default:
      return 1;
  }
}

int report(egc_status s) {
  if (s != EGC_OK)
    std::fprintf(stderr, "error (%s): %s\n", egc_status_name(s),
                 egc_last_error());
  return exit_code(s);
}

struct SimulateArgs {
  std::string building;
  std::string traffic;
  std::string scheduler = "esa-dp-la";
  double alpha = 0.2;
  double beta = 0.02;
  std::int64_t seed = -1;  // -1 keeps the traffic file's seed
  std::string out;
};

int run_simulate(const SimulateArgs& a) {
  egc_building* b = nullptr;
  egc_traffic* t = nullptr;
  egc_status s = egc_building_load(a.building.c_str(), &b);
  if (s == EGC_OK) s = egc_traffic_load(a.traffic.c_str(), &t);
  if (s == EGC_OK && a.seed >= 0)
    s = egc_traffic_set_seed(t, static_cast<std::uint64_t>(a.seed));
  egc_metrics m{};
  if (s == EGC_OK) {
    std::printf(
        "simulate: building=%s traffic=%s scheduler=%s alpha=%g beta=%g\n",
        a.building.c_str(), a.traffic.c_str(), a.scheduler.c_str(), a.alpha,
        a.beta);
    s = egc_run_trial(b, t, a.scheduler.c_str(), a.alpha, a.beta, &m,
                      a.out.empty() ? nullptr : a.out.c_str());
  }
  if (s == EGC_OK)
    std::printf("avg_wait_s=%.6f max_wait_s=%.6f served=%ld unserved=%ld\n",
                m.avg_wait_s, m.max_wait_s, m.served, m.unserved);
  egc_traffic_free(t);
  egc_building_free(b);
  return report(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"elevator group control: trials, sweeps, validation, plots"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run one trial");
  simulate->add_option("--building", sim.building, "building config or FxC")
      ->required();
  simulate->add_option("--traffic", sim.traffic, "traffic config file")
      ->required();
  simulate->add_option("--scheduler", sim.scheduler,
                       "conventional | esa-dp | esa-dp-la");
  simulate->add_option("--alpha", sim.alpha, "mixing weight in [0,1]");
  simulate->add_option("--beta", sim.beta, "discount rate, 1/s");
  simulate->add_option("--seed", sim.seed, "traffic seed override");
  simulate->add_option("--out", sim.out, "metrics CSV path");

  std::string sweep_config, sweep_out;
  int jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "run a benchmark sweep");
  sweep->add_option("--config", sweep_config, "sweep config file")->required();
  sweep->add_option("--out", sweep_out, "output CSV path")->required();
  sweep->add_option("--jobs", jobs, "worker threads");

  std::string report_path;
  auto* validate = app.add_subcommand("validate", "run the oracle gates");
  validate->add_option("--report", report_path, "JSON report path");

  std::string plot_in, plot_kind, plot_out;
  auto* plot = app.add_subcommand("plot", "emit plot data from sweep CSV");
  plot->add_option("--in", plot_in, "sweep CSV")->required();
  plot->add_option("--kind", plot_kind,
                   "scatter-conventional | scatter-esa-dp | beta-curve")
      ->required();
  plot->add_option("--out", plot_out, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (simulate->parsed()) return run_simulate(sim);

  if (sweep->parsed()) {
    std::printf("sweep: config=%s out=%s jobs=%d\n", sweep_config.c_str(),
                sweep_out.c_str(), jobs);
    return report(egc_sweep_run(sweep_config.c_str(), sweep_out.c_str(), jobs));
  }

  if (validate->parsed()) {
    std::printf("validate: report=%s\n",
                report_path.empty() ? "(none)" : report_path.c_str());
    int all_passed = 0;
    egc_status s = egc_validate(
        report_path.empty() ? nullptr : report_path.c_str(), &all_passed);
    if (s != EGC_OK) return report(s);
    std::printf("gates: %s\n", all_passed ? "all passed" : "FAILED");
    return all_passed ? 0 : 1;
  }

  std::printf("plot: in=%s kind=%s out=%s\n", plot_in.c_str(),
              plot_kind.c_str(), plot_out.c_str());
  return report(
      egc_plot(plot_in.c_str(), plot_kind.c_str(), plot_out.c_str()));
}
