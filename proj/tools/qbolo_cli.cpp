// Command-line front end: run experiments, inspect grids, re-check logs.
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "qbolo/dynamic.hpp"
#include "qbolo/experiment.hpp"

namespace {

int cmd_run(const std::string& config, const std::string& out) {
  const auto dirs = qbolo::run_experiment(config, out);
  for (const auto& d : dirs) std::cout << d.string() << '\n';
  return 0;
}

int cmd_grid(const qbolo::GridConfig& cfg) {
  const qbolo::GridAxes axes = qbolo::grid_axes(cfg);
  std::cout << "grid: " << (cfg.smooth ? "smooth" : "non-smooth") << " eps=" << qbolo::format_double(cfg.eps)
            << " K=" << qbolo::format_double(cfg.K) << " G_max=" << qbolo::format_double(cfg.G_max)
            << " L_max=" << qbolo::format_double(cfg.L_max) << " T=" << cfg.T << " cap=" << cfg.max_exponent_cap << '\n';
  std::cout << "eta (" << axes.etas.size() << "):";
  for (double e : axes.etas) std::cout << ' ' << qbolo::format_double(e);
  std::cout << "\nD (" << axes.Ds.size() << "):";
  for (double d : axes.Ds) std::cout << ' ' << qbolo::format_double(d);
  std::cout << "\n|S| = " << axes.etas.size() * axes.Ds.size() << '\n';
  return 0;
}

int cmd_verify(const std::string& dir) {
  const qbolo::VerifyReport r = qbolo::verify_bounds(dir);
  for (const auto& m : r.messages) std::cout << m << '\n';
  std::cout << "runs=" << r.runs << " rows=" << r.rows << " checks=" << r.checks
            << " bound_violations=" << r.bound_violations << " lower_violations=" << r.lower_violations
            << " gap_violations=" << r.gap_violations << " structure_errors=" << r.structure_errors << '\n';
  std::cout << (r.ok() ? "OK" : "FAILED") << '\n';
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online learning with quadratically bounded losses: experiment harness"};
  app.require_subcommand(1);

  std::string config, out;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory")->required();

  qbolo::GridConfig grid;
  auto* info = app.add_subcommand("grid-info", "Print the (eta, D) grid of the dynamic learner");
  info->add_option("--eps", grid.eps, "Scale epsilon")->default_val(1.0);
  info->add_option("--gmax", grid.G_max, "G_max")->required();
  info->add_option("--lmax", grid.L_max, "L_max")->required();
  info->add_option("--T", grid.T, "Horizon")->required();
  info->add_option("--K", grid.K, "Bias constant K >= 8")->default_val(8.0);
  info->add_option("--cap", grid.max_exponent_cap, "Radius exponent cap")->default_val(40);
  info->add_flag("--smooth", grid.smooth, "Use the smooth-loss grid");

  std::string run_dir;
  auto* verify = app.add_subcommand("verify-bounds", "Re-check bound assertions from run logs");
  verify->add_option("--run", run_dir, "Run directory or experiment root")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, out);
    if (*info) return cmd_grid(grid);
    if (*verify) return cmd_verify(run_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
