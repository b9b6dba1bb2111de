#include <iostream>

#include <CLI11.hpp>

#include "sfa_cli/run.hpp"

namespace sfa::cli {

namespace {

void add_common(CLI::App* sub, RunConfig& cfg, bool many_problems) {
  if (many_problems) {
    sub->add_option("problems", cfg.problems, "problem files")->required();
  } else {
    sub->add_option("problem", cfg.problems, "problem file (.toml/.ini or two-column .csv)")->expected(0, 1);
    sub->add_option("--family", cfg.family, "closed-form family instead of a file")
        ->check(CLI::IsMember({"uniform_cosine", "gaussian_hermite", "power_law"}));
  }
  sub->add_option("--out", cfg.out, "output directory");
  sub->add_option("--seed", cfg.seed, "random seed");
  sub->add_option("--tail-eps", cfg.tail_eps, "truncated tail mass");
  sub->add_option("--grid", cfg.grid, "grid nodes n");
  sub->add_option("--modes", cfg.modes, "nonconstant modes m");
  sub->add_flag("--allow-nondiscrete", cfg.allow_nondiscrete,
                "solve even when the spectrum is not known to be discrete");
}

}  // namespace

int main_entry(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Singular one-dimensional SFA eigenproblems"};
  app.require_subcommand(1);
  auto* classify = app.add_subcommand("classify", "endpoint classification and spectrum verdict");
  auto* solve = app.add_subcommand("solve", "eigenpairs of the truncated problem");
  auto* verify = app.add_subcommand("verify", "structural checks on solved eigenpairs");
  auto* compose = app.add_subcommand("compose", "slowest product solutions of several sources");
  auto* empirical = app.add_subcommand("empirical", "linear SFA on a sampled trajectory");
  add_common(classify, cfg, false);
  add_common(solve, cfg, false);
  add_common(verify, cfg, false);
  add_common(compose, cfg, true);
  add_common(empirical, cfg, false);
  verify->add_option("--from", cfg.from, "directory written by `solve`");
  verify->add_option("--delta-tol", cfg.delta_tol, "relative delta-eigenvalue tolerance");
  empirical->add_option("--steps", cfg.steps, "trajectory length");
  empirical->add_option("--dt", cfg.dt, "time step");
  empirical->add_option("--degree", cfg.degree, "polynomial expansion degree");
  empirical->add_flag("--trajectory", cfg.trajectory_csv, "also write trajectory.csv (t, s, y1..ym)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  return run(cfg, std::cerr);
}

}  // namespace sfa::cli
