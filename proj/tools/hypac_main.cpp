#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hypac/experiment.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  int workers = 0;
  std::string timescale;
};

void add_common(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--config", opts->config_path, "experiment config file");
  cmd->add_option("--out", opts->out_dir, "output directory");
  cmd->add_option("--workers", opts->workers, "parallel sweep entries");
  cmd->add_option("--timescale", opts->timescale,
                  "time unit in outputs: fast|slow")
      ->check(CLI::IsMember({"fast", "slow"}));
}

hypac::ExperimentConfig load(const CommonOpts& opts, hypac::Mode mode) {
  hypac::ExperimentConfig c;
  if (!opts.config_path.empty())
    c = hypac::parse_config_file(opts.config_path);
  c.mode = mode;
  if (!opts.out_dir.empty()) c.out = opts.out_dir;
  if (opts.workers > 0) c.workers = opts.workers;
  if (opts.timescale == "fast") c.timescale = hypac::Timescale::fast;
  if (opts.timescale == "slow") c.timescale = hypac::Timescale::slow;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Desk-scale laboratory for interface motion in a damped bistable "
      "field equation with radial symmetry"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::map<std::string, hypac::Mode> modes{
      {"run-pde", hypac::Mode::pde},   {"run-ode", hypac::Mode::ode},
      {"sweep", hypac::Mode::sweep},   {"compare", hypac::Mode::compare},
      {"check", hypac::Mode::check}};
  CLI::App* sub_pde = app.add_subcommand("run-pde", "single field run");
  CLI::App* sub_ode = app.add_subcommand("run-ode", "interface radius run");
  CLI::App* sub_sweep = app.add_subcommand("sweep", "eta or eps sweep");
  CLI::App* sub_cmp = app.add_subcommand("compare", "field vs interface");
  CLI::App* sub_chk = app.add_subcommand("check", "invariant quick suite");
  for (CLI::App* s : {sub_pde, sub_ode, sub_sweep, sub_cmp, sub_chk})
    add_common(s, &opts);

  CLI11_PARSE(app, argc, argv);

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    const hypac::ExperimentConfig c = load(opts, modes.at(name));
    return hypac::run_experiment(c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
