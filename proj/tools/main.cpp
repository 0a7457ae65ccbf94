#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <compass/types.hpp>

#include "CLI11.hpp"
#include "experiments/experiments.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw compass::ConfigError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse recovery cone measures: sweeps, estimates, recovery"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string stamp;
  std::uint64_t seed = 0;
  long long samples = -1;
  long long trials = -1;
  long long budget = -1;
  int workers = -1;
  bool no_svg = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--seed", seed, "random seed")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--samples", samples, "sphere samples");
    sub->add_option("--budget", budget, "search budget");
    sub->add_option("--trials", trials, "trials per measurement count");
    sub->add_option("--workers", workers, "worker threads (0 = all cores)");
    sub->add_option("--stamp", stamp, "filename timestamp override");
    sub->add_flag("--no-svg", no_svg, "skip the SVG plot");
  };

  CLI::App* t1 = app.add_subcommand(
      "theorem1", "cone measure sweep over competitor regularizers");
  CLI::App* comp = app.add_subcommand(
      "compliance", "Monte-Carlo compliance comparison");
  CLI::App* ph = app.add_subcommand("phase", "phase-transition study");
  CLI::App* rp = app.add_subcommand(
      "rip", "operator constants against the necessary threshold");
  for (CLI::App* sub : {t1, comp, ph, rp}) add_common(sub);

  CLI::App* sv = app.add_subcommand("solve", "solve one instance from JSON");
  sv->add_option("--config", config_path, "instance JSON file")->required();
  sv->add_option("--out", out_dir, "output directory");
  sv->add_option("--stamp", stamp, "filename timestamp override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sv->parsed())
      return compass::experiments::run_solve(
          read_file(config_path), out_dir.empty() ? "." : out_dir, stamp);

    compass::experiments::ExperimentConfig cfg;
    if (!config_path.empty())
      cfg = compass::experiments::parse_config(read_file(config_path));
    for (CLI::App* sub : {t1, comp, ph, rp})
      if (sub->parsed()) cfg.experiment = sub->get_name();
    cfg.seed = seed;
    if (samples > 0) cfg.samples = samples;
    if (trials > 0) cfg.trials = trials;
    if (budget > 0) cfg.budget = budget;
    if (workers >= 0) cfg.workers = workers;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!stamp.empty()) cfg.stamp = stamp;
    if (no_svg) cfg.svg = false;
    return compass::experiments::run_experiment(cfg);
  } catch (const compass::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
