#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/runner.hpp"

// Command-line front end: thin flag parsing over slitmap::cli::run.

int main(int argc, char** argv) {
  CLI::App app{"slitmap: conformal slit mappings, Loewner evolution, and "
               "measure transforms"};
  app.require_subcommand(1);

  slitmap::cli::JobSpec job;
  std::vector<std::string> inputs;
  std::string out;
  std::string points;

  auto add_common = [&](CLI::App* cmd, int n_inputs) {
    cmd->add_option("inputs", inputs, "input file(s)")->expected(n_inputs);
    cmd->add_option("--out", out, "output path (primary artifact)")->required();
    cmd->add_option("--tol", job.tol, "numeric tolerance");
    cmd->add_option("--grid-n", job.grid_n, "grid resolution");
    cmd->add_option("--eps-schedule", job.eps_schedule,
                    "strictly decreasing eps schedule")
        ->delimiter(',');
    cmd->add_option("--horizon", job.horizon, "chain horizon start");
    return cmd;
  };

  auto* encode = add_common(app.add_subcommand("encode", "slit polyline -> driving function"), 1);
  auto* decode = add_common(app.add_subcommand("decode", "driving function -> tip trace"), 1);
  auto* chain = add_common(app.add_subcommand("chain", "Loewner chain element f_s"), 1);
  chain->add_option("--at", job.at, "start time s");
  chain->add_option("--points", points, "JSON list of [re,im] grid points");
  auto* transform = add_common(app.add_subcommand("transform", "Cauchy or F transform"), 1);
  transform->add_option("--points", points, "JSON list of [re,im] points")->required();
  transform->add_option("--kind", job.mode, "F (default) or G");
  auto* invert = add_common(app.add_subcommand("invert", "Stieltjes-Perron inversion"), 1);
  invert->add_option("--x", job.x_values, "explicit abscissas")->delimiter(',');
  add_common(app.add_subcommand("check-slit", "slit-measure conditions"), 1);
  add_common(app.add_subcommand("weld", "welding homeomorphism"), 1);
  auto* convolve = add_common(app.add_subcommand("convolve", "classical or monotone convolution"), 2);
  convolve->add_option("--mode", job.mode, "classical (default) or monotone");
  auto* fourier = add_common(app.add_subcommand("fourier", "Fourier transform samples"), 1);
  fourier->add_option("--x", job.x_values, "explicit abscissas")->delimiter(',');
  auto* levy = add_common(app.add_subcommand("levy", "Levy-Khintchine evaluation"), 1);
  levy->add_option("--x", job.x_values, "explicit abscissas")->delimiter(',');
  levy->add_flag("--check-embedding", job.check_embedding,
                 "also classify the unique-embedding criterion");

  CLI11_PARSE(app, argc, argv);

  for (CLI::App* sub : app.get_subcommands()) job.command = sub->get_name();
  for (const std::string& s : inputs) job.inputs.emplace_back(s);
  job.out = out;
  job.points_path = points;

  (void)encode;
  (void)decode;
  (void)invert;
  return slitmap::cli::run(job);
}
