// audit — membership-inference audit CLI for prompt-customized models.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mia/cli.hpp"
#include "mia/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Membership-inference audit toolkit for in-context learning prompts"};
  app.set_version_flag("--version", std::string(mia::kToolkitVersion));
  app.require_subcommand(1);

  mia::RunOptions run_options;
  std::string run_attacks, run_provider;
  int run_parallelism = 0;
  auto* run = app.add_subcommand("run", "Run an audit experiment");
  run->add_option("-c,--config", run_options.config_path, "Experiment config (TOML)")
      ->required();
  run->add_option("-o,--output", run_options.output_dir, "Output directory")->required();
  run->add_flag("--force", run_options.force, "Overwrite an existing run directory");
  run->add_option("--parallelism", run_parallelism, "Concurrent trials");
  run->add_option("--attacks", run_attacks, "Comma-separated attack subset");
  run->add_option("--provider", run_provider, "Provider override: http or simulated");

  mia::CalibrateOptions calibrate_options;
  std::string calibrate_output;
  int calibrate_shadow = 0;
  auto* calibrate = app.add_subcommand("calibrate", "Fit a threshold or the hybrid model");
  calibrate->add_option("-c,--config", calibrate_options.config_path, "Shadow config (TOML)")
      ->required();
  calibrate->add_option("-a,--attack", calibrate_options.attack,
                        "Attack to calibrate: repeat, brainwash, or hybrid")
      ->required();
  calibrate->add_option("-o,--output", calibrate_output, "Output file for the fitted values");
  calibrate->add_option("--shadow-trials", calibrate_shadow, "Shadow trials to run");

  mia::ReportCmdOptions report_options;
  std::string report_output = ".";
  auto* report = app.add_subcommand("report", "Summarize one or more run directories");
  report->add_option("dirs", report_options.run_dirs, "Run directories")->required();
  report->add_option("-o,--output", report_output, "Directory for summary and plots");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    if (run_parallelism > 0) run_options.parallelism = run_parallelism;
    if (!run_attacks.empty()) run_options.attacks = run_attacks;
    if (!run_provider.empty()) run_options.provider_kind = run_provider;
    return mia::cmd_run(run_options, std::cout, std::cerr);
  }
  if (calibrate->parsed()) {
    if (!calibrate_output.empty()) calibrate_options.output_path = calibrate_output;
    if (calibrate_shadow > 0) calibrate_options.shadow_trials = calibrate_shadow;
    return mia::cmd_calibrate(calibrate_options, std::cout, std::cerr);
  }
  if (report->parsed()) {
    report_options.output_dir = report_output;
    return mia::cmd_report(report_options, std::cout, std::cerr);
  }
  return 1;
}
