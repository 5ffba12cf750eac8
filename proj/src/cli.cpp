#include "mia/cli.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

#include "mia/artifacts.hpp"
#include "mia/errors.hpp"
#include "mia/harness.hpp"
#include "mia/report.hpp"
#include "mia/version.hpp"

namespace mia {

using nlohmann::json;

namespace {

// 3 for configuration/auth problems, 2 for everything else that failed.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const TemplateError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

void print_report_line(std::ostream& out, const MetricsReport& report) {
  char line[160];
  if (report.auc) {
    std::snprintf(line, sizeof(line), "%-10s acc=%.4f adv=%.4f auc=%.4f abstain=%.3f",
                  std::string(to_string(report.attack)).c_str(), report.accuracy,
                  report.advantage, *report.auc, report.abstain_rate);
  } else {
    std::snprintf(line, sizeof(line), "%-10s acc=%.4f adv=%.4f abstain=%.3f",
                  std::string(to_string(report.attack)).c_str(), report.accuracy,
                  report.advantage, report.abstain_rate);
  }
  out << line << '\n';
}

}  // namespace

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ExperimentConfig config = load_experiment_config(options.config_path);
    if (options.attacks) config.attacks = parse_attack_list(*options.attacks);
    if (options.parallelism) config.parallelism = *options.parallelism;
    if (options.provider_kind) {
      if (*options.provider_kind == "simulated") {
        config.provider.kind = ProviderConfig::Kind::simulated;
      } else if (*options.provider_kind == "http") {
        config.provider.kind = ProviderConfig::Kind::http;
      } else {
        throw ConfigError("--provider must be \"http\" or \"simulated\"");
      }
    }
    config.validate();

    if (std::filesystem::exists(options.output_dir / "manifest.json") && !options.force)
      throw ConfigError("output directory " + options.output_dir.string() +
                        " already holds a run (use --force to overwrite)");

    Experiment experiment(std::move(config));
    ExperimentResult result = experiment.run();

    RunManifest manifest;
    manifest.config_path = options.config_path.string();
    manifest.output_dir = options.output_dir.string();
    manifest.created_at = iso8601_utc_now();
    manifest.toolkit_version = std::string(kToolkitVersion);
    manifest.resolved_config = config_to_json(experiment.config());
    write_run_artifacts(options.output_dir, manifest, result,
                        experiment.config().fpr_targets);

    out << "run complete: " << result.trials.size() - result.failed_trials << "/"
        << result.trials.size() << " trials, " << result.ledger.total << " model queries\n";
    for (const auto& report : result.reports) print_report_line(out, report);
    out << "artifacts written to " << options.output_dir.string() << '\n';
    return 0;
  });
}

int cmd_calibrate(const CalibrateOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ExperimentConfig config = load_experiment_config(options.config_path);
    if (options.shadow_trials) config.shadow_trials = *options.shadow_trials;
    AttackKind kind = attack_kind_from(options.attack);
    if (kind != AttackKind::repeat && kind != AttackKind::brainwash &&
        kind != AttackKind::hybrid)
      throw ConfigError("calibrate supports repeat, brainwash, or hybrid");

    Experiment experiment(std::move(config));
    ShadowData shadow = experiment.collect_shadow(experiment.config().shadow_trials);

    std::filesystem::path output = options.output_path.value_or(
        options.config_path.parent_path() /
        ("calibration_" + std::string(to_string(kind)) + ".json"));

    if (kind == AttackKind::hybrid) {
      HybridTrainResult trained =
          train_hybrid(shadow.samples, experiment.config().hybrid);
      save_hybrid_model(trained.model, output);
      out << "hybrid model trained on " << shadow.samples.size()
          << " shadow targets (final loss " << trained.final_loss << ")\n";
      out << "weights saved to " << output.string() << '\n';
      return 0;
    }

    double threshold = calibrate_threshold(shadow.scores.at(kind));
    json j = {{"attack", std::string(to_string(kind))},
              {"threshold", threshold},
              {"shadow_targets", shadow.samples.size()}};
    std::ofstream file(output);
    if (!file) throw ConfigError("cannot write " + output.string());
    file << j.dump(2) << '\n';
    out << "calibrated threshold for " << to_string(kind) << ": " << threshold << '\n';
    out << "saved to " << output.string() << '\n';
    return 0;
  });
}

int cmd_report(const ReportCmdOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (options.run_dirs.empty()) throw ConfigError("report needs at least one run directory");
    std::vector<RunSummary> runs;
    std::size_t warnings = 0;
    for (const auto& dir : options.run_dirs) {
      RunSummary summary = summarize_run(dir);
      if (summary.corrupt_lines > 0) {
        err << "warning: " << summary.corrupt_lines << " corrupt trial line(s) skipped in "
            << dir.string() << '\n';
        warnings += summary.corrupt_lines;
      }
      runs.push_back(std::move(summary));
    }

    std::filesystem::create_directories(options.output_dir);
    write_summary_csv(options.output_dir / "summary.csv", runs);
    print_summary_table(out, runs);

    // Overlay each attack's curves across runs.
    for (const char* attack : {"repeat", "brainwash", "hybrid"}) {
      std::vector<RocSeries> series;
      for (std::size_t i = 0; i < runs.size(); ++i) {
        auto csv = options.run_dirs[i] / ("roc_" + std::string(attack) + ".csv");
        if (std::filesystem::exists(csv))
          series.push_back({runs[i].run_name, read_roc_csv(csv)});
      }
      if (!series.empty())
        write_roc_svg(options.output_dir / ("roc_log_" + std::string(attack) + ".svg"),
                      std::string(attack) + " attack, log-log ROC", series);
    }

    out << "summary written to " << (options.output_dir / "summary.csv").string();
    if (warnings > 0) out << " (" << warnings << " warnings)";
    out << '\n';
    return 0;
  });
}

}  // namespace mia
