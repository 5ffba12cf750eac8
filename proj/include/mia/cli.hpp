#pragma once

// Command implementations behind the `audit` binary. Everything here is
// reachable programmatically; the binary itself only parses flags.
// Exit codes: 0 ok, 2 experiment/calibration error, 3 configuration/auth.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace mia {

struct RunOptions {
  std::filesystem::path config_path;
  std::filesystem::path output_dir;
  bool force = false;
  std::optional<int> parallelism;
  std::optional<std::string> attacks;        // comma-separated override
  std::optional<std::string> provider_kind;  // "http" | "simulated" override
};

struct CalibrateOptions {
  std::filesystem::path config_path;
  std::string attack;  // repeat | brainwash | hybrid
  std::optional<std::filesystem::path> output_path;
  std::optional<int> shadow_trials;
};

struct ReportCmdOptions {
  std::vector<std::filesystem::path> run_dirs;
  std::filesystem::path output_dir = ".";
};

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_calibrate(const CalibrateOptions& options, std::ostream& out, std::ostream& err);
int cmd_report(const ReportCmdOptions& options, std::ostream& out, std::ostream& err);

}  // namespace mia
