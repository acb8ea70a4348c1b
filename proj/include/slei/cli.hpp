#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "slei/sim.hpp"

namespace slei {

/// Writes events.ndjson, metrics.json and the CSV tables into `dir`.
void write_run(const std::filesystem::path& dir, const RunResult& run);

struct ModeSummary {
  Mode mode = Mode::Slei3d;
  int runs = 0;
  int finished = 0;
  double finish_rate_mean = 0.0;
  double finish_tick_mean = 0.0, finish_tick_std = 0.0;
  Tick finish_tick_max = 0, finish_tick_min = 0;
  double gcs_meetings_mean = 0.0;
  double inspector_meetings_mean = 0.0;
  double idle_mean = 0.0, idle_std = 0.0;
  Tick idle_max = 0, idle_min = 0;
};

/// Aggregates over the metrics.json documents of several runs of one mode.
ModeSummary summarize(Mode mode, const std::vector<nlohmann::json>& metrics);
nlohmann::json summary_to_json(const ModeSummary& s);

/// Entry point of the slei3d tool. Returns the process exit code:
/// 0 success, 1 incomplete mission, 2 configuration error.
int run_cli(int argc, const char* const* argv);

}  // namespace slei
