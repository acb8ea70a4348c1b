#include "slei/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "slei/scenario.hpp"

namespace slei {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

FailureSpec parse_failure(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ConfigError("--fail expects <robot>:<tick>, got '" + s + "'");
  try {
    return FailureSpec{std::stoi(s.substr(0, colon)), std::stoll(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ConfigError("--fail expects <robot>:<tick>, got '" + s + "'");
  }
}

Dims parse_size(const std::string& s) {
  int x = 0, y = 0, z = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> x >> c1 >> y >> c2 >> z) || c1 != 'x' || c2 != 'x' || x <= 0 || y <= 0 || z <= 0)
    throw ConfigError("--size expects XxYxZ, got '" + s + "'");
  return Dims{x, y, z};
}

struct Source {
  std::string scenario;
  std::optional<GenParams> builtin;
  SimConfig loaded;
};

Source open_source(const std::string& scenario) {
  Source src;
  src.scenario = scenario;
  if (scenario == "builtin:scenario-a") {
    src.builtin = scenario_a_params(1);
  } else if (scenario == "builtin:small") {
    src.builtin = GenParams{};
  } else {
    src.loaded = load_scenario(scenario);
  }
  return src;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

void write_run(const fs::path& dir, const RunResult& run) {
  fs::create_directories(dir);
  write_file(dir / "events.ndjson", run.log.to_ndjson());
  write_file(dir / "metrics.json", metrics_to_json(run.metrics).dump(2) + "\n");
  write_file(dir / "ticks.csv", ticks_csv(run.metrics));
  write_file(dir / "meetings.csv", meetings_csv(run.metrics));
  write_file(dir / "soei.csv", soei_csv(run.metrics));
}

ModeSummary summarize(Mode mode, const std::vector<json>& metrics) {
  ModeSummary s;
  s.mode = mode;
  s.runs = static_cast<int>(metrics.size());
  std::vector<double> rate, tick, gm, im, idle;
  for (const auto& m : metrics) {
    if (m.at("finished").get<bool>()) ++s.finished;
    rate.push_back(m.at("finish_rate").get<double>());
    tick.push_back(static_cast<double>(m.at("finish_tick").get<Tick>()));
    gm.push_back(m.at("gcs_explorer_meetings").get<double>());
    im.push_back(m.at("explorer_inspector_meetings").get<double>());
    idle.push_back(static_cast<double>(m.at("total_idle").get<Tick>()));
  }
  s.finish_rate_mean = mean(rate);
  s.finish_tick_mean = mean(tick);
  s.finish_tick_std = stddev(tick);
  s.gcs_meetings_mean = mean(gm);
  s.inspector_meetings_mean = mean(im);
  s.idle_mean = mean(idle);
  s.idle_std = stddev(idle);
  if (!metrics.empty()) {
    s.finish_tick_max = static_cast<Tick>(*std::max_element(tick.begin(), tick.end()));
    s.finish_tick_min = static_cast<Tick>(*std::min_element(tick.begin(), tick.end()));
    s.idle_max = static_cast<Tick>(*std::max_element(idle.begin(), idle.end()));
    s.idle_min = static_cast<Tick>(*std::min_element(idle.begin(), idle.end()));
  }
  return s;
}

json summary_to_json(const ModeSummary& s) {
  return json{{"mode", to_string(s.mode)},
              {"runs", s.runs},
              {"finished", s.finished},
              {"finish_rate_mean", s.finish_rate_mean},
              {"finish_tick", {{"mean", s.finish_tick_mean}, {"std", s.finish_tick_std},
                               {"max", s.finish_tick_max}, {"min", s.finish_tick_min}}},
              {"gcs_explorer_meetings_mean", s.gcs_meetings_mean},
              {"explorer_inspector_meetings_mean", s.inspector_meetings_mean},
              {"total_idle", {{"mean", s.idle_mean}, {"std", s.idle_std}, {"max", s.idle_max}, {"min", s.idle_min}}}};
}

namespace {

int run_gen(const std::string& size, const GenParams& base, bool scenario_a, const std::string& out) {
  GenParams p = scenario_a ? scenario_a_params(base.seed) : base;
  if (!scenario_a && !size.empty()) p.dims = parse_size(size);
  const auto text = scenario_text(gen_scenario(p));
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
  }
  return 0;
}

void print_table(const std::vector<ModeSummary>& rows) {
  std::printf("%-9s %5s %8s %10s %8s %7s %7s %8s %8s %10s %8s %7s %7s\n", "mode", "runs", "rate%", "T_mean",
              "T_std", "T_max", "T_min", "M_gcs", "M_insp", "idle_mean", "idle_std", "i_max", "i_min");
  for (const auto& s : rows)
    std::printf("%-9s %5d %8.1f %10.1f %8.1f %7lld %7lld %8.2f %8.2f %10.1f %8.1f %7lld %7lld\n", to_string(s.mode),
                s.runs, 100.0 * s.finish_rate_mean, s.finish_tick_mean, s.finish_tick_std,
                static_cast<long long>(s.finish_tick_max), static_cast<long long>(s.finish_tick_min),
                s.gcs_meetings_mean, s.inspector_meetings_mean, s.idle_mean, s.idle_std,
                static_cast<long long>(s.idle_max), static_cast<long long>(s.idle_min));
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Simulator for explorer/inspector/GCS rendezvous missions"};
  app.set_version_flag("--version", "slei3d 1.0");
  std::string scenario, mode_name, out_dir;
  std::optional<std::uint64_t> seed;
  int seeds = 1;
  Tick ticks = 0;
  bool energy = false, no_priors = false, compare = false;
  std::vector<std::string> fails;
  app.add_option("--scenario", scenario, "scenario file, or builtin:scenario-a / builtin:small");
  app.add_option("--seed", seed, "run seed (overrides the scenario)");
  app.add_option("--seeds", seeds, "number of consecutive seeds to sweep")->check(CLI::PositiveNumber);
  app.add_option("--mode", mode_name, "slei3d | slei-fix | slei-pre");
  app.add_option("--ticks", ticks, "tick budget")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_dir, "output directory");
  app.add_flag("--energy", energy, "enable energy dynamics");
  app.add_flag("--no-priors", no_priors, "run without prior bounding boxes");
  app.add_option("--fail", fails, "<robot>:<tick> crash-stop failure (repeatable)");
  app.add_flag("--compare", compare, "run all three modes per seed and summarise");

  auto* gen = app.add_subcommand("gen", "generate a scenario file");
  GenParams gp;
  std::string size, gen_out;
  bool scenario_a = false;
  gen->add_option("--size", size, "XxYxZ voxels");
  gen->add_option("--bboxes", gp.n_bboxes)->check(CLI::NonNegativeNumber);
  gen->add_option("--features", gp.n_features)->check(CLI::NonNegativeNumber);
  gen->add_option("--gcs", gp.gcs)->check(CLI::PositiveNumber);
  gen->add_option("--explorers", gp.explorers)->check(CLI::PositiveNumber);
  gen->add_option("--inspectors", gp.inspectors)->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", gp.seed);
  gen->add_flag("--scenario-a", scenario_a, "8 boxes, 2 explorers, 4 inspectors, 1 GCS");
  gen->add_option("--out", gen_out, "output file (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*gen) return run_gen(size, gp, scenario_a, gen_out);
    if (scenario.empty()) throw ConfigError("--scenario is required");
    std::vector<Mode> modes;
    if (compare) {
      modes = {Mode::Slei3d, Mode::SleiFix, Mode::SleiPre};
    } else if (!mode_name.empty()) {
      const auto m = parse_mode(mode_name);
      if (!m) throw ConfigError("unknown mode '" + mode_name + "'");
      modes = {*m};
    }
    std::vector<FailureSpec> failures;
    for (const auto& f : fails) failures.push_back(parse_failure(f));
    const Source src = open_source(scenario);
    const std::uint64_t first = seed ? *seed : src.builtin ? 1 : src.loaded.seed;
    const bool nested = compare || seeds > 1;

    std::map<Mode, std::vector<json>> collected;
    bool all_finished = true;
    for (int k = 0; k < seeds; ++k) {
      const std::uint64_t s = first + static_cast<std::uint64_t>(k);
      SimConfig base;
      if (src.builtin) {
        GenParams p = *src.builtin;
        p.seed = s;
        base = gen_scenario(p);
      } else {
        base = src.loaded;
      }
      base.seed = s;
      if (ticks > 0) base.tick_budget = ticks;
      if (energy) base.energy.enabled = true;
      if (no_priors) base.priors = false;
      for (const auto& f : failures) base.failures.push_back(f);
      const std::vector<Mode> run_modes = modes.empty() ? std::vector<Mode>{base.mode} : modes;
      for (const Mode m : run_modes) {
        SimConfig cfg = base;
        cfg.mode = m;
        validate(cfg);
        const auto run = run_simulation(cfg);
        const auto mj = metrics_to_json(run.metrics);
        if (!out_dir.empty()) {
          const fs::path dir = nested ? fs::path(out_dir) / to_string(m) / ("seed_" + std::to_string(s)) : fs::path(out_dir);
          write_run(dir, run);
        }
        collected[m].push_back(mj);
        all_finished = all_finished && run.metrics.finished;
        std::printf("%s seed=%llu finished=%d finish_tick=%lld finish_rate=%.3f total_idle=%lld\n", to_string(m),
                    static_cast<unsigned long long>(s), run.metrics.finished ? 1 : 0,
                    static_cast<long long>(run.metrics.finish_tick), run.metrics.finish_rate,
                    static_cast<long long>(run.metrics.total_idle));
      }
    }
    if (compare) {
      std::vector<ModeSummary> rows;
      json summary = json::array();
      for (const auto& [m, ms] : collected) {
        rows.push_back(summarize(m, ms));
        summary.push_back(summary_to_json(rows.back()));
      }
      print_table(rows);
      if (!out_dir.empty()) write_file(fs::path(out_dir) / "summary.json", summary.dump(2) + "\n");
    }
    return all_finished ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace slei
