// Copyright 2026 The faster-sim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command line front end: single runs and FASTER-vs-baseline batches.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "faster/faster.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::string out_dir;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> nodes;
  std::optional<std::uint64_t> ticks;
};

faster::SimConfig load(const Overrides& o) {
  faster::SimConfig cfg = o.config_path.empty()
                              ? faster::SimConfig{}
                              : faster::parse_config(
                                    std::filesystem::path(o.config_path));
  if (o.mode) {
    if (*o.mode == "faster") {
      cfg.mode = faster::Mode::kFaster;
    } else if (*o.mode == "baseline") {
      cfg.mode = faster::Mode::kBaseline;
    } else {
      throw faster::Error(faster::ErrorCode::kInvalidArgument,
                          "--mode must be faster or baseline");
    }
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.nodes) cfg.n_nodes = *o.nodes;
  if (o.ticks) cfg.ticks = *o.ticks;
  cfg.validate();
  return cfg;
}

// Accepts "a..b" (inclusive) or a comma separated list.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const auto lo = faster::parse_uint(std::string_view(text).substr(0, dots));
    const auto hi = faster::parse_uint(std::string_view(text).substr(dots + 2));
    if (hi < lo) {
      throw faster::Error(faster::ErrorCode::kInvalidArgument,
                          "empty seed range " + text);
    }
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  } else {
    for (auto part : faster::split(text, ',')) {
      seeds.push_back(faster::parse_uint(part));
    }
  }
  return seeds;
}

void print_summary(const faster::RunSummary& s) {
  std::cout << faster::kSummaryHeader << '\n';
  faster::write_summary_row(std::cout, s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shapley-value relay incentive simulator"};
  app.require_subcommand(1);

  Overrides run_opts;
  bool packet_log = false;
  auto* run = app.add_subcommand("run", "Run one simulation");
  run->add_option("--config", run_opts.config_path, "key = value config file")
      ->check(CLI::ExistingFile);
  run->add_option("--out", run_opts.out_dir, "Output directory")->required();
  run->add_option("--mode", run_opts.mode, "faster or baseline");
  run->add_option("--seed", run_opts.seed, "RNG seed");
  run->add_option("--nodes", run_opts.nodes, "Number of nodes");
  run->add_option("--ticks", run_opts.ticks, "Number of ticks");
  run->add_flag("--packet-log", packet_log, "Also write packets.csv");

  Overrides cmp_opts;
  std::string seeds_spec = "1..20";
  std::size_t jobs = 1;
  auto* compare = app.add_subcommand("compare",
                                     "Run both modes over a range of seeds");
  compare->add_option("--config", cmp_opts.config_path,
                      "key = value config file")
      ->check(CLI::ExistingFile);
  compare->add_option("--out", cmp_opts.out_dir, "Output directory")
      ->required();
  compare->add_option("--seeds", seeds_spec, "Seeds as a..b or a,b,c")
      ->capture_default_str();
  compare->add_option("--nodes", cmp_opts.nodes, "Number of nodes");
  compare->add_option("--ticks", cmp_opts.ticks, "Number of ticks");
  compare->add_option("--jobs", jobs, "Parallel runs")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto cfg = load(run_opts);
      print_summary(faster::run_experiment(cfg, run_opts.out_dir, packet_log));
    } else if (*compare) {
      const auto cfg = load(cmp_opts);
      const auto report = faster::compare_modes(cfg, parse_seeds(seeds_spec),
                                                cmp_opts.out_dir, jobs);
      std::cout << faster::kComparisonHeader << '\n';
      for (const auto& r : report.rows) {
        std::cout << r.seed << ','
                  << faster::format_double(r.faster.richness_stddev_final)
                  << ','
                  << faster::format_double(r.baseline.richness_stddev_final)
                  << ',' << faster::format_double(r.faster.mean_lifetime)
                  << ',' << faster::format_double(r.baseline.mean_lifetime)
                  << '\n';
      }
      std::cout << "richness_win_fraction="
                << faster::format_double(report.richness_win_fraction) << '\n'
                << "lifetime_win_fraction="
                << faster::format_double(report.lifetime_win_fraction) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
