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

#ifndef FASTER_METRICS_HPP
#define FASTER_METRICS_HPP

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "faster/csv.hpp"
#include "faster/error.hpp"
#include "faster/simulator.hpp"

namespace faster {

struct RunSummary {
  Mode mode = Mode::kFaster;
  std::uint64_t seed = 0;
  double richness_stddev_final = 0.0;
  double mean_lifetime = 0.0;
  double delivery_rate = 0.0;
  std::array<std::uint64_t, kDropReasonCount> drops{};
};

/// Population standard deviation.
inline double stddev(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

/// Richness of every node at the last recorded tick, in node order.
inline std::vector<double> final_richness(
    const std::vector<TimeSeriesRow>& rows) {
  if (rows.empty()) return {};
  const std::uint64_t last = rows.back().tick;
  std::vector<std::pair<NodeId, double>> tail;
  for (const auto& row : rows) {
    if (row.tick == last) {
      tail.emplace_back(row.node_id, static_cast<double>(row.richness));
    }
  }
  std::sort(tail.begin(), tail.end());
  std::vector<double> out;
  for (const auto& [id, r] : tail) out.push_back(r);
  return out;
}

inline RunSummary summarize(const SimResult& result) {
  RunSummary s;
  s.mode = result.config.mode;
  s.seed = result.config.seed;
  s.richness_stddev_final = stddev(final_richness(result.time_series));
  double lifetime = 0.0;
  for (const auto& death : result.death_tick) {
    lifetime += static_cast<double>(death ? *death : result.config.ticks + 1);
  }
  s.mean_lifetime =
      result.death_tick.empty()
          ? 0.0
          : lifetime / static_cast<double>(result.death_tick.size());
  s.delivery_rate = result.sent == 0 ? 0.0
                                     : static_cast<double>(result.delivered) /
                                           static_cast<double>(result.sent);
  s.drops = result.drops;
  return s;
}

// timeseries.csv

inline constexpr std::string_view kTimeSeriesHeader =
    "tick,node_id,battery_j,richness,alive";

inline void write_timeseries_csv(std::ostream& out,
                                 const std::vector<TimeSeriesRow>& rows) {
  out << kTimeSeriesHeader << '\n';
  for (const auto& r : rows) {
    out << r.tick << ',' << r.node_id << ',' << format_double(r.battery)
        << ',' << r.richness << ',' << (r.alive ? 1 : 0) << '\n';
  }
}

inline std::vector<TimeSeriesRow> read_timeseries_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTimeSeriesHeader) {
    throw Error(ErrorCode::kParse, "timeseries CSV: bad header");
  }
  std::vector<TimeSeriesRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    try {
      if (cells.size() != 5) throw Error(ErrorCode::kParse, "column count");
      const auto alive = parse_uint(cells[4]);
      if (alive > 1) throw Error(ErrorCode::kParse, "alive flag");
      rows.push_back(TimeSeriesRow{
          parse_uint(cells[0]), static_cast<NodeId>(parse_uint(cells[1])),
          parse_double(cells[2]), parse_uint(cells[3]), alive == 1});
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, "timeseries CSV line " +
                                         std::to_string(line_no) + ": " +
                                         e.what());
    }
  }
  return rows;
}

// summary.csv

inline constexpr std::string_view kSummaryHeader =
    "mode,seed,richness_stddev_final,mean_lifetime,delivery_rate,"
    "drops_no_route,drops_cannot_afford,drops_relay_refused,"
    "drops_negative_payoff,drops_node_died";

inline void write_summary_row(std::ostream& out, const RunSummary& s) {
  out << to_string(s.mode) << ',' << s.seed << ','
      << format_double(s.richness_stddev_final) << ','
      << format_double(s.mean_lifetime) << ','
      << format_double(s.delivery_rate);
  for (auto d : s.drops) out << ',' << d;
  out << '\n';
}

inline std::vector<RunSummary> read_summary_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSummaryHeader) {
    throw Error(ErrorCode::kParse, "summary CSV: bad header");
  }
  std::vector<RunSummary> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 5 + kDropReasonCount) {
      throw Error(ErrorCode::kParse, "summary CSV: column count");
    }
    RunSummary s;
    if (cells[0] == "faster") {
      s.mode = Mode::kFaster;
    } else if (cells[0] == "baseline") {
      s.mode = Mode::kBaseline;
    } else {
      throw Error(ErrorCode::kParse, "summary CSV: bad mode");
    }
    s.seed = parse_uint(cells[1]);
    s.richness_stddev_final = parse_double(cells[2]);
    s.mean_lifetime = parse_double(cells[3]);
    s.delivery_rate = parse_double(cells[4]);
    for (std::size_t i = 0; i < kDropReasonCount; ++i) {
      s.drops[i] = parse_uint(cells[5 + i]);
    }
    out.push_back(s);
  }
  return out;
}

// plotdata_*.csv: one row per tick, one column per node.

template <typename Cell>
void write_plot_matrix(std::ostream& out, const SimResult& result,
                       Cell&& cell) {
  const std::size_t n = result.death_tick.size();
  out << "tick";
  for (std::size_t i = 0; i < n; ++i) out << ",node_" << i;
  out << '\n';
  for (std::size_t row = 0; row * n < result.time_series.size(); ++row) {
    out << result.time_series[row * n].tick;
    for (std::size_t i = 0; i < n; ++i) {
      out << ',' << cell(result.time_series[row * n + i]);
    }
    out << '\n';
  }
}

// packets.csv: tick,sender,destination,route,outcome,charge

inline void write_packet_log_csv(std::ostream& out, const SimResult& result) {
  out << "tick,sender,destination,route,outcome,charge\n";
  for (const auto& p : result.packets) {
    out << p.tick << ',' << p.sender << ',' << p.destination << ',';
    for (std::size_t i = 0; i < p.route.size(); ++i) {
      if (i) out << '-';
      out << p.route[i];
    }
    out << ',' << (p.drop ? to_string(*p.drop) : "delivered") << ','
        << p.charge << '\n';
  }
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string() +
                                    " for writing");
  }
  return out;
}

inline void close_output(std::ofstream& out,
                         const std::filesystem::path& path) {
  out.close();
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

}  // namespace detail

/// Runs one simulation and writes timeseries.csv, summary.csv and the two
/// plot matrices (plus packets.csv when requested) into `out_dir`.
inline RunSummary run_experiment(const SimConfig& config,
                                 const std::filesystem::path& out_dir,
                                 bool packet_log = false) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                "cannot create " + out_dir.string() + ": " + ec.message());
  }
  const SimResult result = run(config);
  const RunSummary summary = summarize(result);

  auto emit = [&](const char* name, auto&& writer) {
    const auto path = out_dir / name;
    auto out = detail::open_output(path);
    writer(out);
    detail::close_output(out, path);
  };
  emit("timeseries.csv",
       [&](std::ostream& o) { write_timeseries_csv(o, result.time_series); });
  emit("summary.csv", [&](std::ostream& o) {
    o << kSummaryHeader << '\n';
    write_summary_row(o, summary);
  });
  emit("plotdata_richness.csv", [&](std::ostream& o) {
    write_plot_matrix(o, result,
                      [](const TimeSeriesRow& r) { return r.richness; });
  });
  emit("plotdata_battery.csv", [&](std::ostream& o) {
    write_plot_matrix(o, result, [](const TimeSeriesRow& r) {
      return format_double(r.battery);
    });
  });
  if (packet_log) {
    emit("packets.csv",
         [&](std::ostream& o) { write_packet_log_csv(o, result); });
  }
  return summary;
}

struct ComparisonRow {
  std::uint64_t seed = 0;
  RunSummary faster;
  RunSummary baseline;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  /// Fraction of seeds where FASTER has strictly lower final richness stddev.
  double richness_win_fraction = 0.0;
  /// Fraction of seeds where FASTER has strictly higher mean lifetime.
  double lifetime_win_fraction = 0.0;
};

inline constexpr std::string_view kComparisonHeader =
    "seed,richness_stddev_final_faster,richness_stddev_final_baseline,"
    "mean_lifetime_faster,mean_lifetime_baseline";

/// Runs both modes for every seed. Runs are independent and execute on up to
/// `jobs` threads; results are collected in seed order. When `out_dir` is
/// non-empty, each run gets its own `<mode>_seed<N>/` directory and a
/// comparison.csv is written at the top.
inline ComparisonReport compare_modes(const SimConfig& config,
                                      const std::vector<std::uint64_t>& seeds,
                                      const std::filesystem::path& out_dir,
                                      std::size_t jobs = 1) {
  if (seeds.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one seed");
  }
  jobs = std::max<std::size_t>(jobs, 1);

  struct Task {
    SimConfig config;
    std::filesystem::path dir;
  };
  std::vector<Task> tasks;
  for (auto seed : seeds) {
    for (Mode mode : {Mode::kFaster, Mode::kBaseline}) {
      SimConfig c = config;
      c.seed = seed;
      c.mode = mode;
      std::filesystem::path dir;
      if (!out_dir.empty()) {
        dir = out_dir / (std::string(to_string(mode)) + "_seed" +
                         std::to_string(seed));
      }
      tasks.push_back(Task{c, dir});
    }
  }

  auto execute = [](const Task& t) {
    return t.dir.empty() ? summarize(run(t.config))
                         : run_experiment(t.config, t.dir);
  };
  std::vector<RunSummary> summaries(tasks.size());
  for (std::size_t begin = 0; begin < tasks.size(); begin += jobs) {
    const std::size_t end = std::min(tasks.size(), begin + jobs);
    std::vector<std::future<RunSummary>> pending;
    for (std::size_t i = begin; i < end; ++i) {
      pending.push_back(std::async(std::launch::async, execute,
                                   std::cref(tasks[i])));
    }
    for (std::size_t i = begin; i < end; ++i) {
      summaries[i] = pending[i - begin].get();
    }
  }

  ComparisonReport report;
  std::size_t richness_wins = 0;
  std::size_t lifetime_wins = 0;
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    ComparisonRow row{seeds[k], summaries[2 * k], summaries[2 * k + 1]};
    if (row.faster.richness_stddev_final <
        row.baseline.richness_stddev_final) {
      ++richness_wins;
    }
    if (row.faster.mean_lifetime > row.baseline.mean_lifetime) {
      ++lifetime_wins;
    }
    report.rows.push_back(row);
  }
  const auto total = static_cast<double>(seeds.size());
  report.richness_win_fraction = static_cast<double>(richness_wins) / total;
  report.lifetime_win_fraction = static_cast<double>(lifetime_wins) / total;

  if (!out_dir.empty()) {
    const auto path = out_dir / "comparison.csv";
    auto out = detail::open_output(path);
    out << kComparisonHeader << '\n';
    for (const auto& r : report.rows) {
      out << r.seed << ',' << format_double(r.faster.richness_stddev_final)
          << ',' << format_double(r.baseline.richness_stddev_final) << ','
          << format_double(r.faster.mean_lifetime) << ','
          << format_double(r.baseline.mean_lifetime) << '\n';
    }
    out << "# richness_win_fraction=" << format_double(
                                             report.richness_win_fraction)
        << '\n';
    out << "# lifetime_win_fraction=" << format_double(
                                             report.lifetime_win_fraction)
        << '\n';
    detail::close_output(out, path);
  }
  return report;
}

}  // namespace faster

#endif  // FASTER_METRICS_HPP
