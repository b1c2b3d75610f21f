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

#ifndef FASTER_CONFIG_HPP
#define FASTER_CONFIG_HPP

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "faster/error.hpp"
#include "faster/metrics.hpp"
#include "faster/simulator.hpp"

namespace faster {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline bool parse_bool(std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw Error(ErrorCode::kParse, "expected true/false, got '" +
                                     std::string(v) + "'");
}

inline double parse_finite(std::string_view v) {
  const double x = parse_double(v);
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::kParse, "value must be finite");
  }
  return x;
}

}  // namespace detail

/// Parses the flat `key = value` format. `#` starts a comment; blank lines
/// are ignored; keys not present keep their defaults. Unknown keys, repeated
/// keys, malformed lines and out-of-range values are rejected with the
/// offending line number.
inline SimConfig parse_config(std::istream& in) {
  SimConfig cfg;
  bool flat_pay_set = false;

  using Setter = std::function<void(std::string_view)>;
  const std::map<std::string, Setter, std::less<>> setters{
      {"n_nodes", [&](auto v) { cfg.n_nodes = parse_uint(v); }},
      {"area",
       [&](std::string_view v) {
         const auto x = v.find('x');
         if (x == std::string_view::npos) {
           throw Error(ErrorCode::kParse, "area must be WIDTHxHEIGHT");
         }
         cfg.area.width = detail::parse_finite(detail::trim(v.substr(0, x)));
         cfg.area.height = detail::parse_finite(detail::trim(v.substr(x + 1)));
       }},
      {"comm_range", [&](auto v) { cfg.comm_range = detail::parse_finite(v); }},
      {"ticks", [&](auto v) { cfg.ticks = parse_uint(v); }},
      {"p_send", [&](auto v) { cfg.p_send = detail::parse_finite(v); }},
      {"mode",
       [&](std::string_view v) {
         if (v == "faster") {
           cfg.mode = Mode::kFaster;
         } else if (v == "baseline") {
           cfg.mode = Mode::kBaseline;
         } else {
           throw Error(ErrorCode::kParse, "mode must be faster or baseline");
         }
       }},
      {"variant",
       [&](std::string_view v) {
         if (v == "saved") {
           cfg.variant = CoalitionValueVariant::kSaved;
         } else if (v == "literal") {
           cfg.variant = CoalitionValueVariant::kLiteral;
         } else {
           throw Error(ErrorCode::kParse, "variant must be saved or literal");
         }
       }},
      {"epsilon_min",
       [&](auto v) { cfg.epsilon_min = detail::parse_finite(v); }},
      {"currency_weight", [&](auto v) { cfg.currency_weight = parse_uint(v); }},
      {"initial_richness",
       [&](auto v) { cfg.initial_richness = parse_uint(v); }},
      {"initial_energy",
       [&](auto v) { cfg.initial_energy = detail::parse_finite(v); }},
      {"p_tx", [&](auto v) { cfg.p_tx = detail::parse_finite(v); }},
      {"p_rx", [&](auto v) { cfg.p_rx = detail::parse_finite(v); }},
      {"p_idle", [&](auto v) { cfg.p_idle = detail::parse_finite(v); }},
      {"tick_seconds",
       [&](auto v) { cfg.tick_seconds = detail::parse_finite(v); }},
      {"baseline_flat_pay",
       [&](auto v) {
         cfg.baseline_flat_pay = parse_uint(v);
         flat_pay_set = true;
       }},
      {"baseline_refusal_threshold",
       [&](auto v) { cfg.baseline_refusal_threshold = detail::parse_finite(v); }},
      {"routing_policy",
       [&](std::string_view v) {
         if (v == "min_energy") {
           cfg.routing_policy = RoutingPolicy::kMinEnergy;
         } else if (v == "min_hop") {
           cfg.routing_policy = RoutingPolicy::kMinHop;
         } else {
           throw Error(ErrorCode::kParse,
                       "routing_policy must be min_energy or min_hop");
         }
       }},
      {"distance_scaled_tx",
       [&](auto v) { cfg.distance_scaled_tx = detail::parse_bool(v); }},
      {"max_exact_n", [&](auto v) { cfg.max_exact_n = parse_uint(v); }},
      {"seed", [&](auto v) { cfg.seed = parse_uint(v); }},
  };

  std::map<std::string, std::size_t, std::less<>> seen;
  std::string raw;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value'");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail("expected 'key = value'");
    const auto it = setters.find(key);
    if (it == setters.end()) fail("unknown key '" + std::string(key) + "'");
    if (const auto prev = seen.find(key); prev != seen.end()) {
      fail("duplicate key '" + std::string(key) + "' (first on line " +
           std::to_string(prev->second) + ")");
    }
    seen.emplace(std::string(key), line_no);
    try {
      it->second(value);
      if (!flat_pay_set) {
        cfg.baseline_flat_pay = static_cast<std::uint64_t>(
            std::llround(static_cast<double>(cfg.currency_weight) * 0.5));
      }
      cfg.validate();
    } catch (const Error& e) {
      fail(std::string(key) + ": " + e.what());
    }
  }
  return cfg;
}

inline SimConfig parse_config_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

inline SimConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return parse_config(in);
}

/// Writes every key so that parse_config reproduces `cfg` exactly.
inline void write_config(std::ostream& out, const SimConfig& cfg) {
  out << "n_nodes = " << cfg.n_nodes << '\n'
      << "area = " << format_double(cfg.area.width) << 'x'
      << format_double(cfg.area.height) << '\n'
      << "comm_range = " << format_double(cfg.comm_range) << '\n'
      << "ticks = " << cfg.ticks << '\n'
      << "p_send = " << format_double(cfg.p_send) << '\n'
      << "mode = " << to_string(cfg.mode) << '\n'
      << "variant = " << to_string(cfg.variant) << '\n'
      << "epsilon_min = " << format_double(cfg.epsilon_min) << '\n'
      << "currency_weight = " << cfg.currency_weight << '\n'
      << "initial_richness = " << cfg.initial_richness << '\n'
      << "initial_energy = " << format_double(cfg.initial_energy) << '\n'
      << "p_tx = " << format_double(cfg.p_tx) << '\n'
      << "p_rx = " << format_double(cfg.p_rx) << '\n'
      << "p_idle = " << format_double(cfg.p_idle) << '\n'
      << "tick_seconds = " << format_double(cfg.tick_seconds) << '\n'
      << "baseline_flat_pay = " << cfg.baseline_flat_pay << '\n'
      << "baseline_refusal_threshold = "
      << format_double(cfg.baseline_refusal_threshold) << '\n'
      << "routing_policy = " << to_string(cfg.routing_policy) << '\n'
      << "distance_scaled_tx = " << (cfg.distance_scaled_tx ? "true" : "false")
      << '\n'
      << "max_exact_n = " << cfg.max_exact_n << '\n'
      << "seed = " << cfg.seed << '\n';
}

}  // namespace faster

#endif  // FASTER_CONFIG_HPP
