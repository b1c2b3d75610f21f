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

#ifndef FASTER_SIMULATOR_HPP
#define FASTER_SIMULATOR_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "faster/error.hpp"
#include "faster/geometry.hpp"
#include "faster/ledger.hpp"
#include "faster/shapley.hpp"
#include "faster/topology.hpp"

namespace faster {

using Joules = double;
using Watts = double;

enum class Mode { kFaster, kBaseline };

constexpr std::string_view to_string(Mode m) noexcept {
  return m == Mode::kFaster ? "faster" : "baseline";
}

/// Experiment parameters. Defaults reproduce the published setup where it is
/// stated and fill the rest with the documented free choices.
struct SimConfig {
  std::size_t n_nodes = 20;
  Area area{500.0, 500.0};
  Meters comm_range = 250.0;
  std::uint64_t ticks = 200;
  double p_send = 0.1;
  Mode mode = Mode::kFaster;
  CoalitionValueVariant variant = CoalitionValueVariant::kSaved;
  NormalizedPower epsilon_min = 0.0;
  std::uint64_t currency_weight = 1000;
  std::uint64_t initial_richness = 10000;
  Joules initial_energy = 100.0;
  Watts p_tx = 1.4;
  Watts p_rx = 1.0;
  Watts p_idle = 0.83;
  double tick_seconds = 1.0;
  std::uint64_t baseline_flat_pay = 500;
  double baseline_refusal_threshold = 0.2;
  RoutingPolicy routing_policy = RoutingPolicy::kMinEnergy;
  bool distance_scaled_tx = false;
  std::size_t max_exact_n = kDefaultMaxExactRelays;
  std::uint64_t seed = 1;

  void validate() const {
    auto fail = [](const std::string& what) {
      throw Error(ErrorCode::kInvalidArgument, what);
    };
    if (n_nodes < 2) fail("n_nodes must be >= 2");
    if (!(area.width > 0.0) || !(area.height > 0.0)) fail("area must be > 0");
    if (!(comm_range > 0.0)) fail("comm_range must be > 0");
    if (!(p_send >= 0.0 && p_send <= 1.0)) fail("p_send must be in [0, 1]");
    if (!(epsilon_min >= 0.0)) fail("epsilon_min must be >= 0");
    if (currency_weight == 0) fail("currency_weight must be > 0");
    if (!(initial_energy > 0.0)) fail("initial_energy must be > 0");
    if (!(p_tx > 0.0) || !(p_rx > 0.0) || !(p_idle > 0.0)) {
      fail("all powers must be > 0");
    }
    if (!(tick_seconds > 0.0)) fail("tick_seconds must be > 0");
    if (!(baseline_refusal_threshold > 0.0 &&
          baseline_refusal_threshold < 1.0)) {
      fail("baseline_refusal_threshold must be in (0, 1)");
    }
    if (max_exact_n == 0 || max_exact_n > 24) {
      fail("max_exact_n must be in [1, 24]");
    }
  }
};

struct NodeState {
  NodeId id = 0;
  Position position;
  Joules battery = 0.0;
  CurrencyAmount richness;
  bool alive = true;
};

enum class DropReason {
  kNoRoute,
  kCannotAfford,
  kRelayRefused,
  kNegativePayoff,
  kNodeDied,
};
inline constexpr std::size_t kDropReasonCount = 5;

constexpr std::string_view to_string(DropReason r) noexcept {
  switch (r) {
    case DropReason::kNoRoute: return "no-route";
    case DropReason::kCannotAfford: return "cannot-afford";
    case DropReason::kRelayRefused: return "relay-refused";
    case DropReason::kNegativePayoff: return "negative-payoff";
    case DropReason::kNodeDied: return "node-died";
  }
  return "unknown";
}

/// Result of one send attempt. `route` is empty when no route was found.
struct PacketRecord {
  std::uint64_t tick = 0;
  NodeId sender = 0;
  NodeId destination = 0;
  std::vector<NodeId> route;
  std::optional<DropReason> drop;
  /// Net amount taken from the sender (debit minus refund).
  std::uint64_t charge = 0;
  /// Credit received by each relay that forwarded the packet.
  std::vector<std::pair<NodeId, std::uint64_t>> credits;
  /// Normalized saving of the relayed route used for settlement, if any.
  std::optional<NormalizedPower> saving;

  bool delivered() const noexcept { return !drop.has_value(); }
};

struct TimeSeriesRow {
  std::uint64_t tick = 0;
  NodeId node_id = 0;
  Joules battery = 0.0;
  std::uint64_t richness = 0;
  bool alive = true;

  friend bool operator==(const TimeSeriesRow&, const TimeSeriesRow&) = default;
};

struct SimResult {
  SimConfig config;
  std::vector<TimeSeriesRow> time_series;
  /// Tick at whose end the node died; empty for survivors.
  std::vector<std::optional<std::uint64_t>> death_tick;
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::array<std::uint64_t, kDropReasonCount> drops{};
  std::vector<PacketRecord> packets;

  std::uint64_t dropped() const {
    std::uint64_t total = 0;
    for (auto d : drops) total += d;
    return total;
  }
  std::uint64_t drops_for(DropReason r) const {
    return drops[static_cast<std::size_t>(r)];
  }
};

/// Result of asking a route's relays to forward: either a purse they accept,
/// a refusal, or neither when the route has no relays.
struct PurseOffer {
  std::optional<PacketPurse> purse;
  std::optional<DropReason> refusal;
};

/// Relays accept only when the route saves more than epsilon_min, the route
/// is small enough for the exact Shapley computation and every relay would
/// receive at least one micro-credit.
inline PurseOffer offer_purse(const Route& route, const SimConfig& config) {
  if (route.relays().empty()) return {};
  if (!relay_acceptable(route, config.epsilon_min) ||
      route.relays().size() > config.max_exact_n) {
    return {std::nullopt, DropReason::kRelayRefused};
  }
  const auto payoffs = shapley(route, config.variant, config.max_exact_n);
  for (const auto& [id, phi] : payoffs.shares) {
    if (!(phi > 0.0)) return {std::nullopt, DropReason::kNegativePayoff};
  }
  try {
    return {build_purse(payoffs, route, config.currency_weight), std::nullopt};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNonPositivePayoff) throw;
    return {std::nullopt, DropReason::kNegativePayoff};
  }
}

/// Tick-based simulation of one network. Single threaded; given the same
/// config and topology every run is bit-identical.
class Simulation {
 public:
  explicit Simulation(const SimConfig& config)
      : Simulation(config, generate_topology(config.n_nodes, config.area,
                                             config.comm_range, config.seed)) {}

  Simulation(const SimConfig& config, Topology topology)
      : config_(config),
        topology_(std::move(topology)),
        ledger_(topology_.size(), CurrencyAmount{config.initial_richness}),
        rng_(config.seed ^ 0x9e3779b97f4a7c15ULL) {
    config_.validate();
    if (topology_.size() != config_.n_nodes) {
      throw Error(ErrorCode::kInvalidArgument,
                  "topology size does not match n_nodes");
    }
    nodes_.reserve(topology_.size());
    for (NodeId id = 0; id < topology_.size(); ++id) {
      nodes_.push_back(NodeState{id, topology_.position(id),
                                 config_.initial_energy,
                                 ledger_.balance(id), true});
    }
    result_.config = config_;
    result_.death_tick.assign(nodes_.size(), std::nullopt);
    snapshot();
  }

  const SimConfig& config() const noexcept { return config_; }
  const Topology& topology() const noexcept { return topology_; }
  const Ledger& ledger() const noexcept { return ledger_; }
  const std::vector<NodeState>& nodes() const noexcept { return nodes_; }
  std::uint64_t tick() const noexcept { return tick_; }
  const SimResult& result() const noexcept { return result_; }

  /// Overrides a node's battery, for scripted scenarios.
  void set_battery(NodeId id, Joules battery) {
    topology_.check(id);
    nodes_[id].battery = std::clamp(battery, 0.0, config_.initial_energy);
  }

  /// One tick: coin-toss traffic in ascending node order, then idle drain,
  /// then death marking.
  void step() {
    for (NodeId id = 0; id < nodes_.size(); ++id) {
      if (!nodes_[id].alive) continue;
      if (!(unit_uniform(rng_) < config_.p_send)) continue;
      std::vector<NodeId> candidates;
      for (const auto& other : nodes_) {
        if (other.alive && other.id != id) candidates.push_back(other.id);
      }
      if (candidates.empty()) continue;
      const NodeId dest = candidates[uniform_index(rng_, candidates.size())];
      send_packet(id, dest);
    }
    end_tick();
  }

  /// Attempts one packet from `sender` to `destination` within the current
  /// tick. Failures are recorded as drops, never thrown.
  const PacketRecord& send_packet(NodeId sender, NodeId destination) {
    topology_.check(sender);
    topology_.check(destination);
    if (sender == destination) {
      throw Error(ErrorCode::kInvalidArgument, "sender equals destination");
    }
    PacketRecord record;
    record.tick = tick_ + 1;
    record.sender = sender;
    record.destination = destination;
    if (config_.mode == Mode::kFaster) {
      send_faster(record);
    } else {
      send_baseline(record);
    }
    ++result_.sent;
    if (record.delivered()) {
      ++result_.delivered;
    } else {
      ++result_.drops[static_cast<std::size_t>(*record.drop)];
    }
    result_.packets.push_back(std::move(record));
    return result_.packets.back();
  }

  /// Idle drain for every alive node, then nodes at zero battery die.
  void end_tick() {
    ++tick_;
    for (auto& node : nodes_) {
      if (node.alive) drain(node.id, config_.p_idle * config_.tick_seconds);
    }
    for (auto& node : nodes_) {
      if (node.alive && node.battery <= 0.0) {
        node.alive = false;
        topology_.set_alive(node.id, false);
        result_.death_tick[node.id] = tick_;
      }
    }
    snapshot();
  }

  void run_to_end() {
    while (tick_ < config_.ticks) step();
  }

  SimResult take_result() && { return std::move(result_); }

 private:
  void send_faster(PacketRecord& record) {
    const NodeId s = record.sender;
    const NodeId d = record.destination;
    auto route = find_route(topology_, s, d, config_.routing_policy);
    if (!route) {
      record.drop = DropReason::kNoRoute;
      return;
    }

    const bool direct_possible = topology_.linked(s, d);
    auto fall_back = [&](DropReason reason) {
      if (direct_possible) {
        route = route->with_relays({});
        return true;
      }
      record.route = route->path();
      record.drop = reason;
      return false;
    };

    auto offer = offer_purse(*route, config_);
    if (offer.refusal && !fall_back(*offer.refusal)) return;
    auto& purse = offer.purse;
    if (purse) record.saving = path_saving(*route);
    record.route = route->path();

    if (purse) {
      try {
        ledger_.debit_sender(*purse);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kCannotAfford) throw;
        record.drop = DropReason::kCannotAfford;
        return;
      }
      record.charge = purse->total_charge().micro_credits;
    }

    const bool ok = transmit(*route, [&](NodeId relay) {
      if (!purse) return true;
      const auto paid = ledger_.claim_section(*purse, relay);
      record.credits.emplace_back(relay, paid.micro_credits);
      return true;
    });
    if (purse) {
      record.charge -= ledger_.refund_unclaimed(*purse).micro_credits;
    }
    sync_richness(record);
    if (!ok) record.drop = DropReason::kNodeDied;
  }

  void send_baseline(PacketRecord& record) {
    auto route = find_route(topology_, record.sender, record.destination,
                            config_.routing_policy);
    if (!route) {
      record.drop = DropReason::kNoRoute;
      return;
    }
    record.route = route->path();

    const std::uint64_t fee = config_.baseline_flat_pay;
    const std::uint64_t charge = fee * route->relays().size();
    if (ledger_.balance(record.sender).micro_credits < charge) {
      record.drop = DropReason::kCannotAfford;
      return;
    }

    bool refused = false;
    const bool ok = transmit(*route, [&](NodeId relay) {
      if (!(nodes_[relay].battery / config_.initial_energy >
            config_.baseline_refusal_threshold)) {
        refused = true;
        return false;
      }
      if (fee > 0) {
        ledger_.transfer(record.sender, relay, CurrencyAmount{fee});
        record.charge += fee;
        record.credits.emplace_back(relay, fee);
      }
      return true;
    });
    sync_richness(record);
    if (refused) {
      record.drop = DropReason::kRelayRefused;
    } else if (!ok) {
      record.drop = DropReason::kNodeDied;
    }
  }

  /// Moves the packet hop by hop. A hop needs both ends to hold energy; a
  /// relay is paid (`on_forward`) as it forwards. Returns false if a depleted
  /// node stopped the packet.
  template <typename OnForward>
  bool transmit(const Route& route, OnForward&& on_forward) {
    const auto hops = route.hops();
    for (std::size_t i = 0; i < hops.size(); ++i) {
      const Hop& hop = hops[i];
      if (nodes_[hop.from].battery <= 0.0 || nodes_[hop.to].battery <= 0.0) {
        return false;
      }
      if (i > 0 && !on_forward(hop.from)) return false;
      drain(hop.from, tx_energy(hop.length));
      drain(hop.to, config_.p_rx * config_.tick_seconds);
    }
    return true;
  }

  Joules tx_energy(Meters hop_length) const {
    Joules e = config_.p_tx * config_.tick_seconds;
    if (config_.distance_scaled_tx) {
      e *= tx_cost(hop_length, config_.comm_range);
    }
    return e;
  }

  void drain(NodeId id, Joules amount) {
    auto& b = nodes_[id].battery;
    b = std::max(0.0, b - amount);
  }

  void sync_richness(const PacketRecord& record) {
    nodes_[record.sender].richness = ledger_.balance(record.sender);
    for (const auto& [id, amount] : record.credits) {
      nodes_[id].richness = ledger_.balance(id);
    }
  }

  void snapshot() {
    for (const auto& node : nodes_) {
      result_.time_series.push_back(TimeSeriesRow{
          tick_, node.id, node.battery, node.richness.micro_credits,
          node.alive});
    }
  }

  SimConfig config_;
  Topology topology_;
  Ledger ledger_;
  std::vector<NodeState> nodes_;
  std::mt19937_64 rng_;
  std::uint64_t tick_ = 0;
  SimResult result_;
};

inline SimResult run(const SimConfig& config) {
  Simulation sim(config);
  sim.run_to_end();
  return std::move(sim).take_result();
}

}  // namespace faster

#endif  // FASTER_SIMULATOR_HPP
