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

#ifndef FASTER_TOPOLOGY_HPP
#define FASTER_TOPOLOGY_HPP

#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "faster/csv.hpp"
#include "faster/error.hpp"
#include "faster/geometry.hpp"

namespace faster {

struct Area {
  Meters width = 500.0;
  Meters height = 500.0;

  friend bool operator==(const Area&, const Area&) = default;
};

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw. Used
/// instead of std::uniform_real_distribution, whose output is not pinned by
/// the standard.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection, bound > 0.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

/// Stationary nodes with ids 0..n-1. Two alive nodes are linked iff they are
/// within comm_range of each other; links are bidirectional.
class Topology {
 public:
  Topology(std::vector<Position> positions, Meters comm_range, Area area)
      : positions_(std::move(positions)),
        alive_(positions_.size(), true),
        comm_range_(comm_range),
        area_(area) {
    if (!(comm_range_ > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "comm_range must be positive");
    }
    if (!(area_.width > 0.0) || !(area_.height > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "area must be positive");
    }
    for (std::size_t i = 0; i < positions_.size(); ++i) {
      const Position& p = positions_[i];
      if (!(p.x >= 0.0 && p.x <= area_.width && p.y >= 0.0 &&
            p.y <= area_.height)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "node " + std::to_string(i) + " lies outside the area");
      }
    }
  }

  std::size_t size() const noexcept { return positions_.size(); }
  Meters comm_range() const noexcept { return comm_range_; }
  const Area& area() const noexcept { return area_; }
  const std::vector<Position>& positions() const noexcept {
    return positions_;
  }

  const Position& position(NodeId id) const {
    check(id);
    return positions_[id];
  }

  bool alive(NodeId id) const {
    check(id);
    return alive_[id];
  }
  void set_alive(NodeId id, bool alive) {
    check(id);
    alive_[id] = alive;
  }

  bool in_range(NodeId a, NodeId b) const {
    return distance(position(a), position(b)) <= comm_range_;
  }

  bool linked(NodeId a, NodeId b) const {
    return a != b && alive(a) && alive(b) && in_range(a, b);
  }

  void check(NodeId id) const {
    if (id >= positions_.size()) {
      throw Error(ErrorCode::kInvalidNode,
                  "unknown node id " + std::to_string(id));
    }
  }

 private:
  std::vector<Position> positions_;
  std::vector<bool> alive_;
  Meters comm_range_;
  Area area_;
};

inline Topology generate_topology(std::size_t n_nodes, Area area,
                                  Meters comm_range, std::uint64_t seed) {
  if (n_nodes < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two nodes");
  }
  std::mt19937_64 rng(seed);
  std::vector<Position> positions;
  positions.reserve(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const double x = unit_uniform(rng) * area.width;
    const double y = unit_uniform(rng) * area.height;
    positions.push_back(Position{x, y});
  }
  return Topology(std::move(positions), comm_range, area);
}

enum class RoutingPolicy { kMinEnergy, kMinHop };

constexpr std::string_view to_string(RoutingPolicy p) noexcept {
  return p == RoutingPolicy::kMinEnergy ? "min_energy" : "min_hop";
}

namespace detail {

struct PathLabel {
  double energy = std::numeric_limits<double>::infinity();
  std::size_t hops = 0;
  std::vector<NodeId> nodes;
};

inline bool better(const PathLabel& a, const PathLabel& b,
                   RoutingPolicy policy) {
  if (policy == RoutingPolicy::kMinEnergy) {
    return std::tie(a.energy, a.hops, a.nodes) <
           std::tie(b.energy, b.hops, b.nodes);
  }
  return std::tie(a.hops, a.energy, a.nodes) <
         std::tie(b.hops, b.energy, b.nodes);
}

}  // namespace detail

/// Sum of d^4 over the hops of a node sequence; the min_energy edge metric.
inline double path_energy(const Topology& topo,
                          const std::vector<NodeId>& nodes) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double d = distance(topo.position(nodes[i]),
                              topo.position(nodes[i + 1]));
    total += (d * d) * (d * d);
  }
  return total;
}

/// Builds a Route carrying the positions of every node in `nodes`.
inline Route route_from_path(const Topology& topo,
                             const std::vector<NodeId>& nodes) {
  if (nodes.size() < 2) {
    throw Error(ErrorCode::kInvalidRoute, "path needs two endpoints");
  }
  std::map<NodeId, Position> positions;
  for (NodeId id : nodes) positions.emplace(id, topo.position(id));
  return Route(nodes.front(), nodes.back(),
               std::vector<NodeId>(nodes.begin() + 1, nodes.end() - 1),
               std::move(positions));
}

/// Shortest path over the alive connectivity graph. Labels are compared as
/// (energy, hops, node sequence) for min_energy and (hops, energy, node
/// sequence) for min_hop; both orders have optimal substructure, so a label
/// setting Dijkstra returns the unique best path.
inline std::optional<Route> find_route(const Topology& topo, NodeId sender,
                                       NodeId destination,
                                       RoutingPolicy policy =
                                           RoutingPolicy::kMinEnergy) {
  topo.check(sender);
  topo.check(destination);
  if (sender == destination) {
    throw Error(ErrorCode::kInvalidArgument, "sender equals destination");
  }
  if (!topo.alive(sender) || !topo.alive(destination)) return std::nullopt;

  const std::size_t n = topo.size();
  std::vector<detail::PathLabel> label(n);
  std::vector<bool> settled(n, false);
  label[sender] = detail::PathLabel{0.0, 0, {sender}};

  for (;;) {
    std::optional<NodeId> next;
    for (NodeId v = 0; v < n; ++v) {
      if (settled[v] || label[v].nodes.empty()) continue;
      if (!next || detail::better(label[v], label[*next], policy)) next = v;
    }
    if (!next) break;
    const NodeId u = *next;
    settled[u] = true;
    if (u == destination) break;

    for (NodeId v = 0; v < n; ++v) {
      if (settled[v] || !topo.linked(u, v)) continue;
      const double d = distance(topo.position(u), topo.position(v));
      detail::PathLabel candidate{label[u].energy + (d * d) * (d * d),
                                  label[u].hops + 1, label[u].nodes};
      candidate.nodes.push_back(v);
      if (label[v].nodes.empty() ||
          detail::better(candidate, label[v], policy)) {
        label[v] = std::move(candidate);
      }
    }
  }

  if (!settled[destination]) return std::nullopt;
  return route_from_path(topo, label[destination].nodes);
}

// CSV: node_id,x,y with six decimals.

inline void write_topology_csv(std::ostream& out, const Topology& topo) {
  out << "node_id,x,y\n";
  char buf[96];
  for (std::size_t i = 0; i < topo.size(); ++i) {
    const auto& p = topo.positions()[i];
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f\n", i, p.x, p.y);
    out << buf;
  }
}

inline Topology read_topology_csv(std::istream& in, Meters comm_range,
                                  Area area) {
  std::string line;
  if (!std::getline(in, line) || line != "node_id,x,y") {
    throw Error(ErrorCode::kParse, "topology CSV: bad header");
  }
  std::vector<Position> positions;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    bool ok = cells.size() == 3;
    Position p;
    if (ok) {
      try {
        ok = parse_uint(cells[0]) == positions.size();
        p = Position{parse_double(cells[1]), parse_double(cells[2])};
      } catch (const Error&) {
        ok = false;
      }
    }
    if (!ok) {
      throw Error(ErrorCode::kParse,
                  "topology CSV: bad row at line " + std::to_string(line_no));
    }
    positions.push_back(p);
  }
  return Topology(std::move(positions), comm_range, area);
}

}  // namespace faster

#endif  // FASTER_TOPOLOGY_HPP
