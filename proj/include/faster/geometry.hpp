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

#ifndef FASTER_GEOMETRY_HPP
#define FASTER_GEOMETRY_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "faster/error.hpp"

namespace faster {

using NodeId = std::uint32_t;

/// Length in meters.
using Meters = double;

/// Transmission power expressed as a fraction of the direct
/// sender-to-destination transmission, which costs exactly 1.
using NormalizedPower = double;

struct Position {
  Meters x = 0.0;
  Meters y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

inline Meters distance(const Position& a, const Position& b) noexcept {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Two-ray ground reflection cost of a hop of length `d`, normalized so that
/// a hop of length `d_ref` costs 1.
inline NormalizedPower tx_cost(Meters d, Meters d_ref) {
  if (!(d_ref > 0.0)) {
    throw Error(ErrorCode::kInvalidReference,
                "reference distance must be positive");
  }
  if (!(d >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "hop distance must be >= 0");
  }
  const double r = d / d_ref;
  const double r2 = r * r;
  return r2 * r2;
}

struct Hop {
  NodeId from;
  NodeId to;
  Meters length;
};

/// A sender -> relays -> destination path with the coordinates of every node
/// on it. Construction validates the route; instances are always well formed.
class Route {
 public:
  Route(NodeId sender, NodeId destination, std::vector<NodeId> relays,
        std::map<NodeId, Position> positions)
      : sender_(sender),
        destination_(destination),
        relays_(std::move(relays)),
        positions_(std::move(positions)) {
    validate();
  }

  NodeId sender() const noexcept { return sender_; }
  NodeId destination() const noexcept { return destination_; }
  const std::vector<NodeId>& relays() const noexcept { return relays_; }
  const std::map<NodeId, Position>& positions() const noexcept {
    return positions_;
  }

  const Position& position(NodeId id) const {
    auto it = positions_.find(id);
    if (it == positions_.end()) {
      throw Error(ErrorCode::kInvalidNode,
                  "no position for node " + std::to_string(id));
    }
    return it->second;
  }

  /// d_{s,r}: the straight-line sender-to-destination distance.
  Meters direct_distance() const {
    return distance(position(sender_), position(destination_));
  }

  /// Node sequence sender, relays..., destination.
  std::vector<NodeId> path() const {
    std::vector<NodeId> out;
    out.reserve(relays_.size() + 2);
    out.push_back(sender_);
    out.insert(out.end(), relays_.begin(), relays_.end());
    out.push_back(destination_);
    return out;
  }

  std::vector<Hop> hops() const {
    const auto nodes = path();
    std::vector<Hop> out;
    out.reserve(nodes.size() - 1);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      out.push_back(Hop{nodes[i], nodes[i + 1],
                        distance(position(nodes[i]), position(nodes[i + 1]))});
    }
    return out;
  }

  /// Same endpoints and positions, different relay list.
  Route with_relays(std::vector<NodeId> relays) const {
    return Route(sender_, destination_, std::move(relays), positions_);
  }

 private:
  void validate() const {
    if (sender_ == destination_) {
      throw Error(ErrorCode::kInvalidRoute, "sender equals destination");
    }
    std::set<NodeId> seen;
    for (NodeId r : relays_) {
      if (r == sender_ || r == destination_) {
        throw Error(ErrorCode::kInvalidRoute,
                    "relay " + std::to_string(r) + " is an endpoint");
      }
      if (!seen.insert(r).second) {
        throw Error(ErrorCode::kInvalidRoute,
                    "relay " + std::to_string(r) + " repeated");
      }
    }
    for (NodeId id : path()) {
      const Position& p = position(id);
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
        throw Error(ErrorCode::kInvalidRoute,
                    "non-finite position for node " + std::to_string(id));
      }
    }
    if (!(direct_distance() > 0.0)) {
      throw Error(ErrorCode::kInvalidRoute,
                  "sender and destination are coincident");
    }
  }

  NodeId sender_;
  NodeId destination_;
  std::vector<NodeId> relays_;
  std::map<NodeId, Position> positions_;
};

/// Normalized power saved by relaying: 1 minus the summed normalized cost of
/// every hop. Zero for the direct route, negative when relaying wastes power.
inline NormalizedPower path_saving(const Route& route) {
  const Meters d_ref = route.direct_distance();
  NormalizedPower spent = 0.0;
  for (const Hop& hop : route.hops()) spent += tx_cost(hop.length, d_ref);
  return 1.0 - spent;
}

/// A relayed route is worth using only if it strictly saves more than
/// `epsilon_min`.
inline bool relay_acceptable(const Route& route, NormalizedPower epsilon_min) {
  if (!(epsilon_min >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon_min must be >= 0");
  }
  return path_saving(route) > epsilon_min;
}

}  // namespace faster

#endif  // FASTER_GEOMETRY_HPP
