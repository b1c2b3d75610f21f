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

#ifndef FASTER_TESTS_TEST_SUPPORT_HPP
#define FASTER_TESTS_TEST_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "faster/geometry.hpp"
#include "faster/topology.hpp"

namespace faster::testing {

// Route with `relays` intermediate nodes drawn uniformly in a square.
// Sender and destination are at least `min_direct` apart, which keeps hop
// costs within a few thousand times the direct one.
// Node ids: sender 0, relays 1..n, destination n+1.
inline Route random_route(std::mt19937_64& rng, std::size_t relays,
                          double side = 500.0, double min_direct = 100.0) {
  std::map<NodeId, Position> pos;
  auto draw = [&] {
    return Position{unit_uniform(rng) * side, unit_uniform(rng) * side};
  };
  pos[0] = draw();
  const auto dest = static_cast<NodeId>(relays + 1);
  do {
    pos[dest] = draw();
  } while (distance(pos[0], pos[dest]) < min_direct);
  std::vector<NodeId> ids;
  for (NodeId i = 1; i <= relays; ++i) {
    pos[i] = draw();
    ids.push_back(i);
  }
  return Route(0, dest, ids, pos);
}

// Relays placed in order at random points strictly inside the segment.
inline Route random_collinear_route(std::mt19937_64& rng, std::size_t relays) {
  const Position s{unit_uniform(rng) * 500.0, unit_uniform(rng) * 500.0};
  Position d;
  do {
    d = Position{unit_uniform(rng) * 500.0, unit_uniform(rng) * 500.0};
  } while (distance(s, d) < 1.0);
  std::vector<double> ts;
  for (std::size_t i = 0; i < relays; ++i) {
    ts.push_back(0.01 + 0.98 * unit_uniform(rng));
  }
  std::sort(ts.begin(), ts.end());
  std::map<NodeId, Position> pos{{0, s}, {static_cast<NodeId>(relays + 1), d}};
  std::vector<NodeId> ids;
  for (std::size_t i = 0; i < relays; ++i) {
    const auto id = static_cast<NodeId>(i + 1);
    pos[id] = Position{s.x + ts[i] * (d.x - s.x), s.y + ts[i] * (d.y - s.y)};
    ids.push_back(id);
  }
  return Route(0, static_cast<NodeId>(relays + 1), ids, pos);
}

// s=(0,0), a=(100,0), b=(200,0), d=(300,0)
inline Route thirds_route() {
  return Route(0, 3, {1, 2},
               {{0, {0, 0}}, {1, {100, 0}}, {2, {200, 0}}, {3, {300, 0}}});
}

inline Route midpoint_route() {
  return Route(0, 2, {1}, {{0, {0, 0}}, {1, {100, 0}}, {2, {200, 0}}});
}

}  // namespace faster::testing

#endif  // FASTER_TESTS_TEST_SUPPORT_HPP
