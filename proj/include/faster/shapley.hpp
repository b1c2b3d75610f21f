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

#ifndef FASTER_SHAPLEY_HPP
#define FASTER_SHAPLEY_HPP

#include <algorithm>
#include <bit>
#include <concepts>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "faster/error.hpp"
#include "faster/geometry.hpp"

namespace faster {

/// Subset of a route's relays, stored as a bitmask over relay positions in
/// route order (bit i <=> relays()[i]).
struct Coalition {
  std::uint64_t mask = 0;

  static Coalition of(const Route& route, const std::set<NodeId>& members) {
    Coalition c;
    std::size_t found = 0;
    const auto& relays = route.relays();
    for (std::size_t i = 0; i < relays.size(); ++i) {
      if (members.contains(relays[i])) {
        c.mask |= std::uint64_t{1} << i;
        ++found;
      }
    }
    if (found != members.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "coalition members must be relays of the route");
    }
    return c;
  }

  static Coalition grand(std::size_t n) {
    return Coalition{n >= 64 ? ~std::uint64_t{0}
                             : (std::uint64_t{1} << n) - 1};
  }

  bool contains(std::size_t index) const noexcept {
    return (mask >> index) & 1u;
  }
  std::size_t size() const noexcept { return std::popcount(mask); }

  friend bool operator==(const Coalition&, const Coalition&) = default;
};

/// Two readings of the coalition value function v(S).
///  - kSaved: total normalized power saved by the subpath through S.
///  - kLiteral: per-member sum of 1 - (d(i, i+1) / d_sr)^4, where i+1 is the
///    node after i on the selected route. Additive, and it ignores the
///    sender's first hop.
enum class CoalitionValueVariant { kSaved, kLiteral };

constexpr std::string_view to_string(CoalitionValueVariant v) noexcept {
  return v == CoalitionValueVariant::kSaved ? "saved" : "literal";
}

struct PayoffVector {
  std::map<NodeId, NormalizedPower> shares;
  NormalizedPower grand_value = 0.0;

  NormalizedPower total() const {
    NormalizedPower sum = 0.0;
    for (const auto& [id, share] : shares) sum += share;
    return sum;
  }
};

inline constexpr std::size_t kDefaultMaxExactRelays = 12;
inline constexpr std::size_t kMaxOracleRelays = 8;

inline Route subpath(const Route& route, Coalition coalition) {
  const auto& relays = route.relays();
  if (relays.size() < 64 && (coalition.mask >> relays.size()) != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "coalition references relays beyond the route");
  }
  std::vector<NodeId> kept;
  for (std::size_t i = 0; i < relays.size(); ++i) {
    if (coalition.contains(i)) kept.push_back(relays[i]);
  }
  return route.with_relays(std::move(kept));
}

inline NormalizedPower coalition_value(const Route& route, Coalition coalition,
                                       CoalitionValueVariant variant) {
  if (coalition.mask == 0) return 0.0;
  if (variant == CoalitionValueVariant::kSaved) {
    return path_saving(subpath(route, coalition));
  }
  if (route.relays().size() < 64 &&
      (coalition.mask >> route.relays().size()) != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "coalition references relays beyond the route");
  }
  const auto& relays = route.relays();
  const Meters d_ref = route.direct_distance();
  NormalizedPower value = 0.0;
  for (std::size_t i = 0; i < relays.size(); ++i) {
    if (!coalition.contains(i)) continue;
    const NodeId next =
        i + 1 < relays.size() ? relays[i + 1] : route.destination();
    const Meters d = distance(route.position(relays[i]), route.position(next));
    value += 1.0 - tx_cost(d, d_ref);
  }
  return value;
}

/// Characteristic function over bitmask coalitions of `n` players.
template <typename F>
concept GameValue = requires(const F& f, std::uint64_t mask) {
  { f(mask) } -> std::convertible_to<double>;
};

/// Exact Shapley value by subset enumeration:
///   phi_i = sum_{S contains i} (|S|-1)! (n-|S|)! / n! * [v(S) - v(S \ {i})].
/// v is evaluated once per coalition, 2^n evaluations in total.
template <GameValue F>
std::vector<double> exact_shapley(std::size_t n, const F& value,
                                  std::size_t max_players =
                                      kDefaultMaxExactRelays) {
  if (n > max_players || n >= 32) {
    throw Error(ErrorCode::kCoalitionTooLarge,
                std::to_string(n) + " players exceeds exact limit " +
                    std::to_string(max_players));
  }
  std::vector<double> phi(n, 0.0);
  if (n == 0) return phi;

  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<double> v(count);
  v[0] = 0.0;
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    v[mask] = static_cast<double>(value(mask));
  }

  // (s-1)! (n-s)! / n! == 1 / (n * C(n-1, s-1))
  std::vector<double> weight(n + 1, 0.0);
  double binom = 1.0;
  for (std::size_t s = 1; s <= n; ++s) {
    weight[s] = 1.0 / (static_cast<double>(n) * binom);
    binom = binom * static_cast<double>(n - s) / static_cast<double>(s);
  }

  for (std::uint64_t mask = 1; mask < count; ++mask) {
    const double w = weight[std::popcount(mask)];
    for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) {
      const unsigned i = std::countr_zero(rest);
      phi[i] += w * (v[mask] - v[mask & ~(std::uint64_t{1} << i)]);
    }
  }
  return phi;
}

/// Shapley value as the average marginal contribution over all n! join
/// orders. Independent of exact_shapley; only practical for small n.
template <GameValue F>
std::vector<double> permutation_shapley(std::size_t n, const F& value) {
  if (n > kMaxOracleRelays) {
    throw Error(ErrorCode::kOracleTooLarge,
                std::to_string(n) + " players exceeds oracle limit " +
                    std::to_string(kMaxOracleRelays));
  }
  std::vector<double> phi(n, 0.0);
  if (n == 0) return phi;

  std::vector<unsigned> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::uint64_t permutations = 0;
  do {
    std::uint64_t joined = 0;
    double before = 0.0;
    for (unsigned player : order) {
      joined |= std::uint64_t{1} << player;
      const double after = static_cast<double>(value(joined));
      phi[player] += after - before;
      before = after;
    }
    ++permutations;
  } while (std::next_permutation(order.begin(), order.end()));

  for (double& p : phi) p /= static_cast<double>(permutations);
  return phi;
}

namespace detail {

inline PayoffVector to_payoff(const Route& route,
                              const std::vector<double>& phi,
                              CoalitionValueVariant variant) {
  PayoffVector out;
  const auto& relays = route.relays();
  for (std::size_t i = 0; i < relays.size(); ++i) {
    out.shares.emplace(relays[i], phi[i]);
  }
  out.grand_value =
      coalition_value(route, Coalition::grand(relays.size()), variant);
  return out;
}

}  // namespace detail

inline PayoffVector shapley(const Route& route, CoalitionValueVariant variant,
                            std::size_t max_exact_n = kDefaultMaxExactRelays) {
  const std::size_t n = route.relays().size();
  auto phi = exact_shapley(
      n,
      [&](std::uint64_t mask) {
        return coalition_value(route, Coalition{mask}, variant);
      },
      max_exact_n);
  return detail::to_payoff(route, phi, variant);
}

inline PayoffVector shapley_oracle(const Route& route,
                                   CoalitionValueVariant variant) {
  const std::size_t n = route.relays().size();
  auto phi = permutation_shapley(n, [&](std::uint64_t mask) {
    return coalition_value(route, Coalition{mask}, variant);
  });
  return detail::to_payoff(route, phi, variant);
}

}  // namespace faster

#endif  // FASTER_SHAPLEY_HPP
