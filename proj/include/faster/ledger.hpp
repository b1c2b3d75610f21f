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

#ifndef FASTER_LEDGER_HPP
#define FASTER_LEDGER_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "faster/csv.hpp"
#include "faster/error.hpp"
#include "faster/geometry.hpp"
#include "faster/shapley.hpp"

namespace faster {

/// Non-negative integer count of micro-credits.
struct CurrencyAmount {
  std::uint64_t micro_credits = 0;

  friend auto operator<=>(const CurrencyAmount&,
                          const CurrencyAmount&) = default;
  friend CurrencyAmount operator+(CurrencyAmount a, CurrencyAmount b) {
    return CurrencyAmount{a.micro_credits + b.micro_credits};
  }
};

struct PurseSection {
  NodeId hop_id = 0;
  CurrencyAmount amount;
  NodeId prev_hop = 0;
  NormalizedPower hop_power = 0.0;
};

/// The currency header a sender attaches to a packet: one section per relay,
/// each claimable once and only by the relay it names.
class PacketPurse {
 public:
  PacketPurse(NodeId sender, std::vector<PurseSection> sections)
      : sender_(sender), sections_(std::move(sections)) {
    std::set<NodeId> hops;
    for (const auto& s : sections_) {
      if (s.amount.micro_credits == 0) {
        throw Error(ErrorCode::kNonPositivePayoff,
                    "section for node " + std::to_string(s.hop_id) +
                        " carries no credit");
      }
      if (!hops.insert(s.hop_id).second) {
        throw Error(ErrorCode::kInvalidArgument,
                    "duplicate section for node " + std::to_string(s.hop_id));
      }
      total_.micro_credits += s.amount.micro_credits;
    }
  }

  NodeId sender() const noexcept { return sender_; }
  CurrencyAmount total_charge() const noexcept { return total_; }
  const std::vector<PurseSection>& sections() const noexcept {
    return sections_;
  }
  const std::set<NodeId>& claimed() const noexcept { return claimed_; }

  bool is_claimed(NodeId hop) const { return claimed_.contains(hop); }

  CurrencyAmount unclaimed() const {
    CurrencyAmount left;
    for (const auto& s : sections_) {
      if (!claimed_.contains(s.hop_id)) left = left + s.amount;
    }
    return left;
  }

 private:
  friend class Ledger;

  NodeId sender_;
  CurrencyAmount total_;
  std::vector<PurseSection> sections_;
  std::set<NodeId> claimed_;
  bool debited_ = false;
  bool settled_ = false;
};

/// Converts Shapley shares into integer credits. Each relay receives
/// floor(weight * phi_i); the leftover units up to round(weight * sum phi)
/// go to the largest fractional remainders, ties to the lower node id.
inline PacketPurse build_purse(const PayoffVector& payoffs, const Route& route,
                               std::uint64_t weight) {
  if (weight == 0) {
    throw Error(ErrorCode::kInvalidArgument, "currency weight must be > 0");
  }
  const auto& relays = route.relays();
  if (payoffs.shares.size() != relays.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "payoff vector does not match route relays");
  }

  struct Share {
    NodeId id;
    std::uint64_t base;
    double remainder;
  };
  std::vector<Share> shares;
  double raw_total = 0.0;
  std::uint64_t base_total = 0;
  for (NodeId id : relays) {
    auto it = payoffs.shares.find(id);
    if (it == payoffs.shares.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "no payoff for relay " + std::to_string(id));
    }
    if (!(it->second > 0.0)) {
      throw Error(ErrorCode::kNonPositivePayoff,
                  "relay " + std::to_string(id) + " has payoff <= 0");
    }
    const double raw = static_cast<double>(weight) * it->second;
    const double base = std::floor(raw);
    shares.push_back(Share{id, static_cast<std::uint64_t>(base), raw - base});
    raw_total += raw;
    base_total += static_cast<std::uint64_t>(base);
  }

  const auto target = static_cast<std::uint64_t>(std::llround(raw_total));
  std::uint64_t leftover = target > base_total ? target - base_total : 0;

  std::vector<std::size_t> order(shares.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (shares[a].remainder != shares[b].remainder) {
      return shares[a].remainder > shares[b].remainder;
    }
    return shares[a].id < shares[b].id;
  });
  for (std::size_t k = 0; k < order.size() && leftover > 0; ++k, --leftover) {
    ++shares[order[k]].base;
  }

  const Meters d_ref = route.direct_distance();
  const auto path = route.path();
  std::vector<PurseSection> sections;
  sections.reserve(shares.size());
  for (std::size_t i = 0; i < shares.size(); ++i) {
    const NodeId prev = path[i];
    const Meters d = distance(route.position(prev), route.position(path[i + 1]));
    sections.push_back(PurseSection{shares[i].id,
                                    CurrencyAmount{shares[i].base}, prev,
                                    tx_cost(d, d_ref)});
  }
  return PacketPurse(route.sender(), std::move(sections));
}

/// Per-node currency counters. Every mutation is a transfer, so the sum of
/// counters plus credit held in undelivered purses never changes.
class Ledger {
 public:
  Ledger() = default;

  Ledger(std::size_t n_nodes, CurrencyAmount endowment) {
    for (NodeId id = 0; id < n_nodes; ++id) counters_.emplace(id, endowment);
  }

  explicit Ledger(std::map<NodeId, CurrencyAmount> counters)
      : counters_(std::move(counters)) {}

  CurrencyAmount balance(NodeId id) const {
    auto it = counters_.find(id);
    if (it == counters_.end()) {
      throw Error(ErrorCode::kInvalidNode,
                  "no counter for node " + std::to_string(id));
    }
    return it->second;
  }

  const std::map<NodeId, CurrencyAmount>& counters() const noexcept {
    return counters_;
  }

  CurrencyAmount total() const {
    CurrencyAmount sum;
    for (const auto& [id, c] : counters_) sum = sum + c;
    return sum;
  }

  void debit_sender(PacketPurse& purse) {
    if (purse.debited_) {
      throw Error(ErrorCode::kInvalidArgument, "purse already debited");
    }
    auto& counter = counter_of(purse.sender());
    if (counter < purse.total_charge()) {
      throw Error(ErrorCode::kCannotAfford,
                  "node " + std::to_string(purse.sender()) + " holds " +
                      std::to_string(counter.micro_credits) + ", needs " +
                      std::to_string(purse.total_charge().micro_credits));
    }
    counter.micro_credits -= purse.total_charge().micro_credits;
    purse.debited_ = true;
  }

  /// Credits `claimant` with its own section. There is no way to credit a
  /// node from a section naming a different hop.
  CurrencyAmount claim_section(PacketPurse& purse, NodeId claimant) {
    auto it = std::find_if(
        purse.sections_.begin(), purse.sections_.end(),
        [&](const PurseSection& s) { return s.hop_id == claimant; });
    if (it == purse.sections_.end()) {
      throw Error(ErrorCode::kNotAHop,
                  "node " + std::to_string(claimant) + " has no section");
    }
    if (purse.claimed_.contains(claimant)) {
      throw Error(ErrorCode::kDoubleClaim,
                  "node " + std::to_string(claimant) + " already claimed");
    }
    if (!purse.debited_ || purse.settled_) {
      throw Error(ErrorCode::kInvalidArgument, "purse is not in flight");
    }
    counter_of(claimant).micro_credits += it->amount.micro_credits;
    purse.claimed_.insert(claimant);
    return it->amount;
  }

  /// Returns whatever the relays did not claim to the sender and closes the
  /// purse. Used when a packet aborts mid-route.
  CurrencyAmount refund_unclaimed(PacketPurse& purse) {
    if (!purse.debited_ || purse.settled_) {
      throw Error(ErrorCode::kInvalidArgument, "purse is not in flight");
    }
    const CurrencyAmount left = purse.unclaimed();
    counter_of(purse.sender()).micro_credits += left.micro_credits;
    purse.settled_ = true;
    return left;
  }

  /// Direct transfer, used by the flat-rate baseline.
  void transfer(NodeId from, NodeId to, CurrencyAmount amount) {
    auto& src = counter_of(from);
    auto& dst = counter_of(to);
    if (src < amount) {
      throw Error(ErrorCode::kCannotAfford,
                  "node " + std::to_string(from) + " cannot pay " +
                      std::to_string(amount.micro_credits));
    }
    src.micro_credits -= amount.micro_credits;
    dst.micro_credits += amount.micro_credits;
  }

 private:
  CurrencyAmount& counter_of(NodeId id) {
    auto it = counters_.find(id);
    if (it == counters_.end()) {
      throw Error(ErrorCode::kInvalidNode,
                  "no counter for node " + std::to_string(id));
    }
    return it->second;
  }

  std::map<NodeId, CurrencyAmount> counters_;
};

// Snapshot CSV: node_id,micro_credits

inline void write_ledger_csv(std::ostream& out, const Ledger& ledger) {
  out << "node_id,micro_credits\n";
  for (const auto& [id, c] : ledger.counters()) {
    out << id << ',' << c.micro_credits << '\n';
  }
}

inline Ledger read_ledger_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "node_id,micro_credits") {
    throw Error(ErrorCode::kParse, "ledger CSV: bad header");
  }
  std::map<NodeId, CurrencyAmount> counters;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    bool ok = cells.size() == 2;
    if (ok) {
      try {
        const auto id = parse_uint(cells[0]);
        ok = id <= std::numeric_limits<NodeId>::max() &&
             counters
                 .emplace(static_cast<NodeId>(id),
                          CurrencyAmount{parse_uint(cells[1])})
                 .second;
      } catch (const Error&) {
        ok = false;
      }
    }
    if (!ok) {
      throw Error(ErrorCode::kParse,
                  "ledger CSV: bad row at line " + std::to_string(line_no));
    }
  }
  return Ledger(std::move(counters));
}

}  // namespace faster

#endif  // FASTER_LEDGER_HPP
