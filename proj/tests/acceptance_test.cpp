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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "faster/faster.hpp"
#include "test_support.hpp"

namespace {

using namespace faster;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr auto kSaved = CoalitionValueVariant::kSaved;
constexpr auto kLiteral = CoalitionValueVariant::kLiteral;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

// Players i and j are interchangeable when every coalition containing
// neither gains the same from each.
bool interchangeable(std::size_t n, std::size_t i, std::size_t j,
                     const std::function<double(std::uint64_t)>& v) {
  const std::uint64_t bi = 1ull << i, bj = 1ull << j;
  for (std::uint64_t m = 0; m < (1ull << n); ++m) {
    if (m & (bi | bj)) continue;
    if (std::abs(v(m | bi) - v(m | bj)) > 1e-12) return false;
  }
  return true;
}

bool is_null(std::size_t n, std::size_t i,
             const std::function<double(std::uint64_t)>& v) {
  const std::uint64_t bi = 1ull << i;
  for (std::uint64_t m = 0; m < (1ull << n); ++m) {
    if (m & bi) continue;
    if (std::abs(v(m | bi) - v(m)) > 1e-12) return false;
  }
  return true;
}

// Inserts a relay right after relay k that is interchangeable with it. In
// the saved game a copy at the same spot works; in the literal game the
// midpoint of k's outgoing hop gives both the same hop length.
Route twin(const Route& r, std::size_t k, CoalitionValueVariant variant) {
  const NodeId clone = 1000;
  const auto path = r.path();
  const Position a = r.position(path[k + 1]);
  const Position b = r.position(path[k + 2]);
  auto pos = r.positions();
  pos[clone] = variant == kSaved ? a
                                 : Position{(a.x + b.x) / 2, (a.y + b.y) / 2};
  auto relays = r.relays();
  relays.insert(relays.begin() + static_cast<std::ptrdiff_t>(k) + 1, clone);
  return Route(r.sender(), r.destination(), relays, pos);
}

Outcome axioms() {
  const auto start = Clock::now();
  constexpr double tol = 1e-9;
  std::mt19937_64 rng(101);
  Outcome out;
  double worst = 0.0;
  std::size_t checks = 0;
  auto expect = [&](double a, double b) {
    worst = std::max(worst, std::abs(a - b));
    ++checks;
    if (!(std::abs(a - b) <= tol)) out.pass = false;
  };

  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const Route r = testing::random_route(rng, n);
    const Route other = testing::random_route(rng, n);

    const std::size_t k = static_cast<std::size_t>(uniform_index(rng, n));

    for (auto variant : {kSaved, kLiteral}) {
      auto v = [&](std::uint64_t m) {
        return coalition_value(r, Coalition{m}, variant);
      };
      auto w = [&](std::uint64_t m) {
        return coalition_value(other, Coalition{m}, variant);
      };
      const auto phi = exact_shapley(n, v);

      // Efficiency.
      double sum = 0.0;
      for (double p : phi) sum += p;
      expect(sum, v((1ull << n) - 1));

      // Symmetry: any interchangeable pair the route happens to have, plus
      // the constructed twin.
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (interchangeable(n, i, j, v)) expect(phi[i], phi[j]);
        }
      }
      if (n < 6) {
        const Route t = twin(r, k, variant);
        const auto tp = shapley(t, variant);
        const auto& relays = t.relays();
        expect(tp.shares.at(relays[k]), tp.shares.at(relays[k + 1]));
        std::function<double(std::uint64_t)> tv = [&](std::uint64_t m) {
          return coalition_value(t, Coalition{m}, variant);
        };
        if (!interchangeable(relays.size(), k, k + 1, tv)) out.pass = false;
      }

      // Null player: a dummy appended to the route game, plus any null
      // player the route already has.
      const auto with_dummy = exact_shapley(n + 1, [&](std::uint64_t m) {
        return v(m & ~(1ull << n));
      });
      expect(with_dummy[n], 0.0);
      for (std::size_t i = 0; i < n; ++i) expect(with_dummy[i], phi[i]);
      for (std::size_t i = 0; i < n; ++i) {
        if (is_null(n, i, v)) expect(phi[i], 0.0);
      }

      // Additivity over two route games with the same player count.
      const auto psi = exact_shapley(n, w);
      const auto both =
          exact_shapley(n, [&](std::uint64_t m) { return v(m) + w(m); });
      for (std::size_t i = 0; i < n; ++i) expect(both[i], phi[i] + psi[i]);

      // Positive scaling.
      const double c = 0.01 + unit_uniform(rng) * 100.0;
      const auto scaled =
          exact_shapley(n, [&](std::uint64_t m) { return c * v(m); });
      for (std::size_t i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(scaled[i] - c * phi[i]) / c);
        if (!(std::abs(scaled[i] - c * phi[i]) <= tol * std::max(1.0, c))) {
          out.pass = false;
        }
      }
    }

    // The geometric null player for the saved game, which the literal game
    // does not have: a relay sitting on the sender, ahead of the others.
    auto pos = r.positions();
    pos[2000] = r.position(r.sender());
    std::vector<NodeId> relays{2000};
    relays.insert(relays.end(), r.relays().begin(), r.relays().end());
    if (relays.size() <= 6) {
      const Route ghost(r.sender(), r.destination(), relays, pos);
      expect(shapley(ghost, kSaved).shares.at(2000), 0.0);
    }
  }
  const double t = seconds_since(start);
  if (t >= 10.0) out.pass = false;
  out.detail = fmt("500 routes, worst deviation %.3g, %.2f s", worst, t) +
               ", " + std::to_string(checks) + " checks";
  return out;
}

Outcome oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(202);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = testing::random_route(rng, 1 + trial % 8);
    for (auto variant : {kSaved, kLiteral}) {
      const auto exact = shapley(r, variant);
      const auto perm = shapley_oracle(r, variant);
      for (NodeId id : r.relays()) {
        worst = std::max(worst, std::abs(exact.shares.at(id) - perm.shares.at(id)));
      }
    }
  }
  const double t = seconds_since(start);
  return {worst <= 1e-9 && t < 30.0,
          fmt("200 routes n<=8, worst deviation %.3g, %.2f s", worst, t)};
}

Outcome fixtures() {
  double worst = 0.0;
  auto track = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want));
  };
  const bool midpoint_exact =
      path_saving(testing::midpoint_route()) == 0.875;
  const auto thirds = testing::thirds_route();
  const auto saved = shapley(thirds, kSaved);
  const auto literal = shapley(thirds, kLiteral);
  for (NodeId id : thirds.relays()) {
    track(saved.shares.at(id), 13.0 / 27.0);
    track(literal.shares.at(id), 80.0 / 81.0);
  }
  const Route bent(0, 2, {1}, {{0, {0, 0}}, {1, {100, 50}}, {2, {200, 0}}});
  track(path_saving(bent), 0.8046875);
  return {midpoint_exact && worst <= 1e-12,
          std::string("midpoint ") + (midpoint_exact ? "exact" : "inexact") +
              fmt(", worst deviation %.3g", worst)};
}

Outcome conservation() {
  Outcome out;
  std::string detail;
  for (auto mode : {Mode::kFaster, Mode::kBaseline}) {
    SimConfig cfg;
    cfg.ticks = 500;
    cfg.mode = mode;
    const auto r = run(cfg);
    const std::uint64_t want = cfg.n_nodes * cfg.initial_richness;
    std::map<std::uint64_t, std::uint64_t> per_tick;
    for (const auto& row : r.time_series) per_tick[row.tick] += row.richness;
    bool ok = per_tick.size() == cfg.ticks + 1;
    for (const auto& [tick, total] : per_tick) ok = ok && total == want;
    out.pass = out.pass && ok;
    detail += std::string(to_string(mode)) + (ok ? " ok" : " broken") + " (" +
              std::to_string(r.delivered) + " delivered) ";
  }
  out.detail = detail + "over 501 tick boundaries";
  return out;
}

Outcome rounding() {
  std::mt19937_64 rng(505);
  bool ok = true;
  std::size_t built = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 8);
    const Route r = testing::random_route(rng, n);
    const std::uint64_t weight = 100 + uniform_index(rng, 100000);
    PayoffVector p;
    for (NodeId id : r.relays()) p.shares[id] = 0.01 + unit_uniform(rng);
    const auto purse = build_purse(p, r, weight);
    ++built;
    std::uint64_t sum = 0;
    for (const auto& s : purse.sections()) {
      sum += s.amount.micro_credits;
      const double exact = static_cast<double>(weight) * p.shares.at(s.hop_id);
      if (!(std::abs(static_cast<double>(s.amount.micro_credits) - exact) <= 1.0)) {
        ok = false;
      }
    }
    if (sum != purse.total_charge().micro_credits) ok = false;
    if (purse.total_charge().micro_credits !=
        static_cast<std::uint64_t>(std::llround(weight * p.total()))) {
      ok = false;
    }
  }
  return {ok && built == 1000, std::to_string(built) + " purses"};
}

Outcome guard() {
  std::mt19937_64 rng(606);
  std::size_t offered = 0, refused = 0, violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 6);
    const Route r = uniform_index(rng, 2) == 0
                        ? testing::random_route(rng, n)
                        : testing::random_collinear_route(rng, n);
    SimConfig cfg;
    cfg.variant = uniform_index(rng, 2) == 0 ? kSaved : kLiteral;
    cfg.epsilon_min = trial % 4 == 0 ? 0.0 : unit_uniform(rng) * 0.9;
    const auto offer = offer_purse(r, cfg);
    if (offer.purse) {
      ++offered;
      if (!(path_saving(r) > cfg.epsilon_min)) ++violations;
    } else {
      ++refused;
    }
  }

  // The same property on packets the simulator actually settled.
  std::size_t settled = 0;
  for (double eps : {0.0, 0.3, 0.6}) {
    SimConfig cfg;
    cfg.epsilon_min = eps;
    cfg.p_send = 0.3;
    const auto result = run(cfg);
    for (const auto& p : result.packets) {
      if (!p.saving) continue;
      ++settled;
      if (!(*p.saving > eps)) ++violations;
    }
  }
  return {violations == 0 && offered > 0 && refused > 0,
          std::to_string(offered) + " purses, " + std::to_string(refused) +
              " refusals, " + std::to_string(settled) +
              " simulated settlements, " + std::to_string(violations) +
              " violations"};
}

struct Figures {
  Outcome richness;
  Outcome lifetime;
};

Figures figures() {
  const auto start = Clock::now();
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 20; ++s) seeds.push_back(s);
  const unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  const auto report = compare_modes(SimConfig{}, seeds, {}, jobs);
  const double t = seconds_since(start);
  std::size_t richer = 0, longer = 0;
  for (const auto& row : report.rows) {
    if (row.faster.richness_stddev_final < row.baseline.richness_stddev_final) {
      ++richer;
    }
    if (row.faster.mean_lifetime > row.baseline.mean_lifetime) ++longer;
  }
  auto line = [&](std::size_t wins, double fraction) {
    return Outcome{fraction >= 0.8 && t < 60.0,
                   std::to_string(wins) + "/20 seeds" +
                       fmt(" (%.2f), %.2f s", fraction, t)};
  };
  return {line(richer, report.richness_win_fraction),
          line(longer, report.lifetime_win_fraction)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

bool same_tree(const fs::path& a, const fs::path& b, std::size_t& files) {
  std::vector<fs::path> names;
  for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename());
  std::size_t other = 0;
  for (const auto& e : fs::directory_iterator(b)) {
    (void)e;
    ++other;
  }
  if (names.empty() || names.size() != other) return false;
  for (const auto& n : names) {
    if (!fs::exists(b / n) || slurp(a / n) != slurp(b / n)) return false;
    ++files;
  }
  return true;
}

Outcome determinism() {
  const fs::path work = FASTER_WORK_DIR;
  fs::remove_all(work);
  fs::create_directories(work);
  bool ok = true;
  std::size_t files = 0;

  for (auto mode : {Mode::kFaster, Mode::kBaseline}) {
    SimConfig cfg;
    cfg.mode = mode;
    cfg.seed = 11;
    const auto a = work / (std::string(to_string(mode)) + "_a");
    const auto b = work / (std::string(to_string(mode)) + "_b");
    run_experiment(cfg, a, true);
    run_experiment(cfg, b, true);
    ok = same_tree(a, b, files) && ok;
  }

  for (const char* mode : {"faster", "baseline"}) {
    std::vector<fs::path> dirs;
    for (const char* tag : {"_cli_a", "_cli_b"}) {
      const auto dir = work / (std::string(mode) + tag);
      const std::string cmd = std::string("\"") + FASTER_SIM_PATH +
                              "\" run --mode " + mode +
                              " --seed 5 --packet-log --out \"" +
                              dir.string() + "\" > /dev/null";
      ok = std::system(cmd.c_str()) == 0 && ok;
      dirs.push_back(dir);
    }
    ok = fs::exists(dirs[0]) && same_tree(dirs[0], dirs[1], files) && ok;
  }
  return {ok, std::to_string(files) + " files compared byte for byte"};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* id, const char* name, const Outcome& o) {
    std::printf("%s %s %s: %s\n", o.pass ? "PASS" : "FAIL", id, name,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };
  auto guarded = [&](const char* id, const char* name,
                     const std::function<Outcome()>& f) {
    try {
      report(id, name, f());
    } catch (const std::exception& e) {
      report(id, name, Outcome{false, std::string("exception: ") + e.what()});
    }
  };

  guarded("1", "shapley axioms", axioms);
  guarded("2", "oracle equivalence", oracle);
  guarded("3", "analytic fixtures", fixtures);
  guarded("4", "currency conservation", conservation);
  guarded("5", "purse rounding", rounding);
  guarded("6", "relay saving guard", guard);
  try {
    const auto f = figures();
    report("7a", "lower richness spread", f.richness);
    report("7b", "longer mean lifetime", f.lifetime);
  } catch (const std::exception& e) {
    const Outcome o{false, std::string("exception: ") + e.what()};
    report("7a", "lower richness spread", o);
    report("7b", "longer mean lifetime", o);
  }
  guarded("8", "determinism", determinism);

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
