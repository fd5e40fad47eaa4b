#include "netpower/voting.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include "netpower/error.hpp"

namespace netpower {
namespace {

constexpr double kQuotaEps = 1e-12;
constexpr int kMaxGamePlayers = 20;
constexpr int kMaxControlNodes = 16;
constexpr int kMaxRedistributionRounds = 32;
constexpr double kResidualTolerance = 1e-9;

void validate_players(const std::vector<std::string>& players, size_t weights) {
  if (players.empty()) {
    fail(ErrorCode::BadParameter, "a game needs at least one player");
  }
  if (players.size() != weights) {
    fail(ErrorCode::BadParameter, "one weight per player required");
  }
  if (players.size() > 32) {
    fail(ErrorCode::TooManyPlayers, "player masks support at most 32 players");
  }
  std::set<std::string> seen(players.begin(), players.end());
  if (seen.size() != players.size()) {
    fail(ErrorCode::BadParameter, "duplicate player id");
  }
}

std::uint32_t full_mask(int n) {
  return n == 32 ? ~0u : (1u << n) - 1u;
}

using WinFn = std::function<bool(std::uint32_t)>;

std::vector<char> tabulate_wins(int n, const WinFn& win) {
  std::vector<char> table(size_t{1} << n);
  for (std::uint32_t s = 0; s < table.size(); ++s) table[s] = win(s);
  return table;
}

/// Absolute Johnston values: each winning coalition with k >= 1 critical
/// members hands 1/k to each of them.
std::vector<double> johnston_absolute(int n, const std::vector<char>& win) {
  std::vector<double> value(static_cast<size_t>(n), 0.0);
  std::vector<int> critical;
  for (std::uint32_t s = 1; s < win.size(); ++s) {
    if (!win[s]) continue;
    critical.clear();
    for (int i = 0; i < n; ++i) {
      const std::uint32_t bit = 1u << i;
      if ((s & bit) && !win[s & ~bit]) critical.push_back(i);
    }
    if (critical.empty()) continue;
    const double share = 1.0 / static_cast<double>(critical.size());
    for (int i : critical) value[static_cast<size_t>(i)] += share;
  }
  return value;
}

std::vector<unsigned long long> factorials(int n) {
  std::vector<unsigned long long> fact(static_cast<size_t>(n) + 1, 1);
  for (int i = 1; i <= n; ++i) {
    fact[static_cast<size_t>(i)] =
        fact[static_cast<size_t>(i - 1)] * static_cast<unsigned>(i);
  }
  return fact;
}

void require_enumerable(int n) {
  if (n > kMaxGamePlayers) {
    fail(ErrorCode::TooManyPlayers,
         "exact enumeration supports at most 20 players");
  }
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

}  // namespace

WeightedVotingGame WeightedVotingGame::from_weights(
    std::vector<std::string> players, std::vector<double> weights,
    double quota) {
  validate_players(players, weights.size());
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      fail(ErrorCode::BadParameter, "weights must be finite and nonnegative");
    }
    total += w;
  }
  if (!std::isfinite(quota) || quota <= 0.0 || quota > total + kQuotaEps) {
    fail(ErrorCode::BadQuota, "quota must satisfy 0 < q <= total weight");
  }
  WeightedVotingGame g;
  g.players = std::move(players);
  g.weights = std::move(weights);
  g.quota = quota;
  return g;
}

WeightedVotingGame WeightedVotingGame::from_integer_weights(
    std::vector<std::string> players, std::vector<long long> weights,
    long long quota) {
  validate_players(players, weights.size());
  long long total = 0;
  for (long long w : weights) {
    if (w < 0) fail(ErrorCode::BadParameter, "weights must be nonnegative");
    if (__builtin_add_overflow(total, w, &total)) {
      fail(ErrorCode::BadParameter, "total weight overflows");
    }
  }
  if (quota <= 0 || quota > total) {
    fail(ErrorCode::BadQuota, "quota must satisfy 0 < q <= total weight");
  }
  WeightedVotingGame g;
  g.players = std::move(players);
  g.weights.assign(weights.begin(), weights.end());
  g.quota = static_cast<double>(quota);
  g.exact = true;
  g.integer_weights = std::move(weights);
  g.integer_quota = quota;
  return g;
}

WeightedVotingGame WeightedVotingGame::from_ratios(
    std::vector<std::string> players,
    std::vector<std::pair<long long, long long>> weights,
    std::pair<long long, long long> quota) {
  constexpr long long kScaleCap = 1'000'000'000'000'000LL;
  long long scale = quota.second;
  auto check_den = [](long long den) {
    if (den <= 0) fail(ErrorCode::BadParameter, "denominators must be positive");
  };
  check_den(quota.second);
  for (const auto& [num, den] : weights) {
    check_den(den);
    if (num < 0) fail(ErrorCode::BadParameter, "weights must be nonnegative");
    scale = std::lcm(scale, den);
    if (scale > kScaleCap) {
      fail(ErrorCode::BadParameter, "ratio denominators do not share a small grid");
    }
  }
  std::vector<long long> scaled;
  scaled.reserve(weights.size());
  for (const auto& [num, den] : weights) {
    long long w;
    if (__builtin_mul_overflow(num, scale / den, &w)) {
      fail(ErrorCode::BadParameter, "scaled weight overflows");
    }
    scaled.push_back(w);
  }
  long long q;
  if (__builtin_mul_overflow(quota.first, scale / quota.second, &q)) {
    fail(ErrorCode::BadParameter, "scaled quota overflows");
  }
  WeightedVotingGame g =
      from_integer_weights(std::move(players), std::move(scaled), q);
  for (size_t i = 0; i < weights.size(); ++i) {
    g.weights[i] = static_cast<double>(weights[i].first) /
                   static_cast<double>(weights[i].second);
  }
  g.quota = static_cast<double>(quota.first) / static_cast<double>(quota.second);
  return g;
}

bool WeightedVotingGame::wins(std::uint32_t coalition) const {
  if (exact) {
    long long sum = 0;
    for (int i = 0; i < size(); ++i) {
      if (coalition & (1u << i)) sum += integer_weights[static_cast<size_t>(i)];
    }
    return sum >= integer_quota;
  }
  double sum = 0.0;
  for (int i = 0; i < size(); ++i) {
    if (coalition & (1u << i)) sum += weights[static_cast<size_t>(i)];
  }
  return sum >= quota - kQuotaEps * std::max(1.0, std::abs(quota));
}

double PowerProfile::at(const std::string& player) const {
  for (size_t i = 0; i < players.size(); ++i) {
    if (players[i] == player) return values(static_cast<Index>(i));
  }
  fail(ErrorCode::UnknownPlayer, "unknown player '" + player + "'");
}

int characteristic(const WeightedVotingGame& game,
                   const std::vector<std::string>& coalition) {
  std::uint32_t mask = 0;
  for (const std::string& id : coalition) {
    auto it = std::find(game.players.begin(), game.players.end(), id);
    if (it == game.players.end()) {
      fail(ErrorCode::UnknownPlayer, "unknown player '" + id + "'");
    }
    mask |= 1u << (it - game.players.begin());
  }
  return game.wins(mask) ? 1 : 0;
}

PowerProfile shapley_shubik(const WeightedVotingGame& game) {
  const int n = game.size();
  require_enumerable(n);
  const auto win = tabulate_wins(n, [&](std::uint32_t s) { return game.wins(s); });
  const auto fact = factorials(n);

  // weight[i] accumulates |S|! (n-|S|-1)! over losing S that i turns winning;
  // the total stays below n! so the counts are exact integers.
  std::vector<unsigned long long> weight(static_cast<size_t>(n), 0);
  const std::uint32_t full = full_mask(n);
  for (std::uint32_t s = 0; s <= full; ++s) {
    if (win[s]) continue;
    const int size = std::popcount(s);
    const unsigned long long w =
        fact[static_cast<size_t>(size)] * fact[static_cast<size_t>(n - size - 1)];
    for (int i = 0; i < n; ++i) {
      const std::uint32_t bit = 1u << i;
      if (!(s & bit) && win[s | bit]) weight[static_cast<size_t>(i)] += w;
    }
    if (s == full) break;
  }

  PowerProfile p;
  p.index = "shapley_shubik";
  p.players = game.players;
  p.values.resize(n);
  p.raw.resize(n);
  for (int i = 0; i < n; ++i) {
    p.raw(i) = static_cast<double>(weight[static_cast<size_t>(i)]);
    p.values(i) = static_cast<double>(weight[static_cast<size_t>(i)]) /
                  static_cast<double>(fact[static_cast<size_t>(n)]);
  }
  return p;
}

PowerProfile banzhaf(const WeightedVotingGame& game, bool normalized) {
  const int n = game.size();
  require_enumerable(n);
  const auto win = tabulate_wins(n, [&](std::uint32_t s) { return game.wins(s); });

  std::vector<unsigned long long> eta(static_cast<size_t>(n), 0);
  const std::uint32_t full = full_mask(n);
  for (std::uint32_t s = 0; s <= full; ++s) {
    if (win[s]) continue;
    for (int i = 0; i < n; ++i) {
      const std::uint32_t bit = 1u << i;
      if (!(s & bit) && win[s | bit]) ++eta[static_cast<size_t>(i)];
    }
    if (s == full) break;
  }
  const double total = static_cast<double>(
      std::accumulate(eta.begin(), eta.end(), 0ULL));
  if (normalized && total == 0.0) {
    fail(ErrorCode::AllPowerless, "no player is ever critical");
  }

  PowerProfile p;
  p.index = normalized ? "banzhaf_normalized" : "banzhaf";
  p.players = game.players;
  p.values.resize(n);
  p.raw.resize(n);
  const double denom =
      normalized ? total : std::pow(2.0, static_cast<double>(n - 1));
  for (int i = 0; i < n; ++i) {
    p.raw(i) = static_cast<double>(eta[static_cast<size_t>(i)]);
    p.values(i) = p.raw(i) / denom;
  }
  return p;
}

PowerProfile johnston(const WeightedVotingGame& game) {
  const int n = game.size();
  require_enumerable(n);
  const auto win = tabulate_wins(n, [&](std::uint32_t s) { return game.wins(s); });
  const std::vector<double> absolute = johnston_absolute(n, win);
  const double total = std::accumulate(absolute.begin(), absolute.end(), 0.0);
  if (total <= 0.0) {
    fail(ErrorCode::NoVulnerableCoalitions,
         "no winning coalition has a critical member");
  }

  PowerProfile p;
  p.index = "johnston";
  p.players = game.players;
  p.raw = to_vector(absolute);
  p.values = p.raw / total;
  return p;
}

ControlStructure ControlStructure::build(Network net, ControlRule rule) {
  if (!net.ownership()) {
    fail(ErrorCode::BadParameter, "control structures need an ownership network");
  }
  if (!std::isfinite(rule.fraction) || rule.fraction <= 0.0 ||
      rule.fraction > 1.0 || rule.eps < 0.0) {
    fail(ErrorCode::BadParameter, "control fraction must lie in (0, 1]");
  }
  return {std::move(net), rule};
}

std::vector<std::string> control_closure(
    const ControlStructure& cs, const std::vector<std::string>& coalition) {
  const Network& net = cs.net;
  const Index n = net.size();
  std::vector<double> pooled(static_cast<size_t>(n), 0.0);
  std::vector<char> counted(static_cast<size_t>(n), 0);
  std::vector<char> controlled(static_cast<size_t>(n), 0);
  std::vector<Index> queue;

  auto absorb = [&](Index i) {
    if (counted[static_cast<size_t>(i)]) return;
    counted[static_cast<size_t>(i)] = 1;
    for (const Shareholding& h : net.out_edges(i)) {
      pooled[static_cast<size_t>(h.owner)] += h.weight;
      if (!controlled[static_cast<size_t>(h.owner)] &&
          cs.rule.satisfied(pooled[static_cast<size_t>(h.owner)])) {
        controlled[static_cast<size_t>(h.owner)] = 1;
        queue.push_back(h.owner);
      }
    }
  };

  for (const std::string& id : coalition) absorb(net.index_of(id));
  while (!queue.empty()) {
    const Index j = queue.back();
    queue.pop_back();
    absorb(j);
  }

  std::vector<std::string> result;
  for (Index i = 0; i < n; ++i) {
    if (controlled[static_cast<size_t>(i)]) result.push_back(net.id_of(i));
  }
  return result;
}

PowerProfile karos_peters_phi(const ControlStructure& cs) {
  const Network& net = cs.net;
  const int n = static_cast<int>(net.size());
  if (n > kMaxControlNodes) {
    fail(ErrorCode::TooManyNodes,
         "control-game enumeration supports at most 16 nodes");
  }

  struct Holding {
    int target;
    double weight;
  };
  std::vector<std::vector<Holding>> holdings(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (const Shareholding& h : net.out_edges(i)) {
      holdings[static_cast<size_t>(i)].push_back(
          {static_cast<int>(h.owner), h.weight});
    }
  }

  std::vector<double> pooled(static_cast<size_t>(n), 0.0);
  std::vector<int> queue;
  auto closure_of = [&](std::uint32_t seed) {
    std::fill(pooled.begin(), pooled.end(), 0.0);
    std::uint32_t counted = 0, controlled = 0;
    queue.clear();
    auto absorb = [&](int i) {
      const std::uint32_t bit = 1u << i;
      if (counted & bit) return;
      counted |= bit;
      for (const Holding& h : holdings[static_cast<size_t>(i)]) {
        pooled[static_cast<size_t>(h.target)] += h.weight;
        const std::uint32_t tbit = 1u << h.target;
        if (!(controlled & tbit) &&
            cs.rule.satisfied(pooled[static_cast<size_t>(h.target)])) {
          controlled |= tbit;
          queue.push_back(h.target);
        }
      }
    };
    for (int i = 0; i < n; ++i) {
      if (seed & (1u << i)) absorb(i);
    }
    while (!queue.empty()) {
      const int j = queue.back();
      queue.pop_back();
      absorb(j);
    }
    return controlled;
  };

  const std::uint32_t count = 1u << n;
  std::vector<std::uint32_t> closure(count);
  for (std::uint32_t s = 0; s < count; ++s) closure[s] = closure_of(s);

  // phi_i = sum over control games of i's Shapley-Shubik value, minus one for
  // nodes the grand coalition controls; numerators stay integer (<= n! * n).
  const auto fact = factorials(n);
  std::vector<unsigned long long> numer(static_cast<size_t>(n), 0);
  for (std::uint32_t s = 0; s + 1 < count; ++s) {
    const int size = std::popcount(s);
    const unsigned long long w =
        fact[static_cast<size_t>(size)] * fact[static_cast<size_t>(n - size - 1)];
    for (int i = 0; i < n; ++i) {
      const std::uint32_t bit = 1u << i;
      if (s & bit) continue;
      const std::uint32_t gained = closure[s | bit] & ~closure[s];
      if (gained) {
        numer[static_cast<size_t>(i)] +=
            w * static_cast<unsigned>(std::popcount(gained));
      }
    }
  }

  PowerProfile p;
  p.index = "karos_peters_phi";
  p.players = net.ids();
  p.values.resize(n);
  const std::uint32_t grand = closure[count - 1];
  for (int i = 0; i < n; ++i) {
    p.values(i) = static_cast<double>(numer[static_cast<size_t>(i)]) /
                      static_cast<double>(fact[static_cast<size_t>(n)]) -
                  ((grand & (1u << i)) ? 1.0 : 0.0);
  }
  return p;
}

PowerProfile mercik_lobos_pi(const ControlStructure& cs, PiVariant variant) {
  const Network& net = cs.net;
  const int n = static_cast<int>(net.size());
  if (n > kMaxControlNodes) {
    fail(ErrorCode::TooManyNodes,
         "shareholder-game enumeration supports at most 16 nodes");
  }

  struct EntityGame {
    std::vector<Index> holders;
    std::vector<double> johnston_abs;
    bool controllable = false;
  };
  std::vector<EntityGame> entity(static_cast<size_t>(n));
  for (Index e = 0; e < n; ++e) {
    const std::vector<Shareholding>& held = net.in_edges(e);
    if (held.empty()) continue;
    EntityGame& game = entity[static_cast<size_t>(e)];
    std::vector<double> stakes;
    for (const Shareholding& h : held) {
      game.holders.push_back(h.owner);
      stakes.push_back(h.weight);
    }
    const int m = static_cast<int>(game.holders.size());
    const auto win = tabulate_wins(m, [&](std::uint32_t s) {
      double sum = 0.0;
      for (int i = 0; i < m; ++i) {
        if (s & (1u << i)) sum += stakes[static_cast<size_t>(i)];
      }
      return cs.rule.satisfied(sum);
    });
    game.controllable = win.back() != 0;
    if (game.controllable) game.johnston_abs = johnston_absolute(m, win);
  }

  Vector value = Vector::Zero(n);
  for (Index e = 0; e < n; ++e) {
    const EntityGame& game = entity[static_cast<size_t>(e)];
    for (size_t i = 0; i < game.holders.size(); ++i) {
      if (game.controllable) value(game.holders[i]) += game.johnston_abs[i];
    }
  }
  const double total = value.sum();
  if (total <= 0.0) {
    fail(ErrorCode::NoVulnerableCoalitions,
         "no entity is controlled by its shareholders");
  }

  auto redistributes = [&](Index i) {
    return net.node(i).kind == NodeKind::Firm &&
           entity[static_cast<size_t>(i)].controllable;
  };

  int round = 0;
  while (true) {
    double moving = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (redistributes(i)) moving += value(i);
    }
    if (moving <= kResidualTolerance * total) break;
    if (round == kMaxRedistributionRounds) {
      fail(ErrorCode::CycleDepthExceeded,
           "corporate cross-holdings keep power circulating");
    }
    Vector next = value;
    for (Index i = 0; i < n; ++i) {
      if (!redistributes(i) || value(i) == 0.0) continue;
      const EntityGame& game = entity[static_cast<size_t>(i)];
      next(i) -= value(i);
      if (variant == PiVariant::Pi) {
        const double share = value(i) / static_cast<double>(game.holders.size());
        for (Index h : game.holders) next(h) += share;
      } else {
        const double weight_sum = std::accumulate(
            game.johnston_abs.begin(), game.johnston_abs.end(), 0.0);
        for (size_t k = 0; k < game.holders.size(); ++k) {
          next(game.holders[k]) += value(i) * game.johnston_abs[k] / weight_sum;
        }
      }
    }
    value = next;
    ++round;
  }

  PowerProfile p;
  p.index = variant == PiVariant::Pi ? "mercik_lobos_pi" : "mercik_lobos_pi_prime";
  p.players = net.ids();
  p.raw = value;
  p.values = value / total;
  return p;
}

}  // namespace netpower
