#include "netpower/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "netpower/error.hpp"

namespace netpower {

namespace {

constexpr double kSumTolerance = 1e-9;
constexpr double kBoundaryEps = 1e-12;

/// Neumaier compensated sum; keeps results exact when the terms would round.
double compensated_sum(const Vector& terms) {
  double sum = 0.0;
  double compensation = 0.0;
  for (Index i = 0; i < terms.size(); ++i) {
    const double t = terms(i);
    const double next = sum + t;
    if (std::abs(sum) >= std::abs(t)) {
      compensation += (sum - next) + t;
    } else {
      compensation += (t - next) + sum;
    }
    sum = next;
  }
  return sum + compensation;
}

/// Indices sorted by descending share, ties by ascending actor id.
std::vector<int> descending_order(const ShareDistribution& dist) {
  std::vector<int> order(static_cast<size_t>(dist.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (dist.shares(a) != dist.shares(b)) return dist.shares(a) > dist.shares(b);
    return dist.ids[size_t(a)] < dist.ids[size_t(b)];
  });
  return order;
}

void validate_common(const std::vector<std::string>& ids, const Vector& values) {
  if (ids.empty()) fail(ErrorCode::EmptyDistribution, "distribution has no actors");
  if (static_cast<Index>(ids.size()) != values.size()) {
    fail(ErrorCode::BadParameter, "distribution ids and shares differ in length");
  }
  for (Index i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values(i)) || values(i) < 0.0) {
      fail(ErrorCode::BadParameter,
           "share of " + ids[size_t(i)] + " must be finite and nonnegative");
    }
  }
}

}  // namespace

ShareDistribution ShareDistribution::build(std::vector<std::string> ids,
                                           Vector shares) {
  validate_common(ids, shares);
  const double total = compensated_sum(shares);
  if (std::abs(total - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg << "shares must sum to one, got " << total;
    fail(ErrorCode::BadParameter, msg.str());
  }
  return {std::move(ids), std::move(shares)};
}

ShareDistribution ShareDistribution::from_amounts(std::vector<std::string> ids,
                                                  Vector amounts) {
  validate_common(ids, amounts);
  const double total = compensated_sum(amounts);
  if (total <= 0.0) {
    fail(ErrorCode::BadParameter, "amounts must have a positive total");
  }
  return {std::move(ids), amounts / total};
}

double hhi(const ShareDistribution& dist) {
  return compensated_sum(dist.shares.array().square());
}

double top_k(const ShareDistribution& dist, int k) {
  if (k < 1 || k > dist.size()) {
    std::ostringstream msg;
    msg << "k=" << k << " outside [1, " << dist.size() << "]";
    fail(ErrorCode::KOutOfRange, msg.str());
  }
  const std::vector<int> order = descending_order(dist);
  Vector largest(k);
  for (int i = 0; i < k; ++i) largest(i) = dist.shares(order[size_t(i)]);
  return compensated_sum(largest);
}

ConcentrationGroup nci(const ShareDistribution& dist, double H) {
  if (!(H > 0.0) || H > 1.0) {
    fail(ErrorCode::BadParameter, "target share must lie in (0, 1]");
  }
  const std::vector<int> order = descending_order(dist);
  ConcentrationGroup group;
  double cumulative = 0.0;
  double compensation = 0.0;
  for (int idx : order) {
    const double t = dist.shares(idx);
    const double next = cumulative + t;
    if (std::abs(cumulative) >= std::abs(t)) {
      compensation += (cumulative - next) + t;
    } else {
      compensation += (t - next) + cumulative;
    }
    cumulative = next;
    group.members.push_back(dist.ids[size_t(idx)]);
    if (cumulative + compensation >= H - kBoundaryEps) break;
  }
  group.g = 100.0 * double(group.members.size()) / double(dist.size());
  return group;
}

std::map<std::string, UltimateOwner> ultimate_control(const Network& net,
                                                      double threshold,
                                                      ControlChainRule rule) {
  if (!net.ownership()) {
    fail(ErrorCode::BadParameter, "ultimate control requires an ownership network");
  }
  if (!(threshold > 0.0) || !(threshold < 1.0)) {
    fail(ErrorCode::BadParameter, "control threshold must lie in (0, 1)");
  }

  const Index n = net.size();
  std::map<std::string, UltimateOwner> result;
  for (Index start = 0; start < n; ++start) {
    UltimateOwner entry;
    std::vector<char> visited(static_cast<size_t>(n), 0);
    std::vector<Index> walk{start};
    visited[size_t(start)] = 1;
    Index current = start;
    double along_chain = 1.0;

    for (;;) {
      Index best = -1;
      double best_stake = 0.0;
      bool tie = false;
      for (const Shareholding& h : net.in_edges(current)) {
        const double reach =
            rule == ControlChainRule::WeakestLink ? h.weight : along_chain * h.weight;
        if (reach < threshold) continue;
        if (best < 0 || h.weight > best_stake) {
          best = h.owner;
          best_stake = h.weight;
          tie = false;
        } else if (h.weight == best_stake) {
          tie = true;
          if (net.node(h.owner).id < net.node(best).id) best = h.owner;
        }
      }
      if (best < 0) break;
      if (tie) entry.tie_break = true;
      if (visited[size_t(best)]) {
        std::ostringstream msg;
        msg << "ownership cycle among controllers:";
        for (Index v : walk) msg << ' ' << net.node(v).id;
        msg << ' ' << net.node(best).id;
        fail(ErrorCode::CycleDetected, msg.str());
      }
      visited[size_t(best)] = 1;
      walk.push_back(best);
      entry.chain.push_back(net.node(best).id);
      along_chain *= best_stake;
      current = best;
    }

    entry.owner = net.node(current).id;
    result.emplace(net.node(start).id, std::move(entry));
  }
  return result;
}

}  // namespace netpower
