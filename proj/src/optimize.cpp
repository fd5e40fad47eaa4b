#include "netpower/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "netpower/error.hpp"

namespace netpower {

namespace {

constexpr int kMaxExactNodes = 24;
constexpr double kFloatSlack = 1e-9;
constexpr double kCostTieEps = 1e-12;
constexpr double kJustifyEps = 1e-12;

struct Holders {
  std::vector<std::vector<Shareholding>> of;
  Vector free_float;
};

Holders collect_holders(const Network& net) {
  Holders h;
  h.of.resize(static_cast<size_t>(net.size()));
  h.free_float.resize(net.size());
  for (Index j = 0; j < net.size(); ++j) {
    const auto& in = net.in_edges(j);
    h.of[size_t(j)].assign(in.begin(), in.end());
    h.free_float(j) = net.free_float(j);
  }
  return h;
}

/// Whether holder i's stake may count toward controlling j under the variant.
bool contribution_allowed(const AcquisitionProblem& prob, Index i, Index j) {
  switch (prob.variant) {
    case AcquisitionVariant::IC:
      return true;
    case AcquisitionVariant::IC2:
      return prob.is_target(j) || !prob.is_target(i);
    case AcquisitionVariant::IC3:
      if (!prob.is_target(j) && prob.is_target(i)) return false;
      return prob.net.adjacency()(j, i) == 0.0;
    case AcquisitionVariant::CCP:
      return true;
  }
  return true;
}

/// Cheapest purchases given which nodes vote with the acquirer. Controlled
/// nodes with deficit > free float make the choice infeasible.
struct Completion {
  Vector purchases;
  double cost = 0.0;
  bool feasible = true;
  Index blocked = -1;
};

Completion complete_ic(const AcquisitionProblem& prob, const Holders& holders,
                       const std::vector<char>& controlled) {
  const Index n = prob.net.size();
  Completion out;
  out.purchases = Vector::Zero(n);
  for (Index j = 0; j < n; ++j) {
    if (!controlled[size_t(j)]) continue;
    double helping = 0.0;
    for (const Shareholding& h : holders.of[size_t(j)]) {
      if (!controlled[size_t(h.owner)]) continue;
      if (!contribution_allowed(prob, h.owner, j)) continue;
      helping += h.weight;
    }
    const double z = std::max(0.0, prob.thresholds(j) - helping);
    if (z > holders.free_float(j) + kFloatSlack) {
      out.feasible = false;
      out.blocked = j;
      return out;
    }
    out.purchases(j) = z;
    out.cost += prob.prices(j) * z;
  }
  return out;
}

/// CCP closure: anchors are bought outright; everything whose threshold is
/// met by already-certified holders joins in turn.
std::vector<char> ccp_closure(const AcquisitionProblem& prob,
                              const Holders& holders,
                              const std::vector<char>& anchors) {
  const Index n = prob.net.size();
  std::vector<char> certified = anchors;
  bool grew = true;
  while (grew) {
    grew = false;
    for (Index j = 0; j < n; ++j) {
      if (certified[size_t(j)]) continue;
      double pooled = 0.0;
      for (const Shareholding& h : holders.of[size_t(j)]) {
        if (certified[size_t(h.owner)]) pooled += h.weight;
      }
      if (pooled >= prob.thresholds(j) - kJustifyEps) {
        certified[size_t(j)] = 1;
        grew = true;
      }
    }
  }
  return certified;
}

bool covers_targets(const AcquisitionProblem& prob, const std::vector<char>& certified) {
  for (Index j = 0; j < prob.net.size(); ++j) {
    if (prob.is_target(j) && !certified[size_t(j)]) return false;
  }
  return true;
}

AcquisitionPlan make_plan(const AcquisitionProblem& prob, Vector purchases,
                          std::vector<char> controlled, double cost) {
  AcquisitionPlan plan;
  plan.ids = prob.net.ids();
  plan.purchases = std::move(purchases);
  plan.controlled = std::move(controlled);
  plan.total_cost = cost;
  return plan;
}

AcquisitionPlan solve_ic(const AcquisitionProblem& prob, const Holders& holders) {
  const Index n = prob.net.size();
  std::vector<Index> free_nodes;
  for (Index i = 0; i < n; ++i) {
    if (!prob.is_target(i)) free_nodes.push_back(i);
  }
  if (static_cast<int>(free_nodes.size()) > kMaxExactNodes) {
    throw Error(ErrorCode::TooLarge,
                "exact search limited to 24 non-target nodes, got " +
                    std::to_string(free_nodes.size()));
  }

  std::vector<char> controlled(static_cast<size_t>(n), 0);
  for (Index i = 0; i < n; ++i) controlled[size_t(i)] = prob.is_target(i) ? 1 : 0;
  // 1 while a node's choice is still open; the bound treats it as helping.
  std::vector<char> open(static_cast<size_t>(n), 0);
  for (Index i : free_nodes) open[size_t(i)] = 1;

  double best_cost = 0.0;
  bool have_best = false;
  Vector best_purchases;
  std::vector<char> best_controlled;

  // Admissible bound: every open node helps for free and controlled nodes
  // only pay their own optimistic deficit.
  auto lower_bound = [&]() {
    double bound = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (!controlled[size_t(j)]) continue;
      double helping = 0.0;
      for (const Shareholding& h : holders.of[size_t(j)]) {
        if (!controlled[size_t(h.owner)] && !open[size_t(h.owner)]) continue;
        if (!contribution_allowed(prob, h.owner, j)) continue;
        helping += h.weight;
      }
      const double z = std::max(0.0, prob.thresholds(j) - helping);
      if (z > holders.free_float(j) + kFloatSlack) return -1.0;
      bound += prob.prices(j) * z;
    }
    return bound;
  };

  std::function<void(size_t)> descend = [&](size_t depth) {
    const double bound = lower_bound();
    if (bound < 0.0) return;
    if (have_best && bound >= best_cost - kCostTieEps) return;
    if (depth == free_nodes.size()) {
      Completion leaf = complete_ic(prob, holders, controlled);
      if (!leaf.feasible) return;
      if (!have_best || leaf.cost < best_cost - kCostTieEps) {
        have_best = true;
        best_cost = leaf.cost;
        best_purchases = leaf.purchases;
        best_controlled = controlled;
      }
      return;
    }
    const Index i = free_nodes[depth];
    open[size_t(i)] = 0;
    descend(depth + 1);
    controlled[size_t(i)] = 1;
    descend(depth + 1);
    controlled[size_t(i)] = 0;
    open[size_t(i)] = 1;
  };
  descend(0);

  if (!have_best) {
    throw Error(ErrorCode::Infeasible,
                "no control choice satisfies every target threshold");
  }
  return make_plan(prob, std::move(best_purchases), std::move(best_controlled),
                   best_cost);
}

AcquisitionPlan solve_ccp(const AcquisitionProblem& prob, const Holders& holders) {
  const Index n = prob.net.size();
  if (static_cast<int>(n) > kMaxExactNodes) {
    throw Error(ErrorCode::TooLarge,
                "exact anchor search limited to 24 nodes, got " +
                    std::to_string(n));
  }

  std::vector<char> anchors(static_cast<size_t>(n), 0);
  std::vector<Index> candidates;
  for (Index i = 0; i < n; ++i) {
    if (prob.thresholds(i) <= holders.free_float(i) + kFloatSlack) {
      candidates.push_back(i);
    }
  }

  double best_cost = 0.0;
  bool have_best = false;
  std::vector<char> best_anchors;

  std::function<void(size_t, double)> descend = [&](size_t depth, double cost) {
    if (have_best && cost >= best_cost - kCostTieEps) return;
    std::vector<char> optimistic = anchors;
    for (size_t d = depth; d < candidates.size(); ++d) {
      optimistic[size_t(candidates[d])] = 1;
    }
    if (!covers_targets(prob, ccp_closure(prob, holders, optimistic))) return;
    if (depth == candidates.size()) {
      if (covers_targets(prob, ccp_closure(prob, holders, anchors))) {
        have_best = true;
        best_cost = cost;
        best_anchors = anchors;
      }
      return;
    }
    const Index i = candidates[depth];
    descend(depth + 1, cost);
    anchors[size_t(i)] = 1;
    descend(depth + 1, cost + prob.prices(i) * prob.thresholds(i));
    anchors[size_t(i)] = 0;
  };
  descend(0, 0.0);

  if (!have_best) {
    throw Error(ErrorCode::Infeasible,
                "no anchor set certifies every target acyclically");
  }

  Vector purchases = Vector::Zero(n);
  double cost = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (!best_anchors[size_t(i)]) continue;
    purchases(i) = prob.thresholds(i);
    cost += prob.prices(i) * prob.thresholds(i);
  }
  return make_plan(prob, std::move(purchases),
                   ccp_closure(prob, holders, best_anchors), cost);
}

}  // namespace

AcquisitionProblem AcquisitionProblem::build(Network net,
                                             std::vector<std::string> targets,
                                             Vector thresholds, Vector prices,
                                             AcquisitionVariant variant) {
  if (!net.ownership()) {
    throw Error(ErrorCode::BadParameter,
                "acquisition problems require an ownership network");
  }
  if (targets.empty()) {
    throw Error(ErrorCode::BadParameter, "target set must not be empty");
  }
  if (thresholds.size() != net.size() || prices.size() != net.size()) {
    throw Error(ErrorCode::BadParameter,
                "thresholds and prices must cover every node");
  }
  for (Index i = 0; i < net.size(); ++i) {
    if (!(thresholds(i) > 0.0) || thresholds(i) > 1.0) {
      throw Error(ErrorCode::BadParameter, "thresholds must lie in (0, 1]");
    }
    if (!(prices(i) > 0.0) || !std::isfinite(prices(i))) {
      throw Error(ErrorCode::BadParameter, "prices must be positive and finite");
    }
  }

  std::vector<char> flags(static_cast<size_t>(net.size()), 0);
  for (const std::string& id : targets) {
    const Index i = net.index_of(id);
    if (flags[size_t(i)]) {
      throw Error(ErrorCode::BadParameter, "duplicate target " + id);
    }
    flags[size_t(i)] = 1;
  }
  return {std::move(net), std::move(targets), std::move(thresholds),
          std::move(prices), variant, std::move(flags)};
}

AcquisitionProblem AcquisitionProblem::uniform(Network net,
                                               std::vector<std::string> targets,
                                               double threshold, double price,
                                               AcquisitionVariant variant) {
  const Index n = net.size();
  return build(std::move(net), std::move(targets),
               Vector::Constant(n, threshold), Vector::Constant(n, price),
               variant);
}

AcquisitionPlan evaluate_plan(const AcquisitionProblem& prob,
                              const std::vector<std::string>& controlled_ids) {
  const Holders holders = collect_holders(prob.net);
  const Index n = prob.net.size();

  std::vector<char> chosen(static_cast<size_t>(n), 0);
  for (const std::string& id : controlled_ids) {
    const Index i = prob.net.index_of(id);
    if (prob.variant != AcquisitionVariant::CCP && prob.is_target(i)) {
      throw Error(ErrorCode::BadParameter,
                  "targets are controlled implicitly; " + id +
                      " must not be listed");
    }
    chosen[size_t(i)] = 1;
  }

  if (prob.variant == AcquisitionVariant::CCP) {
    double cost = 0.0;
    Vector purchases = Vector::Zero(n);
    for (Index i = 0; i < n; ++i) {
      if (!chosen[size_t(i)]) continue;
      if (prob.thresholds(i) > holders.free_float(i) + kFloatSlack) {
        throw Error(ErrorCode::SharesUnavailable,
                    "anchor " + prob.net.node(i).id + " needs " +
                        std::to_string(prob.thresholds(i)) +
                        " but only the free float is for sale");
      }
      purchases(i) = prob.thresholds(i);
      cost += prob.prices(i) * prob.thresholds(i);
    }
    std::vector<char> certified = ccp_closure(prob, holders, chosen);
    if (!covers_targets(prob, certified)) {
      throw Error(ErrorCode::Infeasible,
                  "anchors do not certify every target");
    }
    return make_plan(prob, std::move(purchases), std::move(certified), cost);
  }

  std::vector<char> controlled = chosen;
  for (Index i = 0; i < n; ++i) {
    if (prob.is_target(i)) controlled[size_t(i)] = 1;
  }
  Completion done = complete_ic(prob, holders, controlled);
  if (!done.feasible) {
    throw Error(ErrorCode::SharesUnavailable,
                "controlling " + prob.net.node(done.blocked).id +
                    " requires more stake than its free float");
  }
  return make_plan(prob, std::move(done.purchases), std::move(controlled),
                   done.cost);
}

AcquisitionPlan solve_min_cost_control(const AcquisitionProblem& prob) {
  const Holders holders = collect_holders(prob.net);
  if (prob.variant == AcquisitionVariant::CCP) return solve_ccp(prob, holders);
  return solve_ic(prob, holders);
}

}  // namespace netpower
