// Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
// the number of failures. Expects the path to the netpower CLI binary as its
// only argument (defaults to ../tools/netpower next to this binary).

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "helpers.hpp"
#include "oracles.hpp"

#include "netpower/centrality.hpp"
#include "netpower/concentration.hpp"
#include "netpower/flow.hpp"
#include "netpower/hybrid.hpp"
#include "netpower/optimize.hpp"
#include "netpower/voting.hpp"

using namespace netpower;
using helpers::node_name;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (ok && !cond) {
      ok = false;
      detail = what;
    }
  }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Criterion 1: classical indices versus brute-force enumeration.

WeightedVotingGame random_integer_game(std::mt19937_64& rng, int n) {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back(std::string(1, char('a' + i)));
  std::vector<long long> weights;
  long long total = 0;
  for (int i = 0; i < n; ++i) {
    const long long w = static_cast<long long>(rng() % 10);
    weights.push_back(w);
    total += w;
  }
  if (total == 0) {
    weights[0] = 1;
    total = 1;
  }
  const long long quota = 1 + static_cast<long long>(rng() % total);
  return WeightedVotingGame::from_integer_weights(ids, std::move(weights), quota);
}

Check classical_indices_vs_enumeration() {
  Check c;
  std::mt19937_64 rng(20101);
  for (int trial = 0; trial < 500 && c.ok; ++trial) {
    const int n = 1 + int(rng() % 8);
    WeightedVotingGame game = random_integer_game(rng, n);
    const auto win = oracles::weighted_win(game.integer_weights, game.integer_quota);

    PowerProfile ss = shapley_shubik(game);
    const auto pivots = oracles::pivot_counts_by_permutations(n, win);
    for (int i = 0; i < n; ++i) {
      c.require(ss.raw(i) == double(pivots[size_t(i)]),
                "shapley-shubik pivot count differs on trial " + std::to_string(trial));
    }

    PowerProfile bz = banzhaf(game);
    const auto swings = oracles::swing_counts_by_subsets(n, win);
    for (int i = 0; i < n; ++i) {
      c.require(bz.raw(i) == double(swings[size_t(i)]),
                "banzhaf swing count differs on trial " + std::to_string(trial));
    }

    PowerProfile j = johnston(game);
    const auto jo = oracles::johnston_by_subsets(n, win);
    c.require(jo.any_vulnerable, "oracle found no vulnerable coalition on trial " +
                                     std::to_string(trial));
    for (int i = 0; i < n && c.ok; ++i) {
      c.require(std::abs(j.values(i) - jo.normalized[size_t(i)]) <= 1e-12,
                "johnston share differs on trial " + std::to_string(trial));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 2: hand-derived fixtures, exact.

Check voting_fixtures_exact() {
  Check c;
  const std::vector<std::string> abc = {"a", "b", "c"};

  PowerProfile ss = shapley_shubik(
      WeightedVotingGame::from_integer_weights(abc, {49, 49, 2}, 50));
  for (int i = 0; i < 3; ++i) {
    c.require(ss.values(i) == 1.0 / 3.0, "[q=50; 49,49,2] shapley-shubik is not 1/3");
  }

  WeightedVotingGame veto = WeightedVotingGame::from_integer_weights(abc, {2, 1, 1}, 3);
  PowerProfile bz = banzhaf(veto, true);
  c.require(bz.values(0) == 0.6, "[q=3; 2,1,1] normalized banzhaf head is not 0.6");
  c.require(bz.values(1) == 0.2 && bz.values(2) == 0.2,
            "[q=3; 2,1,1] normalized banzhaf tail is not 0.2");

  PowerProfile j = johnston(veto);
  c.require(j.values(0) == 2.0 / 3.0, "[q=3; 2,1,1] johnston head is not 2/3");
  c.require(j.values(1) == 1.0 / 6.0 && j.values(2) == 1.0 / 6.0,
            "[q=3; 2,1,1] johnston tail is not 1/6");
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 3: centrality versus exhaustive path enumeration.

Check centrality_vs_enumeration() {
  Check c;
  std::mt19937_64 rng(20103);
  for (int trial = 0; trial < 200 && c.ok; ++trial) {
    const bool directed = trial % 3 == 1;
    const bool weighted = trial % 2 == 1;
    Network net = helpers::random_connected(rng, 3 + int(rng() % 5), directed, weighted);
    CentralityOptions opts;
    opts.weighted = weighted;

    const Vector want = oracles::betweenness_by_enumeration(net, weighted);
    const Vector got = betweenness_centrality(net, opts).scores;
    c.require((got - want).lpNorm<Eigen::Infinity>() <= 1e-9,
              "betweenness differs from enumeration on trial " + std::to_string(trial));

    if (!directed) {
      const oracles::BrutePaths paths = oracles::geodesics_by_enumeration(net, weighted);
      const Vector close = closeness_centrality(net, opts).scores;
      const Vector ecc = eccentricity_centrality(net, opts).scores;
      for (Index i = 0; i < net.size() && c.ok; ++i) {
        const double row_sum = paths.dist.row(i).sum();
        const double row_max = paths.dist.row(i).maxCoeff();
        c.require(std::abs(close(i) - 1.0 / row_sum) <= 1e-12,
                  "closeness disagrees with enumerated distances on trial " +
                      std::to_string(trial));
        c.require(std::abs(ecc(i) - 1.0 / row_max) <= 1e-12,
                  "eccentricity disagrees with enumerated distances on trial " +
                      std::to_string(trial));
      }
    }

    ScoreVector eig = eigenvector_centrality(net, opts);
    Matrix a = symmetrized_adjacency(net);
    if (!weighted) a = (a.array() > 0.0).cast<double>().matrix();
    const double lambda = std::stod(eig.params.at("eigenvalue"));
    c.require((a * eig.scores - lambda * eig.scores).lpNorm<Eigen::Infinity>() <= 1e-8,
              "eigenvector residual exceeds 1e-8 on trial " + std::to_string(trial));
  }

  for (int trial = 0; trial < 50 && c.ok; ++trial) {
    Network tree = helpers::random_tree(rng, 2 + int(rng() % 7));
    const Vector walk = walk_betweenness(tree).scores;
    const Vector geo = betweenness_centrality(tree).scores;
    c.require((walk - geo).lpNorm<Eigen::Infinity>() <= 1e-8,
              "current-flow and geodesic betweenness disagree on tree trial " +
                  std::to_string(trial));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 4: flow measures against their defining systems.

Network random_dag(std::mt19937_64& rng, int n, double edge_prob = 0.4) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<NodeRecord> nodes;
  for (int i = 0; i < n; ++i) {
    nodes.push_back({node_name(i), NodeKind::Firm, unif(rng) * 3.0});
  }
  std::vector<Edge> edges;
  for (int j = 1; j < n; ++j) {
    double room = 0.98;
    for (int i = 0; i < j && room > 0.05; ++i) {
      if (unif(rng) >= edge_prob) continue;
      const double stake = 0.05 + unif(rng) * (room - 0.05);
      edges.push_back({node_name(i), node_name(j), stake});
      room -= stake;
    }
  }
  return Network::build(std::move(nodes), std::move(edges), {true, true});
}

/// Ownership network guaranteed to contain a directed cycle, with every
/// column sum kept below one so the propagation series still converges.
Network random_cyclic_ownership(std::mt19937_64& rng) {
  const int n = 3 + int(rng() % 10);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<NodeRecord> nodes;
  for (int i = 0; i < n; ++i) {
    nodes.push_back({node_name(i), NodeKind::Firm, unif(rng) * 3.0});
  }
  std::vector<Edge> edges;
  std::set<std::pair<int, int>> used;
  std::vector<double> insum(size_t(n), 0.0);
  for (int j = 1; j < n; ++j) {
    double room = 0.6;
    for (int i = 0; i < j && room > 0.05; ++i) {
      if (unif(rng) >= 0.4) continue;
      const double stake = 0.05 + unif(rng) * (room - 0.05);
      edges.push_back({node_name(i), node_name(j), stake});
      used.insert({i, j});
      insum[size_t(j)] += stake;
      room -= stake;
    }
  }
  const int a = int(rng() % unsigned(n - 1));
  const int b = a + 1 + int(rng() % unsigned(n - a - 1));
  if (!used.count({a, b})) {
    const double stake = std::min(0.3, 0.95 - insum[size_t(b)]);
    edges.push_back({node_name(a), node_name(b), stake});
    insum[size_t(b)] += stake;
  }
  const double back = std::min(0.3, 0.95 - insum[size_t(a)]);
  edges.push_back({node_name(b), node_name(a), back});
  return Network::build(std::move(nodes), std::move(edges), {true, true});
}

Vector values_of(const Network& net) {
  Vector v(net.size());
  for (Index i = 0; i < net.size(); ++i) v(i) = net.node(i).value;
  return v;
}

Check flow_measures_consistent() {
  Check c;
  std::mt19937_64 rng(20104);

  for (int trial = 0; trial < 100 && c.ok; ++trial) {
    Network net = trial % 2 == 0 ? random_dag(rng, 3 + int(rng() % 10))
                                 : random_cyclic_ownership(rng);
    const Vector x = ncv(net).scores;
    const Vector v = values_of(net);
    const Matrix& C = net.adjacency();
    const double resid = (x - C * v - C * x).lpNorm<Eigen::Infinity>();
    c.require(resid <= 1e-9 * std::max(1.0, x.lpNorm<Eigen::Infinity>()),
              "control-value residual exceeds 1e-9 on trial " + std::to_string(trial));
  }

  for (int trial = 0; trial < 50 && c.ok; ++trial) {
    Network dag = random_dag(rng, 2 + int(rng() % 12));
    const Vector v = values_of(dag);
    const Matrix& C = dag.adjacency();
    Vector term = C * v;
    Vector acc = term;
    for (Index l = 2; l <= dag.size(); ++l) {
      term = C * term;
      acc += term;
    }
    c.require((ncv(dag).scores - acc).lpNorm<Eigen::Infinity>() == 0.0,
              "acyclic control value differs from the walk sum on trial " +
                  std::to_string(trial));
    c.require((nncv(dag).scores - ncv(dag).scores).lpNorm<Eigen::Infinity>() == 0.0,
              "net control value differs on an acyclic network, trial " +
                  std::to_string(trial));
  }

  for (int trial = 0; trial < 50 && c.ok; ++trial) {
    Network net = helpers::random_connected(rng, 2 + int(rng() % 10), true,
                                            trial % 2 == 1);
    KatzResult k = katz_influence(net);
    const double alpha = std::stod(k.scores.params.at("attenuation"));
    const Matrix& A = net.adjacency();
    Matrix series = Matrix::Zero(net.size(), net.size());
    Matrix walk = A;
    for (int l = 0; l < 100000; ++l) {
      series += walk;
      walk = alpha * (walk * A);
      // Geometric decay at rate <= 0.9 keeps the neglected tail below 1e-11.
      if (walk.lpNorm<Eigen::Infinity>() <
          1e-12 * std::max(1.0, series.lpNorm<Eigen::Infinity>())) {
        break;
      }
    }
    c.require((k.influence - series).lpNorm<Eigen::Infinity>() <=
                  1e-10 * std::max(1.0, series.lpNorm<Eigen::Infinity>()),
              "katz influence strays from the walk series on trial " +
                  std::to_string(trial));
  }

  for (int trial = 0; trial < 50 && c.ok; ++trial) {
    Network net = helpers::random_connected(rng, 2 + int(rng() % 12), true, false);
    ScoreVector pr = pagerank(net);
    const double d = std::stod(pr.params.at("damping"));
    const Index n = net.size();
    double dangling = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (net.out_edges(j).empty()) dangling += pr.scores(j);
    }
    Vector next = Vector::Constant(n, (1.0 - d) + d * dangling / double(n));
    for (Index j = 0; j < n; ++j) {
      if (net.out_edges(j).empty()) continue;
      const double push = d * pr.scores(j) / double(net.out_edges(j).size());
      for (const Shareholding& h : net.out_edges(j)) next(h.owner) += push;
    }
    c.require((next - pr.scores).lpNorm<Eigen::Infinity>() <= 1e-10,
              "pagerank fixed-point residual exceeds 1e-10 on trial " +
                  std::to_string(trial));
  }

  for (int trial = 0; trial < 200 && c.ok; ++trial) {
    Network net = random_cyclic_ownership(rng);
    const Vector full = ncv(net).scores;
    const Vector trimmed = nncv(net).scores;
    for (Index i = 0; i < net.size() && c.ok; ++i) {
      c.require(trimmed(i) <= full(i) + 1e-12,
                "net control value exceeds the gross value on cyclic trial " +
                    std::to_string(trial));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 5: acquisition solver versus exhaustive enumeration.

std::vector<std::string> ids_on(const Network& net, unsigned mask,
                                const std::vector<Index>& pool) {
  std::vector<std::string> out;
  for (size_t b = 0; b < pool.size(); ++b) {
    if (mask & (1u << (pool.size() - 1 - b))) out.push_back(net.node(pool[b]).id);
  }
  return out;
}

struct BruteResult {
  bool feasible = false;
  double cost = 0.0;
  std::vector<char> controlled;
};

/// Exhaustive reference: every subset of eligible choices, first strictly
/// better plan in lexicographic choice order wins (the solver's tie rule).
BruteResult brute_solve(const AcquisitionProblem& prob) {
  const Network& net = prob.net;
  std::vector<Index> pool;
  for (Index i = 0; i < net.size(); ++i) {
    if (prob.variant == AcquisitionVariant::CCP) {
      if (prob.thresholds(i) <= net.free_float(i) + 1e-9) pool.push_back(i);
    } else if (!prob.is_target(i)) {
      pool.push_back(i);
    }
  }
  BruteResult best;
  for (unsigned mask = 0; mask < (1u << pool.size()); ++mask) {
    try {
      AcquisitionPlan plan = evaluate_plan(prob, ids_on(net, mask, pool));
      if (!best.feasible || plan.total_cost < best.cost - 1e-12) {
        best.feasible = true;
        best.cost = plan.total_cost;
        best.controlled = plan.controlled;
      }
    } catch (const Error&) {
    }
  }
  return best;
}

/// Re-derives every constraint of a plan from the problem definition alone.
bool recheck_plan(const AcquisitionProblem& prob, const AcquisitionPlan& plan,
                  std::string& why) {
  const Network& net = prob.net;
  const Index n = net.size();
  if (plan.purchases.size() != n || plan.controlled.size() != size_t(n)) {
    why = "plan has the wrong dimensions";
    return false;
  }
  double cost = 0.0;
  for (Index j = 0; j < n; ++j) {
    if (plan.purchases(j) < 0.0 || plan.purchases(j) > net.free_float(j) + 1e-9) {
      why = "purchase outside the available float";
      return false;
    }
    cost += prob.prices(j) * plan.purchases(j);
    if (prob.is_target(j) && !plan.controlled[size_t(j)]) {
      why = "target left uncontrolled";
      return false;
    }
    if (!plan.controlled[size_t(j)] && plan.purchases(j) != 0.0) {
      why = "purchase at an uncontrolled node";
      return false;
    }
  }
  if (std::abs(plan.total_cost - cost) > 1e-12 * std::max(1.0, cost)) {
    why = "reported cost does not match the purchases";
    return false;
  }

  if (prob.variant == AcquisitionVariant::CCP) {
    std::vector<char> certified(size_t(n), 0);
    for (Index j = 0; j < n; ++j) {
      if (plan.purchases(j) > 0.0) {
        if (plan.purchases(j) != prob.thresholds(j)) {
          why = "anchor did not buy exactly its threshold";
          return false;
        }
        certified[size_t(j)] = 1;
      }
    }
    bool grew = true;
    while (grew) {
      grew = false;
      for (Index j = 0; j < n; ++j) {
        if (certified[size_t(j)]) continue;
        double pooled = 0.0;
        for (const Shareholding& h : net.in_edges(j)) {
          if (certified[size_t(h.owner)]) pooled += h.weight;
        }
        if (pooled >= prob.thresholds(j) - 1e-12) {
          certified[size_t(j)] = 1;
          grew = true;
        }
      }
    }
    if (certified != plan.controlled) {
      why = "controlled set is not the closure of the anchors";
      return false;
    }
    return true;
  }

  for (Index j = 0; j < n; ++j) {
    if (!plan.controlled[size_t(j)]) continue;
    double voting = plan.purchases(j);
    for (const Shareholding& h : net.in_edges(j)) {
      if (!plan.controlled[size_t(h.owner)]) continue;
      if (prob.variant != AcquisitionVariant::IC && !prob.is_target(j) &&
          prob.is_target(h.owner)) {
        continue;
      }
      if (prob.variant == AcquisitionVariant::IC3 &&
          net.adjacency()(j, h.owner) > 0.0) {
        continue;
      }
      voting += h.weight;
    }
    if (voting < prob.thresholds(j) - 1e-9) {
      why = "controlled node falls short of its threshold";
      return false;
    }
  }
  return true;
}

AcquisitionProblem random_problem(std::mt19937_64& rng, AcquisitionVariant variant) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Network net = helpers::random_ownership(rng, 2 + int(rng() % 2), 3 + int(rng() % 8));
  const Index n = net.size();
  std::vector<std::string> targets;
  const int want = 1 + int(rng() % 2);
  for (Index i = 0; i < n && int(targets.size()) < want; ++i) {
    if (rng() % 3 == 0 || n - i <= want - Index(targets.size())) {
      targets.push_back(net.node(i).id);
    }
  }
  Vector thresholds(n), prices(n);
  for (Index i = 0; i < n; ++i) {
    thresholds(i) = 0.25 + 0.5 * unif(rng);
    prices(i) = 0.1 + 1.9 * unif(rng);
  }
  return AcquisitionProblem::build(std::move(net), std::move(targets),
                                   std::move(thresholds), std::move(prices), variant);
}

Check solver_vs_enumeration() {
  Check c;
  std::mt19937_64 rng(20105);
  const AcquisitionVariant variants[] = {
      AcquisitionVariant::IC, AcquisitionVariant::IC2, AcquisitionVariant::IC3,
      AcquisitionVariant::CCP};
  for (int trial = 0; trial < 300 && c.ok; ++trial) {
    AcquisitionProblem prob = random_problem(rng, variants[trial % 4]);
    BruteResult brute = brute_solve(prob);

    bool solved = true;
    AcquisitionPlan plan;
    try {
      plan = solve_min_cost_control(prob);
    } catch (const Error& e) {
      solved = false;
      c.require(e.code() == ErrorCode::Infeasible,
                "solver failed with an unexpected error on trial " +
                    std::to_string(trial));
    }
    c.require(solved == brute.feasible,
              "solver and enumeration disagree on feasibility, trial " +
                  std::to_string(trial));
    if (c.ok && solved) {
      c.require(std::abs(plan.total_cost - brute.cost) <=
                    1e-12 * std::max(1.0, brute.cost),
                "solver cost differs from enumeration on trial " +
                    std::to_string(trial));
      c.require(plan.controlled == brute.controlled,
                "solver control set differs from enumeration on trial " +
                    std::to_string(trial));
      std::string why;
      c.require(recheck_plan(prob, plan, why),
                "plan fails the re-checker on trial " + std::to_string(trial) +
                    ": " + why);
    }

    // Certified control can never be cheaper than mutual justification.
    AcquisitionProblem as_ic = prob;
    as_ic.variant = AcquisitionVariant::IC;
    AcquisitionProblem as_ccp = prob;
    as_ccp.variant = AcquisitionVariant::CCP;
    double ccp_cost = 0.0;
    bool ccp_solved = true;
    try {
      ccp_cost = solve_min_cost_control(as_ccp).total_cost;
    } catch (const Error&) {
      ccp_solved = false;
    }
    if (ccp_solved) {
      double ic_cost = 0.0;
      bool ic_solved = true;
      try {
        ic_cost = solve_min_cost_control(as_ic).total_cost;
      } catch (const Error&) {
        ic_solved = false;
      }
      c.require(ic_solved, "certified plan exists but the base variant failed, trial " +
                               std::to_string(trial));
      if (ic_solved) {
        c.require(ccp_cost >= ic_cost - 1e-12,
                  "certified cost dips below the base cost on trial " +
                      std::to_string(trial));
      }
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 6: simulated pivot frequencies versus the exact indices.

Network single_firm_network() {
  std::vector<NodeRecord> nodes = {{"f", NodeKind::Firm, 1.0},
                                   {"p1", NodeKind::Person, 0.0},
                                   {"p2", NodeKind::Person, 0.0},
                                   {"p3", NodeKind::Person, 0.0}};
  std::vector<Edge> edges = {
      {"p1", "f", 0.49}, {"p2", "f", 0.49}, {"p3", "f", 0.02}};
  return Network::build(std::move(nodes), std::move(edges), {true, true});
}

Check simulation_converges() {
  Check c;
  Network net = single_firm_network();
  const int T = 200000;

  WeightedVotingGame game = WeightedVotingGame::from_integer_weights(
      {"p1", "p2", "p3"}, {49, 49, 2}, 50);
  const Vector exact_ss = shapley_shubik(game).values;
  const Vector exact_j = johnston(game).values;

  SimulationConfig cfg;
  cfg.iterations = T;
  cfg.seed = 2026;

  ScoreVector order = npi(net, cfg);
  ScoreVector rerun = npi(net, cfg);
  c.require((order.scores - rerun.scores).lpNorm<Eigen::Infinity>() == 0.0,
            "rerun with the same seed is not bit-identical");
  c.require(order.at("f") == 1.0, "sole firm does not keep exactly its own value");
  for (int i = 0; i < 3; ++i) {
    const double p = exact_ss(i);
    const double band = 4.0 * std::sqrt(p * (1.0 - p) / double(T));
    const double freq = order.at("p" + std::to_string(i + 1)) / cfg.damping;
    c.require(std::abs(freq - p) <= band,
              "pivot frequency of p" + std::to_string(i + 1) + " misses " + fmt(p) +
                  " by more than " + fmt(band));
  }

  cfg.pivot_rule = PivotRule::JohnstonSplit;
  ScoreVector split = npi(net, cfg);
  ScoreVector split_rerun = npi(net, cfg);
  c.require((split.scores - split_rerun.scores).lpNorm<Eigen::Infinity>() == 0.0,
            "split-rule rerun with the same seed is not bit-identical");
  for (int i = 0; i < 3; ++i) {
    const double p = exact_j(i);
    const double band = 4.0 * std::sqrt(p * (1.0 - p) / double(T));
    const double freq = split.at("p" + std::to_string(i + 1)) / cfg.damping;
    c.require(std::abs(freq - p) <= band,
              "split attribution of p" + std::to_string(i + 1) + " misses " + fmt(p) +
                  " by more than " + fmt(band));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 7: readouts agree on pyramid apexes.

Check pyramids_agree_on_apex() {
  Check c;
  std::mt19937_64 rng(20107);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100 && c.ok; ++trial) {
    const int firms = 2 + int(rng() % 6);
    const int minors = int(rng() % 3);
    std::vector<NodeRecord> nodes = {{"p1", NodeKind::Person, 0.0}};
    std::vector<Edge> edges;
    std::vector<std::string> firm_ids;
    for (int i = 0; i < firms; ++i) {
      const std::string firm = "f" + std::to_string(i);
      firm_ids.push_back(firm);
      nodes.push_back({firm, NodeKind::Firm, 0.5 + 2.0 * unif(rng)});
      const std::string parent =
          i == 0 ? std::string("p1") : "f" + std::to_string(int(rng() % unsigned(i)));
      edges.push_back({parent, firm, 0.8 + 0.13 * unif(rng)});
    }
    for (int m = 0; m < minors; ++m) {
      const std::string person = "q" + std::to_string(m + 1);
      nodes.push_back({person, NodeKind::Person, 0.0});
      edges.push_back(
          {person, firm_ids[size_t(rng() % unsigned(firms))], 0.01 + 0.02 * unif(rng)});
    }
    Network net = Network::build(std::move(nodes), std::move(edges), {true, true});

    const auto traced = ultimate_control(net);
    for (const std::string& firm : firm_ids) {
      c.require(traced.at(firm).owner == "p1",
                "chain tracing misses the apex on trial " + std::to_string(trial));
    }

    const auto icons = alpha_icon_controllers(net, {}, 1e-4);
    for (const std::string& firm : firm_ids) {
      c.require(icons.count(firm) == 1 && icons.at(firm).controller == "p1",
                "influence readout misses the apex on trial " + std::to_string(trial));
    }

    SimulationConfig cfg;
    cfg.iterations = 16;
    cfg.seed = std::uint64_t(trial);
    ScoreVector sim = npi(net, cfg);
    std::string best_person;
    double best_score = -1.0;
    for (Index i = 0; i < net.size(); ++i) {
      if (net.node(i).kind != NodeKind::Person) continue;
      if (sim.scores(i) > best_score) {
        best_score = sim.scores(i);
        best_person = net.node(i).id;
      }
    }
    c.require(best_person == "p1",
              "simulation ranks someone else on top on trial " + std::to_string(trial));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 8: concentration fixtures and the minimal-group property.

ShareDistribution random_distribution(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::string> ids;
  Vector amounts(n);
  for (int i = 0; i < n; ++i) {
    ids.push_back(node_name(i));
    amounts(i) = 0.05 + unif(rng);
  }
  return ShareDistribution::from_amounts(std::move(ids), std::move(amounts));
}

Check concentration_fixtures_hold() {
  Check c;
  Vector fixture(3);
  fixture << 0.6, 0.2, 0.2;
  c.require(hhi(ShareDistribution::build({"a", "b", "c"}, fixture)) == 0.44,
            "hhi of (0.6, 0.2, 0.2) is not exactly 0.44");

  std::mt19937_64 rng(20108);
  for (int trial = 0; trial < 1000 && c.ok; ++trial) {
    ShareDistribution d = random_distribution(rng, 1 + int(rng() % 20));
    double prev = 0.0;
    for (int k = 1; k <= d.size() && c.ok; ++k) {
      const double cur = top_k(d, k);
      c.require(cur >= prev - 1e-15,
                "top-k concentration decreased in k on trial " + std::to_string(trial));
      prev = cur;
    }
  }

  for (int trial = 0; trial < 100 && c.ok; ++trial) {
    const int n = 1 + int(rng() % 10);
    ShareDistribution d = random_distribution(rng, n);
    std::vector<double> shares(d.shares.data(), d.shares.data() + n);
    for (double H : {0.05, 0.25, 0.5, 0.75, 0.9, 1.0}) {
      const ConcentrationGroup g = nci(d, H);
      const int brute = oracles::smallest_group_reaching(shares, H);
      c.require(int(g.members.size()) == brute,
                "smallest controlling group has the wrong size on trial " +
                    std::to_string(trial));
      std::map<std::string, double> by_id;
      for (int i = 0; i < n; ++i) by_id[d.ids[size_t(i)]] = d.shares(i);
      double covered = 0.0;
      for (const std::string& id : g.members) covered += by_id.at(id);
      c.require(covered >= H - 1e-9,
                "reported group does not reach its target share on trial " +
                    std::to_string(trial));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 9: stored manifests replay byte-identically through the CLI.

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

int run_netpower(const std::string& cli, const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.push_back(cli);
  for (const std::string& a : args) full.push_back(a);
  std::vector<char*> argv;
  argv.reserve(full.size() + 1);
  for (std::string& s : full) argv.push_back(s.data());
  argv.push_back(nullptr);

  const pid_t pid = fork();
  if (pid < 0) return -1;
  if (pid == 0) {
    const int devnull = open("/dev/null", O_WRONLY);
    if (devnull >= 0) {
      dup2(devnull, STDOUT_FILENO);
      dup2(devnull, STDERR_FILENO);
      close(devnull);
    }
    execv(cli.c_str(), argv.data());
    _exit(127);
  }
  int status = 0;
  if (waitpid(pid, &status, 0) < 0) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Check manifests_replay(const std::string& cli) {
  Check c;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "netpower_acceptance";
  fs::create_directories(dir);

  const fs::path chain_nodes = dir / "chain_nodes.csv";
  const fs::path chain_edges = dir / "chain_edges.csv";
  write_file(chain_nodes, "id,kind,value\np1,person,0\nh,firm,0.5\nf,firm,1\n");
  write_file(chain_edges, "source,target,weight\np1,h,0.8\nh,f,0.6\n");
  const fs::path cyc_nodes = dir / "cyc_nodes.csv";
  const fs::path cyc_edges = dir / "cyc_edges.csv";
  write_file(cyc_nodes, "id,kind,value\na,firm,1\nb,firm,1\n");
  write_file(cyc_edges, "source,target,weight\na,b,1.0\nb,a,1.0\n");

  struct Scenario {
    const char* name;
    std::vector<std::string> args;
    int expected_exit;
  };
  const std::vector<Scenario> scenarios = {
      {"deterministic",
       {"flow", "ncv", "--graph", chain_edges.string(), "--nodes", chain_nodes.string()},
       0},
      {"stochastic",
       {"hybrid", "npi", "--graph", chain_edges.string(), "--nodes",
        chain_nodes.string(), "--iterations", "4096", "--seed", "99"},
       0},
      {"failing",
       {"flow", "ncv", "--graph", cyc_edges.string(), "--nodes", cyc_nodes.string()},
       2},
  };

  for (size_t i = 0; i < scenarios.size() && c.ok; ++i) {
    const Scenario& s = scenarios[i];
    const fs::path first = dir / ("run" + std::to_string(i) + ".json");
    std::vector<std::string> args = s.args;
    args.push_back("--out");
    args.push_back(first.string());
    const int code = run_netpower(cli, args);
    c.require(code == s.expected_exit,
              std::string(s.name) + " run exited with " + std::to_string(code) +
                  " instead of " + std::to_string(s.expected_exit));
    if (!c.ok) break;

    const std::string original = read_file(first);
    c.require(!original.empty(), std::string(s.name) + " run wrote no document");
    if (!c.ok) break;

    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(original);
    } catch (const std::exception&) {
      c.require(false, std::string(s.name) + " document is not valid JSON");
      break;
    }
    std::vector<std::string> replay_args;
    for (const auto& part : doc["manifest"]["command"]) {
      replay_args.push_back(part.get<std::string>());
    }
    const fs::path second = dir / ("replay" + std::to_string(i) + ".json");
    replay_args.push_back("--out");
    replay_args.push_back(second.string());
    const int replay_code = run_netpower(cli, replay_args);
    c.require(replay_code == code,
              std::string(s.name) + " replay exited with " +
                  std::to_string(replay_code) + " instead of " + std::to_string(code));
    c.require(read_file(second) == original,
              std::string(s.name) + " replay produced different bytes");
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  if (argc > 1) {
    cli = argv[1];
  } else {
    std::error_code ec;
    const auto self = std::filesystem::canonical("/proc/self/exe", ec);
    if (!ec) cli = (self.parent_path().parent_path() / "tools" / "netpower").string();
  }

  struct Criterion {
    int number;
    const char* label;
    std::function<Check()> run;
    double budget_seconds;
  };
  const std::vector<Criterion> criteria = {
      {1, "power indices equal permutation/subset enumeration on 500 random games",
       classical_indices_vs_enumeration, 60.0},
      {2, "hand-derived voting fixtures match exactly", voting_fixtures_exact, 0.0},
      {3, "centrality agrees with exhaustive path enumeration",
       centrality_vs_enumeration, 0.0},
      {4, "flow measures satisfy their defining systems and series",
       flow_measures_consistent, 0.0},
      {5, "acquisition solver equals exhaustive search and passes the re-checker",
       solver_vs_enumeration, 120.0},
      {6, "simulated pivot frequencies converge to the exact indices, bit-reproducibly",
       simulation_converges, 60.0},
      {7, "chain tracing, influence readout and simulation agree on pyramid apexes",
       pyramids_agree_on_apex, 0.0},
      {8, "concentration fixtures hold and reported groups are minimal",
       concentration_fixtures_hold, 0.0},
      {9, "stored command manifests replay to byte-identical documents",
       [cli] { return manifests_replay(cli); }, 0.0},
  };

  int failures = 0;
  for (const Criterion& crit : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Check result = crit.run();
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (result.ok && crit.budget_seconds > 0.0 && elapsed > crit.budget_seconds) {
      result.ok = false;
      result.detail = "exceeded the " + fmt(crit.budget_seconds) + "s runtime budget";
    }
    if (result.ok) {
      std::printf("criterion %d: PASS  %s [%.1fs]\n", crit.number, crit.label, elapsed);
    } else {
      std::printf("criterion %d: FAIL  %s [%.1fs] -- %s\n", crit.number, crit.label,
                  elapsed, result.detail.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  return failures;
}
