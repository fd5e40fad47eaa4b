#include "netpower/hybrid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <utility>

#include "netpower/error.hpp"

namespace netpower {
namespace {

constexpr double kQuotaEps = 1e-12;
constexpr double kSolveResidual = 1e-10;
constexpr int kBlockSize = 256;
constexpr int kMaxSolveSteps = 1 << 20;

std::string format_real(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

const char* rule_name(PivotRule rule) {
  return rule == PivotRule::ShapleyOrder ? "shapley-order" : "johnston-split";
}

void check_config(const Network& net, const SimulationConfig& cfg) {
  if (!net.ownership()) {
    fail(ErrorCode::BadParameter, "control simulation requires an ownership network");
  }
  if (cfg.iterations < 1) {
    fail(ErrorCode::BadParameter, "iterations must be at least 1");
  }
  if (!(cfg.damping > 0.0) || !(cfg.damping < 1.0)) {
    fail(ErrorCode::BadParameter, "damping must lie strictly between 0 and 1");
  }
  if (!(cfg.quota > 0.0) || !(cfg.quota <= 1.0)) {
    fail(ErrorCode::BadParameter, "quota must lie in (0, 1]");
  }
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream(std::uint64_t seed, std::uint64_t iteration) {
  return mix64(mix64(seed) ^ (0x9e3779b97f4a7c15ULL * (iteration + 1)));
}

// Unbiased draw from [0, n); rejection keeps the result independent of the
// standard library's distribution implementation.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t reject_above = max - (max % n + 1) % n;
  std::uint64_t x = rng();
  while (x > reject_above) x = rng();
  return x % n;
}

// Fixed-point iteration for x = b + d Y x. Y has column sums at most 1, so
// the iteration contracts at rate d; on return ||(I - dY)x - b||_inf is at
// most kSolveResidual.
void neumann_solve(const std::vector<ControlLink>& links, double d, const Vector& b, Vector& x,
                   Vector& next) {
  x = b;
  for (int step = 0; step < kMaxSolveSteps; ++step) {
    next.setZero();
    for (const ControlLink& link : links) {
      next(link.controller) += link.weight * x(link.entity);
    }
    next = b + d * next;
    if ((next - x).lpNorm<Eigen::Infinity>() <= kSolveResidual) return;
    x.swap(next);
  }
  fail(ErrorCode::SingularDraw, "control propagation did not converge");
}

Vector node_values(const Network& net) {
  Vector values(net.size());
  for (Index i = 0; i < net.size(); ++i) values(i) = net.node(i).value;
  return values;
}

int thread_budget(int blocks) {
  int budget = static_cast<int>(std::thread::hardware_concurrency());
  if (budget < 1) budget = 1;
  if (const char* env = std::getenv("NETPOWER_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && parsed >= 1) budget = std::min(budget, static_cast<int>(std::min<long>(parsed, 1024)));
  }
  return std::max(1, std::min(budget, blocks));
}

// Runs body(block) for every block index. Work is claimed through an atomic
// counter but each block owns its accumulator, so scheduling cannot change
// the result.
void run_blocks(int blocks, const std::function<void(int)>& body) {
  const int threads = thread_budget(blocks);
  if (threads <= 1) {
    for (int b = 0; b < blocks; ++b) body(b);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&]() {
      try {
        for (int b = next.fetch_add(1); b < blocks && !failed.load(); b = next.fetch_add(1)) {
          body(b);
        }
      } catch (...) {
        failed.store(true);
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (std::thread& worker : pool) worker.join();
  if (error) std::rethrow_exception(error);
}

void append_config_params(ScoreVector& out, const SimulationConfig& cfg) {
  out.params["iterations"] = std::to_string(cfg.iterations);
  out.params["damping"] = format_real(cfg.damping);
  out.params["quota"] = format_real(cfg.quota);
  out.params["seed"] = std::to_string(cfg.seed);
  out.params["pivot_rule"] = rule_name(cfg.pivot_rule);
  out.params["include_own_endowments"] = cfg.include_own_endowments ? "true" : "false";
}

std::vector<double> average_ranks(const Vector& scores) {
  const auto n = static_cast<size_t>(scores.size());
  std::vector<Index> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = static_cast<Index>(i);
  std::sort(order.begin(), order.end(),
            [&](Index lhs, Index rhs) { return scores(lhs) > scores(rhs); });
  std::vector<double> ranks(n, 0.0);
  size_t start = 0;
  while (start < n) {
    size_t stop = start;
    while (stop + 1 < n && scores(order[stop + 1]) == scores(order[start])) ++stop;
    // positions are 1-based; ties share the mean of their positions
    const double shared = 0.5 * static_cast<double>(start + stop) + 1.0;
    for (size_t i = start; i <= stop; ++i) ranks[static_cast<size_t>(order[i])] = shared;
    start = stop + 1;
  }
  return ranks;
}

std::vector<std::string> top_ids(const ScoreVector& profile, int k) {
  std::vector<Index> order(profile.ids.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Index>(i);
  std::sort(order.begin(), order.end(), [&](Index lhs, Index rhs) {
    if (profile.scores(lhs) != profile.scores(rhs)) return profile.scores(lhs) > profile.scores(rhs);
    return profile.ids[static_cast<size_t>(lhs)] < profile.ids[static_cast<size_t>(rhs)];
  });
  std::vector<std::string> ids;
  ids.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) ids.push_back(profile.ids[static_cast<size_t>(order[static_cast<size_t>(i)])]);
  return ids;
}

}  // namespace

IterationDraw draw_control_structure(const Network& net, const SimulationConfig& cfg,
                                     std::mt19937_64& rng) {
  check_config(net, cfg);
  IterationDraw draw;
  std::vector<Shareholding> order;
  for (Index entity = 0; entity < net.size(); ++entity) {
    const std::vector<Shareholding>& holders = net.in_edges(entity);
    if (holders.empty()) continue;
    order.assign(holders.begin(), holders.end());
    for (size_t i = order.size() - 1; i > 0; --i) {
      const size_t j = static_cast<size_t>(bounded_draw(rng, static_cast<std::uint64_t>(i) + 1));
      std::swap(order[i], order[j]);
    }
    double total = 0.0;
    size_t crosser = order.size();
    for (size_t i = 0; i < order.size(); ++i) {
      total += order[i].weight;
      if (total >= cfg.quota - kQuotaEps) {
        crosser = i;
        break;
      }
    }
    if (crosser == order.size()) continue;  // quota unreachable, nobody decides this entity
    if (cfg.pivot_rule == PivotRule::ShapleyOrder) {
      draw.links.push_back({order[crosser].owner, entity, 1.0});
    } else {
      size_t critical = 0;
      for (size_t i = 0; i <= crosser; ++i) {
        if (total - order[i].weight < cfg.quota - kQuotaEps) ++critical;
      }
      const double share = 1.0 / static_cast<double>(critical);
      for (size_t i = 0; i <= crosser; ++i) {
        if (total - order[i].weight < cfg.quota - kQuotaEps) {
          draw.links.push_back({order[i].owner, entity, share});
        }
      }
    }
  }
  return draw;
}

ScoreVector npi(const Network& net, const SimulationConfig& cfg) {
  check_config(net, cfg);
  const Index n = net.size();
  const Vector values = node_values(net);

  const int blocks = (cfg.iterations + kBlockSize - 1) / kBlockSize;
  std::vector<Vector> block_sums(static_cast<size_t>(blocks), Vector::Zero(n));
  run_blocks(blocks, [&](int block) {
    Vector sum = Vector::Zero(n);
    Vector solved(n);
    Vector scratch(n);
    const int begin = block * kBlockSize;
    const int end = std::min(cfg.iterations, begin + kBlockSize);
    for (int t = begin; t < end; ++t) {
      std::mt19937_64 rng(substream(cfg.seed, static_cast<std::uint64_t>(t)));
      const IterationDraw draw = draw_control_structure(net, cfg, rng);
      neumann_solve(draw.links, cfg.damping, values, solved, scratch);
      sum += solved;
    }
    block_sums[static_cast<size_t>(block)] = std::move(sum);
  });

  Vector total = Vector::Zero(n);
  for (const Vector& sum : block_sums) total += sum;
  Vector scores = total / static_cast<double>(cfg.iterations);
  if (!cfg.include_own_endowments) scores -= values;

  ScoreVector out = make_score_vector(net, "npi", std::move(scores), false);
  append_config_params(out, cfg);
  return out;
}

FlowEstimate npf(const Network& net, const SimulationConfig& cfg) {
  check_config(net, cfg);
  const Index n = net.size();
  const Vector values = node_values(net);

  const int blocks = (cfg.iterations + kBlockSize - 1) / kBlockSize;
  std::vector<Matrix> block_sums(static_cast<size_t>(blocks), Matrix::Zero(n, n));
  run_blocks(blocks, [&](int block) {
    Matrix sum = Matrix::Zero(n, n);
    Vector rhs = Vector::Zero(n);
    Vector solved(n);
    Vector scratch(n);
    const int begin = block * kBlockSize;
    const int end = std::min(cfg.iterations, begin + kBlockSize);
    for (int t = begin; t < end; ++t) {
      std::mt19937_64 rng(substream(cfg.seed, static_cast<std::uint64_t>(t)));
      const IterationDraw draw = draw_control_structure(net, cfg, rng);
      for (Index j = 0; j < n; ++j) {
        if (values(j) == 0.0) continue;
        rhs(j) = values(j);
        neumann_solve(draw.links, cfg.damping, rhs, solved, scratch);
        sum.col(j) += solved;
        rhs(j) = 0.0;
      }
    }
    block_sums[static_cast<size_t>(block)] = std::move(sum);
  });

  Matrix transmitted = Matrix::Zero(n, n);
  for (const Matrix& sum : block_sums) transmitted += sum;
  transmitted /= static_cast<double>(cfg.iterations);
  transmitted.diagonal().setZero();

  FlowEstimate estimate;
  estimate.ids = net.ids();
  estimate.transmitted = std::move(transmitted);
  Vector aggregate = estimate.transmitted.rowwise().sum();
  estimate.aggregate = make_score_vector(net, "npf", std::move(aggregate), false);
  append_config_params(estimate.aggregate, cfg);
  return estimate;
}

ProfileComparison compare_profiles(const ScoreVector& a, const ScoreVector& b, int top) {
  if (a.ids.size() != b.ids.size()) {
    fail(ErrorCode::MismatchedNodes, "profiles cover different numbers of nodes");
  }
  const size_t n = a.ids.size();
  std::unordered_map<std::string, Index> remaining;
  remaining.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    if (!remaining.emplace(b.ids[i], static_cast<Index>(i)).second) {
      fail(ErrorCode::MismatchedNodes, "duplicate node id '" + b.ids[i] + "'");
    }
  }
  Vector b_scores(static_cast<Index>(n));
  for (size_t i = 0; i < n; ++i) {
    const auto found = remaining.find(a.ids[i]);
    if (found == remaining.end()) {
      fail(ErrorCode::MismatchedNodes, "node '" + a.ids[i] + "' is missing from one profile");
    }
    b_scores(static_cast<Index>(i)) = b.scores(found->second);
    remaining.erase(found);
  }

  const std::vector<double> rank_a = average_ranks(a.scores);
  const std::vector<double> rank_b = average_ranks(b_scores);

  double mean_a = 0.0;
  double mean_b = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mean_a += rank_a[i];
    mean_b += rank_b[i];
  }
  if (n > 0) {
    mean_a /= static_cast<double>(n);
    mean_b /= static_cast<double>(n);
  }
  double cross = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double da = rank_a[i] - mean_a;
    const double db = rank_b[i] - mean_b;
    cross += da * db;
    var_a += da * da;
    var_b += db * db;
  }

  ProfileComparison report;
  if (var_a == 0.0 && var_b == 0.0) {
    report.spearman = 1.0;  // both flat: identical orderings
  } else if (var_a == 0.0 || var_b == 0.0) {
    report.spearman = 0.0;  // one flat profile carries no ranking signal
  } else {
    report.spearman = std::clamp(cross / std::sqrt(var_a * var_b), -1.0, 1.0);
  }

  const int k = std::max(1, std::min<int>(top, static_cast<int>(n)));
  if (n == 0) {
    report.top_overlap = 1.0;
  } else {
    const std::vector<std::string> lead_a = top_ids(a, k);
    std::vector<std::string> lead_b = top_ids(b, k);
    std::sort(lead_b.begin(), lead_b.end());
    int shared = 0;
    for (const std::string& id : lead_a) {
      if (std::binary_search(lead_b.begin(), lead_b.end(), id)) ++shared;
    }
    report.top_overlap = static_cast<double>(shared) / static_cast<double>(k);
  }

  report.ids = a.ids;
  report.rank_delta.resize(n);
  for (size_t i = 0; i < n; ++i) report.rank_delta[i] = rank_b[i] - rank_a[i];
  return report;
}

}  // namespace netpower
