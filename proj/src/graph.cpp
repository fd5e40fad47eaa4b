#include "netpower/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace netpower {

namespace {

constexpr double kShareTolerance = 1e-9;

}  // namespace

Network Network::build(std::vector<NodeRecord> nodes, std::vector<Edge> edges,
                       NetworkOptions options) {
  if (nodes.empty()) fail(ErrorCode::EmptyNetwork, "network has no nodes");
  if (options.ownership && !options.directed) {
    fail(ErrorCode::BadParameter, "ownership networks are directed");
  }

  Network net;
  net.options_ = options;
  net.nodes_ = std::move(nodes);
  std::sort(net.nodes_.begin(), net.nodes_.end(),
            [](const NodeRecord& a, const NodeRecord& b) { return a.id < b.id; });
  for (size_t i = 0; i < net.nodes_.size(); ++i) {
    const std::string& id = net.nodes_[i].id;
    if (!net.index_.emplace(id, static_cast<Index>(i)).second) {
      fail(ErrorCode::DuplicateNode, "duplicate node id '" + id + "'");
    }
    if (!std::isfinite(net.nodes_[i].value) || net.nodes_[i].value < 0.0) {
      fail(ErrorCode::BadParameter,
           "node '" + id + "' needs a finite nonnegative value");
    }
    net.ids_.push_back(id);
  }

  const Index n = net.size();
  net.adjacency_ = Matrix::Zero(n, n);
  net.in_.resize(static_cast<size_t>(n));
  net.out_.resize(static_cast<size_t>(n));

  std::set<std::pair<Index, Index>> seen;
  for (Edge& e : edges) {
    auto si = net.index_.find(e.source);
    auto ti = net.index_.find(e.target);
    if (si == net.index_.end() || ti == net.index_.end()) {
      fail(ErrorCode::UnknownEndpoint,
           "edge " + e.source + "->" + e.target + " references a missing node");
    }
    Index s = si->second, t = ti->second;
    if (!std::isfinite(e.weight) || e.weight < 0.0) {
      fail(ErrorCode::NegativeWeight,
           "edge " + e.source + "->" + e.target + " has weight " +
               std::to_string(e.weight) + "; weights must be finite and >= 0");
    }
    if (options.ownership) {
      if (s == t) {
        fail(ErrorCode::SelfLoopInOwnership,
             "node '" + e.source + "' cannot hold its own shares");
      }
      if (e.weight <= 0.0) {
        fail(ErrorCode::NegativeWeight,
             "ownership edge " + e.source + "->" + e.target +
                 " must carry a share in (0,1]");
      }
      if (e.weight > 1.0 + kShareTolerance) {
        fail(ErrorCode::OwnershipOverflow,
             "ownership edge " + e.source + "->" + e.target +
                 " carries more than all shares");
      }
    }
    std::pair<Index, Index> key =
        options.directed ? std::make_pair(s, t)
                         : std::make_pair(std::min(s, t), std::max(s, t));
    if (!seen.insert(key).second) {
      fail(ErrorCode::DuplicateEdge,
           "duplicate edge " + e.source + "->" + e.target);
    }
    net.adjacency_(s, t) = e.weight;
    net.out_[static_cast<size_t>(s)].push_back({t, e.weight});
    net.in_[static_cast<size_t>(t)].push_back({s, e.weight});
    if (!options.directed && s != t) {
      net.adjacency_(t, s) = e.weight;
      net.out_[static_cast<size_t>(t)].push_back({s, e.weight});
      net.in_[static_cast<size_t>(s)].push_back({t, e.weight});
    }
  }

  if (options.ownership) {
    for (Index j = 0; j < n; ++j) {
      double held = net.adjacency_.col(j).sum();
      if (held > 1.0 + kShareTolerance) {
        fail(ErrorCode::OwnershipOverflow,
             "shares held in node '" + net.ids_[static_cast<size_t>(j)] +
                 "' sum to " + std::to_string(held));
      }
    }
  }

  auto by_owner = [](const Shareholding& a, const Shareholding& b) {
    return a.owner < b.owner;
  };
  for (auto& list : net.in_) std::sort(list.begin(), list.end(), by_owner);
  for (auto& list : net.out_) std::sort(list.begin(), list.end(), by_owner);

  net.edges_.reserve(edges.size());
  for (Edge& e : edges) net.edges_.push_back(std::move(e));
  std::sort(net.edges_.begin(), net.edges_.end(),
            [](const Edge& a, const Edge& b) {
              return std::tie(a.source, a.target) < std::tie(b.source, b.target);
            });
  return net;
}

Index Network::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) fail(ErrorCode::UnknownNode, "unknown node '" + id + "'");
  return it->second;
}

Vector Network::values() const {
  Vector v(size());
  for (Index i = 0; i < size(); ++i) v[i] = nodes_[static_cast<size_t>(i)].value;
  return v;
}

double Network::free_float(Index i) const {
  double held = adjacency_.col(i).sum();
  return std::max(0.0, 1.0 - held);
}

double ScoreVector::at(const std::string& id) const {
  auto it = std::lower_bound(ids.begin(), ids.end(), id);
  if (it == ids.end() || *it != id) {
    fail(ErrorCode::UnknownNode, "no score for node '" + id + "'");
  }
  return scores[static_cast<Index>(it - ids.begin())];
}

ScoreVector make_score_vector(const Network& net, std::string measure,
                              Vector scores, bool normalized) {
  if (scores.size() != net.size()) {
    fail(ErrorCode::BadParameter, "score vector size does not match network");
  }
  ScoreVector sv;
  sv.measure = std::move(measure);
  sv.ids = net.ids();
  sv.scores = std::move(scores);
  sv.normalized = normalized;
  return sv;
}

Matrix symmetrized_adjacency(const Network& net) {
  Matrix S = net.adjacency().cwiseMax(net.adjacency().transpose());
  S.diagonal().setZero();
  return S;
}

std::vector<int> connected_components(const Network& net) {
  const Index n = net.size();
  std::vector<int> label(static_cast<size_t>(n), -1);
  int next = 0;
  std::vector<Index> stack;
  for (Index start = 0; start < n; ++start) {
    if (label[static_cast<size_t>(start)] != -1) continue;
    label[static_cast<size_t>(start)] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      Index u = stack.back();
      stack.pop_back();
      auto visit = [&](const std::vector<Shareholding>& list) {
        for (const Shareholding& h : list) {
          if (label[static_cast<size_t>(h.owner)] == -1) {
            label[static_cast<size_t>(h.owner)] = next;
            stack.push_back(h.owner);
          }
        }
      };
      visit(net.out_edges(u));
      visit(net.in_edges(u));
    }
    ++next;
  }
  return label;
}

int component_count(const std::vector<int>& labels) {
  int count = 0;
  for (int l : labels) count = std::max(count, l + 1);
  return count;
}

namespace {

struct TarjanState {
  const Network* net;
  std::vector<int> index, low, comp;
  std::vector<bool> on_stack;
  std::vector<Index> stack;
  int next_index = 0;
  int next_comp = 0;

  void run(Index root) {
    // Iterative Tarjan to keep deep chains off the call stack.
    struct Frame { Index v; size_t edge; };
    std::vector<Frame> frames{{root, 0}};
    open(root);
    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto& out = net->out_edges(f.v);
      if (f.edge < out.size()) {
        Index w = out[f.edge++].owner;
        if (index[static_cast<size_t>(w)] == -1) {
          open(w);
          frames.push_back({w, 0});
        } else if (on_stack[static_cast<size_t>(w)]) {
          low[static_cast<size_t>(f.v)] =
              std::min(low[static_cast<size_t>(f.v)], index[static_cast<size_t>(w)]);
        }
      } else {
        Index v = f.v;
        frames.pop_back();
        if (!frames.empty()) {
          Index parent = frames.back().v;
          low[static_cast<size_t>(parent)] =
              std::min(low[static_cast<size_t>(parent)], low[static_cast<size_t>(v)]);
        }
        if (low[static_cast<size_t>(v)] == index[static_cast<size_t>(v)]) {
          while (true) {
            Index w = stack.back();
            stack.pop_back();
            on_stack[static_cast<size_t>(w)] = false;
            comp[static_cast<size_t>(w)] = next_comp;
            if (w == v) break;
          }
          ++next_comp;
        }
      }
    }
  }

  void open(Index v) {
    index[static_cast<size_t>(v)] = low[static_cast<size_t>(v)] = next_index++;
    stack.push_back(v);
    on_stack[static_cast<size_t>(v)] = true;
  }
};

}  // namespace

std::vector<int> strongly_connected_components(const Network& net) {
  const size_t n = static_cast<size_t>(net.size());
  TarjanState st;
  st.net = &net;
  st.index.assign(n, -1);
  st.low.assign(n, 0);
  st.comp.assign(n, -1);
  st.on_stack.assign(n, false);
  for (Index v = 0; v < net.size(); ++v) {
    if (st.index[static_cast<size_t>(v)] == -1) st.run(v);
  }
  return st.comp;
}

}  // namespace netpower
