#include "forestlab/oracles.hpp"

#include <algorithm>
#include <string>

#include "forestlab/error.hpp"

namespace forestlab::oracles {

namespace {

/// Union-find without path compression so unions can be undone in LIFO order.
class RollbackUnionFind {
 public:
  explicit RollbackUnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
  }
  std::size_t find(std::size_t x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    history_.push_back(b);
    return true;
  }
  void undo() {
    const std::size_t b = history_.back();
    history_.pop_back();
    const std::size_t a = parent_[b];
    size_[a] -= size_[b];
    parent_[b] = b;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> history_;
};

class TreeSearch {
 public:
  TreeSearch(const Graph& g, std::size_t cap) : g_(g), cap_(cap), uf_(g.vertex_count()) {}

  TreeEnumeration run() {
    if (g_.vertex_count() <= 1) {
      out_.trees.emplace_back();
      return std::move(out_);
    }
    if (!is_connected(g_)) return std::move(out_);
    recurse(0);
    std::sort(out_.trees.begin(), out_.trees.end());
    return std::move(out_);
  }

 private:
  // Can the chosen edges plus edges next.. still span the graph?
  bool completable(EdgeId next) const {
    UnionFind uf(g_.vertex_count());
    std::size_t joined = 0;
    for (EdgeId e : chosen_) joined += uf.unite(g_.edge(e).u, g_.edge(e).v);
    for (EdgeId e = next; e < g_.edge_count(); ++e)
      joined += uf.unite(g_.edge(e).u, g_.edge(e).v);
    return joined + 1 == g_.vertex_count();
  }

  void recurse(EdgeId next) {
    if (chosen_.size() + 1 == g_.vertex_count()) {
      require(out_.trees.size() < cap_, ErrorCode::cap_exceeded,
              "spanning tree enumeration exceeded cap of " + std::to_string(cap_));
      out_.trees.push_back(chosen_);
      return;
    }
    if (next == g_.edge_count()) return;
    const Edge& e = g_.edge(next);
    if (uf_.unite(e.u, e.v)) {
      chosen_.push_back(next);
      recurse(next + 1);
      chosen_.pop_back();
      uf_.undo();
    }
    if (completable(next + 1)) recurse(next + 1);
  }

  const Graph& g_;
  std::size_t cap_;
  RollbackUnionFind uf_;
  std::vector<EdgeId> chosen_;
  TreeEnumeration out_;
};

}  // namespace

TreeEnumeration enumerate_spanning_trees(const Graph& g, std::size_t cap) {
  return TreeSearch(g, cap).run();
}

BigInt count_spanning_trees(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n <= 1) return 1;
  const std::size_t k = n - 1;
  std::vector<std::vector<BigInt>> m(k, std::vector<BigInt>(k, 0));
  for (const Edge& e : g.edges()) {
    if (e.u < k) m[e.u][e.u] += 1;
    if (e.v < k) m[e.v][e.v] += 1;
    if (e.u < k && e.v < k) {
      m[e.u][e.v] -= 1;
      m[e.v][e.u] -= 1;
    }
  }
  BigInt previous = 1;
  int sign = 1;
  for (std::size_t p = 0; p < k; ++p) {
    if (m[p][p] == 0) {
      std::size_t swap_row = p + 1;
      while (swap_row < k && m[swap_row][p] == 0) ++swap_row;
      if (swap_row == k) return 0;
      std::swap(m[p], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = p + 1; i < k; ++i) {
      for (std::size_t j = p + 1; j < k; ++j) {
        m[i][j] = (m[i][j] * m[p][p] - m[i][p] * m[p][j]) / previous;
      }
      m[i][p] = 0;
    }
    previous = m[p][p];
  }
  return sign * m[k - 1][k - 1];
}

std::vector<std::vector<EdgeId>> enumerate_cycles_through(const Graph& g, EdgeId e,
                                                          CycleClass cycles,
                                                          std::size_t cap) {
  require(e < g.edge_count(), ErrorCode::invalid_argument, "edge outside graph");
  std::vector<std::vector<EdgeId>> found;
  const auto z = g.wired_vertex();
  const bool avoid_z = cycles == CycleClass::free && z.has_value();
  const VertexId start = g.edge(e).u;
  const VertexId target = g.edge(e).v;
  if (avoid_z && g.is_wired_edge(e)) return found;

  std::vector<std::uint8_t> on_path(g.vertex_count(), 0);
  std::vector<EdgeId> path;
  // Depth-first search over simple paths start -> target avoiding e.
  auto dfs = [&](auto&& self, VertexId u) -> void {
    if (u == target) {
      require(found.size() < cap, ErrorCode::cap_exceeded,
              "cycle enumeration exceeded cap of " + std::to_string(cap));
      std::vector<EdgeId> cycle = path;
      cycle.push_back(e);
      std::sort(cycle.begin(), cycle.end());
      found.push_back(std::move(cycle));
      return;
    }
    on_path[u] = 1;
    for (const Incidence& inc : g.incident(u)) {
      if (inc.edge == e || on_path[inc.neighbor]) continue;
      if (avoid_z && inc.neighbor == *z) continue;
      path.push_back(inc.edge);
      self(self, inc.neighbor);
      path.pop_back();
    }
    on_path[u] = 0;
  };
  dfs(dfs, start);
  std::sort(found.begin(), found.end());
  return found;
}

ForestConfig msf_by_definition(const Graph& g, const EdgeLabels& labels,
                               CycleClass cycles, std::size_t cap) {
  require(labels.size() == g.edge_count(), ErrorCode::invalid_argument,
          "label count does not match edge count");
  ForestConfig forest(g.edge_count(), Provenance::free);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    bool deleted = false;
    for (const auto& cycle : enumerate_cycles_through(g, e, cycles, cap)) {
      const bool is_max = std::all_of(cycle.begin(), cycle.end(),
                                      [&](EdgeId f) { return labels[f] <= labels[e]; });
      if (is_max) {
        deleted = true;
        break;
      }
    }
    if (!deleted) forest.insert(e);
  }
  return forest;
}

ForestConfig aldous_broder_ust(const Graph& g, Rng& rng, VertexId root) {
  require(root < g.vertex_count(), ErrorCode::invalid_argument, "root outside graph");
  require(is_connected(g), ErrorCode::disconnected,
          "uniform spanning tree needs a connected graph");
  std::vector<std::uint8_t> visited(g.vertex_count(), 0);
  ForestConfig tree(g.edge_count(), Provenance::free);
  visited[root] = 1;
  std::size_t remaining = g.vertex_count() - 1;
  VertexId u = root;
  while (remaining > 0) {
    const auto inc = g.incident(u);
    const Incidence& step = inc[rng.index(inc.size())];
    if (!visited[step.neighbor]) {
      visited[step.neighbor] = 1;
      tree.insert(step.edge);
      --remaining;
    }
    u = step.neighbor;
  }
  return tree;
}

}  // namespace forestlab::oracles
