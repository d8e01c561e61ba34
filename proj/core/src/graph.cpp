#include "gcsplan/graph.hpp"

#include <algorithm>
#include <functional>

namespace gcsplan {

int RegionGraph::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].id == id) return static_cast<int>(i);
  return -1;
}

std::vector<std::string> RegionGraph::validate_and_prune() {
  const int n = static_cast<int>(vertices.size());
  if (source < 0 || source >= n || target < 0 || target >= n)
    throw ScenarioError("graph source/target missing");
  if (source == target) throw ScenarioError("graph source equals target");
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw ScenarioError("graph edge references unknown vertex");
    if (u == v) throw ScenarioError("graph contains a self-loop");
  }

  auto reach = [n](const std::vector<std::pair<int, int>>& es, int from,
                   bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{from};
    seen[from] = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const auto& [a, b] : es) {
        const int tail = forward ? a : b;
        const int head = forward ? b : a;
        if (tail == u && !seen[head]) {
          seen[head] = 1;
          stack.push_back(head);
        }
      }
    }
    return seen;
  };
  const std::vector<char> fwd = reach(edges, source, true);
  const std::vector<char> bwd = reach(edges, target, false);
  if (!fwd[target]) throw ScenarioError("target not reachable from source");

  std::vector<std::string> warnings;
  std::vector<int> remap(n, -1);
  std::vector<GraphVertex> kept;
  for (int i = 0; i < n; ++i) {
    if (fwd[i] && bwd[i]) {
      remap[i] = static_cast<int>(kept.size());
      kept.push_back(vertices[i]);
    } else {
      warnings.push_back("pruned region '" + vertices[i].id +
                         "': not on any source->target path");
    }
  }
  std::vector<std::pair<int, int>> kept_edges;
  for (const auto& [u, v] : edges)
    if (remap[u] >= 0 && remap[v] >= 0) kept_edges.emplace_back(remap[u], remap[v]);
  vertices = std::move(kept);
  edges = std::move(kept_edges);
  source = remap[source];
  target = remap[target];
  return warnings;
}

std::vector<std::vector<int>> RegionGraph::sorted_adjacency() const {
  std::vector<std::vector<int>> adj(vertices.size());
  for (std::size_t e = 0; e < edges.size(); ++e)
    adj[edges[e].first].push_back(static_cast<int>(e));
  for (auto& out : adj)
    std::sort(out.begin(), out.end(), [this](int a, int b) {
      const std::string& ida = vertices[edges[a].second].id;
      const std::string& idb = vertices[edges[b].second].id;
      return ida != idb ? ida < idb : a < b;
    });
  return adj;
}

std::vector<std::vector<int>> enumerate_paths(const RegionGraph& g, int max_len) {
  if (max_len < 2) throw ScenarioError("path enumeration needs max_len >= 2");
  std::vector<std::vector<int>> paths;
  if (g.source < 0 || g.target < 0) return paths;
  const auto adj = g.sorted_adjacency();
  std::vector<char> visited(g.vertices.size(), 0);
  std::vector<int> current{g.source};
  visited[g.source] = 1;

  std::function<void()> dfs = [&]() {
    const int u = current.back();
    if (u == g.target) {
      paths.push_back(current);
      return;
    }
    if (static_cast<int>(current.size()) >= max_len) return;
    for (int e : adj[u]) {
      const int v = g.edges[e].second;
      if (visited[v]) continue;
      visited[v] = 1;
      current.push_back(v);
      dfs();
      current.pop_back();
      visited[v] = 0;
    }
  };
  dfs();
  return paths;
}

std::vector<int> round_flows(const FlowSolution& f, const RegionGraph& g) {
  if (f.edge_flows.size() != g.edges.size())
    throw ScenarioError("flow solution does not match the graph");
  std::vector<std::vector<int>> adj(g.vertices.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    adj[g.edges[e].first].push_back(static_cast<int>(e));
  // Highest flow first, edge index breaking ties.
  for (auto& out : adj)
    std::sort(out.begin(), out.end(), [&f](int a, int b) {
      return f.edge_flows[a] != f.edge_flows[b] ? f.edge_flows[a] > f.edge_flows[b]
                                                : a < b;
    });

  std::vector<char> visited(g.vertices.size(), 0);
  std::vector<int> path;
  std::function<bool(int)> walk = [&](int u) -> bool {
    visited[u] = 1;
    path.push_back(u);
    if (u == g.target) return true;
    for (int e : adj[u]) {
      if (f.edge_flows[e] <= 1e-9) continue;
      const int v = g.edges[e].second;
      if (visited[v]) continue;
      if (walk(v)) return true;
    }
    path.pop_back();
    visited[u] = 0;
    return false;
  };
  if (!walk(g.source)) return {};
  return path;
}

}  // namespace gcsplan
