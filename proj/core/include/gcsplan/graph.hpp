#pragma once

#include <string>
#include <vector>

#include "gcsplan/common.hpp"
#include "gcsplan/geometry.hpp"

namespace gcsplan {

struct GraphVertex {
  std::string id;
  Polytope region;
  Vec2 direction = Vec2(1, 0);  // nominal travel direction inside the region
};

/// Directed graph of convex regions with designated source and target.
struct RegionGraph {
  std::vector<GraphVertex> vertices;
  std::vector<std::pair<int, int>> edges;
  int source = -1;
  int target = -1;

  int index_of(const std::string& id) const;  // -1 when absent

  /// Checks edge endpoints, bans self-loops, requires source != target and
  /// target reachable from source; prunes vertices on no source->target
  /// route and reports one warning per pruned vertex.
  std::vector<std::string> validate_and_prune();

  /// Out-edge indices per vertex, heads sorted lexicographically by id.
  std::vector<std::vector<int>> sorted_adjacency() const;
};

/// All simple source->target paths with at most max_len vertices, in
/// lexicographic discovery order.
std::vector<std::vector<int>> enumerate_paths(const RegionGraph& g, int max_len);

/// Fractional edge flows from the convex relaxation.
struct FlowSolution {
  std::vector<double> edge_flows;  // aligned with RegionGraph::edges
  double lower_bound = 0.0;
};

/// Greedy highest-flow walk with backtracking; ties broken by edge index.
/// Returns an empty path when no flow-carrying route reaches the target.
std::vector<int> round_flows(const FlowSolution& f, const RegionGraph& g);

}  // namespace gcsplan
