#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "edgewise/dense.hpp"

namespace edgewise {

/// Undirected edge as a pair of node indices, stored (min, max).
using Edge = std::pair<std::size_t, std::size_t>;

/// A training/inference record: two node identifiers and an optional target.
/// An absent label marks the pattern for the self-supervised loss term only.
struct Pattern {
  std::string i;
  std::string j;
  std::optional<double> label;
};

/// Immutable undirected graph with per-node features and optional per-edge
/// features. Edges are kept in canonical order (lexicographic by (min, max)
/// endpoint index); edge feature rows align with that order. No self-loops,
/// no duplicate edges.
class Graph {
 public:
  Graph(std::vector<std::string> node_ids, std::vector<Edge> edges,
        Dense node_features, std::optional<Dense> edge_features = std::nullopt);

  std::size_t node_count() const { return node_ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::string>& node_ids() const { return node_ids_; }

  std::optional<std::size_t> find(std::string_view id) const;
  /// Index of `id`; throws LookupError when unknown.
  std::size_t require(std::string_view id) const;

  /// Neighbor indices of `node`, ascending.
  const std::vector<std::size_t>& neighbors(std::size_t node) const {
    return adjacency_[node];
  }
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(std::size_t u, std::size_t v) const;
  /// Row of the edge feature matrix for edge {u, v}, if the edge exists.
  std::optional<std::size_t> edge_row(std::size_t u, std::size_t v) const;

  const Dense& node_features() const { return node_features_; }
  const std::optional<Dense>& edge_features() const { return edge_features_; }
  std::size_t feature_dim() const { return node_features_.cols(); }
  std::size_t edge_feature_dim() const {
    return edge_features_ ? edge_features_->cols() : 0;
  }

  std::size_t min_degree() const;
  std::size_t max_degree() const;

 private:
  std::vector<std::string> node_ids_;
  std::unordered_map<std::string, std::size_t> id_index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::unordered_map<std::uint64_t, std::size_t> edge_index_;
  Dense node_features_;
  std::optional<Dense> edge_features_;
};

enum class KnnSymmetrize {
  kUnion,   // keep an edge when either endpoint picked the other
  kMutual,  // keep an edge only when both picked each other
};

/// Graph from a symmetric similarity matrix: each node is connected to its k
/// most similar distinct neighbors (self excluded, ties broken by lower
/// index), and the directed picks are symmetrized. With kUnion every node
/// ends with degree >= k. Node features are one-hot placeholders; callers
/// with real features attach them when assembling their final Graph.
Graph build_knn_graph(const Dense& similarity, std::vector<std::string> node_ids,
                      std::size_t k, KnnSymmetrize symmetrize = KnnSymmetrize::kUnion);

/// The subgraph induced by two center nodes: the centers, their one-hop
/// neighborhoods, and every graph edge among those members. Member order is
/// canonical (both centers first in ascending index order, then the rest
/// ascending), so inducing (i, j) and (j, i) yields identical members, edges
/// and feature slices.
struct PatternSubgraph {
  std::size_t center_i = 0;  // as queried
  std::size_t center_j = 0;
  std::vector<std::size_t> members;  // global node indices, canonical order
  std::vector<Edge> induced_edges;   // local member index pairs
  Dense node_feature_slice;          // members x d, in member order
  std::optional<Dense> edge_feature_slice;  // induced edges x q

  std::size_t local_center_i = 0;
  std::size_t local_center_j = 0;
  // local adjacency, each list sorted ascending by local index
  std::vector<std::vector<std::size_t>> local_adjacency;

  std::size_t member_count() const { return members.size(); }
  /// Local position of a global node index; throws LookupError when absent.
  std::size_t local_index(std::size_t global) const;
  /// Edge feature row for local pair {u, v}, if present.
  std::optional<std::size_t> induced_edge_row(std::size_t u, std::size_t v) const;
};

/// Induce the pattern subgraph for centers (i, j). `exclude_center_edge`
/// drops a direct i-j edge from the induced set (off by default; see the
/// task notes in the README).
PatternSubgraph induce_pattern_subgraph(const Graph& graph, std::size_t i,
                                        std::size_t j,
                                        bool exclude_center_edge = false);

/// Members adjacent to `target` (a center, global index) in the induced
/// subgraph, ascending by global node index. Throws ContractError when
/// `target` is not one of the centers.
std::vector<std::size_t> neighbors_in_subgraph(const PatternSubgraph& sub,
                                               std::size_t target);

}  // namespace edgewise
