#include "edgewise/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "edgewise/errors.hpp"

namespace edgewise {

namespace {

std::uint64_t edge_key(std::size_t u, std::size_t v) {
  const std::uint64_t lo = std::min(u, v);
  const std::uint64_t hi = std::max(u, v);
  return (lo << 32) | hi;
}

}  // namespace

Graph::Graph(std::vector<std::string> node_ids, std::vector<Edge> edges,
             Dense node_features, std::optional<Dense> edge_features)
    : node_ids_(std::move(node_ids)),
      node_features_(std::move(node_features)),
      edge_features_(std::move(edge_features)) {
  const std::size_t n = node_ids_.size();
  if (n == 0) throw InvalidArgument("graph: no nodes");
  if (node_features_.rows() != n) {
    throw InvalidArgument("graph: node feature rows do not match node count");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!id_index_.emplace(node_ids_[i], i).second) {
      throw DataError("graph: duplicate node id '" + node_ids_[i] + "'");
    }
  }

  // Canonicalize, validate and sort the edge set; remember where each input
  // edge came from so feature rows can be reordered alongside.
  std::vector<std::size_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  for (Edge& e : edges) {
    if (e.first >= n || e.second >= n) throw InvalidArgument("graph: edge endpoint out of range");
    if (e.first == e.second) throw InvalidArgument("graph: self-loop");
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return edges[a] < edges[b];
  });
  edges_.reserve(edges.size());
  std::optional<Dense> reordered_features;
  if (edge_features_) {
    if (edge_features_->rows() != edges.size()) {
      throw InvalidArgument("graph: edge feature rows do not match edge count");
    }
    if (!edges.empty()) {
      reordered_features = Dense::zeros(edges.size(), edge_features_->cols());
    }
  }
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const Edge& e = edges[order[pos]];
    if (!edges_.empty() && edges_.back() == e) {
      throw InvalidArgument("graph: duplicate edge");
    }
    edges_.push_back(e);
    if (reordered_features) {
      for (std::size_t c = 0; c < edge_features_->cols(); ++c) {
        (*reordered_features)(pos, c) = (*edge_features_)(order[pos], c);
      }
    }
  }
  if (reordered_features) edge_features_ = std::move(reordered_features);

  adjacency_.assign(n, {});
  for (std::size_t row = 0; row < edges_.size(); ++row) {
    const auto [u, v] = edges_[row];
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
    edge_index_.emplace(edge_key(u, v), row);
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

std::optional<std::size_t> Graph::find(std::string_view id) const {
  auto it = id_index_.find(std::string(id));
  if (it == id_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Graph::require(std::string_view id) const {
  auto idx = find(id);
  if (!idx) throw LookupError("graph: unknown node id '" + std::string(id) + "'");
  return *idx;
}

bool Graph::has_edge(std::size_t u, std::size_t v) const {
  return edge_index_.contains(edge_key(u, v));
}

std::optional<std::size_t> Graph::edge_row(std::size_t u, std::size_t v) const {
  auto it = edge_index_.find(edge_key(u, v));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Graph::min_degree() const {
  std::size_t deg = adjacency_.empty() ? 0 : adjacency_[0].size();
  for (const auto& nbrs : adjacency_) deg = std::min(deg, nbrs.size());
  return deg;
}

std::size_t Graph::max_degree() const {
  std::size_t deg = 0;
  for (const auto& nbrs : adjacency_) deg = std::max(deg, nbrs.size());
  return deg;
}

Graph build_knn_graph(const Dense& similarity, std::vector<std::string> node_ids,
                      std::size_t k, KnnSymmetrize symmetrize) {
  const std::size_t n = similarity.rows();
  if (similarity.cols() != n) {
    throw InvalidArgument("knn graph: similarity matrix must be square");
  }
  if (node_ids.size() != n) {
    throw InvalidArgument("knn graph: id count does not match matrix size");
  }
  if (k < 1 || k >= n) {
    throw InvalidArgument("knn graph: need 1 <= k < node count");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(similarity(i, j) - similarity(j, i)) > 1e-9) {
        throw InvalidArgument("knn graph: similarity matrix is not symmetric");
      }
    }
  }

  // Per-row top-k, self excluded, ties broken by lower index.
  std::vector<std::set<Edge>> picks(n);
  std::set<Edge> union_edges;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> candidates;
    candidates.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) candidates.push_back(j);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) {
                       if (similarity(i, a) != similarity(i, b)) {
                         return similarity(i, a) > similarity(i, b);
                       }
                       return a < b;
                     });
    for (std::size_t r = 0; r < k; ++r) {
      const std::size_t j = candidates[r];
      Edge e{std::min(i, j), std::max(i, j)};
      picks[i].insert(e);
      union_edges.insert(e);
    }
  }

  std::vector<Edge> edges;
  for (const Edge& e : union_edges) {
    if (symmetrize == KnnSymmetrize::kMutual &&
        !(picks[e.first].contains(e) && picks[e.second].contains(e))) {
      continue;
    }
    edges.push_back(e);
  }

  return Graph(std::move(node_ids), std::move(edges), Dense::identity(n));
}

std::size_t PatternSubgraph::local_index(std::size_t global) const {
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] == global) return i;
  }
  throw LookupError("pattern subgraph: node is not a member");
}

std::optional<std::size_t> PatternSubgraph::induced_edge_row(std::size_t u,
                                                             std::size_t v) const {
  const Edge probe{std::min(u, v), std::max(u, v)};
  for (std::size_t r = 0; r < induced_edges.size(); ++r) {
    if (induced_edges[r] == probe) return r;
  }
  return std::nullopt;
}

PatternSubgraph induce_pattern_subgraph(const Graph& graph, std::size_t i,
                                        std::size_t j, bool exclude_center_edge) {
  const std::size_t n = graph.node_count();
  if (i >= n || j >= n) throw LookupError("induce: node index out of range");
  if (i == j) throw InvalidArgument("induce: centers must differ");

  PatternSubgraph sub;
  sub.center_i = i;
  sub.center_j = j;

  const std::size_t lo = std::min(i, j);
  const std::size_t hi = std::max(i, j);
  std::set<std::size_t> rest;
  for (std::size_t nb : graph.neighbors(i)) rest.insert(nb);
  for (std::size_t nb : graph.neighbors(j)) rest.insert(nb);
  rest.erase(i);
  rest.erase(j);

  sub.members.push_back(lo);
  sub.members.push_back(hi);
  sub.members.insert(sub.members.end(), rest.begin(), rest.end());
  sub.local_center_i = (i == lo) ? 0 : 1;
  sub.local_center_j = (j == lo) ? 0 : 1;

  // Induced edges: every graph edge with both endpoints among the members,
  // in the graph's canonical (min, max) global order.
  std::vector<std::size_t> member_of(n, SIZE_MAX);
  for (std::size_t pos = 0; pos < sub.members.size(); ++pos) {
    member_of[sub.members[pos]] = pos;
  }
  std::vector<std::size_t> feature_rows;
  for (std::size_t row = 0; row < graph.edges().size(); ++row) {
    const auto [u, v] = graph.edges()[row];
    if (member_of[u] == SIZE_MAX || member_of[v] == SIZE_MAX) continue;
    if (exclude_center_edge && u == lo && v == hi) continue;
    sub.induced_edges.emplace_back(std::min(member_of[u], member_of[v]),
                                   std::max(member_of[u], member_of[v]));
    feature_rows.push_back(row);
  }

  const Dense& features = graph.node_features();
  sub.node_feature_slice = Dense::zeros(sub.members.size(), features.cols());
  for (std::size_t pos = 0; pos < sub.members.size(); ++pos) {
    for (std::size_t c = 0; c < features.cols(); ++c) {
      sub.node_feature_slice(pos, c) = features(sub.members[pos], c);
    }
  }

  if (graph.edge_features() && !feature_rows.empty()) {
    const Dense& ef = *graph.edge_features();
    Dense slice(feature_rows.size(), ef.cols());
    for (std::size_t r = 0; r < feature_rows.size(); ++r) {
      for (std::size_t c = 0; c < ef.cols(); ++c) {
        slice(r, c) = ef(feature_rows[r], c);
      }
    }
    sub.edge_feature_slice = std::move(slice);
  }

  sub.local_adjacency.assign(sub.members.size(), {});
  for (const Edge& e : sub.induced_edges) {
    sub.local_adjacency[e.first].push_back(e.second);
    sub.local_adjacency[e.second].push_back(e.first);
  }
  for (auto& nbrs : sub.local_adjacency) std::sort(nbrs.begin(), nbrs.end());

  return sub;
}

std::vector<std::size_t> neighbors_in_subgraph(const PatternSubgraph& sub,
                                               std::size_t target) {
  if (target != sub.center_i && target != sub.center_j) {
    throw ContractError("neighbors_in_subgraph: target is not a center");
  }
  const std::size_t local = sub.local_index(target);
  std::vector<std::size_t> out;
  out.reserve(sub.local_adjacency[local].size());
  for (std::size_t nb : sub.local_adjacency[local]) {
    out.push_back(sub.members[nb]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace edgewise
