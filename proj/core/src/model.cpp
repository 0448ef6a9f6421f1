#include "edgewise/model.hpp"

#include <algorithm>
#include <cmath>

#include "edgewise/errors.hpp"
#include "edgewise/rng.hpp"

namespace edgewise {

namespace {

// Parameter names; the registration order below is part of the
// reproducibility contract.
constexpr const char* kTokW1 = "tokenizer.w1";
constexpr const char* kTokB1 = "tokenizer.b1";
constexpr const char* kTokW2 = "tokenizer.w2";
constexpr const char* kTokB2 = "tokenizer.b2";
constexpr const char* kAttnWq = "attention.wq";
constexpr const char* kAttnBq = "attention.bq";
constexpr const char* kAttnWk = "attention.wk";
constexpr const char* kAttnBk = "attention.bk";
constexpr const char* kAttnWv = "attention.wv";
constexpr const char* kAttnBv = "attention.bv";
constexpr const char* kProjW = "projection.w";
constexpr const char* kProjB = "projection.b";
constexpr const char* kHeadW1 = "head.w1";
constexpr const char* kHeadB1 = "head.b1";
constexpr const char* kHeadW2 = "head.w2";
constexpr const char* kHeadB2 = "head.b2";
constexpr const char* kHeadW3 = "head.w3";
constexpr const char* kHeadB3 = "head.b3";

}  // namespace

Model::Model(ModelConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  if (cfg_.input_dim == 0) {
    throw InvalidArgument("model: input_dim must be resolved before construction");
  }
}

Parameters Model::init_params(std::uint64_t seed) const {
  Parameters params;
  const std::size_t d = cfg_.input_dim;
  const std::size_t t = cfg_.token_dim;
  const std::size_t q = cfg_.edge_dim;
  const std::size_t e = cfg_.embedding_dim();
  const std::size_t h1 = cfg_.head_hidden[0];
  const std::size_t h2 = cfg_.head_hidden[1];

  std::uint64_t stream = 0;
  auto weight = [&](std::size_t rows, std::size_t cols) {
    return glorot_init(rows, cols, derive_seed(seed, stream++));
  };
  auto bias = [&](std::size_t n) {
    ++stream;  // biases consume a stream slot so weights keep stable seeds
    return Dense::zeros(1, n);
  };

  params.add(kTokW1, weight(t, d));
  params.add(kTokB1, bias(t));
  if (cfg_.tokenizer_arch == TokenizerArch::kDeep) {
    params.add(kTokW2, weight(t, t));
    params.add(kTokB2, bias(t));
  }
  params.add(kAttnWq, weight(t, t + q));
  params.add(kAttnBq, bias(t));
  params.add(kAttnWk, weight(t, t));
  params.add(kAttnBk, bias(t));
  params.add(kAttnWv, weight(t, t));
  params.add(kAttnBv, bias(t));
  params.add(kProjW, weight(e, e));
  params.add(kProjB, bias(e));
  params.add(kHeadW1, weight(h1, 2 * e));
  params.add(kHeadB1, bias(h1));
  params.add(kHeadW2, weight(h2, h1));
  params.add(kHeadB2, bias(h2));
  params.add(kHeadW3, weight(1, h2));
  params.add(kHeadB3, bias(1));
  return params;
}

void Model::validate_params(const Parameters& params) const {
  const Parameters reference = init_params(0);
  for (const std::string& name : reference.names()) {
    if (!params.contains(name)) {
      throw InvalidArgument("model: checkpoint is missing parameter '" + name + "'");
    }
    if (!params.at(name).same_shape(reference.at(name))) {
      throw InvalidArgument("model: parameter '" + name + "' has the wrong shape");
    }
  }
  if (params.count() != reference.count()) {
    throw InvalidArgument("model: checkpoint has unexpected extra parameters");
  }
}

Var Model::tokenize(Tape& tape, const BoundParams& params, Var node_features) const {
  if (tape.value(node_features).cols() != cfg_.input_dim) {
    throw ContractError("tokenize: feature width does not match input_dim");
  }
  Var h = tape.linear(node_features, params.at(kTokW1), params.at(kTokB1));
  if (cfg_.tokenizer_arch == TokenizerArch::kDeep) {
    h = tape.relu(h);
    h = tape.linear(h, params.at(kTokW2), params.at(kTokB2));
  }
  return tape.tanh(h);
}

Var Model::embed_center(Tape& tape, const BoundParams& params,
                        const PatternSubgraph& sub, Var tokens,
                        std::size_t target_local) const {
  const std::size_t t = cfg_.token_dim;
  Var own = tape.gather_rows(tokens, {target_local});

  // Attention sources: the induced neighborhood, or every member in the
  // members variant. Order follows the canonical member order, which makes
  // the summation identical for (i, j) and (j, i) queries.
  std::vector<std::size_t> sources;
  if (cfg_.attend_over == AttendOver::kNeighbors) {
    sources = sub.local_adjacency[target_local];
  } else {
    sources.resize(sub.member_count());
    for (std::size_t m = 0; m < sub.member_count(); ++m) sources[m] = m;
  }

  Var aggregated{};
  if (sources.empty()) {
    aggregated = tape.input(Dense::zeros(1, t));
  } else {
    Var keys_in = tape.gather_rows(tokens, sources);
    Var keys = tape.sigmoid(tape.linear(keys_in, params.at(kAttnWk), params.at(kAttnBk)));
    Var vals = tape.sigmoid(tape.linear(keys_in, params.at(kAttnWv), params.at(kAttnBv)));

    // Query: the target's token, concatenated with the connecting edge's
    // features when the graph carries them. Without edge features a single
    // query row is shared by every source.
    Var queries{};
    if (cfg_.edge_dim > 0) {
      Dense edge_rows(sources.size(), cfg_.edge_dim);
      for (std::size_t s = 0; s < sources.size(); ++s) {
        const auto row = sub.induced_edge_row(target_local, sources[s]);
        if (row && sub.edge_feature_slice) {
          for (std::size_t c = 0; c < cfg_.edge_dim; ++c) {
            edge_rows(s, c) = (*sub.edge_feature_slice)(*row, c);
          }
        }
        // non-adjacent sources (members variant) keep a zero edge vector
      }
      Var q_in = tape.concat_cols(tape.repeat_rows(own, sources.size()),
                                  tape.input(std::move(edge_rows)));
      queries = tape.sigmoid(tape.linear(q_in, params.at(kAttnWq), params.at(kAttnBq)));
    } else {
      Var q_in = tape.repeat_rows(own, sources.size());
      queries = tape.sigmoid(tape.linear(q_in, params.at(kAttnWq), params.at(kAttnBq)));
    }

    Var scores = tape.sum_cols(tape.hadamard(queries, keys));     // |sources| x 1
    Var weights = tape.softmax_rows(tape.transpose(scores));      // 1 x |sources|
    aggregated = tape.matmul(weights, vals);                      // 1 x t
  }

  return tape.tanh(tape.concat_cols(aggregated, own));
}

Model::ForwardVars Model::forward(Tape& tape, const BoundParams& params,
                                  const PatternSubgraph& sub) const {
  if (sub.node_feature_slice.cols() != cfg_.input_dim) {
    throw ContractError("forward: pattern feature width does not match input_dim");
  }
  const std::size_t q = sub.edge_feature_slice ? sub.edge_feature_slice->cols() : 0;
  if (cfg_.edge_dim > 0 && q != cfg_.edge_dim && !sub.induced_edges.empty()) {
    throw ContractError("forward: pattern edge feature width does not match edge_dim");
  }

  Var tokens = tokenize(tape, params, tape.input(sub.node_feature_slice));
  Var z_i = embed_center(tape, params, sub, tokens, sub.local_center_i);
  Var z_j = embed_center(tape, params, sub, tokens, sub.local_center_j);

  Var u_i = tape.tanh(tape.linear(z_i, params.at(kProjW), params.at(kProjB)));
  Var u_j = tape.tanh(tape.linear(z_j, params.at(kProjW), params.at(kProjB)));

  // Reorder for permutation invariance: per-feature (min, max) of the two
  // projected embeddings.
  Var head_in = tape.concat_cols(tape.min_pair(u_i, u_j), tape.max_pair(u_i, u_j));
  Var h = tape.relu(tape.linear(head_in, params.at(kHeadW1), params.at(kHeadB1)));
  h = tape.relu(tape.linear(h, params.at(kHeadW2), params.at(kHeadB2)));
  Var out = tape.linear(h, params.at(kHeadW3), params.at(kHeadB3));
  Var prediction = tape.entry(out, 0, 0);
  if (cfg_.task == Task::kBinaryClassification) {
    prediction = tape.sigmoid(prediction);
  }
  return ForwardVars{prediction, z_i, z_j};
}

std::vector<double> Model::attention_weights(const Parameters& params,
                                             const PatternSubgraph& sub,
                                             std::size_t target_local) const {
  if (target_local != sub.local_center_i && target_local != sub.local_center_j) {
    throw ContractError("attention_weights: target is not a center");
  }
  const auto& sources = sub.local_adjacency[target_local];
  if (sources.empty()) return {};
  Tape tape;
  BoundParams bound(tape, params);
  Var tokens = tokenize(tape, bound, tape.input(sub.node_feature_slice));
  // Rebuild the score path exactly as embed_center does and read the softmax.
  Var own = tape.gather_rows(tokens, {target_local});
  Var keys_in = tape.gather_rows(tokens, sources);
  Var keys = tape.sigmoid(tape.linear(keys_in, bound.at(kAttnWk), bound.at(kAttnBk)));
  Var queries{};
  if (cfg_.edge_dim > 0) {
    Dense edge_rows(sources.size(), cfg_.edge_dim);
    for (std::size_t s = 0; s < sources.size(); ++s) {
      const auto row = sub.induced_edge_row(target_local, sources[s]);
      if (row && sub.edge_feature_slice) {
        for (std::size_t c = 0; c < cfg_.edge_dim; ++c) {
          edge_rows(s, c) = (*sub.edge_feature_slice)(*row, c);
        }
      }
    }
    Var q_in = tape.concat_cols(tape.repeat_rows(own, sources.size()),
                                tape.input(std::move(edge_rows)));
    queries = tape.sigmoid(tape.linear(q_in, bound.at(kAttnWq), bound.at(kAttnBq)));
  } else {
    Var q_in = tape.repeat_rows(own, sources.size());
    queries = tape.sigmoid(tape.linear(q_in, bound.at(kAttnWq), bound.at(kAttnBq)));
  }
  Var scores = tape.sum_cols(tape.hadamard(queries, keys));
  Var weights = tape.softmax_rows(tape.transpose(scores));
  const Dense& w = tape.value(weights);
  return std::vector<double>(w.values().begin(), w.values().end());
}

Model::Output Model::predict(const Parameters& params, const PatternSubgraph& sub) const {
  Tape tape;
  BoundParams bound(tape, params);
  ForwardVars vars = forward(tape, bound, sub);
  Output out;
  out.prediction = tape.value(vars.prediction)[0];
  out.z_i = tape.value(vars.z_i);
  out.z_j = tape.value(vars.z_j);
  if (!std::isfinite(out.prediction) || !out.z_i.all_finite() || !out.z_j.all_finite()) {
    throw NumericError("predict: forward pass produced non-finite values");
  }
  return out;
}

Dense Model::embed_node(const Parameters& params, const Graph& graph,
                        std::size_t node) const {
  // One-hop context as a degenerate pattern: the node itself in slot 0, its
  // neighbors after it, edges to all of them. embed_center never touches the
  // second center slot.
  if (node >= graph.node_count()) throw LookupError("embed_node: index out of range");
  std::vector<std::size_t> members;
  members.push_back(node);
  for (std::size_t nb : graph.neighbors(node)) members.push_back(nb);

  PatternSubgraph sub;
  sub.center_i = node;
  sub.center_j = node;
  sub.members = members;
  sub.local_center_i = 0;
  sub.local_center_j = 0;
  sub.local_adjacency.assign(members.size(), {});

  const std::size_t q = graph.edge_feature_dim();
  std::optional<Dense> slice;
  if (q > 0 && members.size() > 1) slice = Dense::zeros(members.size() - 1, q);
  for (std::size_t pos = 1; pos < members.size(); ++pos) {
    sub.local_adjacency[0].push_back(pos);
    sub.induced_edges.emplace_back(0, pos);
    if (slice) {
      const auto row = graph.edge_row(node, members[pos]);
      for (std::size_t c = 0; c < q; ++c) {
        (*slice)(pos - 1, c) = (*graph.edge_features())(*row, c);
      }
    }
  }
  sub.edge_feature_slice = std::move(slice);

  const Dense& features = graph.node_features();
  sub.node_feature_slice = Dense::zeros(members.size(), features.cols());
  for (std::size_t pos = 0; pos < members.size(); ++pos) {
    for (std::size_t c = 0; c < features.cols(); ++c) {
      sub.node_feature_slice(pos, c) = features(members[pos], c);
    }
  }

  Tape tape;
  BoundParams bound(tape, params);
  Var tokens = tokenize(tape, bound, tape.input(sub.node_feature_slice));
  Var z = embed_center(tape, bound, sub, tokens, 0);
  return tape.value(z);
}

}  // namespace edgewise
