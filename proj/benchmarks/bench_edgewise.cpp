#include <benchmark/benchmark.h>

#include <set>

#include "edgewise/featurize.hpp"
#include "edgewise/graph.hpp"
#include "edgewise/loss.hpp"
#include "edgewise/metrics.hpp"
#include "edgewise/model.hpp"
#include "edgewise/pca.hpp"
#include "edgewise/rng.hpp"
#include "edgewise/train.hpp"

using namespace edgewise;

namespace {

std::vector<std::string> make_ids(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("n" + std::to_string(i));
  return ids;
}

Dense random_symmetric(std::size_t n, Rng& rng) {
  Dense s(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    s(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = rng.uniform();
      s(i, j) = s(j, i) = v;
    }
  }
  return s;
}

struct ForwardFixture {
  Graph graph;
  Model model;
  Parameters params;
  PatternSubgraph sub;
};

ForwardFixture make_forward_fixture(std::size_t n, std::size_t k) {
  Rng rng(7);
  Dense sim = random_symmetric(n, rng);
  Graph graph = build_knn_graph(sim, make_ids(n), k);
  ModelConfig cfg;
  cfg.input_dim = n;
  cfg.token_dim = 16;
  cfg.tokenizer_arch = TokenizerArch::kShallow;
  Model model(cfg);
  Parameters params = model.init_params(1);
  PatternSubgraph sub = induce_pattern_subgraph(graph, 0, 1);
  return ForwardFixture{std::move(graph), std::move(model), std::move(params),
                        std::move(sub)};
}

}  // namespace

static void BM_ModelForward(benchmark::State& state) {
  auto fixture = make_forward_fixture(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fixture.model.predict(fixture.params, fixture.sub));
  }
}
BENCHMARK(BM_ModelForward)->Arg(30)->Arg(60)->Arg(120);

static void BM_ForwardBackward(benchmark::State& state) {
  auto fixture = make_forward_fixture(static_cast<std::size_t>(state.range(0)), 4);
  TrainConfig cfg;
  const ResolvedPattern pattern{0, 1, 0.5};
  for (auto _ : state) {
    GradientMap grads;
    benchmark::DoNotOptimize(pattern_loss_and_gradients(
        fixture.model, fixture.params, fixture.graph, pattern, cfg, &grads));
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(30)->Arg(60)->Arg(120);

static void BM_KnnGraph(benchmark::State& state) {
  Rng rng(3);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const Dense sim = random_symmetric(n, rng);
  const auto ids = make_ids(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_knn_graph(sim, ids, 10));
  }
}
BENCHMARK(BM_KnnGraph)->Arg(100)->Arg(300);

static void BM_Tanimoto(benchmark::State& state) {
  Rng rng(5);
  Fingerprint a{"a", {}}, b{"b", {}};
  for (int i = 0; i < 2048; ++i) {
    a.bits.push_back(rng.uniform() < 0.3 ? 1 : 0);
    b.bits.push_back(rng.uniform() < 0.3 ? 1 : 0);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(tanimoto(a, b));
  }
}
BENCHMARK(BM_Tanimoto);

static void BM_CtFeatures(benchmark::State& state) {
  Rng rng(9);
  const char residues[] = "ACDEFGHIKLMNPQRSTVWY";
  std::string seq;
  for (int i = 0; i < 1000; ++i) seq += residues[rng.index(20)];
  for (auto _ : state) {
    benchmark::DoNotOptimize(ct_features(seq));
  }
}
BENCHMARK(BM_CtFeatures);

static void BM_F1Max(benchmark::State& state) {
  Rng rng(11);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> scores(n);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = rng.uniform();
    labels[i] = rng.uniform() < 0.4 ? 1 : 0;
  }
  labels[0] = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f1_max(scores, labels));
  }
}
BENCHMARK(BM_F1Max)->Arg(1000)->Arg(10000);

static void BM_Pca2(benchmark::State& state) {
  Rng rng(13);
  Dense pts(static_cast<std::size_t>(state.range(0)), 32);
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = rng.uniform(-1, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pca2(pts));
  }
}
BENCHMARK(BM_Pca2)->Arg(200)->Arg(2000);

BENCHMARK_MAIN();
