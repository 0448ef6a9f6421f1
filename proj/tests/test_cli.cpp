#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "edgewise/io.hpp"

using namespace edgewise;
namespace fs = std::filesystem;

namespace {

const char* kCli = EDGEWISE_CLI_PATH;
const fs::path kFixture = fs::path(EDGEWISE_SOURCE_DIR) / "data" / "fixture";

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("edgewise_cli_" + tag + "_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(kCli) + " " + args + " 2>/dev/null >/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("knn-graph builds the documented 3-node example") {
  TempDir dir("knn");
  const auto sim = dir.path / "sim.tsv";
  write_text_atomic(sim,
                    "id\ta\tb\tc\n"
                    "a\t1\t0.9\t0.1\n"
                    "b\t0.9\t1\t0.2\n"
                    "c\t0.1\t0.2\t1\n");
  const auto out = dir.path / "graph";
  REQUIRE(run("knn-graph --similarity " + sim.string() + " --k 1 --out " +
              out.string()) == 0);
  std::size_t q = 0;
  const auto edges = read_edges_tsv(out / "edges.tsv", q);
  CHECK(q == 0);
  REQUIRE(edges.size() == 2);
  CHECK(edges[0].src == "a");
  CHECK(edges[0].dst == "b");
  CHECK(edges[1].src == "b");
  CHECK(edges[1].dst == "c");

  // rerun produces byte-identical graph files
  const auto out2 = dir.path / "graph2";
  REQUIRE(run("knn-graph --similarity " + sim.string() + " --k 1 --out " +
              out2.string()) == 0);
  CHECK(read_text_file(out / "edges.tsv") == read_text_file(out2 / "edges.tsv"));
  CHECK(read_text_file(out / "nodes.tsv") == read_text_file(out2 / "nodes.tsv"));

  // k >= n is a usage error
  CHECK(run("knn-graph --similarity " + sim.string() + " --k 3 --out " +
            (dir.path / "bad").string()) == 2);
}

TEST_CASE("knn-graph reports malformed input as a data error") {
  TempDir dir("knnbad");
  const auto sim = dir.path / "sim.tsv";
  write_text_atomic(sim, "id\ta\tb\na\t1\tx\nb\t0.5\t1\n");
  CHECK(run("knn-graph --similarity " + sim.string() + " --k 1 --out " +
            (dir.path / "g").string()) == 3);
}

TEST_CASE("full fixture pipeline: train, predict, eval, crossval, embed") {
  REQUIRE(fs::exists(kFixture));
  TempDir dir("pipeline");

  // build the graph from the fixture similarity matrix
  const auto graph_dir = dir.path / "graph";
  REQUIRE(run("knn-graph --similarity " + (kFixture / "similarity.tsv").string() +
              " --k 3 --out " + graph_dir.string()) == 0);

  // train
  const auto ckpt = dir.path / "model.ckpt.json";
  REQUIRE(run("train --config " + (kFixture / "config.json").string() + " --graph " +
              graph_dir.string() + " --patterns " +
              (kFixture / "patterns.tsv").string() + " --out " + ckpt.string()) == 0);
  CHECK(fs::exists(ckpt));
  CHECK(fs::exists(dir.path / "model.ckpt.history.csv"));
  CHECK(fs::exists(dir.path / "model.ckpt.manifest.json"));

  // history: epochs listed and best column improves over the run
  const std::string history = read_text_file(dir.path / "model.ckpt.history.csv");
  CHECK(history.find("epoch,split,total") == 0);

  // determinism: the same seed gives a byte-identical checkpoint
  const auto ckpt2 = dir.path / "again.ckpt.json";
  REQUIRE(run("train --config " + (kFixture / "config.json").string() + " --graph " +
              graph_dir.string() + " --patterns " +
              (kFixture / "patterns.tsv").string() + " --out " + ckpt2.string()) == 0);
  CHECK(read_text_file(ckpt) == read_text_file(ckpt2));

  // predict all fixture patterns plus swapped duplicates
  const auto preds = dir.path / "predictions.tsv";
  REQUIRE(run("predict --ckpt " + ckpt.string() + " --graph " + graph_dir.string() +
              " --patterns " + (kFixture / "patterns.tsv").string() + " --out " +
              preds.string()) == 0);
  const std::string pred_text = read_text_file(preds);
  CHECK(pred_text.find("i\tj\tprediction\tcosine") == 0);

  // swapped pattern endpoints give identical predictions
  const auto swapped = dir.path / "swapped.tsv";
  {
    auto patterns = read_patterns_tsv(kFixture / "patterns.tsv");
    std::vector<Pattern> both;
    for (std::size_t r = 0; r < 5 && r < patterns.size(); ++r) {
      both.push_back(patterns[r]);
      Pattern rev = patterns[r];
      std::swap(rev.i, rev.j);
      both.push_back(rev);
    }
    write_patterns_tsv(swapped, both);
  }
  const auto pred_swapped = dir.path / "pred_swapped.tsv";
  REQUIRE(run("predict --ckpt " + ckpt.string() + " --graph " + graph_dir.string() +
              " --patterns " + swapped.string() + " --out " +
              pred_swapped.string()) == 0);
  {
    std::ifstream in(pred_swapped);
    std::string header, fwd, rev;
    std::getline(in, header);
    while (std::getline(in, fwd) && std::getline(in, rev)) {
      const auto fwd_score = fwd.substr(fwd.find('\t', fwd.find('\t') + 1) + 1);
      const auto rev_score = rev.substr(rev.find('\t', rev.find('\t') + 1) + 1);
      CHECK(fwd_score == rev_score);
    }
  }

  // unknown node ids fail with the data exit code
  const auto bad_patterns = dir.path / "bad_patterns.tsv";
  write_text_atomic(bad_patterns, "i\tj\tlabel\nc00\tnot_a_node\t0.5\n");
  CHECK(run("predict --ckpt " + ckpt.string() + " --graph " + graph_dir.string() +
            " --patterns " + bad_patterns.string() + " --out " +
            (dir.path / "nope.tsv").string()) == 3);

  // eval on the training predictions
  const auto metrics = dir.path / "metrics.json";
  REQUIRE(run("eval --predictions " + preds.string() + " --patterns " +
              (kFixture / "patterns.tsv").string() + " --out " + metrics.string()) ==
          0);
  CHECK(read_text_file(metrics).find("\"mae\"") != std::string::npos);

  // embed exports embeddings plus a PCA projection
  const auto embed_dir = dir.path / "embed";
  REQUIRE(run("embed --ckpt " + ckpt.string() + " --graph " + graph_dir.string() +
              " --out " + embed_dir.string()) == 0);
  CHECK(fs::exists(embed_dir / "embeddings.tsv"));
  CHECK(fs::exists(embed_dir / "pca.tsv"));
  CHECK(fs::exists(embed_dir / "pca.json"));
  {
    std::vector<std::string> ids;
    Dense embeddings;
    read_node_features_tsv(embed_dir / "embeddings.tsv", ids, embeddings);
    CHECK(ids.size() == 20);
    CHECK(embeddings.cols() == 16);  // 2 * token_dim from the fixture config
  }
}

TEST_CASE("crossval produces per-fold metrics, aggregate, and fold assignments") {
  REQUIRE(fs::exists(kFixture));
  TempDir dir("crossval");
  const auto graph_dir = dir.path / "graph";
  REQUIRE(run("knn-graph --similarity " + (kFixture / "similarity.tsv").string() +
              " --k 3 --out " + graph_dir.string()) == 0);

  const auto out = dir.path / "cv";
  REQUIRE(run("crossval --config " + (kFixture / "crossval_config.json").string() +
              " --graph " + graph_dir.string() + " --patterns " +
              (kFixture / "patterns.tsv").string() + " --out " + out.string() +
              " --jobs 2") == 0);

  // folds * repeats metric files
  std::size_t metric_files = 0;
  for (const auto& entry : fs::directory_iterator(out)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("metrics_", 0) == 0) ++metric_files;
  }
  CHECK(metric_files == 6);  // 3 folds x 2 repeats in the fixture crossval config
  CHECK(fs::exists(out / "aggregate.json"));
  CHECK(fs::exists(out / "folds.tsv"));

  // identical seed: identical fold assignment file
  const auto out2 = dir.path / "cv2";
  REQUIRE(run("crossval --config " + (kFixture / "crossval_config.json").string() +
              " --graph " + graph_dir.string() + " --patterns " +
              (kFixture / "patterns.tsv").string() + " --out " + out2.string()) == 0);
  CHECK(read_text_file(out / "folds.tsv") == read_text_file(out2 / "folds.tsv"));

  // aggregate mean equals the hand-mean of the per-fold files
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(out)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("metrics_", 0) != 0) continue;
    const std::string body = read_text_file(entry.path());
    const auto pos = body.find("\"mae\": ");
    REQUIRE(pos != std::string::npos);
    sum += std::stod(body.substr(pos + 7));
    ++count;
  }
  const std::string agg = read_text_file(out / "aggregate.json");
  const auto mae_pos = agg.find("\"mae\"");
  REQUIRE(mae_pos != std::string::npos);
  const auto mean_pos = agg.find("\"mean\": ", mae_pos);
  const double reported = std::stod(agg.substr(mean_pos + 8));
  CHECK(reported == doctest::Approx(sum / double(count)).epsilon(1e-9));
}

TEST_CASE("featurize-ct and tanimoto-targets work on fixture inputs") {
  REQUIRE(fs::exists(kFixture));
  TempDir dir("feat");

  const auto features = dir.path / "ct.tsv";
  REQUIRE(run("featurize-ct --fasta " + (kFixture / "sequences.fasta").string() +
              " --out " + features.string()) == 0);
  std::vector<std::string> ids;
  Dense matrix;
  read_node_features_tsv(features, ids, matrix);
  CHECK(matrix.cols() == 343);
  CHECK(ids.size() >= 3);

  const auto targets = dir.path / "targets.tsv";
  REQUIRE(run("tanimoto-targets --fingerprints " +
              (kFixture / "fingerprints.tsv").string() + " --nodes " +
              (kFixture / "compounds.txt").string() + " --out " +
              targets.string()) == 0);
  const auto patterns = read_patterns_tsv(targets);
  CHECK(patterns.size() == 20 * 19 / 2);
  std::size_t unlabeled = 0;
  for (const auto& p : patterns) {
    if (!p.label) ++unlabeled;
  }
  // 3 fixture compounds have no fingerprint: 3*17 + C(3,2) unlabeled pairs
  CHECK(unlabeled == 3 * 17 + 3);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("definitely-not-a-command") == 2);
  CHECK(run("train --config missing.json") == 2);  // missing required flags
}
