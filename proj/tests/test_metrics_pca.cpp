#include <doctest.h>

#include <cmath>

#include "edgewise/errors.hpp"
#include "edgewise/metrics.hpp"
#include "edgewise/pca.hpp"
#include "edgewise/rng.hpp"
#include "oracles.hpp"

using namespace edgewise;

TEST_CASE("precision/recall/f1 examples") {
  {
    const double scores[] = {0.9};
    const int labels[] = {1};
    const auto prf = precision_recall_f1(scores, labels, 0.5);
    CHECK(prf.precision == 1.0);
    CHECK(prf.recall == 1.0);
    CHECK(prf.f1 == 1.0);
  }
  {
    // TP=2, FP=1, FN=1
    const double scores[] = {0.9, 0.8, 0.7, 0.1};
    const int labels[] = {1, 1, 0, 1};
    const auto prf = precision_recall_f1(scores, labels, 0.5);
    CHECK(prf.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(prf.recall == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(prf.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  }
  {
    // everything below threshold but positives exist
    const double scores[] = {0.1, 0.2};
    const int labels[] = {1, 0};
    const auto prf = precision_recall_f1(scores, labels, 0.5);
    CHECK(prf.precision == 0.0);
    CHECK(prf.recall == 0.0);
    CHECK(prf.f1 == 0.0);
  }
  CHECK_THROWS_AS(precision_recall_f1({}, {}, 0.5), InvalidArgument);
}

TEST_CASE("prf agrees with direct confusion counting on exhaustive 6-element inputs") {
  // every label pattern over 6 items with a fixed score ladder
  const std::vector<double> scores{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  for (unsigned mask = 0; mask < 64; ++mask) {
    std::vector<int> labels(6);
    for (unsigned b = 0; b < 6; ++b) labels[b] = (mask >> b) & 1u;
    for (double tau : {0.1, 0.4, 0.75}) {
      std::size_t tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < 6; ++i) {
        const bool pos = scores[i] >= tau;
        tp += (pos && labels[i] == 1);
        fp += (pos && labels[i] == 0);
        fn += (!pos && labels[i] == 1);
      }
      const auto prf = precision_recall_f1(scores, labels, tau);
      const double p = (tp + fp) ? double(tp) / double(tp + fp) : 0.0;
      const double r = (tp + fn) ? double(tp) / double(tp + fn) : 0.0;
      CHECK(prf.precision == p);
      CHECK(prf.recall == r);
    }
  }
}

TEST_CASE("f1_max examples") {
  {
    // perfectly separated
    const double scores[] = {0.9, 0.8, 0.2, 0.1};
    const int labels[] = {1, 1, 0, 0};
    const auto best = f1_max(scores, labels);
    CHECK(best.f1 == 1.0);
  }
  {
    // tau=0.3 keeps every prediction positive: P=2/3, R=1, F1=0.8; the other
    // candidate thresholds top out at 2/3, so the sweep settles on 0.8
    const double scores[] = {0.9, 0.8, 0.3};
    const int labels[] = {1, 0, 1};
    const auto best = f1_max(scores, labels);
    const double dense = oracle::f1_max_dense_sweep({0.9, 0.8, 0.3}, {1, 0, 1},
                                                    0.0, 1.0, 10001);
    CHECK(best.f1 == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(best.f1 == doctest::Approx(dense).epsilon(1e-12));
    CHECK(best.threshold == 0.3);  // smallest threshold attaining the max
  }
  {
    const double scores[] = {0.42};
    const int labels[] = {1};
    const auto best = f1_max(scores, labels);
    CHECK(best.f1 == 1.0);
    CHECK(best.threshold == 0.42);
  }
  const double s[] = {0.5};
  const int l[] = {0};
  CHECK_THROWS_AS(f1_max(s, l), InvalidArgument);
}

TEST_CASE("f1_max unique-value sweep equals a 10001-point dense sweep") {
  Rng rng(2024);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 5 + rng.index(196);  // up to 200
    std::vector<double> scores;
    std::vector<int> labels;
    bool has_positive = false;
    for (std::size_t i = 0; i < n; ++i) {
      // scores on a 1/100 lattice so the dense grid hits every interval
      scores.push_back(static_cast<double>(rng.index(101)) / 100.0);
      labels.push_back(rng.uniform() < 0.4 ? 1 : 0);
      has_positive |= labels.back() == 1;
    }
    if (!has_positive) labels[0] = 1;
    const auto fast = f1_max(scores, labels);
    const double dense = oracle::f1_max_dense_sweep(scores, labels, 0.0, 1.0, 10001);
    CHECK(fast.f1 == doctest::Approx(dense).epsilon(1e-12));
  }
}

TEST_CASE("mae examples and properties") {
  const double a[] = {0.5, 0.5};
  const double b[] = {0.0, 1.0};
  CHECK(mae(a, b) == 0.5);
  CHECK(mae(a, a) == 0.0);

  Rng rng(5);
  std::vector<double> preds(20), targets(20);
  for (std::size_t i = 0; i < 20; ++i) {
    preds[i] = rng.uniform(0, 1);
    targets[i] = rng.uniform(0, 1);
  }
  const double base = mae(preds, targets);
  std::vector<double> shifted = preds;
  for (double& v : shifted) v += 0.25;
  CHECK(mae(shifted, preds) == doctest::Approx(0.25).epsilon(1e-12));

  // permutation invariance over pairs
  std::vector<double> p2(preds.rbegin(), preds.rend());
  std::vector<double> t2(targets.rbegin(), targets.rend());
  CHECK(mae(p2, t2) == doctest::Approx(base).epsilon(1e-12));

  CHECK_THROWS_AS(mae({}, {}), InvalidArgument);
}

TEST_CASE("evaluate_metrics fills classification blocks only for binary labels") {
  const std::vector<double> scores{0.9, 0.2, 0.7};
  const std::vector<double> binary{1.0, 0.0, 1.0};
  const auto cls = evaluate_metrics(scores, binary, true);
  CHECK(cls.classification.has_value());
  CHECK(cls.f1max.has_value());
  CHECK(cls.mean_absolute_error.has_value());
  CHECK(cls.count == 3);

  const std::vector<double> cont{0.8, 0.1, 0.55};
  const auto reg = evaluate_metrics(scores, cont, false);
  CHECK_FALSE(reg.classification.has_value());
  CHECK(reg.mean_absolute_error.has_value());

  const std::string json = metrics_to_json(cls, "{\"k\":5}");
  CHECK(json.find("\"f1\"") != std::string::npos);
  CHECK(json.find("\"config\"") != std::string::npos);
}

TEST_CASE("pca of collinear points explains everything with one component") {
  Dense pts(5, 2);
  for (std::size_t r = 0; r < 5; ++r) {
    pts(r, 0) = static_cast<double>(r);
    pts(r, 1) = 2.0 * static_cast<double>(r) + 1.0;
  }
  const auto result = pca2(pts);
  CHECK(result.explained_variance[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(result.explained_variance[1] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("pca components are orthogonal and deterministic") {
  Rng rng(6);
  Dense pts(40, 5);
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = rng.uniform(-2, 2);
  const auto a = pca2(pts);
  const auto b = pca2(pts);
  CHECK(a.coordinates == b.coordinates);
  double dot = 0.0;
  for (std::size_t c = 0; c < 5; ++c) dot += a.components(0, c) * a.components(1, c);
  CHECK(std::abs(dot) <= 1e-8);
}

TEST_CASE("pca matches the Jacobi eigensolver oracle up to sign") {
  Rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 8 + rng.index(30);
    const std::size_t d = 2 + rng.index(5);
    Dense pts(n, d);
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = rng.uniform(-1, 1);
    const auto result = pca2(pts);

    // oracle covariance + Jacobi
    std::vector<double> mean(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < d; ++c) mean[c] += pts(r, c);
    }
    for (double& m : mean) m /= static_cast<double>(n);
    std::vector<double> cov(d * d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t a2 = 0; a2 < d; ++a2) {
        for (std::size_t b2 = 0; b2 < d; ++b2) {
          cov[a2 * d + b2] += (pts(r, a2) - mean[a2]) * (pts(r, b2) - mean[b2]);
        }
      }
    }
    for (double& x : cov) x /= static_cast<double>(n - 1);
    std::vector<std::vector<double>> vectors;
    const auto eigenvalues = oracle::jacobi_eigen_symmetric(cov, d, vectors);

    CHECK(result.eigenvalues[0] == doctest::Approx(eigenvalues[0]).epsilon(1e-6));
    CHECK(result.eigenvalues[1] == doctest::Approx(eigenvalues[1]).epsilon(1e-6));
    for (std::size_t comp = 0; comp < 2; ++comp) {
      // compare up to sign
      double dot = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        dot += result.components(comp, c) * vectors[comp][c];
      }
      const double sign = dot >= 0 ? 1.0 : -1.0;
      for (std::size_t c = 0; c < d; ++c) {
        CHECK(result.components(comp, c) ==
              doctest::Approx(sign * vectors[comp][c]).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("pca on an isotropic sample splits variance roughly evenly") {
  Rng rng(99);
  const std::size_t n = 10000;
  Dense pts(n, 2);
  for (std::size_t r = 0; r < n; ++r) {
    // sum of uniforms approximates a Gaussian well enough here
    double x = 0.0, y = 0.0;
    for (int k = 0; k < 6; ++k) {
      x += rng.uniform(-1, 1);
      y += rng.uniform(-1, 1);
    }
    pts(r, 0) = x;
    pts(r, 1) = y;
  }
  const auto result = pca2(pts);
  CHECK(result.eigenvalues[0] <= 1.2 * result.eigenvalues[1]);
}

TEST_CASE("pca input validation") {
  CHECK_THROWS_AS(pca2(Dense(2, 3)), InvalidArgument);
  Dense same(4, 2);
  for (std::size_t r = 0; r < 4; ++r) {
    same(r, 0) = 1.0;
    same(r, 1) = 2.0;
  }
  CHECK_THROWS_AS(pca2(same), NumericError);
}
