#include <doctest.h>

#include <cmath>

#include "edgewise/errors.hpp"
#include "edgewise/featurize.hpp"
#include "edgewise/rng.hpp"
#include "oracles.hpp"

using namespace edgewise;

TEST_CASE("ct features of a homogeneous sequence") {
  const auto ct = ct_features("AAAA");
  // A is class 1; triad (1,1,1) has index 0; two windows, normalized to 1
  CHECK(ct.window_count == 2);
  CHECK(ct.values[0] == 1.0);
  double rest = 0.0;
  for (std::size_t i = 1; i < ct.values.size(); ++i) rest += ct.values[i];
  CHECK(rest == 0.0);
  CHECK_FALSE(ct.warning);

  const auto raw = ct_features("AAAA", CtGrouping::standard(), false);
  CHECK(raw.values[0] == 2.0);
}

TEST_CASE("ct features of a too-short sequence warn with a zero vector") {
  const auto ct = ct_features("AA");
  CHECK(ct.warning);
  CHECK(ct.window_count == 0);
  for (double v : ct.values) CHECK(v == 0.0);
}

TEST_CASE("ct windows containing unknown residues are skipped") {
  // X interrupts: AAXAA has windows AAX, AXA, XAA all skipped
  const auto ct = ct_features("AAXAA");
  CHECK(ct.warning);
  const auto ct2 = ct_features("AAAXAAA");
  CHECK(ct2.window_count == 2);
}

TEST_CASE("ct raw counts sum to the brute-force window count") {
  const char residues[] = "ACDEFGHIKLMNPQRSTVWYXBZ";  // standard + ambiguity
  Rng rng(55);
  for (int trial = 0; trial < 60; ++trial) {
    std::string seq;
    const std::size_t len = 3 + rng.index(198);
    for (std::size_t i = 0; i < len; ++i) {
      seq += residues[rng.index(sizeof(residues) - 1)];
    }
    const auto ct = ct_features(seq, CtGrouping::standard(), false);
    double sum = 0.0;
    for (double v : ct.values) sum += v;
    const auto expected = oracle::ct_window_count_brute_force(seq);
    CHECK(sum == static_cast<double>(expected));
    CHECK(ct.window_count == expected);
  }
}

TEST_CASE("ct grouping can be overridden and validates") {
  const auto custom = CtGrouping::from_groups({"A", "C", "D", "E", "F", "G", "H"});
  CHECK(custom.class_of('A') == 1);
  CHECK(custom.class_of('H') == 7);
  CHECK(custom.class_of('K') == 0);
  CHECK_THROWS_AS(CtGrouping::from_groups({"A"}), InvalidArgument);
  CHECK_THROWS_AS(
      CtGrouping::from_groups({"AA", "C", "D", "E", "F", "G", "H"}),
      InvalidArgument);
}

TEST_CASE("tanimoto examples") {
  const Fingerprint a{"a", {1, 0, 1, 0}};
  const Fingerprint b{"b", {0, 1, 1, 0}};
  CHECK(tanimoto(a, a) == 1.0);
  CHECK(tanimoto(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const Fingerprint c{"c", {0, 1, 0, 0}};
  const Fingerprint d{"d", {1, 0, 0, 1}};
  CHECK(tanimoto(c, d) == 0.0);

  const Fingerprint z{"z", {0, 0, 0, 0}};
  CHECK_THROWS_AS(tanimoto(z, z), NumericError);
  const Fingerprint e{"e", {1, 0}};
  CHECK_THROWS_AS(tanimoto(a, e), InvalidArgument);
}

TEST_CASE("tanimoto over all 8-bit pairs: symmetric, bounded, 1 iff equal") {
  for (unsigned x = 0; x < 256; ++x) {
    for (unsigned y = 0; y < 256; ++y) {
      if (x == 0 && y == 0) continue;
      Fingerprint a{"a", {}}, b{"b", {}};
      for (unsigned bit = 0; bit < 8; ++bit) {
        a.bits.push_back((x >> bit) & 1u);
        b.bits.push_back((y >> bit) & 1u);
      }
      const double t = tanimoto(a, b);
      CHECK(t >= 0.0);
      CHECK(t <= 1.0);
      CHECK(t == tanimoto(b, a));
      if (x == y) {
        CHECK(t == 1.0);
      } else {
        CHECK(t < 1.0);
      }
    }
  }
}

TEST_CASE("one-hot node features") {
  CHECK(one_hot_nodes(1)(0, 0) == 1.0);
  const Dense m = one_hot_nodes(3);
  CHECK(m(1, 0) == 0.0);
  CHECK(m(1, 1) == 1.0);
  CHECK(m(1, 2) == 0.0);
  for (std::size_t r = 0; r < 3; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < 3; ++c) sum += m(r, c);
    CHECK(sum == 1.0);
  }
  CHECK_THROWS_AS(one_hot_nodes(0), InvalidArgument);
}

TEST_CASE("enzyme family edge features") {
  const Dense single = enzyme_edge_features({2});
  CHECK(single == Dense(1, 7, {0, 1, 0, 0, 0, 0, 0}));
  const Dense both = enzyme_edge_features({1, 7});
  CHECK(both == Dense(1, 7, {1, 0, 0, 0, 0, 0, 1}));
  CHECK(enzyme_edge_features({2, 2}) == single);
  CHECK(enzyme_edge_features({7, 1}) == both);  // order-invariant
  CHECK_THROWS_AS(enzyme_edge_features({0}), InvalidArgument);
  CHECK_THROWS_AS(enzyme_edge_features({8}), InvalidArgument);
  CHECK_THROWS_AS(enzyme_edge_features({}), InvalidArgument);
}

TEST_CASE("pairwise tanimoto targets over known and unknown compounds") {
  // 174 known compounds with fingerprints, 33 unknown; all unordered pairs
  Rng rng(2022);
  std::vector<Fingerprint> fps;
  for (int c = 0; c < 174; ++c) {
    Fingerprint fp;
    fp.id = "C" + std::to_string(c);
    for (int b = 0; b < 16; ++b) {
      fp.bits.push_back(rng.uniform() < 0.5 ? 1 : 0);
    }
    if (fp.popcount() == 0) fp.bits[0] = 1;
    fps.push_back(std::move(fp));
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  const int total = 174 + 33;
  for (int a = 0; a < total; ++a) {
    for (int b = a + 1; b < total; ++b) {
      pairs.emplace_back("C" + std::to_string(a), "C" + std::to_string(b));
    }
  }
  const auto targets = pairwise_tanimoto_targets(fps, pairs);
  CHECK(targets.labeled == 174 * 173 / 2);  // 15,051 intra-known patterns
  CHECK(targets.unlabeled == pairs.size() - 174 * 173 / 2);
  CHECK(targets.patterns.size() == pairs.size());
  for (const Pattern& p : targets.patterns) {
    if (p.label) {
      CHECK(*p.label >= 0.0);
      CHECK(*p.label <= 1.0);
    }
  }
}

TEST_CASE("identical fingerprints give a pattern labeled 1") {
  std::vector<Fingerprint> fps{{"a", {1, 0, 1}}, {"b", {1, 0, 1}}};
  const auto targets = pairwise_tanimoto_targets(fps, {{"a", "b"}});
  REQUIRE(targets.patterns.size() == 1);
  CHECK(targets.patterns[0].label == 1.0);
}

TEST_CASE("pairs with unknown compounds become unlabeled patterns") {
  std::vector<Fingerprint> fps{{"a", {1, 0}}};
  const auto targets = pairwise_tanimoto_targets(fps, {{"a", "mystery"}});
  REQUIRE(targets.patterns.size() == 1);
  CHECK_FALSE(targets.patterns[0].label.has_value());
  CHECK(targets.unlabeled == 1);
}

TEST_CASE("duplicate pairs are dropped with a count") {
  std::vector<Fingerprint> fps{{"a", {1}}, {"b", {1}}};
  const auto targets =
      pairwise_tanimoto_targets(fps, {{"a", "b"}, {"b", "a"}, {"a", "b"}});
  CHECK(targets.patterns.size() == 1);
  CHECK(targets.duplicate_pairs == 2);
}
