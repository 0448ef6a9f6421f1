#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "edgewise/dense.hpp"
#include "edgewise/graph.hpp"

namespace edgewise {

/// Binary structure fingerprint (e.g. MACCS keys read from a bitstring).
struct Fingerprint {
  std::string id;
  std::vector<std::uint8_t> bits;  // entries in {0, 1}

  std::size_t popcount() const;
};

/// Conjoint-triad descriptor: frequencies of 3-residue class patterns over
/// 7 amino-acid classes (7^3 = 343 triads).
struct CTVector {
  std::array<double, 343> values{};
  std::size_t window_count = 0;  // windows of fully valid residues
  bool warning = false;          // set when no valid window exists
};

/// Mapping of one-letter amino-acid codes to the 7 conjoint-triad classes.
/// The default table groups by dipole and side-chain volume:
/// {A,G,V} {I,L,F,P} {Y,M,T,S} {H,N,Q,W} {R,K} {D,E} {C}.
class CtGrouping {
 public:
  static const CtGrouping& standard();
  /// One group per line, residues written as contiguous letters ("AGV").
  static CtGrouping from_file(const std::filesystem::path& path);
  static CtGrouping from_groups(const std::vector<std::string>& groups);

  /// Class in 1..7, or 0 when the residue is outside the table.
  int class_of(char residue) const;

 private:
  CtGrouping() = default;
  std::array<int, 26> classes_{};  // 'A'..'Z' -> class or 0
};

/// Triad frequencies of `sequence` under `grouping`. A window of three
/// consecutive in-table residues increments triad 49*(c1-1)+7*(c2-1)+(c3-1);
/// windows touching an unknown residue are skipped. With `normalize` the
/// counts are divided by the number of counted windows; a sequence with no
/// valid window yields the zero vector with the warning flag set.
CTVector ct_features(std::string_view sequence,
                     const CtGrouping& grouping = CtGrouping::standard(),
                     bool normalize = true);

/// popcount(a AND b) / popcount(a OR b), in [0, 1]. Throws InvalidArgument on
/// length mismatch and NumericError when both fingerprints are all-zero.
double tanimoto(const Fingerprint& a, const Fingerprint& b);

/// Identity matrix used as node features when nothing better exists.
Dense one_hot_nodes(std::size_t n);

/// Presence vector over the 7 top-level enzyme classes; duplicate classes
/// collapse (OR aggregation). Classes must be in 1..7.
Dense enzyme_edge_features(const std::vector<int>& ec_classes);

struct TanimotoTargets {
  std::vector<Pattern> patterns;
  std::size_t labeled = 0;
  std::size_t unlabeled = 0;
  std::size_t duplicate_pairs = 0;  // dropped with a warning
};

/// One Pattern per unordered pair: labeled with the Tanimoto coefficient when
/// both ids have fingerprints, unlabeled otherwise. Duplicate unordered pairs
/// are dropped and counted.
TanimotoTargets pairwise_tanimoto_targets(
    const std::vector<Fingerprint>& fingerprints,
    const std::vector<std::pair<std::string, std::string>>& pairs);

}  // namespace edgewise
