#include "edgewise/featurize.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "edgewise/errors.hpp"
#include "edgewise/log.hpp"

namespace edgewise {

std::size_t Fingerprint::popcount() const {
  std::size_t n = 0;
  for (std::uint8_t b : bits) n += b;
  return n;
}

const CtGrouping& CtGrouping::standard() {
  static const CtGrouping table = CtGrouping::from_groups(
      {"AGV", "ILFP", "YMTS", "HNQW", "RK", "DE", "C"});
  return table;
}

CtGrouping CtGrouping::from_groups(const std::vector<std::string>& groups) {
  if (groups.size() != 7) {
    throw InvalidArgument("ct grouping: expected exactly 7 groups");
  }
  CtGrouping g;
  for (std::size_t cls = 0; cls < groups.size(); ++cls) {
    for (char residue : groups[cls]) {
      if (residue < 'A' || residue > 'Z') {
        throw InvalidArgument("ct grouping: residues must be uppercase letters");
      }
      int& slot = g.classes_[static_cast<std::size_t>(residue - 'A')];
      if (slot != 0) {
        throw InvalidArgument(std::string("ct grouping: residue '") + residue +
                              "' assigned twice");
      }
      slot = static_cast<int>(cls) + 1;
    }
  }
  return g;
}

CtGrouping CtGrouping::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("ct grouping: cannot open '" + path.string() + "'");
  std::vector<std::string> groups;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    groups.push_back(line);
  }
  return from_groups(groups);
}

int CtGrouping::class_of(char residue) const {
  if (residue >= 'a' && residue <= 'z') residue = static_cast<char>(residue - 32);
  if (residue < 'A' || residue > 'Z') return 0;
  return classes_[static_cast<std::size_t>(residue - 'A')];
}

CTVector ct_features(std::string_view sequence, const CtGrouping& grouping,
                     bool normalize) {
  CTVector out;
  std::vector<int> classes(sequence.size());
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    classes[i] = grouping.class_of(sequence[i]);
  }
  for (std::size_t i = 0; i + 2 < sequence.size(); ++i) {
    const int c1 = classes[i], c2 = classes[i + 1], c3 = classes[i + 2];
    if (c1 == 0 || c2 == 0 || c3 == 0) continue;  // window touches an unknown
    out.values[static_cast<std::size_t>(49 * (c1 - 1) + 7 * (c2 - 1) + (c3 - 1))] +=
        1.0;
    ++out.window_count;
  }
  if (out.window_count == 0) {
    out.warning = true;
    return out;
  }
  if (normalize) {
    const double inv = 1.0 / static_cast<double>(out.window_count);
    for (double& v : out.values) v *= inv;
  }
  return out;
}

double tanimoto(const Fingerprint& a, const Fingerprint& b) {
  if (a.bits.size() != b.bits.size()) {
    throw InvalidArgument("tanimoto: fingerprint lengths differ");
  }
  std::size_t both = 0, either = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    both += a.bits[i] & b.bits[i];
    either += a.bits[i] | b.bits[i];
  }
  if (either == 0) {
    throw NumericError("tanimoto: undefined for two all-zero fingerprints");
  }
  return static_cast<double>(both) / static_cast<double>(either);
}

Dense one_hot_nodes(std::size_t n) {
  if (n == 0) throw InvalidArgument("one_hot_nodes: need at least one node");
  return Dense::identity(n);
}

Dense enzyme_edge_features(const std::vector<int>& ec_classes) {
  if (ec_classes.empty()) {
    throw InvalidArgument("enzyme features: class list is empty");
  }
  Dense out(1, 7);
  for (int cls : ec_classes) {
    if (cls < 1 || cls > 7) {
      throw InvalidArgument("enzyme features: class must be in 1..7");
    }
    out(0, static_cast<std::size_t>(cls - 1)) = 1.0;
  }
  return out;
}

TanimotoTargets pairwise_tanimoto_targets(
    const std::vector<Fingerprint>& fingerprints,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::unordered_map<std::string, const Fingerprint*> by_id;
  for (const Fingerprint& fp : fingerprints) {
    if (!by_id.emplace(fp.id, &fp).second) {
      throw DataError("tanimoto targets: duplicate fingerprint id '" + fp.id + "'");
    }
  }
  TanimotoTargets out;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& [raw_i, raw_j] : pairs) {
    if (raw_i == raw_j) {
      throw InvalidArgument("tanimoto targets: pattern references a pair of equal ids");
    }
    auto key = std::minmax(raw_i, raw_j);
    if (!seen.insert(key).second) {
      ++out.duplicate_pairs;
      continue;
    }
    Pattern p{raw_i, raw_j, std::nullopt};
    auto fi = by_id.find(raw_i);
    auto fj = by_id.find(raw_j);
    if (fi != by_id.end() && fj != by_id.end()) {
      p.label = tanimoto(*fi->second, *fj->second);
      ++out.labeled;
    } else {
      ++out.unlabeled;
    }
    out.patterns.push_back(std::move(p));
  }
  if (out.duplicate_pairs > 0) {
    log_warn("tanimoto targets: dropped " + std::to_string(out.duplicate_pairs) +
             " duplicate pair(s)");
  }
  return out;
}

}  // namespace edgewise
