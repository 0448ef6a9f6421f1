#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edgewise/dense.hpp"
#include "edgewise/featurize.hpp"
#include "edgewise/graph.hpp"

namespace edgewise {

/// Shortest decimal rendering that round-trips the exact double.
std::string format_double(double value);
double parse_double(std::string_view text, const std::string& context);

/// FNV-1a 64 digest as a 16-char hex string.
std::string fnv1a_hex(std::string_view content);
std::string file_digest(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
/// Write via temp file + rename so readers never observe partial content.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

// ---- TSV formats --------------------------------------------------------

/// Similarity matrix: header row of ids, then one row per node with a
/// leading id column and n numeric columns.
Dense read_similarity_tsv(const std::filesystem::path& path,
                          std::vector<std::string>& ids_out);
void write_similarity_tsv(const std::filesystem::path& path, const Dense& matrix,
                          const std::vector<std::string>& ids);

/// Node features: no header; first column node id, then d numeric columns.
void read_node_features_tsv(const std::filesystem::path& path,
                            std::vector<std::string>& ids_out, Dense& features_out);
void write_node_features_tsv(const std::filesystem::path& path,
                             const std::vector<std::string>& ids,
                             const Dense& features);

struct EdgeRecord {
  std::string src;
  std::string dst;
  std::vector<double> features;
};

/// Edge list: header `src dst [e1 .. eq]`, one row per undirected edge.
std::vector<EdgeRecord> read_edges_tsv(const std::filesystem::path& path,
                                       std::size_t& edge_dim_out);
void write_edges_tsv(const std::filesystem::path& path,
                     const std::vector<EdgeRecord>& edges, std::size_t edge_dim);

/// Patterns: header `i j label`; an empty label field marks an unlabeled
/// pattern.
std::vector<Pattern> read_patterns_tsv(const std::filesystem::path& path);
void write_patterns_tsv(const std::filesystem::path& path,
                        const std::vector<Pattern>& patterns);

/// Fingerprints: header `id bits`; bits is a 0/1 string of uniform length.
std::vector<Fingerprint> read_fingerprints_tsv(const std::filesystem::path& path);
void write_fingerprints_tsv(const std::filesystem::path& path,
                            const std::vector<Fingerprint>& fingerprints);

/// FASTA records as (id, sequence); the id is the header token up to the
/// first whitespace.
std::vector<std::pair<std::string, std::string>> read_fasta(
    const std::filesystem::path& path);

// ---- graph directory ----------------------------------------------------

/// A graph directory holds nodes.tsv (one id per line), edges.tsv, and
/// optionally node_features.tsv. Without a feature file, one-hot features
/// are assumed.
void save_graph_dir(const std::filesystem::path& dir, const Graph& graph,
                    bool write_features = false);
Graph load_graph_dir(const std::filesystem::path& dir);

}  // namespace edgewise
