#include "edgewise/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "edgewise/errors.hpp"
#include "edgewise/log.hpp"

namespace edgewise {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  // trailing blank lines are tolerated
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

[[noreturn]] void malformed(const std::filesystem::path& path, std::size_t line_no,
                            const std::string& what) {
  throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw NumericError("format_double: conversion failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text, const std::string& context) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw DataError(context + ": not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string fnv1a_hex(std::string_view content) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : content) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf);
}

std::string file_digest(const std::filesystem::path& path) {
  return fnv1a_hex(read_text_file(path));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw DataError("cannot rename '" + tmp.string() + "' to '" + path.string() + "'");
}

Dense read_similarity_tsv(const std::filesystem::path& path,
                          std::vector<std::string>& ids_out) {
  const auto lines = read_lines(path);
  if (lines.size() < 2) throw DataError(path.string() + ": missing header or rows");
  auto header = split_tabs(lines[0]);
  if (header.size() < 2) malformed(path, 1, "header must list node ids");
  // leading corner cell (may be empty or a label), then n ids
  ids_out.assign(header.begin() + 1, header.end());
  const std::size_t n = ids_out.size();
  if (lines.size() - 1 != n) {
    throw DataError(path.string() + ": expected " + std::to_string(n) + " rows, got " +
                    std::to_string(lines.size() - 1));
  }
  Dense matrix(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto fields = split_tabs(lines[r + 1]);
    if (fields.size() != n + 1) {
      malformed(path, r + 2, "expected " + std::to_string(n + 1) + " columns");
    }
    if (fields[0] != ids_out[r]) {
      malformed(path, r + 2, "row id '" + fields[0] + "' does not match header order");
    }
    for (std::size_t c = 0; c < n; ++c) {
      matrix(r, c) = parse_double(fields[c + 1],
                                  path.string() + ":" + std::to_string(r + 2));
    }
  }
  return matrix;
}

void write_similarity_tsv(const std::filesystem::path& path, const Dense& matrix,
                          const std::vector<std::string>& ids) {
  if (matrix.rows() != ids.size() || matrix.cols() != ids.size()) {
    throw InvalidArgument("write similarity: shape does not match id count");
  }
  std::string out = "id";
  for (const auto& id : ids) {
    out += '\t';
    out += id;
  }
  out += '\n';
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    out += ids[r];
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      out += '\t';
      out += format_double(matrix(r, c));
    }
    out += '\n';
  }
  write_text_atomic(path, out);
}

void read_node_features_tsv(const std::filesystem::path& path,
                            std::vector<std::string>& ids_out, Dense& features_out) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw DataError(path.string() + ": empty file");
  ids_out.clear();
  std::vector<double> data;
  std::size_t dim = 0;
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto fields = split_tabs(lines[r]);
    if (fields.size() < 2) malformed(path, r + 1, "expected id plus features");
    if (r == 0) {
      dim = fields.size() - 1;
    } else if (fields.size() - 1 != dim) {
      malformed(path, r + 1, "inconsistent feature count");
    }
    ids_out.push_back(fields[0]);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      data.push_back(parse_double(fields[c], path.string() + ":" + std::to_string(r + 1)));
    }
  }
  features_out = Dense(ids_out.size(), dim, std::move(data));
}

void write_node_features_tsv(const std::filesystem::path& path,
                             const std::vector<std::string>& ids,
                             const Dense& features) {
  if (features.rows() != ids.size()) {
    throw InvalidArgument("write node features: row count does not match ids");
  }
  std::string out;
  for (std::size_t r = 0; r < features.rows(); ++r) {
    out += ids[r];
    for (std::size_t c = 0; c < features.cols(); ++c) {
      out += '\t';
      out += format_double(features(r, c));
    }
    out += '\n';
  }
  write_text_atomic(path, out);
}

std::vector<EdgeRecord> read_edges_tsv(const std::filesystem::path& path,
                                       std::size_t& edge_dim_out) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw DataError(path.string() + ": empty file");
  const auto header = split_tabs(lines[0]);
  if (header.size() < 2 || header[0] != "src" || header[1] != "dst") {
    malformed(path, 1, "header must start with 'src\\tdst'");
  }
  edge_dim_out = header.size() - 2;
  std::vector<EdgeRecord> edges;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_tabs(lines[r]);
    if (fields.size() != header.size()) {
      malformed(path, r + 1, "expected " + std::to_string(header.size()) + " columns");
    }
    EdgeRecord rec;
    rec.src = fields[0];
    rec.dst = fields[1];
    for (std::size_t c = 2; c < fields.size(); ++c) {
      rec.features.push_back(
          parse_double(fields[c], path.string() + ":" + std::to_string(r + 1)));
    }
    edges.push_back(std::move(rec));
  }
  return edges;
}

void write_edges_tsv(const std::filesystem::path& path,
                     const std::vector<EdgeRecord>& edges, std::size_t edge_dim) {
  std::string out = "src\tdst";
  for (std::size_t c = 0; c < edge_dim; ++c) {
    out += "\te" + std::to_string(c + 1);
  }
  out += '\n';
  for (const EdgeRecord& rec : edges) {
    if (rec.features.size() != edge_dim) {
      throw InvalidArgument("write edges: inconsistent feature count");
    }
    out += rec.src;
    out += '\t';
    out += rec.dst;
    for (double v : rec.features) {
      out += '\t';
      out += format_double(v);
    }
    out += '\n';
  }
  write_text_atomic(path, out);
}

std::vector<Pattern> read_patterns_tsv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw DataError(path.string() + ": empty file");
  const auto header = split_tabs(lines[0]);
  if (header.size() < 2 || header[0] != "i" || header[1] != "j") {
    malformed(path, 1, "header must start with 'i\\tj'");
  }
  std::vector<Pattern> patterns;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_tabs(lines[r]);
    if (fields.size() < 2 || fields.size() > 3) {
      malformed(path, r + 1, "expected columns i, j, label");
    }
    Pattern p;
    p.i = fields[0];
    p.j = fields[1];
    if (fields.size() == 3 && !fields[2].empty()) {
      p.label = parse_double(fields[2], path.string() + ":" + std::to_string(r + 1));
    }
    if (p.i == p.j) malformed(path, r + 1, "pattern endpoints must differ");
    patterns.push_back(std::move(p));
  }
  return patterns;
}

void write_patterns_tsv(const std::filesystem::path& path,
                        const std::vector<Pattern>& patterns) {
  std::string out = "i\tj\tlabel\n";
  for (const Pattern& p : patterns) {
    out += p.i;
    out += '\t';
    out += p.j;
    out += '\t';
    if (p.label) out += format_double(*p.label);
    out += '\n';
  }
  write_text_atomic(path, out);
}

std::vector<Fingerprint> read_fingerprints_tsv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw DataError(path.string() + ": empty file");
  const auto header = split_tabs(lines[0]);
  if (header.size() != 2 || header[0] != "id" || header[1] != "bits") {
    malformed(path, 1, "header must be 'id\\tbits'");
  }
  std::vector<Fingerprint> fingerprints;
  std::size_t length = 0;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_tabs(lines[r]);
    if (fields.size() != 2) malformed(path, r + 1, "expected id and bits");
    Fingerprint fp;
    fp.id = fields[0];
    fp.bits.reserve(fields[1].size());
    for (char c : fields[1]) {
      if (c != '0' && c != '1') malformed(path, r + 1, "bits must be 0 or 1");
      fp.bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    if (fp.bits.empty()) malformed(path, r + 1, "empty fingerprint");
    if (r == 1) {
      length = fp.bits.size();
    } else if (fp.bits.size() != length) {
      malformed(path, r + 1, "fingerprint length differs from previous rows");
    }
    fingerprints.push_back(std::move(fp));
  }
  return fingerprints;
}

void write_fingerprints_tsv(const std::filesystem::path& path,
                            const std::vector<Fingerprint>& fingerprints) {
  std::string out = "id\tbits\n";
  for (const Fingerprint& fp : fingerprints) {
    out += fp.id;
    out += '\t';
    for (std::uint8_t b : fp.bits) out += b ? '1' : '0';
    out += '\n';
  }
  write_text_atomic(path, out);
}

std::vector<std::pair<std::string, std::string>> read_fasta(
    const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  std::vector<std::pair<std::string, std::string>> records;
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const std::string& line = lines[r];
    if (line.empty()) continue;
    if (line[0] == '>') {
      std::string id = line.substr(1);
      const std::size_t ws = id.find_first_of(" \t");
      if (ws != std::string::npos) id.resize(ws);
      if (id.empty()) malformed(path, r + 1, "empty FASTA header");
      records.emplace_back(std::move(id), "");
    } else {
      if (records.empty()) malformed(path, r + 1, "sequence data before any header");
      records.back().second += line;
    }
  }
  return records;
}

void save_graph_dir(const std::filesystem::path& dir, const Graph& graph,
                    bool write_features) {
  std::filesystem::create_directories(dir);
  std::string nodes;
  for (const auto& id : graph.node_ids()) {
    nodes += id;
    nodes += '\n';
  }
  write_text_atomic(dir / "nodes.tsv", nodes);

  std::vector<EdgeRecord> records;
  records.reserve(graph.edge_count());
  const std::size_t q = graph.edge_feature_dim();
  for (std::size_t row = 0; row < graph.edges().size(); ++row) {
    const auto [u, v] = graph.edges()[row];
    EdgeRecord rec;
    rec.src = graph.node_ids()[u];
    rec.dst = graph.node_ids()[v];
    for (std::size_t c = 0; c < q; ++c) {
      rec.features.push_back((*graph.edge_features())(row, c));
    }
    records.push_back(std::move(rec));
  }
  write_edges_tsv(dir / "edges.tsv", records, q);

  if (write_features) {
    write_node_features_tsv(dir / "node_features.tsv", graph.node_ids(),
                            graph.node_features());
  }
}

Graph load_graph_dir(const std::filesystem::path& dir) {
  const auto node_lines = read_lines(dir / "nodes.tsv");
  if (node_lines.empty()) throw DataError((dir / "nodes.tsv").string() + ": empty");
  std::vector<std::string> ids;
  for (const std::string& line : node_lines) {
    if (!line.empty()) ids.push_back(line);
  }

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);

  std::size_t q = 0;
  const auto records = read_edges_tsv(dir / "edges.tsv", q);
  std::vector<Edge> edges;
  std::vector<double> edge_data;
  for (const EdgeRecord& rec : records) {
    auto su = index.find(rec.src);
    auto sv = index.find(rec.dst);
    if (su == index.end()) throw DataError("edges.tsv: unknown node id '" + rec.src + "'");
    if (sv == index.end()) throw DataError("edges.tsv: unknown node id '" + rec.dst + "'");
    edges.emplace_back(su->second, sv->second);
    for (double v : rec.features) edge_data.push_back(v);
  }

  Dense features;
  const std::filesystem::path feature_path = dir / "node_features.tsv";
  if (std::filesystem::exists(feature_path)) {
    std::vector<std::string> feature_ids;
    read_node_features_tsv(feature_path, feature_ids, features);
    if (feature_ids != ids) {
      throw DataError(feature_path.string() + ": ids do not match nodes.tsv order");
    }
  } else {
    log_info("graph dir '" + dir.string() + "' has no node_features.tsv; using one-hot");
    features = Dense::identity(ids.size());
  }

  std::optional<Dense> edge_features;
  if (q > 0 && !edges.empty()) {
    edge_features = Dense(edges.size(), q, std::move(edge_data));
  }
  return Graph(std::move(ids), std::move(edges), std::move(features),
               std::move(edge_features));
}

}  // namespace edgewise
