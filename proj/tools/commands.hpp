#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace edgewise::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumeric = 4;

struct CommonOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> attend_over;
  bool exclude_center_edge = false;
};

int cmd_knn_graph(const std::filesystem::path& similarity, std::size_t k,
                  const std::filesystem::path& out_dir, bool mutual);

int cmd_featurize_ct(const std::filesystem::path& fasta,
                     const std::filesystem::path& out,
                     const std::optional<std::filesystem::path>& groups,
                     bool raw_counts);

int cmd_tanimoto_targets(const std::filesystem::path& fingerprints,
                         const std::optional<std::filesystem::path>& nodes,
                         const std::optional<std::filesystem::path>& pairs,
                         const std::filesystem::path& out);

int cmd_train(const std::filesystem::path& config,
              const std::filesystem::path& graph_dir,
              const std::filesystem::path& patterns,
              const std::filesystem::path& out_ckpt, const CommonOverrides& overrides,
              std::size_t runs);

int cmd_predict(const std::filesystem::path& ckpt,
                const std::filesystem::path& graph_dir,
                const std::filesystem::path& patterns,
                const std::filesystem::path& out);

int cmd_crossval(const std::filesystem::path& config,
                 const std::filesystem::path& graph_dir,
                 const std::filesystem::path& patterns,
                 const std::filesystem::path& out_dir,
                 const CommonOverrides& overrides, std::size_t jobs);

int cmd_eval(const std::filesystem::path& predictions,
             const std::filesystem::path& patterns,
             const std::filesystem::path& out, const std::string& task,
             double threshold);

int cmd_embed(const std::filesystem::path& ckpt,
              const std::filesystem::path& graph_dir,
              const std::filesystem::path& out_dir);

}  // namespace edgewise::cli
