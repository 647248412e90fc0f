#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "styll/corpus.hpp"

namespace styll {

/// Canonical method identifiers, shared by the CLI, run configs and result
/// files.
namespace methods {
inline constexpr const char* kCopySrc = "copy-src";
inline constexpr const char* kCopyTgt = "copy-tgt";
inline constexpr const char* kCapi = "capi";
inline constexpr const char* kCont = "cont";
inline constexpr const char* kSynm = "synm";
inline constexpr const char* kPunc = "punc";
inline constexpr const char* kEmoj = "emoj";
inline constexpr const char* kLing = "ling";
inline constexpr const char* kEmbedSwap = "embed-swap";
inline constexpr const char* kParaNeu = "para-neu";
inline constexpr const char* kParaDiv = "para-div";
inline constexpr const char* kStyll = "styll";
}  // namespace methods

/// Per-post generation provenance.
struct PostTrace {
  std::string source_paraphrase;
  std::string full_prompt;
  bool paraphrase_fallback = false;
  bool transfer_fallback = false;
  int dropped_demos = 0;
  std::string error;
};

struct TransferTrace {
  std::vector<std::string> target_paraphrases;
  std::vector<std::string> descriptors;
  bool descriptors_defaulted = false;
  std::vector<PostTrace> posts;
};

/// 16 rewritten posts for one source -> target pair. outputs[i] rewrites
/// pair.source.posts[i].
struct TransferResult {
  TransferPair pair;
  std::string method;
  std::vector<std::string> outputs;
  TransferTrace trace;
  nlohmann::json config = nlohmann::json::object();
};

/// Result files carry author ids rather than full episodes; the variant file
/// resolves them back to episodes on load.
void save_transfer_result(const TransferResult& result, const std::filesystem::path& path);
TransferResult load_transfer_result(const std::filesystem::path& path,
                                    const DatasetVariant& variant);

}  // namespace styll
