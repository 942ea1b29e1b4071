#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "keybasket/keyness.hpp"
#include "keybasket/miner.hpp"

namespace keybasket {

enum class InputFormat { vertical, jsonl };

InputFormat parse_format(const std::string& s);
std::string to_string(InputFormat f);

struct SegmentInput {
  std::string name;
  std::filesystem::path path;
};

struct PipelineConfig {
  InputFormat format = InputFormat::vertical;
  std::filesystem::path reference;
  std::vector<SegmentInput> segments;
  keyness::KeynessConfig keyness;
  miner::MiningConfig mining;
  std::optional<std::string> seed_keyword;
  std::optional<std::filesystem::path> stoplist;
  std::vector<std::string> content_tags{"N", "A", "V", "D"};
  std::filesystem::path out_dir = "out";
  std::filesystem::path cache_dir;  // empty: $KEYBASKET_CACHE, else <out>/cache

  /// Applies one setting by its flag name ("min-support", "segment", ...).
  /// "segment" takes NAME=PATH and replaces an existing segment of that name.
  void set(const std::string& name, const std::string& value);

  std::filesystem::path effective_cache_dir() const;
  /// Throws keybasket::Error naming the first invalid field.
  void validate() const;
};

/// Flat "section.key = value" lines; '#' starts a comment. Keys keep file order.
std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in);

/// Builds a config from key-value pairs; the section part of a dotted key is
/// dropped except for "segment.NAME".
PipelineConfig config_from_key_values(const std::vector<std::pair<std::string, std::string>>& kv);

/// Canonical text for the settings that influence a stage's output.
std::string keyness_signature(const PipelineConfig& cfg);
std::string mining_signature(const PipelineConfig& cfg);

}  // namespace keybasket
