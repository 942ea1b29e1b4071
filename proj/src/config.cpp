#include "keybasket/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "keybasket/error.hpp"
#include <cctype>

namespace keybasket {

InputFormat parse_format(const std::string& s) {
  if (s == "vertical") return InputFormat::vertical;
  if (s == "jsonl") return InputFormat::jsonl;
  throw Error("unknown input format '" + s + "' (expected vertical or jsonl)");
}

std::string to_string(InputFormat f) { return f == InputFormat::vertical ? "vertical" : "jsonl"; }

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& name, const std::string& v) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::logic_error&) {
    throw Error("setting '" + name + "' expects a number, got '" + v + "'");
  }
}

std::uint64_t to_unsigned(const std::string& name, const std::string& v) {
  try {
    std::size_t used = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
    auto x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::logic_error&) {
    throw Error("setting '" + name + "' expects a non-negative integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& name, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error("setting '" + name + "' expects true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    if (auto t = trim(item); !t.empty()) out.push_back(t);
  return out;
}

bool valid_segment_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  });
}

}  // namespace

void PipelineConfig::set(const std::string& name, const std::string& value) {
  if (name == "format") {
    format = parse_format(value);
  } else if (name == "reference") {
    reference = value;
  } else if (name == "segment") {
    const auto eq = value.find('=');
    if (eq == std::string::npos) throw Error("--segment expects NAME=PATH, got '" + value + "'");
    SegmentInput seg{value.substr(0, eq), value.substr(eq + 1)};
    if (!valid_segment_name(seg.name))
      throw Error("segment name '" + seg.name + "' may only contain letters, digits, '_', '-' and '.'");
    auto it = std::find_if(segments.begin(), segments.end(), [&](const auto& s) { return s.name == seg.name; });
    if (it != segments.end())
      *it = seg;
    else
      segments.push_back(seg);
  } else if (name == "min-freq") {
    keyness.min_target_freq = to_unsigned(name, value);
  } else if (name == "ll-threshold") {
    keyness.ll_threshold = to_double(name, value);
  } else if (name == "din-threshold") {
    keyness.din_threshold = to_double(name, value);
  } else if (name == "min-keywords") {
    keyness.min_keywords_per_text = to_unsigned(name, value);
  } else if (name == "alphabetic-only") {
    keyness.alphabetic_only = to_bool(name, value);
  } else if (name == "min-support") {
    mining.min_support = to_double(name, value);
  } else if (name == "min-confidence") {
    mining.min_confidence = to_double(name, value);
  } else if (name == "max-len") {
    mining.max_rule_len = to_unsigned(name, value);
  } else if (name == "seed-keyword") {
    if (value.empty())
      seed_keyword.reset();
    else
      seed_keyword = value;
  } else if (name == "stoplist") {
    if (value.empty())
      stoplist.reset();
    else
      stoplist = value;
  } else if (name == "content-tags") {
    content_tags = split_list(value);
  } else if (name == "out") {
    out_dir = value;
  } else if (name == "cache") {
    cache_dir = value;
  } else {
    throw Error("unknown setting '" + name + "'");
  }
}

std::filesystem::path PipelineConfig::effective_cache_dir() const {
  if (!cache_dir.empty()) return cache_dir;
  if (const char* env = std::getenv("KEYBASKET_CACHE"); env && *env) return env;
  return out_dir / "cache";
}

void PipelineConfig::validate() const {
  if (reference.empty()) throw Error("no reference corpus given (--reference)");
  if (segments.empty()) throw Error("no target segment given (--segment NAME=PATH)");
  keyness.validate();
  mining.validate();
}

std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key = value");
    auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(lineno, "empty key");
    kv.emplace_back(std::move(key), trim(line.substr(eq + 1)));
  }
  return kv;
}

PipelineConfig config_from_key_values(const std::vector<std::pair<std::string, std::string>>& kv) {
  PipelineConfig cfg;
  for (const auto& [key, value] : kv) {
    if (key.rfind("segment.", 0) == 0) {
      cfg.set("segment", key.substr(8) + "=" + value);
      continue;
    }
    const auto dot = key.rfind('.');
    cfg.set(dot == std::string::npos ? key : key.substr(dot + 1), value);
  }
  return cfg;
}

std::string keyness_signature(const PipelineConfig& cfg) {
  std::ostringstream s;
  s.precision(17);
  s << "format=" << to_string(cfg.format) << ";min-freq=" << cfg.keyness.min_target_freq
    << ";ll-threshold=" << cfg.keyness.ll_threshold << ";din-threshold=" << cfg.keyness.din_threshold
    << ";min-keywords=" << cfg.keyness.min_keywords_per_text << ";alphabetic-only=" << cfg.keyness.alphabetic_only;
  return s.str();
}

std::string mining_signature(const PipelineConfig& cfg) {
  std::ostringstream s;
  s.precision(17);
  s << "min-support=" << cfg.mining.min_support << ";min-confidence=" << cfg.mining.min_confidence
    << ";max-len=" << cfg.mining.max_rule_len << ";seed-keyword=" << cfg.seed_keyword.value_or("");
  return s.str();
}

}  // namespace keybasket
