#pragma once

// On-disk inputs for pipeline tests.

#include <filesystem>
#include <fstream>
#include <string>

#include "keybasket/config.hpp"
#include "keybasket/corpus.hpp"
#include "synth.hpp"

namespace fixtures {

namespace fs = std::filesystem;

/// Fresh empty directory under the system temp dir.
inline fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("keybasket_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

inline void write_corpus(const keybasket::corpus::Corpus& c, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  keybasket::corpus::write_jsonl(c, out);
}

inline void write_reference(const keybasket::corpus::FrequencyProfile& p, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  keybasket::corpus::write_profile(p, out);
}

/// Two planted segments "A" and "B" with a shared reference profile, as JSONL.
inline keybasket::PipelineConfig planted_config(const fs::path& dir, std::size_t n_docs = 2000) {
  synth::PlantedSpec a;
  a.n_docs = n_docs;
  a.segment = "A";
  a.id_prefix = "a";
  auto pa = synth::planted_corpus(a, 1);
  synth::PlantedSpec b = a;
  b.segment = "B";
  b.id_prefix = "b";
  b.n_topics = 8;
  auto pb = synth::planted_corpus(b, 2);
  write_corpus(pa.corpus, dir / "a.jsonl");
  write_corpus(pb.corpus, dir / "b.jsonl");
  write_reference(pa.reference, dir / "reference.tsv");

  keybasket::PipelineConfig cfg;
  cfg.format = keybasket::InputFormat::jsonl;
  cfg.reference = dir / "reference.tsv";
  cfg.set("segment", "A=" + (dir / "a.jsonl").string());
  cfg.set("segment", "B=" + (dir / "b.jsonl").string());
  cfg.out_dir = dir / "out";
  cfg.cache_dir = dir / "cache";
  cfg.seed_keyword = "cake";
  // small samples: keep chance co-occurrences of topic words below the support bar
  cfg.mining.min_support = 0.02;
  return cfg;
}

inline std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace fixtures
