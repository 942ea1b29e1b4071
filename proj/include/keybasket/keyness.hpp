#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "keybasket/corpus.hpp"

namespace keybasket::keyness {

/// Thresholds applied when extracting keywords from one text.
struct KeynessConfig {
  std::uint64_t min_target_freq = 3;
  double ll_threshold = 10.83;  // chi2(1) critical value at alpha = 0.001
  double din_threshold = 70.0;  // strict: din > din_threshold
  std::size_t min_keywords_per_text = 15;
  bool alphabetic_only = true;

  /// Throws keybasket::DomainError when a field is out of range.
  void validate() const;
};

struct KeywordRecord {
  std::string lemma;
  std::uint64_t freq_target = 0;
  std::uint64_t freq_ref = 0;
  double rel_freq_target = 0;  // ipm
  double rel_freq_ref = 0;     // ipm
  double ll = 0;
  double din = 0;

  bool operator==(const KeywordRecord&) const = default;
};

/// Keywords of one document: the transaction handed to the basket miner.
struct KeywordList {
  std::string doc_id;
  std::string segment;
  std::vector<std::string> keywords;   // sorted, duplicate-free
  std::vector<KeywordRecord> records;  // parallel to keywords

  bool operator==(const KeywordList&) const = default;
};

struct TransactionBuild {
  std::vector<KeywordList> lists;  // sorted by doc_id
  std::size_t retained_count = 0;
  std::size_t dropped_count = 0;

  double retention_ratio() const noexcept {
    auto total = retained_count + dropped_count;
    return total == 0 ? 0.0 : static_cast<double>(retained_count) / static_cast<double>(total);
  }
};

/// Instances per million tokens.
double ipm(std::uint64_t count, std::uint64_t total);

/// Dunning's 2x2 G2 statistic comparing k_t/n_t against k_r/n_r.
double log_likelihood(std::uint64_t k_t, std::uint64_t n_t, std::uint64_t k_r, std::uint64_t n_r);

/// Difference index 100 * (t - r) / (t + r) over relative frequencies.
double din(double rel_t, double rel_r);

KeywordList extract_keywords(const corpus::Document& doc, const corpus::FrequencyProfile& ref,
                             const KeynessConfig& cfg);

/// Document-parallel extraction; lists below cfg.min_keywords_per_text are dropped.
TransactionBuild build_transactions(const corpus::Corpus& corpus, const corpus::FrequencyProfile& ref,
                                    const KeynessConfig& cfg);

/// Sequential reference for build_transactions.
TransactionBuild build_transactions_serial(const corpus::Corpus& corpus, const corpus::FrequencyProfile& ref,
                                           const KeynessConfig& cfg);

/// One JSON object per line: {"doc_id","segment","keywords","records"}.
void write_keyword_lists(const std::vector<KeywordList>& lists, std::ostream& out);
std::vector<KeywordList> read_keyword_lists(std::istream& in);

}  // namespace keybasket::keyness
