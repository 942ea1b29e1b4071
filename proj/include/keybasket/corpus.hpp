#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace keybasket::corpus {

/// One text of a corpus: an identifier, a segment label and its lemma sequence.
struct Document {
  std::string id;
  std::string segment = "default";
  std::vector<std::string> lemmas;
  // lemma -> first tag seen; empty when the source carried no tag column.
  std::map<std::string, std::string> tags;

  std::size_t token_count() const noexcept { return lemmas.size(); }
  bool operator==(const Document&) const = default;
};

/// Ordered collection of documents with unique ids.
class Corpus {
 public:
  /// Appends a document; throws keybasket::Error on an empty or duplicate id.
  void add(Document doc);

  const std::vector<Document>& documents() const noexcept { return docs_; }
  std::size_t size() const noexcept { return docs_.size(); }
  bool empty() const noexcept { return docs_.empty(); }
  bool contains(std::string_view id) const;

  /// Documents carrying the given segment label, in corpus order.
  Corpus segment(std::string_view label) const;
  /// Distinct segment labels in order of first appearance.
  std::vector<std::string> segment_labels() const;

  bool operator==(const Corpus& other) const { return docs_ == other.docs_; }

 private:
  std::vector<Document> docs_;
  std::unordered_set<std::string> ids_;
};

/// lemma -> count table plus the token total it was drawn from.
struct FrequencyProfile {
  std::unordered_map<std::string, std::uint64_t> counts;
  std::uint64_t total_tokens = 0;
  std::unordered_map<std::string, std::string> pos;

  std::uint64_t count(const std::string& lemma) const;
  bool empty() const noexcept { return total_tokens == 0; }

  void add(std::span<const std::string> lemmas);
  void add(const Document& doc);

  /// (lemma, count) sorted by descending count, ties broken lexicographically.
  std::vector<std::pair<std::string, std::uint64_t>> ranked() const;
};

Corpus parse_vertical(std::istream& in);
Corpus parse_jsonl(std::istream& in);
void write_jsonl(const Corpus& corpus, std::ostream& out);

FrequencyProfile build_profile(std::span<const std::vector<std::string>> lemma_sequences);
FrequencyProfile build_profile(const Corpus& corpus);

/// Plain-text profile cache: "#total\t<N>" then "lemma\tcount[\ttag]" lines sorted by lemma.
void write_profile(const FrequencyProfile& profile, std::ostream& out);
FrequencyProfile read_profile(std::istream& in);

/// True iff every code point of the UTF-8 string is a Unicode letter.
bool is_alphabetic(std::string_view lemma);

}  // namespace keybasket::corpus
