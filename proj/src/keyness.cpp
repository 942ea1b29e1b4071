#include "keybasket/keyness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>

#include <json.hpp>

#include "keybasket/error.hpp"

namespace keybasket::keyness {

using nlohmann::json;

void KeynessConfig::validate() const {
  if (!(ll_threshold >= 0) || !(din_threshold >= 0))
    throw DomainError("keyness thresholds must be non-negative");
  if (min_keywords_per_text < 1) throw DomainError("min_keywords_per_text must be at least 1");
}

double ipm(std::uint64_t count, std::uint64_t total) {
  if (total == 0) throw DomainError("relative frequency of an empty profile");
  return 1e6 * static_cast<double>(count) / static_cast<double>(total);
}

namespace {

using u128 = unsigned __int128;

// O * ln(O / E) with E = row * col / n, evaluated as log1p of the exact
// integer difference O*n - row*col so that O == E gives exactly zero.
long double cell_term(std::uint64_t observed, std::uint64_t row, std::uint64_t col, std::uint64_t n) {
  if (observed == 0) return 0.0L;
  const u128 a = static_cast<u128>(observed) * n;
  const u128 b = static_cast<u128>(row) * col;
  const long double diff = a >= b ? static_cast<long double>(a - b) : -static_cast<long double>(b - a);
  return static_cast<long double>(observed) * std::log1p(diff / static_cast<long double>(b));
}

}  // namespace

double log_likelihood(std::uint64_t k_t, std::uint64_t n_t, std::uint64_t k_r, std::uint64_t n_r) {
  if (n_t == 0 || n_r == 0) throw DomainError("log_likelihood: zero corpus total");
  if (k_t > n_t || k_r > n_r) throw DomainError("log_likelihood: count exceeds corpus total");
  if (k_t + k_r == 0) throw DomainError("log_likelihood: word absent from both corpora");

  const std::uint64_t n = n_t + n_r;
  const std::uint64_t word = k_t + k_r;
  const std::uint64_t other = n - word;

  long double sum = cell_term(k_t, n_t, word, n) + cell_term(n_t - k_t, n_t, other, n) +
                    cell_term(k_r, n_r, word, n) + cell_term(n_r - k_r, n_r, other, n);
  // rounding can leave a tiny negative residue when the proportions almost agree
  return std::max(0.0, static_cast<double>(2.0L * sum));
}

double din(double rel_t, double rel_r) {
  if (!(rel_t >= 0) || !(rel_r >= 0)) throw DomainError("din: negative relative frequency");
  if (rel_t + rel_r <= 0) throw DomainError("din: both relative frequencies are zero");
  if (rel_r == 0) return 100.0;
  if (rel_t == 0) return -100.0;
  return 100.0 * (rel_t - rel_r) / (rel_t + rel_r);
}

KeywordList extract_keywords(const corpus::Document& doc, const corpus::FrequencyProfile& ref,
                             const KeynessConfig& cfg) {
  if (doc.lemmas.empty()) throw Error("extract_keywords: document '" + doc.id + "' is empty");
  if (ref.empty()) throw Error("extract_keywords: reference profile is empty");

  std::map<std::string_view, std::uint64_t> counts;
  for (const auto& l : doc.lemmas) ++counts[l];
  const std::uint64_t n_t = doc.lemmas.size();

  KeywordList out{doc.id, doc.segment, {}, {}};
  for (const auto& [lemma, k_t] : counts) {
    if (k_t < cfg.min_target_freq) continue;
    if (cfg.alphabetic_only && !corpus::is_alphabetic(lemma)) continue;

    KeywordRecord rec;
    rec.lemma = std::string(lemma);
    rec.freq_target = k_t;
    rec.freq_ref = ref.count(rec.lemma);
    if (rec.freq_ref > ref.total_tokens) throw ConsistencyError("reference count exceeds its total for '" + rec.lemma + "'");
    rec.rel_freq_target = ipm(k_t, n_t);
    rec.rel_freq_ref = ipm(rec.freq_ref, ref.total_tokens);
    rec.din = din(rec.rel_freq_target, rec.rel_freq_ref);
    if (!(rec.din > cfg.din_threshold)) continue;
    rec.ll = log_likelihood(k_t, n_t, rec.freq_ref, ref.total_tokens);
    if (!(rec.ll >= cfg.ll_threshold)) continue;

    out.keywords.push_back(rec.lemma);
    out.records.push_back(std::move(rec));
  }
  return out;
}

namespace {

TransactionBuild collect(std::vector<KeywordList> lists, const KeynessConfig& cfg) {
  TransactionBuild build;
  for (auto& kl : lists) {
    if (kl.keywords.size() >= cfg.min_keywords_per_text) {
      build.lists.push_back(std::move(kl));
      ++build.retained_count;
    } else {
      ++build.dropped_count;
    }
  }
  std::sort(build.lists.begin(), build.lists.end(),
            [](const KeywordList& a, const KeywordList& b) { return a.doc_id < b.doc_id; });
  return build;
}

KeywordList extract_or_empty(const corpus::Document& doc, const corpus::FrequencyProfile& ref,
                             const KeynessConfig& cfg) {
  if (doc.lemmas.empty()) return KeywordList{doc.id, doc.segment, {}, {}};
  return extract_keywords(doc, ref, cfg);
}

void check_inputs(const corpus::Corpus& corpus, const corpus::FrequencyProfile& ref, const KeynessConfig& cfg) {
  cfg.validate();
  if (corpus.empty()) throw Error("build_transactions: corpus is empty");
  if (ref.empty()) throw Error("build_transactions: reference profile is empty");
}

}  // namespace

TransactionBuild build_transactions(const corpus::Corpus& corpus, const corpus::FrequencyProfile& ref,
                                    const KeynessConfig& cfg) {
  check_inputs(corpus, ref, cfg);
  const auto& docs = corpus.documents();
  const auto n = static_cast<std::int64_t>(docs.size());
  std::vector<KeywordList> lists(docs.size());
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      lists[i] = extract_or_empty(docs[i], ref, cfg);
    } catch (...) {
#pragma omp critical(keyness_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return collect(std::move(lists), cfg);
}

TransactionBuild build_transactions_serial(const corpus::Corpus& corpus, const corpus::FrequencyProfile& ref,
                                           const KeynessConfig& cfg) {
  check_inputs(corpus, ref, cfg);
  std::vector<KeywordList> lists;
  lists.reserve(corpus.size());
  for (const auto& doc : corpus.documents()) lists.push_back(extract_or_empty(doc, ref, cfg));
  return collect(std::move(lists), cfg);
}

void write_keyword_lists(const std::vector<KeywordList>& lists, std::ostream& out) {
  for (const auto& kl : lists) {
    json records = json::array();
    for (const auto& r : kl.records)
      records.push_back({{"lemma", r.lemma},
                         {"freq_target", r.freq_target},
                         {"freq_ref", r.freq_ref},
                         {"rel_freq_target", r.rel_freq_target},
                         {"rel_freq_ref", r.rel_freq_ref},
                         {"ll", r.ll},
                         {"din", r.din}});
    json obj = {{"doc_id", kl.doc_id}, {"segment", kl.segment}, {"keywords", kl.keywords}, {"records", records}};
    out << obj.dump() << '\n';
  }
}

std::vector<KeywordList> read_keyword_lists(std::istream& in) {
  std::vector<KeywordList> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto obj = json::parse(line);
      KeywordList kl;
      kl.doc_id = obj.at("doc_id").get<std::string>();
      kl.segment = obj.at("segment").get<std::string>();
      kl.keywords = obj.at("keywords").get<std::vector<std::string>>();
      for (const auto& r : obj.at("records")) {
        KeywordRecord rec;
        rec.lemma = r.at("lemma").get<std::string>();
        rec.freq_target = r.at("freq_target").get<std::uint64_t>();
        rec.freq_ref = r.at("freq_ref").get<std::uint64_t>();
        rec.rel_freq_target = r.at("rel_freq_target").get<double>();
        rec.rel_freq_ref = r.at("rel_freq_ref").get<double>();
        rec.ll = r.at("ll").get<double>();
        rec.din = r.at("din").get<double>();
        kl.records.push_back(std::move(rec));
      }
      if (kl.records.size() != kl.keywords.size()) throw ParseError(lineno, "keywords and records differ in length");
      out.push_back(std::move(kl));
    } catch (const json::exception& e) {
      throw ParseError(lineno, std::string("keyword list: ") + e.what());
    }
  }
  return out;
}

}  // namespace keybasket::keyness
