#include "keybasket/corpus.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

#include <json.hpp>
#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "keybasket/error.hpp"

namespace keybasket::corpus {

using nlohmann::json;

void Corpus::add(Document doc) {
  if (doc.id.empty()) throw Error("document id must be non-empty");
  if (!ids_.insert(doc.id).second) throw Error("duplicate document id '" + doc.id + "'");
  docs_.push_back(std::move(doc));
}

bool Corpus::contains(std::string_view id) const { return ids_.contains(std::string(id)); }

Corpus Corpus::segment(std::string_view label) const {
  Corpus out;
  for (const auto& d : docs_)
    if (d.segment == label) out.add(d);
  return out;
}

std::vector<std::string> Corpus::segment_labels() const {
  std::vector<std::string> labels;
  for (const auto& d : docs_)
    if (std::find(labels.begin(), labels.end(), d.segment) == labels.end()) labels.push_back(d.segment);
  return labels;
}

std::uint64_t FrequencyProfile::count(const std::string& lemma) const {
  auto it = counts.find(lemma);
  return it == counts.end() ? 0 : it->second;
}

void FrequencyProfile::add(std::span<const std::string> lemmas) {
  for (const auto& l : lemmas) ++counts[l];
  total_tokens += lemmas.size();
}

void FrequencyProfile::add(const Document& doc) {
  add(std::span<const std::string>(doc.lemmas));
  for (const auto& [lemma, tag] : doc.tags) pos.try_emplace(lemma, tag);
}

std::vector<std::pair<std::string, std::uint64_t>> FrequencyProfile::ranked() const {
  std::vector<std::pair<std::string, std::uint64_t>> out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

FrequencyProfile build_profile(std::span<const std::vector<std::string>> lemma_sequences) {
  FrequencyProfile p;
  for (const auto& seq : lemma_sequences) p.add(std::span<const std::string>(seq));
  return p;
}

FrequencyProfile build_profile(const Corpus& corpus) {
  FrequencyProfile p;
  for (const auto& d : corpus.documents()) p.add(d);
  return p;
}

namespace {

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find('\t', start);
    fields.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return fields;
}

bool starts_with_tag(std::string_view line, std::string_view name) {
  if (line.size() <= name.size() + 1 || line[0] != '<') return false;
  if (line.substr(1, name.size()) != name) return false;
  char next = line[name.size() + 1];
  return next == ' ' || next == '\t' || next == '>' || next == '/';
}

}  // namespace

Corpus parse_vertical(std::istream& in) {
  static const std::regex attr_re(R"re(([A-Za-z_][\w.-]*)\s*=\s*"([^"]*)")re");
  Corpus corpus;
  std::string line;
  std::size_t lineno = 0;
  bool in_doc = false;
  std::size_t doc_line = 0;
  Document current;

  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;

    if (line[0] == '<') {
      if (starts_with_tag(line, "doc")) {
        if (in_doc) throw ParseError(lineno, "nested <doc> (previous opened at line " + std::to_string(doc_line) + ")");
        current = Document{};
        bool has_id = false;
        for (auto it = std::sregex_iterator(line.begin(), line.end(), attr_re); it != std::sregex_iterator(); ++it) {
          const auto key = (*it)[1].str();
          if (key == "id") {
            current.id = (*it)[2].str();
            has_id = true;
          } else if (key == "segment") {
            current.segment = (*it)[2].str();
          }
        }
        if (!has_id || current.id.empty()) throw ParseError(lineno, "<doc> tag without id attribute");
        if (corpus.contains(current.id)) throw ParseError(lineno, "duplicate document id '" + current.id + "'");
        in_doc = true;
        doc_line = lineno;
      } else if (line.rfind("</doc", 0) == 0) {
        if (!in_doc) throw ParseError(lineno, "</doc> without matching <doc>");
        corpus.add(std::move(current));
        in_doc = false;
      }
      // any other markup (<s>, <p>, <g/>, ...) is structural and skipped
      continue;
    }

    auto fields = split_tabs(line);
    if (fields.size() < 2) throw ParseError(lineno, "token line needs at least form<TAB>lemma");
    if (!in_doc) throw ParseError(lineno, "token line outside <doc>");
    if (fields[1].empty()) throw ParseError(lineno, "empty lemma");
    if (fields.size() >= 3 && !fields[2].empty()) current.tags.try_emplace(fields[1], fields[2]);
    current.lemmas.push_back(std::move(fields[1]));
  }
  if (in_doc) throw ParseError(doc_line, "unterminated <doc> '" + current.id + "'");
  return corpus;
}

Corpus parse_jsonl(std::istream& in) {
  Corpus corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) throw ParseError(lineno, "expected a JSON object");

    auto id = obj.find("id");
    if (id == obj.end()) throw ParseError(lineno, "missing required key 'id'");
    if (!id->is_string()) throw ParseError(lineno, "key 'id' must be a string");
    auto lemmas = obj.find("lemmas");
    if (lemmas == obj.end()) throw ParseError(lineno, "missing required key 'lemmas'");
    if (!lemmas->is_array()) throw ParseError(lineno, "key 'lemmas' must be an array of strings");

    Document doc;
    doc.id = id->get<std::string>();
    if (auto seg = obj.find("segment"); seg != obj.end()) {
      if (!seg->is_string()) throw ParseError(lineno, "key 'segment' must be a string");
      doc.segment = seg->get<std::string>();
    }
    doc.lemmas.reserve(lemmas->size());
    for (const auto& l : *lemmas) {
      if (!l.is_string()) throw ParseError(lineno, "key 'lemmas' must be an array of strings");
      doc.lemmas.push_back(l.get<std::string>());
    }
    if (auto tags = obj.find("tags"); tags != obj.end() && tags->is_object())
      for (const auto& [k, v] : tags->items())
        if (v.is_string()) doc.tags.emplace(k, v.get<std::string>());

    try {
      corpus.add(std::move(doc));
    } catch (const Error& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return corpus;
}

void write_jsonl(const Corpus& corpus, std::ostream& out) {
  for (const auto& d : corpus.documents()) {
    json obj = {{"id", d.id}, {"segment", d.segment}, {"lemmas", d.lemmas}};
    if (!d.tags.empty()) obj["tags"] = d.tags;
    out << obj.dump() << '\n';
  }
}

void write_profile(const FrequencyProfile& profile, std::ostream& out) {
  std::vector<const std::pair<const std::string, std::uint64_t>*> rows;
  rows.reserve(profile.counts.size());
  for (const auto& kv : profile.counts) rows.push_back(&kv);
  std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->first < b->first; });

  out << "#total\t" << profile.total_tokens << '\n';
  for (const auto* kv : rows) {
    out << kv->first << '\t' << kv->second;
    if (auto it = profile.pos.find(kv->first); it != profile.pos.end()) out << '\t' << it->second;
    out << '\n';
  }
}

FrequencyProfile read_profile(std::istream& in) {
  FrequencyProfile p;
  std::string line;
  std::size_t lineno = 0;
  bool have_total = false;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    try {
      if (fields[0] == "#total") {
        if (fields.size() < 2) throw ParseError(lineno, "missing total");
        p.total_tokens = std::stoull(fields[1]);
        have_total = true;
        continue;
      }
      if (fields.size() < 2) throw ParseError(lineno, "profile row needs lemma<TAB>count");
      auto n = std::stoull(fields[1]);
      if (n == 0) throw ParseError(lineno, "zero count");
      p.counts[fields[0]] = n;
      if (fields.size() >= 3 && !fields[2].empty()) p.pos[fields[0]] = fields[2];
    } catch (const std::logic_error&) {
      throw ParseError(lineno, "invalid number");
    }
  }
  if (!have_total) throw ParseError(lineno, "profile has no #total line");
  return p;
}

bool is_alphabetic(std::string_view lemma) {
  if (lemma.empty()) return false;
  const auto* s = reinterpret_cast<const std::uint8_t*>(lemma.data());
  const auto length = static_cast<std::int32_t>(lemma.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0 || !u_isalpha(c)) return false;
  }
  return true;
}

}  // namespace keybasket::corpus
