#include "keybasket/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "keybasket/error.hpp"
#include "keybasket/fingerprint.hpp"
#include "keybasket/rule_io.hpp"

namespace keybasket::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

Stage parse_stage(const std::string& s) {
  static const std::map<std::string, Stage> stages = {
      {"ingest", Stage::ingest}, {"keywords", Stage::keywords}, {"mine", Stage::mine},      {"stats", Stage::stats},
      {"report", Stage::report}, {"compare", Stage::compare},   {"run", Stage::run},
  };
  auto it = stages.find(s);
  if (it == stages.end()) throw Error("unknown stage '" + s + "'");
  return it->second;
}

double SegmentReport::retention_ratio() const {
  return total_docs == 0 ? 0.0 : static_cast<double>(retained) / static_cast<double>(total_docs);
}

namespace {

std::vector<double> column(const std::vector<miner::AssociationRule>& rules, double miner::AssociationRule::*field) {
  std::vector<double> v;
  v.reserve(rules.size());
  for (const auto& r : rules) v.push_back(r.*field);
  return v;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

}  // namespace

SegmentReport build_segment_report(const std::string& name, const keyness::TransactionBuild& build,
                                   const corpus::FrequencyProfile& segment_profile, const PipelineConfig& cfg) {
  SegmentReport rep;
  rep.name = name;
  rep.retained = build.retained_count;
  rep.dropped = build.dropped_count;
  rep.total_docs = build.retained_count + build.dropped_count;
  rep.seed = cfg.seed_keyword;
  rep.config_signature = keyness_signature(cfg) + "|" + mining_signature(cfg);

  if (!segment_profile.counts.empty()) {
    std::optional<stats::WordPredicate> content;
    if (cfg.stoplist) {
      content = stats::stoplist_predicate(read_lines(*cfg.stoplist));
      rep.tc_source = "stoplist";
    } else if (!segment_profile.pos.empty()) {
      content = stats::tag_prefix_predicate(segment_profile, cfg.content_tags);
      rep.tc_source = "tags";
    }
    if (content) rep.tc = stats::thematic_concentration(segment_profile, *content);
  }

  if (build.lists.empty()) {
    rep.degenerate = true;
    return rep;
  }

  const auto ts = miner::TransactionSet::from_keyword_lists(build.lists);
  rep.rules = miner::mine_rules(ts, cfg.mining);
  rep.rule_count = rep.rules.size();

  if (cfg.seed_keyword) {
    if (auto id = ts.find(*cfg.seed_keyword)) rep.seed_doc_count = ts.postings(*id).size();
    rep.focus_rules = miner::filter_rules(rep.rules, miner::contains_item(*cfg.seed_keyword));
  } else {
    rep.focus_rules = rep.rules;
  }

  if (!rep.focus_rules.empty()) {
    const auto lifts = column(rep.focus_rules, &miner::AssociationRule::lift);
    const auto supports = column(rep.focus_rules, &miner::AssociationRule::support);
    rep.lift_box = stats::boxplot_summary(lifts);
    rep.support_box = stats::boxplot_summary(supports);
    rep.outlier_rules = miner::filter_rules(rep.focus_rules, [fence = rep.lift_box->upper_fence](const auto& r) {
      return r.lift > fence;
    });
  }
  return rep;
}

Comparison compare_segments(const SegmentReport& a, const SegmentReport& b) {
  if (a.config_signature != b.config_signature)
    throw Error("cannot compare segments '" + a.name + "' and '" + b.name + "': built with different settings");
  Comparison c;
  c.a = a.name;
  c.b = b.name;
  if (!a.focus_rules.empty() && !b.focus_rules.empty()) {
    c.lift_test = stats::wilcoxon_rank_sum(column(a.focus_rules, &miner::AssociationRule::lift),
                                           column(b.focus_rules, &miner::AssociationRule::lift));
    c.support_test = stats::wilcoxon_rank_sum(column(a.focus_rules, &miner::AssociationRule::support),
                                              column(b.focus_rules, &miner::AssociationRule::support));
  }
  c.unique_in_outliers = miner::unique_items(a.outlier_rules, b.outlier_rules);
  c.unique_in_focus_rules = miner::unique_items(a.focus_rules, b.focus_rules);
  return c;
}

namespace {

void write_atomically(const fs::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    if (!out) throw Error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

corpus::Corpus parse_file(const fs::path& path, InputFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return format == InputFormat::vertical ? corpus::parse_vertical(in) : corpus::parse_jsonl(in);
  } catch (const ParseError& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

// A stored profile ("#total" header) is read as is; anything else is parsed as a corpus.
corpus::FrequencyProfile load_profile(const fs::path& path, InputFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::string head(6, '\0');
  in.read(head.data(), 6);
  if (in.gcount() == 6 && head == "#total") {
    in.seekg(0);
    try {
      return corpus::read_profile(in);
    } catch (const ParseError& e) {
      throw Error(path.string() + ": " + e.what());
    }
  }
  return corpus::build_profile(parse_file(path, format));
}

std::optional<json> read_meta(const fs::path& path) {
  if (!fs::exists(path)) return std::nullopt;
  try {
    return json::parse(slurp(path));
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

class Runner {
 public:
  Runner(const PipelineConfig& cfg, ReportBundle& bundle)
      : cfg_(cfg), bundle_(bundle), cache_(cfg.effective_cache_dir()) {
    fs::create_directories(cache_);
  }

  const std::string& reference_fingerprint() {
    if (ref_fp_.empty()) {
      Fingerprint fp;
      fp.add("reference-profile").add(to_string(cfg_.format)).add_file(cfg_.reference);
      ref_fp_ = fp.hex();
    }
    return ref_fp_;
  }

  const corpus::FrequencyProfile& reference() {
    if (!reference_) reference_ = cached_profile("reference", reference_fingerprint(), cfg_.reference);
    return *reference_;
  }

  const corpus::FrequencyProfile& segment_profile(const SegmentInput& seg) {
    auto it = segment_profiles_.find(seg.name);
    if (it != segment_profiles_.end()) return it->second;
    Fingerprint fp;
    fp.add("segment-profile").add(to_string(cfg_.format)).add_file(seg.path);
    auto profile = cached_profile("profile_" + seg.name, fp.hex(), seg.path);
    return segment_profiles_.emplace(seg.name, std::move(profile)).first->second;
  }

  keyness::TransactionBuild keywords(const SegmentInput& seg) {
    Fingerprint fp;
    fp.add("keywords").add(reference_fingerprint()).add(to_string(cfg_.format)).add(keyness_signature(cfg_));
    fp.add(seg.name).add_file(seg.path);
    const auto fingerprint = fp.hex();
    const auto data = cache_ / ("keywords_" + seg.name + ".jsonl");
    const auto meta = cache_ / ("keywords_" + seg.name + ".meta.json");

    if (auto m = read_meta(meta); m && fs::exists(data)) {
      if (m->value("fingerprint", "") == fingerprint) {
        std::ifstream in(data, std::ios::binary);
        keyness::TransactionBuild build;
        build.lists = keyness::read_keyword_lists(in);
        build.retained_count = m->at("retained").get<std::size_t>();
        build.dropped_count = m->at("dropped").get<std::size_t>();
        if (build.lists.size() == build.retained_count) {
          note("keywords " + seg.name + ": cache hit");
          return build;
        }
      }
      note("keywords " + seg.name + ": fingerprint mismatch, rebuilding cache");
    }

    auto target = parse_file(seg.path, cfg_.format);
    corpus::Corpus relabelled;
    for (auto doc : target.documents()) {
      doc.segment = seg.name;
      relabelled.add(std::move(doc));
    }
    auto build = keyness::build_transactions(relabelled, reference(), cfg_.keyness);

    std::ostringstream body;
    keyness::write_keyword_lists(build.lists, body);
    write_atomically(data, body.str());
    json m = {{"fingerprint", fingerprint}, {"retained", build.retained_count}, {"dropped", build.dropped_count}};
    write_atomically(meta, m.dump(1) + "\n");
    note("keywords " + seg.name + ": built " + std::to_string(build.retained_count) + " lists, dropped " +
         std::to_string(build.dropped_count));
    return build;
  }

  void note(std::string s) { bundle_.notes.push_back(std::move(s)); }

 private:
  corpus::FrequencyProfile cached_profile(const std::string& stem, const std::string& fingerprint,
                                          const fs::path& source) {
    const auto data = cache_ / (stem + ".profile.tsv");
    const auto meta = cache_ / (stem + ".meta.json");
    if (auto m = read_meta(meta); m && fs::exists(data)) {
      if (m->value("fingerprint", "") == fingerprint) {
        std::ifstream in(data, std::ios::binary);
        note(stem + ": cache hit");
        return corpus::read_profile(in);
      }
      note(stem + ": fingerprint mismatch, rebuilding cache");
    }
    auto profile = load_profile(source, cfg_.format);
    std::ostringstream body;
    corpus::write_profile(profile, body);
    write_atomically(data, body.str());
    write_atomically(meta, json({{"fingerprint", fingerprint}}).dump(1) + "\n");
    note(stem + ": built profile of " + std::to_string(profile.total_tokens) + " tokens");
    return profile;
  }

  const PipelineConfig& cfg_;
  ReportBundle& bundle_;
  fs::path cache_;
  std::string ref_fp_;
  std::optional<corpus::FrequencyProfile> reference_;
  std::map<std::string, corpus::FrequencyProfile> segment_profiles_;
};

json config_json(const PipelineConfig& cfg) {
  return {{"format", to_string(cfg.format)},
          {"keyness",
           {{"min_freq", cfg.keyness.min_target_freq},
            {"ll_threshold", cfg.keyness.ll_threshold},
            {"din_threshold", cfg.keyness.din_threshold},
            {"min_keywords", cfg.keyness.min_keywords_per_text},
            {"alphabetic_only", cfg.keyness.alphabetic_only}}},
          {"mining",
           {{"min_support", cfg.mining.min_support},
            {"min_confidence", cfg.mining.min_confidence},
            {"max_len", cfg.mining.max_rule_len}}},
          {"seed_keyword", cfg.seed_keyword ? json(*cfg.seed_keyword) : json(nullptr)}};
}

json rules_json(const std::vector<miner::AssociationRule>& rules) {
  json arr = json::array();
  for (const auto& r : rules) arr.push_back(rule_io::rule_to_json(r));
  return arr;
}

json segment_json(const SegmentReport& s) {
  json j;
  j["name"] = s.name;
  j["degenerate"] = s.degenerate;
  j["documents"] = {{"total", s.total_docs},
                    {"retained", s.retained},
                    {"dropped", s.dropped},
                    {"retention_ratio", s.retention_ratio()}};
  j["rules"] = {{"count", s.rule_count}, {"focus_count", s.focus_rules.size()}};
  if (s.seed) {
    j["seed"] = {{"keyword", *s.seed},
                 {"doc_count", s.seed_doc_count},
                 {"share_of_all_texts",
                  s.total_docs ? static_cast<double>(s.seed_doc_count) / static_cast<double>(s.total_docs) : 0.0},
                 {"share_of_retained_texts",
                  s.retained ? static_cast<double>(s.seed_doc_count) / static_cast<double>(s.retained) : 0.0},
                 {"rule_count", s.focus_rules.size()}};
  } else {
    j["seed"] = nullptr;
  }
  j["lift"] = s.lift_box ? boxplot_json(*s.lift_box) : json(nullptr);
  j["support"] = s.support_box ? boxplot_json(*s.support_box) : json(nullptr);
  if (s.tc) {
    json contributing = json::array();
    for (const auto& c : s.tc->contributing)
      contributing.push_back({{"lemma", c.lemma}, {"rank", c.rank}, {"freq", c.freq}});
    j["thematic_concentration"] = {
        {"h", s.tc->h}, {"tc", s.tc->tc}, {"source", s.tc_source}, {"contributing", contributing}};
  } else {
    j["thematic_concentration"] = nullptr;
  }
  j["outlier_rules"] = rules_json(s.outlier_rules);
  return j;
}

json item_set_json(const std::set<std::string>& s) { return json(std::vector<std::string>(s.begin(), s.end())); }

}  // namespace

json boxplot_json(const stats::BoxplotSummary& b) {
  return {{"n", b.n},         {"min", b.min},
          {"q1", b.q1},       {"median", b.median},
          {"q3", b.q3},       {"max", b.max},
          {"iqr", b.iqr},     {"upper_fence", b.upper_fence},
          {"lower_fence", b.lower_fence}, {"n_outliers", b.outliers.size()}};
}

json rank_sum_json(const stats::RankSumResult& r) {
  return {{"u", r.u}, {"p_two_sided", r.p_two_sided}, {"n1", r.n1}, {"n2", r.n2}, {"method", to_string(r.method)}};
}

json summary_json(const ReportBundle& bundle, const PipelineConfig& cfg) {
  json segs = json::array();
  for (const auto& s : bundle.segments) segs.push_back(segment_json(s));
  return {{"config", config_json(cfg)}, {"segments", segs}};
}

json comparison_json(const ReportBundle& bundle) {
  json comps = json::array();
  for (const auto& c : bundle.comparisons) {
    const auto& sa = *std::find_if(bundle.segments.begin(), bundle.segments.end(),
                                   [&](const auto& s) { return s.name == c.a; });
    const auto& sb = *std::find_if(bundle.segments.begin(), bundle.segments.end(),
                                   [&](const auto& s) { return s.name == c.b; });
    auto side = [](const SegmentReport& s) {
      return json{{"name", s.name},
                  {"retained", s.retained},
                  {"total", s.total_docs},
                  {"rule_count", s.rule_count},
                  {"focus_rule_count", s.focus_rules.size()},
                  {"seed_doc_count", s.seed_doc_count},
                  {"median_lift", s.lift_box ? json(s.lift_box->median) : json(nullptr)},
                  {"median_support", s.support_box ? json(s.support_box->median) : json(nullptr)},
                  {"lift_upper_fence", s.lift_box ? json(s.lift_box->upper_fence) : json(nullptr)},
                  {"tc", s.tc ? json(s.tc->tc) : json(nullptr)},
                  {"outlier_rules", rules_json(s.outlier_rules)}};
    };
    comps.push_back({{"segments", json::array({side(sa), side(sb)})},
                     {"rank_sum",
                      {{"lift", c.lift_test ? rank_sum_json(*c.lift_test) : json(nullptr)},
                       {"support", c.support_test ? rank_sum_json(*c.support_test) : json(nullptr)}}},
                     {"unique_items",
                      {{"outliers", json::array({item_set_json(c.unique_in_outliers.first),
                                                 item_set_json(c.unique_in_outliers.second)})},
                       {"focus_rules", json::array({item_set_json(c.unique_in_focus_rules.first),
                                                    item_set_json(c.unique_in_focus_rules.second)})}}}});
  }
  return {{"comparisons", comps}};
}

void write_boxplot_csv(const ReportBundle& bundle, std::ostream& out) {
  out << "segment,metric,min,q1,median,q3,max,upper_fence,n_outliers\n";
  auto row = [&](const std::string& seg, const char* metric, const stats::BoxplotSummary& b) {
    out << rule_io::csv_field(seg) << ',' << metric << ',' << rule_io::format_real(b.min) << ','
        << rule_io::format_real(b.q1) << ',' << rule_io::format_real(b.median) << ',' << rule_io::format_real(b.q3)
        << ',' << rule_io::format_real(b.max) << ',' << rule_io::format_real(b.upper_fence) << ','
        << b.outliers.size() << '\n';
  };
  for (const auto& s : bundle.segments) {
    if (s.lift_box) row(s.name, "lift", *s.lift_box);
    if (s.support_box) row(s.name, "support", *s.support_box);
  }
}

ReportBundle run_pipeline(const PipelineConfig& cfg, Stage upto) {
  cfg.validate();
  if (upto == Stage::compare && cfg.segments.size() < 2) throw Error("compare needs at least two segments");

  ReportBundle bundle;
  Runner runner(cfg, bundle);
  auto at_least = [upto](Stage s) { return static_cast<int>(upto) >= static_cast<int>(s); };

  runner.reference();
  for (const auto& seg : cfg.segments) runner.segment_profile(seg);
  if (!at_least(Stage::keywords)) return bundle;

  std::map<std::string, keyness::TransactionBuild> builds;
  for (const auto& seg : cfg.segments) builds.emplace(seg.name, runner.keywords(seg));
  if (!at_least(Stage::mine)) return bundle;

  fs::create_directories(cfg.out_dir);
  for (const auto& seg : cfg.segments) {
    auto rep = build_segment_report(seg.name, builds.at(seg.name), runner.segment_profile(seg), cfg);
    if (rep.degenerate) runner.note(seg.name + ": no keyword list reached the minimum size; statistics omitted");
    if (rep.tc_source == "unavailable")
      runner.note(seg.name + ": no tags and no stoplist; thematic concentration omitted");
    bundle.segments.push_back(std::move(rep));
  }

  const bool write_rules = upto == Stage::mine || upto == Stage::report || upto == Stage::run;
  const bool write_stats = upto == Stage::stats || upto == Stage::report || upto == Stage::run;
  if (write_rules) {
    for (const auto& s : bundle.segments) {
      rule_io::emit_rule_table(s.rules, rule_io::TableFormat::csv, cfg.out_dir / ("rules_" + s.name + ".csv"));
      rule_io::emit_rule_table(s.rules, rule_io::TableFormat::json, cfg.out_dir / ("rules_" + s.name + ".json"));
    }
  }
  if (write_stats) {
    std::ostringstream box;
    write_boxplot_csv(bundle, box);
    write_atomically(cfg.out_dir / "boxplot.csv", box.str());
    write_atomically(cfg.out_dir / "summary.json", summary_json(bundle, cfg).dump(2) + "\n");
  }

  if (upto == Stage::compare || (upto == Stage::run && bundle.segments.size() >= 2)) {
    for (std::size_t i = 0; i < bundle.segments.size(); ++i)
      for (std::size_t j = i + 1; j < bundle.segments.size(); ++j)
        bundle.comparisons.push_back(compare_segments(bundle.segments[i], bundle.segments[j]));
    write_atomically(cfg.out_dir / "comparison.json", comparison_json(bundle).dump(2) + "\n");
  }
  return bundle;
}

}  // namespace keybasket::pipeline
