#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "keybasket/config.hpp"
#include "keybasket/corpus.hpp"
#include "keybasket/keyness.hpp"
#include "keybasket/miner.hpp"
#include "keybasket/stats.hpp"

namespace keybasket::pipeline {

enum class Stage { ingest, keywords, mine, stats, report, compare, run };

Stage parse_stage(const std::string& s);

struct SegmentReport {
  std::string name;
  std::size_t total_docs = 0;
  std::size_t retained = 0;
  std::size_t dropped = 0;
  std::size_t rule_count = 0;
  std::optional<std::string> seed;
  std::size_t seed_doc_count = 0;  // retained texts listing the seed as a keyword
  std::vector<miner::AssociationRule> rules;        // all rules, sorted
  std::vector<miner::AssociationRule> focus_rules;  // seed-filtered, or all rules without a seed
  std::optional<stats::BoxplotSummary> lift_box;
  std::optional<stats::BoxplotSummary> support_box;
  std::vector<miner::AssociationRule> outlier_rules;  // focus rules with lift above the upper fence
  std::optional<stats::ThematicConcentration> tc;
  std::string tc_source = "unavailable";  // "tags", "stoplist" or "unavailable"
  bool degenerate = false;                // no transaction survived the keyword-count filter
  std::string config_signature;

  double retention_ratio() const;
};

struct Comparison {
  std::string a, b;
  std::optional<stats::RankSumResult> lift_test;
  std::optional<stats::RankSumResult> support_test;
  std::pair<std::set<std::string>, std::set<std::string>> unique_in_outliers;
  std::pair<std::set<std::string>, std::set<std::string>> unique_in_focus_rules;
};

struct ReportBundle {
  std::vector<SegmentReport> segments;
  std::vector<Comparison> comparisons;
  std::vector<std::string> notes;  // cache hits, rebuilds, degenerate runs
};

/// Statistics for one segment from its keyword lists and full-text profile.
SegmentReport build_segment_report(const std::string& name, const keyness::TransactionBuild& build,
                                   const corpus::FrequencyProfile& segment_profile, const PipelineConfig& cfg);

/// Throws keybasket::Error when the reports were built under different settings.
Comparison compare_segments(const SegmentReport& a, const SegmentReport& b);

/// Runs every stage up to `upto`, reusing cached intermediates whose
/// fingerprints match, and writes the stage's artifacts to cfg.out_dir.
ReportBundle run_pipeline(const PipelineConfig& cfg, Stage upto = Stage::run);

nlohmann::json summary_json(const ReportBundle& bundle, const PipelineConfig& cfg);
nlohmann::json comparison_json(const ReportBundle& bundle);
nlohmann::json boxplot_json(const stats::BoxplotSummary& b);
nlohmann::json rank_sum_json(const stats::RankSumResult& r);
void write_boxplot_csv(const ReportBundle& bundle, std::ostream& out);

}  // namespace keybasket::pipeline
