// keybasket: keyword extraction and keyword association mining over corpus segments.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "keybasket/config.hpp"
#include "keybasket/error.hpp"
#include "keybasket/pipeline.hpp"

namespace {

struct Flag {
  const char* name;
  const char* help;
};

constexpr Flag kFlags[] = {
    {"format", "input format: vertical | jsonl (default vertical)"},
    {"reference", "reference corpus file"},
    {"min-freq", "minimum keyword frequency in the target text (default 3)"},
    {"ll-threshold", "log-likelihood critical value (default 10.83)"},
    {"din-threshold", "DIN must exceed this value (default 70)"},
    {"min-keywords", "minimum keywords per text to enter mining (default 15)"},
    {"alphabetic-only", "only lemmas made of letters are candidates (default true)"},
    {"min-support", "minimum rule support (default 0.003)"},
    {"min-confidence", "minimum rule confidence (default 0.4)"},
    {"max-len", "maximum items per rule, antecedent plus consequent (default 4)"},
    {"seed-keyword", "lemma whose rules feed boxplots, outliers and comparisons"},
    {"stoplist", "function-word list for thematic concentration, one lemma per line"},
    {"content-tags", "comma-separated tag prefixes marking content words (default N,A,V,D)"},
    {"out", "output directory (default out)"},
    {"cache", "cache directory (default $KEYBASKET_CACHE, else <out>/cache)"},
};

struct Invocation {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::vector<std::string> segments;
  bool quiet = false;
};

void add_pipeline_options(CLI::App* cmd, Invocation& inv) {
  cmd->add_option("--config", inv.config_file, "key = value configuration file; flags override it")
      ->check(CLI::ExistingFile);
  cmd->add_option("--segment", inv.segments, "target segment as NAME=PATH (repeatable)");
  for (const auto& f : kFlags) cmd->add_option(std::string("--") + f.name, inv.values[f.name], f.help);
  cmd->add_flag("-q,--quiet", inv.quiet, "suppress progress notes");
}

keybasket::PipelineConfig resolve(CLI::App* cmd, const Invocation& inv) {
  keybasket::PipelineConfig cfg;
  if (!inv.config_file.empty()) {
    std::ifstream in(inv.config_file);
    cfg = keybasket::config_from_key_values(keybasket::read_key_values(in));
  }
  for (const auto& f : kFlags)
    if (cmd->count(std::string("--") + f.name) > 0) cfg.set(f.name, inv.values.at(f.name));
  for (const auto& s : inv.segments) cfg.set("segment", s);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"keybasket: per-text keywords and their associative links across texts"};
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> verbs = {
      {"ingest", "parse inputs and cache reference and segment frequency profiles"},
      {"keywords", "extract per-text keyword lists into the cache"},
      {"mine", "mine association rules and write rules_<segment>.csv/json"},
      {"stats", "write boxplot.csv and summary.json"},
      {"report", "write rule tables, boxplot.csv and summary.json"},
      {"compare", "compare segments pairwise and write comparison.json"},
      {"run", "full pipeline"},
  };

  Invocation inv;
  std::vector<CLI::App*> commands;
  for (const auto& [name, help] : verbs) {
    auto* cmd = app.add_subcommand(name, help);
    add_pipeline_options(cmd, inv);
    commands.push_back(cmd);
  }

  CLI11_PARSE(app, argc, argv);

  for (auto* cmd : commands) {
    if (!cmd->parsed()) continue;
    try {
      auto cfg = resolve(cmd, inv);
      auto bundle = keybasket::pipeline::run_pipeline(cfg, keybasket::pipeline::parse_stage(cmd->get_name()));
      if (!inv.quiet)
        for (const auto& n : bundle.notes) std::cerr << n << '\n';
      for (const auto& s : bundle.segments)
        std::cout << s.name << ": " << s.retained << "/" << s.total_docs << " texts mined, " << s.rule_count
                  << " rules\n";
    } catch (const keybasket::Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return 0;
}
