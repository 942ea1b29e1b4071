#include "keybasket/rule_io.hpp"

#include <cstdio>
#include <fstream>

#include "keybasket/error.hpp"

namespace keybasket::rule_io {

using nlohmann::json;

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.6g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_rules_csv(const std::vector<miner::AssociationRule>& rules, std::ostream& out) {
  out << "rank,lhs,rhs,count,support,confidence,lift\n";
  std::size_t rank = 0;
  for (const auto& r : rules) {
    out << ++rank << ',' << csv_field(miner::join_items(r.lhs, ", ")) << ',' << csv_field(r.rhs) << ',' << r.count
        << ',' << format_real(r.support) << ',' << format_real(r.confidence) << ',' << format_real(r.lift) << '\n';
  }
}

json rule_to_json(const miner::AssociationRule& r) {
  return {{"lhs", r.lhs},
          {"rhs", r.rhs},
          {"count", r.count},
          {"lhs_count", r.lhs_count},
          {"rhs_count", r.rhs_count},
          {"support", r.support},
          {"confidence", r.confidence},
          {"lift", r.lift}};
}

miner::AssociationRule rule_from_json(const json& o) {
  miner::AssociationRule r;
  r.lhs = o.at("lhs").get<std::vector<std::string>>();
  r.rhs = o.at("rhs").get<std::string>();
  r.count = o.at("count").get<miner::Count>();
  r.lhs_count = o.at("lhs_count").get<miner::Count>();
  r.rhs_count = o.at("rhs_count").get<miner::Count>();
  r.support = o.at("support").get<double>();
  r.confidence = o.at("confidence").get<double>();
  r.lift = o.at("lift").get<double>();
  return r;
}

void write_rules_json(const std::vector<miner::AssociationRule>& rules, std::ostream& out) {
  json arr = json::array();
  std::size_t rank = 0;
  for (const auto& r : rules) {
    auto obj = rule_to_json(r);
    obj["rank"] = ++rank;
    arr.push_back(std::move(obj));
  }
  out << arr.dump(1) << '\n';
}

std::vector<miner::AssociationRule> read_rules_json(std::istream& in) {
  std::vector<miner::AssociationRule> rules;
  try {
    auto arr = json::parse(in);
    for (const auto& o : arr) rules.push_back(rule_from_json(o));
  } catch (const json::exception& e) {
    throw Error(std::string("rule table: ") + e.what());
  }
  return rules;
}

void emit_rule_table(const std::vector<miner::AssociationRule>& rules, TableFormat format,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  if (format == TableFormat::csv)
    write_rules_csv(rules, out);
  else
    write_rules_json(rules, out);
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace keybasket::rule_io
