#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "keybasket/miner.hpp"

namespace keybasket::rule_io {

enum class TableFormat { csv, json };

/// Real numbers in rule tables: six significant digits, trailing zeros kept.
std::string format_real(double x);

/// Header "rank,lhs,rhs,count,support,confidence,lift"; lhs items joined by ", ".
void write_rules_csv(const std::vector<miner::AssociationRule>& rules, std::ostream& out);
/// Array of rule objects with exact integer counts and round-trip reals.
void write_rules_json(const std::vector<miner::AssociationRule>& rules, std::ostream& out);
std::vector<miner::AssociationRule> read_rules_json(std::istream& in);

/// Writes the table to path; throws keybasket::Error when the file cannot be written.
void emit_rule_table(const std::vector<miner::AssociationRule>& rules, TableFormat format,
                     const std::filesystem::path& path);

std::string csv_field(const std::string& s);

nlohmann::json rule_to_json(const miner::AssociationRule& rule);
miner::AssociationRule rule_from_json(const nlohmann::json& obj);

}  // namespace keybasket::rule_io
