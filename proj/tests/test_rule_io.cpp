#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "keybasket/error.hpp"
#include "keybasket/rule_io.hpp"

using namespace keybasket;
using namespace keybasket::rule_io;
using keybasket::miner::AssociationRule;

namespace {

AssociationRule worked_rule() {
  AssociationRule r;
  r.lhs = {"egg", "flour", "sugar"};
  r.rhs = "cake";
  r.count = 110;
  r.lhs_count = 259;
  r.rhs_count = 568;
  auto m = miner::rule_measures(110, 259, 568, 12110);
  r.support = m.support;
  r.confidence = m.confidence;
  r.lift = m.lift;
  return r;
}

}  // namespace

TEST_CASE("format_real keeps six significant digits") {
  CHECK(format_real(0.009083402146985962) == "0.00908340");
  CHECK(format_real(0.4247104247104247) == "0.424710");
  CHECK(format_real(9.055005709935287) == "9.05501");
  CHECK(format_real(1.0) == "1.00000");
  CHECK(format_real(123456.7) == "123457.");
}

TEST_CASE("csv_field quotes only when needed") {
  CHECK(csv_field("egg") == "egg");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"x\"") == "\"say \"\"x\"\"\"");
}

TEST_CASE("rules CSV layout") {
  std::ostringstream out;
  write_rules_csv({worked_rule()}, out);
  CHECK(out.str() ==
        "rank,lhs,rhs,count,support,confidence,lift\n"
        "1,\"egg, flour, sugar\",cake,110,0.00908340,0.424710,9.05501\n");
  std::ostringstream empty;
  write_rules_csv({}, empty);
  CHECK(empty.str() == "rank,lhs,rhs,count,support,confidence,lift\n");
}

TEST_CASE("rules JSON round trip is exact") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<AssociationRule> rules{worked_rule()};
  for (int i = 0; i < 50; ++i) {
    AssociationRule r;
    r.lhs = {"a" + std::to_string(i), "ž" + std::to_string(i)};
    r.rhs = "x,\"y\"";
    r.count = static_cast<miner::Count>(rng() % 1000);
    r.lhs_count = r.count + 3;
    r.rhs_count = r.count + 5;
    r.support = u(rng);
    r.confidence = u(rng);
    r.lift = 1.0 / (u(rng) + 1e-9);
    rules.push_back(r);
  }
  std::stringstream ss;
  write_rules_json(rules, ss);
  CHECK(read_rules_json(ss) == rules);
}

TEST_CASE("read_rules_json rejects malformed input") {
  std::istringstream bad("[{\"lhs\": [\"a\"]}]");
  CHECK_THROWS_AS(read_rules_json(bad), Error);
  std::istringstream garbage("not json");
  CHECK_THROWS_AS(read_rules_json(garbage), Error);
}

TEST_CASE("emit_rule_table writes both formats") {
  auto dir = std::filesystem::temp_directory_path() / "keybasket_rule_io_test";
  std::filesystem::create_directories(dir);
  emit_rule_table({worked_rule()}, TableFormat::csv, dir / "r.csv");
  emit_rule_table({worked_rule()}, TableFormat::json, dir / "r.json");
  std::ifstream j(dir / "r.json");
  CHECK(read_rules_json(j) == std::vector<AssociationRule>{worked_rule()});
  std::ifstream c(dir / "r.csv");
  std::string header;
  std::getline(c, header);
  CHECK(header == "rank,lhs,rhs,count,support,confidence,lift");
  CHECK_THROWS_AS(emit_rule_table({}, TableFormat::csv, dir / "missing" / "r.csv"), Error);
  std::filesystem::remove_all(dir);
}
