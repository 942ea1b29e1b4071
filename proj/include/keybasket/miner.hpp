#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "keybasket/keyness.hpp"

namespace keybasket::miner {

using ItemId = std::uint32_t;
using Count = std::uint32_t;
/// Ascending item ids; ids follow lexicographic lemma order.
using Itemset = std::vector<ItemId>;

struct ItemsetHash {
  std::size_t operator()(const Itemset& s) const noexcept;
};

using FrequentItemsets = std::unordered_map<Itemset, Count, ItemsetHash>;

struct MiningConfig {
  double min_support = 0.003;
  double min_confidence = 0.4;
  std::size_t max_rule_len = 4;  // antecedent holds at most max_rule_len - 1 items

  void validate() const;
};

/// Immutable snapshot of the baskets together with the inverted item index.
class TransactionSet {
 public:
  TransactionSet() = default;

  /// Each basket is (doc_id, items); duplicate items inside a basket collapse.
  static TransactionSet from_baskets(const std::vector<std::pair<std::string, std::vector<std::string>>>& baskets);
  static TransactionSet from_keyword_lists(const std::vector<keyness::KeywordList>& lists);

  std::size_t n_docs() const noexcept { return transactions_.size(); }
  bool empty() const noexcept { return transactions_.empty(); }
  std::size_t n_items() const noexcept { return items_.size(); }

  const std::string& item(ItemId id) const { return items_.at(id); }
  const std::vector<std::string>& items() const noexcept { return items_; }
  std::optional<ItemId> find(const std::string& lemma) const;

  const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }
  const std::vector<Itemset>& transactions() const noexcept { return transactions_; }
  /// Sorted transaction indices containing the item.
  std::span<const std::uint32_t> postings(ItemId id) const { return postings_.at(id); }

 private:
  std::vector<std::string> items_;
  std::unordered_map<std::string, ItemId> item_ids_;
  std::vector<std::string> doc_ids_;
  std::vector<Itemset> transactions_;
  std::vector<std::vector<std::uint32_t>> postings_;
};

/// Smallest transaction count c with c / n_docs >= min_support.
Count min_count_for(double min_support, std::size_t n_docs);

enum class Counting {
  parallel,  // posting-list intersection, OpenMP over candidates
  serial,    // reference scan over transactions
};

/// Level-wise Apriori. Every itemset of size 1..max_len whose support reaches
/// min_support, mapped to its exact transaction count.
FrequentItemsets frequent_itemsets(const TransactionSet& ts, double min_support, std::size_t max_len,
                                   Counting counting = Counting::parallel);

struct AssociationRule {
  std::vector<std::string> lhs;  // lexicographic
  std::string rhs;
  Count count = 0;      // transactions containing lhs and rhs
  Count lhs_count = 0;  // transactions containing lhs
  Count rhs_count = 0;  // transactions containing rhs
  double support = 0;
  double confidence = 0;
  double lift = 0;

  bool contains(const std::string& item) const;
  bool operator==(const AssociationRule&) const = default;
};

struct RuleMeasures {
  double support;
  double confidence;
  double lift;
};

RuleMeasures rule_measures(std::uint64_t joint_count, std::uint64_t lhs_count, std::uint64_t rhs_count,
                           std::uint64_t n_docs);

/// One rule (S \ {r}) -> r per frequent S (|S| >= 2) and r in S meeting min_confidence.
std::vector<AssociationRule> generate_rules(const FrequentItemsets& frequent, const TransactionSet& ts,
                                            const MiningConfig& cfg);

/// frequent_itemsets followed by generate_rules, sorted by sort_rules.
std::vector<AssociationRule> mine_rules(const TransactionSet& ts, const MiningConfig& cfg,
                                        Counting counting = Counting::parallel);

using RulePredicate = std::function<bool(const AssociationRule&)>;

RulePredicate contains_item(std::string lemma);
RulePredicate lift_at_least(double x);
RulePredicate support_at_least(double x);
RulePredicate count_at_least(std::uint64_t x);

std::vector<AssociationRule> filter_rules(const std::vector<AssociationRule>& rules, const RulePredicate& pred);

/// Total order: lift desc, support desc, count desc, then (lhs joined by '+', rhs) ascending.
bool rule_order(const AssociationRule& a, const AssociationRule& b);
std::vector<AssociationRule> sort_rules(std::vector<AssociationRule> rules);

/// Items occurring in some rule of one list and in no rule of the other.
std::pair<std::set<std::string>, std::set<std::string>> unique_items(const std::vector<AssociationRule>& a,
                                                                     const std::vector<AssociationRule>& b);

std::string join_items(const std::vector<std::string>& items, std::string_view sep);

}  // namespace keybasket::miner
