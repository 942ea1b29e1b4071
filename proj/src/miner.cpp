#include "keybasket/miner.hpp"

#include <algorithm>
#include <cmath>

#include "keybasket/error.hpp"
#include "keybasket/miner_kernels.hpp"

namespace keybasket::miner {

std::size_t ItemsetHash::operator()(const Itemset& s) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (auto id : s) {
    h ^= id;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void MiningConfig::validate() const {
  if (!(min_support > 0 && min_support <= 1)) throw DomainError("min_support must lie in (0, 1]");
  if (!(min_confidence > 0 && min_confidence <= 1)) throw DomainError("min_confidence must lie in (0, 1]");
  if (max_rule_len < 2) throw DomainError("max_rule_len must be at least 2");
}

TransactionSet TransactionSet::from_baskets(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& baskets) {
  TransactionSet ts;
  std::vector<std::string> all;
  for (const auto& [_, items] : baskets) all.insert(all.end(), items.begin(), items.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());

  ts.items_ = std::move(all);
  ts.item_ids_.reserve(ts.items_.size());
  for (ItemId i = 0; i < ts.items_.size(); ++i) ts.item_ids_.emplace(ts.items_[i], i);
  ts.postings_.resize(ts.items_.size());

  ts.doc_ids_.reserve(baskets.size());
  ts.transactions_.reserve(baskets.size());
  for (const auto& [doc_id, items] : baskets) {
    Itemset t;
    t.reserve(items.size());
    for (const auto& it : items) t.push_back(ts.item_ids_.at(it));
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    const auto tid = static_cast<std::uint32_t>(ts.transactions_.size());
    for (auto id : t) ts.postings_[id].push_back(tid);
    ts.doc_ids_.push_back(doc_id);
    ts.transactions_.push_back(std::move(t));
  }
  return ts;
}

TransactionSet TransactionSet::from_keyword_lists(const std::vector<keyness::KeywordList>& lists) {
  std::vector<std::pair<std::string, std::vector<std::string>>> baskets;
  baskets.reserve(lists.size());
  for (const auto& kl : lists) baskets.emplace_back(kl.doc_id, kl.keywords);
  return from_baskets(baskets);
}

std::optional<ItemId> TransactionSet::find(const std::string& lemma) const {
  auto it = item_ids_.find(lemma);
  if (it == item_ids_.end()) return std::nullopt;
  return it->second;
}

Count min_count_for(double min_support, std::size_t n_docs) {
  const double n = static_cast<double>(n_docs);
  auto c = static_cast<std::uint64_t>(std::max(0.0, std::ceil(min_support * n)));
  // settle rounding at the boundary against the defining comparison
  while (c > 0 && static_cast<double>(c - 1) / n >= min_support) --c;
  while (static_cast<double>(c) / n < min_support) ++c;
  return static_cast<Count>(std::max<std::uint64_t>(c, 1));
}

namespace {

std::span<const ItemId> row(const std::vector<ItemId>& flat, std::size_t width, std::size_t i) {
  return std::span<const ItemId>(flat).subspan(i * width, width);
}

// Binary search for an itemset in a lexicographically sorted flat table.
bool contains_row(const std::vector<ItemId>& flat, std::size_t width, std::span<const ItemId> key) {
  std::size_t lo = 0, hi = flat.size() / width;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    auto r = row(flat, width, mid);
    if (std::lexicographical_compare(r.begin(), r.end(), key.begin(), key.end()))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo == flat.size() / width) return false;
  auto r = row(flat, width, lo);
  return std::equal(r.begin(), r.end(), key.begin(), key.end());
}

// Joins frequent (k-1)-itemsets sharing a (k-2)-prefix and keeps the
// candidates whose every (k-1)-subset is frequent. Output stays lexicographic.
std::vector<ItemId> apriori_candidates(const std::vector<ItemId>& prev, std::size_t width) {
  std::vector<ItemId> out;
  const std::size_t n = prev.size() / width;
  const std::size_t k = width + 1;
  std::vector<ItemId> cand(k), sub(width);

  std::size_t group = 0;
  while (group < n) {
    std::size_t end = group + 1;
    auto g = row(prev, width, group);
    while (end < n) {
      auto r = row(prev, width, end);
      if (!std::equal(g.begin(), g.end() - 1, r.begin())) break;
      ++end;
    }
    for (std::size_t i = group; i < end; ++i) {
      for (std::size_t j = i + 1; j < end; ++j) {
        auto a = row(prev, width, i);
        std::copy(a.begin(), a.end(), cand.begin());
        cand[width] = row(prev, width, j)[width - 1];

        bool keep = true;
        // dropping either of the last two items yields a generator, already frequent
        for (std::size_t skip = 0; skip + 2 < k && keep; ++skip) {
          std::size_t w = 0;
          for (std::size_t p = 0; p < k; ++p)
            if (p != skip) sub[w++] = cand[p];
          keep = contains_row(prev, width, sub);
        }
        if (keep) out.insert(out.end(), cand.begin(), cand.end());
      }
    }
    group = end;
  }
  return out;
}

}  // namespace

FrequentItemsets frequent_itemsets(const TransactionSet& ts, double min_support, std::size_t max_len,
                                   Counting counting) {
  if (ts.empty()) throw Error("frequent_itemsets: empty transaction set");
  if (!(min_support > 0 && min_support <= 1)) throw DomainError("min_support must lie in (0, 1]");
  if (max_len < 1) throw DomainError("max_len must be at least 1");

  const Count min_count = min_count_for(min_support, ts.n_docs());
  FrequentItemsets result;

  std::vector<ItemId> level;
  for (ItemId id = 0; id < ts.n_items(); ++id) {
    const auto c = static_cast<Count>(ts.postings(id).size());
    if (c >= min_count) {
      level.push_back(id);
      result.emplace(Itemset{id}, c);
    }
  }

  for (std::size_t k = 2; k <= max_len && level.size() / (k - 1) >= 2; ++k) {
    auto cands = apriori_candidates(level, k - 1);
    if (cands.empty()) break;
    auto counts = counting == Counting::parallel ? kernels::count_candidates(ts, cands, k, min_count)
                                                 : kernels::count_candidates_serial(ts, cands, k);
    std::vector<ItemId> next;
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] < min_count) continue;
      auto r = row(cands, k, c);
      next.insert(next.end(), r.begin(), r.end());
      result.emplace(Itemset(r.begin(), r.end()), counts[c]);
    }
    level = std::move(next);
  }
  return result;
}

bool AssociationRule::contains(const std::string& item) const {
  return rhs == item || std::find(lhs.begin(), lhs.end(), item) != lhs.end();
}

RuleMeasures rule_measures(std::uint64_t joint_count, std::uint64_t lhs_count, std::uint64_t rhs_count,
                           std::uint64_t n_docs) {
  if (lhs_count == 0 || rhs_count == 0) throw DomainError("rule_measures: zero antecedent or consequent count");
  if (joint_count > lhs_count || joint_count > rhs_count || lhs_count > n_docs || rhs_count > n_docs)
    throw DomainError("rule_measures: counts violate joint <= lhs, rhs <= n_docs");
  const double joint = static_cast<double>(joint_count);
  const double n = static_cast<double>(n_docs);
  return RuleMeasures{
      joint / n,
      joint / static_cast<double>(lhs_count),
      (joint * n) / (static_cast<double>(lhs_count) * static_cast<double>(rhs_count)),
  };
}

std::vector<AssociationRule> generate_rules(const FrequentItemsets& frequent, const TransactionSet& ts,
                                            const MiningConfig& cfg) {
  cfg.validate();
  std::vector<AssociationRule> rules;
  Itemset lhs;
  for (const auto& [set, count] : frequent) {
    if (set.size() < 2 || set.size() > cfg.max_rule_len) continue;
    for (std::size_t r = 0; r < set.size(); ++r) {
      lhs.clear();
      for (std::size_t p = 0; p < set.size(); ++p)
        if (p != r) lhs.push_back(set[p]);
      auto lhs_it = frequent.find(lhs);
      auto rhs_it = frequent.find(Itemset{set[r]});
      if (lhs_it == frequent.end() || rhs_it == frequent.end())
        throw ConsistencyError("generate_rules: subset of a frequent itemset is missing");

      const auto m = rule_measures(count, lhs_it->second, rhs_it->second, ts.n_docs());
      if (!(m.confidence >= cfg.min_confidence)) continue;

      AssociationRule rule;
      for (auto id : lhs) rule.lhs.push_back(ts.item(id));
      rule.rhs = ts.item(set[r]);
      rule.count = count;
      rule.lhs_count = lhs_it->second;
      rule.rhs_count = rhs_it->second;
      rule.support = m.support;
      rule.confidence = m.confidence;
      rule.lift = m.lift;
      rules.push_back(std::move(rule));
    }
  }
  return rules;
}

std::vector<AssociationRule> mine_rules(const TransactionSet& ts, const MiningConfig& cfg, Counting counting) {
  cfg.validate();
  auto frequent = frequent_itemsets(ts, cfg.min_support, cfg.max_rule_len, counting);
  return sort_rules(generate_rules(frequent, ts, cfg));
}

RulePredicate contains_item(std::string lemma) {
  return [lemma = std::move(lemma)](const AssociationRule& r) { return r.contains(lemma); };
}
RulePredicate lift_at_least(double x) {
  return [x](const AssociationRule& r) { return r.lift >= x; };
}
RulePredicate support_at_least(double x) {
  return [x](const AssociationRule& r) { return r.support >= x; };
}
RulePredicate count_at_least(std::uint64_t x) {
  return [x](const AssociationRule& r) { return r.count >= x; };
}

std::vector<AssociationRule> filter_rules(const std::vector<AssociationRule>& rules, const RulePredicate& pred) {
  std::vector<AssociationRule> out;
  std::copy_if(rules.begin(), rules.end(), std::back_inserter(out), pred);
  return out;
}

std::string join_items(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

bool rule_order(const AssociationRule& a, const AssociationRule& b) {
  if (a.lift != b.lift) return a.lift > b.lift;
  if (a.support != b.support) return a.support > b.support;
  if (a.count != b.count) return a.count > b.count;
  const auto la = join_items(a.lhs, "+");
  const auto lb = join_items(b.lhs, "+");
  if (la != lb) return la < lb;
  return a.rhs < b.rhs;
}

std::vector<AssociationRule> sort_rules(std::vector<AssociationRule> rules) {
  std::sort(rules.begin(), rules.end(), rule_order);
  return rules;
}

std::pair<std::set<std::string>, std::set<std::string>> unique_items(const std::vector<AssociationRule>& a,
                                                                     const std::vector<AssociationRule>& b) {
  auto items_of = [](const std::vector<AssociationRule>& rules) {
    std::set<std::string> s;
    for (const auto& r : rules) {
      s.insert(r.lhs.begin(), r.lhs.end());
      s.insert(r.rhs);
    }
    return s;
  };
  const auto sa = items_of(a);
  const auto sb = items_of(b);
  std::set<std::string> only_a, only_b;
  std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::inserter(only_a, only_a.end()));
  std::set_difference(sb.begin(), sb.end(), sa.begin(), sa.end(), std::inserter(only_b, only_b.end()));
  return {only_a, only_b};
}

}  // namespace keybasket::miner
