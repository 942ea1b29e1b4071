#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "keybasket/corpus.hpp"

namespace keybasket::stats {

struct BoxplotSummary {
  std::size_t n = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  double iqr = 0;
  double upper_fence = 0;  // q3 + 1.5 iqr
  double lower_fence = 0;  // q1 - 1.5 iqr
  std::vector<double> outliers;  // ascending, strictly beyond a fence
};

/// Quantile by linear interpolation at position (n - 1) * q of the sorted data.
double quantile_sorted(std::span<const double> sorted, double q);

BoxplotSummary boxplot_summary(std::span<const double> values);

/// Rank r where f(r) = r, else the interpolated crossing of f(r) and r.
/// freqs must be non-empty, non-increasing and >= 1.
double h_point(std::span<const double> freqs);

struct RankedLemma {
  std::string lemma;
  std::size_t rank;
  std::uint64_t freq;
};

struct ThematicConcentration {
  double h = 0;
  double tc = 0;
  std::vector<RankedLemma> contributing;
};

using WordPredicate = std::function<bool(const std::string&)>;

ThematicConcentration thematic_concentration(const corpus::FrequencyProfile& profile,
                                             const WordPredicate& autosemantic);

/// Content word iff the lemma's tag starts with one of the prefixes. The
/// predicate refers to profile, which must outlive it.
WordPredicate tag_prefix_predicate(const corpus::FrequencyProfile& profile, std::vector<std::string> prefixes);
/// Content word iff the lemma is not on the stoplist.
WordPredicate stoplist_predicate(std::vector<std::string> function_words);

enum class RankSumMethod { exact, normal_approximation };

struct RankSumResult {
  double u = 0;  // Mann-Whitney U of the first sample
  double p_two_sided = 1;
  std::size_t n1 = 0, n2 = 0;
  RankSumMethod method = RankSumMethod::exact;
};

std::string to_string(RankSumMethod m);

/// Midranks for ties. Exact null distribution when n1 + n2 <= 16 and the data
/// are tie-free; otherwise normal approximation with tie and continuity correction.
RankSumResult wilcoxon_rank_sum(std::span<const double> xs, std::span<const double> ys);

/// Largest combined sample size handled by the exact method.
inline constexpr std::size_t kExactRankSumLimit = 16;

}  // namespace keybasket::stats
