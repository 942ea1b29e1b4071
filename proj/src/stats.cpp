#include "keybasket/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "keybasket/error.hpp"

namespace keybasket::stats {

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error("quantile of an empty sample");
  const double pos = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxplotSummary boxplot_summary(std::span<const double> values) {
  if (values.empty()) throw Error("boxplot_summary: empty input");
  std::vector<double> v(values.begin(), values.end());
  if (std::any_of(v.begin(), v.end(), [](double x) { return std::isnan(x); }))
    throw DomainError("boxplot_summary: NaN in input");
  std::sort(v.begin(), v.end());

  BoxplotSummary b;
  b.n = v.size();
  b.min = v.front();
  b.max = v.back();
  b.q1 = quantile_sorted(v, 0.25);
  b.median = quantile_sorted(v, 0.5);
  b.q3 = quantile_sorted(v, 0.75);
  b.iqr = b.q3 - b.q1;
  b.upper_fence = b.q3 + 1.5 * b.iqr;
  b.lower_fence = b.q1 - 1.5 * b.iqr;
  for (double x : v)
    if (x > b.upper_fence || x < b.lower_fence) b.outliers.push_back(x);
  return b;
}

double h_point(std::span<const double> freqs) {
  if (freqs.empty()) throw Error("h_point: empty frequency list");
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    if (!(freqs[i] >= 1)) throw DomainError("h_point: frequencies must be >= 1");
    if (i > 0 && freqs[i] > freqs[i - 1]) throw DomainError("h_point: frequencies must be sorted descending");
  }
  for (std::size_t idx = 0; idx < freqs.size(); ++idx) {
    const double r = static_cast<double>(idx + 1);
    const double f = freqs[idx];
    if (f == r) return r;
    if (f < r) {
      // f(1) >= 1 and f(1) != 1 here, so idx >= 1 and f(i) > i
      const double i = r - 1.0, j = r;
      const double fi = freqs[idx - 1], fj = f;
      return (fi * j - fj * i) / (j - i + fi - fj);
    }
  }
  return static_cast<double>(freqs.size());
}

ThematicConcentration thematic_concentration(const corpus::FrequencyProfile& profile,
                                             const WordPredicate& autosemantic) {
  if (profile.counts.empty()) throw Error("thematic_concentration: empty profile");
  const auto ranked = profile.ranked();
  std::vector<double> freqs;
  freqs.reserve(ranked.size());
  for (const auto& [_, f] : ranked) freqs.push_back(static_cast<double>(f));

  ThematicConcentration out;
  out.h = h_point(freqs);
  if (out.h <= 1.0) return out;

  const double f1 = freqs.front();
  double sum = 0;
  for (std::size_t idx = 0; idx < ranked.size(); ++idx) {
    const double r = static_cast<double>(idx + 1);
    if (r >= out.h) break;
    if (!autosemantic(ranked[idx].first)) continue;
    sum += 2.0 * (out.h - r) * freqs[idx];
    out.contributing.push_back({ranked[idx].first, idx + 1, ranked[idx].second});
  }
  out.tc = std::min(1.0, sum / (out.h * (out.h - 1.0) * f1));
  return out;
}

WordPredicate tag_prefix_predicate(const corpus::FrequencyProfile& profile, std::vector<std::string> prefixes) {
  return [&profile, prefixes = std::move(prefixes)](const std::string& lemma) {
    auto it = profile.pos.find(lemma);
    if (it == profile.pos.end()) return false;
    return std::any_of(prefixes.begin(), prefixes.end(),
                       [&](const std::string& p) { return it->second.rfind(p, 0) == 0; });
  };
}

WordPredicate stoplist_predicate(std::vector<std::string> function_words) {
  std::unordered_set<std::string> stop(function_words.begin(), function_words.end());
  return [stop = std::move(stop)](const std::string& lemma) { return !stop.contains(lemma); };
}

std::string to_string(RankSumMethod m) {
  return m == RankSumMethod::exact ? "exact" : "normal-approximation";
}

namespace {

// Number of arrangements of n1 + n2 distinct ranks giving each U in [0, n1*n2].
std::vector<std::uint64_t> u_distribution(std::size_t n1, std::size_t n2) {
  // table[a][b] holds the distribution for sample sizes (a, b)
  std::vector<std::vector<std::vector<std::uint64_t>>> table(n1 + 1, std::vector<std::vector<std::uint64_t>>(n2 + 1));
  for (std::size_t a = 0; a <= n1; ++a) {
    for (std::size_t b = 0; b <= n2; ++b) {
      auto& d = table[a][b];
      d.assign(a * b + 1, 0);
      if (a == 0 || b == 0) {
        d[0] = 1;
        continue;
      }
      // the largest rank belongs to the first sample (adds b to U) or to the second
      const auto& with_first = table[a - 1][b];
      const auto& with_second = table[a][b - 1];
      for (std::size_t u = 0; u < with_first.size(); ++u) d[u + b] += with_first[u];
      for (std::size_t u = 0; u < with_second.size(); ++u) d[u] += with_second[u];
    }
  }
  return table[n1][n2];
}

}  // namespace

RankSumResult wilcoxon_rank_sum(std::span<const double> xs, std::span<const double> ys) {
  if (xs.empty() || ys.empty()) throw Error("wilcoxon_rank_sum: empty sample");
  const std::size_t n1 = xs.size(), n2 = ys.size(), n = n1 + n2;

  std::vector<std::pair<double, bool>> pooled;  // (value, from first sample)
  pooled.reserve(n);
  for (double x : xs) pooled.emplace_back(x, true);
  for (double y : ys) pooled.emplace_back(y, false);
  if (std::any_of(pooled.begin(), pooled.end(), [](const auto& p) { return std::isnan(p.first); }))
    throw DomainError("wilcoxon_rank_sum: NaN in input");
  std::sort(pooled.begin(), pooled.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  double rank_sum_first = 0;
  double tie_term = 0;
  bool ties = false;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && pooled[j].first == pooled[i].first) ++j;
    const double t = static_cast<double>(j - i);
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k)
      if (pooled[k].second) rank_sum_first += midrank;
    if (t > 1) {
      ties = true;
      tie_term += t * t * t - t;
    }
    i = j;
  }

  RankSumResult res;
  res.n1 = n1;
  res.n2 = n2;
  res.u = rank_sum_first - static_cast<double>(n1) * static_cast<double>(n1 + 1) / 2.0;

  if (n <= kExactRankSumLimit && !ties) {
    res.method = RankSumMethod::exact;
    const auto dist = u_distribution(n1, n2);
    const auto u = static_cast<std::size_t>(res.u);
    const std::uint64_t total = std::accumulate(dist.begin(), dist.end(), std::uint64_t{0});
    const std::uint64_t lower = std::accumulate(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(u) + 1,
                                                std::uint64_t{0});
    const std::uint64_t upper = std::accumulate(dist.begin() + static_cast<std::ptrdiff_t>(u), dist.end(),
                                                std::uint64_t{0});
    res.p_two_sided = std::min(1.0, 2.0 * static_cast<double>(std::min(lower, upper)) / static_cast<double>(total));
    return res;
  }

  res.method = RankSumMethod::normal_approximation;
  const double a = static_cast<double>(n1), b = static_cast<double>(n2), nn = static_cast<double>(n);
  const double mu = a * b / 2.0;
  const double var = a * b / 12.0 * ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
  if (var <= 0) {
    res.p_two_sided = 1.0;
    return res;
  }
  const double z = std::max(0.0, std::abs(res.u - mu) - 0.5) / std::sqrt(var);
  res.p_two_sided = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return res;
}

}  // namespace keybasket::stats
