#include <doctest.h>

#include <algorithm>
#include <random>

#include "keybasket/error.hpp"
#include "keybasket/stats.hpp"
#include "oracles.hpp"

using namespace keybasket;
using namespace keybasket::stats;

TEST_CASE("quantile_sorted interpolates") {
  std::vector<double> v{1, 2, 3, 4};
  CHECK(quantile_sorted(v, 0.0) == 1.0);
  CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
  CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile_sorted(v, 1.0) == 4.0);
  std::vector<double> one{7};
  CHECK(quantile_sorted(one, 0.75) == 7.0);
}

TEST_CASE("boxplot with one high outlier") {
  std::vector<double> v{100, 1, 2, 3, 4, 5, 6, 7, 8};
  auto b = boxplot_summary(v);
  CHECK(b.n == 9);
  CHECK(b.q1 == 3.0);
  CHECK(b.median == 5.0);
  CHECK(b.q3 == 7.0);
  CHECK(b.iqr == 4.0);
  CHECK(b.upper_fence == 13.0);
  CHECK(b.lower_fence == -3.0);
  CHECK(b.outliers == std::vector<double>{100});
  CHECK(b.min == 1.0);
  CHECK(b.max == 100.0);
}

TEST_CASE("boxplot edge cases") {
  CHECK_THROWS_AS(boxplot_summary(std::vector<double>{}), Error);
  auto same = boxplot_summary(std::vector<double>{2, 2, 2});
  CHECK(same.iqr == 0.0);
  CHECK(same.outliers.empty());
  auto single = boxplot_summary(std::vector<double>{5});
  CHECK(single.q1 == 5.0);
  CHECK(single.q3 == 5.0);
}

TEST_CASE("property: boxplot ordering and outlier definition") {
  std::mt19937_64 rng(13);
  std::lognormal_distribution<double> d(0.0, 1.0);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<double> v(1 + rng() % 60);
    for (auto& x : v) x = d(rng);
    auto b = boxplot_summary(v);
    CHECK(b.min <= b.q1);
    CHECK(b.q1 <= b.median);
    CHECK(b.median <= b.q3);
    CHECK(b.q3 <= b.max);
    std::size_t beyond = 0;
    for (double x : v)
      if (x > b.upper_fence || x < b.lower_fence) ++beyond;
    CHECK(b.outliers.size() == beyond);
    CHECK(std::is_sorted(b.outliers.begin(), b.outliers.end()));
  }
}

TEST_CASE("h_point") {
  CHECK(h_point(std::vector<double>{10, 7, 5, 4}) == 4.0);
  CHECK(h_point(std::vector<double>{10, 6, 2}) == doctest::Approx(2.8));
  CHECK(h_point(std::vector<double>{1}) == 1.0);
  CHECK(h_point(std::vector<double>{50, 40}) == 2.0);
  CHECK(h_point(std::vector<double>{20, 12, 8, 5, 3, 2, 1}) == doctest::Approx(13.0 / 3.0));
  CHECK_THROWS_AS(h_point(std::vector<double>{}), Error);
  CHECK_THROWS_AS(h_point(std::vector<double>{3, 5}), DomainError);
  CHECK_THROWS_AS(h_point(std::vector<double>{3, 0.5}), DomainError);
}

TEST_CASE("property: h_point lies within the list and at the crossing") {
  std::mt19937_64 rng(29);
  for (int iter = 0; iter < 1000; ++iter) {
    std::vector<double> f(1 + rng() % 40);
    for (auto& x : f) x = static_cast<double>(1 + rng() % 100);
    std::sort(f.rbegin(), f.rend());
    const double h = h_point(f);
    CHECK(h >= 1.0);
    CHECK(h <= static_cast<double>(f.size()));
    const auto floor_r = static_cast<std::size_t>(std::floor(h));
    if (floor_r >= 1 && floor_r <= f.size()) CHECK(f[floor_r - 1] >= static_cast<double>(floor_r) - 1e-9);
  }
}

namespace {

corpus::FrequencyProfile tc_profile() {
  corpus::FrequencyProfile p;
  for (auto [w, c, t] : std::initializer_list<std::tuple<const char*, int, const char*>>{
           {"the", 20, "F"}, {"cake", 12, "N"}, {"of", 8, "F"}, {"egg", 5, "N"}, {"and", 3, "F"}, {"sugar", 2, "N"},
           {"flour", 1, "N"}}) {
    p.counts[w] = static_cast<std::uint64_t>(c);
    p.pos[w] = t;
    p.total_tokens += static_cast<std::uint64_t>(c);
  }
  return p;
}

}  // namespace

TEST_CASE("thematic concentration worked example") {
  auto p = tc_profile();
  auto by_stoplist = thematic_concentration(p, stoplist_predicate({"the", "of", "and"}));
  CHECK(by_stoplist.h == doctest::Approx(13.0 / 3.0));
  CHECK(by_stoplist.tc == doctest::Approx(267.0 / 1300.0).epsilon(1e-12));
  REQUIRE(by_stoplist.contributing.size() == 2);
  CHECK(by_stoplist.contributing[0].lemma == "cake");
  CHECK(by_stoplist.contributing[0].rank == 2);
  CHECK(by_stoplist.contributing[1].lemma == "egg");

  auto by_tags = thematic_concentration(p, tag_prefix_predicate(p, {"N"}));
  CHECK(by_tags.tc == by_stoplist.tc);
}

TEST_CASE("thematic concentration degenerate cases") {
  corpus::FrequencyProfile single;
  single.counts["x"] = 1;
  single.total_tokens = 1;
  auto r = thematic_concentration(single, [](const std::string&) { return true; });
  CHECK(r.h == 1.0);
  CHECK(r.tc == 0.0);
  auto none = thematic_concentration(tc_profile(), [](const std::string&) { return false; });
  CHECK(none.tc == 0.0);
  CHECK_THROWS_AS(thematic_concentration(corpus::FrequencyProfile{}, [](const std::string&) { return true; }), Error);
}

TEST_CASE("property: thematic concentration stays in [0, 1]") {
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 1000; ++iter) {
    corpus::FrequencyProfile p;
    const auto n = 1 + rng() % 60;
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = 1 + rng() % (rng() % 2 ? 5 : 200);
      const std::string w = "w" + std::to_string(i);
      p.counts[w] = c;
      p.pos[w] = (rng() % 2) ? "N" : "F";
      p.total_tokens += c;
    }
    auto all = thematic_concentration(p, [](const std::string&) { return true; });
    auto some = thematic_concentration(p, tag_prefix_predicate(p, {"N"}));
    CHECK(all.tc >= 0.0);
    CHECK(all.tc <= 1.0);
    CHECK(some.tc >= 0.0);
    CHECK(some.tc <= all.tc + 1e-12);
    for (const auto& c : some.contributing) CHECK(static_cast<double>(c.rank) < some.h);
  }
}

TEST_CASE("rank-sum test small exact case") {
  std::vector<double> a{1, 2, 3}, b{10, 20, 30};
  auto r = wilcoxon_rank_sum(a, b);
  CHECK(r.u == 0.0);
  CHECK(r.method == RankSumMethod::exact);
  CHECK(r.p_two_sided == doctest::Approx(0.1));
  auto flipped = wilcoxon_rank_sum(b, a);
  CHECK(flipped.u == 9.0);
  CHECK(flipped.p_two_sided == doctest::Approx(0.1));
  CHECK(to_string(RankSumMethod::exact) == "exact");
  CHECK(to_string(RankSumMethod::normal_approximation) == "normal-approximation");
}

TEST_CASE("rank-sum test: identical samples give p = 1") {
  std::vector<double> a{1.5, 2.5, 2.5, 7, 9};
  auto r = wilcoxon_rank_sum(a, a);
  CHECK(r.p_two_sided == 1.0);
  CHECK(r.u == doctest::Approx(12.5));
  std::vector<double> c{4, 4, 4};
  CHECK(wilcoxon_rank_sum(c, c).p_two_sided == 1.0);
}

TEST_CASE("rank-sum test normal approximation on large samples") {
  std::vector<double> a, b;
  for (int i = 0; i < 30; ++i) {
    a.push_back(i);
    b.push_back(i + 100);
  }
  auto r = wilcoxon_rank_sum(a, b);
  CHECK(r.method == RankSumMethod::normal_approximation);
  CHECK(r.u == 0.0);
  CHECK(r.p_two_sided < 1e-9);
  CHECK_THROWS_AS(wilcoxon_rank_sum(a, std::vector<double>{}), Error);
}

TEST_CASE("rank-sum exact p equals the permutation oracle") {
  std::mt19937_64 rng(37);
  for (std::size_t n1 = 1; n1 <= 5; ++n1) {
    for (std::size_t n2 = 1; n2 <= 5; ++n2) {
      std::vector<double> pool(n1 + n2);
      for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<double>(i) * 1.5;
      std::shuffle(pool.begin(), pool.end(), rng);
      std::vector<double> x(pool.begin(), pool.begin() + static_cast<long>(n1));
      std::vector<double> y(pool.begin() + static_cast<long>(n1), pool.end());
      auto r = wilcoxon_rank_sum(x, y);
      REQUIRE(r.method == RankSumMethod::exact);
      CHECK(r.p_two_sided == doctest::Approx(oracle::rank_sum_permutation_p(n1, n2, r.u)).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: rank-sum symmetry") {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> d(0, 1);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<double> x(1 + rng() % 25), y(1 + rng() % 25);
    for (auto& v : x) v = std::round(d(rng) * 4);
    for (auto& v : y) v = std::round(d(rng) * 4 + 1);
    auto a = wilcoxon_rank_sum(x, y), b = wilcoxon_rank_sum(y, x);
    CHECK(a.u + b.u == doctest::Approx(static_cast<double>(x.size() * y.size())));
    CHECK(a.p_two_sided == doctest::Approx(b.p_two_sided).epsilon(1e-12));
    CHECK(a.p_two_sided >= 0.0);
    CHECK(a.p_two_sided <= 1.0);
  }
}
