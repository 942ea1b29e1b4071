#include <doctest.h>

#include <random>

#include "keybasket/miner_kernels.hpp"
#include "synth.hpp"

using namespace keybasket::miner;

TEST_CASE("intersect") {
  std::vector<std::uint32_t> a{1, 3, 5, 7, 9}, b{2, 3, 4, 9, 11}, none;
  CHECK(kernels::intersect(a, b) == std::vector<std::uint32_t>{3, 9});
  CHECK(kernels::intersect(a, none).empty());
  CHECK(kernels::intersect(a, a) == a);
  std::vector<std::uint32_t> big;
  for (std::uint32_t i = 0; i < 10000; i += 3) big.push_back(i);
  std::vector<std::uint32_t> small{0, 4, 9, 9999, 20000};
  CHECK(kernels::intersect(small, big) == std::vector<std::uint32_t>{0, 9, 9999});
  CHECK(kernels::intersect(big, small) == std::vector<std::uint32_t>{0, 9, 9999});
}

TEST_CASE("parallel and serial candidate counts agree") {
  std::mt19937_64 rng(41);
  for (int iter = 0; iter < 50; ++iter) {
    auto raw = synth::random_baskets(rng, 12, 200);
    std::vector<std::pair<std::string, std::vector<std::string>>> b;
    for (std::size_t i = 0; i < raw.size(); ++i) b.emplace_back(std::to_string(i), raw[i]);
    auto ts = TransactionSet::from_baskets(b);
    if (ts.n_items() < 3) continue;
    for (std::size_t width = 1; width <= 3; ++width) {
      std::vector<ItemId> flat;
      std::uniform_int_distribution<ItemId> pick(0, static_cast<ItemId>(ts.n_items() - 1));
      for (int c = 0; c < 40; ++c) {
        std::set<ItemId> s;
        while (s.size() < width) s.insert(pick(rng));
        flat.insert(flat.end(), s.begin(), s.end());
      }
      auto exact = kernels::count_candidates_serial(ts, flat, width);
      CHECK(kernels::count_candidates(ts, flat, width) == exact);
      const Count threshold = 1 + static_cast<Count>(rng() % 20);
      auto pruned = kernels::count_candidates(ts, flat, width, threshold);
      for (std::size_t c = 0; c < exact.size(); ++c) {
        if (exact[c] >= threshold)
          CHECK(pruned[c] == exact[c]);
        else
          CHECK(pruned[c] < threshold);
      }
    }
  }
}

TEST_CASE("parallel and serial mining agree on a larger set") {
  auto ts = TransactionSet::from_baskets(synth::scale_baskets(1500, 9));
  auto par = frequent_itemsets(ts, 0.02, 4, Counting::parallel);
  auto ser = frequent_itemsets(ts, 0.02, 4, Counting::serial);
  CHECK(par.size() > 100);
  CHECK(par == ser);
  CHECK(mine_rules(ts, MiningConfig{0.02, 0.4, 4}, Counting::parallel) ==
        mine_rules(ts, MiningConfig{0.02, 0.4, 4}, Counting::serial));
}
