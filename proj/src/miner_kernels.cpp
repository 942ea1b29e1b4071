#include "keybasket/miner_kernels.hpp"

#include <algorithm>

namespace keybasket::miner::kernels {

namespace {

// Galloping intersection, used when one side is much longer.
constexpr std::size_t kGallopRatio = 16;

void intersect_into(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                    std::vector<std::uint32_t>& out) {
  out.clear();
  if (a.size() > b.size()) std::swap(a, b);
  if (a.empty()) return;
  if (b.size() >= kGallopRatio * a.size()) {
    auto lo = b.begin();
    for (auto x : a) {
      lo = std::lower_bound(lo, b.end(), x);
      if (lo == b.end()) break;
      if (*lo == x) out.push_back(x);
    }
    return;
  }
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      out.push_back(*i);
      ++i;
      ++j;
    }
  }
}

}  // namespace

std::vector<std::uint32_t> intersect(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  std::vector<std::uint32_t> out;
  intersect_into(a, b, out);
  return out;
}

std::vector<Count> count_candidates(const TransactionSet& ts, std::span<const ItemId> items, std::size_t width,
                                    Count min_count) {
  if (width == 0) return {};
  const auto n = static_cast<std::int64_t>(items.size() / width);
  std::vector<Count> counts(static_cast<std::size_t>(n), 0);

#pragma omp parallel
  {
    std::vector<std::uint32_t> acc, scratch;
    std::vector<std::span<const std::uint32_t>> lists;
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t c = 0; c < n; ++c) {
      const auto cand = items.subspan(static_cast<std::size_t>(c) * width, width);
      lists.clear();
      for (auto id : cand) lists.push_back(ts.postings(id));
      if (width == 1) {
        counts[c] = static_cast<Count>(lists[0].size());
        continue;
      }
      std::sort(lists.begin(), lists.end(), [](auto x, auto y) { return x.size() < y.size(); });
      if (lists[0].size() < min_count) {
        counts[c] = static_cast<Count>(lists[0].size());
        continue;
      }
      intersect_into(lists[0], lists[1], acc);
      for (std::size_t k = 2; k < lists.size() && acc.size() >= min_count; ++k) {
        intersect_into(acc, lists[k], scratch);
        acc.swap(scratch);
      }
      counts[c] = static_cast<Count>(acc.size());
    }
  }
  return counts;
}

std::vector<Count> count_candidates_serial(const TransactionSet& ts, std::span<const ItemId> items,
                                           std::size_t width) {
  if (width == 0) return {};
  const std::size_t n = items.size() / width;
  std::vector<Count> counts(n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    const auto cand = items.subspan(c * width, width);
    for (const auto& t : ts.transactions())
      if (std::includes(t.begin(), t.end(), cand.begin(), cand.end())) ++counts[c];
  }
  return counts;
}

}  // namespace keybasket::miner::kernels
