#pragma once

// Support counting kernels behind frequent_itemsets. Candidates are stored flat:
// candidate c occupies items[c * width, (c + 1) * width), ascending ids.

#include <cstdint>
#include <span>
#include <vector>

#include "keybasket/miner.hpp"

namespace keybasket::miner::kernels {

/// OpenMP kernel: intersects the posting lists of each candidate's items.
/// Counts below min_count may be reported as any value below min_count
/// (the intersection stops early once the threshold is out of reach).
std::vector<Count> count_candidates(const TransactionSet& ts, std::span<const ItemId> items, std::size_t width,
                                    Count min_count = 0);

/// Serial reference: scans every transaction for every candidate. Exact counts.
std::vector<Count> count_candidates_serial(const TransactionSet& ts, std::span<const ItemId> items,
                                           std::size_t width);

/// Intersection of two ascending sequences.
std::vector<std::uint32_t> intersect(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

}  // namespace keybasket::miner::kernels
