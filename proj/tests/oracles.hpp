#pragma once

// Test-only reference computations. Nothing here calls into the library's
// degree or decoder code.

#include <bit>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace oracle {

/// Counts over all d-subsets of {0..x-1} (marked = {0..y-1}): how many
/// contain exactly one marked element, and how many subsets there are.
struct SubsetCount
{
  std::uint64_t exactly_one = 0;
  std::uint64_t total = 0;
};

inline SubsetCount enumerate_subsets(int x, int y, int d)
{
  SubsetCount c;
  const std::uint32_t marked = (1u << y) - 1u;
  for (std::uint32_t mask = 0; mask < (1u << x); ++mask) {
    if (std::popcount(mask) != d) {
      continue;
    }
    ++c.total;
    if (std::popcount(mask & marked) == 1) {
      ++c.exactly_one;
    }
  }
  return c;
}

/// Smallest d in [1, x] maximizing exactly_one/total, compared exactly.
inline int brute_force_degree(int x, int y)
{
  int best = 1;
  SubsetCount best_c = enumerate_subsets(x, y, 1);
  for (int d = 2; d <= x; ++d) {
    const SubsetCount c = enumerate_subsets(x, y, d);
    if (c.exactly_one * best_c.total > best_c.exactly_one * c.total) {
      best = d;
      best_c = c;
    }
  }
  return best;
}

/// Ids determined by GF(2) elimination given `known` ids and equations over
/// id sets (ids < 64).
inline std::set<int> gf2_recoverable(const std::set<int>& known, const std::vector<std::vector<int>>& equations)
{
  std::vector<std::uint64_t> rows;
  for (const auto& eq : equations) {
    std::uint64_t r = 0;
    for (int id : eq) {
      if (!known.contains(id)) {
        r ^= (std::uint64_t{1} << id);
      }
    }
    if (r != 0) {
      rows.push_back(r);
    }
  }
  // reduced row echelon form
  std::size_t rank = 0;
  for (int col = 0; col < 64 && rank < rows.size(); ++col) {
    const std::uint64_t bit = std::uint64_t{1} << col;
    std::size_t pivot = rank;
    while (pivot < rows.size() && !(rows[pivot] & bit)) {
      ++pivot;
    }
    if (pivot == rows.size()) {
      continue;
    }
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != rank && (rows[i] & bit)) {
        rows[i] ^= rows[rank];
      }
    }
    ++rank;
  }
  std::set<int> out = known;
  for (std::size_t i = 0; i < rank; ++i) {
    if (std::popcount(rows[i]) == 1) {
      out.insert(std::countr_zero(rows[i]));
    }
  }
  return out;
}

} // namespace oracle
