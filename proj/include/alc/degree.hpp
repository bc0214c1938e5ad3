#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace alc {

using Rng = std::mt19937_64;

/// Exact binomial coefficient C(n, k); 0 when k < 0 or k > n. Valid for n <= 64.
std::uint64_t binomial(std::int64_t n, std::int64_t k);

/// Probability that a uniformly drawn d-subset of x symbols contains exactly
/// one of y marked symbols: y * C(x-y, d-1) / C(x, d).
/// Requires x > y > 0 and 1 <= d <= x; throws std::invalid_argument otherwise.
double recovery_probability(std::int64_t x, std::int64_t y, std::int64_t d);

/// Same quantity as an exact fraction {numerator, denominator}.
struct Fraction
{
  std::uint64_t num = 0;
  std::uint64_t den = 1;
};
Fraction recovery_fraction(std::int64_t x, std::int64_t y, std::int64_t d);

/// Degree maximizing recovery_probability over d in [1, x]. Ties go to the
/// smallest degree. Comparison is exact (integer cross-multiplication).
std::int64_t degree_select(std::int64_t x, std::int64_t y);

/// Precomputed degree_select for all x > y > 0 with x <= q_max.
class DegreeTable
{
public:
  DegreeTable() = default;
  explicit DegreeTable(std::int64_t q_max);

  std::int64_t q_max() const noexcept { return q_max_; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// Throws std::out_of_range outside the table domain.
  std::int64_t lookup(std::int64_t x, std::int64_t y) const;

private:
  static std::size_t index(std::int64_t x, std::int64_t y) noexcept
  {
    // rows x = 2, 3, ... hold y = 1 .. x-1
    return static_cast<std::size_t>((x - 1) * (x - 2) / 2 + (y - 1));
  }

  std::int64_t q_max_ = 0;
  std::vector<std::uint8_t> entries_;
};

/// Throws std::invalid_argument for q_max < 2 or q_max > 64.
DegreeTable build_table(std::int64_t q_max);

/// Uniform integer on {1, ..., z}. Throws std::invalid_argument for z < 1.
std::int64_t uniform_degree(std::int64_t z, Rng& rng);

} // namespace alc
