#include "alc/degree.hpp"

#include <stdexcept>

namespace alc {

namespace {

void check_domain(std::int64_t x, std::int64_t y)
{
  if (!(x > y && y > 0)) {
    throw std::invalid_argument("degree domain requires x > y > 0");
  }
  if (x > 64) {
    throw std::invalid_argument("degree domain limited to x <= 64");
  }
}

} // namespace

std::uint64_t binomial(std::int64_t n, std::int64_t k)
{
  if (k < 0 || n < 0 || k > n) {
    return 0;
  }
  if (n > 64) {
    throw std::invalid_argument("binomial limited to n <= 64");
  }
  if (k > n - k) {
    k = n - k;
  }
  // Each partial product C(n-k+i, i) is exact; the 128-bit intermediate
  // cannot overflow for n <= 64.
  unsigned __int128 acc = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
  }
  return static_cast<std::uint64_t>(acc);
}

Fraction recovery_fraction(std::int64_t x, std::int64_t y, std::int64_t d)
{
  check_domain(x, y);
  if (d < 1 || d > x) {
    throw std::invalid_argument("degree must lie in [1, x]");
  }
  const unsigned __int128 num = static_cast<unsigned __int128>(y) * binomial(x - y, d - 1);
  return {static_cast<std::uint64_t>(num), binomial(x, d)};
}

double recovery_probability(std::int64_t x, std::int64_t y, std::int64_t d)
{
  const Fraction f = recovery_fraction(x, y, d);
  return static_cast<double>(f.num) / static_cast<double>(f.den);
}

std::int64_t degree_select(std::int64_t x, std::int64_t y)
{
  check_domain(x, y);
  std::int64_t best = 1;
  Fraction best_f = recovery_fraction(x, y, 1);
  for (std::int64_t d = 2; d <= x; ++d) {
    const Fraction f = recovery_fraction(x, y, d);
    // f > best_f  <=>  f.num * best.den > best.num * f.den
    if (static_cast<unsigned __int128>(f.num) * best_f.den > static_cast<unsigned __int128>(best_f.num) * f.den) {
      best = d;
      best_f = f;
    }
  }
  return best;
}

DegreeTable::DegreeTable(std::int64_t q_max)
  : q_max_{q_max}
{
  if (q_max < 2 || q_max > 64) {
    throw std::invalid_argument("degree table size must be in [2, 64]");
  }
  entries_.resize(index(q_max, q_max - 1) + 1);
  for (std::int64_t x = 2; x <= q_max; ++x) {
    for (std::int64_t y = 1; y < x; ++y) {
      entries_[index(x, y)] = static_cast<std::uint8_t>(degree_select(x, y));
    }
  }
}

std::int64_t DegreeTable::lookup(std::int64_t x, std::int64_t y) const
{
  if (!(x > y && y > 0) || x > q_max_) {
    throw std::out_of_range("degree table lookup outside x > y > 0, x <= q_max");
  }
  return entries_[index(x, y)];
}

DegreeTable build_table(std::int64_t q_max)
{
  return DegreeTable{q_max};
}

std::int64_t uniform_degree(std::int64_t z, Rng& rng)
{
  if (z < 1) {
    throw std::invalid_argument("uniform_degree requires z >= 1");
  }
  return std::uniform_int_distribution<std::int64_t>{1, z}(rng);
}

} // namespace alc
