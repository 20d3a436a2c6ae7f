#pragma once

#include "lslcop/lslcop.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace testing_support {

// Random member with 2..16 knots, deterministic in i.
inline lslcop::Diagonal random_diagonal(std::uint64_t i, std::uint64_t stream = 0) {
  const std::uint64_t s = lslcop::detail::splitmix64(i + 0x51ed27ULL * (stream + 1));
  return lslcop::random_dlsl(s, 2 + s % 15);
}

inline std::vector<double> random_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = lslcop::detail::unit_draw(gen);
  return out;
}

}  // namespace testing_support
