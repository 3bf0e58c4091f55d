#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rolsh/dataset.hpp"

namespace rolsh {

/// Exact Euclidean k-NN by full scan; ties broken by ascending id.
inline std::vector<std::pair<std::uint32_t, double>> brute_force_knn(const Dataset& ds,
                                                                     std::span<const float> q,
                                                                     std::uint32_t k) {
  const std::size_t n = ds.size();
  if (k < 1 || k > n) throw std::invalid_argument("brute_force_knn: k out of range");
  std::vector<std::pair<double, std::uint32_t>> scored(n);
  for (std::size_t i = 0; i < n; ++i)
    scored[i] = {euclidean(q, ds.point(i)), static_cast<std::uint32_t>(i)};
  std::partial_sort(scored.begin(), scored.begin() + k, scored.end());
  std::vector<std::pair<std::uint32_t, double>> out(k);
  for (std::uint32_t i = 0; i < k; ++i) out[i] = {scored[i].second, scored[i].first};
  return out;
}

}  // namespace rolsh
