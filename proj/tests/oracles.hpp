// Test-only reference implementations, independent of the library paths they
// check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "rolsh/dataset.hpp"
#include "rolsh/lsh.hpp"

namespace oracle {

/// Closed form of the collision probability:
/// 1 - 2*Phi(-w/r) - (2r / (sqrt(2 pi) w)) * (1 - exp(-w^2 / (2 r^2))).
inline double collision_prob_closed(double r, double w) {
  auto norm_cdf = [](double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); };
  return 1.0 - 2.0 * norm_cdf(-w / r) -
         (2.0 * r / (std::sqrt(2.0 * std::numbers::pi) * w)) *
             (1.0 - std::exp(-(w * w) / (2.0 * r * r)));
}

/// Heap-based exact k-NN, a second route independent of the library scan.
inline std::vector<std::pair<std::uint32_t, double>> knn_by_heap(const rolsh::Dataset& ds,
                                                                 std::span<const float> q,
                                                                 std::uint32_t k) {
  // (negated comparison keeps the worst candidate on top)
  auto worse = [](const std::pair<double, std::uint32_t>& a,
                  const std::pair<double, std::uint32_t>& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  };
  std::vector<std::pair<double, std::uint32_t>> heap;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    std::pair<double, std::uint32_t> cand{rolsh::euclidean(q, ds.point(i)),
                                          static_cast<std::uint32_t>(i)};
    if (heap.size() < k) {
      heap.push_back(cand);
      std::push_heap(heap.begin(), heap.end(), worse);
    } else if (worse(cand, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), worse);
      heap.back() = cand;
      std::push_heap(heap.begin(), heap.end(), worse);
    }
  }
  std::sort_heap(heap.begin(), heap.end(), worse);
  std::vector<std::pair<std::uint32_t, double>> out;
  out.reserve(heap.size());
  for (const auto& [d, id] : heap) out.emplace_back(id, d);
  return out;
}

/// Collision-count scan straight from the definition: re-hashes every point
/// and counts per-projection window hits at one fixed radius.
struct CountScan {
  std::vector<std::uint32_t> counts;
  std::vector<std::uint32_t> verified_ids;  // count >= l, ascending id
};

inline CountScan collision_count_scan(const rolsh::Dataset& ds, const rolsh::HashFamily& family,
                                      std::uint32_t l, std::span<const float> q,
                                      std::int64_t radius) {
  CountScan out;
  out.counts.assign(ds.size(), 0);
  rolsh::Signature sig = family.signature(q);
  for (std::size_t x = 0; x < ds.size(); ++x) {
    for (std::uint32_t i = 0; i < family.size(); ++i) {
      rolsh::Bucket diff = rolsh::hash_point(ds.point(x), family.functions[i]) - sig[i];
      if (std::llabs(diff) <= radius) ++out.counts[x];
    }
    if (out.counts[x] >= l) out.verified_ids.push_back(static_cast<std::uint32_t>(x));
  }
  return out;
}

/// Termination check at a fixed radius, straight from the definition.
inline bool feasible_by_definition(const rolsh::Dataset& ds, const rolsh::HashFamily& family,
                                   const rolsh::LshParams& params, std::span<const float> q,
                                   std::uint32_t k, std::int64_t radius) {
  CountScan scan = collision_count_scan(ds, family, params.l, q, radius);
  if (scan.verified_ids.size() >= k + params.false_positive_allowance()) return true;
  std::uint32_t within = 0;
  double limit = params.c * static_cast<double>(radius);
  for (std::uint32_t id : scan.verified_ids) {
    if (rolsh::euclidean(q, ds.point(id)) <= limit && ++within >= k) return true;
  }
  return false;
}

/// Linear sweep for the smallest feasible radius, from R = 0 upward.
inline std::int64_t radius_by_sweep(const rolsh::Dataset& ds, const rolsh::HashFamily& family,
                                    const rolsh::LshParams& params, std::span<const float> q,
                                    std::uint32_t k) {
  for (std::int64_t r = 0;; ++r) {
    if (feasible_by_definition(ds, family, params, q, k, r)) return r;
  }
}

}  // namespace oracle
