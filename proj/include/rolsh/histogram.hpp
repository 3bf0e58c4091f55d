#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>

#include "rolsh/engine.hpp"
#include "rolsh/schedule.hpp"

namespace rolsh {

/// Terminal-radius frequency for a fixed k: radius value -> query count.
/// Bins are discrete because the exponential schedule emits powers of c.
struct RadiusHistogram {
  std::map<std::int64_t, std::uint64_t> bins;

  void add(std::int64_t radius) { ++bins[radius]; }

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& [r, cnt] : bins) t += cnt;
    return t;
  }

  /// Most frequent terminal radius; ties resolve to the smaller radius.
  std::int64_t argmax() const {
    if (bins.empty()) throw std::invalid_argument("RadiusHistogram: empty");
    std::int64_t best = bins.begin()->first;
    std::uint64_t best_count = bins.begin()->second;
    for (const auto& [r, cnt] : bins) {
      if (cnt > best_count) {
        best = r;
        best_count = cnt;
      }
    }
    return best;
  }
};

/// Runs the sample queries through the exponential schedule and bins their
/// terminal radii. Done once at index time; the query path never pays for it.
inline RadiusHistogram build_histogram(const SearchEngine& engine, const Dataset& ds,
                                       std::span<const std::uint32_t> query_ids, std::uint32_t k) {
  if (query_ids.empty()) throw std::invalid_argument("build_histogram: no sample queries");
  RadiusHistogram hist;
  RadiusSchedule ovr = make_ovr(engine.params().c);
  for (std::uint32_t id : query_ids) {
    QueryReport report = engine.query(ds.point(id), k, ovr);
    hist.add(report.terminal_radius);
  }
  return hist;
}

/// The improved initial radius: the schedule predecessor of the histogram's
/// argmax bin (1 when the argmax is already the smallest radius).
inline std::int64_t select_i2r(const RadiusHistogram& hist, double c) {
  return ovr_predecessor(c, hist.argmax());
}

}  // namespace rolsh
