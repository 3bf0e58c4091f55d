#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rolsh/disk_index.hpp"

namespace rolsh {

/// The modeled I/O cost constants: milliseconds per random seek and the
/// factor applied to megabytes read.
struct CostModel {
  double seek_ms = 8.5;
  double mb_factor = 0.156;
};

/// Modeled query processing time:
/// seeks * 8.5 + MB * 0.156 + AlgTime + FPRemTime.
inline double qpt_from(double disk_seeks, double data_read_mb, double alg_time_ms,
                       double fp_rem_time_ms, const CostModel& model = {}) {
  return disk_seeks * model.seek_ms + data_read_mb * model.mb_factor + alg_time_ms +
         fp_rem_time_ms;
}

/// Same formula as a pure function of a query's counters.
inline double qpt(const CostCounters& counters, const CostModel& model = {}) {
  return qpt_from(static_cast<double>(counters.disk_seeks), counters.data_read_mb(),
                  counters.alg_time_ms, counters.fp_rem_time_ms, model);
}

struct RatioResult {
  double value = 1.0;
  std::uint32_t excluded_ranks = 0;  // zero-distance ground truth vs nonzero result
};

/// Mean over ranks of (returned distance / true distance). A rank whose true
/// distance is zero counts as 1 when the returned distance is also zero and
/// is otherwise excluded (and flagged).
inline RatioResult accuracy_ratio(std::span<const std::pair<std::uint32_t, double>> results,
                                  std::span<const std::pair<std::uint32_t, double>> ground_truth,
                                  std::uint32_t k) {
  if (results.size() != k || ground_truth.size() != k)
    throw std::invalid_argument("accuracy_ratio: both lists must have length k");
  RatioResult out;
  double sum = 0.0;
  std::uint32_t used = 0;
  for (std::uint32_t i = 0; i < k; ++i) {
    double got = results[i].second;
    double truth = ground_truth[i].second;
    if (truth == 0.0) {
      if (got == 0.0) {
        sum += 1.0;
        ++used;
      } else {
        ++out.excluded_ranks;
      }
    } else {
      sum += got / truth;
      ++used;
    }
  }
  out.value = used > 0 ? sum / static_cast<double>(used) : 1.0;
  return out;
}

}  // namespace rolsh
