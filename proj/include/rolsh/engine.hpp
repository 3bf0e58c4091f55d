#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rolsh/dataset.hpp"
#include "rolsh/disk_index.hpp"
#include "rolsh/lsh.hpp"
#include "rolsh/schedule.hpp"

namespace rolsh {

/// Per-point collision counts plus the verified (count >= l, exact distance
/// computed) candidates, carried across radius expansions of one query.
class CandidateSet {
 public:
  explicit CandidateSet(std::size_t n) : counts_(n, 0), state_(n, 0) {}

  std::uint16_t count(std::uint32_t id) const { return counts_[id]; }
  const std::vector<std::uint16_t>& counts() const { return counts_; }

  bool is_verified(std::uint32_t id) const { return state_[id] != 0; }
  std::size_t verified_count() const { return verified_.size(); }
  const std::vector<std::pair<std::uint32_t, double>>& verified() const { return verified_; }

  std::optional<std::int64_t> scanned_radius() const { return scanned_radius_; }

  void bump(std::uint32_t id) { ++counts_[id]; }

  void mark_verified(std::uint32_t id, double distance) {
    state_[id] = 1;
    verified_.emplace_back(id, distance);
  }

  void set_scanned_radius(std::int64_t r) { scanned_radius_ = r; }

 private:
  std::vector<std::uint16_t> counts_;
  std::vector<std::uint8_t> state_;
  std::vector<std::pair<std::uint32_t, double>> verified_;  // promotion order
  std::optional<std::int64_t> scanned_radius_;
};

struct QueryReport {
  Strategy strategy = Strategy::ovr;
  std::uint32_t k = 0;
  std::vector<std::pair<std::uint32_t, double>> results;  // (id, distance), ascending
  CostCounters counters;
  std::int64_t terminal_radius = 0;
  int radii_examined = 0;
  bool complete = false;
};

struct QueryOptions {
  std::optional<std::int64_t> max_radius;           // default: index meta bound
  std::optional<std::uint64_t> candidate_allowance; // default: ceil(beta * n)
};

/// Top-k search by collision counting over expanding per-projection windows.
/// A point collides with the query at radius R in projection i iff
/// |h_i(x) - h_i(q)| <= R; a point whose collision count reaches l is
/// verified by its exact distance. Search stops when either
///   T1: at round end, >= k verified candidates lie within c * R, or
///   T2: >= k + ceil(beta*n) candidates are verified (checked mid-round).
class SearchEngine {
 public:
  SearchEngine(const DiskIndex& index, const HashFamily& family, const Dataset& data)
      : index_(index), family_(family), data_(data), params_(index.meta().params) {
    if (family.d != data.dim) throw std::invalid_argument("SearchEngine: family/data dimension mismatch");
    if (family.size() != params_.m) throw std::invalid_argument("SearchEngine: family size != m");
  }

  const LshParams& params() const { return params_; }
  const DiskIndex& index() const { return index_; }
  const HashFamily& family() const { return family_; }
  const Dataset& data() const { return data_; }

  /// Widens every projection window from prev_radius to new_radius and folds
  /// the newly read entries into the candidate set. Reads at most two
  /// contiguous bucket ranges per projection (left and right extensions), so
  /// at most two disk seeks per projection per expansion. If stop_at_verified
  /// is set, scanning stops after the projection that pushes the verified
  /// count to the threshold. Returns the wall time spent inside index reads;
  /// that time is modeled through the counters and never enters alg_time_ms.
  double expand_and_count(std::span<const float> q, const Signature& sig,
                          std::optional<std::int64_t> prev_radius, std::int64_t new_radius,
                          CandidateSet& candidates, CostCounters& counters,
                          std::optional<std::uint64_t> stop_at_verified = std::nullopt) const {
    if (new_radius < 0) throw std::invalid_argument("expand_and_count: radius must be >= 0");
    if (prev_radius && new_radius <= *prev_radius)
      throw std::invalid_argument("expand_and_count: new radius must exceed previous");

    double io_ms = 0.0;
    std::vector<std::uint32_t> ids;
    std::vector<std::uint32_t> promoted;
    for (std::uint32_t i = 0; i < params_.m; ++i) {
      ids.clear();
      Bucket center = sig[i];
      auto io0 = std::chrono::steady_clock::now();
      if (!prev_radius) {
        index_.read_bucket_range(i, center - new_radius, center + new_radius, counters, ids);
      } else {
        index_.read_bucket_range(i, center - new_radius, center - *prev_radius - 1, counters, ids);
        index_.read_bucket_range(i, center + *prev_radius + 1, center + new_radius, counters, ids);
      }
      auto io1 = std::chrono::steady_clock::now();
      io_ms += std::chrono::duration<double, std::milli>(io1 - io0).count();
      promoted.clear();
      for (std::uint32_t id : ids) {
        candidates.bump(id);
        if (candidates.count(id) >= params_.l && !candidates.is_verified(id))
          promoted.push_back(id);
      }
      if (!promoted.empty()) {
        auto t0 = std::chrono::steady_clock::now();
        for (std::uint32_t id : promoted)
          candidates.mark_verified(id, euclidean(q, data_.point(id)));
        auto t1 = std::chrono::steady_clock::now();
        counters.fp_rem_time_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
      }
      if (stop_at_verified && candidates.verified_count() >= *stop_at_verified) break;
    }
    candidates.set_scanned_radius(new_radius);
    return io_ms;
  }

  /// Full window scan at a fixed radius (fresh candidate set, every
  /// projection visited). The incremental query path must agree with this.
  CandidateSet scan_at_radius(std::span<const float> q, std::int64_t radius,
                              CostCounters* counters = nullptr) const {
    CandidateSet cs(data_.size());
    CostCounters local;
    Signature sig = family_.signature(q);
    expand_and_count(q, sig, std::nullopt, radius, cs, counters ? *counters : local);
    return cs;
  }

  /// T1/T2 termination state for a candidate set scanned at `radius`.
  bool termination_met(const CandidateSet& cs, std::uint32_t k, std::int64_t radius,
                       std::uint64_t allowance) const {
    if (cs.verified_count() >= k + allowance) return true;  // T2
    double limit = params_.c * static_cast<double>(radius);
    std::uint64_t within = 0;
    for (const auto& [id, dist] : cs.verified()) {
      if (dist <= limit && ++within >= k) return true;  // T1
    }
    return false;
  }

  QueryReport query(std::span<const float> q, std::uint32_t k, const RadiusSchedule& schedule,
                    const QueryOptions& options = {}) const {
    if (k < 1) throw std::invalid_argument("query: k must be >= 1");
    auto t_start = std::chrono::steady_clock::now();

    QueryReport report;
    report.strategy = schedule.strategy;
    report.k = k;

    std::int64_t max_radius = options.max_radius.value_or(index_.meta().max_radius);
    std::uint64_t allowance = options.candidate_allowance.value_or(params_.false_positive_allowance());
    std::uint64_t t2_threshold = k + allowance;

    CandidateSet cs(data_.size());
    Signature sig = family_.signature(q);

    double io_ms = 0.0;
    std::optional<std::int64_t> radius;
    for (;;) {
      std::int64_t next = next_radius(schedule, radius);
      if (next > max_radius) break;  // schedule exhausted: partial result
      ++report.radii_examined;
      io_ms += expand_and_count(q, sig, radius, next, cs, report.counters, t2_threshold);
      radius = next;
      if (termination_met(cs, k, next, allowance)) {
        report.complete = true;
        break;
      }
    }
    report.terminal_radius = radius.value_or(0);

    auto ranked = cs.verified();
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    if (ranked.size() > k) ranked.resize(k);
    report.results = std::move(ranked);

    auto t_end = std::chrono::steady_clock::now();
    double total_ms = std::chrono::duration<double, std::milli>(t_end - t_start).count();
    report.counters.alg_time_ms = std::max(0.0, total_ms - report.counters.fp_rem_time_ms - io_ms);
    return report;
  }

 private:
  const DiskIndex& index_;
  const HashFamily& family_;
  const Dataset& data_;
  LshParams params_;
};

}  // namespace rolsh
