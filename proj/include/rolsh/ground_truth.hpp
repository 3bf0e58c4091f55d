#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "rolsh/common.hpp"
#include "rolsh/dataset.hpp"
#include "rolsh/engine.hpp"
#include "rolsh/lsh.hpp"

namespace rolsh {

/// Smallest integer radius at which a fixed-radius scan meets the
/// termination conditions for (q, k). Brackets by geometric doubling, then
/// binary-searches the bracket. R = 0 (the zero-width window) is examined
/// first, so a self-match with k = 1 reports 0.
inline std::int64_t ground_truth_radius(const SearchEngine& engine, std::span<const float> q,
                                        std::uint32_t k) {
  if (k < 1) throw std::invalid_argument("ground_truth_radius: k must be >= 1");
  if (k > engine.params().n) throw std::invalid_argument("ground_truth_radius: k exceeds dataset size");
  std::uint64_t allowance = engine.params().false_positive_allowance();

  auto feasible = [&](std::int64_t radius) {
    CandidateSet cs = engine.scan_at_radius(q, radius);
    return engine.termination_met(cs, k, radius, allowance);
  };

  if (feasible(0)) return 0;
  std::int64_t lo = 0, hi = 1;
  while (!feasible(hi)) {
    lo = hi;
    hi *= 2;
    if (hi > (std::int64_t{1} << 40))
      throw std::runtime_error("ground_truth_radius: no feasible radius below 2^40");
  }
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

/// All per-projection buckets of the dataset, kept in memory for the
/// training-time oracle (this is the same data the index pages hold).
struct BucketMatrix {
  std::uint32_t m = 0;
  std::size_t n = 0;
  std::vector<Bucket> buckets;  // projection-major: buckets[i * n + x]

  Bucket at(std::uint32_t projection, std::size_t x) const { return buckets[projection * n + x]; }
};

inline BucketMatrix build_bucket_matrix(const Dataset& ds, const HashFamily& family) {
  BucketMatrix bm;
  bm.m = family.size();
  bm.n = ds.size();
  bm.buckets.resize(static_cast<std::size_t>(bm.m) * bm.n);
  for (std::uint32_t i = 0; i < bm.m; ++i) {
    const HashFunction& fn = family.functions[i];
    parallel_for(bm.n, 0, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t x = lo; x < hi; ++x) bm.buckets[i * bm.n + x] = hash_point(ds.point(x), fn);
    });
  }
  return bm;
}

/// Direct evaluation of the ground-truth radius for every k in k_sorted at
/// once. For each point the radius at which it verifies is the l-th smallest
/// bucket deviation; T1 additionally needs the exact distance within c * R.
/// Identical, by definition, to probing fixed-radius scans.
inline void direct_ground_truth(const BucketMatrix& bm, const Dataset& ds, const LshParams& params,
                                const Signature& sig, std::span<const float> q,
                                std::span<const std::uint32_t> k_sorted,
                                std::span<std::int64_t> out_radii) {
  const std::size_t n = bm.n;
  const std::uint32_t m = bm.m;
  std::uint64_t allowance = params.false_positive_allowance();

  std::vector<std::int64_t> verify_radius(n);   // R_x: point verifies at R >= R_x
  std::vector<std::int64_t> within_radius(n);   // S_x: verified and within c*R
  std::vector<std::int64_t> devs(m);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::uint32_t i = 0; i < m; ++i) {
      Bucket d = bm.at(i, x) - sig[i];
      devs[i] = d < 0 ? -d : d;
    }
    std::nth_element(devs.begin(), devs.begin() + (params.l - 1), devs.end());
    std::int64_t rx = devs[params.l - 1];
    verify_radius[x] = rx;
    double dist = euclidean(q, ds.point(x));
    std::int64_t dist_radius = std::max<std::int64_t>(0, ceil_guarded(dist / params.c));
    within_radius[x] = std::max(rx, dist_radius);
  }
  std::sort(verify_radius.begin(), verify_radius.end());
  std::sort(within_radius.begin(), within_radius.end());

  for (std::size_t j = 0; j < k_sorted.size(); ++j) {
    std::uint32_t k = k_sorted[j];
    if (k < 1 || k > n) throw std::invalid_argument("direct_ground_truth: bad k");
    std::int64_t t1 = within_radius[k - 1];
    std::size_t t2_rank = k + allowance;
    // T2 is unreachable when the dataset holds fewer than k + allowance points.
    std::int64_t t2 = t2_rank <= n ? verify_radius[t2_rank - 1]
                                   : std::numeric_limits<std::int64_t>::max();
    out_radii[j] = std::min(t1, t2);
  }
}

/// One regression example: the query's m bucket locations plus k, mapped to
/// the smallest feasible projected radius (clamped to >= 1).
struct TrainingSample {
  Signature sig;
  std::uint32_t k = 0;
  std::int64_t target = 1;
};

/// Ground truth for query_ids x k_set, parallelized over queries. Queries are
/// dataset members; their signatures double as the model features.
inline std::vector<TrainingSample> collect_training_samples(
    const Dataset& ds, const HashFamily& family, const LshParams& params, const BucketMatrix& bm,
    std::span<const std::uint32_t> query_ids, std::span<const std::uint32_t> k_set,
    unsigned workers = 0) {
  if (query_ids.empty() || k_set.empty())
    throw std::invalid_argument("collect_training_samples: empty queries or k set");
  std::vector<std::uint32_t> ks(k_set.begin(), k_set.end());
  std::sort(ks.begin(), ks.end());

  std::vector<TrainingSample> samples(query_ids.size() * ks.size());
  parallel_for(query_ids.size(), workers, [&](std::size_t lo, std::size_t hi) {
    std::vector<std::int64_t> radii(ks.size());
    for (std::size_t qi = lo; qi < hi; ++qi) {
      auto q = ds.point(query_ids[qi]);
      Signature sig = family.signature(q);
      direct_ground_truth(bm, ds, params, sig, q, ks, radii);
      for (std::size_t j = 0; j < ks.size(); ++j) {
        auto& s = samples[qi * ks.size() + j];
        s.sig = sig;
        s.k = ks[j];
        s.target = std::max<std::int64_t>(1, radii[j]);
      }
    }
  });
  return samples;
}

/// CSV dump: m bucket columns, k, r_act.
inline void dump_samples_csv(std::span<const TrainingSample> samples,
                             const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error(path.string(), "cannot open for writing");
  if (samples.empty()) return;
  for (std::size_t i = 0; i < samples.front().sig.size(); ++i) out << "b" << i << ",";
  out << "k,r_act\n";
  for (const auto& s : samples) {
    for (Bucket b : s.sig) out << b << ",";
    out << s.k << "," << s.target << "\n";
  }
  if (!out) throw io_error(path.string(), "write failed");
}

}  // namespace rolsh
