#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rolsh/brute_force.hpp"
#include "rolsh/engine.hpp"
#include "rolsh/metrics.hpp"
#include "rolsh/predictor.hpp"
#include "rolsh/schedule.hpp"

namespace rolsh {

struct BenchConfig {
  std::vector<Strategy> strategies{Strategy::ovr};
  std::vector<std::uint32_t> k_list{1, 25, 50, 75, 100};
  std::uint32_t query_count = 50;
  double lambda = 0.10;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  bool exclude_self = false;  // drop the query point from ground truth and results
  I2rRounding nn_rounding = I2rRounding::down;
  CostModel cost_model;
};

struct PerQueryRecord {
  Strategy strategy = Strategy::ovr;
  std::uint32_t k = 0;
  std::uint32_t query_id = 0;
  CostCounters counters;
  double qpt_ms = 0.0;
  double ratio = 1.0;
  std::int64_t terminal_radius = 0;
  int radii_examined = 0;
  bool complete = false;
};

struct MetricRow {
  Strategy strategy = Strategy::ovr;
  std::uint32_t k = 0;
  std::uint32_t queries = 0;
  double mean_disk_seeks = 0.0;
  double mean_data_read_mb = 0.0;
  double mean_alg_time_ms = 0.0;
  double mean_fp_rem_time_ms = 0.0;
  double mean_qpt_ms = 0.0;
  double mean_ratio = 0.0;
  double mean_terminal_radius = 0.0;
  double mean_radii_examined = 0.0;
  std::uint32_t incomplete = 0;
};

struct BenchResult {
  std::vector<std::uint32_t> query_ids;
  std::vector<PerQueryRecord> per_query;  // strategy-major, then k, then query
  std::vector<MetricRow> rows;
};

/// Seeded draw of `count` distinct ids from [0, n).
inline std::vector<std::uint32_t> sample_query_ids(std::size_t n, std::uint32_t count,
                                                   std::uint64_t seed) {
  if (count > n) throw std::invalid_argument("sample_query_ids: count exceeds dataset size");
  std::vector<std::uint32_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<std::uint32_t>(i);
  SplitMix64 rng(seed);
  for (std::uint32_t i = 0; i < count; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(count);
  return ids;
}

/// Evaluates every (strategy, k) cell of the config over the same seeded
/// evaluation queries and averages the per-query metrics. NN strategies call
/// the predictor exactly once per query; the sampling-seeded strategy reads
/// its per-k initial radius from samp_i2r.
inline BenchResult run_bench(const SearchEngine& engine, const BenchConfig& cfg,
                             const RadiusPredictor* predictor = nullptr,
                             const std::map<std::uint32_t, std::int64_t>* samp_i2r = nullptr) {
  const Dataset& ds = engine.data();
  const LshParams& params = engine.params();
  const std::int64_t max_radius = engine.index().meta().max_radius;

  for (Strategy s : cfg.strategies) {
    if ((s == Strategy::nn_ivr || s == Strategy::nn_lambda) && predictor == nullptr)
      throw std::invalid_argument(std::string("strategy ") + strategy_name(s) +
                                  " needs a trained predictor; run the train command first");
    if (s == Strategy::ivr && samp_i2r == nullptr)
      throw std::invalid_argument("strategy ivr needs sampled initial radii; run the "
                                  "sample-radii command first");
  }
  if (samp_i2r != nullptr) {
    for (Strategy s : cfg.strategies) {
      if (s != Strategy::ivr) continue;
      for (std::uint32_t k : cfg.k_list)
        if (samp_i2r->find(k) == samp_i2r->end())
          throw std::invalid_argument("no sampled i2R for k=" + std::to_string(k) +
                                      "; run the sample-radii command for this k");
    }
  }

  BenchResult result;
  result.query_ids = sample_query_ids(ds.size(), cfg.query_count, cfg.seed ^ 0xe7a1u);

  // Exact neighbors once per query at the largest k (one extra when the query
  // itself is excluded), shared across cells.
  std::uint32_t k_max = *std::max_element(cfg.k_list.begin(), cfg.k_list.end());
  std::uint32_t gt_k = std::min<std::uint32_t>(static_cast<std::uint32_t>(ds.size()),
                                               k_max + (cfg.exclude_self ? 1 : 0));
  std::vector<std::vector<std::pair<std::uint32_t, double>>> gt(result.query_ids.size());
  parallel_for(result.query_ids.size(), cfg.workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      auto full = brute_force_knn(ds, ds.point(result.query_ids[i]), gt_k);
      if (cfg.exclude_self) {
        std::erase_if(full, [&](const auto& e) { return e.first == result.query_ids[i]; });
        if (full.size() > k_max) full.resize(k_max);
      }
      gt[i] = std::move(full);
    }
  });

  const std::size_t cells = cfg.strategies.size() * cfg.k_list.size();
  const std::size_t tasks = cells * result.query_ids.size();
  result.per_query.resize(tasks);

  parallel_for(tasks, cfg.workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t t = lo; t < hi; ++t) {
      std::size_t cell = t / result.query_ids.size();
      std::size_t qi = t % result.query_ids.size();
      Strategy strategy = cfg.strategies[cell / cfg.k_list.size()];
      std::uint32_t k = cfg.k_list[cell % cfg.k_list.size()];
      std::uint32_t qid = result.query_ids[qi];
      auto q = ds.point(qid);

      RadiusSchedule schedule = make_ovr(params.c);
      switch (strategy) {
        case Strategy::ovr:
          break;
        case Strategy::ivr:
          schedule = make_ivr(params.c, samp_i2r->at(k));
          break;
        case Strategy::nn_ivr:
        case Strategy::nn_lambda: {
          Signature sig = engine.family().signature(q);
          std::int64_t r_pred = predictor->predict(sig, k, max_radius);
          schedule = strategy == Strategy::nn_ivr
                         ? make_nn_ivr(params.c, r_pred, cfg.nn_rounding)
                         : make_nn_lambda(params.c, r_pred, cfg.lambda);
          break;
        }
      }

      std::uint32_t want = k + (cfg.exclude_self ? 1 : 0);
      QueryReport report = engine.query(q, want, schedule);
      if (cfg.exclude_self) {
        std::erase_if(report.results, [&](const auto& e) { return e.first == qid; });
        if (report.results.size() > k) report.results.resize(k);
      }

      PerQueryRecord rec;
      rec.strategy = strategy;
      rec.k = k;
      rec.query_id = qid;
      rec.counters = report.counters;
      rec.qpt_ms = qpt(report.counters, cfg.cost_model);
      rec.terminal_radius = report.terminal_radius;
      rec.radii_examined = report.radii_examined;
      rec.complete = report.complete && report.results.size() >= k;
      if (rec.complete) {
        std::span<const std::pair<std::uint32_t, double>> truth{gt[qi].data(), k};
        std::span<const std::pair<std::uint32_t, double>> got{report.results.data(), k};
        rec.ratio = accuracy_ratio(got, truth, k).value;
      } else {
        rec.ratio = std::nan("");
      }
      result.per_query[t] = std::move(rec);
    }
  });

  for (std::size_t cell = 0; cell < cells; ++cell) {
    MetricRow row;
    row.strategy = cfg.strategies[cell / cfg.k_list.size()];
    row.k = cfg.k_list[cell % cfg.k_list.size()];
    row.queries = static_cast<std::uint32_t>(result.query_ids.size());
    std::uint32_t rated = 0;
    for (std::size_t qi = 0; qi < result.query_ids.size(); ++qi) {
      const auto& rec = result.per_query[cell * result.query_ids.size() + qi];
      row.mean_disk_seeks += static_cast<double>(rec.counters.disk_seeks);
      row.mean_data_read_mb += rec.counters.data_read_mb();
      row.mean_alg_time_ms += rec.counters.alg_time_ms;
      row.mean_fp_rem_time_ms += rec.counters.fp_rem_time_ms;
      row.mean_qpt_ms += rec.qpt_ms;
      row.mean_terminal_radius += static_cast<double>(rec.terminal_radius);
      row.mean_radii_examined += static_cast<double>(rec.radii_examined);
      if (rec.complete) {
        row.mean_ratio += rec.ratio;
        ++rated;
      } else {
        ++row.incomplete;
      }
    }
    double q = static_cast<double>(row.queries);
    row.mean_disk_seeks /= q;
    row.mean_data_read_mb /= q;
    row.mean_alg_time_ms /= q;
    row.mean_fp_rem_time_ms /= q;
    row.mean_qpt_ms /= q;
    row.mean_terminal_radius /= q;
    row.mean_radii_examined /= q;
    row.mean_ratio = rated > 0 ? row.mean_ratio / rated : std::nan("");
    result.rows.push_back(row);
  }
  return result;
}

// --- CSV ------------------------------------------------------------------------
// Columns mirror the reported quantities: disk seeks, data read, algorithm
// time, QPT, accuracy ratio (plus terminal radius and round counts). The
// three *_time and qpt columns are wall-clock dependent; everything else is
// deterministic for a fixed seed.

inline constexpr int kCsvSchemaVersion = 1;

inline const char* csv_header() {
  return "schema_version,strategy,k,queries,mean_disk_seeks,mean_data_read_mb,"
         "mean_alg_time_ms,mean_fp_rem_time_ms,mean_qpt_ms,mean_ratio,"
         "mean_terminal_radius,mean_radii_examined,incomplete";
}

inline std::string csv_row(const MetricRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%d,%s,%u,%u,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%u",
                kCsvSchemaVersion, strategy_name(r.strategy), r.k, r.queries, r.mean_disk_seeks,
                r.mean_data_read_mb, r.mean_alg_time_ms, r.mean_fp_rem_time_ms, r.mean_qpt_ms,
                r.mean_ratio, r.mean_terminal_radius, r.mean_radii_examined, r.incomplete);
  return buf;
}

inline std::string to_csv(std::span<const MetricRow> rows) {
  std::string out = csv_header();
  out.push_back('\n');
  for (const auto& r : rows) {
    out += csv_row(r);
    out.push_back('\n');
  }
  return out;
}

inline void write_csv(std::span<const MetricRow> rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error(path.string(), "cannot open for writing");
  out << to_csv(rows);
  if (!out) throw io_error(path.string(), "write failed");
}

/// The CSV with the wall-clock columns (alg time, fp-removal time, qpt)
/// blanked; two equal-seed runs must agree byte-for-byte on this view.
inline std::string csv_deterministic_view(const std::string& csv) {
  std::string out;
  std::size_t start = 0;
  while (start < csv.size()) {
    std::size_t end = csv.find('\n', start);
    if (end == std::string::npos) end = csv.size();
    std::string line = csv.substr(start, end - start);
    std::string rebuilt;
    std::size_t col = 0, pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      std::string field = line.substr(pos, comma - pos);
      if (col >= 6 && col <= 8) field = "-";  // mean_alg_time_ms .. mean_qpt_ms
      if (col > 0) rebuilt.push_back(',');
      rebuilt += field;
      if (comma == line.size()) break;
      pos = comma + 1;
      ++col;
    }
    out += rebuilt;
    out.push_back('\n');
    start = end + 1;
  }
  return out;
}

}  // namespace rolsh
