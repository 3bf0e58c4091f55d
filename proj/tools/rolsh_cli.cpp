// Command-line driver: dataset generation, index construction, radius
// sampling, predictor training, single queries, and benchmark runs.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rolsh/bench.hpp"
#include "rolsh/brute_force.hpp"
#include "rolsh/dataset.hpp"
#include "rolsh/disk_index.hpp"
#include "rolsh/engine.hpp"
#include "rolsh/ground_truth.hpp"
#include "rolsh/histogram.hpp"
#include "rolsh/lsh.hpp"
#include "rolsh/metrics.hpp"
#include "rolsh/predictor.hpp"
#include "rolsh/schedule.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace rolsh;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

fs::path resolve(const std::string& data_dir, const std::string& path) {
  fs::path p(path);
  if (!data_dir.empty() && p.is_relative()) return fs::path(data_dir) / p;
  return p;
}

struct SampEntry {
  std::int64_t i2r = 0;
  std::int64_t argmax = 0;
  std::uint64_t samples = 0;
};

std::map<std::uint32_t, SampEntry> load_samp(const fs::path& path) {
  std::map<std::uint32_t, SampEntry> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    unsigned k = 0;
    long long i2r = 0, argmax = 0;
    unsigned long long samples = 0;
    if (std::sscanf(line.c_str(), "k=%u i2r=%lld argmax=%lld samples=%llu", &k, &i2r, &argmax,
                    &samples) == 4)
      out[static_cast<std::uint32_t>(k)] = SampEntry{i2r, argmax, samples};
  }
  return out;
}

void save_samp(const std::map<std::uint32_t, SampEntry>& entries, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error(path.string(), "cannot open for writing");
  for (const auto& [k, e] : entries)
    out << "k=" << k << " i2r=" << e.i2r << " argmax=" << e.argmax << " samples=" << e.samples
        << "\n";
}

std::vector<std::uint32_t> parse_u32_list(const std::string& csv) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
  }
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

json report_json(const QueryReport& r, std::uint32_t query_id, const CostModel& model) {
  json results = json::array();
  for (const auto& [id, dist] : r.results) results.push_back({{"id", id}, {"distance", dist}});
  return json{{"strategy", strategy_name(r.strategy)},
              {"k", r.k},
              {"query_id", query_id},
              {"disk_seeks", r.counters.disk_seeks},
              {"data_read_mb", r.counters.data_read_mb()},
              {"alg_time_ms", r.counters.alg_time_ms},
              {"fp_rem_time_ms", r.counters.fp_rem_time_ms},
              {"qpt_ms", qpt(r.counters, model)},
              {"terminal_radius", r.terminal_radius},
              {"radii_examined", r.radii_examined},
              {"complete", r.complete},
              {"results", results}};
}

struct IndexBundle {
  Dataset data;
  HashFamily family;
  DiskIndex index;

  IndexBundle(const fs::path& index_dir, const fs::path& data_path)
      : data(load_fvecs(data_path)),
        family(load_family(index_dir / "family.bin")),
        index(index_dir) {
    if (data.dim != family.d)
      throw std::invalid_argument("dataset dimension does not match the index family");
    if (data.size() != index.meta().n)
      throw std::invalid_argument("dataset cardinality does not match the index");
  }
};

int cmd_gen(const MixtureConfig& cfg, const fs::path& out) {
  Dataset ds = generate_mixture(cfg);
  save_fvecs(ds, out);
  std::cout << "wrote " << ds.size() << " points, d=" << ds.dim << " -> " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"disk-backed collision-counting LSH with radius-optimized expansion"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "flat key=value config file; keys are <subcommand>.<option>, e.g. bench.queries=50");

  std::string data_dir;
  app.add_option("--data-dir", data_dir, "base directory for relative data paths")
      ->envname("ROLSH_DATA_DIR");

  // ---- gen -------------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a Gaussian-mixture fvecs dataset");
  MixtureConfig mix;
  std::string gen_out;
  gen->add_option("--out", gen_out, "output fvecs path")->required();
  gen->add_option("--n", mix.n, "number of points");
  gen->add_option("--d", mix.d, "dimensionality");
  gen->add_option("--clusters", mix.clusters, "mixture components");
  gen->add_option("--spread", mix.center_spread, "center range half-width");
  gen->add_option("--sigma-min", mix.sigma_min, "smallest cluster scale");
  gen->add_option("--sigma-max", mix.sigma_max, "largest cluster scale");
  gen->add_option("--seed", mix.seed, "generator seed");

  // ---- build -----------------------------------------------------------------
  auto* build = app.add_subcommand("build", "hash a dataset and build the paged index");
  std::string build_data, build_index_dir, b_interval = "w2";
  double build_c = 2.0, build_w = 2.184, build_delta = 0.1;
  std::uint32_t build_page = 4096;
  std::uint64_t build_seed = 42;
  build->add_option("--data", build_data, "input fvecs dataset")->required();
  build->add_option("--index", build_index_dir, "output index directory")->required();
  build->add_option("--c", build_c, "approximation ratio (> 1)");
  build->add_option("--w", build_w, "bucket width");
  build->add_option("--delta", build_delta, "error probability");
  build->add_option("--page-size", build_page, "page size in bytes (>= 64)");
  build->add_option("--b-interval", b_interval, "offset interval upper bound: w2 or w");
  build->add_option("--seed", build_seed, "hash family seed");

  // ---- sample-radii ------------------------------------------------------------
  auto* samp = app.add_subcommand("sample-radii",
                                  "sample terminal radii and choose the initial radius per k");
  std::string samp_index, samp_data, samp_k_csv = "100", samp_hist_out;
  std::uint32_t samp_count = 100;
  std::uint64_t samp_seed = 42;
  samp->add_option("--index", samp_index, "index directory")->required();
  samp->add_option("--data", samp_data, "fvecs dataset the index was built from")->required();
  samp->add_option("--k", samp_k_csv, "comma-separated k values to sample for");
  samp->add_option("--samples", samp_count, "number of sample queries");
  samp->add_option("--seed", samp_seed, "query sampling seed");
  samp->add_option("--hist-out", samp_hist_out, "optional CSV dump of the histograms");

  // ---- train -------------------------------------------------------------------
  auto* train = app.add_subcommand("train", "collect ground-truth radii and fit the predictor");
  std::string train_index, train_data, train_kind = "mlp", train_out, train_dump;
  std::size_t train_samples = 10000;
  std::string train_kset = "1,25,50,75,100";
  TrainConfig tc;
  std::uint64_t train_seed = 42;
  unsigned train_workers = 0;
  train->add_option("--index", train_index, "index directory")->required();
  train->add_option("--data", train_data, "fvecs dataset the index was built from")->required();
  train->add_option("--kind", train_kind, "predictor kind: mlp or linear");
  train->add_option("--samples", train_samples, "total training samples (queries x k values)");
  train->add_option("--k-set", train_kset, "comma-separated k values in the training set");
  train->add_option("--out", train_out, "output predictor file (default <index>/predictor_<kind>.bin)");
  train->add_option("--dump-csv", train_dump, "optional CSV dump of the training samples");
  train->add_option("--cv-folds", tc.cv_folds, "cross-validation folds (0 = skip)");
  train->add_option("--epochs", tc.max_epochs, "max training epochs");
  train->add_option("--hidden", tc.hidden, "hidden layer width");
  train->add_option("--batch", tc.batch_size, "mini-batch size");
  train->add_option("--seed", train_seed, "training seed");
  train->add_option("--workers", train_workers, "fold/query parallelism (0 = hardware)");

  // ---- query -------------------------------------------------------------------
  auto* query = app.add_subcommand("query", "answer one top-k query");
  std::string q_index, q_data, q_strategy = "ovr", q_predictor, q_file, q_rounding = "down";
  std::int64_t q_id = -1, q_row = 0, q_i2r = 0, q_max_radius = 0;
  std::uint32_t q_k = 1;
  double q_lambda = 0.10;
  query->add_option("--index", q_index, "index directory")->required();
  query->add_option("--data", q_data, "fvecs dataset the index was built from")->required();
  query->add_option("--strategy", q_strategy, "ovr, ivr, nn-ivr or nn-lambda");
  query->add_option("--k", q_k, "number of neighbors");
  query->add_option("--query-id", q_id, "use dataset point <id> as the query");
  query->add_option("--query-file", q_file, "fvecs file holding external queries");
  query->add_option("--row", q_row, "row inside --query-file");
  query->add_option("--predictor", q_predictor, "trained predictor (nn strategies)");
  query->add_option("--lambda", q_lambda, "nn-lambda increment fraction");
  query->add_option("--i2r", q_i2r, "initial radius override for ivr");
  query->add_option("--max-radius", q_max_radius, "cap the expansion radius");
  query->add_option("--nn-rounding", q_rounding, "nn-ivr seed rounding: up or down");

  // ---- bench -------------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "run the strategy/k benchmark matrix");
  std::string b_index, b_data, b_strategies = "ovr", b_klist = "1,25,50,75,100";
  std::string b_predictor, b_out, b_per_query, b_rounding = "down";
  BenchConfig bc;
  bench->add_option("--index", b_index, "index directory")->required();
  bench->add_option("--data", b_data, "fvecs dataset the index was built from")->required();
  bench->add_option("--strategies", b_strategies, "comma-separated strategy list");
  bench->add_option("--k-list", b_klist, "comma-separated k values");
  bench->add_option("--queries", bc.query_count, "evaluation query count");
  bench->add_option("--predictor", b_predictor, "trained predictor (nn strategies)");
  bench->add_option("--lambda", bc.lambda, "nn-lambda increment fraction");
  bench->add_option("--seed", bc.seed, "evaluation sampling seed");
  bench->add_option("--workers", bc.workers, "parallel query workers");
  bench->add_option("--out", b_out, "output CSV path");
  bench->add_option("--per-query", b_per_query, "write per-query JSON lines here");
  bench->add_flag("--exclude-self", bc.exclude_self, "drop the query point from ground truth");
  bench->add_option("--nn-rounding", b_rounding, "nn-ivr seed rounding: up or down");
  bench->add_option("--seek-ms", bc.cost_model.seek_ms, "modeled cost per disk seek (ms)");
  bench->add_option("--mb-factor", bc.cost_model.mb_factor, "modeled factor per MB read");

  // ---- ground-truth --------------------------------------------------------------
  auto* gt = app.add_subcommand("ground-truth", "exact k-NN tables for a query set");
  std::string gt_data, gt_queries, gt_out, gt_dist_out;
  std::uint32_t gt_k = 100, gt_self = 0;
  std::uint64_t gt_seed = 42;
  gt->add_option("--data", gt_data, "fvecs dataset")->required();
  gt->add_option("--queries", gt_queries, "fvecs query file (default: sampled dataset points)");
  gt->add_option("--self-queries", gt_self, "sample this many dataset points as queries");
  gt->add_option("--k", gt_k, "neighbors per query");
  gt->add_option("--out", gt_out, "output ivecs id table")->required();
  gt->add_option("--dist-out", gt_dist_out, "optional fvecs distance table");
  gt->add_option("--seed", gt_seed, "query sampling seed");

  // ---- stats ---------------------------------------------------------------------
  auto* stats = app.add_subcommand("stats", "index size and layout summary");
  std::string stats_index;
  bool stats_json = false;
  stats->add_option("--index", stats_index, "index directory")->required();
  stats->add_flag("--json", stats_json, "emit JSON instead of text");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(mix, resolve(data_dir, gen_out));

    if (build->parsed()) {
      double t0 = now_ms();
      Dataset ds = load_fvecs(resolve(data_dir, build_data));
      LshParams params = derive_params(ds.size(), build_c, build_w, build_delta);
      double t = ds.max_abs_coordinate();
      BInterval mode = b_interval == "w" ? BInterval::w : BInterval::w_squared;
      FamilyConfig fc;
      fc.d = ds.dim;
      fc.m = params.m;
      fc.w = build_w;
      fc.seed = build_seed;
      fc.b_upper = b_interval_upper(t, ds.dim, build_c, build_w, mode);
      HashFamily family = make_family(fc);

      fs::path dir = resolve(data_dir, build_index_dir);
      fs::create_directories(dir);
      save_family(family, dir / "family.bin");
      IndexMeta meta;
      meta.n = ds.size();
      meta.d = ds.dim;
      meta.page_size = build_page;
      meta.params = params;
      meta.b_upper = fc.b_upper;
      meta.max_radius = max_search_radius(t, ds.dim, build_c);
      meta.seed = build_seed;
      save_meta(meta, dir / "meta.bin");
      build_index(ds, family, params, dir, build_page);
      double t1 = now_ms();

      std::cout << "n=" << params.n << " d=" << ds.dim << " m=" << params.m << " l=" << params.l
                << " p1=" << params.p1 << " p2=" << params.p2 << " alpha=" << params.alpha
                << " beta=" << params.beta << "\n"
                << "max_radius=" << meta.max_radius << " b_upper=" << meta.b_upper
                << " page_size=" << build_page << "\n"
                << "index_build_ms=" << (t1 - t0) << "\n";
      return 0;
    }

    if (samp->parsed()) {
      fs::path dir = resolve(data_dir, samp_index);
      IndexBundle bundle(dir, resolve(data_dir, samp_data));
      SearchEngine engine(bundle.index, bundle.family, bundle.data);
      auto ks = parse_u32_list(samp_k_csv);
      auto entries = load_samp(dir / "samp.txt");
      double t0 = now_ms();
      auto qids = sample_query_ids(bundle.data.size(), samp_count, samp_seed ^ 0x5a3cu);
      std::ofstream hist_csv;
      if (!samp_hist_out.empty()) {
        hist_csv.open(resolve(data_dir, samp_hist_out), std::ios::trunc);
        hist_csv << "k,terminal_radius,count\n";
      }
      for (std::uint32_t k : ks) {
        RadiusHistogram hist = build_histogram(engine, bundle.data, qids, k);
        SampEntry e;
        e.argmax = hist.argmax();
        e.i2r = select_i2r(hist, engine.params().c);
        e.samples = hist.total();
        entries[k] = e;
        std::cout << "k=" << k << " argmax=" << e.argmax << " i2r=" << e.i2r << "\n";
        if (hist_csv.is_open())
          for (const auto& [r, cnt] : hist.bins) hist_csv << k << "," << r << "," << cnt << "\n";
      }
      save_samp(entries, dir / "samp.txt");
      std::cout << "sampling_ms=" << (now_ms() - t0) << "\n";
      return 0;
    }

    if (train->parsed()) {
      fs::path dir = resolve(data_dir, train_index);
      IndexBundle bundle(dir, resolve(data_dir, train_data));
      const LshParams& params = bundle.index.meta().params;
      auto kset = parse_u32_list(train_kset);

      double t0 = now_ms();
      BucketMatrix bm = build_bucket_matrix(bundle.data, bundle.family);
      std::size_t queries = std::max<std::size_t>(1, train_samples / kset.size());
      auto qids = sample_query_ids(bundle.data.size(),
                                   static_cast<std::uint32_t>(std::min(queries, bundle.data.size())),
                                   train_seed ^ 0x77a1u);
      auto samples = collect_training_samples(bundle.data, bundle.family, params, bm, qids, kset,
                                              train_workers);
      double t_collect = now_ms() - t0;
      if (!train_dump.empty()) dump_samples_csv(samples, resolve(data_dir, train_dump));

      tc.kind = parse_predictor_kind(train_kind);
      tc.seed = train_seed;
      tc.workers = train_workers;
      double t1 = now_ms();
      RadiusPredictor pred = train_predictor(samples, tc);
      double t_fit = now_ms() - t1;

      fs::path out = train_out.empty()
                         ? dir / ("predictor_" + std::string(predictor_kind_name(tc.kind)) + ".bin")
                         : resolve(data_dir, train_out);
      save_predictor(pred, out);
      std::cout << "kind=" << predictor_kind_name(tc.kind) << " samples=" << samples.size()
                << " queries=" << qids.size() << "\n";
      if (tc.cv_folds > 1)
        std::cout << "cv_mse=" << pred.cv_mse << " cv_r2=" << pred.cv_r2 << "\n";
      std::cout << "collect_ms=" << t_collect << " fit_ms=" << t_fit << "\n"
                << "wrote " << out << "\n";
      return 0;
    }

    if (query->parsed()) {
      fs::path dir = resolve(data_dir, q_index);
      IndexBundle bundle(dir, resolve(data_dir, q_data));
      SearchEngine engine(bundle.index, bundle.family, bundle.data);
      const LshParams& params = engine.params();

      Dataset external;
      std::span<const float> qv;
      std::uint32_t qid_label = 0;
      if (!q_file.empty()) {
        external = load_fvecs(resolve(data_dir, q_file));
        if (q_row < 0 || static_cast<std::size_t>(q_row) >= external.size())
          throw std::invalid_argument("--row out of range");
        qv = external.point(static_cast<std::size_t>(q_row));
        qid_label = static_cast<std::uint32_t>(q_row);
      } else {
        if (q_id < 0 || static_cast<std::size_t>(q_id) >= bundle.data.size())
          throw std::invalid_argument("--query-id out of range (or pass --query-file)");
        qv = bundle.data.point(static_cast<std::size_t>(q_id));
        qid_label = static_cast<std::uint32_t>(q_id);
      }

      Strategy strategy = parse_strategy(q_strategy);
      RadiusSchedule schedule = make_ovr(params.c);
      if (strategy == Strategy::ivr) {
        std::int64_t i2r = q_i2r;
        if (i2r <= 0) {
          auto entries = load_samp(dir / "samp.txt");
          auto it = entries.find(q_k);
          if (it == entries.end())
            throw std::invalid_argument("no sampled i2R for k=" + std::to_string(q_k) +
                                        "; run the sample-radii command or pass --i2r");
          i2r = it->second.i2r;
        }
        schedule = make_ivr(params.c, i2r);
      } else if (strategy == Strategy::nn_ivr || strategy == Strategy::nn_lambda) {
        if (q_predictor.empty())
          throw std::invalid_argument("nn strategies need --predictor; run the train command first");
        RadiusPredictor pred = load_predictor(resolve(data_dir, q_predictor));
        Signature sig = bundle.family.signature(qv);
        std::int64_t r_pred = pred.predict(sig, q_k, bundle.index.meta().max_radius);
        I2rRounding rounding = q_rounding == "down" ? I2rRounding::down : I2rRounding::up;
        schedule = strategy == Strategy::nn_ivr ? make_nn_ivr(params.c, r_pred, rounding)
                                                : make_nn_lambda(params.c, r_pred, q_lambda);
      }

      QueryOptions opts;
      if (q_max_radius > 0) opts.max_radius = q_max_radius;
      QueryReport report = engine.query(qv, q_k, schedule, opts);
      std::cout << report_json(report, qid_label, CostModel{}).dump() << "\n";
      return 0;
    }

    if (bench->parsed()) {
      fs::path dir = resolve(data_dir, b_index);
      IndexBundle bundle(dir, resolve(data_dir, b_data));
      SearchEngine engine(bundle.index, bundle.family, bundle.data);

      std::vector<Strategy> strategies;
      {
        std::stringstream ss(b_strategies);
        std::string item;
        while (std::getline(ss, item, ',')) {
          if (!item.empty()) strategies.push_back(parse_strategy(item));
        }
      }
      bc.strategies = strategies;
      bc.k_list = parse_u32_list(b_klist);
      bc.nn_rounding = b_rounding == "down" ? I2rRounding::down : I2rRounding::up;

      std::optional<RadiusPredictor> pred;
      if (!b_predictor.empty()) pred = load_predictor(resolve(data_dir, b_predictor));

      bool wants_ivr = false;
      for (Strategy s : bc.strategies) wants_ivr |= s == Strategy::ivr;
      std::map<std::uint32_t, std::int64_t> i2r_by_k;
      if (wants_ivr) {
        auto entries = load_samp(dir / "samp.txt");
        bool dirty = false;
        for (std::uint32_t k : bc.k_list) {
          auto it = entries.find(k);
          if (it == entries.end()) {
            auto qids = sample_query_ids(bundle.data.size(), 100, bc.seed ^ 0x5a3cu);
            RadiusHistogram hist = build_histogram(engine, bundle.data, qids, k);
            SampEntry e;
            e.argmax = hist.argmax();
            e.i2r = select_i2r(hist, engine.params().c);
            e.samples = hist.total();
            entries[k] = e;
            dirty = true;
            std::cout << "sampled i2R for k=" << k << ": " << e.i2r << "\n";
          }
          i2r_by_k[k] = entries[k].i2r;
        }
        if (dirty) save_samp(entries, dir / "samp.txt");
      }

      BenchResult result = run_bench(engine, bc, pred ? &*pred : nullptr,
                                     wants_ivr ? &i2r_by_k : nullptr);
      std::string csv = to_csv(result.rows);
      if (!b_out.empty()) {
        fs::path out = resolve(data_dir, b_out);
        std::ofstream f(out, std::ios::trunc);
        if (!f) throw io_error(out.string(), "cannot open for writing");
        f << csv;
      }
      std::cout << csv;
      if (!b_per_query.empty()) {
        fs::path out = resolve(data_dir, b_per_query);
        std::ofstream f(out, std::ios::trunc);
        if (!f) throw io_error(out.string(), "cannot open for writing");
        for (const auto& rec : result.per_query) {
          json line{{"strategy", strategy_name(rec.strategy)},
                    {"k", rec.k},
                    {"query_id", rec.query_id},
                    {"disk_seeks", rec.counters.disk_seeks},
                    {"data_read_mb", rec.counters.data_read_mb()},
                    {"alg_time_ms", rec.counters.alg_time_ms},
                    {"fp_rem_time_ms", rec.counters.fp_rem_time_ms},
                    {"qpt_ms", rec.qpt_ms},
                    {"ratio", rec.ratio},
                    {"terminal_radius", rec.terminal_radius},
                    {"radii_examined", rec.radii_examined},
                    {"complete", rec.complete}};
          f << line.dump() << "\n";
        }
      }
      return 0;
    }

    if (gt->parsed()) {
      Dataset ds = load_fvecs(resolve(data_dir, gt_data));
      Dataset queries;
      if (!gt_queries.empty()) {
        queries = load_fvecs(resolve(data_dir, gt_queries));
      } else {
        std::uint32_t count = gt_self > 0 ? gt_self : 50;
        auto qids = sample_query_ids(ds.size(), count, gt_seed ^ 0xe7a1u);
        queries.dim = ds.dim;
        for (std::uint32_t id : qids) queries.append(ds.point(id));
      }
      IntTable ids;
      ids.dim = gt_k;
      Dataset dists;
      dists.dim = gt_k;
      std::vector<float> drow(gt_k);
      for (std::size_t i = 0; i < queries.size(); ++i) {
        auto knn = brute_force_knn(ds, queries.point(i), gt_k);
        for (std::uint32_t j = 0; j < gt_k; ++j) {
          ids.values.push_back(static_cast<std::int32_t>(knn[j].first));
          drow[j] = static_cast<float>(knn[j].second);
        }
        if (!gt_dist_out.empty()) dists.values.insert(dists.values.end(), drow.begin(), drow.end());
      }
      save_ivecs(ids, resolve(data_dir, gt_out));
      if (!gt_dist_out.empty()) save_fvecs(dists, resolve(data_dir, gt_dist_out));
      std::cout << "wrote " << queries.size() << " rows of top-" << gt_k << " ids -> " << gt_out
                << "\n";
      return 0;
    }

    if (stats->parsed()) {
      DiskIndex index(resolve(data_dir, stats_index));
      IndexStats s = index.stats();
      const IndexMeta& meta = index.meta();
      if (stats_json) {
        json j{{"n", meta.n},
               {"d", meta.d},
               {"m", meta.params.m},
               {"l", meta.params.l},
               {"page_size", meta.page_size},
               {"max_radius", meta.max_radius},
               {"file_count", s.file_count},
               {"total_bytes", s.total_bytes},
               {"entries_per_projection", s.entries_per_projection},
               {"pages_per_projection", s.pages_per_projection}};
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "n=" << meta.n << " d=" << meta.d << " m=" << meta.params.m
                  << " l=" << meta.params.l << " page_size=" << meta.page_size
                  << " max_radius=" << meta.max_radius << "\n"
                  << "files=" << s.file_count << " total_bytes=" << s.total_bytes
                  << " entries_per_projection=" << s.entries_per_projection << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
