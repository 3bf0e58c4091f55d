#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "rolsh/bench.hpp"
#include "rolsh/brute_force.hpp"
#include "rolsh/dataset.hpp"
#include "rolsh/metrics.hpp"

using namespace rolsh;
namespace fs = std::filesystem;

TEST_SUITE("bench_harness") {

TEST_CASE("fvecs round-trip preserves the dataset") {
  Dataset ds;
  ds.dim = 2;
  float a[2] = {1.0f, 2.0f};
  float b[2] = {-3.5f, 0.25f};
  ds.append({a, 2});
  ds.append({b, 2});
  auto path = fs::temp_directory_path() / "rolsh_test_rt.fvecs";
  save_fvecs(ds, path);
  Dataset back = load_fvecs(path);
  CHECK(back.dim == 2);
  CHECK(back.values == ds.values);
  fs::remove(path);
}

TEST_CASE("fvecs single record parses") {
  auto path = fs::temp_directory_path() / "rolsh_test_one.fvecs";
  std::string buf;
  put_u32(buf, 2);
  put_f32(buf, 1.0f);
  put_f32(buf, 2.0f);
  std::ofstream(path, std::ios::binary) << buf;
  Dataset ds = load_fvecs(path);
  CHECK(ds.size() == 1);
  CHECK(ds.dim == 2);
  CHECK(ds.values == std::vector<float>{1.0f, 2.0f});
  fs::remove(path);
}

TEST_CASE("fvecs format errors carry the byte offset") {
  auto path = fs::temp_directory_path() / "rolsh_test_bad.fvecs";

  SUBCASE("truncated payload") {
    std::string buf;
    put_u32(buf, 3);
    put_f32(buf, 1.0f);  // promises 3 floats, delivers 1
    std::ofstream(path, std::ios::binary) << buf;
    try {
      load_fvecs(path);
      FAIL("expected format_error");
    } catch (const format_error& e) {
      CHECK(e.offset() == 4);
    }
  }

  SUBCASE("inconsistent dimension") {
    std::string buf;
    put_u32(buf, 1);
    put_f32(buf, 1.0f);
    put_u32(buf, 2);
    put_f32(buf, 1.0f);
    put_f32(buf, 2.0f);
    std::ofstream(path, std::ios::binary) << buf;
    try {
      load_fvecs(path);
      FAIL("expected format_error");
    } catch (const format_error& e) {
      CHECK(e.offset() == 8);  // the second record's header
    }
  }

  SUBCASE("zero-dimensional record") {
    std::string buf;
    put_u32(buf, 0);
    std::ofstream(path, std::ios::binary) << buf;
    try {
      load_fvecs(path);
      FAIL("expected format_error");
    } catch (const format_error& e) {
      CHECK(e.offset() == 0);
    }
  }
  fs::remove(path);
}

TEST_CASE("ivecs round-trip") {
  IntTable t;
  t.dim = 3;
  t.values = {1, 2, 3, -4, 5, 6};
  auto path = fs::temp_directory_path() / "rolsh_test_rt.ivecs";
  save_ivecs(t, path);
  IntTable back = load_ivecs(path);
  CHECK(back.dim == 3);
  CHECK(back.values == t.values);
  fs::remove(path);
}

TEST_CASE("brute force k-NN: self-match, full ordering, independent oracle") {
  MixtureConfig mc;
  mc.n = 1000;
  mc.d = 8;
  mc.clusters = 4;
  mc.seed = 9;
  Dataset ds = generate_mixture(mc);

  auto self = brute_force_knn(ds, ds.point(7), 1);
  CHECK(self[0].first == 7);
  CHECK(self[0].second == 0.0);

  auto all = brute_force_knn(ds, ds.point(3), static_cast<std::uint32_t>(ds.size()));
  CHECK(all.size() == ds.size());
  for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i].second >= all[i - 1].second);

  for (std::uint32_t qi : {0u, 500u, 999u}) {
    auto got = brute_force_knn(ds, ds.point(qi), 25);
    auto want = oracle::knn_by_heap(ds, ds.point(qi), 25);
    CHECK(got == want);
  }

  CHECK_THROWS_AS(brute_force_knn(ds, ds.point(0), 0), std::invalid_argument);
  CHECK_THROWS_AS(brute_force_knn(ds, ds.point(0), 1001), std::invalid_argument);
}

TEST_CASE("accuracy ratio: exact, doubled, and degenerate ranks") {
  std::vector<std::pair<std::uint32_t, double>> truth{{0, 1.0}, {1, 2.0}, {2, 4.0}};
  CHECK(accuracy_ratio(truth, truth, 3).value == doctest::Approx(1.0));

  std::vector<std::pair<std::uint32_t, double>> twice{{5, 2.0}, {6, 4.0}, {7, 8.0}};
  CHECK(accuracy_ratio(twice, truth, 3).value == doctest::Approx(2.0));

  std::vector<std::pair<std::uint32_t, double>> gt0{{0, 0.0}, {1, 2.0}};
  std::vector<std::pair<std::uint32_t, double>> res_same{{0, 0.0}, {1, 3.0}};
  RatioResult r = accuracy_ratio(res_same, gt0, 2);
  CHECK(r.value == doctest::Approx((1.0 + 1.5) / 2.0));
  CHECK(r.excluded_ranks == 0);

  std::vector<std::pair<std::uint32_t, double>> res_far{{3, 0.5}, {1, 2.0}};
  RatioResult r2 = accuracy_ratio(res_far, gt0, 2);
  CHECK(r2.excluded_ranks == 1);
  CHECK(r2.value == doctest::Approx(1.0));  // only the well-defined rank remains

  CHECK_THROWS_AS(accuracy_ratio({truth.data(), 2}, truth, 3), std::invalid_argument);
}

TEST_CASE("qpt reproduces the worked example and is linear in seeks") {
  CostCounters zero;
  CHECK(qpt(zero) == 0.0);

  CHECK(std::abs(qpt_from(10, 1.56, 5.0, 2.0) - 92.24336) < 1e-12);
  CHECK(std::abs(qpt_from(20, 1.56, 5.0, 2.0) - qpt_from(10, 1.56, 5.0, 2.0) - 85.0) < 1e-12);

  // the counters route feeds the same arithmetic
  CostCounters c;
  c.disk_seeks = 10;
  c.data_read_bytes = 3u << 20;
  c.alg_time_ms = 5.0;
  c.fp_rem_time_ms = 2.0;
  CHECK(qpt(c) == qpt_from(10, 3.0, 5.0, 2.0));
}

TEST_CASE("query id sampling is seeded and distinct") {
  auto a = sample_query_ids(1000, 50, 7);
  auto b = sample_query_ids(1000, 50, 7);
  auto c = sample_query_ids(1000, 50, 8);
  CHECK(a == b);
  CHECK(a != c);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  CHECK_THROWS_AS(sample_query_ids(10, 11, 1), std::invalid_argument);
}

TEST_CASE("csv deterministic view blanks exactly the wall-clock columns") {
  MetricRow row;
  row.strategy = Strategy::ovr;
  row.k = 5;
  row.queries = 50;
  row.mean_disk_seeks = 12.5;
  row.mean_alg_time_ms = 3.25;
  row.mean_qpt_ms = 99.0;
  row.mean_ratio = 1.01;
  std::string csv = to_csv(std::vector<MetricRow>{row});
  std::string view = csv_deterministic_view(csv);
  CHECK(view.find("3.25") == std::string::npos);
  CHECK(view.find("99.0") == std::string::npos);
  CHECK(view.find("12.5") != std::string::npos);
  CHECK(view.find("1.01") != std::string::npos);

  MetricRow other = row;
  other.mean_alg_time_ms = 123.0;  // only wall-clock differs
  std::string csv2 = to_csv(std::vector<MetricRow>{other});
  CHECK(csv != csv2);
  CHECK(csv_deterministic_view(csv) == csv_deterministic_view(csv2));
}

TEST_CASE("mixture generator is seeded and respects its shape parameters") {
  MixtureConfig mc;
  mc.n = 500;
  mc.d = 16;
  mc.seed = 4;
  Dataset a = generate_mixture(mc);
  Dataset b = generate_mixture(mc);
  CHECK(a.values == b.values);
  CHECK(a.size() == 500);
  CHECK(a.dim == 16);
  mc.seed = 5;
  CHECK(generate_mixture(mc).values != a.values);
}

}  // TEST_SUITE
