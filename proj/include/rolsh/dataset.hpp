#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rolsh/common.hpp"
#include "rolsh/rng.hpp"

namespace rolsh {

/// Row-major point store. Ids are implicit: point i has id i.
struct Dataset {
  std::uint32_t dim = 0;
  std::vector<float> values;

  std::size_t size() const { return dim == 0 ? 0 : values.size() / dim; }

  std::span<const float> point(std::size_t i) const {
    return {values.data() + i * dim, dim};
  }

  void append(std::span<const float> coords) {
    if (dim == 0) dim = static_cast<std::uint32_t>(coords.size());
    if (coords.size() != dim) throw std::invalid_argument("Dataset::append: dimension mismatch");
    values.insert(values.end(), coords.begin(), coords.end());
  }

  /// Largest absolute coordinate value (the t in the b-interval bound).
  double max_abs_coordinate() const {
    double t = 0.0;
    for (float v : values) t = std::max(t, static_cast<double>(std::abs(v)));
    return t;
  }
};

inline double euclidean(std::span<const float> a, std::span<const float> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += d * d;
  }
  return std::sqrt(acc);
}

// --- fvecs / ivecs -------------------------------------------------------------
// One record = u32 little-endian dimension, then dim 4-byte little-endian
// payloads (float32 for fvecs, int32 for ivecs). Every record must share dim.

namespace detail {

template <typename T, typename Decode>
void load_vecs(const std::filesystem::path& path, std::uint32_t& dim, std::vector<T>& out,
               Decode decode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(path.string(), "cannot open");
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  std::size_t off = 0;
  dim = 0;
  out.clear();
  while (off < buf.size()) {
    if (off + 4 > buf.size())
      throw format_error(path.string(), off, "truncated record header");
    std::uint32_t d = get_u32(p + off);
    if (d == 0) throw format_error(path.string(), off, "zero-dimensional record");
    if (dim == 0)
      dim = d;
    else if (d != dim)
      throw format_error(path.string(), off,
                         "inconsistent dimension " + std::to_string(d) + " (expected " +
                             std::to_string(dim) + ")");
    off += 4;
    if (off + 4ull * d > buf.size())
      throw format_error(path.string(), off, "truncated record payload");
    for (std::uint32_t j = 0; j < d; ++j, off += 4) out.push_back(decode(p + off));
  }
}

}  // namespace detail

inline Dataset load_fvecs(const std::filesystem::path& path) {
  Dataset ds;
  detail::load_vecs<float>(path, ds.dim, ds.values,
                           [](const unsigned char* p) { return get_f32(p); });
  return ds;
}

inline void save_fvecs(const Dataset& ds, const std::filesystem::path& path) {
  std::string buf;
  buf.reserve(ds.values.size() * 4 + ds.size() * 4);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    put_u32(buf, ds.dim);
    for (float v : ds.point(i)) put_f32(buf, v);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error(path.string(), "cannot open for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw io_error(path.string(), "write failed");
}

/// Fixed-width integer tables (ground-truth neighbor ids and the like).
struct IntTable {
  std::uint32_t dim = 0;
  std::vector<std::int32_t> values;

  std::size_t rows() const { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const std::int32_t> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
};

inline IntTable load_ivecs(const std::filesystem::path& path) {
  IntTable t;
  detail::load_vecs<std::int32_t>(path, t.dim, t.values, [](const unsigned char* p) {
    return static_cast<std::int32_t>(get_u32(p));
  });
  return t;
}

inline void save_ivecs(const IntTable& t, const std::filesystem::path& path) {
  std::string buf;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    put_u32(buf, t.dim);
    for (std::int32_t v : t.row(i)) put_u32(buf, static_cast<std::uint32_t>(v));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error(path.string(), "cannot open for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw io_error(path.string(), "write failed");
}

// --- synthetic data -------------------------------------------------------------

struct MixtureConfig {
  std::size_t n = 10000;
  std::uint32_t d = 32;
  std::uint32_t clusters = 8;
  double center_spread = 60.0;  // centers uniform in [-spread, spread]^d
  double sigma_min = 1.0;       // per-cluster point scale, log-uniform in [min, max]
  double sigma_max = 2.5;
  std::uint64_t seed = 1;
};

/// Gaussian mixture with per-cluster scales, so the projected radius needed
/// for a fixed k varies with query location.
inline Dataset generate_mixture(const MixtureConfig& cfg) {
  if (cfg.n == 0 || cfg.d == 0 || cfg.clusters == 0)
    throw std::invalid_argument("generate_mixture: n, d, clusters must be > 0");
  SplitMix64 rng(cfg.seed);
  std::vector<double> centers(static_cast<std::size_t>(cfg.clusters) * cfg.d);
  for (auto& v : centers) v = rng.uniform() * 2.0 * cfg.center_spread - cfg.center_spread;
  std::vector<double> sigmas(cfg.clusters);
  double log_lo = std::log(cfg.sigma_min), log_hi = std::log(cfg.sigma_max);
  for (auto& s : sigmas) s = std::exp(log_lo + rng.uniform() * (log_hi - log_lo));

  Dataset ds;
  ds.dim = cfg.d;
  ds.values.resize(cfg.n * cfg.d);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    std::uint32_t cl = static_cast<std::uint32_t>(rng.below(cfg.clusters));
    const double* center = centers.data() + static_cast<std::size_t>(cl) * cfg.d;
    double sigma = sigmas[cl];
    for (std::uint32_t j = 0; j < cfg.d; j += 2) {
      double z0, z1;
      rng.gaussian_pair(z0, z1);
      ds.values[i * cfg.d + j] = static_cast<float>(center[j] + sigma * z0);
      if (j + 1 < cfg.d)
        ds.values[i * cfg.d + j + 1] = static_cast<float>(center[j + 1] + sigma * z1);
    }
  }
  return ds;
}

}  // namespace rolsh
