#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rolsh/common.hpp"
#include "rolsh/quadrature.hpp"
#include "rolsh/rng.hpp"

namespace rolsh {

using Bucket = std::int64_t;

/// One p-stable projection h(x) = floor((a.x + b) / w).
struct HashFunction {
  std::vector<double> a;  // i.i.d. standard normal entries, one per dimension
  double b = 0.0;         // uniform offset in [0, b_upper)
  double w = 1.0;         // bucket width
};

/// Probability that two points at Euclidean distance r share a bucket under a
/// width-w projection. Evaluated by adaptive Simpson quadrature (1e-9 abs).
inline double collision_prob(double r, double w) {
  if (!(r > 0.0)) throw std::domain_error("collision_prob: r must be > 0");
  if (!(w > 0.0)) throw std::domain_error("collision_prob: w must be > 0");
  const double norm = 2.0 / std::sqrt(2.0 * std::numbers::pi);
  auto f = [r, w, norm](double t) {
    return (1.0 / r) * norm * std::exp(-t * t / (2.0 * r * r)) * (1.0 - t / w);
  };
  return adaptive_simpson(f, 0.0, w, 1e-9);
}

/// Collision-counting constants derived for a dataset of cardinality n.
struct LshParams {
  std::uint64_t n = 0;
  double c = 2.0;      // approximation ratio, > 1
  double w = 2.184;    // bucket width
  double delta = 0.1;  // error probability
  double beta = 0.0;   // allowed false-positive fraction, 100/n
  double p1 = 0.0;     // collision_prob(1, w)
  double p2 = 0.0;     // collision_prob(c, w)
  double z = 0.0;
  double alpha = 0.0;  // collision threshold percentage
  std::uint32_t m = 0;  // number of hash layers (= hash functions)
  std::uint32_t l = 0;  // collision count threshold

  /// Candidate-count termination threshold for top-k: k + ceil(beta * n).
  std::uint64_t false_positive_allowance() const {
    return static_cast<std::uint64_t>(ceil_guarded(beta * static_cast<double>(n)));
  }
};

inline LshParams derive_params(std::uint64_t n, double c, double w, double delta) {
  if (n < 100) throw std::invalid_argument("derive_params: n must be >= 100 (beta = 100/n)");
  if (!(c > 1.0)) throw std::invalid_argument("derive_params: c must be > 1");
  if (!(w > 0.0)) throw std::invalid_argument("derive_params: w must be > 0");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("derive_params: delta must be in (0,1)");

  LshParams p;
  p.n = n;
  p.c = c;
  p.w = w;
  p.delta = delta;
  p.beta = 100.0 / static_cast<double>(n);
  p.p1 = collision_prob(1.0, w);
  p.p2 = collision_prob(c, w);
  p.z = std::sqrt(std::log(2.0 / p.beta) / std::log(1.0 / delta));
  double diff = p.p1 - p.p2;
  double m_real = std::log(1.0 / delta) / (2.0 * diff * diff) * (1.0 + p.z) * (1.0 + p.z);
  p.m = static_cast<std::uint32_t>(ceil_guarded(m_real));
  p.alpha = (p.z * p.p1 + p.p2) / (1.0 + p.z);
  p.l = static_cast<std::uint32_t>(ceil_guarded(p.alpha * static_cast<double>(p.m)));
  return p;
}

inline Bucket hash_point(std::span<const float> coords, const HashFunction& fn) {
  if (coords.size() != fn.a.size())
    throw std::invalid_argument("hash_point: dimension mismatch");
  double acc = fn.b;
  for (std::size_t j = 0; j < coords.size(); ++j) acc += fn.a[j] * static_cast<double>(coords[j]);
  return static_cast<Bucket>(std::floor(acc / fn.w));
}

/// Level hash: floor(bucket / R), mathematical floor so that negative buckets
/// group the same way as positive ones.
inline Bucket hash_level(Bucket bucket, std::int64_t radius) {
  if (radius < 1) throw std::invalid_argument("hash_level: R must be >= 1");
  return floor_div(bucket, radius);
}

/// The m per-projection bucket locations of a point, in layer order.
using Signature = std::vector<Bucket>;

/// The b offsets are drawn from [0, b_upper); callers compute b_upper from the
/// dataset extent (see b_interval_upper below).
struct FamilyConfig {
  std::uint32_t d = 0;
  std::uint32_t m = 0;
  double w = 2.184;
  std::uint64_t seed = 0;
  double b_upper = 2.184;
};

struct HashFamily {
  std::vector<HashFunction> functions;
  std::uint32_t d = 0;
  double w = 0.0;
  std::uint64_t seed = 0;

  std::uint32_t size() const { return static_cast<std::uint32_t>(functions.size()); }

  Signature signature(std::span<const float> coords) const {
    Signature sig(functions.size());
    for (std::size_t i = 0; i < functions.size(); ++i) sig[i] = hash_point(coords, functions[i]);
    return sig;
  }
};

/// Width of the b interval and the search-radius bound share one exponent:
/// e = max(0, ceil(log_c(t*d))) where t is the largest absolute coordinate.
inline int radius_exponent(double t, std::uint32_t d, double c) {
  double td = t * static_cast<double>(d);
  if (!(td > 1.0)) return 0;
  return static_cast<int>(std::ceil(std::log(td) / std::log(c) - 1e-12));
}

enum class BInterval { w_squared, w };  // upper bound c^e * w^2 (default) or c^e * w

inline double b_interval_upper(double t, std::uint32_t d, double c, double w,
                               BInterval mode = BInterval::w_squared) {
  double scale = std::pow(c, radius_exponent(t, d, c));
  return mode == BInterval::w_squared ? scale * w * w : scale * w;
}

/// Largest radius the engine will expand to: c^e as an integer.
inline std::int64_t max_search_radius(double t, std::uint32_t d, double c) {
  return static_cast<std::int64_t>(std::llround(std::pow(c, radius_exponent(t, d, c))));
}

/// Deterministic generation: one splitmix stream, each function consumes
/// ceil(d/2) Box-Muller pairs then one uniform draw for b.
inline HashFamily make_family(const FamilyConfig& cfg) {
  if (cfg.d == 0 || cfg.m == 0) throw std::invalid_argument("make_family: d and m must be > 0");
  if (!(cfg.w > 0.0)) throw std::invalid_argument("make_family: w must be > 0");
  if (!(cfg.b_upper > 0.0)) throw std::invalid_argument("make_family: b_upper must be > 0");
  HashFamily fam;
  fam.d = cfg.d;
  fam.w = cfg.w;
  fam.seed = cfg.seed;
  fam.functions.resize(cfg.m);
  SplitMix64 rng(cfg.seed);
  for (auto& fn : fam.functions) {
    fn.a.resize(cfg.d);
    for (std::uint32_t j = 0; j < cfg.d; j += 2) {
      double z0, z1;
      rng.gaussian_pair(z0, z1);
      fn.a[j] = z0;
      if (j + 1 < cfg.d) fn.a[j + 1] = z1;
    }
    fn.b = rng.uniform(cfg.b_upper);
    fn.w = cfg.w;
  }
  return fam;
}

// --- serialization ------------------------------------------------------------
// family file: magic "RLSHFAM1", version u32, d u32, m u32, w f64, seed u64,
// then per function d little-endian f64 (a) followed by one f64 (b).

inline constexpr char kFamilyMagic[8] = {'R', 'L', 'S', 'H', 'F', 'A', 'M', '1'};
inline constexpr std::uint32_t kFamilyVersion = 1;

inline void save_family(const HashFamily& fam, const std::filesystem::path& path) {
  std::string buf;
  buf.append(kFamilyMagic, 8);
  put_u32(buf, kFamilyVersion);
  put_u32(buf, fam.d);
  put_u32(buf, fam.size());
  put_f64(buf, fam.w);
  put_u64(buf, fam.seed);
  for (const auto& fn : fam.functions) {
    for (double v : fn.a) put_f64(buf, v);
    put_f64(buf, fn.b);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error(path.string(), "cannot open for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw io_error(path.string(), "write failed");
}

inline HashFamily load_family(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(path.string(), "cannot open");
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  if (buf.size() < 36 || std::memcmp(p, kFamilyMagic, 8) != 0)
    throw format_error(path.string(), 0, "not a hash family file");
  if (get_u32(p + 8) != kFamilyVersion)
    throw format_error(path.string(), 8, "unsupported family version");
  HashFamily fam;
  fam.d = get_u32(p + 12);
  std::uint32_t m = get_u32(p + 16);
  fam.w = get_f64(p + 20);
  fam.seed = get_u64(p + 28);
  std::size_t need = 36 + static_cast<std::size_t>(m) * (fam.d + 1) * 8;
  if (buf.size() != need)
    throw format_error(path.string(), buf.size(), "truncated or oversized family file");
  std::size_t off = 36;
  fam.functions.resize(m);
  for (auto& fn : fam.functions) {
    fn.a.resize(fam.d);
    for (std::uint32_t j = 0; j < fam.d; ++j, off += 8) fn.a[j] = get_f64(p + off);
    fn.b = get_f64(p + off);
    off += 8;
    fn.w = fam.w;
  }
  return fam;
}

}  // namespace rolsh
