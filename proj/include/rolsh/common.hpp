#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace rolsh {

/// I/O failure carrying the offending path.
class io_error : public std::runtime_error {
 public:
  io_error(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Malformed on-disk record; `offset` is the byte position of the defect.
class format_error : public std::runtime_error {
 public:
  format_error(const std::string& path, std::uint64_t offset, const std::string& what)
      : std::runtime_error(path + " @ byte " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

// --- little-endian encoding helpers -----------------------------------------
// All on-disk integers and reals are little-endian regardless of host order.

inline void put_le(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_u32(std::string& out, std::uint32_t v) { put_le(out, v, 4); }
inline void put_u64(std::string& out, std::uint64_t v) { put_le(out, v, 8); }
inline void put_i64(std::string& out, std::int64_t v) { put_le(out, static_cast<std::uint64_t>(v), 8); }
inline void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
inline void put_f32(std::string& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

inline std::uint64_t get_le(const unsigned char* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}
inline std::uint32_t get_u32(const unsigned char* p) { return static_cast<std::uint32_t>(get_le(p, 4)); }
inline std::uint64_t get_u64(const unsigned char* p) { return get_le(p, 8); }
inline std::int64_t get_i64(const unsigned char* p) { return static_cast<std::int64_t>(get_le(p, 8)); }
inline double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_u64(p)); }
inline float get_f32(const unsigned char* p) { return std::bit_cast<float>(get_u32(p)); }

// --- integer math ------------------------------------------------------------

/// Floor division toward -inf (both operands may be negative, divisor > 0).
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t ceil_pow2(std::int64_t v) {
  if (v <= 1) return 1;
  return static_cast<std::int64_t>(std::bit_ceil(static_cast<std::uint64_t>(v)));
}

inline std::int64_t floor_pow2(std::int64_t v) {
  if (v <= 1) return 1;
  return static_cast<std::int64_t>(std::bit_floor(static_cast<std::uint64_t>(v)));
}

/// ceil(x) with a guard against values that are an epsilon above an integer
/// from float round-off (beta*n is 100 by construction and must stay 100).
inline std::int64_t ceil_guarded(double x) {
  return static_cast<std::int64_t>(std::ceil(x - 1e-9));
}

// --- tiny thread-pool-free parallel for --------------------------------------
// Splits [0, n) into contiguous chunks, one per worker. Deterministic output is
// the caller's job: write results by index, never append under contention.

inline void parallel_for(std::size_t n, unsigned workers,
                         const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (workers == 0) workers = hw ? hw : 1;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned t = 0; t < workers; ++t) {
    std::size_t lo = t * chunk;
    std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : threads) th.join();
}

}  // namespace rolsh
