#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "rolsh/common.hpp"

namespace rolsh {

enum class Strategy { ovr, ivr, nn_ivr, nn_lambda };

inline const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::ovr: return "ovr";
    case Strategy::ivr: return "ivr";
    case Strategy::nn_ivr: return "nn-ivr";
    case Strategy::nn_lambda: return "nn-lambda";
  }
  return "?";
}

inline Strategy parse_strategy(const std::string& name) {
  if (name == "ovr") return Strategy::ovr;
  if (name == "ivr") return Strategy::ivr;
  if (name == "nn-ivr") return Strategy::nn_ivr;
  if (name == "nn-lambda") return Strategy::nn_lambda;
  throw std::invalid_argument("unknown strategy '" + name + "' (ovr, ivr, nn-ivr, nn-lambda)");
}

/// How a predicted radius is snapped to a power of two when it seeds the
/// doubling sequence (whose log2 terms must be integral).
enum class I2rRounding { up, down };

/// Emits the strictly increasing radius sequence for one query. Construct via
/// the factory helpers so the per-strategy invariants hold.
struct RadiusSchedule {
  Strategy strategy = Strategy::ovr;
  double c = 2.0;
  std::int64_t i2r = 0;     // iVR variants: initial radius, a power of 2
  std::int64_t r_pred = 0;  // NN variants: predicted radius
  double lambda = 0.1;      // nn-lambda increment fraction
};

inline RadiusSchedule make_ovr(double c) {
  if (!(c > 1.0)) throw std::invalid_argument("schedule: c must be > 1");
  RadiusSchedule s;
  s.strategy = Strategy::ovr;
  s.c = c;
  return s;
}

inline RadiusSchedule make_ivr(double c, std::int64_t i2r) {
  if (!(c > 1.0)) throw std::invalid_argument("schedule: c must be > 1");
  if (i2r < 1) throw std::invalid_argument("schedule: i2R must be >= 1");
  RadiusSchedule s;
  s.strategy = Strategy::ivr;
  s.c = c;
  s.i2r = ceil_pow2(i2r);  // the piecewise formula needs integral log2
  return s;
}

/// The doubling sequence needs a power-of-two seed. Snapping the prediction
/// DOWN keeps the seed at or below R_pred, so prediction error still shows up
/// as underestimation and the small-step climb that comes with it; snapping
/// up silently pads every prediction by up to 2x and suppresses that regime.
inline RadiusSchedule make_nn_ivr(double c, std::int64_t r_pred,
                                  I2rRounding rounding = I2rRounding::down) {
  if (!(c > 1.0)) throw std::invalid_argument("schedule: c must be > 1");
  if (r_pred < 1) throw std::invalid_argument("schedule: R_pred must be >= 1");
  RadiusSchedule s;
  s.strategy = Strategy::nn_ivr;
  s.c = c;
  s.r_pred = r_pred;
  s.i2r = rounding == I2rRounding::up ? ceil_pow2(r_pred) : floor_pow2(r_pred);
  return s;
}

inline RadiusSchedule make_nn_lambda(double c, std::int64_t r_pred, double lambda) {
  if (!(c > 1.0)) throw std::invalid_argument("schedule: c must be > 1");
  if (r_pred < 1) throw std::invalid_argument("schedule: R_pred must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("schedule: lambda must be > 0");
  RadiusSchedule s;
  s.strategy = Strategy::nn_lambda;
  s.c = c;
  s.r_pred = r_pred;
  s.lambda = lambda;
  return s;
}

namespace detail {

/// Smallest radius of the exponential sequence 1, c, c^2, ... above `current`.
inline std::int64_t next_power_radius(double c, std::int64_t current) {
  double v = 1.0;
  for (int i = 0; i < 256; ++i) {
    std::int64_t r = std::llround(v);
    if (r > current) return r;
    v *= c;
  }
  throw std::runtime_error("schedule: exponential radius overflow");
}

}  // namespace detail

/// The next radius after `current` (none = start of the sequence). Sequences:
///   ovr:       1, c, c^2, ...
///   ivr:       i2R+1, i2R+2, i2R+4, ..., 2*i2R, then 4*i2R, 8*i2R, ...
///              (the doubling tail would re-emit 2*i2R; duplicates collapse)
///   nn-lambda: R_pred, R_pred + ceil(R_pred*lambda), R_pred + 2*ceil(...), ...
///   nn-ivr:    the ivr sequence seeded with i2R snapped from R_pred
inline std::int64_t next_radius(const RadiusSchedule& s, std::optional<std::int64_t> current) {
  switch (s.strategy) {
    case Strategy::ovr:
      if (!current) return 1;
      return detail::next_power_radius(s.c, *current);

    case Strategy::ivr:
    case Strategy::nn_ivr: {
      if (!current) return s.i2r + 1;
      std::int64_t cur = *current;
      if (cur < 2 * s.i2r) {
        std::int64_t delta = cur - s.i2r;
        if (delta < 1) return s.i2r + 1;
        return s.i2r + std::min(2 * delta, s.i2r);
      }
      return 2 * cur;
    }

    case Strategy::nn_lambda: {
      std::int64_t inc = std::max<std::int64_t>(
          1, ceil_guarded(static_cast<double>(s.r_pred) * s.lambda));
      if (!current) return s.r_pred;
      return *current + inc;
    }
  }
  throw std::logic_error("next_radius: unhandled strategy");
}

/// Number of radii the schedule emits before reaching one >= target (the
/// rounds a query with minimal feasible radius `target` examines). A target
/// below the first radius still costs one round.
inline int radii_until(const RadiusSchedule& s, std::int64_t target,
                       std::int64_t* terminal = nullptr) {
  std::optional<std::int64_t> cur;
  int count = 0;
  for (;;) {
    std::int64_t r = next_radius(s, cur);
    ++count;
    if (r >= target) {
      if (terminal) *terminal = r;
      return count;
    }
    cur = r;
    if (count > 4096) throw std::runtime_error("radii_until: runaway schedule");
  }
}

/// Predecessor of R in the exponential sequence 1, c, c^2, ... (1 for R <= 1).
inline std::int64_t ovr_predecessor(double c, std::int64_t radius) {
  std::int64_t prev = 1;
  double v = 1.0;
  for (int i = 0; i < 256; ++i) {
    std::int64_t r = std::llround(v);
    if (r >= radius) return prev;
    prev = r;
    v *= c;
  }
  throw std::runtime_error("ovr_predecessor: radius out of range");
}

}  // namespace rolsh
