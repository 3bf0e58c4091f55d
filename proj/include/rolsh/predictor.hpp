#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rolsh/common.hpp"
#include "rolsh/ground_truth.hpp"
#include "rolsh/lsh.hpp"
#include "rolsh/rng.hpp"

namespace rolsh {

enum class PredictorKind { linear, mlp };

inline const char* predictor_kind_name(PredictorKind k) {
  return k == PredictorKind::linear ? "linear" : "mlp";
}

inline PredictorKind parse_predictor_kind(const std::string& name) {
  if (name == "linear") return PredictorKind::linear;
  if (name == "mlp") return PredictorKind::mlp;
  throw std::invalid_argument("unknown predictor kind '" + name + "' (linear, mlp)");
}

/// Per-feature standardization (zero mean, unit variance; constant columns
/// keep scale 1 so they map to zero).
struct Scaler {
  std::vector<double> shift;
  std::vector<double> scale;

  void fit(const std::vector<double>& rows, std::size_t n, std::size_t dim) {
    shift.assign(dim, 0.0);
    scale.assign(dim, 1.0);
    if (n == 0) return;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < dim; ++j) shift[j] += rows[i * dim + j];
    for (auto& v : shift) v /= static_cast<double>(n);
    std::vector<double> var(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < dim; ++j) {
        double d = rows[i * dim + j] - shift[j];
        var[j] += d * d;
      }
    for (std::size_t j = 0; j < dim; ++j) {
      double sd = std::sqrt(var[j] / static_cast<double>(n));
      scale[j] = sd > 1e-12 ? sd : 1.0;
    }
  }

  void apply(std::span<double> row) const {
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = (row[j] - shift[j]) / scale[j];
  }
};

struct LinearModel {
  std::vector<double> coef;
  double intercept = 0.0;

  double predict(std::span<const double> x) const {
    double acc = intercept;
    for (std::size_t j = 0; j < coef.size(); ++j) acc += coef[j] * x[j];
    return acc;
  }
};

/// One hidden rectified-linear layer with a single linear output.
struct MlpModel {
  std::uint32_t input_dim = 0;
  std::uint32_t hidden = 0;
  std::vector<double> w1;  // hidden x input_dim, row-major
  std::vector<double> b1;  // hidden
  std::vector<double> w2;  // hidden
  double b2 = 0.0;

  double predict(std::span<const double> x) const {
    double out = b2;
    for (std::uint32_t h = 0; h < hidden; ++h) {
      const double* row = w1.data() + static_cast<std::size_t>(h) * input_dim;
      double z = b1[h];
      for (std::uint32_t j = 0; j < input_dim; ++j) z += row[j] * x[j];
      if (z > 0.0) out += w2[h] * z;
    }
    return out;
  }
};

struct TrainConfig {
  PredictorKind kind = PredictorKind::mlp;
  std::uint32_t hidden = 100;
  std::uint32_t max_epochs = 200;
  std::uint32_t batch_size = 200;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double l2 = 1e-4;
  double tol = 1e-4;          // stop after `patience` epochs without this much improvement
  std::uint32_t patience = 10;
  std::uint32_t cv_folds = 10;  // 0 skips cross-validation
  std::uint64_t seed = 42;
  unsigned workers = 0;  // fold-level parallelism; 0 = hardware
};

/// Trained radius regressor plus the normalization that surrounds it.
struct RadiusPredictor {
  PredictorKind kind = PredictorKind::linear;
  std::uint32_t input_dim = 0;  // m bucket features + 1 for k
  Scaler features;
  double target_shift = 0.0;
  double target_scale = 1.0;
  LinearModel linear;
  MlpModel mlp;
  double cv_mse = -1.0;  // held-out, standardized targets; -1 when CV skipped
  double cv_r2 = 0.0;

  /// Denormalized real-valued prediction (no clamp, no rounding).
  double predict_raw(const Signature& sig, std::uint32_t k) const {
    if (sig.size() + 1 != input_dim)
      throw std::invalid_argument("predict: signature length mismatch");
    std::vector<double> x(input_dim);
    for (std::size_t j = 0; j < sig.size(); ++j) x[j] = static_cast<double>(sig[j]);
    x[input_dim - 1] = static_cast<double>(k);
    features.apply(x);
    double y = kind == PredictorKind::linear ? linear.predict(x) : mlp.predict(x);
    return y * target_scale + target_shift;
  }

  /// Integer radius, clamped to [1, max_radius].
  std::int64_t predict(const Signature& sig, std::uint32_t k, std::int64_t max_radius) const {
    double y = predict_raw(sig, k);
    if (!std::isfinite(y)) y = 1.0;
    std::int64_t r = std::llround(y);
    return std::clamp<std::int64_t>(r, 1, std::max<std::int64_t>(1, max_radius));
  }
};

namespace detail {

/// Cholesky solve of (X^T X + ridge I) beta = X^T y; X carries an implicit
/// trailing 1 column for the intercept.
inline LinearModel fit_linear(const std::vector<double>& x, const std::vector<double>& y,
                              std::span<const std::uint32_t> rows, std::size_t dim) {
  const std::size_t aug = dim + 1;
  std::vector<double> ata(aug * aug, 0.0);
  std::vector<double> aty(aug, 0.0);
  std::vector<double> xi(aug, 1.0);
  for (std::uint32_t r : rows) {
    for (std::size_t j = 0; j < dim; ++j) xi[j] = x[static_cast<std::size_t>(r) * dim + j];
    xi[dim] = 1.0;
    for (std::size_t a = 0; a < aug; ++a) {
      for (std::size_t b = a; b < aug; ++b) ata[a * aug + b] += xi[a] * xi[b];
      aty[a] += xi[a] * y[r];
    }
  }
  for (std::size_t a = 0; a < aug; ++a) {
    ata[a * aug + a] += 1e-10;
    for (std::size_t b = 0; b < a; ++b) ata[a * aug + b] = ata[b * aug + a];
  }
  // in-place Cholesky
  for (std::size_t i = 0; i < aug; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = ata[i * aug + j];
      for (std::size_t t = 0; t < j; ++t) sum -= ata[i * aug + t] * ata[j * aug + t];
      if (i == j) {
        if (sum <= 0.0) sum = 1e-12;
        ata[i * aug + i] = std::sqrt(sum);
      } else {
        ata[i * aug + j] = sum / ata[j * aug + j];
      }
    }
  }
  std::vector<double> tmp(aug);
  for (std::size_t i = 0; i < aug; ++i) {
    double sum = aty[i];
    for (std::size_t t = 0; t < i; ++t) sum -= ata[i * aug + t] * tmp[t];
    tmp[i] = sum / ata[i * aug + i];
  }
  std::vector<double> beta(aug);
  for (std::size_t ii = aug; ii-- > 0;) {
    double sum = tmp[ii];
    for (std::size_t t = ii + 1; t < aug; ++t) sum -= ata[t * aug + ii] * beta[t];
    beta[ii] = sum / ata[ii * aug + ii];
  }
  LinearModel model;
  model.coef.assign(beta.begin(), beta.begin() + dim);
  model.intercept = beta[dim];
  return model;
}

inline MlpModel fit_mlp(const std::vector<double>& x, const std::vector<double>& y,
                        std::span<const std::uint32_t> rows, std::size_t dim,
                        const TrainConfig& cfg, std::uint64_t seed) {
  MlpModel model;
  model.input_dim = static_cast<std::uint32_t>(dim);
  model.hidden = cfg.hidden;
  const std::size_t h = cfg.hidden;

  SplitMix64 rng(seed);
  auto glorot = [&](std::size_t fan_in, std::size_t fan_out) {
    double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    return (rng.uniform() * 2.0 - 1.0) * limit;
  };
  model.w1.resize(h * dim);
  for (auto& v : model.w1) v = glorot(dim, h);
  model.b1.assign(h, 0.0);
  model.w2.resize(h);
  for (auto& v : model.w2) v = glorot(h, 1);
  model.b2 = 0.0;

  // Adam state, one slot per parameter group
  std::vector<double> m_w1(h * dim, 0.0), v_w1(h * dim, 0.0);
  std::vector<double> m_b1(h, 0.0), v_b1(h, 0.0);
  std::vector<double> m_w2(h, 0.0), v_w2(h, 0.0);
  double m_b2 = 0.0, v_b2 = 0.0;

  std::vector<std::uint32_t> order(rows.begin(), rows.end());
  const std::size_t n = order.size();
  const std::size_t batch = std::max<std::size_t>(1, std::min<std::size_t>(cfg.batch_size, n));

  std::vector<double> z1(batch * h);
  std::vector<double> grad_w1(h * dim), grad_b1(h), grad_w2(h);
  std::vector<double> delta1(h);

  double best_loss = std::numeric_limits<double>::infinity();
  std::uint32_t stale = 0;
  std::uint64_t step = 0;

  for (std::uint32_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    // seeded Fisher-Yates shuffle
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    double epoch_sq = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      std::size_t count = std::min(batch, n - start);
      std::fill(grad_w1.begin(), grad_w1.end(), 0.0);
      std::fill(grad_b1.begin(), grad_b1.end(), 0.0);
      std::fill(grad_w2.begin(), grad_w2.end(), 0.0);
      double grad_b2 = 0.0;

      for (std::size_t s = 0; s < count; ++s) {
        const double* xi = x.data() + static_cast<std::size_t>(order[start + s]) * dim;
        double* zrow = z1.data() + s * h;
        double out = model.b2;
        for (std::size_t u = 0; u < h; ++u) {
          const double* wrow = model.w1.data() + u * dim;
          double z = model.b1[u];
          for (std::size_t j = 0; j < dim; ++j) z += wrow[j] * xi[j];
          zrow[u] = z;
          if (z > 0.0) out += model.w2[u] * z;
        }
        double err = out - y[order[start + s]];
        epoch_sq += err * err;

        for (std::size_t u = 0; u < h; ++u) {
          double z = zrow[u];
          if (z > 0.0) {
            grad_w2[u] += err * z;
            delta1[u] = err * model.w2[u];
          } else {
            delta1[u] = 0.0;
          }
        }
        grad_b2 += err;
        for (std::size_t u = 0; u < h; ++u) {
          double d = delta1[u];
          if (d == 0.0) continue;
          double* grow = grad_w1.data() + u * dim;
          for (std::size_t j = 0; j < dim; ++j) grow[j] += d * xi[j];
          grad_b1[u] += d;
        }
      }

      double inv = 2.0 / static_cast<double>(count);  // d/dout of squared error
      ++step;
      double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(step));
      double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(step));
      auto adam = [&](double& param, double& m, double& v, double g) {
        m = cfg.adam_beta1 * m + (1.0 - cfg.adam_beta1) * g;
        v = cfg.adam_beta2 * v + (1.0 - cfg.adam_beta2) * g * g;
        param -= cfg.learning_rate * (m / bc1) / (std::sqrt(v / bc2) + cfg.adam_eps);
      };
      for (std::size_t i = 0; i < h * dim; ++i)
        adam(model.w1[i], m_w1[i], v_w1[i], grad_w1[i] * inv + cfg.l2 * model.w1[i]);
      for (std::size_t u = 0; u < h; ++u) {
        adam(model.b1[u], m_b1[u], v_b1[u], grad_b1[u] * inv);
        adam(model.w2[u], m_w2[u], v_w2[u], grad_w2[u] * inv + cfg.l2 * model.w2[u]);
      }
      adam(model.b2, m_b2, v_b2, grad_b2 * inv);
    }

    double epoch_loss = epoch_sq / static_cast<double>(n);
    if (epoch_loss < best_loss - cfg.tol) {
      best_loss = epoch_loss;
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;
    }
  }
  return model;
}

}  // namespace detail

struct CvMetrics {
  double mse = 0.0;
  double r2 = 0.0;
};

/// Trains on standardized features/targets. With cv_folds > 0 also runs
/// k-fold cross-validation (seeded shuffle, folds fitted in parallel) and
/// records held-out MSE / R^2 on the standardized target scale before the
/// final fit on all samples.
inline RadiusPredictor train_predictor(std::span<const TrainingSample> samples,
                                       const TrainConfig& cfg) {
  if (samples.size() < 10) throw std::invalid_argument("train_predictor: need at least 10 samples");
  const std::size_t n = samples.size();
  const std::size_t dim = samples.front().sig.size() + 1;

  RadiusPredictor pred;
  pred.kind = cfg.kind;
  pred.input_dim = static_cast<std::uint32_t>(dim);

  std::vector<double> x(n * dim);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = samples[i];
    if (s.sig.size() + 1 != dim) throw std::invalid_argument("train_predictor: ragged features");
    for (std::size_t j = 0; j + 1 < dim; ++j) x[i * dim + j] = static_cast<double>(s.sig[j]);
    x[i * dim + dim - 1] = static_cast<double>(s.k);
    y[i] = static_cast<double>(s.target);
  }
  pred.features.fit(x, n, dim);
  for (std::size_t i = 0; i < n; ++i) pred.features.apply({x.data() + i * dim, dim});

  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  pred.target_shift = mean;
  pred.target_scale = var > 1e-12 ? std::sqrt(var) : 1.0;
  for (auto& v : y) v = (v - pred.target_shift) / pred.target_scale;

  auto fit_rows = [&](std::span<const std::uint32_t> rows, std::uint64_t seed, LinearModel& lin,
                      MlpModel& mlp) {
    if (cfg.kind == PredictorKind::linear)
      lin = detail::fit_linear(x, y, rows, dim);
    else
      mlp = detail::fit_mlp(x, y, rows, dim, cfg, seed);
  };

  if (cfg.cv_folds > 1) {
    std::vector<std::uint32_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);
    SplitMix64 shuffle_rng(cfg.seed ^ 0x5f01d1ceULL);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[shuffle_rng.below(i)]);

    std::uint32_t folds = std::min<std::uint32_t>(cfg.cv_folds, static_cast<std::uint32_t>(n));
    std::vector<double> fold_sq(folds, 0.0);
    std::vector<double> fold_var(folds, 0.0);
    std::vector<std::uint64_t> fold_n(folds, 0);

    parallel_for(folds, cfg.workers, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t f = lo; f < hi; ++f) {
        std::vector<std::uint32_t> train_rows, test_rows;
        for (std::size_t i = 0; i < n; ++i) {
          if (i % folds == f)
            test_rows.push_back(order[i]);
          else
            train_rows.push_back(order[i]);
        }
        LinearModel lin;
        MlpModel mlp;
        fit_rows(train_rows, cfg.seed + 1000 + f, lin, mlp);
        double test_mean = 0.0;
        for (std::uint32_t r : test_rows) test_mean += y[r];
        test_mean /= static_cast<double>(test_rows.size());
        for (std::uint32_t r : test_rows) {
          std::span<const double> xi{x.data() + static_cast<std::size_t>(r) * dim, dim};
          double pr = cfg.kind == PredictorKind::linear ? lin.predict(xi) : mlp.predict(xi);
          fold_sq[f] += (pr - y[r]) * (pr - y[r]);
          fold_var[f] += (y[r] - test_mean) * (y[r] - test_mean);
        }
        fold_n[f] = test_rows.size();
      }
    });

    double sq = 0.0, tot = 0.0;
    std::uint64_t cnt = 0;
    for (std::uint32_t f = 0; f < folds; ++f) {
      sq += fold_sq[f];
      tot += fold_var[f];
      cnt += fold_n[f];
    }
    pred.cv_mse = sq / static_cast<double>(cnt);
    pred.cv_r2 = tot > 0.0 ? 1.0 - sq / tot : 0.0;
  }

  std::vector<std::uint32_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<std::uint32_t>(i);
  fit_rows(all, cfg.seed, pred.linear, pred.mlp);
  return pred;
}

// --- serialization -------------------------------------------------------------
// magic "RLSHPRD1", version u32, kind u8, input_dim u32, hidden u32,
// feature shift/scale, target shift/scale, cv stats, weights.

inline constexpr char kPredictorMagic[8] = {'R', 'L', 'S', 'H', 'P', 'R', 'D', '1'};
inline constexpr std::uint32_t kPredictorVersion = 1;

inline void save_predictor(const RadiusPredictor& p, const std::filesystem::path& path) {
  std::string buf;
  buf.append(kPredictorMagic, 8);
  put_u32(buf, kPredictorVersion);
  buf.push_back(p.kind == PredictorKind::linear ? 0 : 1);
  put_u32(buf, p.input_dim);
  put_u32(buf, p.kind == PredictorKind::mlp ? p.mlp.hidden : 0);
  for (double v : p.features.shift) put_f64(buf, v);
  for (double v : p.features.scale) put_f64(buf, v);
  put_f64(buf, p.target_shift);
  put_f64(buf, p.target_scale);
  put_f64(buf, p.cv_mse);
  put_f64(buf, p.cv_r2);
  if (p.kind == PredictorKind::linear) {
    for (double v : p.linear.coef) put_f64(buf, v);
    put_f64(buf, p.linear.intercept);
  } else {
    for (double v : p.mlp.w1) put_f64(buf, v);
    for (double v : p.mlp.b1) put_f64(buf, v);
    for (double v : p.mlp.w2) put_f64(buf, v);
    put_f64(buf, p.mlp.b2);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error(path.string(), "cannot open for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw io_error(path.string(), "write failed");
}

inline RadiusPredictor load_predictor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(path.string(), "cannot open");
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
  if (buf.size() < 21 || std::memcmp(p, kPredictorMagic, 8) != 0)
    throw format_error(path.string(), 0, "not a predictor file");
  if (get_u32(p + 8) != kPredictorVersion)
    throw format_error(path.string(), 8, "unsupported predictor version");
  RadiusPredictor out;
  out.kind = p[12] == 0 ? PredictorKind::linear : PredictorKind::mlp;
  out.input_dim = get_u32(p + 13);
  std::uint32_t hidden = get_u32(p + 17);
  std::size_t off = 21;
  auto f64 = [&]() {
    if (off + 8 > buf.size()) throw format_error(path.string(), off, "truncated predictor");
    double v = get_f64(p + off);
    off += 8;
    return v;
  };
  out.features.shift.resize(out.input_dim);
  for (auto& v : out.features.shift) v = f64();
  out.features.scale.resize(out.input_dim);
  for (auto& v : out.features.scale) v = f64();
  out.target_shift = f64();
  out.target_scale = f64();
  out.cv_mse = f64();
  out.cv_r2 = f64();
  if (out.kind == PredictorKind::linear) {
    out.linear.coef.resize(out.input_dim);
    for (auto& v : out.linear.coef) v = f64();
    out.linear.intercept = f64();
  } else {
    out.mlp.input_dim = out.input_dim;
    out.mlp.hidden = hidden;
    out.mlp.w1.resize(static_cast<std::size_t>(hidden) * out.input_dim);
    for (auto& v : out.mlp.w1) v = f64();
    out.mlp.b1.resize(hidden);
    for (auto& v : out.mlp.b1) v = f64();
    out.mlp.w2.resize(hidden);
    for (auto& v : out.mlp.w2) v = f64();
    out.mlp.b2 = f64();
  }
  if (off != buf.size()) throw format_error(path.string(), off, "trailing bytes in predictor");
  return out;
}

}  // namespace rolsh
