#include "impact/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "impact/rng.hpp"

namespace impact {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0))
    throw Error("trainer.InvalidConfig", "learning_rate must be positive");
  if (epochs < 1) throw Error("trainer.InvalidConfig", "epochs must be >= 1");
  if (l2 < 0.0) throw Error("trainer.InvalidConfig", "l2 must be non-negative");
  if (early_stop_patience < 0)
    throw Error("trainer.InvalidConfig", "early_stop_patience must be non-negative");
  if (validation_fraction < 0.0 || validation_fraction > 0.5)
    throw Error("trainer.InvalidConfig", "validation_fraction must lie in [0, 0.5]");
  if (degree < 1) throw Error("trainer.InvalidConfig", "degree must be >= 1");
}

std::string TrainHistory::to_csv() const {
  std::ostringstream out;
  out << "epoch,train_loss,validation_loss\n";
  out.precision(17);
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    out << i << ',' << epochs[i].train_loss << ',';
    if (!std::isnan(epochs[i].validation_loss)) out << epochs[i].validation_loss;
    out << '\n';
  }
  return out.str();
}

std::pair<double, double> init_rni(const std::vector<double>& y) {
  if (y.size() < 2)
    throw Error("trainer.SingleSample", "init_rni needs at least two target values");
  double lo = y[0], hi = y[0];
  for (double v : y) {
    if (v <= 0.0)
      throw Error("trainer.NonPositiveTarget",
                  "target value " + std::to_string(v) + " is not positive; the "
                  "log-range initialization needs a positive target range");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double r = std::log(hi / lo) / static_cast<double>(y.size() - 1);
  double k = hi * (1.0 + 1e-6);
  return {r, k};
}

double loss(const ImpactModel& m, const Dataset& ds, double l2) {
  return kernels::mse_loss(m, ds.features, ds.target, l2);
}

kernels::GradientBundle gradient(const ImpactModel& m, const Dataset& ds, double l2,
                                 bool with_r) {
  return kernels::mse_gradient(m, ds.features, ds.target, l2, with_r);
}

namespace {

// (r, k) init per the header contract; reports whether r must be learned
// because the log-range value is unusable.
struct RniInit {
  double r;
  double k;
  bool force_learn_r;
};

RniInit choose_rni(const std::vector<double>& y) {
  bool all_positive = true;
  for (double v : y)
    if (v <= 0.0) {
      all_positive = false;
      break;
    }
  if (all_positive) {
    auto [r, k] = init_rni(y);
    // Constant targets give r = 0, which starts the model on its pole when
    // w_y = 0. Fall back to a learned r in that case too.
    if (std::abs(r) > 1e-9) return {r, k, false};
    return {1.0, k, true};
  }
  return {1.0, 1.0, true};
}

}  // namespace

std::pair<ImpactModel, TrainHistory> fit_gd(const Dataset& ds, const TrainConfig& cfg) {
  cfg.validate();
  if (ds.n() == 0) throw Error("trainer.EmptyDataset", "cannot fit on zero rows");
  if (ds.has_missing()) throw Error("trainer.MissingCells", "impute before fitting");

  // Optional validation slice: seeded shuffle, then the tail is held out.
  Dataset train = ds;
  Dataset validation;
  bool use_validation = false;
  if (cfg.validation_fraction > 0.0) {
    auto n_val = static_cast<std::size_t>(
        std::floor(cfg.validation_fraction * static_cast<double>(ds.n())));
    if (n_val >= 1 && n_val < ds.n()) {
      auto idx = shuffled_indices(ds.n(), derive_seed(cfg.init_seed, "fit_gd.validation"));
      std::vector<std::size_t> train_idx(idx.begin(), idx.end() - n_val);
      std::vector<std::size_t> val_idx(idx.end() - n_val, idx.end());
      train = take_rows(ds, train_idx);
      validation = take_rows(ds, val_idx);
      use_validation = true;
    }
  }

  auto rni = choose_rni(train.target);
  const bool learn_r = cfg.learn_r || rni.force_learn_r;

  ImpactModel m;
  m.degree = cfg.degree;
  m.threshold = cfg.threshold;
  m.r = rni.r;
  m.k = rni.k;
  m.w_y = 0.0;
  m.w.resize(train.dim());
  SplitMix64 rng(derive_seed(cfg.init_seed, "fit_gd.weights"));
  for (auto& wi : m.w) wi = rng.uniform(-0.01, 0.01);
  double mean_y = 0.0;
  for (double v : train.target) mean_y += v;
  m.b = mean_y / static_cast<double>(train.n());
  m.validate();

  TrainHistory history;
  history.used_validation = use_validation;
  history.r_learned = learn_r;

  ImpactModel best = m;
  double best_val = std::numeric_limits<double>::infinity();
  int stale_epochs = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double train_loss = kernels::mse_loss(m, train.features, train.target, cfg.l2);
    if (!std::isfinite(train_loss))
      throw Error("trainer.DivergenceDetected",
                  "loss became non-finite at epoch " + std::to_string(epoch));

    EpochRecord rec;
    rec.train_loss = train_loss;
    if (use_validation) {
      rec.validation_loss =
          kernels::mse_loss(m, validation.features, validation.target, cfg.l2);
      if (rec.validation_loss < best_val) {
        best_val = rec.validation_loss;
        best = m;
        stale_epochs = 0;
      } else {
        ++stale_epochs;
      }
    }
    history.epochs.push_back(rec);

    if (use_validation && cfg.early_stop_patience > 0 &&
        stale_epochs >= cfg.early_stop_patience)
      break;

    auto g = kernels::mse_gradient(m, train.features, train.target, cfg.l2, learn_r);
    for (std::size_t i = 0; i < m.w.size(); ++i) m.w[i] -= cfg.learning_rate * g.dw[i];
    m.w_y -= cfg.learning_rate * g.dw_y;
    m.b -= cfg.learning_rate * g.db;
    if (learn_r) m.r -= cfg.learning_rate * g.dr;

    if (std::abs(m.denominator()) <= ImpactModel::kPoleEpsilon)
      throw Error("trainer.DivergenceDetected",
                  "parameters reached the pole at epoch " + std::to_string(epoch));
  }

  ImpactModel result = use_validation && std::isfinite(best_val) ? best : m;
  return {result, history};
}

std::vector<double> solve_normal_equations(const Dataset& ds, int degree) {
  const std::size_t n = ds.n();
  const std::size_t d = ds.dim();
  const std::size_t p = d + 1;  // intercept column last
  if (n == 0) throw Error("trainer.EmptyDataset", "cannot fit on zero rows");
  if (ds.has_missing()) throw Error("trainer.MissingCells", "impute before fitting");

  // M = A^T A and v = A^T y with A = [x^degree | 1], accumulated in row order.
  std::vector<double> mat(p * p, 0.0), rhs(p, 0.0), arow(p);
  for (std::size_t r = 0; r < n; ++r) {
    auto x = ds.features.row(r);
    for (std::size_t i = 0; i < d; ++i) arow[i] = ipow(x[i], degree);
    arow[d] = 1.0;
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = i; j < p; ++j) mat[i * p + j] += arow[i] * arow[j];
      rhs[i] += arow[i] * ds.target[r];
    }
  }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < i; ++j) mat[i * p + j] = mat[j * p + i];

  // Cholesky. A non-positive pivot means the design matrix lost rank, which
  // for this problem is a collinear (or constant-duplicate) column.
  double max_diag = 0.0;
  for (std::size_t i = 0; i < p; ++i) max_diag = std::max(max_diag, mat[i * p + i]);
  const double tol = 1e-12 * std::max(max_diag, 1.0);
  std::vector<double> chol(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = mat[i * p + j];
      for (std::size_t t = 0; t < j; ++t) s -= chol[i * p + t] * chol[j * p + t];
      if (i == j) {
        if (s <= tol) {
          std::string what = i < d ? "feature column " + std::to_string(i) + " ('" +
                                         ds.column_meta[i].name + "')"
                                   : "intercept column";
          throw Error("trainer.RankDeficient",
                      what + " is collinear with the preceding columns");
        }
        chol[i * p + i] = std::sqrt(s);
      } else {
        chol[i * p + j] = s / chol[j * p + j];
      }
    }
  }

  // Forward then backward substitution.
  std::vector<double> z(p), c(p);
  for (std::size_t i = 0; i < p; ++i) {
    double s = rhs[i];
    for (std::size_t t = 0; t < i; ++t) s -= chol[i * p + t] * z[t];
    z[i] = s / chol[i * p + i];
  }
  for (std::size_t ii = p; ii-- > 0;) {
    double s = z[ii];
    for (std::size_t t = ii + 1; t < p; ++t) s -= chol[t * p + ii] * c[t];
    c[ii] = s / chol[ii * p + ii];
  }
  return c;
}

ImpactModel fit_least_squares(const Dataset& ds, int degree) {
  if (degree < 1) throw Error("trainer.InvalidConfig", "degree must be >= 1");
  auto c = solve_normal_equations(ds, degree);
  ImpactModel m;
  m.w.assign(c.begin(), c.end() - 1);
  m.b = c.back();
  m.w_y = 0.0;
  m.k = 1.0;
  m.r = 1.0;
  m.degree = degree;
  m.validate();
  return m;
}

}  // namespace impact
