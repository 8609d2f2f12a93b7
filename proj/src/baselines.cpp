#include "impact/baselines.hpp"

#include <cmath>

#include "impact/kernels.hpp"
#include "impact/trainer.hpp"

namespace impact {

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::Knn: return "knn";
    case BaselineKind::GaussianNb: return "gaussian_nb";
    case BaselineKind::BernoulliNb: return "bernoulli_nb";
    case BaselineKind::Linear: return "linear";
    case BaselineKind::Logistic: return "logistic";
  }
  return "?";
}

BaselineKind baseline_kind_from_string(const std::string& s) {
  if (s == "knn") return BaselineKind::Knn;
  if (s == "gaussian_nb") return BaselineKind::GaussianNb;
  if (s == "bernoulli_nb") return BaselineKind::BernoulliNb;
  if (s == "linear") return BaselineKind::Linear;
  if (s == "logistic") return BaselineKind::Logistic;
  throw Error("baselines.UnknownKind", "unknown baseline '" + s + "'");
}

BaselineKind BaselineModel::kind() const {
  switch (impl.index()) {
    case 0: return BaselineKind::Knn;
    case 1: return BaselineKind::GaussianNb;
    case 2: return BaselineKind::BernoulliNb;
    case 3: return BaselineKind::Linear;
    default: return BaselineKind::Logistic;
  }
}

std::size_t BaselineModel::dim() const {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, KnnModel>) return m.train_features.cols();
        else if constexpr (std::is_same_v<T, GaussianNbModel>) return m.mean[0].size();
        else if constexpr (std::is_same_v<T, BernoulliNbModel>) return m.p[0].size();
        else return m.coef.size();
      },
      impl);
}

namespace {

constexpr double kVarianceFloor = 1e-9;

void require_binary_targets(const Dataset& ds) {
  bool saw0 = false, saw1 = false;
  for (double v : ds.target) {
    if (v == 0.0) saw0 = true;
    else if (v == 1.0) saw1 = true;
    else
      throw Error("baselines.NonBinaryTarget",
                  "classifier target must be 0/1, found " + std::to_string(v));
  }
  if (!saw0 || !saw1)
    throw Error("baselines.SingleClassTraining",
                "classifier training data contains only one label");
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

GaussianNbModel fit_gaussian_nb(const Dataset& ds) {
  require_binary_targets(ds);
  const std::size_t n = ds.n(), d = ds.dim();
  GaussianNbModel m;
  std::array<std::size_t, 2> count{0, 0};
  for (int c = 0; c < 2; ++c) {
    m.mean[c].assign(d, 0.0);
    m.var[c].assign(d, 0.0);
  }
  for (std::size_t r = 0; r < n; ++r) {
    int c = ds.target[r] == 1.0 ? 1 : 0;
    ++count[c];
    for (std::size_t i = 0; i < d; ++i) m.mean[c][i] += ds.features.at(r, i);
  }
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < d; ++i) m.mean[c][i] /= static_cast<double>(count[c]);
  for (std::size_t r = 0; r < n; ++r) {
    int c = ds.target[r] == 1.0 ? 1 : 0;
    for (std::size_t i = 0; i < d; ++i) {
      double dv = ds.features.at(r, i) - m.mean[c][i];
      m.var[c][i] += dv * dv;
    }
  }
  for (int c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < d; ++i) {
      m.var[c][i] /= static_cast<double>(count[c]);
      if (m.var[c][i] < kVarianceFloor) m.var[c][i] = kVarianceFloor;
    }
    m.prior[c] = static_cast<double>(count[c]) / static_cast<double>(n);
  }
  return m;
}

BernoulliNbModel fit_bernoulli_nb(const Dataset& ds, double alpha) {
  require_binary_targets(ds);
  if (alpha <= 0.0)
    throw Error("baselines.InvalidHyperparameter", "laplace alpha must be positive");
  const std::size_t n = ds.n(), d = ds.dim();
  BernoulliNbModel m;
  m.alpha = alpha;
  std::array<std::size_t, 2> count{0, 0};
  for (int c = 0; c < 2; ++c) m.p[c].assign(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    int c = ds.target[r] == 1.0 ? 1 : 0;
    ++count[c];
    for (std::size_t i = 0; i < d; ++i)
      if (ds.features.at(r, i) >= m.binarize_at) m.p[c][i] += 1.0;
  }
  for (int c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < d; ++i)
      m.p[c][i] = (m.p[c][i] + alpha) / (static_cast<double>(count[c]) + 2.0 * alpha);
    m.prior[c] = static_cast<double>(count[c]) / static_cast<double>(n);
  }
  return m;
}

LogisticModel fit_logistic(const Dataset& ds, double lr, int epochs) {
  require_binary_targets(ds);
  if (!(lr > 0.0) || epochs < 1)
    throw Error("baselines.InvalidHyperparameter",
                "logistic regression needs lr > 0 and epochs >= 1");
  LogisticModel m;
  m.coef.assign(ds.dim(), 0.0);
  m.intercept = 0.0;
  for (int e = 0; e < epochs; ++e) {
    auto [gw, gb] = logistic_log_loss_gradient(m, ds);
    for (std::size_t i = 0; i < m.coef.size(); ++i) m.coef[i] -= lr * gw[i];
    m.intercept -= lr * gb;
  }
  return m;
}

// Class-1 posterior from two log joint likelihoods, normalized to avoid
// underflow on long feature vectors.
double posterior_of_one(double log0, double log1) {
  double mx = std::max(log0, log1);
  double e0 = std::exp(log0 - mx), e1 = std::exp(log1 - mx);
  return e1 / (e0 + e1);
}

}  // namespace

BaselineModel fit_baseline(const Dataset& ds, const BaselineSpec& spec) {
  if (ds.n() == 0) throw Error("baselines.EmptyDataset", "cannot fit on zero rows");
  if (ds.has_missing()) throw Error("baselines.MissingCells", "impute before fitting");
  BaselineModel out;
  switch (spec.kind) {
    case BaselineKind::Knn: {
      require_binary_targets(ds);
      if (spec.k < 1 || static_cast<std::size_t>(spec.k) > ds.n())
        throw Error("baselines.InvalidHyperparameter",
                    "knn k must lie in [1, N=" + std::to_string(ds.n()) + "]");
      out.impl = KnnModel{ds.features, ds.target, spec.k};
      break;
    }
    case BaselineKind::GaussianNb:
      out.impl = fit_gaussian_nb(ds);
      break;
    case BaselineKind::BernoulliNb:
      out.impl = fit_bernoulli_nb(ds, spec.laplace_alpha);
      break;
    case BaselineKind::Linear: {
      // Same normal-equation path as the impact least-squares fit, so the
      // two produce identical predictions on identical data.
      auto c = solve_normal_equations(ds, 1);
      LinearModel lm;
      lm.coef.assign(c.begin(), c.end() - 1);
      lm.intercept = c.back();
      out.impl = lm;
      break;
    }
    case BaselineKind::Logistic:
      out.impl = fit_logistic(ds, spec.learning_rate, spec.epochs);
      break;
  }
  return out;
}

double baseline_score_one(const BaselineModel& m, std::span<const double> x) {
  if (x.size() != m.dim())
    throw Error("baselines.DimensionMismatch",
                "feature vector has " + std::to_string(x.size()) + " entries, model expects " +
                    std::to_string(m.dim()));
  return std::visit(
      [&](const auto& model) -> double {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, KnnModel>) {
          Matrix q(1, x.size());
          for (std::size_t i = 0; i < x.size(); ++i) q.at(0, i) = x[i];
          return kernels::knn_positive_fraction(model.train_features, model.train_labels,
                                                model.k, q, kernels::Exec::Serial)[0];
        } else if constexpr (std::is_same_v<T, GaussianNbModel>) {
          double lg[2];
          for (int c = 0; c < 2; ++c) {
            double acc = std::log(model.prior[c]);
            for (std::size_t i = 0; i < x.size(); ++i) {
              double v = model.var[c][i];
              double dv = x[i] - model.mean[c][i];
              acc += -0.5 * std::log(6.283185307179586 * v) - dv * dv / (2.0 * v);
            }
            lg[c] = acc;
          }
          return posterior_of_one(lg[0], lg[1]);
        } else if constexpr (std::is_same_v<T, BernoulliNbModel>) {
          double lg[2];
          for (int c = 0; c < 2; ++c) {
            double acc = std::log(model.prior[c]);
            for (std::size_t i = 0; i < x.size(); ++i) {
              bool on = x[i] >= model.binarize_at;
              acc += std::log(on ? model.p[c][i] : 1.0 - model.p[c][i]);
            }
            lg[c] = acc;
          }
          return posterior_of_one(lg[0], lg[1]);
        } else if constexpr (std::is_same_v<T, LinearModel>) {
          double s = 0.0;
          for (std::size_t i = 0; i < x.size(); ++i) s += model.coef[i] * x[i];
          return s + model.intercept;
        } else {
          double s = 0.0;
          for (std::size_t i = 0; i < x.size(); ++i) s += model.coef[i] * x[i];
          return sigmoid(s + model.intercept);
        }
      },
      m.impl);
}

ScoredLabel predict_baseline(const BaselineModel& m, std::span<const double> x) {
  double score = baseline_score_one(m, x);
  return {score, score >= 0.5 ? 1 : 0};
}

std::vector<double> predict_scores(const BaselineModel& m, const Matrix& x) {
  // KNN goes through the batch kernel; the rest are cheap per-row forms.
  if (const auto* knn = std::get_if<KnnModel>(&m.impl))
    return kernels::knn_positive_fraction(knn->train_features, knn->train_labels, knn->k, x);
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = baseline_score_one(m, x.row(r));
  return out;
}

double logistic_log_loss(const LogisticModel& m, const Dataset& ds) {
  const std::size_t n = ds.n();
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    auto x = ds.features.row(r);
    double z = m.intercept;
    for (std::size_t i = 0; i < x.size(); ++i) z += m.coef[i] * x[i];
    double p = sigmoid(z);
    p = std::min(std::max(p, 1e-15), 1.0 - 1e-15);
    total += ds.target[r] == 1.0 ? -std::log(p) : -std::log(1.0 - p);
  }
  return total / static_cast<double>(n);
}

std::pair<std::vector<double>, double> logistic_log_loss_gradient(const LogisticModel& m,
                                                                  const Dataset& ds) {
  const std::size_t n = ds.n(), d = ds.dim();
  std::vector<double> gw(d, 0.0);
  double gb = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    auto x = ds.features.row(r);
    double z = m.intercept;
    for (std::size_t i = 0; i < d; ++i) z += m.coef[i] * x[i];
    double e = sigmoid(z) - ds.target[r];
    for (std::size_t i = 0; i < d; ++i) gw[i] += e * x[i];
    gb += e;
  }
  for (auto& g : gw) g /= static_cast<double>(n);
  gb /= static_cast<double>(n);
  return {gw, gb};
}

}  // namespace impact
