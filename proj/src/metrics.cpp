#include "impact/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "impact/error.hpp"
#include "impact/rng.hpp"

namespace impact {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw Error("metrics.LengthMismatch", std::string(what) + ": " + std::to_string(a) +
                                              " labels vs " + std::to_string(b) + " values");
  if (a == 0) throw Error("metrics.LengthMismatch", std::string(what) + ": empty input");
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

// JSON has no inf literal; sentinel thresholds become strings.
nlohmann::json json_number_or_inf(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

ClassificationScores classification_report(const std::vector<double>& labels,
                                           const std::vector<double>& scores,
                                           double threshold) {
  require_same_length(labels.size(), scores.size(), "classification_report");
  ClassificationScores out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    bool actual = labels[i] == 1.0;
    bool predicted = scores[i] >= threshold;
    if (predicted && actual) ++out.tp;
    else if (predicted && !actual) ++out.fp;
    else if (!predicted && actual) ++out.fn;
    else ++out.tn;
  }
  const double n = static_cast<double>(labels.size());
  out.accuracy = static_cast<double>(out.tp + out.tn) / n;
  if (out.tp + out.fp == 0) out.precision_degenerate = true;
  else out.precision = static_cast<double>(out.tp) / static_cast<double>(out.tp + out.fp);
  if (out.tp + out.fn == 0) out.recall_degenerate = true;
  else out.recall = static_cast<double>(out.tp) / static_cast<double>(out.tp + out.fn);
  if (out.precision + out.recall == 0.0) out.f1_degenerate = true;
  else out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  return out;
}

RocCurve roc_auc(const std::vector<double>& labels, const std::vector<double>& scores) {
  require_same_length(labels.size(), scores.size(), "roc_auc");
  std::size_t pos = 0;
  for (double v : labels)
    if (v == 1.0) ++pos;
  std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0)
    throw Error("metrics.SingleClass", "roc needs both classes present");

  std::vector<std::size_t> order(labels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });

  RocCurve out;
  const double inf = std::numeric_limits<double>::infinity();
  out.points.push_back({0.0, 0.0, inf});
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    double s = scores[order[i]];
    // Everything tied at this score flips to predicted-positive together.
    while (i < order.size() && scores[order[i]] == s) {
      if (labels[order[i]] == 1.0) ++tp;
      else ++fp;
      ++i;
    }
    out.points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                          static_cast<double>(tp) / static_cast<double>(pos), s});
  }
  out.points.push_back({1.0, 1.0, -inf});

  double auc = 0.0;
  for (std::size_t p = 1; p < out.points.size(); ++p) {
    const auto& a = out.points[p - 1];
    const auto& b = out.points[p];
    auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  out.auc = auc;
  return out;
}

RegressionScores regression_report(const std::vector<double>& truth,
                                   const std::vector<double>& pred) {
  require_same_length(truth.size(), pred.size(), "regression_report");
  RegressionScores out;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    double e = pred[i] - truth[i];
    out.mse += e * e;
    out.mae += std::abs(e);
  }
  const double n = static_cast<double>(truth.size());
  out.mse /= n;
  out.mae /= n;
  out.rmse = std::sqrt(out.mse);
  return out;
}

namespace {

double score_predictions(const std::vector<double>& truth, const std::vector<double>& pred,
                         CurveScoring scoring) {
  if (scoring == CurveScoring::Accuracy) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      bool predicted = pred[i] >= 0.5;
      bool actual = truth[i] == 1.0;
      if (predicted == actual) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(truth.size());
  }
  double mean = 0.0;
  for (double v : truth) mean += v;
  mean /= static_cast<double>(truth.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    double e = truth[i] - pred[i];
    double d = truth[i] - mean;
    ss_res += e * e;
    ss_tot += d * d;
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

}  // namespace

std::vector<CurvePoint> learning_curve(const FitPredict& fit_predict, const Dataset& ds,
                                       const LearningCurveConfig& cfg) {
  if (cfg.fractions.empty())
    throw Error("metrics.InvalidFractions", "need at least one fraction");
  for (std::size_t i = 0; i < cfg.fractions.size(); ++i) {
    double f = cfg.fractions[i];
    if (!(f > 0.0) || f > 1.0)
      throw Error("metrics.InvalidFractions",
                  "fraction " + std::to_string(f) + " outside (0, 1]");
    if (i > 0 && f < cfg.fractions[i - 1])
      throw Error("metrics.InvalidFractions", "fractions must ascend");
  }
  if (cfg.folds < 2) throw Error("metrics.InvalidFolds", "folds must be at least 2");
  const std::size_t n = ds.n();
  std::size_t smallest =
      static_cast<std::size_t>(cfg.fractions.front() * static_cast<double>(n));
  if (smallest < static_cast<std::size_t>(cfg.folds))
    throw Error("metrics.TooFewRows",
                "smallest fraction keeps " + std::to_string(smallest) + " rows, fewer than " +
                    std::to_string(cfg.folds) + " folds");

  auto shuffled = shuffled_indices(n, derive_seed(cfg.seed, "learning_curve.shuffle"));

  std::vector<CurvePoint> out;
  for (double f : cfg.fractions) {
    std::size_t m = static_cast<std::size_t>(f * static_cast<double>(n));
    std::vector<std::size_t> sub(shuffled.begin(),
                                 shuffled.begin() + static_cast<std::ptrdiff_t>(m));
    double train_sum = 0.0, cv_sum = 0.0;
    for (int fold = 0; fold < cfg.folds; ++fold) {
      std::vector<std::size_t> train_rows, held_rows;
      for (std::size_t p = 0; p < m; ++p) {
        if (static_cast<int>(p % static_cast<std::size_t>(cfg.folds)) == fold)
          held_rows.push_back(sub[p]);
        else
          train_rows.push_back(sub[p]);
      }
      Dataset train = take_rows(ds, train_rows);
      Dataset held = take_rows(ds, held_rows);
      auto train_pred = fit_predict(train, train.features);
      auto held_pred = fit_predict(train, held.features);
      train_sum += score_predictions(train.target, train_pred, cfg.scoring);
      cv_sum += score_predictions(held.target, held_pred, cfg.scoring);
    }
    out.push_back({m, train_sum / static_cast<double>(cfg.folds),
                   cv_sum / static_cast<double>(cfg.folds)});
  }
  return out;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j;
  if (classification) {
    const auto& c = *classification;
    j["classification"] = {
        {"tp", c.tp},
        {"fp", c.fp},
        {"tn", c.tn},
        {"fn", c.fn},
        {"accuracy", c.accuracy},
        {"precision", c.precision},
        {"recall", c.recall},
        {"f1", c.f1},
        {"precision_degenerate", c.precision_degenerate},
        {"recall_degenerate", c.recall_degenerate},
        {"f1_degenerate", c.f1_degenerate},
    };
  } else {
    j["classification"] = nullptr;
  }
  if (roc) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : roc->points)
      pts.push_back({{"fpr", p.fpr},
                     {"tpr", p.tpr},
                     {"threshold", json_number_or_inf(p.threshold)}});
    j["roc"] = {{"auc", roc->auc}, {"points", pts}};
  } else {
    j["roc"] = nullptr;
  }
  if (regression) {
    j["regression"] = {{"mse", regression->mse},
                       {"mae", regression->mae},
                       {"rmse", regression->rmse}};
  } else {
    j["regression"] = nullptr;
  }
  if (!curve.empty()) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : curve)
      pts.push_back({{"train_size", p.train_size},
                     {"train_score", p.train_score},
                     {"cv_score", p.cv_score}});
    j["learning_curve"] = pts;
  } else {
    j["learning_curve"] = nullptr;
  }
  return j;
}

std::string roc_csv(const RocCurve& roc) {
  std::ostringstream ss;
  ss << "fpr,tpr,threshold\n";
  for (const auto& p : roc.points)
    ss << fmt(p.fpr) << ',' << fmt(p.tpr) << ',' << fmt(p.threshold) << '\n';
  return ss.str();
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
  std::ostringstream ss;
  ss << "train_size,train_score,cv_score\n";
  for (const auto& p : curve)
    ss << p.train_size << ',' << fmt(p.train_score) << ',' << fmt(p.cv_score) << '\n';
  return ss.str();
}

}  // namespace impact
