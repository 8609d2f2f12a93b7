// Acceptance gate: one PASS/FAIL line per shipping criterion, nonzero exit
// if any fail. Numeric criteria run in-process against the library; pipeline
// criteria drive the installed binaries exactly as a user would.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "impact/baselines.hpp"
#include "impact/growth_sim.hpp"
#include "impact/kernels.hpp"
#include "impact/metrics.hpp"
#include "impact/rng.hpp"
#include "impact/scaler.hpp"
#include "impact/trainer.hpp"
#include "test_support.hpp"

using namespace impact;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

struct Gate {
  int failures = 0;

  void run(const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
    bool ok = false;
    std::string detail;
    try {
      auto [passed, text] = fn();
      ok = passed;
      detail = text;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("threw: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << " " << name << ": " << detail << std::endl;
    if (!ok) ++failures;
  }
};

double relative_gap(double a, double b) {
  double diff = std::abs(a - b);
  double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return diff / scale;
}

// --- criterion bodies -------------------------------------------------------

std::pair<bool, std::string> gradient_oracle() {
  auto start = Clock::now();
  const double h = 1e-6;
  int checked = 0;
  int misses = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t d = 1 + trial % 4;
    std::size_t n = 2 + (trial * 7) % 20;
    int degree = 1 + trial % 2;
    double l2 = trial % 3 == 0 ? 0.01 : 0.0;
    Dataset ds = test_support::random_dataset(n, d, trial * 13 + 1);
    ImpactModel m = test_support::random_model(d, trial * 31 + 7, degree);
    auto g = gradient(m, ds, l2, true);

    auto probe = [&](double analytic, double* param) {
      double saved = *param;
      auto f = [&](double v) {
        *param = v;
        double out = loss(m, ds, l2);
        *param = saved;
        return out;
      };
      double numeric = test_support::central_difference(f, saved, h);
      if (!test_support::close_rel(analytic, numeric, 1e-5, 1e-8)) ++misses;
      if (std::abs(analytic - numeric) > 1e-8)
        worst = std::max(worst, relative_gap(analytic, numeric));
      ++checked;
    };
    for (std::size_t i = 0; i < d; ++i) probe(g.dw[i], &m.w[i]);
    probe(g.dw_y, &m.w_y);
    probe(g.db, &m.b);
    probe(g.dr, &m.r);
  }
  double elapsed = seconds_since(start);
  bool ok = misses == 0 && elapsed < 10.0;
  return {ok, std::to_string(checked) + " partials over 100 model/data pairs, " +
                  std::to_string(misses) + " outside rel 1e-5 / abs 1e-8, worst rel gap " +
                  fmt(worst) + ", " + fmt(elapsed) + "s (limit 10s)"};
}

std::pair<bool, std::string> generator_recovery() {
  auto start = Clock::now();

  ImpactModel clean_gen = test_support::random_model(3, 7);
  Dataset clean_ds = make_synthetic_dataset(clean_gen, 200, 0.0, 17);
  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.epochs = 5000;
  cfg.init_seed = 4;
  auto [clean_fit, h1] = fit_gd(clean_ds, cfg);
  double r2_clean = test_support::r_squared(
      clean_ds.target, kernels::predict_batch(clean_fit, clean_ds.features));

  ImpactModel noisy_gen;
  noisy_gen.w = {0.8, -0.6, 0.5};
  noisy_gen.b = 0.3;
  noisy_gen.k = 1.2;
  noisy_gen.r = 1.1;
  noisy_gen.w_y = 0.1;
  Dataset noisy_ds = make_synthetic_dataset(noisy_gen, 1000, 0.1, 29);
  TrainConfig noisy_cfg;
  noisy_cfg.learning_rate = 0.05;
  noisy_cfg.epochs = 3000;
  noisy_cfg.init_seed = 2;
  auto [noisy_fit, h2] = fit_gd(noisy_ds, noisy_cfg);
  std::vector<double> clean_signal(noisy_ds.n());
  for (std::size_t r = 0; r < noisy_ds.n(); ++r)
    clean_signal[r] = predict(noisy_gen, noisy_ds.features.row(r));
  double r2_noisy = test_support::r_squared(
      clean_signal, kernels::predict_batch(noisy_fit, noisy_ds.features));

  double elapsed = seconds_since(start);
  bool ok = r2_clean >= 0.999 && r2_noisy >= 0.95 && elapsed < 30.0;
  return {ok, "noise-free R^2 " + fmt(r2_clean) + " (>= 0.999), noisy R^2 vs clean signal " +
                  fmt(r2_noisy) + " (>= 0.95), " + fmt(elapsed) + "s (limit 30s)"};
}

std::pair<bool, std::string> descent_matches_closed_form() {
  double worst_rmse = 0.0;
  for (std::uint64_t seed : {101u, 202u, 303u}) {
    Dataset ds = test_support::standardized(test_support::random_dataset(50, 3, seed));
    ImpactModel ls = fit_least_squares(ds, 1);
    TrainConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.epochs = 5000;
    auto [gd, history] = fit_gd(ds, cfg);
    double rmse = test_support::rmse_between(kernels::predict_batch(ls, ds.features),
                                             kernels::predict_batch(gd, ds.features));
    worst_rmse = std::max(worst_rmse, rmse);
  }
  return {worst_rmse <= 1e-3, "worst prediction RMSE between the converged descent and "
                              "the normal-equation solution over 3 datasets: " +
                                  fmt(worst_rmse) + " (<= 1e-3)"};
}

std::pair<bool, std::string> auc_pairwise_oracle() {
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    SplitMix64 rng(4000 + trial);
    std::size_t n = 2 + rng.below(199);
    std::vector<double> labels(n), scores(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = static_cast<double>(rng.below(2));
      scores[i] = std::round(rng.uniform() * 10.0) / 10.0;  // forces ties
    }
    labels[0] = 0.0;
    labels[1] = 1.0;
    double swept = roc_auc(labels, scores).auc;

    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] != 1.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (labels[j] == 1.0) continue;
        ++pairs;
        if (scores[i] > scores[j]) wins += 1.0;
        else if (scores[i] == scores[j]) wins += 0.5;
      }
    }
    worst = std::max(worst, std::abs(swept - wins / static_cast<double>(pairs)));
  }
  return {worst < 1e-12, "max |trapezoid - pairwise| over 50 tied-score cases up to "
                         "N=200: " +
                             fmt(worst) + " (< 1e-12)"};
}

std::pair<bool, std::string> integrator_accuracy() {
  GrowthParams p;
  p.r = 1.0;
  p.k = 100.0;
  p.y0 = 1.0;
  double exact20 = logistic_closed_form(1.0, 100.0, 1.0, 20.0);
  auto traj = simulate(p, GrowthKind::Logistic, 0.01, 2000);
  double endpoint_err = std::abs(traj.y.back() - exact20);

  double exact2 = logistic_closed_form(1.0, 100.0, 1.0, 2.0);
  double e1 = std::abs(simulate(p, GrowthKind::Logistic, 0.1, 20).y.back() - exact2);
  double e2 = std::abs(simulate(p, GrowthKind::Logistic, 0.05, 40).y.back() - exact2);
  double order = std::log2(e1 / e2);

  bool ok = endpoint_err < 1e-3 && order >= 3.5;
  return {ok, "logistic endpoint error at t=20, dt=0.01: " + fmt(endpoint_err) +
                  " (< 1e-3); step-halving convergence order " + fmt(order) + " (>= 3.5)"};
}

std::pair<bool, std::string> scaling_invariants() {
  double worst_minmax = 0.0, worst_mean = 0.0, worst_std = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Dataset ds = test_support::random_dataset(40, 3, 900 + trial, -5.0, 5.0);
    Dataset mm = transform(ds, fit_scaler(ds, ScalerKind::MinMax));
    for (std::size_t r = 0; r < mm.n(); ++r)
      for (std::size_t c = 0; c < mm.dim(); ++c) {
        double v = mm.features.at(r, c);
        worst_minmax = std::max(worst_minmax, std::max(-v, v - 1.0));
      }
    Dataset st = transform(ds, fit_scaler(ds, ScalerKind::Standard));
    for (std::size_t c = 0; c < st.dim(); ++c) {
      double mean = 0.0;
      for (std::size_t r = 0; r < st.n(); ++r) mean += st.features.at(r, c);
      mean /= static_cast<double>(st.n());
      double var = 0.0;
      for (std::size_t r = 0; r < st.n(); ++r) {
        double dv = st.features.at(r, c) - mean;
        var += dv * dv;
      }
      var /= static_cast<double>(st.n());
      worst_mean = std::max(worst_mean, std::abs(mean));
      worst_std = std::max(worst_std, std::abs(std::sqrt(var) - 1.0));
    }
  }
  bool ok = worst_minmax <= 0.0 && worst_mean <= 1e-9 && worst_std <= 1e-9;
  return {ok, "min-max outside [0,1] by at most " + fmt(std::max(worst_minmax, 0.0)) +
                  "; standardized |mean| <= " + fmt(worst_mean) + ", |std-1| <= " +
                  fmt(worst_std) + " (both <= 1e-9) over 20 datasets"};
}

std::pair<bool, std::string> risk_data_error_bands() {
  auto start = Clock::now();
  test_support::TempDir dir;
  const std::string cli = test_support::cli_path();
  const auto csv = dir.file("heart.csv").string();
  const auto schema = dir.file("heart.schema").string();

  auto gen = test_support::run_command(
      test_support::datagen_path() + " --dataset heart --rows 3800 --seed 7 --out " + csv +
          " --schema-out " + schema,
      dir.path());
  if (gen.exit_code != 0) return {false, "datagen failed: " + gen.err};

  const auto model = dir.file("model.json").string();
  auto tr = test_support::run_command(
      cli + " train --input " + csv + " --schema " + schema +
          " --split 0.7 --seed 1 --method gd --scaler standard --model-out " + model,
      dir.path());
  if (tr.exit_code != 0) return {false, "train failed: " + tr.err};

  const auto report = dir.file("report.json").string();
  auto ev = test_support::run_command(cli + " evaluate --input " + csv + " --schema " +
                                          schema + " --split 0.7 --seed 1 --model " +
                                          model + " --on test --report-out " + report,
                                      dir.path());
  if (ev.exit_code != 0) return {false, "evaluate failed: " + ev.err};

  auto j = json::parse(test_support::slurp(report));
  auto reg = j.at("metrics").at("regression");
  double mse = reg.at("mse").get<double>();
  double mae = reg.at("mae").get<double>();
  double rmse = reg.at("rmse").get<double>();
  double elapsed = seconds_since(start);
  bool ok = mae < 0.40 && mse >= 0.10 && mse <= 0.35 && rmse >= 0.35 && rmse <= 0.60 &&
            elapsed < 60.0;
  return {ok, "held-out risk-factor regression: mse " + fmt(mse) + " (band [0.10, 0.35]), mae " +
                  fmt(mae) + " (< 0.40), rmse " + fmt(rmse) + " (band [0.35, 0.60]), " +
                  fmt(elapsed) + "s (limit 60s)"};
}

std::pair<bool, std::string> comparison_sanity() {
  test_support::TempDir dir;
  const std::string cli = test_support::cli_path();
  const auto csv = dir.file("blobs.csv").string();
  const auto schema = dir.file("blobs.schema").string();

  auto gen = test_support::run_command(
      test_support::datagen_path() + " --dataset blobs --rows 500 --dim 4 --seed 5 --out " +
          csv + " --schema-out " + schema,
      dir.path());
  if (gen.exit_code != 0) return {false, "datagen failed: " + gen.err};

  const auto out = dir.file("compare.json").string();
  auto cp = test_support::run_command(cli + " compare --input " + csv + " --schema " +
                                          schema + " --split 0.7 --seed 1 --out " + out,
                                      dir.path());
  if (cp.exit_code != 0) return {false, "compare failed: " + cp.err};

  auto j = json::parse(test_support::slurp(out));
  auto results = j.at("results");
  if (results.size() != 5)
    return {false, "expected impact + 4 baselines, got " + std::to_string(results.size())};
  double min_acc = 1.0;
  bool sorted = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    double acc = results.at(i).at("accuracy").get<double>();
    min_acc = std::min(min_acc, acc);
    if (i > 0 && acc > results.at(i - 1).at("accuracy").get<double>()) sorted = false;
    if (results.at(i).at("rank").get<int>() != static_cast<int>(i) + 1) sorted = false;
  }
  bool ok = min_acc >= 0.95 && sorted;
  return {ok, "five methods on separable clusters: min accuracy " + fmt(min_acc) +
                  " (>= 0.95), ranking " + (sorted ? "consistent" : "inconsistent")};
}

std::pair<bool, std::string> initialization_exactness() {
  auto [r1, k1] = init_rni({1.0, std::exp(1.0)});
  auto [r0, k0] = init_rni({5.0, 5.0, 5.0});
  bool ok = r1 == 1.0 && r0 == 0.0 && k0 == 5.0 * (1.0 + 1e-6);
  std::ostringstream ss;
  ss.precision(17);
  ss << "log-range init: r([1, e]) = " << r1 << " (== 1 exactly), r(constant) = " << r0
     << " (== 0 exactly), k inflation preserved";
  return {ok, ss.str()};
}

std::pair<bool, std::string> run_to_run_determinism() {
  test_support::TempDir dir;
  const std::string cli = test_support::cli_path();
  const auto csv = dir.file("blobs.csv").string();
  const auto schema = dir.file("blobs.schema").string();

  auto gen = test_support::run_command(
      test_support::datagen_path() + " --dataset blobs --rows 150 --dim 3 --seed 9 --out " +
          csv + " --schema-out " + schema,
      dir.path());
  if (gen.exit_code != 0) return {false, "datagen failed: " + gen.err};

  // Reruns reuse the same output paths: reports embed the paths they were
  // given, so only byte-identical inputs make byte-identical outputs.
  const auto model = dir.file("model.json").string();
  const auto report = dir.file("report.json").string();
  auto one_round = [&]() -> std::pair<std::string, std::string> {
    auto tr = test_support::run_command(cli + " train --input " + csv + " --schema " +
                                            schema +
                                            " --split 0.7 --seed 3 --epochs 500"
                                            " --scaler standard --model-out " +
                                            model,
                                        dir.path());
    if (tr.exit_code != 0) return {"", ""};
    auto ev = test_support::run_command(cli + " evaluate --input " + csv + " --schema " +
                                            schema + " --split 0.7 --seed 3 --model " +
                                            model + " --on test --report-out " + report,
                                        dir.path());
    if (ev.exit_code != 0) return {"", ""};
    return {test_support::slurp(model), test_support::slurp(report)};
  };

  auto [model_a, report_a] = one_round();
  auto [model_b, report_b] = one_round();
  if (model_a.empty() || model_b.empty()) return {false, "a pipeline stage failed"};
  bool ok = model_a == model_b && report_a == report_b;
  return {ok, std::string("fresh-process reruns with one seed: model bytes ") +
                  (model_a == model_b ? "identical" : "DIFFER") + ", report bytes " +
                  (report_a == report_b ? "identical" : "DIFFER")};
}

}  // namespace

int main() {
  Gate gate;
  gate.run("analytic-gradients-vs-finite-differences", gradient_oracle);
  gate.run("generator-recovery", generator_recovery);
  gate.run("descent-vs-normal-equations", descent_matches_closed_form);
  gate.run("auc-vs-pairwise-statistic", auc_pairwise_oracle);
  gate.run("integrator-vs-closed-form", integrator_accuracy);
  gate.run("scaling-invariants", scaling_invariants);
  gate.run("risk-data-error-bands", risk_data_error_bands);
  gate.run("method-comparison-sanity", comparison_sanity);
  gate.run("initialization-exactness", initialization_exactness);
  gate.run("run-to-run-determinism", run_to_run_determinism);

  if (gate.failures == 0) {
    std::cout << "acceptance: all criteria passed" << std::endl;
    return 0;
  }
  std::cout << "acceptance: " << gate.failures << " criteria failed" << std::endl;
  return 1;
}
