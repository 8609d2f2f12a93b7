#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "impact/growth_sim.hpp"
#include "impact/kernels.hpp"
#include "impact/trainer.hpp"
#include "test_support.hpp"

using namespace impact;
using test_support::error_code_of;
using test_support::make_dataset;

TEST_CASE("log-range initialization on [1, e] gives r exactly 1") {
  auto [r, k] = init_rni({1.0, std::exp(1.0)});
  CHECK(r == 1.0);
  CHECK(k == std::exp(1.0) * (1.0 + 1e-6));
}

TEST_CASE("constant targets give r exactly 0 and an inflated capacity") {
  auto [r, k] = init_rni({5.0, 5.0, 5.0});
  CHECK(r == 0.0);
  CHECK(k == 5.0 * (1.0 + 1e-6));
}

TEST_CASE("initialization preconditions") {
  CHECK(error_code_of([] { init_rni({1.0, 0.0}); }) == "trainer.NonPositiveTarget");
  CHECK(error_code_of([] { init_rni({1.0, -3.0}); }) == "trainer.NonPositiveTarget");
  CHECK(error_code_of([] { init_rni({3.0}); }) == "trainer.SingleSample");
}

TEST_CASE("analytic gradients match central finite differences over 100 cases") {
  const double h = 1e-6;
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t d = 1 + trial % 4;
    std::size_t n = 2 + (trial * 7) % 20;
    int degree = 1 + trial % 2;
    double l2 = trial % 3 == 0 ? 0.01 : 0.0;
    Dataset ds = test_support::random_dataset(n, d, trial * 13 + 1);
    ImpactModel m = test_support::random_model(d, trial * 31 + 7, degree);

    auto g = gradient(m, ds, l2, true);
    auto check = [&](double analytic, double* param, const char* name) {
      double saved = *param;
      auto f = [&](double v) {
        *param = v;
        double out = loss(m, ds, l2);
        *param = saved;
        return out;
      };
      double numeric = test_support::central_difference(f, saved, h);
      bool ok = test_support::close_rel(analytic, numeric, 1e-5, 1e-8);
      if (!ok)
        MESSAGE("trial ", trial, " param ", name, ": analytic ", analytic,
                " numeric ", numeric);
      CHECK(ok);
      ++checked;
    };

    for (std::size_t i = 0; i < d; ++i) check(g.dw[i], &m.w[i], "w");
    check(g.dw_y, &m.w_y, "w_y");
    check(g.db, &m.b, "b");
    check(g.dr, &m.r, "r");
  }
  CHECK(checked >= 100);
}

TEST_CASE("a zero-residual model's gradient is exactly the ridge term") {
  ImpactModel m = test_support::random_model(2, 40);
  Dataset ds = make_synthetic_dataset(m, 12, 0.0, 9);
  auto g = gradient(m, ds, 0.05, true);
  for (std::size_t i = 0; i < m.w.size(); ++i)
    CHECK(g.dw[i] == doctest::Approx(2.0 * 0.05 * m.w[i]).epsilon(1e-9));
  CHECK(g.dw_y == doctest::Approx(2.0 * 0.05 * m.w_y).epsilon(1e-9));
  CHECK(std::abs(g.db) < 1e-9);
  CHECK(std::abs(g.dr) < 1e-9);
}

TEST_CASE("training loss is non-increasing at a small learning rate") {
  Dataset ds = test_support::standardized(test_support::random_dataset(40, 3, 8));
  TrainConfig cfg;
  cfg.learning_rate = 1e-3;
  cfg.epochs = 300;
  auto [model, history] = fit_gd(ds, cfg);
  REQUIRE(history.epochs.size() == 300);
  for (std::size_t i = 1; i < history.epochs.size(); ++i)
    CHECK(history.epochs[i].train_loss <=
          history.epochs[i - 1].train_loss + 1e-12);
}

TEST_CASE("gradient descent recovers a noise-free generator") {
  ImpactModel generator = test_support::random_model(3, 7);
  Dataset ds = make_synthetic_dataset(generator, 200, 0.0, 17);
  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.epochs = 5000;
  cfg.init_seed = 4;
  auto [model, history] = fit_gd(ds, cfg);
  auto pred = kernels::predict_batch(model, ds.features);
  CHECK(test_support::r_squared(ds.target, pred) >= 0.999);
}

TEST_CASE("an absurd learning rate triggers divergence detection") {
  Dataset ds = test_support::random_dataset(20, 2, 3);
  TrainConfig cfg;
  cfg.learning_rate = 1e6;
  cfg.epochs = 200;
  CHECK(error_code_of([&] { fit_gd(ds, cfg); }) == "trainer.DivergenceDetected");
}

TEST_CASE("config validation") {
  Dataset ds = test_support::random_dataset(10, 2, 3);
  TrainConfig cfg;
  cfg.epochs = 0;
  CHECK(error_code_of([&] { fit_gd(ds, cfg); }) == "trainer.InvalidConfig");
  cfg.epochs = 10;
  cfg.learning_rate = 0.0;
  CHECK(error_code_of([&] { cfg.validate(); }) == "trainer.InvalidConfig");
  cfg.learning_rate = 0.1;
  cfg.validation_fraction = 0.6;
  CHECK(error_code_of([&] { cfg.validate(); }) == "trainer.InvalidConfig");
  cfg.validation_fraction = 0.0;
  cfg.degree = 0;
  CHECK(error_code_of([&] { cfg.validate(); }) == "trainer.InvalidConfig");
  cfg.degree = 1;
  cfg.l2 = -1.0;
  CHECK(error_code_of([&] { cfg.validate(); }) == "trainer.InvalidConfig");
  CHECK(error_code_of([&] {
          TrainConfig ok;
          Dataset empty;
          fit_gd(empty, ok);
        }) == "trainer.EmptyDataset");
}

TEST_CASE("least squares interpolates an exact line") {
  Dataset ds = make_dataset({{0.0}, {1.0}, {2.0}, {3.0}}, {1.0, 3.0, 5.0, 7.0});
  auto c = solve_normal_equations(ds, 1);
  REQUIRE(c.size() == 2);
  CHECK(c[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(c[1] == doctest::Approx(1.0).epsilon(1e-12));
  ImpactModel m = fit_least_squares(ds, 1);
  CHECK(m.w_y == 0.0);
  CHECK(m.k == 1.0);
  CHECK(m.r == 1.0);
  for (std::size_t r = 0; r < ds.n(); ++r) {
    double x = ds.features.at(r, 0);
    CHECK(predict(m, ds.features.row(r)) ==
          doctest::Approx(2.0 * x + 1.0).epsilon(1e-12));
  }
}

TEST_CASE("a duplicated feature column is rank deficient") {
  Dataset ds = test_support::random_dataset(20, 2, 9);
  for (std::size_t r = 0; r < ds.n(); ++r)
    ds.features.at(r, 1) = ds.features.at(r, 0);
  auto code = error_code_of([&] { solve_normal_equations(ds, 1); });
  CHECK(code == "trainer.RankDeficient");
  try {
    solve_normal_equations(ds, 1);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("x1") != std::string::npos);
  }
}

TEST_CASE("least-squares rejects degree below 1 and empty data") {
  Dataset ds = test_support::random_dataset(5, 2, 2);
  CHECK(error_code_of([&] { fit_least_squares(ds, 0); }) == "trainer.InvalidConfig");
  Dataset empty;
  CHECK(error_code_of([&] { solve_normal_equations(empty, 1); }) ==
        "trainer.EmptyDataset");
}

TEST_CASE("converged gradient descent agrees with the closed form") {
  Dataset ds = test_support::standardized(test_support::random_dataset(50, 3, 31));
  ImpactModel ls = fit_least_squares(ds, 1);
  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.epochs = 5000;
  auto [gd, history] = fit_gd(ds, cfg);
  auto ls_pred = kernels::predict_batch(ls, ds.features);
  auto gd_pred = kernels::predict_batch(gd, ds.features);
  CHECK(test_support::rmse_between(ls_pred, gd_pred) <= 1e-3);
}

TEST_CASE("the gauge-embedded least-squares model reproduces the linear fit bitwise") {
  Dataset ds = test_support::random_dataset(30, 3, 12);
  auto c = solve_normal_equations(ds, 1);
  ImpactModel m = fit_least_squares(ds, 1);
  for (std::size_t r = 0; r < ds.n(); ++r) {
    auto x = ds.features.row(r);
    double manual = 0.0;
    for (std::size_t i = 0; i < 3; ++i) manual += c[i] * x[i];
    manual += c[3];
    CHECK(predict(m, x) == manual);
  }
  // The batched kernel takes the same arithmetic path.
  auto batch = kernels::predict_batch(m, ds.features);
  for (std::size_t r = 0; r < ds.n(); ++r)
    CHECK(batch[r] == predict(m, ds.features.row(r)));
}

TEST_CASE("history serializes as epoch,train_loss,validation_loss") {
  Dataset ds = test_support::random_dataset(20, 2, 21);
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.learning_rate = 0.01;
  auto [model, history] = fit_gd(ds, cfg);
  std::istringstream csv(history.to_csv());
  std::string line;
  REQUIRE(std::getline(csv, line));
  CHECK(line == "epoch,train_loss,validation_loss");
  int rows = 0;
  while (std::getline(csv, line)) {
    CHECK(line.rfind(std::to_string(rows) + ",", 0) == 0);
    // No validation slice: the third field stays empty.
    CHECK(line.back() == ',');
    ++rows;
  }
  CHECK(rows == 5);
  CHECK_FALSE(history.used_validation);
}

TEST_CASE("early stopping cuts training short and records validation loss") {
  ImpactModel generator = test_support::random_model(2, 5);
  Dataset ds = make_synthetic_dataset(generator, 80, 0.5, 23);
  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.epochs = 4000;
  cfg.validation_fraction = 0.25;
  cfg.early_stop_patience = 5;
  auto [model, history] = fit_gd(ds, cfg);
  CHECK(history.used_validation);
  CHECK(history.epochs.size() < 4000);
  for (const auto& rec : history.epochs) CHECK(std::isfinite(rec.validation_loss));
}

TEST_CASE("training is deterministic for a fixed seed") {
  Dataset ds = test_support::random_dataset(30, 3, 77);
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.init_seed = 99;
  auto [m1, h1] = fit_gd(ds, cfg);
  auto [m2, h2] = fit_gd(ds, cfg);
  CHECK(m1.w == m2.w);
  CHECK(m1.w_y == m2.w_y);
  CHECK(m1.b == m2.b);
  CHECK(m1.r == m2.r);
  CHECK(h1.to_csv() == h2.to_csv());
}

TEST_CASE("non-positive targets fall back to a learned r") {
  Dataset ds = test_support::standardized(test_support::random_dataset(25, 2, 51));
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.learn_r = false;
  auto [model, history] = fit_gd(ds, cfg);
  CHECK(history.r_learned);
}
