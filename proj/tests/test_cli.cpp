#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "impact/growth_sim.hpp"
#include "test_support.hpp"

using nlohmann::json;
using test_support::run_command;
using test_support::slurp;
using test_support::TempDir;

namespace {

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

std::string last_data_line(const std::string& csv) {
  std::vector<std::string> lines;
  std::stringstream ss(csv);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty()) lines.push_back(line);
  return lines.back();
}

}  // namespace

TEST_CASE("--help lists every subcommand and exits zero") {
  TempDir dir;
  auto r = run_command(test_support::cli_path() + " --help", dir.path());
  CHECK(r.exit_code == 0);
  for (const char* name :
       {"simulate", "train", "evaluate", "compare", "learning-curve", "impact"})
    CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("simulate writes a trajectory that matches the closed form") {
  TempDir dir;
  auto out = dir.file("traj.csv");
  auto r = run_command(test_support::cli_path() +
                           " simulate --kind logistic --r 1 --k 100 --y0 1"
                           " --t-end 20 --steps 2000 --out " +
                           out.string(),
                       dir.path());
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("wrote " + out.string()) != std::string::npos);

  auto csv = slurp(out);
  CHECK(csv.rfind("time,y,dydt\n", 0) == 0);
  CHECK(line_count(csv) == 2002);  // header + 2001 recorded points
  auto fields = split_fields(last_data_line(csv));
  REQUIRE(fields.size() == 3);
  double y_final = std::stod(fields[1]);
  double exact = impact::logistic_closed_form(1.0, 100.0, 1.0, 20.0);
  CHECK(std::abs(y_final - exact) < 1e-3);
}

TEST_CASE("generated data flows through train, evaluate, compare and impact") {
  TempDir dir;
  const std::string cli = test_support::cli_path();
  const auto csv = dir.file("blobs.csv").string();
  const auto schema = dir.file("blobs.schema").string();

  auto gen = run_command(test_support::datagen_path() +
                             " --dataset blobs --rows 200 --dim 3 --seed 1 --out " + csv +
                             " --schema-out " + schema,
                         dir.path());
  REQUIRE(gen.exit_code == 0);

  const std::string data_args =
      " --input " + csv + " --schema " + schema + " --split 0.7 --seed 11";

  // train
  const auto model = dir.file("model.json").string();
  const auto history = dir.file("history.csv").string();
  auto tr = run_command(cli + " train" + data_args +
                            " --method gd --scaler minmax --epochs 800 --model-out " +
                            model + " --history-out " + history,
                        dir.path());
  REQUIRE(tr.exit_code == 0);
  CHECK(tr.out.find("wrote " + model) != std::string::npos);

  auto model_json = json::parse(slurp(model));
  CHECK(model_json.at("model").get<std::string>() == "impact");
  CHECK_FALSE(model_json.at("scaler").is_null());
  CHECK(slurp(history).rfind("epoch,train_loss,validation_loss\n", 0) == 0);

  // evaluate, twice, byte for byte
  const auto report1 = dir.file("report1.json").string();
  const auto report2 = dir.file("report2.json").string();
  const auto roc = dir.file("roc.csv").string();
  auto ev1 = run_command(cli + " evaluate" + data_args + " --model " + model +
                             " --on test --report-out " + report1 + " --roc-out " + roc,
                         dir.path());
  REQUIRE(ev1.exit_code == 0);
  auto ev2 = run_command(cli + " evaluate" + data_args + " --model " + model +
                             " --on test --report-out " + report2,
                         dir.path());
  REQUIRE(ev2.exit_code == 0);
  CHECK(slurp(report1) == slurp(report2));
  CHECK(slurp(roc).rfind("fpr,tpr,threshold\n", 0) == 0);

  auto report = json::parse(slurp(report1));
  CHECK(report.at("command").get<std::string>() == "evaluate");
  CHECK(report.at("eval").at("on").get<std::string>() == "test");
  CHECK(report.at("metrics").at("classification").at("accuracy").get<double>() >= 0.9);
  CHECK(report.at("input").at("hash").get<std::string>().size() == 16);

  // compare
  const auto cmp = dir.file("compare.json").string();
  auto cp = run_command(cli + " compare" + data_args + " --epochs 800 --out " + cmp,
                        dir.path());
  REQUIRE(cp.exit_code == 0);
  CHECK(cp.out.find("Method") != std::string::npos);
  CHECK(cp.out.find("impact") != std::string::npos);

  auto cmp_json = json::parse(slurp(cmp));
  CHECK(cmp_json.at("ranked_by").get<std::string>() == "accuracy descending");
  auto results = cmp_json.at("results");
  REQUIRE(results.size() == 5);  // impact + the four default baselines
  for (std::size_t i = 0; i < results.size(); ++i) {
    CHECK(results.at(i).at("rank").get<int>() == static_cast<int>(i) + 1);
    if (i > 0)
      CHECK(results.at(i).at("accuracy").get<double>() <=
            results.at(i - 1).at("accuracy").get<double>());
  }

  // impact scores (also split-free: scores are computed over the full file)
  const auto scores_out = dir.file("impact.json").string();
  auto im = run_command(cli + " impact --input " + csv + " --schema " + schema +
                            " --model " + model + " --out " + scores_out,
                        dir.path());
  REQUIRE(im.exit_code == 0);
  CHECK(im.out.find("Feature") != std::string::npos);
  auto scores_json = json::parse(slurp(scores_out));
  auto scores = scores_json.at("scores");
  REQUIRE(scores.size() == 3);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    CHECK(scores.at(i).at("rank").get<int>() == static_cast<int>(i) + 1);
    if (i > 0)
      CHECK(scores.at(i).at("impact").get<double>() <=
            scores.at(i - 1).at("impact").get<double>());
  }

  // learning curve (no split; it cross-validates over the full file)
  const auto curve = dir.file("curve.csv").string();
  auto lc = run_command(cli + " learning-curve --input " + csv + " --schema " + schema +
                            " --seed 11 --method least-squares --fractions 0.5,1.0"
                            " --folds 3 --scoring r2 --out " +
                            curve,
                        dir.path());
  REQUIRE(lc.exit_code == 0);
  auto curve_text = slurp(curve);
  CHECK(curve_text.rfind("train_size,train_score,cv_score\n", 0) == 0);
  CHECK(line_count(curve_text) == 3);  // header + one row per fraction
}

TEST_CASE("unknown flags are usage errors with exit code 2") {
  TempDir dir;
  auto r = run_command(test_support::cli_path() + " simulate --bogus 1", dir.path());
  CHECK(r.exit_code == 2);
  CHECK(r.err.rfind("error: cli.UsageError:", 0) == 0);
}

TEST_CASE("a missing input file is a single-line dataset error") {
  TempDir dir;
  auto model = dir.file("model.json").string();
  auto r = run_command(test_support::cli_path() + " train --input " +
                           dir.file("absent.csv").string() + " --schema " +
                           dir.file("absent.schema").string() + " --model-out " + model,
                       dir.path());
  CHECK(r.exit_code == 1);
  CHECK(r.err.rfind("error: ", 0) == 0);
  CHECK(r.err.find("dataset.MissingFile") != std::string::npos);
  CHECK(line_count(r.err) == 1);
}

TEST_CASE("evaluating a model against the wrong width fails cleanly") {
  TempDir dir;
  const std::string cli = test_support::cli_path();
  const auto csv3 = dir.file("wide.csv").string();
  const auto schema3 = dir.file("wide.schema").string();
  const auto csv2 = dir.file("narrow.csv").string();
  const auto schema2 = dir.file("narrow.schema").string();

  REQUIRE(run_command(test_support::datagen_path() +
                          " --dataset blobs --rows 60 --dim 3 --seed 2 --out " + csv3 +
                          " --schema-out " + schema3,
                      dir.path())
              .exit_code == 0);
  REQUIRE(run_command(test_support::datagen_path() +
                          " --dataset blobs --rows 60 --dim 2 --seed 3 --out " + csv2 +
                          " --schema-out " + schema2,
                      dir.path())
              .exit_code == 0);

  const auto model = dir.file("model.json").string();
  REQUIRE(run_command(cli + " train --input " + csv3 + " --schema " + schema3 +
                          " --method least-squares --model-out " + model,
                      dir.path())
              .exit_code == 0);

  auto r = run_command(cli + " evaluate --input " + csv2 + " --schema " + schema2 +
                           " --model " + model + " --report-out " +
                           dir.file("report.json").string(),
                       dir.path());
  CHECK(r.exit_code == 1);
  CHECK(r.err.rfind("error: ", 0) == 0);
  CHECK(line_count(r.err) == 1);
}
