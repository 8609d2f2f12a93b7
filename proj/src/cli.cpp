#include "impact/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "impact/baselines.hpp"
#include "impact/dataset.hpp"
#include "impact/error.hpp"
#include "impact/growth_sim.hpp"
#include "impact/metrics.hpp"
#include "impact/rng.hpp"
#include "impact/scaler.hpp"
#include "impact/serialize.hpp"
#include "impact/trainer.hpp"

namespace impact {

namespace {

using nlohmann::json;

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

// ---------------------------------------------------------------------------
// Shared tabular-pipeline plumbing.

struct DataOptions {
  std::string input;
  std::string schema_path;
  std::string impute_kind = "mean";
  double split = 0.7;
  std::uint64_t seed = 1;
};

void add_data_options(CLI::App* cmd, DataOptions& o, bool with_split = true) {
  cmd->add_option("--input", o.input, "input CSV file")->required();
  cmd->add_option("--schema", o.schema_path, "schema file (key-value format)")->required();
  cmd->add_option("--impute", o.impute_kind, "missing-cell fill: mean|median")
      ->check(CLI::IsMember({"mean", "median"}))
      ->capture_default_str();
  if (with_split)
    cmd->add_option("--split", o.split, "train fraction of the seeded shuffle")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
  cmd->add_option("--seed", o.seed, "root seed; stages derive their own streams")
      ->capture_default_str();
}

struct LoadedData {
  Dataset full;           // imputed
  std::string input_hash; // over the raw CSV bytes
};

LoadedData load_pipeline_input(const DataOptions& o) {
  std::string text;
  try {
    text = read_file(o.input);
  } catch (const Error&) {
    throw Error("dataset.MissingFile", "cannot open input CSV '" + o.input + "'");
  }
  LoadedData out;
  out.input_hash = content_hash_hex(text);
  Schema schema = Schema::load(o.schema_path);
  Dataset ds = load_csv_text(text, schema, o.input);
  out.full = impute(ds, o.impute_kind == "median" ? ImputeStrategy::Median
                                                  : ImputeStrategy::Mean);
  return out;
}

std::pair<Dataset, Dataset> split_for(const LoadedData& data, const DataOptions& o) {
  return train_test_split(data.full, o.split, derive_seed(o.seed, "split"));
}

json data_config_json(const DataOptions& o, bool with_split = true) {
  json j{{"input", o.input},
         {"schema", o.schema_path},
         {"impute", o.impute_kind},
         {"seed", o.seed}};
  if (with_split) j["split"] = o.split;
  return j;
}

json input_stamp(const LoadedData& data, const DataOptions& o) {
  return json{{"path", o.input},
              {"hash", data.input_hash},
              {"rows", data.full.n()},
              {"columns", data.full.dim()}};
}

struct TrainOptions {
  double learning_rate = 0.05;
  int epochs = 2000;
  double l2 = 0.0;
  int degree = 1;
  bool learn_r = false;
  double threshold = 0.5;
  int patience = 0;
  double validation_fraction = 0.0;
};

void add_train_options(CLI::App* cmd, TrainOptions& o) {
  cmd->add_option("--lr", o.learning_rate, "gradient-descent step size")
      ->capture_default_str();
  cmd->add_option("--epochs", o.epochs, "gradient-descent epochs")->capture_default_str();
  cmd->add_option("--l2", o.l2, "ridge penalty on w and w_y")->capture_default_str();
  cmd->add_option("--degree", o.degree, "polynomial degree applied to every feature")
      ->capture_default_str();
  cmd->add_flag("--learn-r", o.learn_r, "optimize r instead of freezing its init value");
  cmd->add_option("--threshold", o.threshold, "classification cut on the raw score")
      ->capture_default_str();
  cmd->add_option("--patience", o.patience,
                  "early-stop epochs without validation improvement (0 = off)")
      ->capture_default_str();
  cmd->add_option("--val-fraction", o.validation_fraction,
                  "training share held out for early stopping")
      ->capture_default_str();
}

TrainConfig to_train_config(const TrainOptions& o, std::uint64_t seed) {
  TrainConfig cfg;
  cfg.learning_rate = o.learning_rate;
  cfg.epochs = o.epochs;
  cfg.l2 = o.l2;
  cfg.degree = o.degree;
  cfg.learn_r = o.learn_r;
  cfg.threshold = o.threshold;
  cfg.early_stop_patience = o.patience;
  cfg.validation_fraction = o.validation_fraction;
  cfg.init_seed = derive_seed(seed, "train");
  return cfg;
}

json train_config_json(const TrainOptions& o, const std::string& method) {
  return json{{"method", method},
              {"lr", o.learning_rate},
              {"epochs", o.epochs},
              {"l2", o.l2},
              {"degree", o.degree},
              {"learn_r", o.learn_r},
              {"threshold", o.threshold},
              {"patience", o.patience},
              {"val_fraction", o.validation_fraction}};
}

// Scores under any saved model, applying its embedded scaler first.
std::vector<double> saved_model_scores(const SavedModel& saved, const Dataset& ds) {
  const Dataset* eval = &ds;
  Dataset scaled;
  if (saved.scaler) {
    scaled = transform(ds, *saved.scaler);
    eval = &scaled;
  }
  if (saved.is_impact()) return kernels::predict_batch(saved.impact(), eval->features);
  return predict_scores(saved.baseline(), eval->features);
}

bool binary_labels(const std::vector<double>& y) {
  bool saw0 = false, saw1 = false;
  for (double v : y) {
    if (v == 0.0) saw0 = true;
    else if (v == 1.0) saw1 = true;
    else return false;
  }
  return saw0 && saw1;
}

json metadata_notes() {
  return json{{"precision_recall_averaging", "positive class"},
              {"regressor_curve_score", "r_squared"}};
}

void report_written(const std::string& path) { std::cout << "wrote " << path << "\n"; }

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
  std::string kind = "logistic";
  GrowthParams params;
  double t_end = 20.0;
  int steps = 2000;
  std::string x_series_csv;  // inline comma list
  std::string x_mode = "coupled";
  std::string out;
};

int run_simulate(const SimulateOptions& o) {
  GrowthParams p = o.params;
  if (o.x_mode == "series") {
    p.x_mode = ExogenousMode::Series;
    std::stringstream ss(o.x_series_csv);
    std::string tok;
    p.x_series.clear();
    while (std::getline(ss, tok, ',')) p.x_series.push_back(std::stod(tok));
  } else {
    p.x_mode = ExogenousMode::CoupledLogistic;
  }
  if (o.steps < 1) throw Error("cli.UsageError", "--steps must be at least 1");
  double dt = o.t_end / static_cast<double>(o.steps);
  Trajectory traj = simulate(p, growth_kind_from_string(o.kind), dt, o.steps);
  write_file_atomic(o.out, traj.to_csv());
  std::cout << "simulated " << o.kind << " growth over t in [0, " << o.t_end << "], "
            << o.steps << " steps; final y = " << std::setprecision(10) << traj.y.back()
            << "\n";
  report_written(o.out);
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainCmdOptions {
  DataOptions data;
  TrainOptions train;
  std::string method = "gd";
  std::string scaler_kind = "minmax";
  std::string model_out;
  std::string history_out;
};

int run_train(const TrainCmdOptions& o) {
  LoadedData data = load_pipeline_input(o.data);
  auto [train_ds, test_ds] = split_for(data, o.data);

  std::optional<ScalerParams> scaler;
  Dataset fit_ds = train_ds;
  if (o.scaler_kind != "none") {
    scaler = fit_scaler(train_ds, scaler_kind_from_string(o.scaler_kind));
    fit_ds = transform(train_ds, *scaler);
  }

  ImpactModel model;
  TrainHistory history;
  if (o.method == "least-squares") {
    model = fit_least_squares(fit_ds, o.train.degree);
    model.threshold = o.train.threshold;
  } else {
    std::tie(model, history) = fit_gd(fit_ds, to_train_config(o.train, o.data.seed));
  }

  write_json_atomic(o.model_out, model_to_json(model, scaler ? &*scaler : nullptr));
  if (!o.history_out.empty()) write_file_atomic(o.history_out, history.to_csv());

  double train_mse = kernels::mse_loss(model, fit_ds.features, fit_ds.target, 0.0);
  std::cout << "fit " << o.method << " model on " << train_ds.n() << " rows ("
            << test_ds.n() << " held out); train mse " << std::setprecision(6) << train_mse
            << "\n";
  report_written(o.model_out);
  if (!o.history_out.empty()) report_written(o.history_out);
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
  DataOptions data;
  std::string model_path;
  std::string on = "test";
  std::string report_out;
  std::string roc_out;
};

int run_evaluate(const EvaluateOptions& o) {
  LoadedData data = load_pipeline_input(o.data);
  SavedModel saved = saved_model_from_json(read_json_file(o.model_path));

  Dataset eval_ds;
  std::size_t train_rows = 0;
  if (o.on == "all") {
    eval_ds = data.full;
  } else {
    auto [train_ds, test_ds] = split_for(data, o.data);
    train_rows = train_ds.n();
    eval_ds = o.on == "train" ? std::move(train_ds) : std::move(test_ds);
  }

  std::vector<double> scores = saved_model_scores(saved, eval_ds);

  EvalReport report;
  report.regression = regression_report(eval_ds.target, scores);
  double threshold = saved.is_impact() ? saved.impact().threshold : 0.5;
  if (binary_labels(eval_ds.target)) {
    report.classification = classification_report(eval_ds.target, scores, threshold);
    report.roc = roc_auc(eval_ds.target, scores);
  }

  json out{{"command", "evaluate"},
           {"config", data_config_json(o.data)},
           {"input", input_stamp(data, o.data)},
           {"eval", json{{"on", o.on},
                         {"rows", eval_ds.n()},
                         {"train_rows", train_rows},
                         {"threshold", threshold}}},
           {"model", json{{"file", o.model_path}, {"tag", saved.tag()}}},
           {"metrics", report.to_json()},
           {"notes", metadata_notes()}};
  out["config"]["on"] = o.on;
  out["config"]["model"] = o.model_path;
  write_json_atomic(o.report_out, out);

  std::cout << "evaluated " << saved.tag() << " on " << eval_ds.n() << " " << o.on
            << " rows: mse " << std::setprecision(6) << report.regression->mse << ", mae "
            << report.regression->mae;
  if (report.classification)
    std::cout << ", accuracy " << report.classification->accuracy << ", auc "
              << report.roc->auc;
  std::cout << "\n";
  report_written(o.report_out);
  if (!o.roc_out.empty()) {
    if (!report.roc)
      throw Error("cli.NoRocCurve",
                  "target is not binary 0/1 on both classes; no ROC to write");
    write_file_atomic(o.roc_out, roc_csv(*report.roc));
    report_written(o.roc_out);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// compare

struct CompareOptions {
  DataOptions data;
  TrainOptions train;
  std::string scaler_kind = "minmax";
  std::vector<std::string> baselines{"logistic", "knn", "gaussian_nb", "bernoulli_nb"};
  double logistic_lr = 0.1;
  int logistic_epochs = 2000;
  std::string out;
  std::string table_out;
};

struct CompareRow {
  std::string method;
  double accuracy, precision, recall, f1, auc;
  json hyperparameters;
  int rank = 0;
};

std::string compare_table(const std::vector<CompareRow>& rows) {
  std::size_t name_w = 6;
  for (const auto& r : rows) name_w = std::max(name_w, r.method.size());
  std::ostringstream ss;
  ss << std::left << std::setw(static_cast<int>(name_w) + 2) << "Method" << std::right
     << std::setw(8) << "AC" << std::setw(8) << "PR" << std::setw(8) << "RC"
     << std::setw(8) << "F1" << std::setw(6) << "Rank" << "\n";
  ss << std::fixed << std::setprecision(4);
  for (const auto& r : rows)
    ss << std::left << std::setw(static_cast<int>(name_w) + 2) << r.method << std::right
       << std::setw(8) << r.accuracy << std::setw(8) << r.precision << std::setw(8)
       << r.recall << std::setw(8) << r.f1 << std::setw(6) << r.rank << "\n";
  return ss.str();
}

int run_compare(const CompareOptions& o) {
  LoadedData data = load_pipeline_input(o.data);
  auto [train_raw, test_raw] = split_for(data, o.data);

  ScalerParams scaler = fit_scaler(train_raw, scaler_kind_from_string(o.scaler_kind));
  Dataset train_ds = transform(train_raw, scaler);
  Dataset test_ds = transform(test_raw, scaler);

  auto score_row = [&](const std::string& method, const std::vector<double>& scores,
                       double threshold, json hyper) {
    CompareRow row;
    row.method = method;
    auto cls = classification_report(test_ds.target, scores, threshold);
    row.accuracy = cls.accuracy;
    row.precision = cls.precision;
    row.recall = cls.recall;
    row.f1 = cls.f1;
    row.auc = roc_auc(test_ds.target, scores).auc;
    row.hyperparameters = std::move(hyper);
    return row;
  };

  std::vector<CompareRow> rows;

  TrainConfig impact_cfg = to_train_config(o.train, o.data.seed);
  auto [impact_model, history] = fit_gd(train_ds, impact_cfg);
  rows.push_back(score_row("impact", kernels::predict_batch(impact_model, test_ds.features),
                           impact_model.threshold, train_config_json(o.train, "gd")));

  for (const auto& name : o.baselines) {
    BaselineKind kind = baseline_kind_from_string(name);
    if (kind == BaselineKind::Knn) {
      // Sweep the neighbor count and keep the best test accuracy; the
      // reference protocol's exact setting is unreported.
      CompareRow best;
      bool have = false;
      for (int k : {3, 5, 7}) {
        BaselineSpec spec;
        spec.kind = kind;
        spec.k = k;
        BaselineModel m = fit_baseline(train_ds, spec);
        CompareRow row = score_row("knn", predict_scores(m, test_ds.features), 0.5,
                                   json{{"k", k}, {"swept", json::array({3, 5, 7})}});
        if (!have || row.accuracy > best.accuracy) {
          best = row;
          have = true;
        }
      }
      rows.push_back(best);
      continue;
    }
    BaselineSpec spec;
    spec.kind = kind;
    spec.learning_rate = o.logistic_lr;
    spec.epochs = o.logistic_epochs;
    json hyper;
    if (kind == BaselineKind::Logistic)
      hyper = json{{"lr", o.logistic_lr}, {"epochs", o.logistic_epochs}};
    else if (kind == BaselineKind::BernoulliNb)
      hyper = json{{"alpha", spec.laplace_alpha}};
    else
      hyper = json::object();
    BaselineModel m = fit_baseline(train_ds, spec);
    rows.push_back(score_row(name, predict_scores(m, test_ds.features), 0.5, hyper));
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const CompareRow& a, const CompareRow& b) {
                     return a.accuracy > b.accuracy;
                   });
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = static_cast<int>(i + 1);

  json results = json::array();
  for (const auto& r : rows)
    results.push_back(json{{"method", r.method},
                           {"accuracy", r.accuracy},
                           {"precision", r.precision},
                           {"recall", r.recall},
                           {"f1", r.f1},
                           {"auc", r.auc},
                           {"rank", r.rank},
                           {"hyperparameters", r.hyperparameters}});
  json cfg = data_config_json(o.data);
  cfg["scaler"] = o.scaler_kind;
  cfg["baselines"] = o.baselines;
  cfg["impact"] = train_config_json(o.train, "gd");
  cfg["logistic_lr"] = o.logistic_lr;
  cfg["logistic_epochs"] = o.logistic_epochs;
  json out{{"command", "compare"},
           {"config", cfg},
           {"input", input_stamp(data, o.data)},
           {"split", json{{"train_rows", train_ds.n()}, {"test_rows", test_ds.n()}}},
           {"ranked_by", "accuracy descending"},
           {"results", results},
           {"notes", metadata_notes()}};

  std::string table = compare_table(rows);
  std::cout << table;
  write_json_atomic(o.out, out);
  report_written(o.out);
  if (!o.table_out.empty()) {
    write_file_atomic(o.table_out, table);
    report_written(o.table_out);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// learning-curve

struct CurveOptions {
  DataOptions data;
  TrainOptions train;
  std::string method = "impact";
  std::string scaler_kind = "minmax";
  std::string fractions = "0.1,0.25,0.5,0.75,1.0";
  int folds = 5;
  int knn_k = 5;
  std::string scoring = "auto";
  std::string out;
  std::string report_out;
};

FitPredict make_fit_predict(const CurveOptions& o) {
  std::optional<ScalerKind> scaler;
  if (o.scaler_kind != "none") scaler = scaler_kind_from_string(o.scaler_kind);

  auto scale = [scaler](const Dataset& train, const Matrix& eval_x,
                        Dataset& train_out, Matrix& eval_out) {
    if (!scaler) {
      train_out = train;
      eval_out = eval_x;
      return;
    }
    ScalerParams p = fit_scaler(train, *scaler);
    train_out = transform(train, p);
    Dataset wrapped;
    wrapped.features = eval_x;
    wrapped.target.assign(eval_x.rows(), 0.0);
    wrapped.column_meta = train.column_meta;
    eval_out = transform(wrapped, p).features;
  };

  if (o.method == "impact") {
    TrainConfig cfg = to_train_config(o.train, o.data.seed);
    return [scale, cfg](const Dataset& train, const Matrix& eval_x) {
      Dataset tr;
      Matrix ex;
      scale(train, eval_x, tr, ex);
      auto [model, history] = fit_gd(tr, cfg);
      return kernels::predict_batch(model, ex);
    };
  }
  if (o.method == "least-squares") {
    int degree = o.train.degree;
    return [scale, degree](const Dataset& train, const Matrix& eval_x) {
      Dataset tr;
      Matrix ex;
      scale(train, eval_x, tr, ex);
      ImpactModel model = fit_least_squares(tr, degree);
      return kernels::predict_batch(model, ex);
    };
  }
  BaselineSpec spec;
  spec.kind = baseline_kind_from_string(o.method);
  spec.k = o.knn_k;
  return [scale, spec](const Dataset& train, const Matrix& eval_x) {
    Dataset tr;
    Matrix ex;
    scale(train, eval_x, tr, ex);
    BaselineModel m = fit_baseline(tr, spec);
    return predict_scores(m, ex);
  };
}

int run_learning_curve(const CurveOptions& o) {
  LoadedData data = load_pipeline_input(o.data);

  LearningCurveConfig cfg;
  std::stringstream ss(o.fractions);
  std::string tok;
  while (std::getline(ss, tok, ',')) cfg.fractions.push_back(std::stod(tok));
  cfg.folds = o.folds;
  cfg.seed = derive_seed(o.data.seed, "curve");
  bool classifier = binary_labels(data.full.target);
  if (o.scoring == "accuracy") cfg.scoring = CurveScoring::Accuracy;
  else if (o.scoring == "r2") cfg.scoring = CurveScoring::RSquared;
  else cfg.scoring = classifier ? CurveScoring::Accuracy : CurveScoring::RSquared;

  auto curve = learning_curve(make_fit_predict(o), data.full, cfg);

  write_file_atomic(o.out, curve_csv(curve));
  std::cout << "learning curve for " << o.method << " over " << curve.size()
            << " fractions (" << (cfg.scoring == CurveScoring::Accuracy ? "accuracy" : "r2")
            << " scoring)\n";
  report_written(o.out);

  if (!o.report_out.empty()) {
    EvalReport report;
    report.curve = curve;
    json cfg_json = data_config_json(o.data, false);
    cfg_json["method"] = o.method;
    cfg_json["scaler"] = o.scaler_kind;
    cfg_json["fractions"] = o.fractions;
    cfg_json["folds"] = o.folds;
    cfg_json["scoring"] = cfg.scoring == CurveScoring::Accuracy ? "accuracy" : "r2";
    if (o.method == "knn") cfg_json["knn_k"] = o.knn_k;
    if (o.method == "impact") cfg_json["impact"] = train_config_json(o.train, "gd");
    json out{{"command", "learning-curve"},
             {"config", cfg_json},
             {"input", input_stamp(data, o.data)},
             {"metrics", report.to_json()},
             {"notes", metadata_notes()}};
    write_json_atomic(o.report_out, out);
    report_written(o.report_out);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// impact (per-feature scores)

struct ImpactOptions {
  DataOptions data;
  std::string model_path;
  std::string out;
};

int run_impact(const ImpactOptions& o) {
  LoadedData data = load_pipeline_input(o.data);
  SavedModel saved = saved_model_from_json(read_json_file(o.model_path));
  if (!saved.is_impact())
    throw Error("cli.NotImpactModel",
                "per-feature impact scores need an impact model, got '" + saved.tag() + "'");

  Dataset eval_ds = data.full;
  if (saved.scaler) eval_ds = transform(eval_ds, *saved.scaler);

  const ImpactModel& model = saved.impact();
  struct Entry {
    std::string feature;
    double score;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < eval_ds.dim(); ++i)
    entries.push_back({eval_ds.column_meta[i].name,
                       impact_score(model, eval_ds, i).aggregate});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.score > b.score; });

  json scores = json::array();
  std::size_t name_w = 7;
  for (const auto& e : entries) name_w = std::max(name_w, e.feature.size());
  std::ostringstream table;
  table << std::left << std::setw(static_cast<int>(name_w) + 2) << "Feature" << std::right
        << std::setw(14) << "Impact" << std::setw(6) << "Rank" << "\n";
  table << std::fixed << std::setprecision(6);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    scores.push_back(json{{"feature", entries[i].feature},
                          {"impact", entries[i].score},
                          {"rank", i + 1}});
    table << std::left << std::setw(static_cast<int>(name_w) + 2) << entries[i].feature
          << std::right << std::setw(14) << entries[i].score << std::setw(6) << i + 1
          << "\n";
  }

  json cfg = data_config_json(o.data, false);
  cfg["model"] = o.model_path;
  json out{{"command", "impact"},
           {"config", cfg},
           {"input", input_stamp(data, o.data)},
           {"model", json{{"file", o.model_path}, {"tag", saved.tag()}}},
           {"ranked_by", "impact descending"},
           {"scores", scores}};

  std::cout << table.str();
  write_json_atomic(o.out, out);
  report_written(o.out);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"impact-learning toolkit: growth simulation, training, evaluation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key-value config file; [subcommand] sections");

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "integrate a growth model and write a CSV");
  sim_cmd->add_option("--kind", sim.kind, "malthusian|logistic|competition")
      ->check(CLI::IsMember({"malthusian", "logistic", "competition"}))
      ->capture_default_str();
  sim_cmd->add_option("--r", sim.params.r, "rate of natural increase")->capture_default_str();
  sim_cmd->add_option("--k", sim.params.k, "carrying capacity")->capture_default_str();
  sim_cmd->add_option("--y0", sim.params.y0, "initial population")->capture_default_str();
  sim_cmd->add_option("--w", sim.params.w, "competition: impact of x on y")
      ->capture_default_str();
  sim_cmd->add_option("--w-y", sim.params.w_y, "competition: self impact of y")
      ->capture_default_str();
  sim_cmd->add_option("--x-mode", sim.x_mode, "competition: coupled|series")
      ->check(CLI::IsMember({"coupled", "series"}))
      ->capture_default_str();
  sim_cmd->add_option("--x-series", sim.x_series_csv,
                      "comma list of x samples at the step grid (series mode)");
  sim_cmd->add_option("--x0", sim.params.x0, "competition: initial x")->capture_default_str();
  sim_cmd->add_option("--r-x", sim.params.r_x, "competition: rate for x")
      ->capture_default_str();
  sim_cmd->add_option("--k-x", sim.params.k_x, "competition: capacity for x")
      ->capture_default_str();
  sim_cmd->add_option("--t-end", sim.t_end, "integration horizon")->capture_default_str();
  sim_cmd->add_option("--steps", sim.steps, "fixed RK4 step count")->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "trajectory CSV path")->required();

  TrainCmdOptions train;
  auto* train_cmd = app.add_subcommand("train", "fit a model and write model JSON");
  add_data_options(train_cmd, train.data);
  add_train_options(train_cmd, train.train);
  train_cmd->add_option("--method", train.method, "gd|least-squares")
      ->check(CLI::IsMember({"gd", "least-squares"}))
      ->capture_default_str();
  train_cmd->add_option("--scaler", train.scaler_kind, "minmax|standard|none")
      ->check(CLI::IsMember({"minmax", "standard", "none"}))
      ->capture_default_str();
  train_cmd->add_option("--model-out", train.model_out, "model JSON path")->required();
  train_cmd->add_option("--history-out", train.history_out, "loss history CSV path");

  EvaluateOptions eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "score a saved model and write a report");
  add_data_options(eval_cmd, eval.data);
  eval_cmd->add_option("--model", eval.model_path, "model JSON path")->required();
  eval_cmd->add_option("--on", eval.on, "test|train|all rows")
      ->check(CLI::IsMember({"test", "train", "all"}))
      ->capture_default_str();
  eval_cmd->add_option("--report-out", eval.report_out, "report JSON path")->required();
  eval_cmd->add_option("--roc-out", eval.roc_out, "ROC sweep CSV path");

  CompareOptions compare;
  auto* compare_cmd =
      app.add_subcommand("compare", "rank impact learning against baselines on one split");
  add_data_options(compare_cmd, compare.data);
  add_train_options(compare_cmd, compare.train);
  compare_cmd->add_option("--scaler", compare.scaler_kind, "minmax|standard|none")
      ->check(CLI::IsMember({"minmax", "standard"}))
      ->capture_default_str();
  compare_cmd
      ->add_option("--baselines", compare.baselines,
                   "any of: logistic knn gaussian_nb bernoulli_nb linear")
      ->delimiter(',')
      ->capture_default_str();
  compare_cmd->add_option("--logistic-lr", compare.logistic_lr, "logistic baseline step size")
      ->capture_default_str();
  compare_cmd
      ->add_option("--logistic-epochs", compare.logistic_epochs, "logistic baseline epochs")
      ->capture_default_str();
  compare_cmd->add_option("--out", compare.out, "ranked report JSON path")->required();
  compare_cmd->add_option("--table-out", compare.table_out, "aligned-text table path");

  CurveOptions curve;
  auto* curve_cmd =
      app.add_subcommand("learning-curve", "cross-validated scores vs training size");
  add_data_options(curve_cmd, curve.data, false);
  add_train_options(curve_cmd, curve.train);
  curve_cmd->add_option("--method", curve.method,
                        "impact|least-squares|logistic|knn|gaussian_nb|bernoulli_nb|linear")
      ->capture_default_str();
  curve_cmd->add_option("--scaler", curve.scaler_kind, "minmax|standard|none")
      ->check(CLI::IsMember({"minmax", "standard", "none"}))
      ->capture_default_str();
  curve_cmd->add_option("--fractions", curve.fractions, "ascending comma list in (0,1]")
      ->capture_default_str();
  curve_cmd->add_option("--folds", curve.folds, "cross-validation folds")
      ->capture_default_str();
  curve_cmd->add_option("--knn-k", curve.knn_k, "neighbor count for --method knn")
      ->capture_default_str();
  curve_cmd->add_option("--scoring", curve.scoring, "auto|accuracy|r2")
      ->check(CLI::IsMember({"auto", "accuracy", "r2"}))
      ->capture_default_str();
  curve_cmd->add_option("--out", curve.out, "curve CSV path")->required();
  curve_cmd->add_option("--report-out", curve.report_out, "curve report JSON path");

  ImpactOptions impact_opts;
  auto* impact_cmd =
      app.add_subcommand("impact", "per-feature impact scores of a trained model");
  add_data_options(impact_cmd, impact_opts.data, false);
  impact_cmd->add_option("--model", impact_opts.model_path, "model JSON path")->required();
  impact_cmd->add_option("--out", impact_opts.out, "scores JSON path")->required();

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: cli.UsageError: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    if (sim_cmd->parsed()) return run_simulate(sim);
    if (train_cmd->parsed()) return run_train(train);
    if (eval_cmd->parsed()) return run_evaluate(eval);
    if (compare_cmd->parsed()) return run_compare(compare);
    if (curve_cmd->parsed()) return run_learning_curve(curve);
    if (impact_cmd->parsed()) return run_impact(impact_opts);
    std::cerr << "error: cli.UsageError: no subcommand given\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << one_line(e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: cli.Internal: " << one_line(e.what()) << "\n";
    return 1;
  }
}

}  // namespace impact
