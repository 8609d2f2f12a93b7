// Synthetic dataset generator for exercising the pipeline end to end. The
// survey-style sets mimic the shape of published risk-factor tables; none of
// the rows describe real people.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "impact/rng.hpp"
#include "impact/serialize.hpp"

namespace {

using impact::SplitMix64;

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::string fmt(double v, int digits) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

struct HeartRow {
  int male, currentSmoker, BPMeds, prevalentStroke, prevalentHyp, diabetes, target;
  double age, cigsPerDay, totChol, sysBP, diaBP, bmi, heartRate, glucose;
};

// Framingham-style study table: demographic and vitals columns with a
// ten-year outcome whose probability rises with the usual risk factors.
// Roughly 2% of the soft-measurement cells are blanked to exercise
// imputation.
void generate_heart(std::size_t rows, std::uint64_t seed, double missing_rate,
                    std::string& csv, std::string& schema) {
  SplitMix64 rng(seed);
  std::ostringstream out;
  out << "male,age,currentSmoker,cigsPerDay,BPMeds,prevalentStroke,prevalentHyp,diabetes,"
         "totChol,sysBP,diaBP,BMI,heartRate,glucose,TenYearCHD\n";
  for (std::size_t i = 0; i < rows; ++i) {
    HeartRow r;
    r.male = rng.uniform() < 0.45 ? 1 : 0;
    r.age = std::floor(rng.uniform(32.0, 71.0));
    r.currentSmoker = rng.uniform() < 0.49 ? 1 : 0;
    r.cigsPerDay =
        r.currentSmoker ? clamp(std::round(18.0 + 8.0 * rng.gaussian()), 1.0, 70.0) : 0.0;
    r.BPMeds = rng.uniform() < 0.03 ? 1 : 0;
    r.prevalentStroke = rng.uniform() < 0.006 ? 1 : 0;
    r.prevalentHyp = rng.uniform() < 0.31 ? 1 : 0;
    r.diabetes = rng.uniform() < 0.026 ? 1 : 0;
    r.totChol = clamp(236.0 + 44.0 * rng.gaussian(), 110.0, 600.0);
    r.sysBP = clamp(132.0 + 22.0 * rng.gaussian(), 85.0, 295.0);
    r.diaBP = clamp(0.55 * r.sysBP + 11.0 + 6.0 * rng.gaussian(), 50.0, 150.0);
    r.bmi = clamp(25.8 + 4.1 * rng.gaussian(), 15.0, 57.0);
    r.heartRate = clamp(76.0 + 12.0 * rng.gaussian(), 44.0, 143.0);
    r.glucose = clamp(82.0 + 24.0 * rng.gaussian(), 40.0, 394.0);

    double z = -5.24 + 0.066 * r.age + 0.012 * (r.sysBP - 130.0) + 0.3 * r.male +
               0.25 * r.currentSmoker + 0.009 * r.cigsPerDay +
               0.006 * (r.glucose - 80.0) + 0.004 * (r.totChol - 236.0) +
               0.9 * r.diabetes + 0.35 * r.prevalentHyp + 1.0 * r.prevalentStroke +
               0.4 * r.BPMeds + 0.02 * (r.bmi - 25.8) + 0.002 * (r.heartRate - 76.0);
    r.target = rng.uniform() < sigmoid(z) ? 1 : 0;

    auto cell = [&](const std::string& v) {
      return rng.uniform() < missing_rate ? std::string() : v;
    };
    out << r.male << ',' << fmt(r.age, 0) << ',' << r.currentSmoker << ','
        << cell(fmt(r.cigsPerDay, 0)) << ',' << r.BPMeds << ',' << r.prevalentStroke << ','
        << r.prevalentHyp << ',' << r.diabetes << ',' << cell(fmt(r.totChol, 1)) << ','
        << fmt(r.sysBP, 1) << ',' << fmt(r.diaBP, 1) << ',' << cell(fmt(r.bmi, 2)) << ','
        << cell(fmt(r.heartRate, 0)) << ',' << cell(fmt(r.glucose, 1)) << ',' << r.target
        << '\n';
  }
  csv = out.str();
  schema =
      "column.male = boolean feature\n"
      "column.age = numeric feature\n"
      "column.currentSmoker = boolean feature\n"
      "column.cigsPerDay = numeric feature\n"
      "column.BPMeds = boolean feature\n"
      "column.prevalentStroke = boolean feature\n"
      "column.prevalentHyp = boolean feature\n"
      "column.diabetes = boolean feature\n"
      "column.totChol = numeric feature\n"
      "column.sysBP = numeric feature\n"
      "column.diaBP = numeric feature\n"
      "column.BMI = numeric feature\n"
      "column.heartRate = numeric feature\n"
      "column.glucose = numeric feature\n"
      "column.TenYearCHD = boolean target\n"
      "bool.0 = 0\n"
      "bool.1 = 1\n";
}

// Two well-separated gaussian blobs in [0,1]^d; every sane classifier clears
// 95% accuracy here.
void generate_blobs(std::size_t rows, std::size_t dim, std::uint64_t seed,
                    std::string& csv, std::string& schema) {
  SplitMix64 rng(seed);
  std::ostringstream out;
  std::ostringstream sch;
  for (std::size_t c = 0; c < dim; ++c) {
    out << 'f' << c << ',';
    sch << "column.f" << c << " = numeric feature\n";
  }
  out << "label\n";
  sch << "column.label = boolean target\nbool.0 = 0\nbool.1 = 1\n";
  for (std::size_t i = 0; i < rows; ++i) {
    int label = rng.uniform() < 0.5 ? 1 : 0;
    double center = label ? 0.75 : 0.25;
    for (std::size_t c = 0; c < dim; ++c)
      out << fmt(center + 0.05 * rng.gaussian(), 6) << ',';
    out << label << '\n';
  }
  csv = out.str();
  schema = sch.str();
}

// Symptom survey with a categorical season column, for exercising one-hot
// expansion through the whole pipeline.
void generate_survey(std::size_t rows, std::uint64_t seed, std::string& csv,
                     std::string& schema) {
  SplitMix64 rng(seed);
  const char* seasons[4] = {"winter", "spring", "summer", "autumn"};
  const double season_shift[4] = {0.9, 0.4, -0.6, 0.2};
  std::ostringstream out;
  out << "age,gender,season,tiredness,dry_cough,difficulty_breathing,sore_throat,"
         "runny_nose,asthma\n";
  for (std::size_t i = 0; i < rows; ++i) {
    double age = std::floor(rng.uniform(12.0, 80.0));
    int gender = rng.uniform() < 0.5 ? 1 : 0;
    int season = static_cast<int>(rng.below(4));
    int tired = rng.uniform() < 0.40 ? 1 : 0;
    int cough = rng.uniform() < 0.35 ? 1 : 0;
    int breath = rng.uniform() < 0.25 ? 1 : 0;
    int throat = rng.uniform() < 0.30 ? 1 : 0;
    int nose = rng.uniform() < 0.45 ? 1 : 0;
    double z = -2.4 + 0.012 * (age - 40.0) + 0.15 * gender + season_shift[season] +
               0.5 * tired + 0.9 * cough + 1.6 * breath + 0.3 * throat + 0.4 * nose;
    int target = rng.uniform() < sigmoid(z) ? 1 : 0;
    out << fmt(age, 0) << ',' << gender << ',' << seasons[season] << ',' << tired << ','
        << cough << ',' << breath << ',' << throat << ',' << nose << ',' << target << '\n';
  }
  csv = out.str();
  schema =
      "column.age = numeric feature\n"
      "column.gender = boolean feature\n"
      "column.season = categorical feature\n"
      "column.tiredness = boolean feature\n"
      "column.dry_cough = boolean feature\n"
      "column.difficulty_breathing = boolean feature\n"
      "column.sore_throat = boolean feature\n"
      "column.runny_nose = boolean feature\n"
      "column.asthma = boolean target\n"
      "bool.0 = 0\n"
      "bool.1 = 1\n"
      "categories.season = autumn,spring,summer,winter\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthetic dataset generator"};
  std::string dataset = "blobs";
  std::size_t rows = 500;
  std::size_t dim = 2;
  std::uint64_t seed = 1;
  double missing_rate = 0.02;
  std::string out, schema_out;
  app.add_option("--dataset", dataset, "heart|blobs|survey")
      ->check(CLI::IsMember({"heart", "blobs", "survey"}))
      ->capture_default_str();
  app.add_option("--rows", rows, "row count")->capture_default_str();
  app.add_option("--dim", dim, "feature count (blobs only)")->capture_default_str();
  app.add_option("--seed", seed, "generator seed")->capture_default_str();
  app.add_option("--missing-rate", missing_rate, "blank-cell rate (heart only)")
      ->capture_default_str();
  app.add_option("--out", out, "CSV path")->required();
  app.add_option("--schema-out", schema_out, "schema path")->required();
  CLI11_PARSE(app, argc, argv);

  std::string csv, schema;
  if (dataset == "heart") generate_heart(rows, seed, missing_rate, csv, schema);
  else if (dataset == "survey") generate_survey(rows, seed, csv, schema);
  else generate_blobs(rows, dim, seed, csv, schema);

  try {
    impact::write_file_atomic(out, csv);
    impact::write_file_atomic(schema_out, schema);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cout << "wrote " << out << " (" << rows << " rows) and " << schema_out << "\n";
  return 0;
}
