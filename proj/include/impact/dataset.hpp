#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "impact/matrix.hpp"

namespace impact {

enum class ColumnKind { Numeric, Boolean, Categorical };
enum class ColumnRole { Feature, Target };

std::string to_string(ColumnKind kind);

struct SchemaColumn {
  std::string name;
  ColumnKind kind = ColumnKind::Numeric;
  ColumnRole role = ColumnRole::Feature;
};

// Explicit column declaration for a CSV file. No type inference: the schema
// names every column in file order, marks exactly one as the target, and
// maps boolean tokens to 0/1.
struct Schema {
  std::vector<SchemaColumn> columns;
  std::map<std::string, double> boolean_encoding;  // token -> 0.0 or 1.0
  // Optional fixed category lists for categorical columns. When absent the
  // categories are discovered from the file and sorted lexicographically.
  std::map<std::string, std::vector<std::string>> categories;

  std::size_t target_index() const;  // throws if not exactly one target

  // Parses the key-value schema format documented in the README:
  //   column.<name> = <numeric|boolean|categorical> <feature|target>
  //   bool.<token>  = <0|1>
  //   categories.<name> = a,b,c
  static Schema parse(const std::string& text);
  static Schema load(const std::string& path);
};

struct ColumnMeta {
  std::string name;
  ColumnKind kind = ColumnKind::Numeric;
};

// Feature matrix + target vector + per-feature metadata. Immutable by
// convention: every pipeline stage returns a new Dataset.
struct Dataset {
  Matrix features;                    // N x d
  std::vector<double> target;         // length N
  std::vector<ColumnMeta> column_meta;  // length d
  // Missing cells are flagged explicitly, never encoded as a magic number.
  // Row-major N x d; empty once imputation has run.
  std::vector<std::uint8_t> missing;
  std::string provenance;  // generator JSON for synthetic data, else empty

  std::size_t n() const { return features.rows(); }
  std::size_t dim() const { return features.cols(); }

  bool is_missing(std::size_t r, std::size_t c) const {
    return !missing.empty() && missing[r * features.cols() + c] != 0;
  }
  bool has_missing() const;
  void check_layout_matches(const Dataset& other, const std::string& who) const;
};

enum class ImputeStrategy { Mean, Median };

// CSV ingestion per the schema. Boolean tokens are mapped through the
// schema's encoding, categorical columns are one-hot expanded, and missing
// cells (empty or "NA") are flagged for impute(). Rows with a missing or
// unparseable target are an error: the target defines supervision and is
// never synthesized.
Dataset load_csv(const std::string& path, const Schema& schema);

// Same parser over an in-memory string; load_csv wraps this.
Dataset load_csv_text(const std::string& text, const Schema& schema,
                      const std::string& origin = "<memory>");

// Replaces every missing cell in column c with the column's mean or median
// over the non-missing cells. Idempotent.
Dataset impute(const Dataset& ds, ImputeStrategy strategy);

// Deterministic seeded shuffle, then the first floor(train_fraction * N)
// rows go to train and the rest to test.
std::pair<Dataset, Dataset> train_test_split(const Dataset& ds, double train_fraction,
                                             std::uint64_t seed);

// Row subset in the given index order. Shared by split and learning curves.
Dataset take_rows(const Dataset& ds, const std::vector<std::size_t>& rows);

}  // namespace impact
