#include "impact/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "impact/rng.hpp"

namespace impact {

std::string to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::Numeric: return "numeric";
    case ColumnKind::Boolean: return "boolean";
    case ColumnKind::Categorical: return "categorical";
  }
  return "?";
}

std::size_t Schema::target_index() const {
  std::size_t found = columns.size();
  std::size_t count = 0;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].role == ColumnRole::Target) {
      found = i;
      ++count;
    }
  }
  if (count != 1)
    throw Error("dataset.SchemaInvalid",
                "schema must declare exactly one target column, found " +
                    std::to_string(count));
  return found;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_on(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == delim) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_double(const std::string& tok, double& out) {
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

Schema Schema::parse(const std::string& text) {
  Schema schema;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw Error("dataset.SchemaInvalid",
                  "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    auto dot = key.find('.');
    std::string group = dot == std::string::npos ? key : key.substr(0, dot);
    std::string name = dot == std::string::npos ? "" : key.substr(dot + 1);

    if (group == "column") {
      std::istringstream vs(value);
      std::string kind_s, role_s;
      vs >> kind_s >> role_s;
      SchemaColumn col;
      col.name = name;
      if (kind_s == "numeric") col.kind = ColumnKind::Numeric;
      else if (kind_s == "boolean") col.kind = ColumnKind::Boolean;
      else if (kind_s == "categorical") col.kind = ColumnKind::Categorical;
      else
        throw Error("dataset.SchemaInvalid",
                    "line " + std::to_string(lineno) + ": unknown kind '" + kind_s + "'");
      if (role_s.empty() || role_s == "feature") col.role = ColumnRole::Feature;
      else if (role_s == "target") col.role = ColumnRole::Target;
      else
        throw Error("dataset.SchemaInvalid",
                    "line " + std::to_string(lineno) + ": unknown role '" + role_s + "'");
      schema.columns.push_back(std::move(col));
    } else if (group == "bool") {
      double v = 0;
      if (!parse_double(value, v) || (v != 0.0 && v != 1.0))
        throw Error("dataset.SchemaInvalid",
                    "line " + std::to_string(lineno) + ": bool token must map to 0 or 1");
      schema.boolean_encoding[name] = v;
    } else if (group == "categories") {
      std::vector<std::string> cats;
      for (auto& c : split_on(value, ',')) {
        std::string t = trim(c);
        if (!t.empty()) cats.push_back(t);
      }
      schema.categories[name] = std::move(cats);
    } else {
      throw Error("dataset.SchemaInvalid",
                  "line " + std::to_string(lineno) + ": unknown key group '" + group + "'");
    }
  }
  schema.target_index();  // validate
  const auto& target = schema.columns[schema.target_index()];
  if (target.kind == ColumnKind::Categorical)
    throw Error("dataset.SchemaInvalid", "target column must be numeric or boolean");
  return schema;
}

Schema Schema::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("dataset.MissingFile", "cannot open schema file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool Dataset::has_missing() const {
  for (auto m : missing)
    if (m) return true;
  return false;
}

void Dataset::check_layout_matches(const Dataset& other, const std::string& who) const {
  if (dim() != other.dim())
    throw Error(who, "feature count mismatch: " + std::to_string(dim()) + " vs " +
                         std::to_string(other.dim()));
  for (std::size_t c = 0; c < dim(); ++c)
    if (column_meta[c].name != other.column_meta[c].name)
      throw Error(who, "column " + std::to_string(c) + " name mismatch: '" +
                           column_meta[c].name + "' vs '" + other.column_meta[c].name + "'");
}

namespace {

// RFC-4180 record reader: quoted fields may contain commas, escaped quotes
// and newlines. Returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  int ch;
  while ((ch = in.get()) != EOF) {
    any = true;
    char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      if (!field.empty() && field.back() == '\r') field.pop_back();
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(c);
    }
  }
  if (!any) return false;
  if (!field.empty() && field.back() == '\r') field.pop_back();
  fields.push_back(std::move(field));
  return true;
}

bool is_missing_token(const std::string& tok) { return tok.empty() || tok == "NA"; }

struct OutputColumn {
  std::string name;
  ColumnKind kind;
  std::size_t source;           // index into schema.columns
  std::string category;         // one-hot level, empty unless categorical
};

}  // namespace

Dataset load_csv_text(const std::string& text, const Schema& schema,
                      const std::string& origin) {
  std::istringstream in(text);
  std::vector<std::string> header;
  if (!read_record(in, header))
    throw Error("dataset.HeaderMismatch", origin + ": empty file");

  if (header.size() != schema.columns.size()) {
    throw Error("dataset.HeaderMismatch",
                origin + ": expected " + std::to_string(schema.columns.size()) +
                    " columns, file has " + std::to_string(header.size()));
  }
  std::string offenders;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) != schema.columns[i].name) {
      if (!offenders.empty()) offenders += ", ";
      offenders += "col " + std::to_string(i) + " '" + trim(header[i]) + "' != '" +
                   schema.columns[i].name + "'";
    }
  }
  if (!offenders.empty())
    throw Error("dataset.HeaderMismatch", origin + ": " + offenders);

  const std::size_t target_col = schema.target_index();

  // Raw pass: keep tokens so categorical levels can be discovered first.
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> rec;
  while (read_record(in, rec)) {
    if (rec.size() == 1 && rec[0].empty()) continue;  // trailing blank line
    if (rec.size() != schema.columns.size())
      throw Error("dataset.UnparseableCell",
                  origin + ": row " + std::to_string(rows.size() + 1) + " has " +
                      std::to_string(rec.size()) + " fields, expected " +
                      std::to_string(schema.columns.size()));
    rows.push_back(rec);
  }

  // Category levels per categorical column: declared in the schema, or
  // discovered from the file and sorted so the layout is deterministic.
  std::map<std::size_t, std::vector<std::string>> levels;
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    if (schema.columns[c].kind != ColumnKind::Categorical) continue;
    auto declared = schema.categories.find(schema.columns[c].name);
    if (declared != schema.categories.end()) {
      levels[c] = declared->second;
    } else {
      std::set<std::string> seen;
      for (const auto& r : rows)
        if (!is_missing_token(r[c])) seen.insert(trim(r[c]));
      levels[c] = std::vector<std::string>(seen.begin(), seen.end());
    }
    if (levels[c].empty())
      throw Error("dataset.AllMissingColumn",
                  "categorical column '" + schema.columns[c].name + "' has no values");
  }

  // Output feature layout: numeric/boolean columns pass through, each
  // categorical column expands to one 0/1 indicator per level.
  std::vector<OutputColumn> out_cols;
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    if (c == target_col) continue;
    const auto& sc = schema.columns[c];
    if (sc.kind == ColumnKind::Categorical) {
      for (const auto& level : levels[c])
        out_cols.push_back({sc.name + "=" + level, ColumnKind::Boolean, c, level});
    } else {
      out_cols.push_back({sc.name, sc.kind, c, ""});
    }
  }

  Dataset ds;
  const std::size_t n = rows.size();
  const std::size_t d = out_cols.size();
  ds.features = Matrix(n, d);
  ds.target.resize(n);
  ds.missing.assign(n * d, 0);
  for (const auto& oc : out_cols) ds.column_meta.push_back({oc.name, oc.kind});

  auto cell_error = [&](std::size_t row, const std::string& col, const std::string& tok) {
    return Error("dataset.UnparseableCell", origin + ": row " + std::to_string(row + 1) +
                                                ", column '" + col + "', token '" + tok + "'");
  };

  for (std::size_t r = 0; r < n; ++r) {
    // Target first; a row without a usable target is rejected outright.
    {
      const auto& sc = schema.columns[target_col];
      std::string tok = trim(rows[r][target_col]);
      if (is_missing_token(tok)) throw cell_error(r, sc.name, tok);
      if (sc.kind == ColumnKind::Boolean) {
        auto it = schema.boolean_encoding.find(tok);
        if (it == schema.boolean_encoding.end()) throw cell_error(r, sc.name, tok);
        ds.target[r] = it->second;
      } else {
        double v;
        if (!parse_double(tok, v)) throw cell_error(r, sc.name, tok);
        ds.target[r] = v;
      }
    }
    for (std::size_t oc_i = 0; oc_i < d; ++oc_i) {
      const auto& oc = out_cols[oc_i];
      const auto& sc = schema.columns[oc.source];
      std::string tok = trim(rows[r][oc.source]);
      if (is_missing_token(tok)) {
        ds.missing[r * d + oc_i] = 1;
        continue;
      }
      double v = 0;
      if (!oc.category.empty()) {
        // Token must be one of the known levels for the source column.
        const auto& lv = levels[oc.source];
        if (std::find(lv.begin(), lv.end(), tok) == lv.end())
          throw cell_error(r, sc.name, tok);
        v = tok == oc.category ? 1.0 : 0.0;
      } else if (sc.kind == ColumnKind::Boolean) {
        auto it = schema.boolean_encoding.find(tok);
        if (it == schema.boolean_encoding.end()) throw cell_error(r, sc.name, tok);
        v = it->second;
      } else {
        if (!parse_double(tok, v)) throw cell_error(r, sc.name, tok);
      }
      ds.features.at(r, oc_i) = v;
    }
  }
  return ds;
}

Dataset load_csv(const std::string& path, const Schema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("dataset.MissingFile", "cannot open CSV file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_csv_text(buf.str(), schema, path);
}

Dataset impute(const Dataset& ds, ImputeStrategy strategy) {
  Dataset out = ds;
  const std::size_t n = ds.n(), d = ds.dim();
  if (ds.missing.empty() || !ds.has_missing()) {
    out.missing.clear();
    return out;
  }
  for (std::size_t c = 0; c < d; ++c) {
    std::vector<double> present;
    present.reserve(n);
    for (std::size_t r = 0; r < n; ++r)
      if (!ds.is_missing(r, c)) present.push_back(ds.features.at(r, c));
    if (present.empty())
      throw Error("dataset.AllMissingColumn",
                  "column '" + ds.column_meta[c].name + "' (index " + std::to_string(c) +
                      ") has no observed values");
    double fill;
    if (strategy == ImputeStrategy::Mean) {
      double sum = 0;
      for (double v : present) sum += v;
      fill = sum / static_cast<double>(present.size());
    } else {
      std::sort(present.begin(), present.end());
      std::size_t m = present.size();
      fill = (m % 2 == 1) ? present[m / 2]
                          : 0.5 * (present[m / 2 - 1] + present[m / 2]);
    }
    for (std::size_t r = 0; r < n; ++r)
      if (ds.is_missing(r, c)) out.features.at(r, c) = fill;
  }
  out.missing.clear();
  return out;
}

Dataset take_rows(const Dataset& ds, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.column_meta = ds.column_meta;
  out.provenance = ds.provenance;
  out.features = Matrix(rows.size(), ds.dim());
  out.target.resize(rows.size());
  if (!ds.missing.empty()) out.missing.assign(rows.size() * ds.dim(), 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::size_t r = rows[i];
    for (std::size_t c = 0; c < ds.dim(); ++c) {
      out.features.at(i, c) = ds.features.at(r, c);
      if (!ds.missing.empty()) out.missing[i * ds.dim() + c] = ds.missing[r * ds.dim() + c];
    }
    out.target[i] = ds.target[r];
  }
  return out;
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& ds, double train_fraction,
                                             std::uint64_t seed) {
  const std::size_t n = ds.n();
  if (n < 2) throw Error("dataset.DegenerateSplit", "need at least 2 rows to split");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error("dataset.DegenerateSplit", "train_fraction must lie in (0,1)");
  const auto n_train = static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train == n)
    throw Error("dataset.DegenerateSplit",
                "fraction " + std::to_string(train_fraction) + " leaves a side empty for N=" +
                    std::to_string(n));
  auto idx = shuffled_indices(n, seed);
  std::vector<std::size_t> train_idx(idx.begin(), idx.begin() + n_train);
  std::vector<std::size_t> test_idx(idx.begin() + n_train, idx.end());
  return {take_rows(ds, train_idx), take_rows(ds, test_idx)};
}

}  // namespace impact
