#include "impact/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "impact/error.hpp"
#include "impact/rng.hpp"

namespace impact {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  m.data() = j.at("data").get<std::vector<double>>();
  if (m.data().size() != m.rows() * m.cols())
    throw Error("serialize.BadModelFile", "matrix data length does not match rows*cols");
  return m;
}

template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error("serialize.BadModelFile", std::string(what) + ": " + e.what());
  }
}

}  // namespace

json scaler_to_json(const ScalerParams& p) {
  json j;
  j["kind"] = to_string(p.kind);
  j["columns"] = p.column_names;
  if (p.kind == ScalerKind::MinMax) {
    j["min"] = p.a;
    j["max"] = p.b;
  } else {
    j["mean"] = p.a;
    j["std"] = p.b;
  }
  return j;
}

ScalerParams scaler_from_json(const json& j) {
  return guarded("scaler", [&] {
    ScalerParams p;
    p.kind = scaler_kind_from_string(j.at("kind").get<std::string>());
    p.column_names = j.at("columns").get<std::vector<std::string>>();
    const char* ka = p.kind == ScalerKind::MinMax ? "min" : "mean";
    const char* kb = p.kind == ScalerKind::MinMax ? "max" : "std";
    p.a = j.at(ka).get<std::vector<double>>();
    p.b = j.at(kb).get<std::vector<double>>();
    if (p.a.size() != p.b.size() || p.a.size() != p.column_names.size())
      throw Error("serialize.BadModelFile", "scaler arrays disagree on column count");
    return p;
  });
}

json model_to_json(const ImpactModel& m, const ScalerParams* scaler) {
  json j;
  j["model"] = "impact";
  j["w"] = m.w;
  j["w_y"] = m.w_y;
  j["b"] = m.b;
  j["r"] = m.r;
  j["k"] = m.k;
  j["j"] = m.degree;
  j["threshold"] = m.threshold;
  j["scaler"] = scaler ? scaler_to_json(*scaler) : json(nullptr);
  return j;
}

json baseline_to_json(const BaselineModel& m, const ScalerParams* scaler) {
  json j;
  j["model"] = to_string(m.kind());
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, KnnModel>) {
          j["k"] = model.k;
          j["train_features"] = matrix_to_json(model.train_features);
          j["train_labels"] = model.train_labels;
        } else if constexpr (std::is_same_v<T, GaussianNbModel>) {
          j["mean"] = json::array({model.mean[0], model.mean[1]});
          j["var"] = json::array({model.var[0], model.var[1]});
          j["prior"] = json::array({model.prior[0], model.prior[1]});
        } else if constexpr (std::is_same_v<T, BernoulliNbModel>) {
          j["p"] = json::array({model.p[0], model.p[1]});
          j["prior"] = json::array({model.prior[0], model.prior[1]});
          j["alpha"] = model.alpha;
          j["binarize_at"] = model.binarize_at;
        } else {
          j["coef"] = model.coef;
          j["intercept"] = model.intercept;
        }
      },
      m.impl);
  j["scaler"] = scaler ? scaler_to_json(*scaler) : json(nullptr);
  return j;
}

std::string SavedModel::tag() const {
  return is_impact() ? "impact" : to_string(baseline().kind());
}

SavedModel saved_model_from_json(const json& j) {
  return guarded("model", [&] {
    SavedModel out;
    if (j.contains("scaler") && !j.at("scaler").is_null())
      out.scaler = scaler_from_json(j.at("scaler"));
    std::string tag = j.at("model").get<std::string>();
    if (tag == "impact") {
      ImpactModel m;
      m.w = j.at("w").get<std::vector<double>>();
      m.w_y = j.at("w_y").get<double>();
      m.b = j.at("b").get<double>();
      m.r = j.at("r").get<double>();
      m.k = j.at("k").get<double>();
      m.degree = j.at("j").get<int>();
      m.threshold = j.at("threshold").get<double>();
      m.validate();
      out.value = std::move(m);
      return out;
    }
    BaselineModel bm;
    switch (baseline_kind_from_string(tag)) {
      case BaselineKind::Knn: {
        KnnModel m;
        m.k = j.at("k").get<int>();
        m.train_features = matrix_from_json(j.at("train_features"));
        m.train_labels = j.at("train_labels").get<std::vector<double>>();
        if (m.train_labels.size() != m.train_features.rows())
          throw Error("serialize.BadModelFile", "knn labels disagree with feature rows");
        bm.impl = std::move(m);
        break;
      }
      case BaselineKind::GaussianNb: {
        GaussianNbModel m;
        for (int c = 0; c < 2; ++c) {
          m.mean[c] = j.at("mean").at(c).get<std::vector<double>>();
          m.var[c] = j.at("var").at(c).get<std::vector<double>>();
          m.prior[c] = j.at("prior").at(c).get<double>();
        }
        bm.impl = std::move(m);
        break;
      }
      case BaselineKind::BernoulliNb: {
        BernoulliNbModel m;
        for (int c = 0; c < 2; ++c) {
          m.p[c] = j.at("p").at(c).get<std::vector<double>>();
          m.prior[c] = j.at("prior").at(c).get<double>();
        }
        m.alpha = j.at("alpha").get<double>();
        m.binarize_at = j.at("binarize_at").get<double>();
        bm.impl = std::move(m);
        break;
      }
      case BaselineKind::Linear: {
        LinearModel m;
        m.coef = j.at("coef").get<std::vector<double>>();
        m.intercept = j.at("intercept").get<double>();
        bm.impl = std::move(m);
        break;
      }
      case BaselineKind::Logistic: {
        LogisticModel m;
        m.coef = j.at("coef").get<std::vector<double>>();
        m.intercept = j.at("intercept").get<double>();
        bm.impl = std::move(m);
        break;
      }
    }
    out.value = std::move(bm);
    return out;
  });
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("serialize.ReadFailed", "cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad())
    throw Error("serialize.ReadFailed", "read error on '" + path.string() + "'");
  return ss.str();
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error("serialize.BadModelFile",
                "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error("serialize.WriteFailed", "cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::remove(tmp.string().c_str());
      throw Error("serialize.WriteFailed", "write error on '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.string().c_str());
    throw Error("serialize.WriteFailed",
                "cannot rename '" + tmp.string() + "' to '" + path.string() + "': " +
                    ec.message());
  }
}

void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

std::string content_hash_hex(std::string_view bytes) {
  std::uint64_t h = fnv1a64(bytes);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace impact
