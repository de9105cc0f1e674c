#include "fpbench/persistence.hpp"

#include <fstream>
#include <sstream>

#include "fpbench/error.hpp"

namespace fs = std::filesystem;

namespace fpbench {

namespace {

Json tensor_json(const Tensor& t) { return Json{{"shape", t.shape}, {"data", t.data}}; }

Tensor tensor_from(const Json& j) {
  Tensor t;
  t.shape = j.at("shape").get<std::vector<std::size_t>>();
  t.data = j.at("data").get<std::vector<double>>();
  std::size_t n = 1;
  for (auto s : t.shape) n *= s;
  if (n != t.data.size()) throw Error(ErrorCode::SchemaError, "tensor data length does not match its shape");
  return t;
}

void check_header(const Json& j, const std::string& kind) {
  if (!j.is_object() || j.value("format", "") != "fpbench-model") {
    throw Error(ErrorCode::SchemaError, "not an fpbench model file");
  }
  if (j.value("version", 0) != kModelFormatVersion) throw Error(ErrorCode::SchemaError, "unsupported model version");
  if (j.value("kind", "") != kind) throw Error(ErrorCode::SchemaError, "expected a " + kind + " model");
}

Json header(const std::string& kind) {
  return Json{{"format", "fpbench-model"}, {"version", kModelFormatVersion}, {"kind", kind}};
}

}  // namespace

Json to_json(const CnnModel& model) {
  Json j = header("cnn");
  const auto& a = model.arch;
  Json layers = Json::array();
  for (const auto& l : a.conv_layers) layers.push_back({{"filters", l.filters}, {"kernel", l.kernel}});
  j["arch"] = {{"height", a.height},         {"width", a.width},
               {"channels", a.channels},     {"conv_layers", layers},
               {"dense_hidden", a.dense_hidden}, {"dropout_rate", a.dropout_rate},
               {"output_classes", a.output_classes}};
  j["seed"] = model.seed;
  j["epoch_losses"] = model.epoch_losses;
  Json params = Json::array();
  for (const auto& p : model.params) params.push_back(tensor_json(p));
  j["params"] = std::move(params);
  Json m = Json::array(), v = Json::array();
  for (const auto& t : model.optimizer.m) m.push_back(tensor_json(t));
  for (const auto& t : model.optimizer.v) v.push_back(tensor_json(t));
  j["optimizer"] = {{"step", model.optimizer.step}, {"m", m}, {"v", v}};
  return j;
}

CnnModel cnn_from_json(const Json& j) {
  check_header(j, "cnn");
  try {
    CnnModel model;
    const Json& a = j.at("arch");
    model.arch.height = a.at("height");
    model.arch.width = a.at("width");
    model.arch.channels = a.at("channels");
    model.arch.conv_layers.clear();
    for (const auto& l : a.at("conv_layers")) model.arch.conv_layers.push_back({l.at("filters"), l.at("kernel")});
    model.arch.dense_hidden = a.at("dense_hidden");
    model.arch.dropout_rate = a.at("dropout_rate");
    model.arch.output_classes = a.at("output_classes");
    model.arch.validate();
    model.seed = j.at("seed");
    model.epoch_losses = j.at("epoch_losses").get<std::vector<double>>();
    for (const auto& p : j.at("params")) model.params.push_back(tensor_from(p));
    const Json& opt = j.at("optimizer");
    model.optimizer.step = opt.at("step");
    for (const auto& t : opt.at("m")) model.optimizer.m.push_back(tensor_from(t));
    for (const auto& t : opt.at("v")) model.optimizer.v.push_back(tensor_from(t));
    const CnnModel fresh = init_cnn(model.arch, 0);
    if (fresh.params.size() != model.params.size()) throw Error(ErrorCode::SchemaError, "parameter count mismatch");
    for (std::size_t i = 0; i < fresh.params.size(); ++i)
      if (fresh.params[i].shape != model.params[i].shape) throw Error(ErrorCode::SchemaError, "parameter shape mismatch");
    return model;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
}

Json to_json(const TrainedClassifier& model) {
  Json j = header(std::string(to_string(model.kind)));
  j["classes"] = model.classes;
  j["feature_dim"] = model.feature_dim;
  j["loss_curve"] = model.loss_curve;
  switch (model.kind) {
    case ClassifierKind::LogReg: {
      const auto& p = std::get<LogRegParams>(model.params);
      j["weights"] = p.weights;
      j["bias"] = p.bias;
      break;
    }
    case ClassifierKind::Knn: {
      const auto& p = std::get<KnnParams>(model.params);
      j["k"] = p.k;
      j["points"] = p.points;
      j["labels"] = p.labels;
      break;
    }
    case ClassifierKind::Mlp: {
      const auto& p = std::get<MlpParams>(model.params);
      j["hidden"] = p.hidden;
      j["w1"] = p.w1;
      j["b1"] = p.b1;
      j["w2"] = p.w2;
      j["b2"] = p.b2;
      break;
    }
    case ClassifierKind::Svm: {
      const auto& p = std::get<SvmParams>(model.params);
      j["gamma"] = p.gamma;
      j["C"] = p.C;
      Json machines = Json::array();
      for (const auto& m : p.machines) {
        machines.push_back({{"rho", m.rho}, {"iterations", m.iterations}, {"alpha", m.alpha}, {"sign", m.sign},
                            {"support", m.support}});
      }
      j["machines"] = std::move(machines);
      break;
    }
  }
  return j;
}

TrainedClassifier classifier_from_json(const Json& j) {
  const std::string kind = j.value("kind", "");
  TrainedClassifier model;
  if (kind == "logreg") model.kind = ClassifierKind::LogReg;
  else if (kind == "knn") model.kind = ClassifierKind::Knn;
  else if (kind == "mlp") model.kind = ClassifierKind::Mlp;
  else if (kind == "svm") model.kind = ClassifierKind::Svm;
  else throw Error(ErrorCode::SchemaError, "unknown classifier kind '" + kind + "'");
  check_header(j, kind);
  try {
    model.classes = j.at("classes").get<Labels>();
    model.feature_dim = j.at("feature_dim");
    model.loss_curve = j.at("loss_curve").get<std::vector<double>>();
    switch (model.kind) {
      case ClassifierKind::LogReg:
        model.params = LogRegParams{j.at("weights").get<Samples>(), j.at("bias").get<Vector>()};
        break;
      case ClassifierKind::Knn:
        model.params = KnnParams{j.at("k").get<std::size_t>(), j.at("points").get<Samples>(), j.at("labels").get<Labels>()};
        break;
      case ClassifierKind::Mlp:
        model.params = MlpParams{j.at("hidden").get<std::size_t>(), j.at("w1").get<Vector>(), j.at("b1").get<Vector>(),
                                 j.at("w2").get<Vector>(), j.at("b2").get<Vector>()};
        break;
      case ClassifierKind::Svm: {
        SvmParams p;
        p.gamma = j.at("gamma");
        p.C = j.at("C");
        for (const auto& m : j.at("machines")) {
          SvmBinary b;
          b.rho = m.at("rho");
          b.iterations = m.at("iterations");
          b.alpha = m.at("alpha").get<Vector>();
          b.sign = m.at("sign").get<std::vector<int>>();
          b.support = m.at("support").get<Samples>();
          p.machines.push_back(std::move(b));
        }
        model.params = std::move(p);
        break;
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
  return model;
}

Json to_json(const PcaModel& model) {
  return Json{{"mean", model.mean},
              {"components", model.components},
              {"explained_variance", model.explained_variance},
              {"total_variance", model.total_variance}};
}

PcaModel pca_from_json(const Json& j) {
  try {
    PcaModel m;
    m.mean = j.at("mean").get<Vector>();
    m.components = j.at("components").get<Samples>();
    m.explained_variance = j.at("explained_variance").get<Vector>();
    m.total_variance = j.at("total_variance");
    return m;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
}

Json report_to_json(const EvalReport& r) {
  Json j;
  j["experiment_id"] = r.meta.experiment_id;
  j["seed"] = r.meta.seed;
  j["config_digest"] = r.meta.config_digest;
  j["accuracy"] = r.accuracy;
  Json per_class = Json::array();
  for (AlterationClass c : kAllClasses) {
    const auto& m = r.per_class[to_index(c)];
    per_class.push_back({{"class", std::string(class_name(c))},
                         {"precision", m.precision},
                         {"recall", m.recall},
                         {"f1", m.f1},
                         {"support", m.support}});
  }
  j["per_class"] = std::move(per_class);
  j["macro_avg"] = {{"precision", r.macro_avg.precision}, {"recall", r.macro_avg.recall}, {"f1", r.macro_avg.f1}};
  j["weighted_avg"] = {
      {"precision", r.weighted_avg.precision}, {"recall", r.weighted_avg.recall}, {"f1", r.weighted_avg.f1}};
  Json cm = Json::array();
  for (const auto& row : r.confusion.counts) cm.push_back(row);
  j["confusion"] = std::move(cm);
  j["wall_time_seconds"] = r.meta.wall_time_seconds;
  j["descriptor_ids"] = r.meta.descriptor_ids;
  return j;
}

namespace {

const Json& field(const Json& j, const std::string& name, const std::string& path) {
  if (!j.is_object() || !j.contains(name)) throw Error(ErrorCode::SchemaError, "missing field '" + path + name + "'");
  return j.at(name);
}

double number(const Json& j, const std::string& name, const std::string& path = "") {
  const Json& v = field(j, name, path);
  if (!v.is_number()) throw Error(ErrorCode::SchemaError, "field '" + path + name + "' must be a number");
  return v.get<double>();
}

AverageMetrics averages(const Json& j, const std::string& name) {
  const Json& a = field(j, name, "");
  const std::string path = name + ".";
  return {number(a, "precision", path), number(a, "recall", path), number(a, "f1", path)};
}

}  // namespace

EvalReport report_from_json(const Json& j) {
  EvalReport r;
  const Json& id = field(j, "experiment_id", "");
  if (!id.is_string()) throw Error(ErrorCode::SchemaError, "field 'experiment_id' must be a string");
  r.meta.experiment_id = id.get<std::string>();
  const Json& seed = field(j, "seed", "");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
    throw Error(ErrorCode::SchemaError, "field 'seed' must be an integer");
  }
  r.meta.seed = seed.get<std::uint64_t>();
  const Json& digest = field(j, "config_digest", "");
  if (!digest.is_string()) throw Error(ErrorCode::SchemaError, "field 'config_digest' must be a string");
  r.meta.config_digest = digest.get<std::string>();
  r.accuracy = number(j, "accuracy");

  const Json& per_class = field(j, "per_class", "");
  if (!per_class.is_array() || per_class.size() != kNumClasses) {
    throw Error(ErrorCode::SchemaError, "field 'per_class' must list 4 classes");
  }
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const std::string path = "per_class[" + std::to_string(c) + "].";
    const Json& e = per_class[c];
    field(e, "class", path);
    auto& m = r.per_class[c];
    m.precision = number(e, "precision", path);
    m.recall = number(e, "recall", path);
    m.f1 = number(e, "f1", path);
    m.support = static_cast<std::uint64_t>(number(e, "support", path));
  }
  r.macro_avg = averages(j, "macro_avg");
  r.weighted_avg = averages(j, "weighted_avg");

  const Json& cm = field(j, "confusion", "");
  if (!cm.is_array() || cm.size() != kNumClasses) throw Error(ErrorCode::SchemaError, "field 'confusion' must be 4x4");
  for (std::size_t t = 0; t < kNumClasses; ++t) {
    if (!cm[t].is_array() || cm[t].size() != kNumClasses) {
      throw Error(ErrorCode::SchemaError, "field 'confusion' must be 4x4");
    }
    for (std::size_t p = 0; p < kNumClasses; ++p) r.confusion.counts[t][p] = cm[t][p].get<std::uint64_t>();
  }
  const std::uint64_t total = r.confusion.total();
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (total == 0) break;
    std::uint64_t predicted = 0, actual = 0;
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      predicted += r.confusion.counts[k][c];
      actual += r.confusion.counts[c][k];
    }
    const double tp = static_cast<double>(r.confusion.counts[c][c]);
    r.per_class[c].one_vs_rest_accuracy =
        (static_cast<double>(total) - (static_cast<double>(predicted) - tp) - (static_cast<double>(actual) - tp)) /
        static_cast<double>(total);
  }
  r.meta.wall_time_seconds = number(j, "wall_time_seconds");
  const Json& ids = field(j, "descriptor_ids", "");
  if (!ids.is_array()) throw Error(ErrorCode::SchemaError, "field 'descriptor_ids' must be an array");
  for (const auto& d : ids) r.meta.descriptor_ids.push_back(d.get<std::string>());
  return r;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, path.string() + ": " + e.what());
  }
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error(ErrorCode::IoFailure, "short write to " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot rename onto " + path.string() + ": " + ec.message());
}

}  // namespace fpbench
