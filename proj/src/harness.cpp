#include "fpbench/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "fpbench/error.hpp"
#include "fpbench/features.hpp"
#include "fpbench/imaging.hpp"

namespace fs = std::filesystem;

namespace fpbench {

namespace {

constexpr std::array<std::string_view, 7> kExperimentNames = {"exp1", "exp2-cnn", "exp2-logreg", "exp3",
                                                              "exp4", "exp5-mlp", "exp5-svm"};
constexpr std::array<std::string_view, 12> kStageNames = {"resize", "pixels", "gabor-maps", "gabor-features",
                                                          "hog",    "pca",    "smote",      "cnn",
                                                          "logreg", "knn",    "mlp",        "svm"};

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto piece = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool is_model(Stage s) { return s == Stage::Cnn || s == Stage::LogReg || s == Stage::Knn || s == Stage::Mlp || s == Stage::Svm; }
bool is_feature(Stage s) { return s == Stage::Pixels || s == Stage::GaborMaps || s == Stage::GaborFeatures || s == Stage::Hog; }

std::string iso_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string_view to_string(ExperimentId id) { return kExperimentNames[static_cast<std::size_t>(id)]; }

ExperimentId parse_experiment_id(std::string_view text) {
  for (std::size_t i = 0; i < kExperimentNames.size(); ++i)
    if (kExperimentNames[i] == text) return static_cast<ExperimentId>(i);
  throw Error(ErrorCode::UnknownExperiment, std::string(text));
}

std::string_view to_string(Stage stage) { return kStageNames[static_cast<std::size_t>(stage)]; }

Stage parse_stage(std::string_view text) {
  for (std::size_t i = 0; i < kStageNames.size(); ++i)
    if (kStageNames[i] == text) return static_cast<Stage>(i);
  throw Error(ErrorCode::ConfigInvalid, "unknown stage '" + std::string(text) + "'");
}

bool ExperimentConfig::has_stage(Stage s) const { return std::find(pipeline.begin(), pipeline.end(), s) != pipeline.end(); }

ExperimentConfig builtin_config(ExperimentId id) {
  ExperimentConfig cfg;
  cfg.experiment_id = id;
  switch (id) {
    case ExperimentId::Exp1:
      cfg.input_size = 32;
      cfg.pipeline = {Stage::Resize, Stage::Cnn};
      break;
    case ExperimentId::Exp2Cnn:
      cfg.input_size = 16;
      cfg.pipeline = {Stage::Resize, Stage::GaborMaps, Stage::Cnn};
      break;
    case ExperimentId::Exp2LogReg:
      cfg.input_size = 16;
      cfg.pipeline = {Stage::Resize, Stage::GaborFeatures, Stage::Pca, Stage::LogReg};
      break;
    case ExperimentId::Exp3:
      cfg.input_size = 16;
      cfg.pipeline = {Stage::Resize, Stage::Pixels, Stage::Pca, Stage::Smote, Stage::LogReg};
      break;
    case ExperimentId::Exp4:
      cfg.input_size = 32;
      cfg.pipeline = {Stage::Resize, Stage::GaborFeatures, Stage::Knn};
      break;
    case ExperimentId::Exp5Mlp:
      cfg.input_size = 32;
      cfg.pipeline = {Stage::Resize, Stage::Hog, Stage::Mlp};
      break;
    case ExperimentId::Exp5Svm:
      cfg.input_size = 32;
      cfg.pipeline = {Stage::Resize, Stage::Hog, Stage::Svm};
      break;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  auto invalid = [this](const std::string& why) {
    throw Error(ErrorCode::ConfigInvalid, std::string(to_string(experiment_id)) + ": " + why);
  };
  if (pipeline.size() < 2 || pipeline.front() != Stage::Resize) invalid("pipeline must start with resize");
  if (!is_model(pipeline.back())) invalid("pipeline must end with a model stage");
  if (input_size < 1) invalid("input_size must be positive");

  // resize -> [feature] -> [pca] -> [smote] -> model
  std::size_t pos = 1;
  auto rank = [](Stage s) {
    if (is_feature(s)) return 1;
    if (s == Stage::Pca) return 2;
    if (s == Stage::Smote) return 3;
    if (is_model(s)) return 4;
    return 0;
  };
  int last = 0;
  for (; pos < pipeline.size(); ++pos) {
    const int r = rank(pipeline[pos]);
    if (r <= last) invalid("stage '" + std::string(to_string(pipeline[pos])) + "' is out of order or repeated");
    last = r;
  }
  const Stage model = pipeline.back();
  if (model == Stage::Cnn) {
    if (has_stage(Stage::Pca) || has_stage(Stage::Smote)) invalid("cnn takes images; pca/smote do not apply");
    if (has_stage(Stage::Pixels) || has_stage(Stage::GaborFeatures) || has_stage(Stage::Hog)) {
      invalid("cnn accepts raw images or gabor-maps only");
    }
  } else {
    if (has_stage(Stage::GaborMaps)) invalid("gabor-maps feed the cnn only");
    if (!std::any_of(pipeline.begin(), pipeline.end(), is_feature)) invalid("a feature stage is required");
  }
  for (Stage s : builtin_config(experiment_id).pipeline) {
    if (!has_stage(s)) invalid("missing required stage '" + std::string(to_string(s)) + "'");
  }

  if (!(train_fraction > 0.0 && train_fraction < 1.0)) invalid("split.train_fraction must lie in (0,1)");
  if (!(pca_variance_target > 0.0 && pca_variance_target <= 1.0)) invalid("pca.variance_target must lie in (0,1]");
  if (pca_max_components < 1) invalid("pca.max_components must be positive");
  if (smote_k < 1) invalid("smote.k must be positive");
  if (cnn.filters.empty()) invalid("cnn.filters must list at least one layer");
  if (!(cnn.dropout_rate >= 0.0 && cnn.dropout_rate < 1.0)) invalid("cnn.dropout must lie in [0,1)");
  if (!(cnn.train.learning_rate > 0.0) || cnn.train.batch_size < 1) invalid("cnn learning_rate/batch_size");
  if (knn.k < 1) invalid("knn.k must be positive");
  if (mlp.hidden < 1 || mlp.batch_size < 1) invalid("mlp.hidden and mlp.batch_size must be positive");
  if (!(svm.C > 0.0)) invalid("svm.C must be positive");
  if (svm.gamma && !(*svm.gamma > 0.0)) invalid("svm.gamma must be positive or auto");
}

std::string ExperimentConfig::resolved_text() const {
  std::ostringstream out;
  auto kv = [&out](std::string_view key, const std::string& value) { out << key << " = " << value << "\n"; };
  auto join_stages = [this] {
    std::string s;
    for (std::size_t i = 0; i < pipeline.size(); ++i) s += (i ? "," : "") + std::string(to_string(pipeline[i]));
    return s;
  };
  std::string filters;
  for (std::size_t i = 0; i < cnn.filters.size(); ++i) filters += (i ? "," : "") + std::to_string(cnn.filters[i]);

  kv("experiment", std::string(to_string(experiment_id)));
  kv("data", data_root.string());
  kv("input_size", std::to_string(input_size));
  kv("stages", join_stages());
  kv("seed", std::to_string(seed));
  kv("split.train_fraction", format_double(train_fraction));
  kv("split.stratified", stratified ? "true" : "false");
  kv("pca.variance_target", format_double(pca_variance_target));
  kv("pca.max_components", std::to_string(pca_max_components));
  kv("smote.k", std::to_string(smote_k));
  kv("cnn.filters", filters);
  kv("cnn.dense_hidden", std::to_string(cnn.dense_hidden));
  kv("cnn.dropout", format_double(cnn.dropout_rate));
  kv("cnn.learning_rate", format_double(cnn.train.learning_rate));
  kv("cnn.batch_size", std::to_string(cnn.train.batch_size));
  kv("cnn.epochs", std::to_string(cnn.train.epochs));
  kv("cnn.beta1", format_double(cnn.train.beta1));
  kv("cnn.beta2", format_double(cnn.train.beta2));
  kv("cnn.epsilon", format_double(cnn.train.epsilon));
  kv("logreg.l2", format_double(logreg.l2));
  kv("logreg.learning_rate", format_double(logreg.learning_rate));
  kv("logreg.max_epochs", std::to_string(logreg.max_epochs));
  kv("logreg.tol", format_double(logreg.tol));
  kv("knn.k", std::to_string(knn.k));
  kv("mlp.hidden", std::to_string(mlp.hidden));
  kv("mlp.max_iter", std::to_string(mlp.max_iter));
  kv("mlp.learning_rate", format_double(mlp.learning_rate));
  kv("mlp.batch_size", std::to_string(mlp.batch_size));
  kv("mlp.tol", format_double(mlp.tol));
  kv("mlp.n_iter_no_change", std::to_string(mlp.n_iter_no_change));
  kv("svm.C", format_double(svm.C));
  kv("svm.gamma", svm.gamma ? format_double(*svm.gamma) : "auto");
  kv("svm.tol", format_double(svm.tol));
  kv("svm.max_iterations", std::to_string(svm.max_iterations));
  kv("record_wall_time", record_wall_time ? "true" : "false");
  return out.str();
}

std::string ExperimentConfig::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : resolved_text()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto res = std::from_chars(value.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end) {
    throw Error(ErrorCode::ConfigInvalid, "key '" + key + "': cannot parse '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw Error(ErrorCode::ConfigInvalid, "key '" + key + "': expected true or false, got '" + value + "'");
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::map<std::string, int> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigInvalid, "line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (seen[key]++) throw Error(ErrorCode::ConfigInvalid, "duplicate key '" + key + "'");
    entries.emplace_back(std::move(key), std::move(value));
  }
  auto exp = std::find_if(entries.begin(), entries.end(), [](const auto& e) { return e.first == "experiment"; });
  if (exp == entries.end()) throw Error(ErrorCode::ConfigInvalid, "missing key 'experiment'");
  ExperimentConfig cfg = builtin_config(parse_experiment_id(exp->second));

  for (const auto& [key, value] : entries) {
    if (key == "experiment") continue;
    else if (key == "data") cfg.data_root = value;
    else if (key == "input_size") cfg.input_size = parse_number<int>(key, value);
    else if (key == "stages") {
      cfg.pipeline.clear();
      for (const auto& s : split_list(value)) cfg.pipeline.push_back(parse_stage(s));
    }
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "split.train_fraction") cfg.train_fraction = parse_number<double>(key, value);
    else if (key == "split.stratified") cfg.stratified = parse_bool(key, value);
    else if (key == "pca.variance_target") cfg.pca_variance_target = parse_number<double>(key, value);
    else if (key == "pca.max_components") cfg.pca_max_components = parse_number<std::size_t>(key, value);
    else if (key == "smote.k") cfg.smote_k = parse_number<std::size_t>(key, value);
    else if (key == "cnn.filters") {
      cfg.cnn.filters.clear();
      for (const auto& s : split_list(value)) cfg.cnn.filters.push_back(parse_number<std::size_t>(key, s));
    }
    else if (key == "cnn.dense_hidden") cfg.cnn.dense_hidden = parse_number<std::size_t>(key, value);
    else if (key == "cnn.dropout") cfg.cnn.dropout_rate = parse_number<double>(key, value);
    else if (key == "cnn.learning_rate") cfg.cnn.train.learning_rate = parse_number<double>(key, value);
    else if (key == "cnn.batch_size") cfg.cnn.train.batch_size = parse_number<std::size_t>(key, value);
    else if (key == "cnn.epochs") cfg.cnn.train.epochs = parse_number<std::size_t>(key, value);
    else if (key == "cnn.beta1") cfg.cnn.train.beta1 = parse_number<double>(key, value);
    else if (key == "cnn.beta2") cfg.cnn.train.beta2 = parse_number<double>(key, value);
    else if (key == "cnn.epsilon") cfg.cnn.train.epsilon = parse_number<double>(key, value);
    else if (key == "logreg.l2") cfg.logreg.l2 = parse_number<double>(key, value);
    else if (key == "logreg.learning_rate") cfg.logreg.learning_rate = parse_number<double>(key, value);
    else if (key == "logreg.max_epochs") cfg.logreg.max_epochs = parse_number<std::size_t>(key, value);
    else if (key == "logreg.tol") cfg.logreg.tol = parse_number<double>(key, value);
    else if (key == "knn.k") cfg.knn.k = parse_number<std::size_t>(key, value);
    else if (key == "mlp.hidden") cfg.mlp.hidden = parse_number<std::size_t>(key, value);
    else if (key == "mlp.max_iter") cfg.mlp.max_iter = parse_number<std::size_t>(key, value);
    else if (key == "mlp.learning_rate") cfg.mlp.learning_rate = parse_number<double>(key, value);
    else if (key == "mlp.batch_size") cfg.mlp.batch_size = parse_number<std::size_t>(key, value);
    else if (key == "mlp.tol") cfg.mlp.tol = parse_number<double>(key, value);
    else if (key == "mlp.n_iter_no_change") cfg.mlp.n_iter_no_change = parse_number<std::size_t>(key, value);
    else if (key == "svm.C") cfg.svm.C = parse_number<double>(key, value);
    else if (key == "svm.gamma") {
      if (value == "auto") cfg.svm.gamma.reset();
      else cfg.svm.gamma = parse_number<double>(key, value);
    }
    else if (key == "svm.tol") cfg.svm.tol = parse_number<double>(key, value);
    else if (key == "svm.max_iterations") cfg.svm.max_iterations = parse_number<std::size_t>(key, value);
    else if (key == "record_wall_time") cfg.record_wall_time = parse_bool(key, value);
    else throw Error(ErrorCode::ConfigInvalid, "unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

std::string feature_descriptor(const ExperimentConfig& cfg) {
  if (cfg.has_stage(Stage::GaborFeatures)) return kGaborDescriptor;
  if (cfg.has_stage(Stage::GaborMaps)) return "gabor-maps-v1";
  if (cfg.has_stage(Stage::Hog)) return kHogDescriptor;
  return kPixelDescriptor;
}

std::vector<GrayImage> load_images(const Dataset& ds, int size) {
  std::vector<GrayImage> images;
  images.reserve(ds.size());
  for (const auto& r : ds.records) images.push_back(load_normalized(r.image_path, size));
  return images;
}

Labels labels_of(const Dataset& ds) {
  Labels y;
  y.reserve(ds.size());
  for (const auto& r : ds.records) y.push_back(to_index(r.alteration));
  return y;
}

Tensor image_tensor(const ExperimentConfig& cfg, const GrayImage& img, const GaborBank& bank) {
  const auto h = static_cast<std::size_t>(img.height), w = static_cast<std::size_t>(img.width);
  if (!cfg.has_stage(Stage::GaborMaps)) {
    Tensor t({h, w, 1});
    t.data = img.pixels;
    return t;
  }
  const auto maps = apply_gabor_bank(img, bank);
  Tensor t({h, w, maps.size()});
  for (std::size_t i = 0; i < h * w; ++i)
    for (std::size_t c = 0; c < maps.size(); ++c) t[i * maps.size() + c] = maps[c].pixels[i];
  return t;
}

Vector feature_vector(const ExperimentConfig& cfg, const GrayImage& img, const GaborBank& bank) {
  if (cfg.has_stage(Stage::GaborFeatures)) return gabor_features(img, bank).values;
  if (cfg.has_stage(Stage::Hog)) return hog_features(img).values;
  return pixel_features(img).values;
}

}  // namespace

RunOutcome execute(const ExperimentConfig& cfg, const Dataset& train, const Dataset& test) {
  cfg.validate();
  if (train.size() == 0 || test.size() == 0) throw Error(ErrorCode::EmptyDataset, "empty train or test split");

  RunOutcome outcome;
  outcome.descriptor_ids = {feature_descriptor(cfg)};
  const GaborBank bank = GaborBank::for_input_size(cfg.input_size);
  const std::vector<GrayImage> train_images = load_images(train, cfg.input_size);
  const std::vector<GrayImage> test_images = load_images(test, cfg.input_size);
  Labels y_train = labels_of(train);
  const Labels y_test = labels_of(test);
  for (int label : y_train) ++outcome.train_counts_before_resample[static_cast<std::size_t>(label)];

  Json model;
  model["format"] = "fpbench-pipeline";
  model["version"] = kModelFormatVersion;
  model["experiment_id"] = std::string(to_string(cfg.experiment_id));
  model["config_digest"] = cfg.digest();
  model["descriptor_ids"] = outcome.descriptor_ids;

  Labels predicted;
  if (cfg.pipeline.back() == Stage::Cnn) {
    std::vector<Tensor> xs_train, xs_test;
    for (const auto& img : train_images) xs_train.push_back(image_tensor(cfg, img, bank));
    for (const auto& img : test_images) xs_test.push_back(image_tensor(cfg, img, bank));
    CnnArchitecture arch = CnnArchitecture::standard(static_cast<std::size_t>(cfg.input_size), xs_train.front().dim(2));
    arch.conv_layers.clear();
    for (std::size_t f : cfg.cnn.filters) arch.conv_layers.push_back({f, 3});
    arch.dense_hidden = cfg.cnn.dense_hidden;
    arch.dropout_rate = cfg.cnn.dropout_rate;
    TrainConfig tc = cfg.cnn.train;
    tc.seed = cfg.seed;
    const CnnModel cnn = train_cnn(arch, xs_train, y_train, tc);
    predicted = predict_cnn(cnn, xs_test).labels;
    model["model"] = to_json(cnn);
  } else {
    Samples X_train, X_test;
    for (const auto& img : train_images) X_train.push_back(feature_vector(cfg, img, bank));
    for (const auto& img : test_images) X_test.push_back(feature_vector(cfg, img, bank));
    if (cfg.has_stage(Stage::Pca)) {
      const PcaModel pca = pca_fit(X_train, cfg.pca_variance_target, cfg.pca_max_components);
      if (pca.retained() == 0) throw Error(ErrorCode::DimensionMismatch, "PCA retained no components (zero variance)");
      X_train = pca_transform(pca, X_train);
      X_test = pca_transform(pca, X_test);
      model["pca"] = to_json(pca);
    }
    if (cfg.has_stage(Stage::Smote)) {
      SmoteResult res = smote_resample(X_train, y_train, cfg.smote_k, cfg.seed);
      X_train = std::move(res.X);
      y_train = std::move(res.y);
    }
    TrainedClassifier clf;
    switch (cfg.pipeline.back()) {
      case Stage::LogReg: {
        LogRegConfig c = cfg.logreg;
        c.seed = cfg.seed;
        clf = logreg_fit(X_train, y_train, c);
        break;
      }
      case Stage::Knn:
        clf = knn_fit(X_train, y_train, cfg.knn);
        break;
      case Stage::Mlp: {
        MlpConfig c = cfg.mlp;
        c.seed = cfg.seed;
        clf = mlp_fit(X_train, y_train, c);
        break;
      }
      case Stage::Svm:
        clf = svm_fit(X_train, y_train, cfg.svm);
        break;
      default:
        throw Error(ErrorCode::ConfigInvalid, "unsupported model stage");
    }
    predicted = predict(clf, X_test).labels;
    model["model"] = to_json(clf);
  }
  for (int label : y_train) ++outcome.train_counts[static_cast<std::size_t>(label)];

  ReportMeta meta;
  meta.experiment_id = std::string(to_string(cfg.experiment_id));
  meta.seed = cfg.seed;
  meta.config_digest = cfg.digest();
  meta.descriptor_ids = outcome.descriptor_ids;
  outcome.report = report_from_confusion(confusion(y_test, predicted), meta);
  outcome.model = std::move(model);
  return outcome;
}

fs::path model_path_for(const fs::path& report_path) {
  fs::path p = report_path;
  p.replace_extension(".model.json");
  return p;
}

RunRecord run(const ExperimentConfig& cfg, const fs::path& report_path, std::ostream* log) {
  cfg.validate();
  RunRecord record;
  record.started_at = iso_now();
  const auto t0 = std::chrono::steady_clock::now();

  const Dataset ds = load_dataset(cfg.data_root, log);
  if (log) *log << ds.summary() << "\n";
  const auto present = std::count_if(ds.class_counts.begin(), ds.class_counts.end(), [](std::size_t c) { return c > 0; });
  if (present < 2) throw Error(ErrorCode::EmptyDataset, "need at least two classes, found " + std::to_string(present));
  const auto [train, test] = split(ds, cfg.split_spec());

  RunOutcome outcome = execute(cfg, train, test);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (cfg.record_wall_time) outcome.report.meta.wall_time_seconds = seconds;
  if (log) {
    *log << "train_counts";
    for (std::size_t c = 0; c < kNumClasses; ++c) *log << " " << class_name(class_from_index(static_cast<int>(c))) << "=" << outcome.train_counts[c];
    *log << "\nwall_time_seconds=" << seconds << "\n";
  }

  record.config_digest = cfg.digest();
  record.report = outcome.report;
  record.train_counts = outcome.train_counts;
  record.train_counts_before_resample = outcome.train_counts_before_resample;
  record.report_path = report_path;
  record.model_path = model_path_for(report_path);
  write_file_atomic(record.model_path, dump_json(outcome.model));
  write_file_atomic(report_path, dump_json(report_to_json(outcome.report)));
  record.finished_at = iso_now();
  return record;
}

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "row,precision,recall,f1,support\n";
  auto num = [](double v) { return format_double(v); };
  for (AlterationClass c : kAllClasses) {
    const auto& m = report.per_class[to_index(c)];
    out << class_name(c) << "," << num(m.precision) << "," << num(m.recall) << "," << num(m.f1) << "," << m.support << "\n";
  }
  const std::uint64_t total = report.confusion.total();
  out << "macro_avg," << num(report.macro_avg.precision) << "," << num(report.macro_avg.recall) << ","
      << num(report.macro_avg.f1) << "," << total << "\n";
  out << "weighted_avg," << num(report.weighted_avg.precision) << "," << num(report.weighted_avg.recall) << ","
      << num(report.weighted_avg.f1) << "," << total << "\n";
  out << "accuracy,,,," << num(report.accuracy) << "\n";
  return out.str();
}

ComparisonSummary compare(const std::vector<EvalReport>& reports) {
  if (reports.size() < 2) throw Error(ErrorCode::TooFewReports, "need at least two reports, got " + std::to_string(reports.size()));
  std::vector<std::size_t> order(reports.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto rank_of = [&](std::size_t i) {
    for (std::size_t k = 0; k < kExperimentNames.size(); ++k)
      if (kExperimentNames[k] == reports[i].meta.experiment_id) return k;
    return kExperimentNames.size();
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = rank_of(a), rb = rank_of(b);
    if (ra != rb) return ra < rb;
    if (ra == kExperimentNames.size()) return reports[a].meta.experiment_id < reports[b].meta.experiment_id;
    return false;
  });

  ComparisonSummary summary;
  for (std::size_t i : order) {
    const auto& r = reports[i];
    summary.entries.push_back({r.meta.experiment_id, r.accuracy, r.macro_avg.precision, r.macro_avg.recall, r.macro_avg.f1});
  }
  std::vector<std::size_t> by_acc(summary.entries.size());
  for (std::size_t i = 0; i < by_acc.size(); ++i) by_acc[i] = i;
  std::stable_sort(by_acc.begin(), by_acc.end(),
                   [&](std::size_t a, std::size_t b) { return summary.entries[a].accuracy > summary.entries[b].accuracy; });
  for (std::size_t i : by_acc) summary.ranking.push_back(summary.entries[i].label);
  return summary;
}

std::string ComparisonSummary::render() const {
  std::vector<SummaryRow> rows;
  for (const auto& e : entries) rows.push_back({e.label, e.accuracy, e.precision, e.recall, e.f1});
  std::string out = render_summary_table(rows, "Experiment");
  out += "ranking:";
  for (const auto& r : ranking) out += " " + r;
  return out + "\n";
}

}  // namespace fpbench
