#include <cmath>

#include "fpbench/features.hpp"
#include "fpbench/neuralnet.hpp"
#include "fpbench/persistence.hpp"
#include "fpbench/rng.hpp"
#include "test_util.hpp"

using namespace fpbench;
using fpbench::testing::error_code_of;
using fpbench::testing::TempDir;

namespace {

EvalReport sample_report() {
  Labels t = {0, 1, 2, 3, 0, 1, 2, 3, 3}, p = {0, 1, 2, 2, 1, 1, 2, 3, 0};
  ReportMeta meta;
  meta.experiment_id = "exp4";
  meta.seed = 7;
  meta.config_digest = "0123456789abcdef";
  meta.descriptor_ids = {"gabor-v1"};
  return report_from_confusion(confusion(t, p), meta);
}

}  // namespace

TEST_CASE("cnn model round trip reproduces predictions") {
  CnnArchitecture arch;
  arch.height = 8;
  arch.width = 8;
  arch.channels = 2;
  arch.conv_layers = {{3, 3}, {2, 3}};
  arch.dense_hidden = 6;
  Rng rng(1);
  std::vector<Tensor> images;
  Labels labels;
  for (int i = 0; i < 12; ++i) {
    Tensor t({8, 8, 2});
    for (double& v : t.data) v = rng.uniform();
    images.push_back(t);
    labels.push_back(i % 4);
  }
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 4;
  const CnnModel m = train_cnn(arch, images, labels, cfg);
  const std::string text = dump_json(to_json(m));
  const CnnModel back = cnn_from_json(Json::parse(text));
  CHECK(back.arch.conv_layers.size() == 2);
  CHECK(back.optimizer.step == m.optimizer.step);
  CHECK(back.epoch_losses == m.epoch_losses);
  for (std::size_t p = 0; p < m.params.size(); ++p) CHECK(back.params[p].data == m.params[p].data);
  CHECK(predict_cnn(back, images).probabilities == predict_cnn(m, images).probabilities);
  CHECK(dump_json(to_json(back)) == text);

  Json broken = Json::parse(text);
  broken["version"] = 99;
  CHECK(error_code_of([&] { cnn_from_json(broken); }) == ErrorCode::SchemaError);
  CHECK(error_code_of([] { cnn_from_json(Json::parse("{\"format\":\"other\"}")); }) == ErrorCode::SchemaError);
}

TEST_CASE("pca round trip") {
  Rng rng(2);
  Samples X(15, Vector(5));
  for (auto& x : X)
    for (double& v : x) v = rng.normal();
  const PcaModel m = pca_fit(X, 0.9, 4);
  const PcaModel back = pca_from_json(Json::parse(dump_json(to_json(m))));
  CHECK(pca_transform(back, X) == pca_transform(m, X));
}

TEST_CASE("report json has exactly the documented fields") {
  const Json j = report_to_json(sample_report());
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"experiment_id", "seed", "config_digest", "accuracy", "per_class", "macro_avg",
                                         "weighted_avg", "confusion", "wall_time_seconds", "descriptor_ids"});
  REQUIRE(j["per_class"].size() == 4);
  CHECK(j["per_class"][0]["class"] == "Real");
  std::vector<std::string> class_keys;
  for (auto it = j["per_class"][0].begin(); it != j["per_class"][0].end(); ++it) class_keys.push_back(it.key());
  CHECK(class_keys == std::vector<std::string>{"class", "precision", "recall", "f1", "support"});
  CHECK(j["confusion"].size() == 4);
  CHECK(j["confusion"][3].size() == 4);
}

TEST_CASE("report round trip and schema errors") {
  const EvalReport r = sample_report();
  const EvalReport back = report_from_json(Json::parse(dump_json(report_to_json(r))));
  CHECK(back.accuracy == r.accuracy);
  CHECK(back.confusion.counts == r.confusion.counts);
  CHECK(back.meta.experiment_id == "exp4");
  CHECK(back.meta.descriptor_ids == r.meta.descriptor_ids);
  for (int c = 0; c < 4; ++c) {
    CHECK(back.per_class[c].f1 == r.per_class[c].f1);
    CHECK(back.per_class[c].one_vs_rest_accuracy == r.per_class[c].one_vs_rest_accuracy);
  }

  auto message_for = [](const Json& j) {
    try {
      report_from_json(j);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SchemaError);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  Json missing = report_to_json(r);
  missing["macro_avg"].erase("f1");
  CHECK(message_for(missing).find("macro_avg.f1") != std::string::npos);
  Json no_acc = report_to_json(r);
  no_acc.erase("accuracy");
  CHECK(message_for(no_acc).find("'accuracy'") != std::string::npos);
  Json bad_type = report_to_json(r);
  bad_type["weighted_avg"]["recall"] = "high";
  CHECK(message_for(bad_type).find("weighted_avg.recall") != std::string::npos);
  Json bad_class = report_to_json(r);
  bad_class["per_class"][2].erase("support");
  CHECK(message_for(bad_class).find("support") != std::string::npos);
}

TEST_CASE("atomic file writes") {
  TempDir dir("atomic");
  const auto target = dir / "sub/report.json";
  write_file_atomic(target, "first");
  write_file_atomic(target, "second");
  CHECK(fpbench::testing::read_file(target) == "second");
  CHECK_FALSE(std::filesystem::exists(target.string() + ".tmp"));
  CHECK(error_code_of([&] { read_json_file(dir / "none.json"); }) == ErrorCode::IoFailure);
  fpbench::testing::write_text(dir / "bad.json", "{not json");
  CHECK(error_code_of([&] { read_json_file(dir / "bad.json"); }) == ErrorCode::SchemaError);
}
