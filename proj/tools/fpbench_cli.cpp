// fpbench: synthetic data, experiment runs, metrics, comparison charts.
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fpbench/dataset.hpp"
#include "fpbench/error.hpp"
#include "fpbench/features.hpp"
#include "fpbench/harness.hpp"
#include "fpbench/imaging.hpp"
#include "fpbench/metrics.hpp"
#include "fpbench/persistence.hpp"

namespace fs = std::filesystem;
using namespace fpbench;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

Labels read_labels(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  Labels out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }), line.end());
    if (line.empty()) continue;
    int v = 0;
    auto res = std::from_chars(line.data(), line.data() + line.size(), v);
    if (res.ec != std::errc() || res.ptr != line.data() + line.size()) {
      throw Error(ErrorCode::InvalidArgument, path.string() + ":" + std::to_string(lineno) + ": not an integer label");
    }
    out.push_back(v);
  }
  return out;
}

int cmd_synth(const fs::path& out, int subjects, int per_class, int size, std::uint64_t seed) {
  if (subjects < 1 || per_class < 1 || size < 8) {
    throw Error(ErrorCode::InvalidArgument, "--subjects and --per-class must be positive, --size at least 8");
  }
  SynthConfig cfg;
  cfg.subjects = subjects;
  cfg.samples_per_class = per_class;
  cfg.image_size = size;
  cfg.seed = seed;
  const Dataset ds = generate_synthetic(cfg, out);
  std::cout << ds.summary() << "\n";
  return 0;
}

struct RunOptions {
  std::string experiment;
  std::string config;
  std::string data;
  std::optional<std::uint64_t> seed;
  std::string out = "report.json";
  std::string row_accuracy = "overall";
  std::string csv;
  bool record_time = false;
};

int cmd_run(const RunOptions& opt) {
  ExperimentConfig cfg = opt.config.empty() ? builtin_config(parse_experiment_id(opt.experiment)) : load_config_file(opt.config);
  if (!opt.data.empty()) cfg.data_root = opt.data;
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.record_time) cfg.record_wall_time = true;
  if (cfg.data_root.empty()) throw Error(ErrorCode::ConfigInvalid, "no data root: pass --data or set 'data' in the config");
  cfg.validate();

  std::cout << "# resolved config\n" << cfg.resolved_text() << "# end resolved config\n" << std::flush;
  const RunRecord record = run(cfg, opt.out, &std::cerr);
  const RowAccuracy mode = opt.row_accuracy == "one-vs-rest" ? RowAccuracy::OneVsRest : RowAccuracy::Overall;
  std::cout << "\n" << render_table(record.report, mode);
  std::cout << "\nconfig_digest " << record.config_digest << "\n";
  std::cout << "report " << record.report_path.string() << "\n";
  std::cout << "model " << record.model_path.string() << "\n";
  if (!opt.csv.empty()) write_file_atomic(opt.csv, report_to_csv(record.report));
  return 0;
}

int cmd_metrics(const fs::path& truth, const fs::path& pred) {
  const Labels y_true = read_labels(truth);
  const Labels y_pred = read_labels(pred);
  const EvalReport report = report_from_confusion(confusion(y_true, y_pred));
  std::cout << render_table(report);
  return 0;
}

int cmd_compare(const std::vector<std::string>& paths, const std::string& out) {
  std::vector<EvalReport> reports;
  for (const auto& p : paths) {
    try {
      reports.push_back(report_from_json(read_json_file(p)));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::SchemaError) throw Error(ErrorCode::SchemaError, p + ": " + e.what());
      throw;
    }
  }
  const ComparisonSummary summary = compare(reports);
  std::cout << summary.render();
  if (!out.empty()) write_file_atomic(out, render_comparison_svg(summary));
  return 0;
}

int cmd_gabor_debug(const fs::path& image, const fs::path& out, int size) {
  GrayImage img = normalize(to_gray(decode_image(image)));
  if (size > 0) img = resize(img, size, size);
  const GaborBank bank = GaborBank::for_input_size(std::min(img.width, img.height));
  const auto maps = apply_gabor_bank(img, bank);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + out.string());
  for (std::size_t k = 0; k < maps.size(); ++k) {
    GrayImage vis = maps[k];
    const auto [lo, hi] = std::minmax_element(vis.pixels.begin(), vis.pixels.end());
    const double a = *lo, span = *hi - *lo;
    for (double& v : vis.pixels) v = span > 0 ? (v - a) / span : 0.0;
    const auto& p = bank.kernels[k];
    char name[64];
    std::snprintf(name, sizeof name, "gabor_%02zu_s%g_t%03d.png", k, p.sigma,
                  static_cast<int>(std::lround(p.theta * 180.0 / 3.14159265358979323846)));
    write_gray_image(out / name, vis, 255.0);
    std::cout << (out / name).string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Altered-fingerprint classification benchmark"};
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "Write a synthetic SOCOFing-layout dataset");
  std::string synth_out;
  int subjects = 10, per_class = 100, size = 32;
  std::uint64_t synth_seed = 42;
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--subjects", subjects, "Number of subjects")->capture_default_str();
  synth->add_option("--per-class", per_class, "Images per class")->capture_default_str();
  synth->add_option("--size", size, "Image side in pixels")->capture_default_str();
  synth->add_option("--seed", synth_seed, "Generator seed")->capture_default_str();

  auto* runc = app.add_subcommand("run", "Run one experiment and write its report");
  RunOptions ro;
  std::uint64_t run_seed = 0;
  auto* exp_opt = runc->add_option("--experiment", ro.experiment, "Builtin experiment id");
  auto* cfg_opt = runc->add_option("--config", ro.config, "Config file");
  exp_opt->excludes(cfg_opt);
  cfg_opt->excludes(exp_opt);
  runc->add_option("--data", ro.data, "Dataset root");
  auto* seed_opt = runc->add_option("--seed", run_seed, "Run seed");
  runc->add_option("--out", ro.out, "Report path")->capture_default_str();
  runc->add_option("--row-accuracy", ro.row_accuracy, "Accuracy column: overall | one-vs-rest")
      ->check(CLI::IsMember({"overall", "one-vs-rest"}))
      ->capture_default_str();
  runc->add_option("--csv", ro.csv, "Also write a CSV export");
  runc->add_flag("--record-time", ro.record_time, "Store wall time in the report");

  auto* metrics = app.add_subcommand("metrics", "Score two label files");
  std::string truth, pred;
  metrics->add_option("--truth", truth, "True labels, one integer per line")->required();
  metrics->add_option("--pred", pred, "Predicted labels, one integer per line")->required();

  auto* comparec = app.add_subcommand("compare", "Compare reports and draw a bar chart");
  std::vector<std::string> report_paths;
  std::string chart_out;
  comparec->add_option("--reports", report_paths, "Report files")->required();
  comparec->add_option("--out", chart_out, "SVG chart path");

  auto* gabor = app.add_subcommand("gabor-debug", "Write one image per Gabor kernel response");
  std::string gabor_image, gabor_out;
  int gabor_size = 0;
  gabor->add_option("--image", gabor_image, "Input image")->required();
  gabor->add_option("--out", gabor_out, "Output directory")->required();
  gabor->add_option("--size", gabor_size, "Resize to this side first (0 keeps the original)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (*synth) return cmd_synth(synth_out, subjects, per_class, size, synth_seed);
    if (*runc) {
      if (ro.experiment.empty() == ro.config.empty()) {
        std::cerr << "run: exactly one of --experiment or --config is required\n" << runc->help();
        return kExitUsage;
      }
      if (seed_opt->count()) ro.seed = run_seed;
      return cmd_run(ro);
    }
    if (*metrics) return cmd_metrics(truth, pred);
    if (*comparec) return cmd_compare(report_paths, chart_out);
    if (*gabor) return cmd_gabor_debug(gabor_image, gabor_out, gabor_size);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
