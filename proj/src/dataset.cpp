#include "fpbench/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <ostream>
#include <regex>

#include "fpbench/error.hpp"
#include "fpbench/imaging.hpp"
#include "fpbench/rng.hpp"

namespace fs = std::filesystem;

namespace fpbench {

namespace {

constexpr std::array<std::string_view, kNumClasses> kClassNames = {"Real", "Easy", "Medium", "Hard"};
constexpr std::array<std::string_view, 5> kFingerNames = {"thumb", "index", "middle", "ring", "little"};
constexpr std::array<std::string_view, kNumClasses> kSynthSuffix = {"v", "Obl", "Zcut", "Blot"};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return out;
}

}  // namespace

AlterationClass class_from_index(int index) {
  if (index < 0 || index >= kNumClasses) {
    throw Error(ErrorCode::LabelOutOfRange, "class index " + std::to_string(index));
  }
  return static_cast<AlterationClass>(index);
}

std::string_view class_name(AlterationClass c) { return kClassNames[to_index(c)]; }

fs::path class_directory(AlterationClass c) {
  if (c == AlterationClass::Real) return "Real";
  return fs::path("Altered") / ("Altered-" + std::string(class_name(c)));
}

int SynthConfig::count_for(AlterationClass c) const {
  const auto& o = class_count_override[to_index(c)];
  return o ? *o : samples_per_class;
}

Dataset Dataset::from_records(std::vector<FingerprintRecord> records, std::size_t skipped) {
  Dataset ds;
  ds.records = std::move(records);
  std::sort(ds.records.begin(), ds.records.end(),
            [](const FingerprintRecord& a, const FingerprintRecord& b) { return a.image_path < b.image_path; });
  for (const auto& r : ds.records) ++ds.class_counts[to_index(r.alteration)];
  ds.skipped = skipped;
  return ds;
}

std::string Dataset::summary() const {
  return "loaded=" + std::to_string(records.size()) + " skipped=" + std::to_string(skipped);
}

FingerprintRecord parse_filename(std::string_view name, AlterationClass source_dir_class) {
  static const std::regex grammar(
      R"(^([0-9]+)__([MF])_(Left|Right)_(thumb|index|middle|ring|little)_finger(?:_([A-Za-z0-9]+))?\.([A-Za-z]+)$)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(name.begin(), name.end(), m, grammar)) {
    throw Error(ErrorCode::MalformedFilename, std::string(name));
  }
  const std::string ext = lower(m[6].str());
  if (ext != "bmp" && ext != "png") throw Error(ErrorCode::MalformedFilename, std::string(name));

  FingerprintRecord rec;
  const std::string id = m[1].str();
  if (id.size() > 9 || std::stoi(id) <= 0) throw Error(ErrorCode::MalformedFilename, std::string(name));
  rec.subject_id = std::stoi(id);
  rec.gender = m[2].str() == "M" ? Gender::Male : Gender::Female;
  rec.hand = m[3].str() == "Left" ? Hand::Left : Hand::Right;
  const auto finger = std::find(kFingerNames.begin(), kFingerNames.end(), m[4].str());
  rec.finger = static_cast<Finger>(finger - kFingerNames.begin());
  rec.suffix = m[5].matched ? m[5].str() : std::string();
  rec.alteration = source_dir_class;
  rec.image_path = fs::path(std::string(name));
  return rec;
}

Dataset load_dataset(const fs::path& root, std::ostream* log) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw Error(ErrorCode::MissingRoot, root.string());

  std::vector<FingerprintRecord> records;
  std::size_t skipped = 0;
  bool any_dir = false;
  for (AlterationClass c : kAllClasses) {
    const fs::path dir = root / class_directory(c);
    if (!fs::is_directory(dir, ec)) continue;
    any_dir = true;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      try {
        FingerprintRecord rec = parse_filename(file.filename().string(), c);
        rec.image_path = file;
        decode_image(file);
        records.push_back(std::move(rec));
      } catch (const Error& e) {
        ++skipped;
        if (log) *log << "warning: skipping " << file.string() << " (" << e.what() << ")\n";
      }
    }
  }
  if (!any_dir) throw Error(ErrorCode::MissingRoot, "no class directories under " + root.string());
  if (records.empty()) throw Error(ErrorCode::EmptyDataset, "no decodable images under " + root.string());
  return Dataset::from_records(std::move(records), skipped);
}

namespace {

struct Ellipse {
  double cx, cy, rx, ry, angle;

  bool contains(double x, double y) const {
    const double dx = x - cx, dy = y - cy;
    const double c = std::cos(angle), s = std::sin(angle);
    const double u = (dx * c + dy * s) / rx;
    const double v = (-dx * s + dy * c) / ry;
    return u * u + v * v <= 1.0;
  }
};

Ellipse random_ellipse(Rng& rng, double size, double lo, double hi, double radius) {
  Ellipse e;
  e.cx = rng.uniform(lo, hi) * size;
  e.cy = rng.uniform(lo, hi) * size;
  e.rx = radius * rng.uniform(0.8, 1.25);
  e.ry = radius * rng.uniform(0.6, 1.0);
  e.angle = rng.uniform(0.0, std::numbers::pi);
  return e;
}

/// Loop/whorl ridge texture around a jittered core; the low-frequency phase terms
/// bend the orientation field per finger.
std::vector<double> ridge_texture(const SynthConfig& cfg, int subject, int slot) {
  Rng rng(derive_seed(cfg.seed, {0x7269646765ULL, static_cast<std::uint64_t>(subject),
                                 static_cast<std::uint64_t>(slot)}));
  const int n = cfg.image_size;
  const double size = n;
  const double freq = rng.uniform(cfg.ridge_frequency_min, cfg.ridge_frequency_max);
  const double core_x = size * rng.uniform(0.35, 0.65);
  const double core_y = size * rng.uniform(0.35, 0.65);
  const double ecc = rng.uniform(0.0, 0.5);
  const double ecc_angle = rng.uniform(0.0, std::numbers::pi);
  const double spiral = std::floor(rng.uniform(0.0, 3.0));
  const double phase0 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  struct Wave { double kx, ky, amp, phase; };
  std::array<Wave, 3> waves{};
  for (auto& w : waves) {
    const double dir = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double k = 2.0 * std::numbers::pi * rng.uniform(0.5, 1.5) / size;
    w = {k * std::cos(dir), k * std::sin(dir), rng.uniform(0.3, 1.0), rng.uniform(0.0, 2.0 * std::numbers::pi)};
  }

  std::vector<double> px(static_cast<std::size_t>(n) * n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const double dx = x + 0.5 - core_x, dy = y + 0.5 - core_y;
      const double r = std::hypot(dx, dy);
      const double a = std::atan2(dy, dx);
      double phase = 2.0 * std::numbers::pi * freq * r * (1.0 + ecc * std::cos(2.0 * (a - ecc_angle)));
      phase += spiral * a + phase0;
      for (const auto& w : waves) phase += w.amp * std::sin(w.kx * x + w.ky * y + w.phase);
      px[static_cast<std::size_t>(y) * n + x] = 0.5 + 0.4 * std::cos(phase);
    }
  }
  return px;
}

void apply_alteration(std::vector<double>& px, int n, AlterationClass c, double severity, Rng& rng) {
  const double size = n;
  auto paint = [&](const Ellipse& e, double value) {
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x)
        if (e.contains(x + 0.5, y + 0.5)) px[static_cast<std::size_t>(y) * n + x] = value;
  };
  switch (c) {
    case AlterationClass::Real:
      break;
    case AlterationClass::Easy: {
      const Ellipse e = random_ellipse(rng, size, 0.4, 0.6, size * (0.25 + 0.15 * severity));
      paint(e, rng.uniform(0.45, 0.6));
      break;
    }
    case AlterationClass::Medium: {
      const int lines = 3 + static_cast<int>(std::lround(4.0 * severity));
      for (int i = 0; i < lines; ++i) {
        const double px0 = rng.uniform(0.2, 0.8) * size, py0 = rng.uniform(0.2, 0.8) * size;
        const double angle = rng.uniform(0.0, std::numbers::pi);
        const double half_width = rng.uniform(1.0, 1.5);
        const double nx = -std::sin(angle), ny = std::cos(angle);
        for (int y = 0; y < n; ++y)
          for (int x = 0; x < n; ++x)
            if (std::abs((x + 0.5 - px0) * nx + (y + 0.5 - py0) * ny) <= half_width)
              px[static_cast<std::size_t>(y) * n + x] = 0.05;
      }
      break;
    }
    case AlterationClass::Hard: {
      // flattened, smeared ridges with a few blots
      const double contrast = 0.45 - 0.3 * severity;
      for (double& v : px) v = 0.5 + contrast * (v - 0.5);
      const int blots = 1 + static_cast<int>(std::lround(2.0 * severity));
      for (int i = 0; i < blots; ++i) {
        const Ellipse e = random_ellipse(rng, size, 0.1, 0.9, size * (0.12 + 0.12 * severity));
        paint(e, rng.uniform(0.3, 0.7));
      }
      for (double& v : px) v += rng.normal(0.0, 0.1 + 0.1 * severity);
      break;
    }
  }
}

}  // namespace

std::vector<SynthImage> render_synthetic(const SynthConfig& cfg) {
  if (cfg.subjects < 1 || cfg.image_size < 1) {
    throw Error(ErrorCode::InvalidArgument, "subjects and image_size must be positive");
  }
  const int n = cfg.image_size;
  std::vector<SynthImage> out;
  for (AlterationClass c : kAllClasses) {
    const int count = cfg.count_for(c);
    if (count < 0) throw Error(ErrorCode::InvalidArgument, "negative class count");
    for (int i = 0; i < count; ++i) {
      const int subject = i % cfg.subjects + 1;
      const int slot = i / cfg.subjects;
      const int rep = slot / 10;
      Rng image_rng(derive_seed(cfg.seed, {static_cast<std::uint64_t>(subject),
                                           static_cast<std::uint64_t>(to_index(c)), static_cast<std::uint64_t>(i)}));

      std::vector<double> px = ridge_texture(cfg, subject, slot);
      apply_alteration(px, n, c, cfg.alteration_severity[to_index(c)], image_rng);
      for (double& v : px) v += image_rng.normal(0.0, 0.03);

      SynthImage img;
      img.pixels.resize(px.size());
      for (std::size_t k = 0; k < px.size(); ++k) {
        img.pixels[k] = static_cast<std::uint8_t>(std::lround(std::clamp(px[k], 0.0, 1.0) * 255.0));
      }

      FingerprintRecord& rec = img.record;
      rec.subject_id = subject;
      rec.gender = (mix64(cfg.seed ^ static_cast<std::uint64_t>(subject)) & 1U) ? Gender::Female : Gender::Male;
      rec.hand = (slot / 5) % 2 == 0 ? Hand::Left : Hand::Right;
      rec.finger = static_cast<Finger>(slot % 5);
      rec.alteration = c;
      if (c != AlterationClass::Real || rep > 0) {
        rec.suffix = std::string(kSynthSuffix[to_index(c)]);
        if (rep > 0) rec.suffix += std::to_string(rep);
      }
      std::string name = std::to_string(subject) + "__" + (rec.gender == Gender::Male ? "M" : "F") + "_" +
                         (rec.hand == Hand::Left ? "Left" : "Right") + "_" +
                         std::string(kFingerNames[static_cast<int>(rec.finger)]) + "_finger";
      if (!rec.suffix.empty()) name += "_" + rec.suffix;
      name += ".BMP";
      rec.image_path = class_directory(c) / name;
      out.push_back(std::move(img));
    }
  }
  return out;
}

Dataset generate_synthetic(const SynthConfig& cfg, const fs::path& out) {
  std::vector<SynthImage> images = render_synthetic(cfg);
  std::error_code ec;
  for (AlterationClass c : kAllClasses) {
    fs::create_directories(out / class_directory(c), ec);
    if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + (out / class_directory(c)).string());
  }
  std::vector<FingerprintRecord> records;
  records.reserve(images.size());
  for (auto& img : images) {
    GrayImage gray(cfg.image_size, cfg.image_size);
    for (std::size_t k = 0; k < img.pixels.size(); ++k) gray.pixels[k] = img.pixels[k];
    img.record.image_path = out / img.record.image_path;
    write_gray_image(img.record.image_path, gray);
    records.push_back(std::move(img.record));
  }
  return Dataset::from_records(std::move(records));
}

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "train_fraction must lie in (0,1)");
  }
  auto cut = [&](std::size_t n) {
    // floor on the test side; the remainder goes to train
    const auto n_test = static_cast<std::size_t>(std::floor(static_cast<double>(n) * (1.0 - spec.train_fraction) + 1e-9));
    return n - n_test;
  };

  std::vector<FingerprintRecord> train, test;
  Rng rng(derive_seed(spec.seed, {0x73706c6974ULL}));
  if (spec.stratified) {
    for (AlterationClass c : kAllClasses) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < ds.records.size(); ++i)
        if (ds.records[i].alteration == c) idx.push_back(i);
      if (idx.empty()) continue;
      if (idx.size() < 2) {
        throw Error(ErrorCode::ClassTooSmall,
                    "class " + std::string(class_name(c)) + " has " + std::to_string(idx.size()) + " record");
      }
      rng.shuffle(idx);
      const std::size_t n_train = cut(idx.size());
      for (std::size_t k = 0; k < idx.size(); ++k) (k < n_train ? train : test).push_back(ds.records[idx[k]]);
    }
  } else {
    std::vector<std::size_t> idx(ds.records.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    rng.shuffle(idx);
    const std::size_t n_train = cut(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) (k < n_train ? train : test).push_back(ds.records[idx[k]]);
  }
  return {Dataset::from_records(std::move(train)), Dataset::from_records(std::move(test))};
}

}  // namespace fpbench
