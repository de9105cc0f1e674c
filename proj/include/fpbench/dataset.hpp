#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fpbench {

enum class AlterationClass : int { Real = 0, Easy = 1, Medium = 2, Hard = 3 };

inline constexpr int kNumClasses = 4;
inline constexpr std::array<AlterationClass, kNumClasses> kAllClasses = {
    AlterationClass::Real, AlterationClass::Easy, AlterationClass::Medium, AlterationClass::Hard};

constexpr int to_index(AlterationClass c) { return static_cast<int>(c); }
AlterationClass class_from_index(int index);
std::string_view class_name(AlterationClass c);

/// Directory of a class relative to the dataset root: Real or Altered/Altered-<Level>.
std::filesystem::path class_directory(AlterationClass c);

enum class Gender { Male, Female };
enum class Hand { Left, Right };
enum class Finger { Thumb, Index, Middle, Ring, Little };

struct FingerprintRecord {
  int subject_id = 0;
  Gender gender = Gender::Male;
  Hand hand = Hand::Left;
  Finger finger = Finger::Thumb;
  AlterationClass alteration = AlterationClass::Real;
  std::string suffix;
  std::filesystem::path image_path;
};

struct Dataset {
  std::vector<FingerprintRecord> records;
  std::array<std::size_t, kNumClasses> class_counts{};
  std::size_t skipped = 0;

  /// Sorts by path and recomputes class_counts.
  static Dataset from_records(std::vector<FingerprintRecord> records, std::size_t skipped = 0);

  std::size_t size() const { return records.size(); }
  /// `loaded=<n> skipped=<m>`
  std::string summary() const;
};

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  bool stratified = true;
};

struct SynthConfig {
  int subjects = 10;
  /// Images per class across all subjects (subjects take them round-robin).
  int samples_per_class = 10;
  /// Per-class replacement for samples_per_class, to build imbalanced sets.
  std::array<std::optional<int>, kNumClasses> class_count_override{};
  int image_size = 32;
  std::uint64_t seed = 42;
  /// Ridge frequency in cycles per pixel.
  double ridge_frequency_min = 0.11;
  double ridge_frequency_max = 0.15;
  std::array<double, kNumClasses> alteration_severity = {0.0, 0.5, 0.5, 0.5};

  int count_for(AlterationClass c) const;
};

/// Parses `<id>__<G>_<Hand>_<finger>_finger[_<suffix>].<bmp|png>`; throws MalformedFilename.
FingerprintRecord parse_filename(std::string_view name, AlterationClass source_dir_class);

/// Scans the class directories under root. Malformed names and undecodable files
/// are skipped with a warning on `log`.
Dataset load_dataset(const std::filesystem::path& root, std::ostream* log = nullptr);

/// Renders the synthetic set in memory without touching disk. Entry order matches
/// the records generate_synthetic writes.
struct SynthImage {
  FingerprintRecord record;
  std::vector<std::uint8_t> pixels;
};
std::vector<SynthImage> render_synthetic(const SynthConfig& cfg);

Dataset generate_synthetic(const SynthConfig& cfg, const std::filesystem::path& out);

std::pair<Dataset, Dataset> split(const Dataset& ds, const SplitSpec& spec);

}  // namespace fpbench
