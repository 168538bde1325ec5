#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "geotop/evaluation.hpp"
#include "geotop/forest.hpp"
#include "geotop/local_geometry.hpp"
#include "geotop/tda_features.hpp"

namespace geotop {

// Exit codes of the command line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitVerification = 3;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Settings shared by every command. The text form is one `key = value`
/// per line; `#` starts a comment.
struct RunConfig {
  std::filesystem::path dataset;
  std::string method = "all";  // tda | lkc | geotop | all
  std::size_t n_thresholds = 200;
  AmplitudeParams amplitude;
  std::size_t n_trees = 100;
  std::size_t min_samples_leaf = 1;
  std::size_t max_features = 0;  // 0 = ceil(sqrt(d))
  std::size_t n_rounds = 500;
  double train_frac = 0.8;
  std::uint64_t seed = 0;
  std::filesystem::path out = "geotop_out";
  std::size_t threads = 1;  // 0 = hardware concurrency
  std::size_t synth_images = 100;
  std::size_t synth_side = 64;

  /// Throws ConfigError on an unknown key or an unparsable value.
  void set(const std::string& key, const std::string& value);
  /// Throws ConfigError when a numeric field is out of range.
  void validate() const;

  std::string to_text() const;
  static RunConfig from_text(const std::string& text);
  static RunConfig from_file(const std::filesystem::path& path);
};

struct ExtractSummary {
  std::size_t images = 0;
  std::vector<std::string> skipped;  // "<id>: <reason>"
  std::vector<std::filesystem::path> written;
};

/// Reads <dataset>/<class>/<image>, preprocesses, and writes
/// features_{tda,lkc,geotop}.csv under out (subset per method). Unreadable
/// images are skipped with a warning; throws DataError when nothing is left.
ExtractSummary cmd_extract(const RunConfig& config, std::ostream& log);

/// Runs the three-method bootstrap on the CSVs in out and writes
/// report.json, scores.csv, confusion.csv, ari.csv, misclassified.json.
/// Throws DataError when the CSVs are missing or disagree on rows.
EvalReport cmd_evaluate(const RunConfig& config, std::ostream& log);

struct ToySummary {
  ComponentTracking tracking;
  std::vector<ComponentSummary> report;
  bool additivity_holds = false;
};

/// 200x200 Gaussian bump plus a 10x10 corner square: writes the image, its
/// barcode, per-component tracks and the global curves.
ToySummary cmd_toy(const RunConfig& config, std::ostream& log);

/// Writes a synthetic two-class dataset to <out>/<class>/<image>.ppm.
std::size_t cmd_synth(const RunConfig& config, std::ostream& log);

struct SuiteResult {
  std::string name;
  std::size_t comparisons = 0;
  std::size_t failures = 0;
};

struct VerifyResult {
  std::vector<SuiteResult> suites;
  std::size_t comparisons() const;
  std::size_t failures() const;
  bool ok() const { return failures() == 0; }
};

/// Seeded oracle suites: brute-force persistence, Euler bridge, Euler
/// characteristic labeling, lattice-sweep curves, local additivity and
/// per-component perimeter.
VerifyResult cmd_verify(const RunConfig& config, std::ostream& log);

/// Extraction for one image (already preprocessed).
struct ImageFeatures {
  FeatureVector tda;
  FeatureVector lkc;
  FeatureVector geotop;
};

ImageFeatures extract_features(const MultiChannelImage& preprocessed, const RunConfig& config);

}  // namespace geotop
