#include "geotop/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "geotop/csv.hpp"
#include "geotop/lkc_features.hpp"
#include "geotop/parallel.hpp"
#include "json.hpp"

namespace geotop {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  if constexpr (std::is_floating_point_v<T>) {
    char* end = nullptr;
    out = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size()) {
      throw ConfigError("config: '" + key + "' expects a number, got '" + value + "'");
    }
  } else {
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) {
      throw ConfigError("config: '" + key + "' expects a non-negative integer, got '" + value + "'");
    }
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "dataset") dataset = value;
  else if (key == "method") method = value;
  else if (key == "thresholds") n_thresholds = parse_number<std::size_t>(key, value);
  else if (key == "amplitude_p") amplitude.p = parse_number<double>(key, value);
  else if (key == "amplitude_bins") amplitude.n_bins = parse_number<int>(key, value);
  else if (key == "amplitude_sigma") amplitude.sigma = parse_number<double>(key, value);
  else if (key == "amplitude_layers") amplitude.n_layers = parse_number<int>(key, value);
  else if (key == "amplitude_power") amplitude.power = parse_number<double>(key, value);
  else if (key == "trees") n_trees = parse_number<std::size_t>(key, value);
  else if (key == "min_samples_leaf") min_samples_leaf = parse_number<std::size_t>(key, value);
  else if (key == "max_features") max_features = parse_number<std::size_t>(key, value);
  else if (key == "rounds") n_rounds = parse_number<std::size_t>(key, value);
  else if (key == "train_frac") train_frac = parse_number<double>(key, value);
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "out") out = value;
  else if (key == "threads") threads = parse_number<std::size_t>(key, value);
  else if (key == "synth_images") synth_images = parse_number<std::size_t>(key, value);
  else if (key == "synth_side") synth_side = parse_number<std::size_t>(key, value);
  else throw ConfigError("config: unknown key '" + key + "'");
}

void RunConfig::validate() const {
  if (method != "tda" && method != "lkc" && method != "geotop" && method != "all") {
    throw ConfigError("method must be one of tda, lkc, geotop, all");
  }
  if (n_thresholds < 2) throw ConfigError("thresholds must be >= 2");
  try {
    amplitude.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (n_trees < 1) throw ConfigError("trees must be >= 1");
  if (min_samples_leaf < 1) throw ConfigError("min_samples_leaf must be >= 1");
  if (n_rounds < 1) throw ConfigError("rounds must be >= 1");
  if (!(train_frac > 0.0 && train_frac < 1.0)) throw ConfigError("train_frac must be in (0, 1)");
  if (synth_images < 2) throw ConfigError("synth_images must be >= 2");
  if (synth_side < 16) throw ConfigError("synth_side must be >= 16");
}

std::string RunConfig::to_text() const {
  std::ostringstream o;
  o << "dataset = " << dataset.string() << '\n'
    << "method = " << method << '\n'
    << "thresholds = " << n_thresholds << '\n'
    << "amplitude_p = " << fmt_double(amplitude.p) << '\n'
    << "amplitude_bins = " << amplitude.n_bins << '\n'
    << "amplitude_sigma = " << fmt_double(amplitude.sigma) << '\n'
    << "amplitude_layers = " << amplitude.n_layers << '\n'
    << "amplitude_power = " << fmt_double(amplitude.power) << '\n'
    << "trees = " << n_trees << '\n'
    << "min_samples_leaf = " << min_samples_leaf << '\n'
    << "max_features = " << max_features << '\n'
    << "rounds = " << n_rounds << '\n'
    << "train_frac = " << fmt_double(train_frac) << '\n'
    << "seed = " << seed << '\n'
    << "out = " << out.string() << '\n'
    << "threads = " << threads << '\n'
    << "synth_images = " << synth_images << '\n'
    << "synth_side = " << synth_side << '\n';
  return o.str();
}

RunConfig RunConfig::from_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig RunConfig::from_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

ImageFeatures extract_features(const MultiChannelImage& preprocessed, const RunConfig& config) {
  ImageFeatures f;
  f.tda = tda_feature_vector(preprocessed, config.amplitude);
  LkcOptions lkc;
  lkc.n_thresholds = config.n_thresholds;
  f.lkc = lkc_feature_vector(preprocessed, lkc);
  f.geotop = concat_geotop(f.tda, f.lkc);
  return f;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out) throw DataError("write failed: " + path.string());
}

template <class Writer>
void write_with(const fs::path& path, Writer&& writer) {
  std::ostringstream o;
  writer(o);
  write_file(path, o.str());
}

}  // namespace

ExtractSummary cmd_extract(const RunConfig& config, std::ostream& log) {
  config.validate();
  if (config.dataset.empty()) throw ConfigError("extract needs --dataset");
  DatasetListing listing;
  try {
    listing = list_dataset(config.dataset);
  } catch (const ImageError& e) {
    throw DataError(e.what());
  }
  if (listing.entries.empty()) throw DataError("dataset " + config.dataset.string() + " holds no images");

  const std::size_t n = listing.entries.size();
  std::vector<std::optional<ImageFeatures>> features(n);
  std::vector<std::string> errors(n);
  parallel_for(n, config.threads, [&](std::size_t i) {
    const auto& entry = listing.entries[i];
    try {
      const MultiChannelImage img = preprocess(load_image(entry.path));
      features[i] = extract_features(img, config);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  ExtractSummary summary;
  std::vector<FeatureRow> tda, lkc, geo;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& entry = listing.entries[i];
    if (!features[i]) {
      summary.skipped.push_back(entry.source_id + ": " + errors[i]);
      log << "warning: skipped " << entry.source_id << " (" << errors[i] << ")\n";
      continue;
    }
    tda.push_back({entry.source_id, entry.label, features[i]->tda.values});
    lkc.push_back({entry.source_id, entry.label, features[i]->lkc.values});
    geo.push_back({entry.source_id, entry.label, features[i]->geotop.values});
  }
  if (tda.empty()) throw DataError("no readable images under " + config.dataset.string());
  summary.images = tda.size();

  fs::create_directories(config.out);
  const bool all = config.method == "all";
  auto emit = [&](const char* name, std::span<const std::string> schema, const std::vector<FeatureRow>& rows) {
    const fs::path path = config.out / name;
    write_with(path, [&](std::ostream& o) { write_feature_csv(o, schema, rows); });
    summary.written.push_back(path);
    log << "wrote " << path.string() << " (" << rows.size() << " rows, " << schema.size() + 2 << " columns)\n";
  };
  if (all || config.method == "tda") emit("features_tda.csv", tda_schema(), tda);
  if (all || config.method == "lkc") emit("features_lkc.csv", lkc_schema(), lkc);
  if (all || config.method == "geotop") emit("features_geotop.csv", geotop_schema(), geo);
  return summary;
}

namespace {

FeatureTable load_table(const fs::path& path, std::size_t width) {
  FeatureTable t;
  try {
    t = read_feature_csv(path);
  } catch (const std::runtime_error& e) {
    throw DataError(e.what());
  }
  if (t.columns.size() != width) {
    throw DataError(path.string() + ": expected " + std::to_string(width) + " feature columns, found " +
                    std::to_string(t.columns.size()));
  }
  return t;
}

}  // namespace

EvalReport cmd_evaluate(const RunConfig& config, std::ostream& log) {
  config.validate();
  std::array<FeatureTable, 3> tables;
  const std::array<const char*, 3> files = {"features_tda.csv", "features_lkc.csv", "features_geotop.csv"};
  for (std::size_t m = 0; m < 3; ++m) tables[m] = load_table(config.out / files[m], method_width(kMethods[m]));
  const auto& ref = tables[0].rows;
  if (ref.size() < 5) throw DataError("need at least 5 rows to evaluate");
  for (std::size_t m = 1; m < 3; ++m) {
    const auto& rows = tables[m].rows;
    bool same = rows.size() == ref.size();
    for (std::size_t i = 0; same && i < rows.size(); ++i) {
      same = rows[i].source_id == ref[i].source_id && rows[i].label == ref[i].label;
    }
    if (!same) throw DataError(std::string(files[m]) + " does not list the same images as " + files[0]);
  }
  std::vector<FeatureMatrix> xs;
  std::vector<std::string> ids;
  for (std::size_t m = 0; m < 3; ++m) {
    FeatureMatrix x(method_width(kMethods[m]), kMethods[m]);
    try {
      for (const auto& r : tables[m].rows) x.add_row(r.values, r.label);
    } catch (const std::invalid_argument& e) {
      throw DataError(std::string(files[m]) + ": " + e.what());
    }
    xs.push_back(std::move(x));
  }
  for (const auto& r : ref) ids.push_back(r.source_id);

  EvalParams params;
  params.n_rounds = config.n_rounds;
  params.train_frac = config.train_frac;
  params.seed = config.seed;
  params.n_threads = config.threads;
  params.forest.n_trees = config.n_trees;
  params.forest.min_samples_leaf = config.min_samples_leaf;
  if (config.max_features > 0) params.forest.max_features = config.max_features;
  EvalReport report;
  try {
    report = bootstrap_evaluate(xs[0], xs[1], xs[2], params);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }

  fs::create_directories(config.out);
  write_file(config.out / "report.json", report_to_json(report));
  write_with(config.out / "scores.csv", [&](std::ostream& o) { write_scores_csv(o, report); });
  write_with(config.out / "confusion.csv", [&](std::ostream& o) { write_confusion_csv(o, report); });
  write_with(config.out / "ari.csv", [&](std::ostream& o) { write_ari_csv(o, report); });
  nlohmann::json groups = nlohmann::json::object();
  for (const auto& g : misclassification_report(report, ids)) groups[g.name] = g.ids;
  write_file(config.out / "misclassified.json", groups.dump(2));

  char buf[256];
  log << "method   score (std)      f1 (std)         precision (std)\n";
  for (const auto& m : report.methods) {
    std::snprintf(buf, sizeof buf, "%-8s %.3f (%.3f)    %.3f (%.3f)    %.3f (%.3f)\n", method_name(m.method).data(),
                  m.score.mean, m.score.std, m.f1_stats.mean, m.f1_stats.std, m.precision_stats.mean,
                  m.precision_stats.std);
    log << buf;
  }
  for (const auto& a : report.ari) {
    std::snprintf(buf, sizeof buf, "ARI(%s, %s) = %.3f (%.3f)\n", method_name(a.a).data(), method_name(a.b).data(),
                  a.stats.mean, a.stats.std);
    log << buf;
  }
  log << "reference targets (skin-lesion data only, informational):\n";
  for (const auto& c : reference_target_checks(report)) {
    std::snprintf(buf, sizeof buf, "  %-34s %.4f  expected %s  [%s]\n", c.name.c_str(), c.observed,
                  c.expected.c_str(), c.met ? "met" : "not met");
    log << buf;
  }
  log << "wrote report.json, scores.csv, confusion.csv, ari.csv, misclassified.json to " << config.out.string()
      << '\n';
  return report;
}

ToySummary cmd_toy(const RunConfig& config, std::ostream& log) {
  config.validate();
  const MultiChannelImage toy = synth_gaussian_square(200, 10, config.seed);
  const ScalarField& field = toy.channel(Channel::Gray);
  ToySummary summary;
  summary.tracking = track_components(field, config.n_thresholds);
  summary.report = component_report(summary.tracking);
  const LkcCurves global = lkc_curves(field, LkcOptions{config.n_thresholds, 1.0});

  summary.additivity_holds = true;
  for (std::size_t k = 0; k < global.thresholds.size(); ++k) {
    std::int64_t area = 0, perimeter = 0;
    for (const auto& t : summary.tracking.tracks) {
      if (!t.alive_at(k)) continue;
      area += t.area[k - t.first_index];
      perimeter += t.perimeter[k - t.first_index];
    }
    summary.additivity_holds = summary.additivity_holds && area == global.raw_area[k] &&
                               perimeter == global.raw_perimeter[k];
  }

  fs::create_directories(config.out);
  std::vector<double> scaled(field.size());
  const double peak = field.max();
  for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = std::round(field[i] / peak * 65535.0);
  save_pgm(config.out / "toy.pgm", ScalarField(200, 200, std::move(scaled)), 65535);
  write_with(config.out / "toy_barcode.csv",
             [&](std::ostream& o) { write_barcode_csv(o, superlevel_diagram(field)); });
  write_with(config.out / "toy_tracks.csv", [&](std::ostream& o) { write_tracks_csv(o, summary.tracking); });
  write_with(config.out / "toy_track_bars.csv",
             [&](std::ostream& o) { write_track_bars_csv(o, summary.tracking); });
  write_with(config.out / "toy_global_curves.csv", [&](std::ostream& o) { write_curves_csv(o, global); });

  char buf[200];
  log << "tracks: " << summary.report.size() << '\n';
  for (const auto& r : summary.report) {
    std::snprintf(buf, sizeof buf, "  track %zu  birth %.6g  death %.6g  persistence %.6g  max area %lld  max perimeter %lld\n",
                  r.track_id, r.birth, r.death, r.persistence, static_cast<long long>(r.max_area),
                  static_cast<long long>(r.max_perimeter));
    log << buf;
  }
  log << "additivity (sum of tracks == global area and perimeter): "
      << (summary.additivity_holds ? "holds" : "VIOLATED") << '\n';
  return summary;
}

std::size_t cmd_synth(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto images = synth_dataset(config.synth_images, config.seed, config.synth_side);
  for (auto name : kSynthClassNames) fs::create_directories(config.out / std::string(name));
  for (const auto& li : images) save_ppm(config.out / li.image.source_id(), li.image);
  log << "wrote " << images.size() << " images to " << config.out.string() << '\n';
  return images.size();
}

std::size_t VerifyResult::comparisons() const {
  std::size_t n = 0;
  for (const auto& s : suites) n += s.comparisons;
  return n;
}

std::size_t VerifyResult::failures() const {
  std::size_t n = 0;
  for (const auto& s : suites) n += s.failures;
  return n;
}

}  // namespace geotop
