// geotop command line: synth, extract, evaluate, toy, verify.

#include <exception>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "geotop/pipeline.hpp"

namespace {

struct Overrides {
  std::optional<std::string> config_path;
  std::map<std::string, std::string> values;
};

// Registers the shared flags on a subcommand; values are kept as strings so
// that they can be applied on top of a config file in one place.
void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option_function<std::string>("--config", [&o](const std::string& v) { o.config_path = v; },
                                        "key = value config file (flags override it)");
  auto opt = [&](const char* flag, const char* key, const char* help) {
    sub->add_option_function<std::string>(flag, [&o, key](const std::string& v) { o.values[key] = v; }, help);
  };
  opt("--dataset", "dataset", "dataset root: <root>/<class>/<image>");
  opt("--method", "method", "tda | lkc | geotop | all");
  opt("--rounds", "rounds", "bootstrap rounds");
  opt("--seed", "seed", "master seed");
  opt("--out", "out", "output directory");
  opt("--thresholds", "thresholds", "threshold grid size for LKC curves and tracks");
  opt("--trees", "trees", "trees per random forest");
  opt("--threads", "threads", "worker threads (0 = all cores)");
  opt("--images", "synth_images", "synth: number of images");
  opt("--side", "synth_side", "synth: image side in pixels");
}

geotop::RunConfig resolve(const Overrides& o) {
  geotop::RunConfig cfg = o.config_path ? geotop::RunConfig::from_file(*o.config_path) : geotop::RunConfig{};
  for (const auto& [k, v] : o.values) cfg.set(k, v);
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geotop: topological and geometric features for image classification"};
  app.require_subcommand(1);
  Overrides o;
  auto* synth = app.add_subcommand("synth", "write a synthetic two-class dataset to --out");
  auto* extract = app.add_subcommand("extract", "extract feature CSVs from --dataset into --out");
  auto* evaluate = app.add_subcommand("evaluate", "bootstrap random-forest evaluation of the CSVs in --out");
  auto* toy = app.add_subcommand("toy", "Gaussian bump plus square: barcode and component tracks");
  auto* verify = app.add_subcommand("verify", "run seeded oracle checks");
  bool print_config = false;
  for (auto* sub : {synth, extract, evaluate, toy, verify}) {
    add_common(sub, o);
    sub->add_flag("--print-config", print_config, "print the resolved config and exit");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? geotop::kExitOk : geotop::kExitUsage;
  }

  try {
    const geotop::RunConfig cfg = resolve(o);
    if (print_config) {
      std::cout << cfg.to_text();
      return geotop::kExitOk;
    }
    if (synth->parsed()) {
      geotop::cmd_synth(cfg, std::cout);
    } else if (extract->parsed()) {
      const auto summary = geotop::cmd_extract(cfg, std::cerr);
      std::cout << "extracted " << summary.images << " images, skipped " << summary.skipped.size() << '\n';
    } else if (evaluate->parsed()) {
      geotop::cmd_evaluate(cfg, std::cout);
    } else if (toy->parsed()) {
      const auto summary = geotop::cmd_toy(cfg, std::cout);
      if (!summary.additivity_holds) return geotop::kExitVerification;
    } else if (verify->parsed()) {
      if (!geotop::cmd_verify(cfg, std::cout).ok()) return geotop::kExitVerification;
    }
  } catch (const geotop::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return geotop::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return geotop::kExitData;
  }
  return geotop::kExitOk;
}
