#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "geotop/forest.hpp"

namespace geotop {

/// Adjusted Rand index of two labelings. Returns 1 when both labelings are a
/// single cluster (or both all singletons). Throws on a length mismatch or
/// fewer than 2 items.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

struct F1Precision {
  double f1 = 0.0;
  double precision = 0.0;
};

/// Positive class is 1; zero denominators give 0.
F1Precision f1_precision(std::span<const int> truth, std::span<const int> predicted);

/// counts[true][predicted]
struct ConfusionMatrix {
  std::array<std::array<double, 2>, 2> counts{};
  double total() const { return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1]; }
  double accuracy() const { return (counts[0][0] + counts[1][1]) / total(); }
};

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // population (ddof = 0)
};

MeanStd mean_std(std::span<const double> values);

struct MethodStats {
  Method method = Method::Tda;
  std::vector<double> scores;  // one per round
  std::vector<double> f1;
  std::vector<double> precision;
  MeanStd score;
  MeanStd f1_stats;
  MeanStd precision_stats;
  ConfusionMatrix mean_confusion;  // averaged over rounds
};

struct AriStats {
  Method a = Method::Tda;
  Method b = Method::Lkc;
  std::vector<double> values;
  MeanStd stats;
};

/// Predictions of one round, kept for misclassification reporting.
struct RetainedRound {
  std::vector<std::size_t> test_rows;
  std::vector<int> truth;
  std::array<std::vector<int>, 3> predictions;  // indexed by Method
};

struct EvalParams {
  std::size_t n_rounds = 500;
  double train_frac = 0.8;
  std::uint64_t seed = 0;
  ForestParams forest;
  /// Rounds evaluated concurrently (0 = hardware concurrency).
  std::size_t n_threads = 1;
};

struct EvalReport {
  std::size_t n_rounds = 0;
  double train_frac = 0.0;
  std::uint64_t seed = 0;
  std::size_t n_rows = 0;
  std::array<MethodStats, 3> methods;  // indexed by Method
  std::array<AriStats, 3> ari;         // (tda, lkc), (lkc, geotop), (tda, geotop)
  /// Mean number of test rows per true class.
  std::array<double, 2> mean_test_class_counts{};
  /// Per round, per method: hash of the (train, test) row sets actually used.
  std::vector<std::array<std::uint64_t, 3>> split_hashes;
  RetainedRound retained;  // round 0
};

/// Repeated random train/test splits shared by the three methods; each
/// method trains a fresh forest per round (same forest seed across methods).
/// Throws std::invalid_argument when n_rounds < 1 or the matrices disagree
/// on rows or labels.
EvalReport bootstrap_evaluate(const FeatureMatrix& tda, const FeatureMatrix& lkc, const FeatureMatrix& geotop,
                              const EvalParams& params);

/// Test rows of the retained round partitioned by which methods got them
/// right. Groups come in a fixed order and always sum to the test-set size.
struct MisclassificationGroup {
  std::string name;
  std::array<bool, 3> correct{};  // per method
  std::vector<std::string> ids;
};

std::vector<MisclassificationGroup> misclassification_report(const EvalReport& report,
                                                             std::span<const std::string> row_ids);

/// Reference values for benign/malignant skin-lesion images; meaningless on other data.
struct TargetCheck {
  std::string name;
  double observed = 0.0;
  std::string expected;
  bool met = false;
};

std::vector<TargetCheck> reference_target_checks(const EvalReport& report);

std::string report_to_json(const EvalReport& report);
/// round,method,score,f1,precision
void write_scores_csv(std::ostream& out, const EvalReport& report);
/// method,true_label,pred_0,pred_1
void write_confusion_csv(std::ostream& out, const EvalReport& report);
/// method_a,method_b,mean,std
void write_ari_csv(std::ostream& out, const EvalReport& report);

}  // namespace geotop
