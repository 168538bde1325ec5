#include "geotop/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "geotop/parallel.hpp"
#include "geotop/rng.hpp"
#include "json.hpp"

namespace geotop {

namespace {

double choose2(double n) { return n * (n - 1.0) / 2.0; }

}  // namespace

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw std::invalid_argument("adjusted_rand_index: length mismatch");
  if (a.size() < 2) throw std::invalid_argument("adjusted_rand_index: need at least 2 items");
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> rows, cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  double index = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& [key, n] : joint) index += choose2(n);
  for (const auto& [key, n] : rows) sum_a += choose2(n);
  for (const auto& [key, n] : cols) sum_b += choose2(n);
  const double expected = sum_a * sum_b / choose2(static_cast<double>(a.size()));
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

F1Precision f1_precision(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) throw std::invalid_argument("f1_precision: length mismatch");
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    tp += truth[i] == 1 && predicted[i] == 1;
    fp += truth[i] != 1 && predicted[i] == 1;
    fn += truth[i] == 1 && predicted[i] != 1;
  }
  const double precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  const double recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  const double f1 = precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  return {f1, precision};
}

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) throw std::invalid_argument("confusion: length mismatch");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    m.counts[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])] += 1.0;
  }
  return m;
}

MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) return {};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  return {mean, std::sqrt(var / n)};
}

namespace {

std::uint64_t hash_split(const std::vector<std::size_t>& train, const std::vector<std::size_t>& test) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t v) {
    h ^= v;
    h *= 0x100000001b3ULL;
  };
  for (auto i : train) mix(i);
  mix(~0ULL);
  for (auto i : test) mix(i);
  return h;
}

struct RoundResult {
  std::array<double, 3> score{}, f1{}, precision{}, ari{};
  std::array<ConfusionMatrix, 3> confusion{};
  std::array<std::uint64_t, 3> hashes{};
  std::array<double, 2> test_counts{};
  std::vector<std::size_t> test_rows;
  std::vector<int> truth;
  std::array<std::vector<int>, 3> predictions;
};

constexpr std::array<std::pair<Method, Method>, 3> kAriPairs = {
    std::pair{Method::Tda, Method::Lkc}, std::pair{Method::Lkc, Method::GeoTop},
    std::pair{Method::Tda, Method::GeoTop}};

}  // namespace

EvalReport bootstrap_evaluate(const FeatureMatrix& tda, const FeatureMatrix& lkc, const FeatureMatrix& geotop,
                              const EvalParams& params) {
  if (params.n_rounds < 1) throw std::invalid_argument("bootstrap_evaluate: n_rounds must be >= 1");
  if (!(params.train_frac > 0.0 && params.train_frac < 1.0)) {
    throw std::invalid_argument("bootstrap_evaluate: train_frac must be in (0, 1)");
  }
  const std::array<const FeatureMatrix*, 3> xs = {&tda, &lkc, &geotop};
  const std::size_t n = tda.rows();
  for (const auto* x : xs) {
    if (x->rows() != n || x->labels() != tda.labels()) {
      throw std::invalid_argument("bootstrap_evaluate: feature matrices disagree on rows or labels");
    }
  }
  if (n < 2) throw std::invalid_argument("bootstrap_evaluate: need at least 2 rows");
  const auto n_train = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(params.train_frac * static_cast<double>(n))), 1, n - 1);

  std::vector<RoundResult> results(params.n_rounds);
  parallel_for(params.n_rounds, params.n_threads, [&](std::size_t round) {
    Rng split_rng(derive_seed(params.seed, round, 0));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[uniform_index(split_rng, i + 1)]);
    std::vector<std::size_t> train_rows(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> test_rows(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());

    RoundResult& res = results[round];
    ForestParams forest = params.forest;
    forest.seed = derive_seed(params.seed, round, 1);
    forest.n_threads = 1;
    res.test_rows = test_rows;
    for (std::size_t i : test_rows) res.truth.push_back(tda.label(i));
    for (int y : res.truth) res.test_counts[static_cast<std::size_t>(y)] += 1.0;
    for (std::size_t m = 0; m < 3; ++m) {
      const FeatureMatrix train_x = xs[m]->subset(train_rows);
      const FeatureMatrix test_x = xs[m]->subset(test_rows);
      res.hashes[m] = hash_split(train_rows, test_rows);
      const ForestModel model = train(train_x, forest);
      res.predictions[m] = predict(model, test_x);
      res.score[m] = score(model, test_x);
      res.confusion[m] = confusion(res.truth, res.predictions[m]);
      const auto fp = f1_precision(res.truth, res.predictions[m]);
      res.f1[m] = fp.f1;
      res.precision[m] = fp.precision;
    }
    for (std::size_t k = 0; k < kAriPairs.size(); ++k) {
      const auto [a, b] = kAriPairs[k];
      res.ari[k] = test_rows.size() >= 2
                       ? adjusted_rand_index(res.predictions[static_cast<std::size_t>(a)],
                                             res.predictions[static_cast<std::size_t>(b)])
                       : 1.0;
    }
  });

  EvalReport report;
  report.n_rounds = params.n_rounds;
  report.train_frac = params.train_frac;
  report.seed = params.seed;
  report.n_rows = n;
  const double rounds = static_cast<double>(params.n_rounds);
  for (std::size_t m = 0; m < 3; ++m) {
    auto& st = report.methods[m];
    st.method = kMethods[m];
    for (const auto& r : results) {
      st.scores.push_back(r.score[m]);
      st.f1.push_back(r.f1[m]);
      st.precision.push_back(r.precision[m]);
      for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) st.mean_confusion.counts[i][j] += r.confusion[m].counts[i][j] / rounds;
      }
    }
    st.score = mean_std(st.scores);
    st.f1_stats = mean_std(st.f1);
    st.precision_stats = mean_std(st.precision);
  }
  for (std::size_t k = 0; k < kAriPairs.size(); ++k) {
    auto& a = report.ari[k];
    a.a = kAriPairs[k].first;
    a.b = kAriPairs[k].second;
    for (const auto& r : results) a.values.push_back(r.ari[k]);
    a.stats = mean_std(a.values);
  }
  for (const auto& r : results) {
    report.split_hashes.push_back(r.hashes);
    report.mean_test_class_counts[0] += r.test_counts[0] / rounds;
    report.mean_test_class_counts[1] += r.test_counts[1] / rounds;
  }
  report.retained.test_rows = results[0].test_rows;
  report.retained.truth = results[0].truth;
  report.retained.predictions = results[0].predictions;
  return report;
}

std::vector<MisclassificationGroup> misclassification_report(const EvalReport& report,
                                                             std::span<const std::string> row_ids) {
  std::vector<MisclassificationGroup> groups = {
      {"all_correct", {true, true, true}, {}},      {"only_tda_wrong", {false, true, true}, {}},
      {"only_lkc_wrong", {true, false, true}, {}},  {"only_geotop_wrong", {true, true, false}, {}},
      {"only_tda_correct", {true, false, false}, {}}, {"only_lkc_correct", {false, true, false}, {}},
      {"only_geotop_correct", {false, false, true}, {}}, {"all_wrong", {false, false, false}, {}},
  };
  const auto& rr = report.retained;
  for (std::size_t k = 0; k < rr.test_rows.size(); ++k) {
    std::array<bool, 3> ok{};
    for (std::size_t m = 0; m < 3; ++m) ok[m] = rr.predictions[m].at(k) == rr.truth[k];
    for (auto& g : groups) {
      if (g.correct == ok) {
        const std::size_t row = rr.test_rows[k];
        g.ids.push_back(row < row_ids.size() ? row_ids[row] : std::to_string(row));
        break;
      }
    }
  }
  return groups;
}

std::vector<TargetCheck> reference_target_checks(const EvalReport& report) {
  const auto& tda = report.methods[0];
  const auto& lkc = report.methods[1];
  const auto& geo = report.methods[2];
  auto within = [](double v, double centre) { return std::abs(v - centre) <= 0.03; };
  std::vector<TargetCheck> checks;
  checks.push_back({"tda_mean_accuracy", tda.score.mean, "0.84 +/- 0.03", within(tda.score.mean, 0.84)});
  checks.push_back({"lkc_mean_accuracy", lkc.score.mean, "0.84 +/- 0.03", within(lkc.score.mean, 0.84)});
  checks.push_back({"geotop_mean_accuracy", geo.score.mean, "0.87 +/- 0.03", within(geo.score.mean, 0.87)});
  checks.push_back({"geotop_not_below_single_methods", geo.score.mean - std::max(tda.score.mean, lkc.score.mean),
                    ">= 0", geo.score.mean >= std::max(tda.score.mean, lkc.score.mean)});
  checks.push_back({"geotop_mean_f1", geo.f1_stats.mean, "0.86 +/- 0.03", within(geo.f1_stats.mean, 0.86)});
  const auto fp = [](const MethodStats& s) { return s.mean_confusion.counts[0][1]; };
  const auto fn = [](const MethodStats& s) { return s.mean_confusion.counts[1][0]; };
  const bool improves = (fp(geo) < fp(tda) && fn(geo) < fn(tda)) || (fp(geo) < fp(lkc) && fn(geo) < fn(lkc));
  checks.push_back({"geotop_fewer_fp_and_fn", fp(geo) + fn(geo),
                    "FP and FN both below one single method", improves});
  return checks;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["n_rounds"] = report.n_rounds;
  j["train_frac"] = report.train_frac;
  j["seed"] = report.seed;
  j["n_rows"] = report.n_rows;
  j["mean_test_class_counts"] = report.mean_test_class_counts;
  for (const auto& m : report.methods) {
    const std::string name(method_name(m.method));
    j["methods"][name] = {
        {"score_mean", m.score.mean},
        {"score_std", m.score.std},
        {"f1_mean", m.f1_stats.mean},
        {"f1_std", m.f1_stats.std},
        {"precision_mean", m.precision_stats.mean},
        {"precision_std", m.precision_stats.std},
        {"mean_confusion", {m.mean_confusion.counts[0], m.mean_confusion.counts[1]}},
    };
  }
  for (const auto& a : report.ari) {
    j["ari"].push_back({{"a", method_name(a.a)}, {"b", method_name(a.b)}, {"mean", a.stats.mean}, {"std", a.stats.std}});
  }
  return j.dump(2);
}

void write_scores_csv(std::ostream& out, const EvalReport& report) {
  out << "round,method,score,f1,precision\n";
  char buf[160];
  for (std::size_t r = 0; r < report.n_rounds; ++r) {
    for (const auto& m : report.methods) {
      std::snprintf(buf, sizeof buf, "%zu,%s,%.17g,%.17g,%.17g\n", r, method_name(m.method).data(), m.scores[r],
                    m.f1[r], m.precision[r]);
      out << buf;
    }
  }
}

void write_confusion_csv(std::ostream& out, const EvalReport& report) {
  out << "method,true_label,pred_0,pred_1\n";
  char buf[160];
  for (const auto& m : report.methods) {
    for (std::size_t t = 0; t < 2; ++t) {
      std::snprintf(buf, sizeof buf, "%s,%zu,%.17g,%.17g\n", method_name(m.method).data(), t,
                    m.mean_confusion.counts[t][0], m.mean_confusion.counts[t][1]);
      out << buf;
    }
  }
}

void write_ari_csv(std::ostream& out, const EvalReport& report) {
  out << "method_a,method_b,mean,std\n";
  char buf[160];
  for (const auto& a : report.ari) {
    std::snprintf(buf, sizeof buf, "%s,%s,%.17g,%.17g\n", method_name(a.a).data(), method_name(a.b).data(),
                  a.stats.mean, a.stats.std);
    out << buf;
  }
}

}  // namespace geotop
