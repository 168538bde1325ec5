#include "geotop/forest.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "geotop/parallel.hpp"
#include "geotop/rng.hpp"
#include "json.hpp"

namespace geotop {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::Tda: return "tda";
    case Method::Lkc: return "lkc";
    case Method::GeoTop: return "geotop";
  }
  return "unknown";
}

std::size_t method_width(Method m) {
  switch (m) {
    case Method::Tda: return 64;
    case Method::Lkc: return 120;
    case Method::GeoTop: return 184;
  }
  return 0;
}

FeatureMatrix::FeatureMatrix(std::size_t n_cols, std::optional<Method> tag) : n_cols_(n_cols), tag_(tag) {
  if (tag_ && method_width(*tag_) != n_cols_) {
    throw std::invalid_argument("FeatureMatrix: " + std::string(method_name(*tag_)) + " rows must have " +
                                std::to_string(method_width(*tag_)) + " features");
  }
}

void FeatureMatrix::add_row(std::span<const double> values, int label) {
  if (values.size() != n_cols_) throw std::invalid_argument("FeatureMatrix::add_row: width mismatch");
  if (label != 0 && label != 1) throw std::invalid_argument("FeatureMatrix::add_row: labels must be 0 or 1");
  data_.insert(data_.end(), values.begin(), values.end());
  labels_.push_back(label);
}

FeatureMatrix FeatureMatrix::subset(std::span<const std::size_t> indices) const {
  FeatureMatrix out(n_cols_, tag_);
  out.data_.reserve(indices.size() * n_cols_);
  for (std::size_t i : indices) out.add_row(row(i), labels_.at(i));
  return out;
}

FeatureMatrix FeatureMatrix::without_columns(std::span<const std::size_t> columns) const {
  std::vector<bool> drop(n_cols_, false);
  for (std::size_t c : columns) drop.at(c) = true;
  const std::size_t kept = n_cols_ - static_cast<std::size_t>(std::count(drop.begin(), drop.end(), true));
  FeatureMatrix out(kept);
  std::vector<double> buf(kept);
  for (std::size_t i = 0; i < rows(); ++i) {
    std::size_t k = 0;
    for (std::size_t j = 0; j < n_cols_; ++j) {
      if (!drop[j]) buf[k++] = at(i, j);
    }
    out.add_row(buf, labels_[i]);
  }
  return out;
}

int DecisionTree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (nodes[i].feature >= 0) {
    const auto& nd = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right);
  }
  return nodes[i].label;
}

namespace {

double gini(double c0, double c1) {
  const double n = c0 + c1;
  if (n == 0.0) return 0.0;
  const double p0 = c0 / n, p1 = c1 / n;
  return 1.0 - p0 * p0 - p1 * p1;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double impurity = std::numeric_limits<double>::infinity();
};

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& x, const std::vector<double>& columns, std::size_t max_features,
              std::size_t min_leaf, Rng& rng)
      : x_(x), columns_(columns), max_features_(max_features), min_leaf_(min_leaf), rng_(rng), features_(x.cols()) {
    std::iota(features_.begin(), features_.end(), 0);
  }

  DecisionTree build(std::vector<std::size_t> sample) {
    DecisionTree tree;
    struct Pending {
      std::size_t node;
      std::vector<std::size_t> rows;
    };
    std::vector<Pending> stack;
    tree.nodes.emplace_back();
    stack.push_back({0, std::move(sample)});
    while (!stack.empty()) {
      Pending job = std::move(stack.back());
      stack.pop_back();
      std::array<double, 2> counts{0.0, 0.0};
      for (std::size_t r : job.rows) counts[static_cast<std::size_t>(x_.label(r))] += 1.0;
      tree.nodes[job.node].label = counts[1] > counts[0] ? 1 : 0;
      if (counts[0] == 0.0 || counts[1] == 0.0 || job.rows.size() < 2 * min_leaf_) continue;
      const Split split = best_split(job.rows);
      if (split.feature < 0) continue;
      std::vector<std::size_t> left, right;
      for (std::size_t r : job.rows) {
        (value(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(r);
      }
      const auto l = static_cast<std::int32_t>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      auto& nd = tree.nodes[job.node];
      nd.feature = split.feature;
      nd.threshold = split.threshold;
      nd.left = l;
      nd.right = l + 1;
      stack.push_back({static_cast<std::size_t>(l + 1), std::move(right)});
      stack.push_back({static_cast<std::size_t>(l), std::move(left)});
    }
    return tree;
  }

 private:
  // Features are visited in a fresh random order; the search stops after
  // max_features of them unless none so far admitted a valid split.
  Split best_split(const std::vector<std::size_t>& rows) {
    Split best;
    const std::size_t d = features_.size();
    std::vector<std::pair<double, int>> column(rows.size());
    double total1 = 0.0;
    for (std::size_t r : rows) total1 += x_.label(r);
    const double n = static_cast<double>(rows.size());
    for (std::size_t visited = 0; visited < d; ++visited) {
      if (visited >= max_features_ && best.feature >= 0) break;
      const std::size_t pick = visited + uniform_index(rng_, d - visited);
      std::swap(features_[visited], features_[pick]);
      const std::size_t f = features_[visited];
      const double* col = columns_.data() + f * x_.rows();
      for (std::size_t i = 0; i < rows.size(); ++i) column[i] = {col[rows[i]], x_.label(rows[i])};
      std::sort(column.begin(), column.end());
      double left0 = 0.0, left1 = 0.0;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        (column[i].second ? left1 : left0) += 1.0;
        if (column[i].first == column[i + 1].first) continue;
        const double nl = static_cast<double>(i + 1), nr = n - nl;
        if (nl < static_cast<double>(min_leaf_) || nr < static_cast<double>(min_leaf_)) continue;
        const double right1 = total1 - left1, right0 = nr - right1;
        const double impurity = (nl * gini(left0, left1) + nr * gini(right0, right1)) / n;
        if (impurity < best.impurity) {
          double mid = column[i].first + (column[i + 1].first - column[i].first) / 2.0;
          if (!(mid < column[i + 1].first)) mid = column[i].first;
          best = {static_cast<int>(f), mid, impurity};
        }
      }
    }
    return best;
  }

  double value(std::size_t row, std::size_t feature) const { return columns_[feature * x_.rows() + row]; }

  const FeatureMatrix& x_;
  const std::vector<double>& columns_;  // column-major copy of x_
  std::size_t max_features_;
  std::size_t min_leaf_;
  Rng& rng_;
  std::vector<std::size_t> features_;
};

}  // namespace

ForestModel train(const FeatureMatrix& x, const ForestParams& params) {
  if (x.rows() < 2) throw std::invalid_argument("train: need at least 2 rows");
  if (x.cols() == 0) throw std::invalid_argument("train: empty feature matrix");
  const auto positives = std::count(x.labels().begin(), x.labels().end(), 1);
  if (positives == 0 || positives == static_cast<long>(x.rows())) {
    throw std::invalid_argument("train: both classes must be present");
  }
  if (params.n_trees == 0) throw std::invalid_argument("train: n_trees must be >= 1");
  if (params.min_samples_leaf == 0) throw std::invalid_argument("train: min_samples_leaf must be >= 1");
  const std::size_t max_features =
      std::clamp<std::size_t>(params.max_features.value_or(static_cast<std::size_t>(
                                  std::ceil(std::sqrt(static_cast<double>(x.cols()))))),
                              1, x.cols());

  ForestModel model;
  model.params_ = params;
  model.n_features_ = x.cols();
  model.trees_.resize(params.n_trees);
  model.in_bag_.resize(params.n_trees);
  std::vector<double> columns(x.rows() * x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) columns[j * x.rows() + i] = x.at(i, j);
  parallel_for(params.n_trees, params.n_threads, [&](std::size_t t) {
    Rng rng(derive_seed(params.seed, t));
    std::vector<std::size_t> sample(x.rows());
    auto& bag = model.in_bag_[t];
    bag.assign(x.rows(), 0);
    for (auto& s : sample) {
      s = uniform_index(rng, x.rows());
      bag[s] = 1;
    }
    TreeBuilder builder(x, columns, max_features, params.min_samples_leaf, rng);
    model.trees_[t] = builder.build(std::move(sample));
  });
  return model;
}

int ForestModel::predict(std::span<const double> x) const {
  if (x.size() != n_features_) {
    throw std::invalid_argument("predict: expected " + std::to_string(n_features_) + " features, got " +
                                std::to_string(x.size()));
  }
  std::size_t ones = 0;
  for (const auto& t : trees_) ones += static_cast<std::size_t>(t.predict(x));
  return 2 * ones > trees_.size() ? 1 : 0;
}

std::vector<int> ForestModel::oob_predict(const FeatureMatrix& training) const {
  if (in_bag_.empty() || in_bag_[0].size() != training.rows()) {
    throw std::invalid_argument("oob_predict: matrix is not the training matrix");
  }
  std::vector<int> out(training.rows(), -1);
  for (std::size_t i = 0; i < training.rows(); ++i) {
    std::size_t votes = 0, ones = 0;
    for (std::size_t t = 0; t < trees_.size(); ++t) {
      if (in_bag_[t][i]) continue;
      ++votes;
      ones += static_cast<std::size_t>(trees_[t].predict(training.row(i)));
    }
    if (votes > 0) out[i] = 2 * ones > votes ? 1 : 0;
  }
  return out;
}

namespace {
constexpr int kModelFormatVersion = 1;
}

std::string ForestModel::to_json() const {
  nlohmann::json j;
  j["format"] = "geotop-random-forest";
  j["version"] = kModelFormatVersion;
  j["n_features"] = n_features_;
  j["params"] = {{"n_trees", params_.n_trees},
                 {"min_samples_leaf", params_.min_samples_leaf},
                 {"seed", params_.seed}};
  if (params_.max_features) j["params"]["max_features"] = *params_.max_features;
  auto& trees = j["trees"] = nlohmann::json::array();
  for (const auto& t : trees_) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& nd : t.nodes) nodes.push_back({nd.feature, nd.threshold, nd.left, nd.right, nd.label});
    trees.push_back(std::move(nodes));
  }
  return j.dump();
}

ForestModel ForestModel::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.value("format", "") != "geotop-random-forest" || j.value("version", 0) != kModelFormatVersion) {
    throw std::invalid_argument("ForestModel::from_json: unsupported model format");
  }
  ForestModel m;
  m.n_features_ = j.at("n_features").get<std::size_t>();
  const auto& p = j.at("params");
  m.params_.n_trees = p.at("n_trees").get<std::size_t>();
  m.params_.min_samples_leaf = p.at("min_samples_leaf").get<std::size_t>();
  m.params_.seed = p.at("seed").get<std::uint64_t>();
  if (p.contains("max_features")) m.params_.max_features = p.at("max_features").get<std::size_t>();
  for (const auto& t : j.at("trees")) {
    DecisionTree tree;
    for (const auto& nd : t) {
      TreeNode node{nd.at(0).get<int>(), nd.at(1).get<double>(), nd.at(2).get<std::int32_t>(),
                    nd.at(3).get<std::int32_t>(), nd.at(4).get<int>()};
      if (node.feature >= static_cast<int>(m.n_features_)) {
        throw std::invalid_argument("ForestModel::from_json: split feature out of range");
      }
      tree.nodes.push_back(node);
    }
    m.trees_.push_back(std::move(tree));
  }
  return m;
}

std::vector<int> predict(const ForestModel& model, const FeatureMatrix& x) {
  std::vector<int> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = model.predict(x.row(i));
  return out;
}

double score(const ForestModel& model, const FeatureMatrix& x) {
  if (x.rows() == 0) throw std::invalid_argument("score: empty test set");
  const auto pred = predict(model, x);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == x.label(i);
  return static_cast<double>(correct) / static_cast<double>(x.rows());
}

}  // namespace geotop
