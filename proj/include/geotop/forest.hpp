#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace geotop {

enum class Method { Tda = 0, Lkc = 1, GeoTop = 2 };

inline constexpr std::array<Method, 3> kMethods = {Method::Tda, Method::Lkc, Method::GeoTop};

std::string_view method_name(Method m);  // "tda", "lkc", "geotop"
std::size_t method_width(Method m);      // 64, 120, 184

/// Dense row-major design matrix with binary labels. When a method tag is
/// given the row width must be that method's feature count.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(std::size_t n_cols, std::optional<Method> tag = std::nullopt);

  void add_row(std::span<const double> values, int label);

  std::size_t rows() const { return labels_.size(); }
  std::size_t cols() const { return n_cols_; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_cols_, n_cols_}; }
  double at(std::size_t i, std::size_t j) const { return data_[i * n_cols_ + j]; }
  int label(std::size_t i) const { return labels_[i]; }
  const std::vector<int>& labels() const { return labels_; }
  std::optional<Method> tag() const { return tag_; }

  FeatureMatrix subset(std::span<const std::size_t> indices) const;
  /// Copy with the given columns removed.
  FeatureMatrix without_columns(std::span<const std::size_t> columns) const;

 private:
  std::size_t n_cols_ = 0;
  std::optional<Method> tag_;
  std::vector<double> data_;
  std::vector<int> labels_;
};

struct ForestParams {
  std::size_t n_trees = 100;
  std::size_t min_samples_leaf = 1;
  /// Candidate features per split; ceil(sqrt(d)) when unset.
  std::optional<std::size_t> max_features;
  std::uint64_t seed = 0;
  /// Worker threads for tree construction (0 = hardware concurrency).
  std::size_t n_threads = 1;
};

/// Flat CART tree: internal nodes send x[feature] <= threshold left.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  int label = 0;
  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;
  int predict(std::span<const double> x) const;
};

class ForestModel {
 public:
  const std::vector<DecisionTree>& trees() const { return trees_; }
  std::size_t n_features() const { return n_features_; }
  const ForestParams& params() const { return params_; }

  /// Majority vote; ties go to class 0. Throws on a width mismatch.
  int predict(std::span<const double> x) const;

  /// Votes of trees that did not draw row i into their bootstrap sample;
  /// -1 when every tree saw the row. X must be the training matrix.
  std::vector<int> oob_predict(const FeatureMatrix& training) const;

  /// Versioned JSON dump of every tree.
  std::string to_json() const;
  static ForestModel from_json(const std::string& text);

 private:
  friend ForestModel train(const FeatureMatrix&, const ForestParams&);
  std::vector<DecisionTree> trees_;
  std::vector<std::vector<std::uint8_t>> in_bag_;  // per tree, per training row
  std::size_t n_features_ = 0;
  ForestParams params_;
};

/// Bagged Gini CART trees grown until pure (or min_samples_leaf). Throws
/// std::invalid_argument on an empty matrix or a single class.
ForestModel train(const FeatureMatrix& x, const ForestParams& params);

std::vector<int> predict(const ForestModel& model, const FeatureMatrix& x);

/// Fraction of rows whose prediction equals the stored label. Throws on an
/// empty matrix.
double score(const ForestModel& model, const FeatureMatrix& x);

}  // namespace geotop
