#include <gtest/gtest.h>

#include "geotop/forest.hpp"
#include "geotop/rng.hpp"

using namespace geotop;

namespace {

FeatureMatrix separated(std::size_t n) {
  FeatureMatrix x(1);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = static_cast<double>(i) - static_cast<double>(n) / 2.0 + 0.5;
    x.add_row(std::vector<double>{v}, v > 0 ? 1 : 0);
  }
  return x;
}

FeatureMatrix random_matrix(Rng& rng, std::size_t n, std::size_t d, bool informative) {
  FeatureMatrix x(d);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = static_cast<int>(uniform_index(rng, 2));
    std::vector<double> row(d);
    for (auto& v : row) v = standard_normal(rng);
    if (informative) row[0] += 3.0 * y;
    x.add_row(row, y);
  }
  return x;
}

}  // namespace

TEST(FeatureMatrixTest, Validation) {
  FeatureMatrix x(3);
  EXPECT_THROW(x.add_row(std::vector<double>{1, 2}, 0), std::invalid_argument);
  EXPECT_THROW(x.add_row(std::vector<double>{1, 2, 3}, 2), std::invalid_argument);
  EXPECT_THROW(FeatureMatrix(5, Method::Tda), std::invalid_argument);
  x.add_row(std::vector<double>{1, 2, 3}, 1);
  x.add_row(std::vector<double>{4, 5, 6}, 0);
  const std::vector<std::size_t> idx = {1};
  EXPECT_EQ(x.subset(idx).at(0, 2), 6.0);
  const std::vector<std::size_t> drop = {0, 2};
  const auto y = x.without_columns(drop);
  EXPECT_EQ(y.cols(), 1u);
  EXPECT_EQ(y.at(1, 0), 5.0);
}

TEST(ForestTest, SeparatedDataIsLearnedExactly) {
  const auto x = separated(40);
  ForestParams p;
  p.seed = 3;
  const auto model = train(x, p);
  EXPECT_EQ(score(model, x), 1.0);
}

TEST(ForestTest, OutOfBagOnDuplicatedRows) {
  Rng rng(4);
  FeatureMatrix x(3);
  for (int i = 0; i < 15; ++i) {
    std::vector<double> row = {standard_normal(rng), standard_normal(rng), standard_normal(rng)};
    const int y = static_cast<int>(uniform_index(rng, 2));
    for (int copy = 0; copy < 10; ++copy) x.add_row(row, y);
  }
  ForestParams p;
  p.seed = 9;
  const auto model = train(x, p);
  const auto oob = model.oob_predict(x);
  std::size_t covered = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    if (oob[i] < 0) continue;
    ++covered;
    EXPECT_EQ(oob[i], x.label(i)) << "row " << i;
  }
  EXPECT_GT(covered, x.rows() / 2);
}

TEST(ForestTest, DeterministicSerializationAndThreadCount) {
  Rng rng(5);
  const auto x = random_matrix(rng, 120, 8, true);
  ForestParams p;
  p.seed = 77;
  p.n_trees = 40;
  const auto a = train(x, p);
  const auto b = train(x, p);
  p.n_threads = 4;
  const auto c = train(x, p);
  EXPECT_EQ(a.to_json(), b.to_json());
  EXPECT_EQ(a.to_json(), c.to_json());
  EXPECT_EQ(predict(a, x), predict(c, x));
  p.seed = 78;
  EXPECT_NE(train(x, p).to_json(), a.to_json());
}

TEST(ForestTest, JsonRoundTrip) {
  Rng rng(6);
  const auto x = random_matrix(rng, 80, 5, true);
  ForestParams p;
  p.n_trees = 15;
  const auto model = train(x, p);
  const auto back = ForestModel::from_json(model.to_json());
  EXPECT_EQ(predict(back, x), predict(model, x));
  EXPECT_EQ(back.to_json(), model.to_json());
  EXPECT_THROW(ForestModel::from_json("{\"format\": \"other\"}"), std::exception);
}

TEST(ForestTest, RandomLabelsScoreNearHalf) {
  Rng rng(7);
  const auto train_x = random_matrix(rng, 1000, 6, false);
  const auto test_x = random_matrix(rng, 1000, 6, false);
  ForestParams p;
  p.seed = 1;
  const double s = score(train(train_x, p), test_x);
  EXPECT_NEAR(s, 0.5, 0.1);
}

TEST(ForestTest, Guards) {
  FeatureMatrix empty(2);
  EXPECT_THROW(train(empty, {}), std::invalid_argument);
  FeatureMatrix one_class(1);
  one_class.add_row(std::vector<double>{1.0}, 0);
  one_class.add_row(std::vector<double>{2.0}, 0);
  EXPECT_THROW(train(one_class, {}), std::invalid_argument);
  const auto model = train(separated(10), {});
  EXPECT_THROW(score(model, FeatureMatrix(1)), std::invalid_argument);
  EXPECT_THROW(model.predict(std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST(ForestTest, TieVoteGoesToClassZero) {
  // Two trees that disagree everywhere: one constant-0 leaf, one constant-1 leaf.
  const std::string text =
      R"({"format":"geotop-random-forest","version":1,"n_features":1,"params":{"n_trees":2,"min_samples_leaf":1,"seed":0},)"
      R"("trees":[[[-1,0,-1,-1,1]],[[-1,0,-1,-1,0]]]})";
  const auto model = ForestModel::from_json(text);
  EXPECT_EQ(model.predict(std::vector<double>{0.3}), 0);
}
