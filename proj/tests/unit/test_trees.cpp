#include <gtest/gtest.h>

#include <cmath>

#include "lamina/errors.hpp"
#include "lamina/kikai.hpp"
#include "lamina/layers.hpp"
#include "lamina/trees/cart.hpp"
#include "lamina/trees/ensemble.hpp"
#include "lamina/trees/tree_layer.hpp"
#include "oracles.hpp"

using namespace lamina;
using namespace lamina::trees;

namespace {

CartConfig regression(int depth) {
  CartConfig c;
  c.max_depth = depth;
  return c;
}

CartConfig classification(int depth, std::size_t classes) {
  CartConfig c;
  c.task = TreeTask::Classification;
  c.max_depth = depth;
  c.n_classes = classes;
  return c;
}

std::vector<double> column(const Matrix& m, std::size_t j) {
  std::vector<double> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = m(i, j);
  return out;
}

/// Always predicts the same class.
class Constant : public Estimator {
 public:
  explicit Constant(double c) : c_(c) {}
  void fit(const Matrix&, const Matrix&) override {}
  Matrix predict(const Matrix& x) const override { return Matrix(x.rows(), 1, c_); }
  std::unique_ptr<Estimator> fresh() const override { return std::make_unique<Constant>(c_); }

 private:
  double c_;
};

/// Predicts the label it was last fitted on, for every row.
class Memo : public Estimator {
 public:
  void fit(const Matrix&, const Matrix& t) override { c_ = t(0, 0); }
  Matrix predict(const Matrix& x) const override { return Matrix(x.rows(), 1, c_); }
  std::unique_ptr<Estimator> fresh() const override { return std::make_unique<Memo>(); }

 private:
  double c_ = 0.0;
};

}  // namespace

// --- CART ---------------------------------------------------------------------

TEST(Cart, ConstantTargetsGiveASingleLeaf) {
  Rng rng(1);
  const Matrix x = gaussian(rng, 20, 3, 0.0, 1.0);
  const std::vector<double> t(20, 4.25);
  const CartTree tree = CartTree::fit(x, t, regression(5));
  EXPECT_EQ(tree.nodes().size(), 1u);
  EXPECT_EQ(tree.predict_row(x.row_span(3)), 4.25);
}

TEST(Cart, OneDimensionalStep) {
  const Matrix x{{1}, {2}, {3}, {10}, {11}, {12}};
  const std::vector<double> t{0, 0, 0, 5, 5, 5};
  const CartTree tree = CartTree::fit(x, t, regression(3));
  ASSERT_FALSE(tree.root().is_leaf());
  EXPECT_EQ(tree.root().feature, 0);
  EXPECT_EQ(tree.root().threshold, 6.5);
  EXPECT_EQ(tree.depth(), 1);
  EXPECT_EQ(tree.predict_row(std::vector<double>{6.5}), 0.0);
  EXPECT_EQ(tree.predict_row(std::vector<double>{6.6}), 5.0);
}

TEST(Cart, XorNeedsTwoLevels) {
  const Matrix x{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  const std::vector<double> t{0, 1, 1, 0};
  const CartTree tree = CartTree::fit(x, t, classification(2, 2));
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(tree.predict_row(x.row_span(i)), t[i]);
  EXPECT_EQ(tree.leaf_count(), 4u);
  // Depth 1 cannot separate it.
  const CartTree stump = CartTree::fit(x, t, classification(1, 2));
  int right = 0;
  for (std::size_t i = 0; i < 4; ++i) right += stump.predict_row(x.row_span(i)) == t[i];
  EXPECT_EQ(right, 2);
}

TEST(Cart, DepthZeroPredictsTheMean) {
  const Matrix x{{1}, {2}, {3}};
  const std::vector<double> t{1, 2, 6};
  EXPECT_EQ(CartTree::fit(x, t, regression(0)).predict_row(std::vector<double>{2}), 3.0);
}

TEST(Cart, ClassificationTiesGoToTheLowestClass) {
  const Matrix x{{1}, {1}};
  const std::vector<double> t{2, 1};
  EXPECT_EQ(CartTree::fit(x, t, classification(3, 3)).predict_row(std::vector<double>{1}), 1.0);
}

TEST(Cart, RegressionMatchesExhaustiveSearch) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const bool discrete = seed % 2 == 0;
    const Matrix x = oracle::random_features(rng, 3 + rng.below(18), 1 + rng.below(4), discrete);
    std::vector<double> t(x.rows());
    for (double& v : t) v = discrete ? static_cast<double>(rng.below(3)) : rng.normal();
    const CartTree tree = CartTree::fit(x, t, regression(1 + static_cast<int>(rng.below(4))));
    const auto mismatch = oracle::verify_tree(tree, x, t);
    EXPECT_FALSE(mismatch.has_value()) << "seed " << seed << ": " << *mismatch;
  }
}

TEST(Cart, ClassificationMatchesExhaustiveSearch) {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    Rng rng(seed);
    const Matrix x = oracle::random_features(rng, 3 + rng.below(18), 1 + rng.below(4), seed % 2 == 0);
    std::vector<double> t(x.rows());
    for (double& v : t) v = static_cast<double>(rng.below(3));
    const CartTree tree = CartTree::fit(x, t, classification(1 + static_cast<int>(rng.below(4)), 3));
    const auto mismatch = oracle::verify_tree(tree, x, t);
    EXPECT_FALSE(mismatch.has_value()) << "seed " << seed << ": " << *mismatch;
  }
}

TEST(Cart, MinSamplesSplitStopsGrowth) {
  const Matrix x{{1}, {2}, {3}};
  const std::vector<double> t{0, 1, 2};
  CartConfig c = regression(5);
  c.min_samples_split = 4;
  EXPECT_EQ(CartTree::fit(x, t, c).nodes().size(), 1u);
}

TEST(Cart, InputErrors) {
  const std::vector<double> none;
  EXPECT_THROW(CartTree::fit(Matrix(0, 2), none, regression(2)), EmptyInputError);
  const std::vector<double> two{0, 1};
  EXPECT_THROW(CartTree::fit(Matrix(3, 2), two, regression(2)), ShapeError);
  const std::vector<double> bad{0, 5, 1};
  EXPECT_THROW(CartTree::fit(Matrix(3, 2), bad, classification(2, 3)), IndexError);
}

TEST(MultiOutput, EachColumnMatchesASingleTree) {
  Rng rng(2);
  const Matrix x = gaussian(rng, 40, 5, 0.0, 1.0);
  const Matrix t = gaussian(rng, 40, 3, 0.0, 1.0);
  const auto model = MultiOutputRegressor::fit(x, t, 4);
  const Matrix p = model.predict(x);
  for (std::size_t j = 0; j < 3; ++j) {
    const CartTree single = CartTree::fit(x, column(t, j), regression(4));
    for (std::size_t i = 0; i < x.rows(); ++i) EXPECT_EQ(p(i, j), single.predict_row(x.row_span(i)));
  }
}

// --- temporal ensembles ----------------------------------------------------------

TEST(TemporalEnsemble, KeepsTheNewestNineInOrder) {
  TemporalEnsemble e(std::make_shared<Memo>(), Voting::Mean, 9);
  oracle::FifoModel fifo{9, {}, 0};
  for (int u = 0; u < 25; ++u) {
    e.update(Matrix(1, 1), Matrix{{static_cast<double>(u)}});
    fifo.push();
    ASSERT_EQ(e.size(), fifo.serials.size());
    for (std::size_t i = 0; i < e.size(); ++i) EXPECT_EQ(e.member_serial(i), fifo.serials[i]);
  }
  const auto preds = e.member_predictions(Matrix(1, 1));
  for (std::size_t i = 0; i < preds.size(); ++i) EXPECT_EQ(preds[i](0, 0), static_cast<double>(16 + i));
}

TEST(TemporalEnsemble, MajorityVote) {
  TemporalEnsemble e(std::make_shared<Memo>(), Voting::Majority, 9, 3);
  for (double c : {1.0, 1.0, 2.0}) e.update(Matrix(1, 1), Matrix{{c}});
  EXPECT_EQ(e.predict(Matrix(2, 1)), (Matrix{{1}, {1}}));
  const Matrix f = e.vote_fractions(Matrix(1, 1));
  EXPECT_NEAR(f(0, 1), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(f(0, 2), 1.0 / 3.0, 1e-15);
}

TEST(TemporalEnsemble, MajorityMatchesReference) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    TemporalEnsemble e(std::make_shared<Memo>(), Voting::Majority, 9, 4);
    std::vector<std::size_t> votes;
    const std::size_t n = 1 + rng.below(15);
    for (std::size_t u = 0; u < n; ++u) {
      const std::size_t c = rng.below(4);
      e.update(Matrix(1, 1), Matrix{{static_cast<double>(c)}});
      votes.push_back(c);
      if (votes.size() > 9) votes.erase(votes.begin());
    }
    EXPECT_EQ(e.predict(Matrix(1, 1))(0, 0), static_cast<double>(oracle::majority(votes, 4)));
  }
}

TEST(TemporalEnsemble, EmptyEnsembleCannotPredict) {
  TemporalEnsemble e(std::make_shared<Memo>(), Voting::Mean);
  EXPECT_THROW(e.predict(Matrix(1, 1)), EmptyInputError);
}

TEST(TemporalEnsemble, CapacityMustBePositive) {
  EXPECT_THROW(TemporalEnsemble(std::make_shared<Memo>(), Voting::Mean, 0), ConfigError);
}

TEST(TreeRegressorLearner, StepAddsAMember) {
  Rng rng(4);
  TreeRegressorLearner l(2, 3);
  kaku::State s;
  const kaku::IO x(gaussian(rng, 10, 3, 0.0, 1.0));
  EXPECT_EQ(l.forward(x, s).f(), Matrix(10, 2));
  l.step(x, kaku::IO(gaussian(rng, 10, 2, 0.0, 1.0)), s);
  EXPECT_EQ(l.ensemble().size(), 1u);
  EXPECT_THROW(l.step_x(x, x, s), ConfigError);
}

// --- hill climbing --------------------------------------------------------------

TEST(HillClimb, SingleCandidateIsReturnedAsIs) {
  Rng rng(5);
  layers::Sequential m;
  m.add<layers::Linear>(3, 4, rng);
  m.add<layers::Dropout>(0.5, rng.split("drop"));
  kikai::GradLearner incoming(m, kaku::Criterion::mse(), kaku::Optimizer::sgd(0.1));
  TemporalEnsemble e(std::make_shared<Constant>(1.0), Voting::Majority, 9, 2);
  e.update(Matrix(1, 4), Matrix{{1}});
  const kaku::IO x(gaussian(rng, 6, 3, 0.0, 1.0));
  Rng a(9), b(9);
  const kaku::IO got = hill_climb_step_x(e, incoming, x, Matrix(6, 1, 1.0), 1, a);
  EXPECT_EQ(got.f(), incoming.sample(x, b).f());
}

TEST(HillClimb, AllTiedPicksTheFirstCandidate) {
  EXPECT_EQ(select_candidates(Matrix(5, 7)), std::vector<std::size_t>(7, 0));
}

TEST(HillClimb, SelectionMatchesBruteForce) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix scores(1 + rng.below(8), 1 + rng.below(10));
    // Coarse values so ties are common.
    for (double& v : scores.data()) v = static_cast<double>(rng.below(4)) / 3.0;
    EXPECT_EQ(select_candidates(scores), oracle::brute_force_argmax(scores));
  }
}

TEST(HillClimb, SelectionIgnoresMonotoneRescaling) {
  Rng rng(7);
  const Matrix scores = gaussian(rng, 6, 9, 0.0, 1.0);
  Matrix shifted = scores;
  for (double& v : shifted.data()) v = 3.0 * v + 2.0;
  EXPECT_EQ(select_candidates(scores), select_candidates(shifted));
}

TEST(HillClimb, ScoresCountAgreeingMembers) {
  TemporalEnsemble e(std::make_shared<Memo>(), Voting::Majority, 9, 3);
  for (double c : {0.0, 2.0, 2.0, 1.0}) e.update(Matrix(1, 1), Matrix{{c}});
  const std::vector<double> labels{2, 0, 1};
  const Matrix s = candidate_scores(e, Matrix(6, 1), labels);
  ASSERT_EQ(s.rows(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_EQ(s(k, 0), 0.5);
    EXPECT_EQ(s(k, 1), 0.25);
    EXPECT_EQ(s(k, 2), 0.25);
  }
}

TEST(HillClimb, KBelowOneRejected) {
  EXPECT_THROW(TreeClassifierLearner(10, Rng(8), 10, 9, HillClimbConfig{0}), ConfigError);
  Rng rng(8);
  layers::Sequential m;
  m.add<layers::Linear>(2, 2, rng);
  kikai::GradLearner incoming(m, kaku::Criterion::mse(), kaku::Optimizer::sgd(0.1));
  TemporalEnsemble e(std::make_shared<Constant>(0.0), Voting::Majority, 9, 2);
  EXPECT_THROW(hill_climb_step_x(e, incoming, kaku::IO(Matrix(2, 2)), Matrix(2, 1), 0, rng), ConfigError);
}

TEST(HillClimb, UnboundClassifierLayerIsAnOrderingError) {
  TreeClassifierLearner l(3, Rng(9));
  kaku::State s;
  const kaku::IO x(Matrix(2, 2));
  EXPECT_THROW(l.step_x(x, kaku::IO(Matrix(2, 1)), s), OrderingError);
}
