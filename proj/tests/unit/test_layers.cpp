#include <gtest/gtest.h>

#include <cmath>

#include "lamina/errors.hpp"
#include "lamina/layers.hpp"
#include "lamina/layers/gradcheck.hpp"

using namespace lamina;
using namespace lamina::layers;

TEST(Linear, IdentityWeightsPassThrough) {
  Linear l(Matrix::identity(3), Matrix(1, 3));
  const Matrix x{{1, -2, 3}, {0.5, 0, 4}};
  EXPECT_EQ(l.forward(x, Mode::Train), x);
}

TEST(Linear, ScalarChainRule) {
  Linear l(Matrix{{3.0}}, Matrix{{0.0}});
  l.forward(Matrix{{2.0}}, Mode::Train);
  EXPECT_EQ(l.backward(Matrix{{1.5}}), (Matrix{{4.5}}));
}

TEST(Linear, ZeroUpstreamLeavesBuffers) {
  Rng rng(1);
  Linear l(4, 3, rng);
  l.forward(gaussian(rng, 5, 4, 0.0, 1.0), Mode::Train);
  EXPECT_EQ(l.backward(Matrix(5, 3)), Matrix(5, 4));
  EXPECT_EQ(l.weight().grad, Matrix(3, 4));
  EXPECT_EQ(l.bias().grad, Matrix(1, 3));
}

TEST(Linear, BackwardBeforeForward) {
  Rng rng(2);
  Linear l(2, 2, rng);
  EXPECT_THROW(l.backward(Matrix(1, 2)), OrderingError);
}

TEST(Linear, WrongInputWidth) {
  Rng rng(3);
  Linear l(3, 2, rng);
  EXPECT_THROW(l.forward(Matrix(2, 4), Mode::Train), ShapeError);
}

TEST(Relu, Definitional) {
  Relu r;
  EXPECT_EQ(r.forward(Matrix{{-1, 0, 2}}, Mode::Train), (Matrix{{0, 0, 2}}));
  EXPECT_EQ(r.backward(Matrix{{5, 5, 5}}), (Matrix{{0, 0, 5}}));
}

TEST(Relu, BackwardBeforeForward) {
  Relu r;
  EXPECT_THROW(r.backward(Matrix(1, 1)), OrderingError);
}

TEST(Dropout, ZeroProbabilityIsIdentity) {
  Dropout d(0.0, Rng(4));
  const Matrix x{{1, 2, 3}};
  EXPECT_EQ(d.forward(x, Mode::Train), x);
}

TEST(Dropout, EvalIsIdentity) {
  Dropout d(0.7, Rng(5));
  Rng rng(6);
  const Matrix x = gaussian(rng, 4, 6, 0.0, 1.0);
  EXPECT_EQ(d.forward(x, Mode::Eval), x);
}

TEST(Dropout, InvertedScalingKeepsExpectation) {
  Dropout d(0.4, Rng(7));
  const Matrix y = d.forward(Matrix(200, 500, 1.0), Mode::Train);
  for (double v : y.data()) EXPECT_TRUE(v == 0.0 || std::abs(v - 1.0 / 0.6) < 1e-15);
  const double mean = sum(y) / static_cast<double>(y.size());
  EXPECT_NEAR(mean, 1.0, 4.0 * std::sqrt(0.4 / 0.6 / y.size()));
}

TEST(Dropout, InvalidProbability) {
  EXPECT_THROW(Dropout(1.0, Rng(8)), ConfigError);
  EXPECT_THROW(Dropout(-0.1, Rng(8)), ConfigError);
}

TEST(BatchNorm, TrainOutputIsStandardized) {
  Rng rng(9);
  BatchNorm1d bn(4);
  const Matrix y = bn.forward(gaussian(rng, 32, 4, 3.0, 5.0), Mode::Train);
  for (std::size_t j = 0; j < 4; ++j) {
    double mean = 0.0, var = 0.0;
    for (std::size_t i = 0; i < 32; ++i) mean += y(i, j) / 32.0;
    for (std::size_t i = 0; i < 32; ++i) var += (y(i, j) - mean) * (y(i, j) - mean) / 32.0;
    EXPECT_NEAR(mean, 0.0, 1e-9);
    // eps 1e-5 against a variance of about 25.
    EXPECT_NEAR(var, 1.0, 1e-6);
  }
}

TEST(BatchNorm, RunningStatisticsFollowMomentum) {
  const Matrix x{{1, 10}, {3, 14}};
  BatchNorm1d bn(2);
  bn.forward(x, Mode::Train);
  // mean {2, 12}; unbiased variance {2, 8}.
  EXPECT_NEAR(bn.running_mean()(0, 0), 0.2, 1e-15);
  EXPECT_NEAR(bn.running_mean()(0, 1), 1.2, 1e-15);
  EXPECT_NEAR(bn.running_var()(0, 0), 0.9 + 0.2, 1e-15);
  EXPECT_NEAR(bn.running_var()(0, 1), 0.9 + 0.8, 1e-15);
}

TEST(BatchNorm, EvalUsesRunningStatistics) {
  BatchNorm1d bn(1);
  const Matrix y = bn.forward(Matrix{{2.0}, {4.0}}, Mode::Eval);
  EXPECT_NEAR(y(0, 0), 2.0 / std::sqrt(1.0 + 1e-5), 1e-12);
  EXPECT_NEAR(y(1, 0), 4.0 / std::sqrt(1.0 + 1e-5), 1e-12);
}

TEST(BatchNorm, BackwardBeforeForward) {
  BatchNorm1d bn(2);
  EXPECT_THROW(bn.backward(Matrix(2, 2)), OrderingError);
}

TEST(Sequential, ComposesInOrder) {
  Rng rng(10);
  Sequential s;
  auto& l = s.add<Linear>(3, 2, rng);
  s.add<Relu>();
  const Matrix x = gaussian(rng, 4, 3, 0.0, 1.0);
  Matrix expected = l.infer(x, Mode::Train);
  for (double& v : expected.data()) v = std::max(v, 0.0);
  EXPECT_EQ(s.forward(x, Mode::Train), expected);
}

TEST(Sequential, CopyIsDeep) {
  Rng rng(11);
  Sequential s;
  s.add<Linear>(2, 2, rng);
  Sequential c = s;
  c.params()[0]->value(0, 0) += 1.0;
  EXPECT_NE(c.params()[0]->value, s.params()[0]->value);
}

TEST(GradCheck, EveryLayerOnFiveBySeven) {
  Rng rng(12);
  std::vector<std::unique_ptr<Layer>> layers;
  layers.push_back(std::make_unique<Linear>(7, 4, rng));
  layers.push_back(std::make_unique<Relu>());
  layers.push_back(std::make_unique<Dropout>(0.3, rng.split("d")));
  layers.push_back(std::make_unique<BatchNorm1d>(7));
  for (const auto& layer : layers) {
    for (Mode mode : {Mode::Train, Mode::Eval}) {
      const Matrix x = gaussian(rng, 5, 7, 0.0, 1.0);
      const GradCheckReport r = check_gradients(*layer, x, mode, rng);
      EXPECT_LT(r.max_relative_error(), 1e-5) << layer->name();
    }
  }
}

TEST(GradCheck, SuitePassesOnTenShapes) {
  const GradCheckSuite suite = run_gradcheck_suite(0, 10);
  EXPECT_TRUE(suite.passed());
  EXPECT_GE(suite.cases.size(), 10u * 7u * 2u);
}

TEST(GradCheck, DetectsABrokenBackward) {
  // A layer whose backward is off by a factor must fail the check.
  class Broken : public Linear {
   public:
    using Linear::Linear;
    Matrix backward(const Matrix& upstream) override { return 1.01 * Linear::backward(upstream); }
    std::unique_ptr<Layer> clone() const override { return std::make_unique<Broken>(*this); }
  };
  Rng rng(13);
  Broken b(3, 2, rng);
  EXPECT_GT(check_gradients(b, gaussian(rng, 4, 3, 0.0, 1.0), Mode::Train, rng).max_relative_error(), 1e-3);
}
