#include <cmath>

#include <gtest/gtest.h>

#include "gradcheck.hpp"
#include "solarmend/autodiff.hpp"

using namespace solarmend;
using solarmend::testing::gradient_error;
using solarmend::testing::project;
using solarmend::testing::random_tensor;

namespace {

constexpr double kGradTol = 1e-4;

TEST(Tensor, RejectsDataShapeMismatch) {
  EXPECT_THROW(Tensor(Shape{2, 3}, std::vector<double>(5, 0.0)), DimensionError);
  Tensor t(Shape{2, 3}, 1.5);
  EXPECT_EQ(t.size(), 6u);
  EXPECT_THROW(t.reshaped({4}), DimensionError);
  EXPECT_EQ(t.reshaped({3, 2}).shape(), (Shape{3, 2}));
}

TEST(Conv1d, HandComputedOutput) {
  Tape tape;
  Var x = tape.constant(Tensor(Shape{4, 1}, {1, 2, 3, 4}));
  Var k = tape.constant(Tensor(Shape{1, 1, 4}, {1, 1, 1, 1}));
  const Tensor y = conv1d(x, k, 2, 1).value();
  ASSERT_EQ(y.shape(), (Shape{2, 1}));
  EXPECT_DOUBLE_EQ(y[0], 6.0);
  EXPECT_DOUBLE_EQ(y[1], 9.0);
}

TEST(Conv1d, ZeroInputGivesZero) {
  Rng rng(1);
  Tape tape;
  Var x = tape.constant(Tensor(Shape{10, 3}, 0.0));
  Var k = tape.constant(random_tensor({5, 3, 4}, rng));
  for (double v : conv1d(x, k, 2, 1).value().storage()) EXPECT_EQ(v, 0.0);
  Var xt = tape.constant(Tensor(Shape{6, 5}, 0.0));
  Var kt = tape.constant(random_tensor({5, 2, 4}, rng));
  for (double v : conv1d_transpose(xt, kt, 2, 1).value().storage()) EXPECT_EQ(v, 0.0);
}

TEST(Conv1d, LengthFormulas) {
  EXPECT_EQ(conv1d_output_length(288, 4, 2, 1), 144u);
  EXPECT_EQ(conv1d_transpose_output_length(144, 4, 2, 1), 288u);
  for (std::size_t len = 4; len <= 400; len += 2) {
    EXPECT_EQ(conv1d_transpose_output_length(conv1d_output_length(len, 4, 2, 1), 4, 2, 1), len);
  }
  EXPECT_THROW(conv1d_output_length(1, 4, 2, 0), DimensionError);
  EXPECT_THROW(conv1d_output_length(8, 4, 0, 1), DimensionError);
}

TEST(Conv1d, ShapeErrors) {
  Tape tape;
  Var x = tape.constant(Tensor(Shape{8, 2}));
  Var k = tape.constant(Tensor(Shape{3, 1, 4}));
  EXPECT_THROW(conv1d(x, k, 2, 1), DimensionError);
  Var kt = tape.constant(Tensor(Shape{3, 1, 4}));
  EXPECT_THROW(conv1d_transpose(x, kt, 2, 1), DimensionError);
  Var v = tape.constant(Tensor(Shape{8}));
  EXPECT_THROW(conv1d(v, k, 2, 1), DimensionError);
}

// <conv1d(x, W), y> == <x, conv1d_transpose(y, W)> with the same kernel tensor.
TEST(Conv1d, TransposeIsAdjoint) {
  Rng rng(7);
  for (std::size_t nodes : {0u, 3u}) {
    Tape tape;
    const Shape xs = nodes ? Shape{12, nodes, 3} : Shape{12, 3};
    const Shape ys = nodes ? Shape{6, nodes, 5} : Shape{6, 5};
    const Tensor xv = random_tensor(xs, rng), yv = random_tensor(ys, rng);
    Var w = tape.constant(random_tensor({5, 3, 4}, rng));
    const Tensor cx = conv1d(tape.constant(xv), w, 2, 1).value();
    const Tensor ty = conv1d_transpose(tape.constant(yv), w, 2, 1).value();
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < cx.size(); ++i) lhs += cx[i] * yv[i];
    for (std::size_t i = 0; i < ty.size(); ++i) rhs += xv[i] * ty[i];
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(Conv1d, NodesAreIndependent) {
  Rng rng(3);
  Tape tape;
  Tensor x = random_tensor({8, 4, 2}, rng);
  Var k = tape.constant(random_tensor({3, 2, 4}, rng));
  const Tensor y = conv1d(tape.constant(x), k, 2, 1).value();
  for (std::size_t node = 0; node < 4; ++node) {
    Tensor xi(Shape{8, 2});
    for (std::size_t t = 0; t < 8; ++t)
      for (std::size_t c = 0; c < 2; ++c) xi.at(t, c) = x.at(t, node, c);
    const Tensor yi = conv1d(tape.constant(xi), k, 2, 1).value();
    for (std::size_t t = 0; t < 4; ++t)
      for (std::size_t c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(yi.at(t, c), y.at(t, node, c));
  }
}

TEST(Elementwise, Values) {
  Tape tape;
  Var a = tape.constant(Tensor::from({2, 3}));
  Var b = tape.constant(Tensor::from({4, 5}));
  const Tensor h = hadamard(a, b).value();
  EXPECT_EQ(h[0], 8.0);
  EXPECT_EQ(h[1], 15.0);
  const Tensor s = sigmoid(tape.constant(Tensor::from({0.0, 1.0}))).value();
  EXPECT_EQ(s[0], 0.5);
  EXPECT_NEAR(s[1], 0.73106, 1e-5);
  EXPECT_EQ(add(a, b).value()[1], 8.0);
  EXPECT_EQ(scale(a, -2.0).value()[0], -4.0);
  EXPECT_THROW(add(a, tape.constant(Tensor::from({1, 2, 3}))), DimensionError);
  EXPECT_THROW(hadamard(a, tape.constant(Tensor::from({1}))), DimensionError);
}

TEST(Elementwise, SigmoidSaturatesWithoutOverflow) {
  EXPECT_EQ(sigmoid_value(-800.0), 0.0);
  EXPECT_EQ(sigmoid_value(800.0), 1.0);
}

TEST(Mse, Values) {
  Tape tape;
  auto v = [&](std::initializer_list<double> x) { return tape.constant(Tensor::from(x)); };
  EXPECT_EQ(mse(v({1, 2}), v({1, 2})).value().item(), 0.0);
  EXPECT_EQ(mse(v({0, 0}), v({1, 1})).value().item(), 1.0);
  EXPECT_EQ(mse(v({0, 1}), v({1, 1})).value().item(), 0.5);
  EXPECT_THROW(mse(tape.constant(Tensor(Shape{0})), tape.constant(Tensor(Shape{0}))), DimensionError);
}

TEST(Backward, ScalarSquare) {
  Tape tape;
  Var p = tape.parameter(Tensor::from({1.25}));
  Var c = tape.constant(Tensor::from({4.0}));
  tape.backward(mse(p, c));
  EXPECT_DOUBLE_EQ(tape.grad(p)[0], 2.0 * (1.25 - 4.0));
}

TEST(Backward, UnusedParameterHasZeroGradient) {
  Tape tape;
  Var p = tape.parameter(Tensor::from({1.0, 2.0}));
  Var unused = tape.parameter(Tensor::from({3.0}));
  tape.backward(mse(p, tape.constant(Tensor::from({0.0, 0.0}))));
  EXPECT_EQ(tape.grad(unused)[0], 0.0);
}

TEST(Backward, RejectsNonScalarLoss) {
  Tape tape;
  Var p = tape.parameter(Tensor::from({1.0, 2.0}));
  EXPECT_THROW(tape.backward(p), DimensionError);
}

TEST(Backward, SharedInputAccumulates) {
  Rng rng(5);
  const Tensor xv = random_tensor({6}, rng);
  Tape shared;
  Var x = shared.parameter(xv);
  Var y = add(sigmoid(x), tanh(x));
  shared.backward(project(shared, y, 11));

  // duplicate construction: two independent leaves, gradients summed by hand
  Tape dup;
  Var x1 = dup.parameter(xv), x2 = dup.parameter(xv);
  Var y2 = add(sigmoid(x1), tanh(x2));
  dup.backward(project(dup, y2, 11));
  const Tensor g = shared.grad(x), g1 = dup.grad(x1), g2 = dup.grad(x2);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(g[i], g1[i] + g2[i]);
}

TEST(Backward, NonFiniteForwardIsAnError) {
  Tape tape;
  Var a = tape.parameter(Tensor::from({1e300}));
  EXPECT_THROW(hadamard(a, a), NumericError);
  EXPECT_THROW(tape.constant(Tensor::from({std::nan("")})), NumericError);
}

TEST(Backward, Deterministic) {
  Rng rng(9);
  const Tensor x = random_tensor({10, 2, 3}, rng), k = random_tensor({4, 3, 4}, rng);
  auto run = [&] {
    Tape tape;
    Var xv = tape.parameter(x), kv = tape.parameter(k);
    Var loss = project(tape, sigmoid(conv1d(xv, kv, 2, 1)), 4);
    tape.backward(loss);
    return std::make_pair(loss.value().item(), tape.grad(kv).storage());
  };
  EXPECT_EQ(run(), run());
}

// Finite-difference suite over every differentiable op.
class GradientSuite : public ::testing::TestWithParam<int> {};

TEST_P(GradientSuite, ElementwiseOps) {
  Rng rng(100 + GetParam());
  const std::vector<Tensor> in{random_tensor({3, 4}, rng), random_tensor({3, 4}, rng)};
  EXPECT_LT(gradient_error([](Tape& t, const std::vector<Var>& v) { return project(t, add(v[0], v[1]), 1); }, in),
            kGradTol);
  EXPECT_LT(gradient_error([](Tape& t, const std::vector<Var>& v) { return project(t, hadamard(v[0], v[1]), 2); },
                           in),
            kGradTol);
  EXPECT_LT(gradient_error([](Tape& t, const std::vector<Var>& v) { return project(t, sigmoid(v[0]), 3); }, in),
            kGradTol);
  EXPECT_LT(gradient_error([](Tape& t, const std::vector<Var>& v) { return project(t, tanh(v[0]), 4); }, in),
            kGradTol);
  EXPECT_LT(gradient_error([](Tape& t, const std::vector<Var>& v) { return project(t, scale(v[1], -1.7), 5); }, in),
            kGradTol);
}

TEST_P(GradientSuite, BiasAndMatmul) {
  Rng rng(200 + GetParam());
  const std::vector<Tensor> in{random_tensor({5, 2, 3}, rng), random_tensor({3}, rng)};
  EXPECT_LT(gradient_error(
                [](Tape& t, const std::vector<Var>& v) { return project(t, add_channel_bias(v[0], v[1]), 6); }, in),
            kGradTol);
  const std::vector<Tensor> mm{random_tensor({4, 3}, rng), random_tensor({3, 5}, rng)};
  EXPECT_LT(gradient_error([](Tape& t, const std::vector<Var>& v) { return project(t, matmul(v[0], v[1]), 7); }, mm),
            kGradTol);
}

TEST_P(GradientSuite, Convolutions) {
  Rng rng(300 + GetParam());
  const std::vector<Tensor> c1{random_tensor({12, 2}, rng), random_tensor({3, 2, 4}, rng)};
  EXPECT_LT(gradient_error([](Tape& t, const std::vector<Var>& v) { return project(t, conv1d(v[0], v[1], 2, 1), 8); },
                           c1),
            kGradTol);
  const std::vector<Tensor> c3{random_tensor({8, 3, 2}, rng), random_tensor({2, 2, 3}, rng)};
  EXPECT_LT(gradient_error([](Tape& t, const std::vector<Var>& v) { return project(t, conv1d(v[0], v[1], 1, 2), 9); },
                           c3),
            kGradTol);
  const std::vector<Tensor> t1{random_tensor({6, 3}, rng), random_tensor({3, 2, 4}, rng)};
  EXPECT_LT(gradient_error(
                [](Tape& t, const std::vector<Var>& v) { return project(t, conv1d_transpose(v[0], v[1], 2, 1), 10); },
                t1),
            kGradTol);
  const std::vector<Tensor> t3{random_tensor({5, 2, 2}, rng), random_tensor({2, 3, 4}, rng)};
  EXPECT_LT(gradient_error(
                [](Tape& t, const std::vector<Var>& v) { return project(t, conv1d_transpose(v[0], v[1], 2, 1), 11); },
                t3),
            kGradTol);
}

TEST_P(GradientSuite, Losses) {
  Rng rng(400 + GetParam());
  const std::vector<Tensor> in{random_tensor({7}, rng), random_tensor({7}, rng)};
  EXPECT_LT(gradient_error([](Tape&, const std::vector<Var>& v) { return mse(v[0], v[1]); }, in), kGradTol);
  const Tensor w = random_tensor({7}, rng, 0.0, 1.0);
  EXPECT_LT(gradient_error([&](Tape&, const std::vector<Var>& v) { return weighted_mse(v[0], v[1], w); }, in),
            kGradTol);
}

INSTANTIATE_TEST_SUITE_P(Randomized, GradientSuite, ::testing::Range(0, 5));

TEST(Adam, ZeroGradientLeavesParamsUnchanged) {
  std::vector<Tensor> p{Tensor::from({1.0, -2.0})};
  AdamState s;
  adam_step(p, {Tensor(Shape{2}, 0.0)}, s);
  EXPECT_EQ(p[0][0], 1.0);
  EXPECT_EQ(p[0][1], -2.0);
  EXPECT_EQ(s.step(), 1u);
  adam_step(p, {Tensor(Shape{2}, 0.0)}, s);
  EXPECT_EQ(s.step(), 2u);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  // bias-corrected first step is lr * g / (|g| + eps) per coordinate
  std::vector<Tensor> p{Tensor::from({0.0, 0.0})};
  AdamState s(AdamConfig{0.01, 0.0});
  adam_step(p, {Tensor::from({3.0, -0.5})}, s);
  EXPECT_NEAR(p[0][0], -0.01 * 3.0 / (3.0 + 1e-8), 1e-15);
  EXPECT_NEAR(p[0][1], 0.01 * 0.5 / (0.5 + 1e-8), 1e-15);
}

TEST(Adam, InverseTimeDecay) {
  AdamState s(AdamConfig{1e-3, 0.02});
  EXPECT_DOUBLE_EQ(s.learning_rate(0), 1e-3);
  EXPECT_DOUBLE_EQ(s.learning_rate(10), 1e-3 / 1.2);
}

TEST(Adam, MinimizesQuadratic) {
  std::vector<Tensor> p{Tensor::from({0.0})};
  AdamState s(AdamConfig{0.01, 0.0});
  int steps = 0;
  for (; steps < 5000 && std::abs(p[0][0] - 3.0) >= 1e-3; ++steps) {
    Tape tape;
    Var x = tape.parameter(p[0]);
    tape.backward(mse(x, tape.constant(Tensor::from({3.0}))));
    adam_step(p, {tape.grad(x)}, s);
  }
  EXPECT_LT(std::abs(p[0][0] - 3.0), 1e-3);
  EXPECT_LE(steps, 5000);
}

TEST(Adam, RejectsNonFiniteGradient) {
  std::vector<Tensor> p{Tensor::from({0.0})};
  AdamState s;
  EXPECT_THROW(adam_step(p, {Tensor::from({std::nan("")})}, s), NumericError);
  EXPECT_THROW(AdamState(AdamConfig{1e-3, 0.0, 1.0, 0.999}), Error);
}

}  // namespace
