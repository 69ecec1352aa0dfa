#include "lamina/harness/experiment.hpp"

#include <chrono>
#include <cmath>

#include "lamina/kikai.hpp"
#include "lamina/layers.hpp"
#include "lamina/trees/tree_layer.hpp"

namespace lamina::harness {

using kaku::Criterion;
using kaku::IO;
using kaku::LearningMachine;
using kaku::Mode;
using kaku::Optimizer;
using layers::BatchNorm1d;
using layers::Dropout;
using layers::Linear;
using layers::Relu;
using layers::Sequential;

namespace {

using Layers = std::vector<std::unique_ptr<LearningMachine>>;

Optimizer opt(const ExperimentConfig& c) { return c.optimizer == "sgd" ? Optimizer::sgd(c.lr) : Optimizer::adam(c.lr); }

Sequential linear_block(std::size_t in, std::size_t out, Rng& rng) {
  Sequential s;
  s.add<Linear>(in, out, rng);
  return s;
}

Layers baseline(const ExperimentConfig& c, std::size_t in, std::size_t classes, Rng& root) {
  Layers out;
  Rng r1 = root.split("layer/0"), r2 = root.split("layer/1"), r3 = root.split("layer/2");
  Sequential l1 = linear_block(in, 128, r1);
  l1.add<Relu>();
  l1.add<BatchNorm1d>(128);
  Sequential l2 = linear_block(128, 32, r2);
  l2.add<Relu>();
  l2.add<BatchNorm1d>(32);
  out.push_back(std::make_unique<kikai::GradLearner>(std::move(l1), Criterion::sse(), opt(c)));
  out.push_back(std::make_unique<kikai::GradLearner>(std::move(l2), Criterion::sse(), opt(c)));
  out.push_back(std::make_unique<kikai::GradLearner>(linear_block(32, classes, r3), Criterion::cross_entropy(),
                                                     opt(c)));
  return out;
}

Layers decision_linear(const ExperimentConfig& c, std::size_t classes, Rng& root) {
  Layers out;
  out.push_back(std::make_unique<trees::TreeRegressorLearner>(32, c.tree_depth, c.capacity));
  Rng r = root.split("layer/1");
  Sequential head;
  head.add<BatchNorm1d>(32);
  head.add<Linear>(32, classes, r);
  head.add<Relu>();
  kikai::XUpdate xu;
  xu.step_size = c.x_step;
  xu.iterations = c.x_iterations;
  xu.criterion = Criterion::cross_entropy(kaku::Reduction::Sum);
  out.push_back(std::make_unique<kikai::GradLearner>(std::move(head), Criterion::cross_entropy(), opt(c),
                                                     xu));
  return out;
}

Layers least_squares_tp(const ExperimentConfig& c, std::size_t in, std::size_t classes, Rng& root) {
  Layers out;
  Rng r0 = root.split("layer/0");
  Sequential l1 = linear_block(in, 128, r0);
  l1.add<BatchNorm1d>(128);
  l1.add<Relu>();
  out.push_back(std::make_unique<kikai::GradLearner>(std::move(l1), Criterion::sse(), opt(c)));
  for (int i = 1; i <= 2; ++i) {
    Rng r = root.split("layer/" + std::to_string(i));
    Sequential post;
    post.add<BatchNorm1d>(128);
    post.add<Relu>();
    out.push_back(std::make_unique<kikai::LeastSquaresLearner>(Linear(128, 128, r), std::move(post), Criterion::sse(),
                                                               opt(c), c.lambda));
  }
  Rng r3 = root.split("layer/3");
  out.push_back(std::make_unique<kikai::LeastSquaresLearner>(Linear(128, classes, r3), Sequential{},
                                                             Criterion::cross_entropy(), opt(c), c.lambda));
  return out;
}

Layers linear_tp(const ExperimentConfig& c, std::size_t in, std::size_t classes, Rng& root) {
  // With alternation, the first layer trains with the forward phase (even
  // epochs) and rests while the reverse models train.
  auto gated = [&](std::unique_ptr<LearningMachine> m) -> std::unique_ptr<LearningMachine> {
    if (!c.alternate) return m;
    return std::make_unique<kikai::EpochGate>(std::move(m), false, true);
  };
  ExperimentConfig rc = c, hc = c;
  if (c.reverse_lr > 0.0) rc.lr = c.reverse_lr;
  if (c.hidden_lr > 0.0) hc.lr = c.hidden_lr;
  const Optimizer reverse_opt = opt(rc);
  Layers out;
  Rng r0 = root.split("layer/0");
  Sequential l1 = linear_block(in, 128, r0);
  l1.add<Relu>();
  out.push_back(gated(std::make_unique<kikai::GradLearner>(std::move(l1), Criterion::sse(), opt(hc))));
  for (int i = 1; i <= 2; ++i) {
    Rng r = root.split("layer/" + std::to_string(i));
    Rng rr = root.split("reverse/" + std::to_string(i));
    Sequential fwd = linear_block(128, 128, r);
    fwd.add<BatchNorm1d>(128);
    fwd.add<Relu>();
    Sequential rev;
    rev.add<Linear>(128, 128, rr);
    rev.add<BatchNorm1d>(128);
    rev.add<Relu>();
    rev.add<Linear>(128, 128, rr);
    rev.add<BatchNorm1d>(128);
    out.push_back(std::make_unique<kikai::TargetPropLearner>(std::move(fwd), Criterion::sse(), opt(hc),
                                                             std::move(rev), reverse_opt, c.alternate));
  }
  Rng r3 = root.split("layer/3");
  out.push_back(
      std::make_unique<kikai::GradLearner>(linear_block(128, classes, r3), Criterion::cross_entropy(), opt(c)));
  return out;
}

Layers fa(const ExperimentConfig& c, std::size_t in, std::size_t classes, Rng& root) {
  Layers out;
  Rng r0 = root.split("layer/0"), r1 = root.split("layer/1");
  Rng b0 = root.split("feedback/0"), b1 = root.split("feedback/1");
  out.push_back(std::make_unique<kikai::FALearner>(Linear(in, 32, r0), true, Criterion::sse(), opt(c), b0));
  out.push_back(std::make_unique<kikai::FALearner>(Linear(32, classes, r1), false, Criterion::cross_entropy(),
                                                   opt(c), b1));
  return out;
}

Layers dfa(const ExperimentConfig& c, std::size_t in, std::size_t classes, Rng& root) {
  std::vector<kikai::DFALearner> hidden;
  std::size_t width = in;
  for (int i = 0; i < 2; ++i) {
    Rng r = root.split("layer/" + std::to_string(i));
    Rng b = root.split("feedback/" + std::to_string(i));
    Sequential block = linear_block(width, 32, r);
    block.add<BatchNorm1d>(32);
    block.add<Relu>();
    hidden.emplace_back(std::move(block), classes, opt(c), b);
    width = 32;
  }
  Rng r2 = root.split("layer/2"), b2 = root.split("feedback/2");
  kikai::FALearner output(Linear(32, classes, r2), false, Criterion::cross_entropy(), opt(c), b2);
  Layers out;
  out.push_back(std::make_unique<kikai::DFANetwork>(std::move(hidden), std::move(output)));
  return out;
}

Layers neural_decision(const ExperimentConfig& c, std::size_t in, std::size_t classes, Rng& root) {
  Layers out;
  Rng r0 = root.split("layer/0");
  Sequential front;
  front.add<Dropout>(c.dropout_p, root.split("dropout/0"));
  front.add<Linear>(in, 256, r0);
  front.add<BatchNorm1d>(256);
  out.push_back(std::make_unique<kikai::GradLearner>(std::move(front), Criterion::mse(), opt(c)));
  out.push_back(std::make_unique<trees::TreeClassifierLearner>(classes, root.split("hill-climb"), c.tree_depth,
                                                               c.capacity, trees::HillClimbConfig{c.k}));
  return out;
}

void set_dropout(kikai::StackedLearner& stack, double p) {
  for (std::size_t i = 0; i < stack.size(); ++i) {
    auto* g = dynamic_cast<kikai::GradLearner*>(&stack.layer(i));
    if (g == nullptr) continue;
    for (std::size_t j = 0; j < g->module().size(); ++j)
      if (auto* d = dynamic_cast<Dropout*>(&g->module()[j])) d->set_p(p);
  }
}

/// A regression tree layer cannot produce anything before its first fit, so
/// it is fitted once on a fixed random projection of the first batch.
void warm_start(kikai::StackedLearner& stack, const Matrix& x, std::uint64_t seed) {
  auto* tree = dynamic_cast<trees::TreeRegressorLearner*>(&stack.layer(0));
  if (tree == nullptr || !tree->ensemble().empty()) return;
  Rng rng = Rng(seed).split("warm-start");
  const Matrix projection = gaussian(rng, x.cols(), tree->output_width(), 0.0, 1.0 / std::sqrt(double(x.cols())));
  tree->fit_once(x, matmul(x, projection));
}

}  // namespace

std::unique_ptr<kikai::StackedLearner> build_experiment(const ExperimentConfig& c, std::size_t input_dim,
                                                        std::size_t n_classes) {
  defaults_for(c.name);  // validates the name
  Rng root(c.seed);
  Layers layers;
  if (c.name == "baseline") {
    layers = baseline(c, input_dim, n_classes, root);
  } else if (c.name == "decision-linear") {
    layers = decision_linear(c, n_classes, root);
  } else if (c.name == "least-squares-tp") {
    layers = least_squares_tp(c, input_dim, n_classes, root);
  } else if (c.name == "linear-tp") {
    layers = linear_tp(c, input_dim, n_classes, root);
  } else if (c.name == "fa") {
    layers = fa(c, input_dim, n_classes, root);
  } else if (c.name == "dfa") {
    layers = dfa(c, input_dim, n_classes, root);
  } else {
    layers = neural_decision(c, input_dim, n_classes, root);
  }
  auto stack = std::make_unique<kikai::StackedLearner>(
      std::move(layers), Criterion::cross_entropy(),
      c.step_x_first ? kikai::StepOrder::StepXFirst : kikai::StepOrder::StepFirst);
  stack->set_diagnostics(c.diagnostics);
  return stack;
}

double accuracy(kikai::StackedLearner& stack, const Dataset& data) {
  if (data.size() == 0) return 0.0;
  const Mode saved = stack.mode();
  stack.set_mode(Mode::Eval);
  constexpr std::size_t chunk = 1000;
  std::size_t correct = 0;
  std::vector<std::size_t> rows;
  for (std::size_t start = 0; start < data.size(); start += chunk) {
    const std::size_t end = std::min(data.size(), start + chunk);
    rows.resize(end - start);
    for (std::size_t i = start; i < end; ++i) rows[i - start] = i;
    const auto predicted = argmax_rows(stack.infer(IO(gather_rows(data.x, rows))).f());
    for (std::size_t i = start; i < end; ++i)
      if (static_cast<double>(predicted[i - start]) == data.y(i, 0)) ++correct;
  }
  stack.set_mode(saved);
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

MetricsRecord run_experiment(const ExperimentConfig& c, const Split& data, const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  auto stack = build_experiment(c, data.train.x.cols(), data.train.n_classes);

  MetricsRecord record;
  record.experiment = c.name;
  record.seed = c.seed;
  record.config = settings(c);
  record.mad.resize(stack->size());
  if (c.diagnostics) {
    record.ger.resize(stack->size());
    record.ler.resize(stack->size());
  }
  record.initial_train_accuracy = accuracy(*stack, data.train);
  record.initial_test_accuracy = accuracy(*stack, data.test);

  Rng shuffle = Rng(c.seed).split("shuffle");
  const std::size_t n = data.train.size();
  for (int epoch = 1; epoch <= c.epochs; ++epoch) {
    stack->set_epoch(epoch);
    stack->set_mode(Mode::Train);
    if (c.dropout_final_p >= 0.0) {
      const double frac = c.epochs > 1 ? double(epoch - 1) / double(c.epochs - 1) : 1.0;
      set_dropout(*stack, c.dropout_p + (c.dropout_final_p - c.dropout_p) * frac);
    }
    EpochRecord er;
    er.epoch = epoch;
    er.batch_size = c.batch_size_for(epoch);
    const auto order = permutation(shuffle, n);
    double loss_sum = 0.0;
    // A trailing batch of one sample is skipped: batch statistics need two.
    for (std::size_t start = 0; start + 1 < n; start += er.batch_size) {
      const std::size_t end = std::min(n, start + er.batch_size);
      const std::span<const std::size_t> rows(order.data() + start, end - start);
      const Matrix xb = gather_rows(data.train.x, rows);
      const Matrix yb = gather_rows(data.train.y, rows);
      try {
        warm_start(*stack, xb, c.seed);
        const kikai::StepMetrics m = stack->train_step(IO(xb), IO(yb));
        loss_sum += m.loss;
        record.step_loss.push_back(m.loss);
        for (std::size_t l = 0; l < stack->size(); ++l) {
          record.mad[l].push_back(m.mad[l]);
          if (c.diagnostics) {
            record.ger[l].push_back(m.ger[l]);
            record.ler[l].push_back(m.ler[l]);
          }
        }
      } catch (const std::exception& e) {
        throw ExperimentError("experiment '" + c.name + "' epoch " + std::to_string(epoch) + " step " +
                              std::to_string(er.steps) + ": " + e.what());
      }
      ++er.steps;
    }
    er.mean_loss = er.steps ? loss_sum / double(er.steps) : 0.0;
    er.train_accuracy = accuracy(*stack, data.train);
    er.test_accuracy = accuracy(*stack, data.test);
    record.epochs.push_back(er);
    if (options.on_epoch) options.on_epoch(er);
  }
  if (options.timing) {
    record.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }
  return record;
}

}  // namespace lamina::harness
