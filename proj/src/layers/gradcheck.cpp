#include "lamina/layers/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "lamina/layers/activation.hpp"
#include "lamina/layers/batch_norm.hpp"
#include "lamina/layers/dropout.hpp"
#include "lamina/layers/linear.hpp"
#include "lamina/layers/sequential.hpp"

namespace lamina::layers {

namespace {

constexpr double kZeroGradientFloor = 1e-4;

double projected(const Matrix& y, const Matrix& r) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += y.data()[i] * r.data()[i];
  return s;
}

// Relative error between `analytic` and central differences of f_at over
// `count` coordinates.
GradCheckEntry compare(const std::string& what, const Matrix& analytic, std::size_t count,
                       const std::function<double(std::size_t, double)>& f_at, double f0, double h) {
  double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double fp = f_at(i, h);
    const double fm = f_at(i, -h);
    const double curvature = std::abs(fp - 2.0 * f0 + fm);
    const double slope = std::abs(fp - fm);
    // A smooth function has a second difference of order h²; a kink makes it
    // order h.
    if (curvature > 1e-3 * std::max(slope, 1e-12) && curvature > 1e-9) {
      ++skipped;
      continue;
    }
    const double num = (fp - fm) / (2.0 * h);
    const double an = analytic.data()[i];
    diff2 += (an - num) * (an - num);
    a2 += an * an;
    n2 += num * num;
  }
  // Floor for gradients that are zero by construction (a bias feeding batch
  // normalization), where only rounding noise of order 1e-11 remains.
  const double denom = std::max(std::sqrt(a2) + std::sqrt(n2), kZeroGradientFloor);
  return {what, std::sqrt(diff2) / denom, skipped};
}

}  // namespace

double GradCheckReport::max_relative_error() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.relative_error);
  return m;
}

GradCheckReport check_gradients(const Layer& layer, const Matrix& x, Mode mode, Rng& rng, double h) {
  const std::unique_ptr<Layer> pristine = layer.clone();

  std::unique_ptr<Layer> analytic_layer = pristine->clone();
  const Matrix y = analytic_layer->forward(x, mode);
  const Matrix r = gaussian(rng, y.rows(), y.cols(), 0.0, 1.0);
  auto analytic_params = analytic_layer->params();
  for (Param* p : analytic_params) p->zero_grad();
  const Matrix dx = analytic_layer->backward(r);

  const double f0 = projected(pristine->clone()->forward(x, mode), r);
  GradCheckReport report;

  report.entries.push_back(compare(
      "input", dx, x.size(),
      [&](std::size_t i, double delta) {
        Matrix xp = x;
        xp.data()[i] += delta;
        return projected(pristine->clone()->forward(xp, mode), r);
      },
      f0, h));

  for (std::size_t k = 0; k < analytic_params.size(); ++k) {
    report.entries.push_back(compare(
        "param[" + std::to_string(k) + "]", analytic_params[k]->grad, analytic_params[k]->value.size(),
        [&](std::size_t i, double delta) {
          auto probe = pristine->clone();
          probe->params()[k]->value.data()[i] += delta;
          return projected(probe->forward(x, mode), r);
        },
        f0, h));
  }
  return report;
}

bool GradCheckSuite::passed() const {
  return std::all_of(cases.begin(), cases.end(), [&](const GradCheckCase& c) { return c.max_relative_error < tolerance; });
}

namespace {

// Builds a layer (or composition) for an input width, returning its output width.
using Builder = std::function<std::unique_ptr<Layer>(std::size_t in, std::size_t out, Rng& rng)>;

template <typename... Parts>
std::string join(Parts... parts) {
  std::string s;
  ((s += (s.empty() ? "" : ">") + std::string(parts)), ...);
  return s;
}

}  // namespace

GradCheckSuite run_gradcheck_suite(std::uint64_t seed, std::size_t shapes, double tolerance, double h) {
  const std::vector<std::pair<std::string, Builder>> builders{
      {"Linear", [](std::size_t in, std::size_t out, Rng& r) { return std::make_unique<Linear>(in, out, r); }},
      {"Relu", [](std::size_t, std::size_t, Rng&) { return std::make_unique<Relu>(); }},
      {"Dropout", [](std::size_t, std::size_t, Rng& r) { return std::make_unique<Dropout>(0.3, r.split("mask")); }},
      {"BatchNorm1d",
       [](std::size_t in, std::size_t, Rng& r) {
         auto bn = std::make_unique<BatchNorm1d>(in);
         // Non-trivial affine and running statistics.
         auto ps = bn->params();
         for (Param* p : ps)
           for (double& v : p->value.data()) v += r.uniform(-0.5, 0.5);
         return bn;
       }},
      {join("Linear", "Relu", "BatchNorm1d"),
       [](std::size_t in, std::size_t out, Rng& r) {
         auto s = std::make_unique<Sequential>();
         s->add<Linear>(in, out, r);
         s->add<Relu>();
         s->add<BatchNorm1d>(out);
         return s;
       }},
      {join("Linear", "BatchNorm1d", "Relu", "Linear"),
       [](std::size_t in, std::size_t out, Rng& r) {
         auto s = std::make_unique<Sequential>();
         s->add<Linear>(in, out, r);
         s->add<BatchNorm1d>(out);
         s->add<Relu>();
         s->add<Linear>(out, in, r);
         return s;
       }},
      {join("Dropout", "Linear", "BatchNorm1d"),
       [](std::size_t in, std::size_t out, Rng& r) {
         auto s = std::make_unique<Sequential>();
         s->add<Dropout>(0.5, r.split("mask"));
         s->add<Linear>(in, out, r);
         s->add<BatchNorm1d>(out);
         return s;
       }},
  };

  GradCheckSuite suite;
  suite.tolerance = tolerance;
  Rng root(seed);
  for (std::size_t k = 0; k < shapes; ++k) {
    Rng rng = root.split(k);
    const std::size_t b = 3 + rng.below(6), in = 2 + rng.below(8), out = 2 + rng.below(8);
    for (const auto& [name, build] : builders) {
      for (Mode mode : {Mode::Train, Mode::Eval}) {
        Rng local = rng.split(name);
        std::unique_ptr<Layer> layer = build(in, out, local);
        if (mode == Mode::Eval) {
          // Move running statistics away from their initial values first.
          for (int i = 0; i < 3; ++i) layer->forward(gaussian(local, b, in, 0.5, 2.0), Mode::Train);
        }
        const Matrix x = gaussian(local, b, in, 0.0, 1.0);
        const GradCheckReport report = check_gradients(*layer, x, mode, local, h);
        suite.cases.push_back({name, mode == Mode::Train ? "train" : "eval",
                               std::to_string(b) + "x" + std::to_string(in), report.max_relative_error()});
      }
    }
  }
  return suite;
}

}  // namespace lamina::layers
