#include "faberframe/corpus.hpp"

#include <cmath>
#include <deque>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "faberframe/rng.hpp"

namespace faberframe {

std::string CorpusFunction::regularity_label() const {
  switch (tag) {
    case Regularity::Affine:
      return "affine";
    case Regularity::Lipschitz:
      return "lipschitz(" + std::to_string(lipschitz) + ")";
    case Regularity::Hoelder:
      return "hoelder(" + std::to_string(hoelder_alpha) + "," +
             std::to_string(hoelder_c) + ")";
    case Regularity::Continuous:
      return "continuous";
  }
  return "?";
}

double takagi(double x, int depth) {
  double sum = 0.0;
  for (int k = 0; k <= depth; ++k) {
    const double y = std::ldexp(x, k);
    sum += std::ldexp(std::abs(y - std::nearbyint(y)), -k);
  }
  return sum;
}

std::vector<CorpusFunction> builtin_corpus(std::uint64_t seed) {
  using R = CorpusFunction::Regularity;
  std::vector<CorpusFunction> corpus;

  corpus.push_back({"identity", [](double x) { return x; }, R::Affine, 1.0, 0, 0});
  corpus.push_back(
      {"one_minus_x", [](double x) { return 1.0 - x; }, R::Affine, 1.0, 0, 0});
  corpus.push_back({"const1", [](double) { return 1.0; }, R::Affine, 0.0, 0, 0});
  corpus.push_back({"const0", [](double) { return 0.0; }, R::Affine, 0.0, 0, 0});
  corpus.push_back(
      {"square", [](double x) { return x * x; }, R::Lipschitz, 2.0, 0, 0});
  corpus.push_back({"sin_pi",
                    [](double x) { return std::sin(std::numbers::pi * x); },
                    R::Lipschitz, std::numbers::pi, 0, 0});
  corpus.push_back({"abs_half", [](double x) { return std::abs(x - 0.5); },
                    R::Lipschitz, 1.0, 0, 0});
  corpus.push_back({"sqrt", [](double x) { return std::sqrt(x); }, R::Hoelder,
                    0.0, 0.5, 1.0});

  {
    // seeded piecewise-linear roughage on J_6
    SplitMix64 rng(mix_seed(seed, 6));
    const int level = 6;
    Eigen::VectorXd values((std::int64_t{1} << level) + 1);
    for (std::int64_t i = 0; i < values.size(); ++i) {
      values[i] = 2.0 * rng.next_unit() - 1.0;
    }
    double max_step = 0.0;
    for (std::int64_t i = 0; i + 1 < values.size(); ++i) {
      max_step = std::max(max_step, std::abs(values[i + 1] - values[i]));
    }
    auto fn = std::make_shared<PiecewiseLinearFn>(level, std::move(values));
    corpus.push_back({"random_pl6", [fn](double x) { return (*fn)(x); },
                      R::Lipschitz, max_step * std::ldexp(1.0, level), 0, 0});
  }

  corpus.push_back(
      {"takagi", [](double x) { return takagi(x); }, R::Continuous, 0.0, 0, 0});
  return corpus;
}

const CorpusFunction* find_function(const std::vector<CorpusFunction>& corpus,
                                    std::string_view id) {
  for (const CorpusFunction& f : corpus) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

double modulus_of_continuity(const RealFunction& f, double delta,
                             int probe_level) {
  if (!(delta > 0.0)) throw std::domain_error("delta must be positive");
  if (delta > 1.0) delta = 1.0;
  if (probe_level < 0 || probe_level > kMaxLevel) {
    throw std::invalid_argument("probe level out of range");
  }
  const std::int64_t size = (std::int64_t{1} << probe_level) + 1;
  // index window: pairs at distance <= window steps satisfy |x-y| <= delta
  const std::int64_t window = static_cast<std::int64_t>(
      std::floor(std::ldexp(delta, probe_level)));
  if (window <= 0) return 0.0;

  Eigen::VectorXd samples(size);
  for (std::int64_t i = 0; i < size; ++i) {
    const double v = f(std::ldexp(static_cast<double>(i), -probe_level));
    if (!std::isfinite(v)) {
      throw std::domain_error("function not finite on probe grid");
    }
    samples[i] = v;
  }

  // sliding-window max and min via monotonic deques
  std::deque<std::int64_t> maxq, minq;
  double worst = 0.0;
  for (std::int64_t i = 0; i < size; ++i) {
    while (!maxq.empty() && samples[maxq.back()] <= samples[i]) maxq.pop_back();
    maxq.push_back(i);
    while (!minq.empty() && samples[minq.back()] >= samples[i]) minq.pop_back();
    minq.push_back(i);
    const std::int64_t lo = i - window;
    while (maxq.front() < lo) maxq.pop_front();
    while (minq.front() < lo) minq.pop_front();
    worst = std::max(worst, samples[maxq.front()] - samples[minq.front()]);
  }
  return worst;
}

double sup_norm_estimate(const RealFunction& f, int probe_level) {
  if (probe_level < 0 || probe_level > kMaxLevel) {
    throw std::invalid_argument("probe level out of range");
  }
  const std::int64_t size = (std::int64_t{1} << probe_level) + 1;
  double worst = 0.0;
  for (std::int64_t i = 0; i < size; ++i) {
    const double v = f(std::ldexp(static_cast<double>(i), -probe_level));
    if (!std::isfinite(v)) {
      throw std::domain_error("function not finite on probe grid");
    }
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

}  // namespace faberframe
