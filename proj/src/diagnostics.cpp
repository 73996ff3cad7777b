#include "faberframe/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "faberframe/rng.hpp"

namespace faberframe {

namespace {

// 1 / sqrt(2)^n, split into an exact power of two and at most one sqrt factor.
double inv_sqrt2_pow(std::int64_t n) {
  double scale = std::ldexp(1.0, static_cast<int>(-(n / 2)));
  if (n % 2 != 0) scale *= std::sqrt(0.5);
  return scale;
}

double apply_to_element(const FrameSystem& system, const FunctionalSample& f,
                        std::int64_t n) {
  double acc = 0.0;
  for (const auto& atom : f.atoms()) {
    acc += atom.weight * system.element_at(n, atom.point.value());
  }
  return acc;
}

}  // namespace

FunctionalSample random_functional(std::uint64_t seed, int max_atoms,
                                   int max_point_level) {
  if (max_atoms < 1 || max_point_level < 0 || max_point_level > kMaxLevel) {
    throw std::invalid_argument("bad random functional parameters");
  }
  SplitMix64 rng(mix_seed(seed, 0xf0));
  const int atoms = 1 + static_cast<int>(rng.next_below(
                            static_cast<std::uint64_t>(max_atoms)));
  FunctionalSample f;
  int placed = 0;
  while (placed < atoms) {
    const int level = static_cast<int>(
        rng.next_below(static_cast<std::uint64_t>(max_point_level + 1)));
    const std::int64_t numerator = static_cast<std::int64_t>(
        rng.next_below((std::uint64_t{1} << level) + 1));
    const DyadicRational p(numerator, level);
    const double w = (2.0 * rng.next_unit() - 1.0);
    bool fresh = true;
    for (const auto& atom : f.atoms()) {
      if (atom.point == p) fresh = false;
    }
    if (!fresh || w == 0.0) continue;
    f.add(p, w);
    ++placed;
  }
  const double mass = f.norm();
  return f.scaled(1.0 / mass);
}

double besselian_sum(const FrameSystem& system, const RealFunction& x,
                     const FunctionalSample& f, std::int64_t count) {
  const CoefficientSequence coeffs = analyze(system, x, count);
  double sum = 0.0;
  for (std::int64_t n = 1; n <= count; ++n) {
    sum += std::abs(coeffs.value(n)) * std::abs(apply_to_element(system, f, n));
  }
  return sum;
}

BesselReport estimate_bessel_constant(const FrameSystem& system,
                                      const std::vector<CorpusFunction>& xs,
                                      const std::vector<NamedFunctional>& fs,
                                      std::int64_t count,
                                      int norm_probe_level) {
  if (xs.empty() || fs.empty()) {
    throw std::invalid_argument("bessel estimation needs nonempty corpora");
  }
  BesselReport report;
  report.truncation = count;
  report.norm_probe_level = norm_probe_level >= 0
                                ? norm_probe_level
                                : std::min(kMaxLevel, index_level(count) + 4);
  for (const CorpusFunction& x : xs) {
    const double x_norm = sup_norm_estimate(x.eval, report.norm_probe_level);
    const CoefficientSequence coeffs = analyze(system, x.eval, count);
    for (const NamedFunctional& f : fs) {
      const double bound = x_norm * f.functional.norm();
      if (bound == 0.0) {
        report.skipped.push_back(x.id + "/" + f.id);
        continue;
      }
      double sum = 0.0;
      for (std::int64_t n = 1; n <= count; ++n) {
        sum += std::abs(coeffs.value(n)) *
               std::abs(apply_to_element(system, f.functional, n));
      }
      report.pairs.push_back({x.id, f.id, sum, bound, sum / bound});
    }
  }
  std::sort(report.pairs.begin(), report.pairs.end(),
            [](const BesselPair& a, const BesselPair& b) {
              if (a.ratio != b.ratio) return a.ratio > b.ratio;
              if (a.x_id != b.x_id) return a.x_id < b.x_id;
              return a.f_id < b.f_id;
            });
  report.max_ratio = report.pairs.empty() ? 0.0 : report.pairs.front().ratio;
  return report;
}

ScaledPaire scaled_paire(const FrameSystem& system, std::int64_t count) {
  ScaledPaire paire;
  paire.truncation = count;
  paire.element_scales.resize(count);
  paire.functional_scales.resize(count);
  for (std::int64_t n = 1; n <= count; ++n) {
    const double fn_norm = system.functional(n).norm();
    if (fn_norm == 0.0) {
      throw std::invalid_argument(
          "scaled paire requires nonzero functionals, but A_" +
          std::to_string(n) + " vanishes");
    }
    const double scale = inv_sqrt2_pow(n);
    paire.element_scales[n - 1] = scale / system.element_sup_norm(n);
    paire.functional_scales[n - 1] = scale / fn_norm;
  }
  return paire;
}

double scaled_besselian_sum(const FrameSystem& system, const ScaledPaire& paire,
                            const RealFunction& x, const FunctionalSample& f) {
  const CoefficientSequence coeffs = analyze(system, x, paire.truncation);
  double sum = 0.0;
  for (std::int64_t n = 1; n <= paire.truncation; ++n) {
    const double gx = paire.functional_scales[n - 1] * coeffs.value(n);
    const double fy =
        paire.element_scales[n - 1] * apply_to_element(system, f, n);
    sum += std::abs(gx) * std::abs(fy);
  }
  return sum;
}

namespace {

void check_capacity(const FrameSystem& system, const CoefficientSequence& coeffs) {
  if (coeffs.size() > system.size()) {
    throw CapacityError("coefficient count exceeds built system size");
  }
}

// Running prefix sup over an arbitrary visit order of the coefficients.
double prefix_sup(const FrameSystem& system, const CoefficientSequence& coeffs,
                  std::span<const std::int64_t> order,
                  std::span<const int> signs, std::int64_t* argmax_prefix) {
  check_capacity(system, coeffs);
  const std::int64_t count = coeffs.size();
  const int grid_level = count == 0 ? 0 : index_level(count);
  Eigen::VectorXd ordinates =
      Eigen::VectorXd::Zero((std::int64_t{1} << grid_level) + 1);
  double best = 0.0;
  std::int64_t best_prefix = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::int64_t n = order[i];
    double c = coeffs.value(n);
    if (!signs.empty()) c *= signs[n - 1];
    if (c != 0.0) accumulate_element(ordinates, grid_level, n, c);
    const double sup = ordinates.cwiseAbs().maxCoeff();
    if (sup > best) {
      best = sup;
      best_prefix = static_cast<std::int64_t>(i) + 1;
    }
  }
  if (argmax_prefix) *argmax_prefix = best_prefix;
  return best;
}

std::vector<std::int64_t> identity_order(std::int64_t count) {
  std::vector<std::int64_t> order(count);
  std::iota(order.begin(), order.end(), std::int64_t{1});
  return order;
}

std::string summarize_order(std::span<const std::int64_t> order) {
  std::ostringstream out;
  out << "[";
  const std::size_t shown = std::min<std::size_t>(order.size(), 8);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) out << " ";
    out << order[i];
  }
  if (order.size() > shown) out << " ...";
  out << "]";
  return out.str();
}

std::string summarize_signs(std::span<const int> signs) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(signs.size(), 32);
  for (std::size_t i = 0; i < shown; ++i) out += signs[i] > 0 ? '+' : '-';
  if (signs.size() > shown) out += "...";
  return out;
}

}  // namespace

double permuted_prefix_sup(const FrameSystem& system,
                           const CoefficientSequence& coeffs,
                           std::span<const std::int64_t> order,
                           std::int64_t* argmax_prefix) {
  return prefix_sup(system, coeffs, order, {}, argmax_prefix);
}

double signed_prefix_sup(const FrameSystem& system,
                         const CoefficientSequence& coeffs,
                         std::span<const int> signs,
                         std::int64_t* argmax_prefix) {
  const std::vector<std::int64_t> order = identity_order(coeffs.size());
  return prefix_sup(system, coeffs, order, signs, argmax_prefix);
}

double subset_sum_norm(const FrameSystem& system,
                       const CoefficientSequence& coeffs,
                       std::span<const std::int64_t> subset) {
  check_capacity(system, coeffs);
  const std::int64_t count = coeffs.size();
  const int grid_level = count == 0 ? 0 : index_level(count);
  Eigen::VectorXd ordinates =
      Eigen::VectorXd::Zero((std::int64_t{1} << grid_level) + 1);
  for (std::int64_t n : subset) {
    const double c = coeffs.value(n);
    if (c != 0.0) accumulate_element(ordinates, grid_level, n, c);
  }
  return ordinates.cwiseAbs().maxCoeff();
}

UnconditionalityReport permutation_probe(const FrameSystem& system,
                                         const CoefficientSequence& coeffs,
                                         std::int64_t trials,
                                         std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("at least one trial required");
  UnconditionalityReport report;
  report.seed = seed;
  report.trials = trials;
  std::vector<std::int64_t> order = identity_order(coeffs.size());
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    std::string detail = "identity";
    if (trial > 0) {
      // Fisher-Yates on a fresh per-trial stream
      std::iota(order.begin(), order.end(), std::int64_t{1});
      SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(trial)));
      for (std::int64_t i = static_cast<std::int64_t>(order.size()) - 1; i > 0; --i) {
        const std::int64_t j = static_cast<std::int64_t>(
            rng.next_below(static_cast<std::uint64_t>(i + 1)));
        std::swap(order[i], order[j]);
      }
      detail = summarize_order(order);
    }
    TrialRecord record;
    record.trial = trial;
    record.kind = "permutation";
    record.detail = detail;
    record.sup =
        permuted_prefix_sup(system, coeffs, order, &record.argmax_prefix);
    report.observed_sup = std::max(report.observed_sup, record.sup);
    report.records.push_back(std::move(record));
  }
  return report;
}

UnconditionalityReport sign_probe(const FrameSystem& system,
                                  const CoefficientSequence& coeffs,
                                  std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("at least one trial required");
  UnconditionalityReport report;
  report.seed = seed;
  report.trials = trials;
  std::vector<int> signs(coeffs.size(), 1);
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    if (trial > 0) {
      SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(trial)));
      for (int& s : signs) s = rng.next_sign();
    }
    TrialRecord record;
    record.trial = trial;
    record.kind = "signs";
    record.detail = trial == 0 ? "all-plus" : summarize_signs(signs);
    record.sup = signed_prefix_sup(system, coeffs, signs, &record.argmax_prefix);
    report.observed_sup = std::max(report.observed_sup, record.sup);
    report.records.push_back(std::move(record));
  }
  return report;
}

UnconditionalityReport tail_probe(const FrameSystem& system,
                                  const CoefficientSequence& coeffs,
                                  std::span<const std::int64_t> cutoffs,
                                  std::int64_t subsets_per_cutoff,
                                  std::uint64_t seed) {
  if (subsets_per_cutoff < 1) {
    throw std::invalid_argument("at least one subset per cutoff required");
  }
  const std::int64_t count = coeffs.size();
  UnconditionalityReport report;
  report.seed = seed;
  report.trials = subsets_per_cutoff;
  for (const std::int64_t cutoff : cutoffs) {
    if (cutoff < 1 || cutoff > count + 1) {
      throw std::out_of_range("tail cutoff out of range");
    }
    const std::int64_t tail = count - cutoff + 1;
    double sup = 0.0;
    std::vector<std::int64_t> subset;
    if (tail > 0 && tail <= 62 &&
        (std::int64_t{1} << tail) - 1 <= subsets_per_cutoff) {
      // small tail: enumerate every nonempty subset
      for (std::int64_t mask = 1; mask < (std::int64_t{1} << tail); ++mask) {
        subset.clear();
        for (std::int64_t b = 0; b < tail; ++b) {
          if (mask & (std::int64_t{1} << b)) subset.push_back(cutoff + b);
        }
        sup = std::max(sup, subset_sum_norm(system, coeffs, subset));
      }
    } else if (tail > 0) {
      SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(cutoff)));
      for (std::int64_t s = 0; s < subsets_per_cutoff; ++s) {
        subset.clear();
        for (std::int64_t n = cutoff; n <= count; ++n) {
          if (rng.next() & 1u) subset.push_back(n);
        }
        if (subset.empty()) {
          subset.push_back(cutoff + static_cast<std::int64_t>(rng.next_below(
                                        static_cast<std::uint64_t>(tail))));
        }
        sup = std::max(sup, subset_sum_norm(system, coeffs, subset));
      }
    }
    report.tail_sups[cutoff] = sup;
    report.observed_sup = std::max(report.observed_sup, sup);
  }
  return report;
}

GramTruncation::GramTruncation(const FrameSystem& system, std::int64_t count)
    : count_(count) {
  if (count < 0 || count > system.size()) {
    throw CapacityError("gram truncation exceeds built system size");
  }
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::int64_t i = 1; i <= count; ++i) {
    const std::int64_t support_end =
        std::min(count, std::int64_t{2} << index_level(i));
    const PointMassFunctional& row = system.functional(i);
    for (std::int64_t j = 1; j <= support_end; ++j) {
      double value = 0.0;
      for (const auto& atom : row.atoms()) {
        value += atom.weight * system.element_at(j, atom.point.value());
      }
      triplets.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1),
                            value);
    }
  }
  matrix_.resize(static_cast<int>(count), static_cast<int>(count));
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
}

std::int64_t GramTruncation::row_support_end(std::int64_t i) const {
  if (i < 1 || i > count_) throw std::out_of_range("gram row index");
  return std::min(count_, std::int64_t{2} << index_level(i));
}

double GramTruncation::entry(std::int64_t i, std::int64_t j) const {
  if (i < 1 || i > count_ || j < 1 || j > count_) {
    throw std::out_of_range("gram entry index");
  }
  if (j > row_support_end(i)) return 0.0;
  return matrix_.coeff(static_cast<int>(i - 1), static_cast<int>(j - 1));
}

GramTruncation gram_matrix(const FrameSystem& system, std::int64_t count) {
  return GramTruncation(system, count);
}

double projection_defect(const GramTruncation& gram, std::int64_t window) {
  if (window < 0 || window > gram.size()) {
    throw std::out_of_range("projection window out of range");
  }
  if (window == 0) return 0.0;
  const std::int64_t needed = std::int64_t{2} << index_level(window);
  if (gram.size() < needed) {
    throw std::invalid_argument(
        "truncation too small for window: rows up to " +
        std::to_string(window) + " need " + std::to_string(needed) +
        " columns, have " + std::to_string(gram.size()));
  }
  double defect = 0.0;
  for (std::int64_t i = 1; i <= window; ++i) {
    const std::int64_t support_end = gram.row_support_end(i);
    for (std::int64_t j = 1; j <= window; ++j) {
      double product = 0.0;
      for (std::int64_t k = 1; k <= support_end; ++k) {
        product += gram.entry(i, k) * gram.entry(k, j);
      }
      defect = std::max(defect, std::abs(product - gram.entry(i, j)));
    }
  }
  return defect;
}

double a_norm(const FrameSystem& system, const CoefficientSequence& coeffs) {
  const std::vector<std::int64_t> order = identity_order(coeffs.size());
  return prefix_sup(system, coeffs, order, {}, nullptr);
}

double a_tilde_norm(const FrameSystem& system, const CoefficientSequence& coeffs,
                    std::int64_t trials, std::uint64_t seed) {
  return permutation_probe(system, coeffs, trials, seed).observed_sup;
}

}  // namespace faberframe
