// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "faberframe/cli.hpp"
#include "faberframe/corpus.hpp"
#include "faberframe/diagnostics.hpp"
#include "faberframe/rng.hpp"
#include "faberframe/serialize.hpp"
#include "support/recursive_oracle.hpp"

using namespace faberframe;

namespace {

constexpr std::uint64_t kAcceptanceSeed = 20250808;

std::string sci(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3g", v);
  return buffer;
}

// every m with 2^m <= n <= 2^{m+1}
std::vector<int> levels_covering(std::int64_t n) {
  std::vector<int> ms;
  const int level = index_level(n);
  if (level >= 1) ms.push_back(level);
  if (n == (std::int64_t{1} << (level + 1)) || n == 2) ms.push_back(level + 1);
  return ms;
}

// --- criterion 1 ------------------------------------------------------------
// Interpolation identity: |S_n(f)(p) - f(p)| <= 1e-12 on J_{m-1} for every
// 2^m <= n <= 2^{m+1}, m <= 10, over the whole corpus.
bool interpolation_identity(std::string& detail) {
  constexpr int top_m = 10;
  constexpr double tolerance = 1e-12;
  const FrameSystem system =
      FrameSystem::build(top_m, LambdaSchedule::constant(0.0));
  const std::int64_t count = system.size();  // 2^{top_m+1}
  const int grid = top_m;
  double worst = 0.0;
  for (const CorpusFunction& f : builtin_corpus()) {
    const CoefficientSequence coeffs = analyze(system, f.eval, count);
    Eigen::VectorXd partial =
        Eigen::VectorXd::Zero((std::int64_t{1} << grid) + 1);
    Eigen::VectorXd sampled(partial.size());
    for (std::int64_t i = 0; i < sampled.size(); ++i) {
      sampled[i] = f.eval(std::ldexp(static_cast<double>(i), -grid));
    }
    for (std::int64_t n = 1; n <= count; ++n) {
      accumulate_element(partial, grid, n, coeffs.value(n));
      if (n < 2) continue;
      for (const int m : levels_covering(n)) {
        if (m > top_m) continue;
        const std::int64_t stride = std::int64_t{1} << (grid - (m - 1));
        for (std::int64_t i = 0; i < partial.size(); i += stride) {
          worst = std::max(worst, std::abs(partial[i] - sampled[i]));
        }
      }
    }
  }
  detail = "max |S_n(f)(p) - f(p)| = " + sci(worst) + " (tol 1e-12)";
  return worst <= tolerance;
}

// --- criterion 2 ------------------------------------------------------------
// ||f - S_n(f)|| on the level-14 grid <= 2 omega_f(2^{-(m-1)}) + 1e-9 for
// 2^m <= n < 2^{m+1}, m = 1..12, whole corpus.
bool convergence_bound(std::string& detail) {
  constexpr int top_m = 12;
  constexpr int grid = 14;
  constexpr double slack = 1e-9;
  const FrameSystem system =
      FrameSystem::build(top_m, LambdaSchedule::constant(0.0));
  const std::int64_t count = system.size();  // 2^13
  double worst_margin = -1.0;  // min over checks of bound - error
  double reconstruction_gap = 0.0;
  for (const CorpusFunction& f : builtin_corpus()) {
    std::vector<double> bounds(top_m + 1, 0.0);
    for (int m = 1; m <= top_m; ++m) {
      bounds[m] =
          2.0 * modulus_of_continuity(f.eval, std::ldexp(1.0, -(m - 1)), grid) +
          slack;
    }
    const CoefficientSequence coeffs = analyze(system, f.eval, count);
    Eigen::VectorXd partial =
        Eigen::VectorXd::Zero((std::int64_t{1} << grid) + 1);
    Eigen::VectorXd sampled(partial.size());
    for (std::int64_t i = 0; i < sampled.size(); ++i) {
      sampled[i] = f.eval(std::ldexp(static_cast<double>(i), -grid));
    }
    for (std::int64_t n = 1; n < count; ++n) {
      accumulate_element(partial, grid, n, coeffs.value(n));
      if (n < 2) continue;
      const int level = index_level(n);
      const int m = n == (std::int64_t{1} << (level + 1)) ? level + 1 : level;
      if (m > top_m) break;
      const double error = (partial - sampled).cwiseAbs().maxCoeff();
      const double margin = bounds[m] - error;
      if (worst_margin < 0.0 || margin < worst_margin) worst_margin = margin;
      if (margin < 0.0) {
        detail = f.id + " at n = " + std::to_string(n) + ": error " +
                 sci(error) + " exceeds bound " + sci(bounds[m]);
        return false;
      }
      // the public per-n operation computes the same quantity
      if (n == (std::int64_t{1} << m)) {
        const double direct = reconstruction_error(system, f.eval, n, grid);
        reconstruction_gap =
            std::max(reconstruction_gap, std::abs(direct - error));
      }
    }
  }
  detail = "min (bound - error) = " + sci(worst_margin) +
           ", sweep vs reconstruction_error gap = " + sci(reconstruction_gap);
  return worst_margin >= 0.0 && reconstruction_gap <= 1e-12;
}

// --- criterion 3 ------------------------------------------------------------
// First-half coefficients equal (lambda_n - 1/2)(f(left) - f(right)) within
// 1e-12, for lambda in {0, 0.3, 1} and a seeded schedule, m <= 8; the literal
// recursion is the independent oracle.
bool closed_form_vs_oracle(std::string& detail) {
  constexpr int top_m = 8;
  constexpr double tolerance = 1e-12;
  const std::int64_t count = std::int64_t{1} << (top_m + 1);
  double worst = 0.0;
  const std::vector<LambdaSchedule> schedules{
      LambdaSchedule::constant(0.0), LambdaSchedule::constant(0.3),
      LambdaSchedule::constant(1.0), LambdaSchedule::seeded(kAcceptanceSeed)};
  for (const LambdaSchedule& schedule : schedules) {
    const FrameSystem system = FrameSystem::build(top_m, schedule);
    for (const CorpusFunction& f : builtin_corpus()) {
      const CoefficientSequence impl = analyze(system, f.eval, count);
      const oracle::Expansion recursion =
          oracle::recursive_expansion(f.eval, schedule, count);
      for (std::int64_t n = 3; n <= count; ++n) {
        const FrameIndex ix = FrameIndex::decode(n);
        if (ix.half != Half::First) continue;
        const double closed =
            (schedule.at(n) - 0.5) * (f.eval(ix.support_left().value()) -
                                      f.eval(ix.support_right().value()));
        worst = std::max(worst, std::abs(impl.value(n) - closed));
        worst =
            std::max(worst, std::abs(recursion.coefficients[n - 1] - closed));
      }
    }
  }
  detail = "max deviation from closed form = " + sci(worst) + " (tol 1e-12)";
  return worst <= tolerance;
}

// --- criterion 4 ------------------------------------------------------------
// c_first + c_second is schedule-invariant and equals the classical midpoint
// correction within 1e-12, m <= 8, whole corpus.
bool pair_sum_invariance(std::string& detail) {
  constexpr int top_m = 8;
  constexpr double tolerance = 1e-12;
  const FrameSystem sys_a =
      FrameSystem::build(top_m, LambdaSchedule::constant(0.0));
  const FrameSystem sys_b =
      FrameSystem::build(top_m, LambdaSchedule::seeded(kAcceptanceSeed + 1));
  double worst = 0.0;
  for (const CorpusFunction& f : builtin_corpus()) {
    const CoefficientSequence ca = analyze(sys_a, f.eval, sys_a.size());
    const CoefficientSequence cb = analyze(sys_b, f.eval, sys_b.size());
    for (int m = 1; m <= top_m; ++m) {
      for (std::int64_t k = 1; k <= std::int64_t{1} << (m - 1); ++k) {
        const std::int64_t first = FrameIndex::encode_first(m, k);
        const std::int64_t second = FrameIndex::encode_second(m, k);
        const double classical = faber_coefficient(f.eval, m, k);
        worst = std::max(
            worst, std::abs(ca.value(first) + ca.value(second) - classical));
        worst = std::max(
            worst, std::abs(cb.value(first) + cb.value(second) - classical));
      }
    }
  }
  detail =
      "max |pair sum - midpoint correction| = " + sci(worst) + " (tol 1e-12)";
  return worst <= tolerance;
}

// --- criterion 5 ------------------------------------------------------------
// lambda = 1/2: first-half coefficients vanish and synthesis reproduces the
// classical interpolant within 1e-12.
bool half_lambda_degeneracy(std::string& detail) {
  constexpr int top_m = 8;
  constexpr double tolerance = 1e-12;
  const FrameSystem system =
      FrameSystem::build(top_m, LambdaSchedule::constant(0.5));
  double worst_coefficient = 0.0;
  double worst_diff = 0.0;
  for (const CorpusFunction& f : builtin_corpus()) {
    const CoefficientSequence coeffs = analyze(system, f.eval, system.size());
    for (std::int64_t n = 3; n <= coeffs.size(); ++n) {
      if (FrameIndex::decode(n).half == Half::First) {
        worst_coefficient =
            std::max(worst_coefficient, std::abs(coeffs.value(n)));
      }
    }
    for (int m = 1; m <= top_m; ++m) {
      const CoefficientSequence prefix =
          analyze(system, f.eval, std::int64_t{1} << (m + 1));
      const PiecewiseLinearFn interpolant = sample_on_grid(f.eval, m);
      worst_diff = std::max(
          worst_diff, sup_norm_diff(synthesize(system, prefix), interpolant));
    }
  }
  detail = "max first-half |c| = " + sci(worst_coefficient) +
           ", max sup diff vs interpolant = " + sci(worst_diff);
  return worst_coefficient <= tolerance && worst_diff <= tolerance;
}

// --- criterion 6 ------------------------------------------------------------
// Scaled-paire besselian sums stay below ||x|| ||f|| (1 + 1e-9) for 100
// seeded pairs and N in {16, 64, 256}.
bool scaled_paire_bound(std::string& detail) {
  constexpr double slack = 1e-9;
  const FrameSystem system =
      FrameSystem::build(8, LambdaSchedule::constant(0.0));
  const auto corpus = builtin_corpus();
  double worst_ratio = 0.0;
  for (const std::int64_t count : {16, 64, 256}) {
    const ScaledPaire paire = scaled_paire(system, count);
    const int probe_level = std::min(kMaxLevel, index_level(count) + 4);
    for (int pair_id = 0; pair_id < 100; ++pair_id) {
      const CorpusFunction& x = corpus[pair_id % corpus.size()];
      const FunctionalSample f =
          random_functional(mix_seed(kAcceptanceSeed, pair_id));
      const double bound = sup_norm_estimate(x.eval, probe_level) * f.norm();
      const double sum = scaled_besselian_sum(system, paire, x.eval, f);
      if (sum > bound * (1.0 + slack)) {
        detail = "pair " + std::to_string(pair_id) + " at N = " +
                 std::to_string(count) + ": sum " + sci(sum) + " > bound " +
                 sci(bound);
        return false;
      }
      if (bound > 0.0) worst_ratio = std::max(worst_ratio, sum / bound);
    }
  }
  detail = "300 pair checks, max sum/bound = " + sci(worst_ratio) +
           " (must stay <= 1 + 1e-9)";
  return true;
}

// --- criterion 7 ------------------------------------------------------------
// Projection defect <= 1e-10 on windows {4, 8, 16} with the minimal legal
// truncation, plus the hand-derived window entries at lambda = 0.
bool gram_projection(std::string& detail) {
  constexpr double tolerance = 1e-10;
  const FrameSystem system =
      FrameSystem::build(4, LambdaSchedule::constant(0.0));
  double worst = 0.0;
  for (const std::int64_t window : {4, 8, 16}) {
    const std::int64_t count = std::int64_t{2} << index_level(window);
    const GramTruncation gram = gram_matrix(system, count);
    worst = std::max(worst, projection_defect(gram, window));
  }
  const GramTruncation gram = gram_matrix(system, 8);
  const bool hand_values = gram.entry(3, 3) == 0.0 && gram.entry(4, 3) == 1.0 &&
                           gram.entry(4, 4) == 1.0;
  detail = "max defect = " + sci(worst) + " (tol 1e-10), hand window " +
           (hand_values ? "exact" : "WRONG");
  return worst <= tolerance && hand_values;
}

// --- criterion 8 ------------------------------------------------------------
// The coefficients (c_3, c_4) = (1, -1) synthesize to zero while the prefix
// norm is 1: expansions are not unique.
bool non_basis_witness(std::string& detail) {
  const FrameSystem system =
      FrameSystem::build(1, LambdaSchedule::constant(0.0));
  const CoefficientSequence witness(std::vector<double>{0.0, 0.0, 1.0, -1.0});
  const double synthesis = synthesize(system, witness).sup_norm();
  const double prefix = a_norm(system, witness);
  detail = "synthesis sup = " + sci(synthesis) +
           " (tol 1e-15), prefix norm = " + serialize::format_double(prefix) +
           " (must be 1)";
  return synthesis <= 1e-15 && prefix == 1.0;
}

// --- criterion 9 ------------------------------------------------------------
// Probe artifacts are byte-identical under a fixed seed, at both the report
// and the command level.
bool deterministic_reports(std::string& detail) {
  const FrameSystem system = FrameSystem::build(4, LambdaSchedule::seeded(3));
  const CoefficientSequence coeffs =
      analyze(system, [](double x) { return takagi(x); }, system.size());
  const nlohmann::json config = {{"probe", "acceptance"}};
  const std::string first = serialize::dump(serialize::uncond_json(
      sign_probe(system, coeffs, 8, kAcceptanceSeed), config));
  const std::string second = serialize::dump(serialize::uncond_json(
      sign_probe(system, coeffs, 8, kAcceptanceSeed), config));
  if (first != second) {
    detail = "in-process sign probe serialization differs";
    return false;
  }

  auto run_cli = [](const std::string& path) {
    std::ostringstream out, err;
    return cli::run({"uncond", "--function", "random_pl6", "--max-level", "4",
                     "--trials", "8", "--seed", "31", "--out", path},
                    out, err);
  };
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  };
  const std::string path_a = "acceptance_uncond_a.json";
  const std::string path_b = "acceptance_uncond_b.json";
  const int code_a = run_cli(path_a);
  const int code_b = run_cli(path_b);
  const std::string bytes_a = slurp(path_a);
  const std::string bytes_b = slurp(path_b);
  std::remove(path_a.c_str());
  std::remove(path_b.c_str());
  if (code_a != 0 || code_b != 0 || bytes_a.empty() || bytes_a != bytes_b) {
    detail = "uncond command output differs between identical runs";
    return false;
  }
  detail = "sign probe and uncond artifacts byte-identical across reruns";
  return true;
}

// --- criterion 10 -----------------------------------------------------------
// The existence theory (universal spaces, the approximation-property
// equivalence, finiteness of the frame constant and the projection norm) is
// out of desk range: probes emit evidence tables and assert nothing.
bool report_only_exclusions(std::string& detail) {
  const FrameSystem system =
      FrameSystem::build(5, LambdaSchedule::constant(0.0));
  const CoefficientSequence coeffs =
      analyze(system, [](double x) { return takagi(x); }, 64);
  const std::vector<std::int64_t> cutoffs{1, 8, 32, 64};
  const UnconditionalityReport tails =
      tail_probe(system, coeffs, cutoffs, 32, kAcceptanceSeed);
  const UnconditionalityReport signs =
      sign_probe(system, coeffs, 8, kAcceptanceSeed);
  const double few = a_tilde_norm(system, coeffs, 4, kAcceptanceSeed);
  const double many = a_tilde_norm(system, coeffs, 16, kAcceptanceSeed);
  const bool evidence = tails.tail_sups.size() == cutoffs.size() &&
                        !signs.records.empty() && many >= few;
  detail = evidence
               ? "probes emit evidence only (tail sups at " +
                     std::to_string(tails.tail_sups.size()) +
                     " cutoffs); no unconditionality or L_F finiteness asserted"
               : "probe evidence missing";
  return evidence;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    std::string name;
    std::function<bool(std::string&)> check;
  };
  const std::vector<Criterion> criteria{
      {1, "interpolation identity on J_{m-1}", interpolation_identity},
      {2, "uniform error within 2*omega bound", convergence_bound},
      {3, "closed form vs recursive oracle", closed_form_vs_oracle},
      {4, "pair-sum schedule invariance", pair_sum_invariance},
      {5, "lambda = 1/2 degeneracy", half_lambda_degeneracy},
      {6, "scaled-paire besselian bound", scaled_paire_bound},
      {7, "gram projection idempotence", gram_projection},
      {8, "non-basis witness", non_basis_witness},
      {9, "deterministic probe artifacts", deterministic_reports},
      {10, "existence theory excluded, probes report-only",
       report_only_exclusions},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    std::printf("%s  criterion %2d  %-45s  %s  [%lldms]\n",
                ok ? "PASS" : "FAIL", criterion.number, criterion.name.c_str(),
                detail.c_str(), static_cast<long long>(elapsed));
    if (!ok) ++failures;
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
  }
  return failures;
}
