#pragma once

#include <Eigen/SparseCore>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "faberframe/corpus.hpp"
#include "faberframe/frame.hpp"

namespace faberframe {

// Finite point-mass model of f in C[0,1]*; point masses are extreme points of
// the dual ball, so sups over them match sups over the ball at any fixed
// truncation. ||f|| is the exact total mass.
using FunctionalSample = PointMassFunctional;

struct NamedFunctional {
  std::string id;
  FunctionalSample functional;
};

// Deterministic dual-ball sample: 1..max_atoms distinct dyadic atoms of level
// <= max_point_level with signed weights normalized to total mass 1.
FunctionalSample random_functional(std::uint64_t seed, int max_atoms = 8,
                                   int max_point_level = 10);

// --- besselian sums -------------------------------------------------------

// sum_{n<=count} |A_n(x)| * |f(phi_n)|; nonnegative, nondecreasing in count.
double besselian_sum(const FrameSystem& system, const RealFunction& x,
                     const FunctionalSample& f, std::int64_t count);

struct BesselPair {
  std::string x_id;
  std::string f_id;
  double sum = 0.0;
  double bound = 0.0;  // ||x||_inf * ||f||
  double ratio = 0.0;
};

struct BesselReport {
  std::int64_t truncation = 0;
  int norm_probe_level = 0;
  std::vector<BesselPair> pairs;        // descending by ratio
  std::vector<std::string> skipped;     // zero-bound pairs
  double max_ratio = 0.0;
};

// Empirical frame-constant estimate: max of sum/bound over the corpora.
// norm_probe_level < 0 selects index_level(count) + 4.
BesselReport estimate_bessel_constant(const FrameSystem& system,
                                      const std::vector<CorpusFunction>& xs,
                                      const std::vector<NamedFunctional>& fs,
                                      std::int64_t count,
                                      int norm_probe_level = -1);

// --- scaled paire ---------------------------------------------------------

// y_n = phi_n / (sqrt(2)^n ||phi_n||), g_n = A_n / (sqrt(2)^n ||A_n||); the
// scaled besselian sum is bounded by ||x|| * ||f|| for every x and f.
struct ScaledPaire {
  std::int64_t truncation = 0;
  Eigen::VectorXd element_scales;     // y_n = element_scales[n-1] * phi_n
  Eigen::VectorXd functional_scales;  // g_n = functional_scales[n-1] * A_n
};

// Throws std::invalid_argument naming the first index whose functional is
// zero (possible when lambda_n = 1/2).
ScaledPaire scaled_paire(const FrameSystem& system, std::int64_t count);

double scaled_besselian_sum(const FrameSystem& system, const ScaledPaire& paire,
                            const RealFunction& x, const FunctionalSample& f);

// --- coefficient-space norms and probes ------------------------------------

// Truncated norm of the space of convergent expansions: the largest prefix
// sup norm max_{n<=N} ||sum_{k<=n} c_k phi_k||.
double a_norm(const FrameSystem& system, const CoefficientSequence& coeffs);

// Randomized lower estimate of the reordering-invariant norm: the largest
// prefix sup norm over sampled permutations. Trial 0 is the identity, so the
// result dominates a_norm; deterministic per seed.
double a_tilde_norm(const FrameSystem& system, const CoefficientSequence& coeffs,
                    std::int64_t trials, std::uint64_t seed);

// Deterministic building blocks used by the probes (and handy in tests).
double permuted_prefix_sup(const FrameSystem& system,
                           const CoefficientSequence& coeffs,
                           std::span<const std::int64_t> order,
                           std::int64_t* argmax_prefix = nullptr);
double signed_prefix_sup(const FrameSystem& system,
                         const CoefficientSequence& coeffs,
                         std::span<const int> signs,
                         std::int64_t* argmax_prefix = nullptr);
double subset_sum_norm(const FrameSystem& system,
                       const CoefficientSequence& coeffs,
                       std::span<const std::int64_t> subset);

struct TrialRecord {
  std::int64_t trial = 0;
  std::string kind;     // "permutation" | "signs"
  std::string detail;   // short summary of the pattern
  std::int64_t argmax_prefix = 0;
  double sup = 0.0;
};

struct UnconditionalityReport {
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  double observed_sup = 0.0;
  std::vector<TrialRecord> records;
  std::map<std::int64_t, double> tail_sups;  // cutoff -> sampled tail sup
};

UnconditionalityReport permutation_probe(const FrameSystem& system,
                                         const CoefficientSequence& coeffs,
                                         std::int64_t trials,
                                         std::uint64_t seed);

UnconditionalityReport sign_probe(const FrameSystem& system,
                                  const CoefficientSequence& coeffs,
                                  std::int64_t trials, std::uint64_t seed);

// For each cutoff k, sup of ||sum_{n in A} c_n phi_n|| over sampled finite
// subsets A of {k..N}; exhaustive when the tail is small enough. Report only.
UnconditionalityReport tail_probe(const FrameSystem& system,
                                  const CoefficientSequence& coeffs,
                                  std::span<const std::int64_t> cutoffs,
                                  std::int64_t subsets_per_cutoff,
                                  std::uint64_t seed);

// --- Gram projection matrix -------------------------------------------------

// Truncation of M_{i,j} = A_i(phi_j). Rows are supported on j <=
// 2^{level(i)+1}: finer hats vanish on the coarse atoms, so entries outside
// that prefix are structurally zero and never stored.
class GramTruncation {
 public:
  GramTruncation(const FrameSystem& system, std::int64_t count);

  std::int64_t size() const { return count_; }
  std::int64_t row_support_end(std::int64_t i) const;
  double entry(std::int64_t i, std::int64_t j) const;
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& matrix() const {
    return matrix_;
  }

 private:
  std::int64_t count_ = 0;
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix_;
};

GramTruncation gram_matrix(const FrameSystem& system, std::int64_t count);

// max_{i,j <= window} |(M^2)_{i,j} - M_{i,j}|. Because row supports are
// finite, the truncated product equals the infinite one on the window as soon
// as count >= 2^{level(window)+1}; smaller truncations are rejected.
double projection_defect(const GramTruncation& gram, std::int64_t window);

}  // namespace faberframe
