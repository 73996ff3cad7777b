#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "faberframe/dyadic.hpp"
#include "faberframe/errors.hpp"

namespace faberframe {

using RealFunction = std::function<double(double)>;

enum class Half : std::uint8_t { First, Second };

// Level of the frame index: 0 for the affine pair n = 1, 2; for n >= 3 the m
// with 2^m < n <= 2^{m+1}.
int index_level(std::int64_t n);

// Index codec for the doubled hat family. n = 1, 2 are the affine boundary
// elements; n >= 3 decodes to (level m, position k, half) with
// n = 2^m + k for the first half and n = 2^m + 2^{m-1} + k for the second,
// 1 <= k <= 2^{m-1}. Both halves of a pair share the same hat.
struct FrameIndex {
  std::int64_t n = 1;
  int level = 0;             // 0 for the affine pair
  std::int64_t position = 1; // k; for n <= 2 equals n
  Half half = Half::First;

  bool affine() const { return n <= 2; }

  // Hat geometry (n >= 3 only).
  DyadicRational peak() const;           // (2k-1)/2^m
  DyadicRational support_left() const;   // (k-1)/2^{m-1}
  DyadicRational support_right() const;  // k/2^{m-1}

  static FrameIndex decode(std::int64_t n);
  static std::int64_t encode_first(int level, std::int64_t position);
  static std::int64_t encode_second(int level, std::int64_t position);
};

// The lambda sequence feeding the first-half functionals; values must lie in
// [0,1]. Explicit lists are consumed in increasing index order over the
// first-half indices (n = 3, 5, 6, 9, ...).
class LambdaSchedule {
 public:
  enum class Mode { Constant, Explicit, Seeded };

  static LambdaSchedule constant(double value);
  static LambdaSchedule explicit_values(std::vector<double> values);
  static LambdaSchedule seeded(std::uint64_t seed);

  Mode mode() const { return mode_; }
  double constant_value() const { return constant_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<double>& values() const { return values_; }

  // lambda_n for a first-half index n >= 3.
  double at(std::int64_t n) const;

  std::string describe() const;

 private:
  LambdaSchedule() = default;

  Mode mode_ = Mode::Constant;
  double constant_ = 0.0;
  std::vector<double> values_;
  std::uint64_t seed_ = 0;
};

// Finite signed combination of point evaluations: f -> sum w_i f(p_i). This
// is the canonical closed form every frame functional resolves to; its norm
// as an element of C[0,1]* is the total mass sum |w_i|.
class PointMassFunctional {
 public:
  struct Atom {
    DyadicRational point;
    double weight = 0.0;
  };

  PointMassFunctional() = default;
  static PointMassFunctional delta(const DyadicRational& p, double weight = 1.0);

  // Merges with an existing atom at the same point.
  void add(const DyadicRational& p, double w);
  void add_scaled(const PointMassFunctional& other, double scale);
  // Drops atoms whose weight cancelled to exactly zero.
  void compress();

  const std::vector<Atom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  double norm() const;

  PointMassFunctional scaled(double s) const;

  // Applies the functional; throws std::domain_error if the function returns
  // a non-finite value at a queried point.
  template <typename F>
  double operator()(F&& f) const {
    double acc = 0.0;
    for (const Atom& a : atoms_) {
      const double v = f(a.point.value());
      if (!std::isfinite(v)) {
        throw std::domain_error("function not finite at queried dyadic point");
      }
      acc += a.weight * v;
    }
    return acc;
  }

  // Exact evaluation path for piecewise-linear arguments.
  double operator()(const PiecewiseLinearFn& g) const {
    double acc = 0.0;
    for (const Atom& a : atoms_) acc += a.weight * g.at(a.point);
    return acc;
  }

 private:
  std::vector<Atom> atoms_;  // sorted by point
};

// The hat with peak 1 at (2k-1)/2^m, supported on [(k-1)/2^{m-1}, k/2^{m-1}],
// zero on J_{m-1} and linear on the cells of J_m; materialized on J_m.
PiecewiseLinearFn hat_function(int level, std::int64_t position);

// phi_n(x) without materializing the grid.
double element_value(std::int64_t n, double x);

// Adds c * phi_n to the ordinates of a level-`grid_level` grid, touching only
// the support of phi_n. Requires grid_level >= index_level(n).
void accumulate_element(Eigen::VectorXd& ordinates, int grid_level,
                        std::int64_t n, double c);

struct CoefficientEntry {
  FrameIndex index;
  double value = 0.0;
};

// Analysis output: values for the contiguous index range 1..N.
class CoefficientSequence {
 public:
  CoefficientSequence() = default;
  explicit CoefficientSequence(std::vector<double> values);

  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
  double value(std::int64_t n) const;
  const std::vector<double>& values() const { return values_; }

  CoefficientEntry entry(std::int64_t n) const;
  std::vector<CoefficientEntry> entries() const;

 private:
  std::vector<double> values_;
};

// The indexed family {(phi_n, A_n)} for n = 1..2^{max_level+1}. The hats stay
// implicit; every functional is resolved at build time into a point-mass
// combination with atoms in J_{level(n)}, by structural induction on the
// partial-sum evaluations appearing in the defining recursion. Immutable
// after build and safe to share across threads.
class FrameSystem {
 public:
  static FrameSystem build(int max_level, LambdaSchedule schedule);

  int max_level() const { return max_level_; }
  std::int64_t size() const { return std::int64_t{1} << (max_level_ + 1); }
  const LambdaSchedule& schedule() const { return schedule_; }

  const PointMassFunctional& functional(std::int64_t n) const;

  // lambda of the pair owning index n (NaN for the affine pair).
  double lambda(std::int64_t n) const;

  PiecewiseLinearFn element(std::int64_t n) const;
  double element_at(std::int64_t n, double x) const;
  // All frame elements have unit sup norm; kept explicit for the scaled paire.
  double element_sup_norm(std::int64_t n) const;

 private:
  FrameSystem() = default;

  void check_index(std::int64_t n) const;

  int max_level_ = 1;
  LambdaSchedule schedule_ = LambdaSchedule::constant(0.0);
  std::vector<PointMassFunctional> functionals_;
  std::vector<double> lambdas_;
};

// Coefficients A_n(f) for n = 1..count via the resolved functionals.
CoefficientSequence analyze(const FrameSystem& system, const RealFunction& f,
                            std::int64_t count);

// sum c_n phi_n on the finest grid touched by the index range.
PiecewiseLinearFn synthesize(const FrameSystem& system,
                             const CoefficientSequence& coeffs);

// S_count(f) = synthesize(analyze(f, count)).
PiecewiseLinearFn partial_sum(const FrameSystem& system, const RealFunction& f,
                              std::int64_t count);

// max over the level-`sample_level` grid of |f - S_count(f)|.
double reconstruction_error(const FrameSystem& system, const RealFunction& f,
                            std::int64_t count, int sample_level);

// Classical midpoint correction f((2k-1)/2^m) - (f(left)+f(right))/2; equals
// the first+second coefficient sum of the pair at (m,k) for every schedule.
double faber_coefficient(const RealFunction& f, int level, std::int64_t position);

}  // namespace faberframe
