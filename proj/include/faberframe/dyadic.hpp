#pragma once

#include <Eigen/Core>
#include <compare>
#include <cstdint>

#include "faberframe/errors.hpp"

namespace faberframe {

// Hard ceiling on grid levels; a level-24 grid already has ~16.7M points.
inline constexpr int kMaxLevel = 24;

// Exact dyadic rational numerator/2^level in [0,1]. Canonical form keeps the
// numerator odd unless level == 0, so equality is plain field equality.
class DyadicRational {
 public:
  DyadicRational() = default;
  DyadicRational(std::int64_t numerator, int level);

  std::int64_t numerator() const { return num_; }
  int level() const { return level_; }

  // The represented value; exact, every dyadic of level <= 24 is a double.
  double value() const;

  // Recovers the canonical (numerator, level) pair from a double that is an
  // exact dyadic point of level <= kMaxLevel; throws std::domain_error
  // otherwise.
  static DyadicRational from_double(double x);

  friend bool operator==(const DyadicRational&, const DyadicRational&) = default;
  friend std::strong_ordering operator<=>(const DyadicRational& a,
                                          const DyadicRational& b) {
    const int common = a.level_ > b.level_ ? a.level_ : b.level_;
    return (a.num_ << (common - a.level_)) <=> (b.num_ << (common - b.level_));
  }

 private:
  std::int64_t num_ = 0;
  int level_ = 0;
};

// The grid J_m = {k/2^m : 0 <= k <= 2^m}.
struct DyadicGrid {
  explicit DyadicGrid(int m);

  std::int64_t size() const { return (std::int64_t{1} << level) + 1; }
  DyadicRational point(std::int64_t i) const;

  int level = 0;
};

// The cell I_{m,k} = [k/2^m, (k+1)/2^m].
struct DyadicInterval {
  DyadicInterval(int m, std::int64_t k);

  DyadicRational left() const { return DyadicRational(index, level); }
  DyadicRational right() const { return DyadicRational(index + 1, level); }
  DyadicRational midpoint() const {
    return DyadicRational(2 * index + 1, level + 1);
  }

  int level = 0;
  std::int64_t index = 0;
};

// Continuous function on [0,1], linear on the cells of J_{grid_level} and
// determined by its ordinates at the grid points. Abscissae stay implicit
// integers; only ordinates are floating point.
class PiecewiseLinearFn {
 public:
  PiecewiseLinearFn(int grid_level, Eigen::VectorXd ordinates);

  static PiecewiseLinearFn zero(int grid_level);

  int grid_level() const { return level_; }
  const Eigen::VectorXd& ordinates() const { return values_; }

  // Linear interpolation; exact at dyadic points of level <= grid_level.
  double operator()(double x) const;
  double at(const DyadicRational& p) const;

  // Same function on a finer grid; ordinates at surviving points are copied
  // bit-exactly, new points get the interpolated value.
  PiecewiseLinearFn refined(int target_level) const;

  // Exact: the sup of a piecewise-linear function is attained at a breakpoint.
  double sup_norm() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }

 private:
  int level_ = 0;
  Eigen::VectorXd values_;
};

PiecewiseLinearFn operator+(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g);
PiecewiseLinearFn operator-(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g);
PiecewiseLinearFn operator*(double c, const PiecewiseLinearFn& f);

// Exact ||f - g||_inf over the union grid.
double sup_norm_diff(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g);

inline double eval(const PiecewiseLinearFn& f, double x) { return f(x); }

inline PiecewiseLinearFn refine(const PiecewiseLinearFn& f, int target_level) {
  return f.refined(target_level);
}

inline double sup_norm(const PiecewiseLinearFn& f) { return f.sup_norm(); }

// Samples an arbitrary function on J_level; throws on non-finite values.
template <typename F>
PiecewiseLinearFn sample_on_grid(F&& f, int level) {
  DyadicGrid grid(level);
  Eigen::VectorXd values(grid.size());
  for (std::int64_t i = 0; i < grid.size(); ++i) {
    values[i] = f(grid.point(i).value());
  }
  return PiecewiseLinearFn(level, std::move(values));
}

}  // namespace faberframe
