#include "faberframe/dyadic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace faberframe {

namespace {

void check_level(int level) {
  if (level < 0) throw std::invalid_argument("grid level must be nonnegative");
  if (level > kMaxLevel) {
    throw CapacityError("grid level " + std::to_string(level) +
                        " exceeds the supported maximum " +
                        std::to_string(kMaxLevel));
  }
}

}  // namespace

DyadicRational::DyadicRational(std::int64_t numerator, int level)
    : num_(numerator), level_(level) {
  check_level(level);
  if (num_ < 0 || num_ > (std::int64_t{1} << level_)) {
    throw std::domain_error("dyadic rational outside [0,1]: " +
                            std::to_string(numerator) + "/2^" +
                            std::to_string(level));
  }
  while (level_ > 0 && (num_ & 1) == 0) {
    num_ >>= 1;
    --level_;
  }
}

double DyadicRational::value() const {
  return std::ldexp(static_cast<double>(num_), -level_);
}

DyadicRational DyadicRational::from_double(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("dyadic point outside [0,1]");
  }
  for (int level = 0; level <= kMaxLevel; ++level) {
    const double scaled = std::ldexp(x, level);
    if (scaled == std::floor(scaled)) {
      return DyadicRational(static_cast<std::int64_t>(scaled), level);
    }
  }
  throw std::domain_error("value is not a dyadic rational of level <= " +
                          std::to_string(kMaxLevel));
}

DyadicGrid::DyadicGrid(int m) : level(m) { check_level(m); }

DyadicRational DyadicGrid::point(std::int64_t i) const {
  if (i < 0 || i >= size()) throw std::out_of_range("grid point index");
  return DyadicRational(i, level);
}

DyadicInterval::DyadicInterval(int m, std::int64_t k) : level(m), index(k) {
  check_level(m);
  if (k < 0 || k >= (std::int64_t{1} << m)) {
    throw std::out_of_range("dyadic cell index");
  }
}

PiecewiseLinearFn::PiecewiseLinearFn(int grid_level, Eigen::VectorXd ordinates)
    : level_(grid_level), values_(std::move(ordinates)) {
  check_level(grid_level);
  if (values_.size() != (std::int64_t{1} << level_) + 1) {
    throw std::invalid_argument("ordinate count does not match grid level");
  }
  if (!values_.allFinite()) {
    throw std::domain_error("non-finite ordinate");
  }
}

PiecewiseLinearFn PiecewiseLinearFn::zero(int grid_level) {
  check_level(grid_level);
  return PiecewiseLinearFn(
      grid_level, Eigen::VectorXd::Zero((std::int64_t{1} << grid_level) + 1));
}

double PiecewiseLinearFn::operator()(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("evaluation point outside [0,1]");
  }
  const double scaled = std::ldexp(x, level_);  // exact
  std::int64_t i = static_cast<std::int64_t>(scaled);
  if (i >= values_.size() - 1) i = values_.size() - 2;
  const double t = scaled - static_cast<double>(i);  // exact, in [0,1]
  return (1.0 - t) * values_[i] + t * values_[i + 1];
}

double PiecewiseLinearFn::at(const DyadicRational& p) const {
  if (p.level() <= level_) {
    return values_[p.numerator() << (level_ - p.level())];
  }
  return (*this)(p.value());
}

PiecewiseLinearFn PiecewiseLinearFn::refined(int target_level) const {
  if (target_level < level_) {
    throw std::invalid_argument("refine target below current grid level");
  }
  check_level(target_level);
  Eigen::VectorXd current = values_;
  for (int lvl = level_; lvl < target_level; ++lvl) {
    const std::int64_t n = current.size();
    Eigen::VectorXd next(2 * n - 1);
    for (std::int64_t i = 0; i < n - 1; ++i) {
      next[2 * i] = current[i];
      next[2 * i + 1] = 0.5 * (current[i] + current[i + 1]);
    }
    next[2 * (n - 1)] = current[n - 1];
    current.swap(next);
  }
  return PiecewiseLinearFn(target_level, std::move(current));
}

PiecewiseLinearFn operator+(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g) {
  const int level = std::max(f.grid_level(), g.grid_level());
  return PiecewiseLinearFn(level, f.refined(level).ordinates() +
                                      g.refined(level).ordinates());
}

PiecewiseLinearFn operator-(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g) {
  const int level = std::max(f.grid_level(), g.grid_level());
  return PiecewiseLinearFn(level, f.refined(level).ordinates() -
                                      g.refined(level).ordinates());
}

PiecewiseLinearFn operator*(double c, const PiecewiseLinearFn& f) {
  return PiecewiseLinearFn(f.grid_level(), c * f.ordinates());
}

double sup_norm_diff(const PiecewiseLinearFn& f, const PiecewiseLinearFn& g) {
  const int level = std::max(f.grid_level(), g.grid_level());
  return (f.refined(level).ordinates() - g.refined(level).ordinates())
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace faberframe
