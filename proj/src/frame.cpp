#include "faberframe/frame.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "faberframe/rng.hpp"

namespace faberframe {

int index_level(std::int64_t n) {
  if (n < 1) throw std::out_of_range("frame index must be >= 1");
  if (n <= 2) return 0;
  return std::bit_width(static_cast<std::uint64_t>(n - 1)) - 1;
}

FrameIndex FrameIndex::decode(std::int64_t n) {
  FrameIndex ix;
  ix.n = n;
  ix.level = index_level(n);
  if (n <= 2) {
    ix.position = n;
    ix.half = Half::First;
    return ix;
  }
  const std::int64_t offset = n - (std::int64_t{1} << ix.level);
  const std::int64_t half_count = std::int64_t{1} << (ix.level - 1);
  if (offset <= half_count) {
    ix.position = offset;
    ix.half = Half::First;
  } else {
    ix.position = offset - half_count;
    ix.half = Half::Second;
  }
  return ix;
}

namespace {

void check_hat_index(int level, std::int64_t position) {
  if (level < 1 || level > kMaxLevel) {
    throw std::out_of_range("hat level out of range");
  }
  if (position < 1 || position > (std::int64_t{1} << (level - 1))) {
    throw std::out_of_range("hat position out of range");
  }
}

}  // namespace

std::int64_t FrameIndex::encode_first(int level, std::int64_t position) {
  check_hat_index(level, position);
  return (std::int64_t{1} << level) + position;
}

std::int64_t FrameIndex::encode_second(int level, std::int64_t position) {
  check_hat_index(level, position);
  return (std::int64_t{1} << level) + (std::int64_t{1} << (level - 1)) + position;
}

DyadicRational FrameIndex::peak() const {
  if (affine()) throw std::logic_error("affine element has no hat peak");
  return DyadicRational(2 * position - 1, level);
}

DyadicRational FrameIndex::support_left() const {
  if (affine()) throw std::logic_error("affine element has no hat support");
  return DyadicRational(position - 1, level - 1);
}

DyadicRational FrameIndex::support_right() const {
  if (affine()) throw std::logic_error("affine element has no hat support");
  return DyadicRational(position, level - 1);
}

LambdaSchedule LambdaSchedule::constant(double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ScheduleError("constant lambda outside [0,1]");
  }
  LambdaSchedule s;
  s.mode_ = Mode::Constant;
  s.constant_ = value;
  return s;
}

LambdaSchedule LambdaSchedule::explicit_values(std::vector<double> values) {
  if (values.empty()) throw ScheduleError("explicit lambda list is empty");
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ScheduleError("explicit lambda outside [0,1]");
    }
  }
  LambdaSchedule s;
  s.mode_ = Mode::Explicit;
  s.values_ = std::move(values);
  return s;
}

LambdaSchedule LambdaSchedule::seeded(std::uint64_t seed) {
  LambdaSchedule s;
  s.mode_ = Mode::Seeded;
  s.seed_ = seed;
  return s;
}

double LambdaSchedule::at(std::int64_t n) const {
  const FrameIndex ix = FrameIndex::decode(n);
  if (ix.affine() || ix.half != Half::First) {
    throw std::logic_error("lambda is defined for first-half indices only");
  }
  double lambda = 0.0;
  switch (mode_) {
    case Mode::Constant:
      lambda = constant_;
      break;
    case Mode::Explicit: {
      // ordinal of n among first-half indices, 0-based
      const std::int64_t ordinal =
          (std::int64_t{1} << (ix.level - 1)) + ix.position - 2;
      if (ordinal >= static_cast<std::int64_t>(values_.size())) {
        throw ScheduleError("explicit lambda list exhausted at index " +
                            std::to_string(n) + " (need entry " +
                            std::to_string(ordinal + 1) + ")");
      }
      lambda = values_[ordinal];
      break;
    }
    case Mode::Seeded:
      lambda = SplitMix64(mix_seed(seed_, static_cast<std::uint64_t>(n))).next_unit();
      break;
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ScheduleError("lambda_" + std::to_string(n) + " outside [0,1]");
  }
  return lambda;
}

std::string LambdaSchedule::describe() const {
  switch (mode_) {
    case Mode::Constant:
      return "constant(" + std::to_string(constant_) + ")";
    case Mode::Explicit:
      return "explicit(" + std::to_string(values_.size()) + " values)";
    case Mode::Seeded:
      return "seeded(" + std::to_string(seed_) + ")";
  }
  return "?";
}

PointMassFunctional PointMassFunctional::delta(const DyadicRational& p, double weight) {
  PointMassFunctional f;
  f.add(p, weight);
  return f;
}

void PointMassFunctional::add(const DyadicRational& p, double w) {
  auto it = std::lower_bound(
      atoms_.begin(), atoms_.end(), p,
      [](const Atom& a, const DyadicRational& q) { return a.point < q; });
  if (it != atoms_.end() && it->point == p) {
    it->weight += w;
  } else {
    atoms_.insert(it, Atom{p, w});
  }
}

void PointMassFunctional::add_scaled(const PointMassFunctional& other, double scale) {
  for (const Atom& a : other.atoms_) add(a.point, scale * a.weight);
}

void PointMassFunctional::compress() {
  std::erase_if(atoms_, [](const Atom& a) { return a.weight == 0.0; });
}

double PointMassFunctional::norm() const {
  double total = 0.0;
  for (const Atom& a : atoms_) total += std::abs(a.weight);
  return total;
}

PointMassFunctional PointMassFunctional::scaled(double s) const {
  PointMassFunctional out = *this;
  for (Atom& a : out.atoms_) a.weight *= s;
  return out;
}

PiecewiseLinearFn hat_function(int level, std::int64_t position) {
  check_hat_index(level, position);
  Eigen::VectorXd values =
      Eigen::VectorXd::Zero((std::int64_t{1} << level) + 1);
  values[2 * position - 1] = 1.0;
  return PiecewiseLinearFn(level, std::move(values));
}

double element_value(std::int64_t n, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("evaluation point outside [0,1]");
  }
  if (n == 1) return x;
  if (n == 2) return 1.0 - x;
  const FrameIndex ix = FrameIndex::decode(n);
  const double u =
      std::ldexp(x, ix.level) - static_cast<double>(2 * ix.position - 1);
  return std::max(0.0, 1.0 - std::abs(u));
}

void accumulate_element(Eigen::VectorXd& ordinates, int grid_level,
                        std::int64_t n, double c) {
  const FrameIndex ix = FrameIndex::decode(n);
  if (grid_level < ix.level || grid_level > kMaxLevel) {
    throw std::invalid_argument("grid level cannot hold element " +
                                std::to_string(n));
  }
  if (n == 1) {
    const std::int64_t size = ordinates.size();
    for (std::int64_t i = 1; i < size; ++i) {
      ordinates[i] += c * std::ldexp(static_cast<double>(i), -grid_level);
    }
    return;
  }
  if (n == 2) {
    const std::int64_t size = ordinates.size();
    for (std::int64_t i = 0; i < size - 1; ++i) {
      ordinates[i] += c * (1.0 - std::ldexp(static_cast<double>(i), -grid_level));
    }
    return;
  }
  // hat support in grid steps: [base, base + 2w], peak at base + w
  const std::int64_t w = std::int64_t{1} << (grid_level - ix.level);
  const std::int64_t base = (2 * ix.position - 2) * w;
  for (std::int64_t t = 1; t <= w; ++t) {
    ordinates[base + t] += c * std::ldexp(static_cast<double>(t), ix.level - grid_level);
  }
  for (std::int64_t t = 1; t < w; ++t) {
    ordinates[base + w + t] +=
        c * (1.0 - std::ldexp(static_cast<double>(t), ix.level - grid_level));
  }
}

CoefficientSequence::CoefficientSequence(std::vector<double> values)
    : values_(std::move(values)) {}

double CoefficientSequence::value(std::int64_t n) const {
  if (n < 1 || n > size()) throw std::out_of_range("coefficient index");
  return values_[n - 1];
}

CoefficientEntry CoefficientSequence::entry(std::int64_t n) const {
  return CoefficientEntry{FrameIndex::decode(n), value(n)};
}

std::vector<CoefficientEntry> CoefficientSequence::entries() const {
  std::vector<CoefficientEntry> out;
  out.reserve(values_.size());
  for (std::int64_t n = 1; n <= size(); ++n) out.push_back(entry(n));
  return out;
}

namespace {

// Exact hat value at an interior dyadic point.
double hat_value_at(int level, std::int64_t position, const DyadicRational& x) {
  const double u = std::ldexp(x.value(), level) -
                   static_cast<double>(2 * position - 1);
  return std::max(0.0, 1.0 - std::abs(u));
}

// Accumulates scale * S_{n_max}(.)(x) = scale * sum_{j<=n_max} phi_j(x) A_j
// into `acc`. Only O(level) elements are nonzero at x: the affine pair plus
// at most one hat pair per level.
void add_partial_sum_functional(const std::vector<PointMassFunctional>& fns,
                                std::int64_t n_max, const DyadicRational& x,
                                double scale, PointMassFunctional& acc) {
  const double xv = x.value();
  acc.add_scaled(fns[0], scale * xv);          // phi_1(x) = x
  acc.add_scaled(fns[1], scale * (1.0 - xv));  // phi_2(x) = 1 - x
  const int top = index_level(n_max);
  for (int m = 1; m <= top; ++m) {
    if (x.level() <= m - 1) break;  // x in J_{m-1}: every finer hat vanishes
    const std::int64_t cell = x.numerator() >> (x.level() - (m - 1));
    const std::int64_t position = cell + 1;
    const double value = hat_value_at(m, position, x);
    if (value == 0.0) continue;
    const std::int64_t j_first = FrameIndex::encode_first(m, position);
    if (j_first <= n_max) acc.add_scaled(fns[j_first - 1], scale * value);
    const std::int64_t j_second = FrameIndex::encode_second(m, position);
    if (j_second <= n_max) acc.add_scaled(fns[j_second - 1], scale * value);
  }
}

}  // namespace

FrameSystem FrameSystem::build(int max_level, LambdaSchedule schedule) {
  if (max_level < 1 || max_level > kMaxLevel) {
    throw CapacityError("max_level must lie in [1, " +
                        std::to_string(kMaxLevel) + "]");
  }
  FrameSystem system;
  system.max_level_ = max_level;
  system.schedule_ = schedule;

  const std::int64_t count = std::int64_t{1} << (max_level + 1);
  system.functionals_.resize(count);
  system.lambdas_.assign(count, std::numeric_limits<double>::quiet_NaN());

  system.functionals_[0] = PointMassFunctional::delta(DyadicRational(1, 0));
  system.functionals_[1] = PointMassFunctional::delta(DyadicRational(0, 0));

  for (std::int64_t n = 3; n <= count; ++n) {
    const FrameIndex ix = FrameIndex::decode(n);
    const DyadicRational mid = ix.peak();
    PointMassFunctional fn;
    if (ix.half == Half::First) {
      const double lambda = schedule.at(n);
      system.lambdas_[n - 1] = lambda;
      fn.add(ix.support_left(), lambda);
      fn.add(ix.support_right(), 1.0 - lambda);
    } else {
      system.lambdas_[n - 1] =
          system.lambdas_[FrameIndex::encode_first(ix.level, ix.position) - 1];
      fn.add(mid, 1.0);
    }
    add_partial_sum_functional(system.functionals_, n - 1, mid, -1.0, fn);
    fn.compress();
    system.functionals_[n - 1] = std::move(fn);
  }
  return system;
}

void FrameSystem::check_index(std::int64_t n) const {
  if (n < 1) throw std::out_of_range("frame index must be >= 1");
  if (n > size()) {
    throw CapacityError("index " + std::to_string(n) +
                        " exceeds built system size " + std::to_string(size()));
  }
}

const PointMassFunctional& FrameSystem::functional(std::int64_t n) const {
  check_index(n);
  return functionals_[n - 1];
}

double FrameSystem::lambda(std::int64_t n) const {
  check_index(n);
  return lambdas_[n - 1];
}

PiecewiseLinearFn FrameSystem::element(std::int64_t n) const {
  check_index(n);
  if (n == 1) return PiecewiseLinearFn(0, Eigen::Vector2d(0.0, 1.0));
  if (n == 2) return PiecewiseLinearFn(0, Eigen::Vector2d(1.0, 0.0));
  const FrameIndex ix = FrameIndex::decode(n);
  return hat_function(ix.level, ix.position);
}

double FrameSystem::element_at(std::int64_t n, double x) const {
  check_index(n);
  return element_value(n, x);
}

double FrameSystem::element_sup_norm(std::int64_t n) const {
  check_index(n);
  return 1.0;
}

CoefficientSequence analyze(const FrameSystem& system, const RealFunction& f,
                            std::int64_t count) {
  if (count < 0) throw std::invalid_argument("negative coefficient count");
  if (count > system.size()) {
    throw CapacityError("analysis depth " + std::to_string(count) +
                        " exceeds built system size " +
                        std::to_string(system.size()));
  }
  std::vector<double> values(count);
  for (std::int64_t n = 1; n <= count; ++n) {
    values[n - 1] = system.functional(n)(f);
  }
  return CoefficientSequence(std::move(values));
}

PiecewiseLinearFn synthesize(const FrameSystem& system,
                             const CoefficientSequence& coeffs) {
  const std::int64_t count = coeffs.size();
  if (count > system.size()) {
    throw CapacityError("coefficient count exceeds built system size");
  }
  const int grid_level = count == 0 ? 0 : index_level(count);
  Eigen::VectorXd ordinates =
      Eigen::VectorXd::Zero((std::int64_t{1} << grid_level) + 1);
  for (std::int64_t n = 1; n <= count; ++n) {
    const double c = coeffs.value(n);
    if (c != 0.0) accumulate_element(ordinates, grid_level, n, c);
  }
  return PiecewiseLinearFn(grid_level, std::move(ordinates));
}

PiecewiseLinearFn partial_sum(const FrameSystem& system, const RealFunction& f,
                              std::int64_t count) {
  return synthesize(system, analyze(system, f, count));
}

double reconstruction_error(const FrameSystem& system, const RealFunction& f,
                            std::int64_t count, int sample_level) {
  if (count < 2) throw std::invalid_argument("partial sum length must be >= 2");
  if (sample_level < 0 || sample_level > kMaxLevel) {
    throw std::invalid_argument("sample level out of range");
  }
  const PiecewiseLinearFn approx = partial_sum(system, f, count);
  const DyadicGrid grid(sample_level);
  double worst = 0.0;
  if (sample_level >= approx.grid_level()) {
    const PiecewiseLinearFn fine = approx.refined(sample_level);
    for (std::int64_t i = 0; i < grid.size(); ++i) {
      const double x = grid.point(i).value();
      const double fx = f(x);
      if (!std::isfinite(fx)) {
        throw std::domain_error("function not finite at sample point");
      }
      worst = std::max(worst, std::abs(fx - fine.ordinates()[i]));
    }
  } else {
    for (std::int64_t i = 0; i < grid.size(); ++i) {
      const DyadicRational p = grid.point(i);
      const double fx = f(p.value());
      if (!std::isfinite(fx)) {
        throw std::domain_error("function not finite at sample point");
      }
      worst = std::max(worst, std::abs(fx - approx.at(p)));
    }
  }
  return worst;
}

double faber_coefficient(const RealFunction& f, int level, std::int64_t position) {
  check_hat_index(level, position);
  const FrameIndex ix =
      FrameIndex::decode(FrameIndex::encode_first(level, position));
  const double mid = f(ix.peak().value());
  const double left = f(ix.support_left().value());
  const double right = f(ix.support_right().value());
  if (!std::isfinite(mid) || !std::isfinite(left) || !std::isfinite(right)) {
    throw std::domain_error("function not finite at queried dyadic point");
  }
  return mid - 0.5 * (left + right);
}

}  // namespace faberframe
