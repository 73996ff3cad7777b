#pragma once

// Literal recursive construction of the expansion, kept independent of the
// resolved-functional implementation under test: every coefficient comes from
// raw function values plus one evaluation of the running partial sum, which
// is maintained here as a plain ordinate table with its own hat arithmetic.

#include <cmath>
#include <cstdint>
#include <vector>

#include "faberframe/frame.hpp"

namespace oracle {

struct Expansion {
  std::vector<double> coefficients;
  faberframe::PiecewiseLinearFn partial;  // S_count(f)
};

inline Expansion recursive_expansion(const faberframe::RealFunction& f,
                                     const faberframe::LambdaSchedule& schedule,
                                     std::int64_t count) {
  using faberframe::FrameIndex;
  using faberframe::Half;

  const int grid_level = count <= 2 ? 0 : faberframe::index_level(count);
  const std::int64_t size = (std::int64_t{1} << grid_level) + 1;
  std::vector<double> s(size, 0.0);
  auto grid_x = [&](std::int64_t i) {
    return std::ldexp(static_cast<double>(i), -grid_level);
  };

  std::vector<double> coefficients;
  if (count >= 1) {
    const double c1 = f(1.0);
    coefficients.push_back(c1);
    for (std::int64_t i = 0; i < size; ++i) s[i] += c1 * grid_x(i);
  }
  if (count >= 2) {
    const double c2 = f(0.0);
    coefficients.push_back(c2);
    for (std::int64_t i = 0; i < size; ++i) s[i] += c2 * (1.0 - grid_x(i));
  }
  for (std::int64_t n = 3; n <= count; ++n) {
    const FrameIndex ix = FrameIndex::decode(n);
    const std::int64_t peak_index = ix.peak().numerator()
                                    << (grid_level - ix.level);
    double c = 0.0;
    if (ix.half == Half::First) {
      const double lambda = schedule.at(n);
      c = lambda * f(ix.support_left().value()) +
          (1.0 - lambda) * f(ix.support_right().value()) - s[peak_index];
    } else {
      c = f(ix.peak().value()) - s[peak_index];
    }
    coefficients.push_back(c);

    const std::int64_t halfwidth = std::int64_t{1} << (grid_level - ix.level);
    const std::int64_t base = (2 * ix.position - 2) * halfwidth;
    for (std::int64_t i = base; i <= base + 2 * halfwidth; ++i) {
      const double u = std::ldexp(grid_x(i), ix.level) -
                       static_cast<double>(2 * ix.position - 1);
      s[i] += c * std::max(0.0, 1.0 - std::abs(u));
    }
  }

  Eigen::VectorXd ordinates =
      Eigen::Map<const Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(size));
  return Expansion{std::move(coefficients),
                   faberframe::PiecewiseLinearFn(grid_level, std::move(ordinates))};
}

}  // namespace oracle
