#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "faberframe/frame.hpp"

namespace faberframe {

// Fixed seed for the randomized built-in corpus member.
inline constexpr std::uint64_t kCorpusSeed = 0x5eedf00d;

// Grid used by the brute-force estimators unless overridden.
inline constexpr int kDefaultProbeLevel = 14;

struct CorpusFunction {
  enum class Regularity { Affine, Lipschitz, Hoelder, Continuous };

  std::string id;
  RealFunction eval;
  Regularity tag = Regularity::Continuous;
  double lipschitz = 0.0;      // valid for Affine / Lipschitz
  double hoelder_alpha = 0.0;  // valid for Hoelder
  double hoelder_c = 0.0;

  std::string regularity_label() const;
};

// Built-in test functions with known regularity. The piecewise-linear member
// is reproducible bit-exactly from the seed.
std::vector<CorpusFunction> builtin_corpus(std::uint64_t seed = kCorpusSeed);

// nullptr when the id is unknown.
const CorpusFunction* find_function(const std::vector<CorpusFunction>& corpus,
                                    std::string_view id);

// Truncated Takagi function sum_{k=0}^{depth} 2^{-k} dist(2^k x, Z); the tail
// beyond depth 20 is below 2^-20.
double takagi(double x, int depth = 20);

// Brute-force sup{|f(x)-f(y)| : |x-y| <= delta} over the level-`probe_level`
// grid; a lower estimate of the true modulus of continuity.
double modulus_of_continuity(const RealFunction& f, double delta,
                             int probe_level = kDefaultProbeLevel);

// Dense dyadic sampling of ||f||_inf; a lower estimate, exact when every
// extremum of f sits on the grid.
double sup_norm_estimate(const RealFunction& f, int probe_level);

}  // namespace faberframe
