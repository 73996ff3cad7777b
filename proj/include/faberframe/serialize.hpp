#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "faberframe/diagnostics.hpp"
#include "faberframe/frame.hpp"

namespace faberframe::serialize {

inline constexpr int kFormatVersion = 1;

// Shortest round-trip decimal; identical output for identical doubles.
std::string format_double(double v);

struct ErrorTableRow {
  int level = 0;            // m
  std::int64_t count = 0;   // n = 2^m
  double error = 0.0;
  double bound = 0.0;       // 2 * omega_f(2^{-(m-1)}) + slack
  bool pass = false;
};

struct GramTableRow {
  std::int64_t window = 0;
  std::int64_t truncation = 0;
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct NonBasisWitness {
  bool nonzero_coeffs = false;
  double synthesis_sup_norm = 0.0;
  double a_norm_prefix = 0.0;
};

// Coefficient table, exact column order: n, level, position, half, lambda,
// value. The lambda cell is empty for the affine pair.
std::string coefficients_csv(const FrameSystem& system,
                             const CoefficientSequence& coeffs,
                             const nlohmann::json& config);
nlohmann::json coefficients_json(const FrameSystem& system,
                                 const CoefficientSequence& coeffs,
                                 const nlohmann::json& config);

std::string error_table_csv(const std::vector<ErrorTableRow>& rows,
                            const nlohmann::json& config);
nlohmann::json error_table_json(const std::vector<ErrorTableRow>& rows,
                                const nlohmann::json& config);

std::string gram_table_csv(const std::vector<GramTableRow>& rows,
                           const nlohmann::json& config);
nlohmann::json gram_table_json(const std::vector<GramTableRow>& rows,
                               const nlohmann::json& config);

std::string bessel_csv(const BesselReport& report, const nlohmann::json& config);
nlohmann::json bessel_json(const BesselReport& report,
                           const nlohmann::json& config);

std::string uncond_csv(const UnconditionalityReport& report,
                       const nlohmann::json& config);
nlohmann::json uncond_json(const UnconditionalityReport& report,
                           const nlohmann::json& config);

nlohmann::json non_basis_json(const NonBasisWitness& witness,
                              const nlohmann::json& config);
std::string non_basis_csv(const NonBasisWitness& witness,
                          const nlohmann::json& config);

// Serializes a JSON artifact with sorted keys and a trailing newline.
std::string dump(const nlohmann::json& artifact);

}  // namespace faberframe::serialize
