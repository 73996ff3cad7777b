#include "faberframe/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace faberframe::serialize {

namespace {

std::string csv_preamble(const nlohmann::json& config) {
  std::string out = "# format_version: " + std::to_string(kFormatVersion) + "\n";
  out += "# config: " + config.dump() + "\n";
  return out;
}

nlohmann::json artifact_shell(const nlohmann::json& config) {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["config"] = config;
  return j;
}

const char* half_label(const FrameIndex& ix) {
  if (ix.affine()) return "affine";
  return ix.half == Half::First ? "first" : "second";
}

}  // namespace

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string coefficients_csv(const FrameSystem& system,
                             const CoefficientSequence& coeffs,
                             const nlohmann::json& config) {
  std::string out = csv_preamble(config);
  out += "n,level,position,half,lambda,value\n";
  for (std::int64_t n = 1; n <= coeffs.size(); ++n) {
    const CoefficientEntry e = coeffs.entry(n);
    const double lambda = system.lambda(n);
    out += std::to_string(e.index.n) + "," + std::to_string(e.index.level) +
           "," + std::to_string(e.index.position) + "," + half_label(e.index) +
           "," + (std::isnan(lambda) ? std::string() : format_double(lambda)) +
           "," + format_double(e.value) + "\n";
  }
  return out;
}

nlohmann::json coefficients_json(const FrameSystem& system,
                                 const CoefficientSequence& coeffs,
                                 const nlohmann::json& config) {
  nlohmann::json j = artifact_shell(config);
  nlohmann::json rows = nlohmann::json::array();
  for (std::int64_t n = 1; n <= coeffs.size(); ++n) {
    const CoefficientEntry e = coeffs.entry(n);
    nlohmann::json row;
    row["n"] = e.index.n;
    row["level"] = e.index.level;
    row["position"] = e.index.position;
    row["half"] = half_label(e.index);
    const double lambda = system.lambda(n);
    if (!std::isnan(lambda)) row["lambda"] = lambda;
    row["value"] = e.value;
    rows.push_back(std::move(row));
  }
  j["coefficients"] = std::move(rows);
  return j;
}

std::string error_table_csv(const std::vector<ErrorTableRow>& rows,
                            const nlohmann::json& config) {
  std::string out = csv_preamble(config);
  out += "m,n,error,bound,pass\n";
  for (const ErrorTableRow& r : rows) {
    out += std::to_string(r.level) + "," + std::to_string(r.count) + "," +
           format_double(r.error) + "," + format_double(r.bound) + "," +
           (r.pass ? "true" : "false") + "\n";
  }
  return out;
}

nlohmann::json error_table_json(const std::vector<ErrorTableRow>& rows,
                                const nlohmann::json& config) {
  nlohmann::json j = artifact_shell(config);
  nlohmann::json array = nlohmann::json::array();
  for (const ErrorTableRow& r : rows) {
    array.push_back({{"m", r.level},
                     {"n", r.count},
                     {"error", r.error},
                     {"bound", r.bound},
                     {"pass", r.pass}});
  }
  j["rows"] = std::move(array);
  return j;
}

std::string gram_table_csv(const std::vector<GramTableRow>& rows,
                           const nlohmann::json& config) {
  std::string out = csv_preamble(config);
  out += "window,truncation,defect,tolerance,pass\n";
  for (const GramTableRow& r : rows) {
    out += std::to_string(r.window) + "," + std::to_string(r.truncation) +
           "," + format_double(r.defect) + "," + format_double(r.tolerance) +
           "," + (r.pass ? "true" : "false") + "\n";
  }
  return out;
}

nlohmann::json gram_table_json(const std::vector<GramTableRow>& rows,
                               const nlohmann::json& config) {
  nlohmann::json j = artifact_shell(config);
  nlohmann::json array = nlohmann::json::array();
  for (const GramTableRow& r : rows) {
    array.push_back({{"window", r.window},
                     {"truncation", r.truncation},
                     {"defect", r.defect},
                     {"tolerance", r.tolerance},
                     {"pass", r.pass}});
  }
  j["rows"] = std::move(array);
  return j;
}

std::string bessel_csv(const BesselReport& report, const nlohmann::json& config) {
  std::string out = csv_preamble(config);
  out += "x,f,sum,bound,ratio\n";
  for (const BesselPair& p : report.pairs) {
    out += p.x_id + "," + p.f_id + "," + format_double(p.sum) + "," +
           format_double(p.bound) + "," + format_double(p.ratio) + "\n";
  }
  return out;
}

nlohmann::json bessel_json(const BesselReport& report,
                           const nlohmann::json& config) {
  nlohmann::json j = artifact_shell(config);
  nlohmann::json pairs = nlohmann::json::array();
  for (const BesselPair& p : report.pairs) {
    pairs.push_back({{"x", p.x_id},
                     {"f", p.f_id},
                     {"sum", p.sum},
                     {"bound", p.bound},
                     {"ratio", p.ratio}});
  }
  j["truncation"] = report.truncation;
  j["norm_probe_level"] = report.norm_probe_level;
  j["pairs"] = std::move(pairs);
  j["skipped"] = report.skipped;
  j["max_ratio"] = report.max_ratio;
  return j;
}

std::string uncond_csv(const UnconditionalityReport& report,
                       const nlohmann::json& config) {
  std::string out = csv_preamble(config);
  out += "record,trial,cutoff,kind,detail,argmax_prefix,value\n";
  for (const TrialRecord& r : report.records) {
    out += "trial," + std::to_string(r.trial) + ",," + r.kind + "," + r.detail +
           "," + std::to_string(r.argmax_prefix) + "," + format_double(r.sup) +
           "\n";
  }
  for (const auto& [cutoff, sup] : report.tail_sups) {
    out += "tail,," + std::to_string(cutoff) + ",,,," + format_double(sup) + "\n";
  }
  return out;
}

nlohmann::json uncond_json(const UnconditionalityReport& report,
                           const nlohmann::json& config) {
  nlohmann::json j = artifact_shell(config);
  j["seed"] = report.seed;
  j["trials"] = report.trials;
  j["observed_sup"] = report.observed_sup;
  nlohmann::json records = nlohmann::json::array();
  for (const TrialRecord& r : report.records) {
    records.push_back({{"trial", r.trial},
                       {"kind", r.kind},
                       {"detail", r.detail},
                       {"argmax_prefix", r.argmax_prefix},
                       {"sup", r.sup}});
  }
  j["records"] = std::move(records);
  nlohmann::json tails = nlohmann::json::object();
  for (const auto& [cutoff, sup] : report.tail_sups) {
    tails[std::to_string(cutoff)] = sup;
  }
  j["tail_sups"] = std::move(tails);
  return j;
}

nlohmann::json non_basis_json(const NonBasisWitness& witness,
                              const nlohmann::json& config) {
  nlohmann::json j = artifact_shell(config);
  j["nonzero_coeffs"] = witness.nonzero_coeffs;
  j["synthesis_sup_norm"] = witness.synthesis_sup_norm;
  j["a_norm_prefix"] = witness.a_norm_prefix;
  return j;
}

std::string non_basis_csv(const NonBasisWitness& witness,
                          const nlohmann::json& config) {
  std::string out = csv_preamble(config);
  out += "nonzero_coeffs,synthesis_sup_norm,a_norm_prefix\n";
  out += std::string(witness.nonzero_coeffs ? "true" : "false") + "," +
         format_double(witness.synthesis_sup_norm) + "," +
         format_double(witness.a_norm_prefix) + "\n";
  return out;
}

std::string dump(const nlohmann::json& artifact) {
  return artifact.dump(2) + "\n";
}

}  // namespace faberframe::serialize
