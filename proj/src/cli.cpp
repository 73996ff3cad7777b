#include "faberframe/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "faberframe/diagnostics.hpp"
#include "faberframe/rng.hpp"
#include "faberframe/serialize.hpp"

namespace faberframe::cli {

namespace {

constexpr double kGramTolerance = 1e-10;
constexpr double kErrorBoundSlack = 1e-9;

struct Options {
  std::string config_path;
  std::string out_path;
  std::string format;

  int max_level = 6;
  std::string lambda_spec = "0";
  std::string function_id = "identity";
  std::int64_t truncation = 0;  // 0: full system size
  std::int64_t trials = 16;
  std::uint64_t seed = 1;
  std::vector<std::int64_t> windows;
  std::vector<std::int64_t> cutoffs;
  std::int64_t subsets = 64;
  int sample_level = kDefaultProbeLevel;
};

struct LambdaSpec {
  std::string mode = "constant";
  double constant = 0.0;
  std::vector<double> values;
  std::uint64_t seed = 0;
};

LambdaSpec parse_lambda_spec(const std::string& text) {
  LambdaSpec spec;
  if (text.rfind("seed:", 0) == 0) {
    spec.mode = "seeded";
    spec.seed = std::stoull(text.substr(5));
    return spec;
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) {
      spec.mode = "constant";
      spec.constant = v;
      return spec;
    }
  } catch (const std::exception&) {
    // fall through to file handling
  }
  std::ifstream in(text);
  if (!in) {
    throw ScheduleError("lambda spec is neither a number, seed:<int>, nor a readable file: " + text);
  }
  spec.mode = "explicit";
  double v = 0.0;
  while (in >> v) spec.values.push_back(v);
  if (spec.values.empty()) {
    throw ScheduleError("lambda file holds no values: " + text);
  }
  return spec;
}

LambdaSpec lambda_spec_from_json(const nlohmann::json& j) {
  LambdaSpec spec;
  spec.mode = j.at("mode").get<std::string>();
  if (spec.mode == "constant") {
    spec.constant = j.at("value").get<double>();
  } else if (spec.mode == "explicit") {
    spec.values = j.at("value").get<std::vector<double>>();
  } else if (spec.mode == "seeded") {
    spec.seed = j.at("value").get<std::uint64_t>();
  } else {
    throw ScheduleError("unknown lambda mode: " + spec.mode);
  }
  return spec;
}

nlohmann::json lambda_spec_to_json(const LambdaSpec& spec) {
  nlohmann::json j;
  j["mode"] = spec.mode;
  if (spec.mode == "constant") j["value"] = spec.constant;
  if (spec.mode == "explicit") j["value"] = spec.values;
  if (spec.mode == "seeded") j["value"] = spec.seed;
  return j;
}

LambdaSchedule make_schedule(const LambdaSpec& spec) {
  if (spec.mode == "constant") return LambdaSchedule::constant(spec.constant);
  if (spec.mode == "explicit") return LambdaSchedule::explicit_values(spec.values);
  return LambdaSchedule::seeded(spec.seed);
}

// Ordinates sampled on a dyadic grid, one row per point:
// point_numerator, point_level, value. Every point of the finest level's grid
// must be covered exactly once.
CorpusFunction load_sampled_function(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open function file: " + path);
  std::map<DyadicRational, double> points;
  int level = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    std::int64_t numerator = 0;
    int point_level = 0;
    double value = 0.0;
    if (!(row >> numerator >> point_level >> value)) {
      if (points.empty()) continue;  // header row
      throw std::invalid_argument("malformed sample row: " + line);
    }
    const DyadicRational p(numerator, point_level);
    if (points.count(p)) {
      throw std::invalid_argument("duplicate sample point in " + path);
    }
    points[p] = value;
    level = std::max(level, p.level());
  }
  DyadicGrid grid(level);
  Eigen::VectorXd values(grid.size());
  for (std::int64_t i = 0; i < grid.size(); ++i) {
    const auto it = points.find(grid.point(i));
    if (it == points.end()) {
      throw std::invalid_argument("sample grid incomplete at point " +
                                  std::to_string(i) + "/2^" +
                                  std::to_string(level));
    }
    values[i] = it->second;
  }
  if (static_cast<std::int64_t>(points.size()) != grid.size()) {
    throw std::invalid_argument("sample points do not form a dyadic grid");
  }
  auto fn = std::make_shared<PiecewiseLinearFn>(level, std::move(values));
  CorpusFunction out;
  out.id = path;
  out.eval = [fn](double x) { return (*fn)(x); };
  out.tag = CorpusFunction::Regularity::Continuous;
  return out;
}

CorpusFunction resolve_function(const std::string& id) {
  const std::vector<CorpusFunction> corpus = builtin_corpus();
  if (const CorpusFunction* f = find_function(corpus, id)) return *f;
  if (std::filesystem::exists(id)) return load_sampled_function(id);
  std::string known;
  for (const CorpusFunction& f : corpus) {
    if (!known.empty()) known += ", ";
    known += f.id;
  }
  throw std::invalid_argument("unknown function '" + id +
                              "'; built-ins: " + known);
}

void write_artifact(const std::string& out_path, const std::string& payload,
                    std::ostream& fallback) {
  if (out_path.empty()) {
    fallback << payload;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file: " + out_path);
  file << payload;
}

struct Context {
  Options opts;
  LambdaSpec lambda;
  std::string command;

  std::int64_t truncation_or(std::int64_t fallback) const {
    return opts.truncation > 0 ? opts.truncation : fallback;
  }

  nlohmann::json resolved_config() const {
    nlohmann::json j;
    j["command"] = command;
    j["max_level"] = opts.max_level;
    j["lambda"] = lambda_spec_to_json(lambda);
    j["function"] = opts.function_id;
    j["truncation"] = opts.truncation;
    j["trials"] = opts.trials;
    j["seed"] = opts.seed;
    j["windows"] = opts.windows;
    j["cutoffs"] = opts.cutoffs;
    j["subsets"] = opts.subsets;
    j["sample_level"] = opts.sample_level;
    j["format"] = opts.format;
    return j;
  }
};

int cmd_expand(const Context& ctx, std::ostream& out, std::ostream& err) {
  if (ctx.opts.out_path.empty()) {
    err << "expand writes a coefficient file plus a sidecar; --out is required\n";
    return kExitConfig;
  }
  const FrameSystem system =
      FrameSystem::build(ctx.opts.max_level, make_schedule(ctx.lambda));
  const CorpusFunction f = resolve_function(ctx.opts.function_id);
  const std::int64_t count = ctx.truncation_or(system.size());
  const CoefficientSequence coeffs = analyze(system, f.eval, count);
  const nlohmann::json config = ctx.resolved_config();

  if (ctx.opts.format == "json") {
    write_artifact(ctx.opts.out_path,
                   serialize::dump(serialize::coefficients_json(system, coeffs, config)),
                   out);
  } else {
    write_artifact(ctx.opts.out_path,
                   serialize::coefficients_csv(system, coeffs, config), out);
  }

  nlohmann::json sidecar;
  sidecar["format_version"] = serialize::kFormatVersion;
  sidecar["config"] = config;
  nlohmann::json samples = nlohmann::json::array();
  for (std::int64_t n = 2; n <= count; n *= 2) {
    samples.push_back(
        {{"n", n},
         {"sup_error",
          reconstruction_error(system, f.eval, n, ctx.opts.sample_level)}});
  }
  sidecar["reconstruction_errors"] = std::move(samples);
  write_artifact(ctx.opts.out_path + ".sidecar.json", serialize::dump(sidecar),
                 out);
  return kExitOk;
}

int cmd_error_table(const Context& ctx, std::ostream& out, std::ostream&) {
  const FrameSystem system =
      FrameSystem::build(ctx.opts.max_level, make_schedule(ctx.lambda));
  const CorpusFunction f = resolve_function(ctx.opts.function_id);
  std::vector<serialize::ErrorTableRow> rows;
  bool all_pass = true;
  for (int m = 1; m <= ctx.opts.max_level; ++m) {
    serialize::ErrorTableRow row;
    row.level = m;
    row.count = std::int64_t{1} << m;
    row.error = reconstruction_error(system, f.eval, row.count,
                                     ctx.opts.sample_level);
    row.bound = 2.0 * modulus_of_continuity(f.eval, std::ldexp(1.0, -(m - 1)),
                                            ctx.opts.sample_level);
    row.pass = row.error <= row.bound + kErrorBoundSlack;
    all_pass = all_pass && row.pass;
    rows.push_back(row);
  }
  const nlohmann::json config = ctx.resolved_config();
  if (ctx.opts.format == "json") {
    write_artifact(ctx.opts.out_path,
                   serialize::dump(serialize::error_table_json(rows, config)), out);
  } else {
    write_artifact(ctx.opts.out_path, serialize::error_table_csv(rows, config),
                   out);
  }
  return all_pass ? kExitOk : kExitContract;
}

int cmd_bessel(const Context& ctx, std::ostream& out, std::ostream&) {
  const FrameSystem system =
      FrameSystem::build(ctx.opts.max_level, make_schedule(ctx.lambda));
  const std::int64_t count = ctx.truncation_or(system.size());
  std::vector<NamedFunctional> duals;
  duals.push_back({"delta_0", FunctionalSample::delta(DyadicRational(0, 0))});
  duals.push_back({"delta_1", FunctionalSample::delta(DyadicRational(1, 0))});
  duals.push_back({"delta_half", FunctionalSample::delta(DyadicRational(1, 1))});
  for (std::int64_t t = 0; t < ctx.opts.trials; ++t) {
    duals.push_back({"rand" + std::to_string(t),
                     random_functional(mix_seed(ctx.opts.seed, t))});
  }
  const BesselReport report =
      estimate_bessel_constant(system, builtin_corpus(), duals, count);
  const nlohmann::json config = ctx.resolved_config();
  if (ctx.opts.format == "csv") {
    write_artifact(ctx.opts.out_path, serialize::bessel_csv(report, config), out);
  } else {
    write_artifact(ctx.opts.out_path,
                   serialize::dump(serialize::bessel_json(report, config)), out);
  }
  return kExitOk;
}

int cmd_uncond(const Context& ctx, std::ostream& out, std::ostream&) {
  const FrameSystem system =
      FrameSystem::build(ctx.opts.max_level, make_schedule(ctx.lambda));
  const CorpusFunction f = resolve_function(ctx.opts.function_id);
  const std::int64_t count = ctx.truncation_or(system.size());
  const CoefficientSequence coeffs = analyze(system, f.eval, count);

  std::vector<std::int64_t> cutoffs = ctx.opts.cutoffs;
  if (cutoffs.empty()) {
    for (std::int64_t k = 1; k <= count; k *= 2) cutoffs.push_back(k);
  }

  const UnconditionalityReport perms =
      permutation_probe(system, coeffs, ctx.opts.trials, ctx.opts.seed);
  const UnconditionalityReport signs =
      sign_probe(system, coeffs, ctx.opts.trials, ctx.opts.seed);
  const UnconditionalityReport tails =
      tail_probe(system, coeffs, cutoffs, ctx.opts.subsets, ctx.opts.seed);

  UnconditionalityReport merged;
  merged.seed = ctx.opts.seed;
  merged.trials = ctx.opts.trials;
  merged.observed_sup = std::max(
      {perms.observed_sup, signs.observed_sup, tails.observed_sup});
  merged.records = perms.records;
  merged.records.insert(merged.records.end(), signs.records.begin(),
                        signs.records.end());
  merged.tail_sups = tails.tail_sups;

  const nlohmann::json config = ctx.resolved_config();
  if (ctx.opts.format == "csv") {
    write_artifact(ctx.opts.out_path, serialize::uncond_csv(merged, config), out);
  } else {
    write_artifact(ctx.opts.out_path,
                   serialize::dump(serialize::uncond_json(merged, config)), out);
  }
  return kExitOk;
}

int cmd_gram(const Context& ctx, std::ostream& out, std::ostream&) {
  std::vector<std::int64_t> windows = ctx.opts.windows;
  if (windows.empty()) windows = {4, 8, 16};
  std::int64_t needed = 2;
  for (const std::int64_t w : windows) {
    needed = std::max(needed, std::int64_t{2} << index_level(std::max<std::int64_t>(w, 1)));
  }
  const std::int64_t count = ctx.truncation_or(needed);
  const FrameSystem system =
      FrameSystem::build(ctx.opts.max_level, make_schedule(ctx.lambda));
  const GramTruncation gram = gram_matrix(system, count);

  std::vector<serialize::GramTableRow> rows;
  bool all_pass = true;
  for (const std::int64_t w : windows) {
    serialize::GramTableRow row;
    row.window = w;
    row.truncation = count;
    row.defect = projection_defect(gram, w);
    row.tolerance = kGramTolerance;
    row.pass = row.defect <= row.tolerance;
    all_pass = all_pass && row.pass;
    rows.push_back(row);
  }
  const nlohmann::json config = ctx.resolved_config();
  if (ctx.opts.format == "json") {
    write_artifact(ctx.opts.out_path,
                   serialize::dump(serialize::gram_table_json(rows, config)), out);
  } else {
    write_artifact(ctx.opts.out_path, serialize::gram_table_csv(rows, config),
                   out);
  }
  return all_pass ? kExitOk : kExitContract;
}

int cmd_demo_nonbasis(const Context& ctx, std::ostream& out, std::ostream&) {
  const FrameSystem system =
      FrameSystem::build(1, make_schedule(ctx.lambda));
  const CoefficientSequence coeffs(std::vector<double>{0.0, 0.0, 1.0, -1.0});
  serialize::NonBasisWitness witness;
  witness.nonzero_coeffs = true;
  witness.synthesis_sup_norm = synthesize(system, coeffs).sup_norm();
  witness.a_norm_prefix = a_norm(system, coeffs);

  const nlohmann::json config = ctx.resolved_config();
  if (ctx.opts.format == "csv") {
    write_artifact(ctx.opts.out_path, serialize::non_basis_csv(witness, config),
                   out);
  } else {
    write_artifact(ctx.opts.out_path,
                   serialize::dump(serialize::non_basis_json(witness, config)),
                   out);
  }
  const bool ok = witness.synthesis_sup_norm <= 1e-15 &&
                  std::abs(witness.a_norm_prefix - 1.0) <= 1e-15;
  return ok ? kExitOk : kExitContract;
}

int cmd_corpus_list(std::ostream& out) {
  for (const CorpusFunction& f : builtin_corpus()) {
    out << f.id << "\t" << f.regularity_label() << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"lambda-split hat expansions of continuous functions on [0,1]"};
  app.require_subcommand(1);

  Options opts;
  std::string config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; flags override");
    sub->add_option("--out", opts.out_path, "output path (default: stdout)");
    sub->add_option("--format", opts.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", opts.seed, "seed for all randomized probes");
    sub->add_option("--max-level", opts.max_level, "system depth L; indices run to 2^{L+1}")
        ->check(CLI::Range(1, kMaxLevel));
    sub->add_option("--lambda", opts.lambda_spec,
                    "<float> | <file of floats> | seed:<int>");
    sub->add_option("--function", opts.function_id,
                    "corpus id or sampled-grid CSV path");
    sub->add_option("--truncation", opts.truncation,
                    "number of frame indices to use (default: whole system)");
    sub->add_option("--trials", opts.trials, "probe trial count");
    sub->add_option("--window", opts.windows, "projection window(s)");
    sub->add_option("--cutoffs", opts.cutoffs, "tail probe cutoffs");
    sub->add_option("--subsets", opts.subsets, "subsets sampled per cutoff");
    sub->add_option("--sample-level", opts.sample_level,
                    "dyadic grid level for error sampling")
        ->check(CLI::Range(0, kMaxLevel));
    return sub;
  };

  CLI::App* expand = add_common(app.add_subcommand(
      "expand", "write the coefficient table of a function"));
  CLI::App* error_table = add_common(app.add_subcommand(
      "error-table", "uniform error vs. modulus-of-continuity bound per level"));
  CLI::App* bessel = add_common(app.add_subcommand(
      "bessel", "empirical besselian ratios over corpus/dual-ball pairs"));
  CLI::App* uncond = add_common(app.add_subcommand(
      "uncond", "permutation, sign and tail probes (evidence only)"));
  CLI::App* gram = add_common(app.add_subcommand(
      "gram", "projection defect of the coefficient-space matrix"));
  CLI::App* demo = add_common(app.add_subcommand(
      "demo-nonbasis", "two expansions of zero: the redundancy witness"));
  CLI::App* corpus = app.add_subcommand("corpus", "built-in functions");
  CLI::App* corpus_list = corpus->add_subcommand("list", "list corpus ids");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  }

  try {
    Context ctx;

    // config file first, then flag overrides
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        throw std::invalid_argument("cannot open config file: " + config_path);
      }
      const nlohmann::json j = nlohmann::json::parse(in);
      CLI::App* active = app.get_subcommands().front();
      if (j.contains("max_level") && !active->count("--max-level")) {
        opts.max_level = j.at("max_level").get<int>();
      }
      if (j.contains("lambda") && !active->count("--lambda")) {
        ctx.lambda = lambda_spec_from_json(j.at("lambda"));
      } else {
        ctx.lambda = parse_lambda_spec(opts.lambda_spec);
      }
      if (j.contains("function") && !active->count("--function")) {
        opts.function_id = j.at("function").get<std::string>();
      }
      if (j.contains("truncation") && !active->count("--truncation")) {
        opts.truncation = j.at("truncation").get<std::int64_t>();
      }
      if (j.contains("trials") && !active->count("--trials")) {
        opts.trials = j.at("trials").get<std::int64_t>();
      }
      if (j.contains("seed") && !active->count("--seed")) {
        opts.seed = j.at("seed").get<std::uint64_t>();
      }
      if (j.contains("windows") && !active->count("--window")) {
        opts.windows = j.at("windows").get<std::vector<std::int64_t>>();
      }
      if (j.contains("cutoffs") && !active->count("--cutoffs")) {
        opts.cutoffs = j.at("cutoffs").get<std::vector<std::int64_t>>();
      }
      if (j.contains("subsets") && !active->count("--subsets")) {
        opts.subsets = j.at("subsets").get<std::int64_t>();
      }
      if (j.contains("sample_level") && !active->count("--sample-level")) {
        opts.sample_level = j.at("sample_level").get<int>();
      }
      if (j.contains("format") && !active->count("--format")) {
        opts.format = j.at("format").get<std::string>();
      }
      if (j.contains("out") && !active->count("--out")) {
        opts.out_path = j.at("out").get<std::string>();
      }
    } else {
      ctx.lambda = parse_lambda_spec(opts.lambda_spec);
    }
    ctx.opts = opts;

    if (expand->parsed()) {
      ctx.command = "expand";
      if (ctx.opts.format.empty()) ctx.opts.format = "csv";
      return cmd_expand(ctx, out, err);
    }
    if (error_table->parsed()) {
      ctx.command = "error-table";
      if (ctx.opts.format.empty()) ctx.opts.format = "csv";
      return cmd_error_table(ctx, out, err);
    }
    if (bessel->parsed()) {
      ctx.command = "bessel";
      if (ctx.opts.format.empty()) ctx.opts.format = "json";
      return cmd_bessel(ctx, out, err);
    }
    if (uncond->parsed()) {
      ctx.command = "uncond";
      if (ctx.opts.format.empty()) ctx.opts.format = "json";
      return cmd_uncond(ctx, out, err);
    }
    if (gram->parsed()) {
      ctx.command = "gram";
      if (ctx.opts.format.empty()) ctx.opts.format = "csv";
      return cmd_gram(ctx, out, err);
    }
    if (demo->parsed()) {
      ctx.command = "demo-nonbasis";
      if (ctx.opts.format.empty()) ctx.opts.format = "json";
      return cmd_demo_nonbasis(ctx, out, err);
    }
    if (corpus->parsed()) {
      if (!corpus_list->parsed()) {
        err << "usage: corpus list\n";
        return kExitConfig;
      }
      return cmd_corpus_list(out);
    }
    err << "no subcommand selected\n";
    return kExitConfig;
  } catch (const ScheduleError& e) {
    err << "schedule error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace faberframe::cli
