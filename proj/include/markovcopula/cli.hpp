#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "markovcopula/consistency.hpp"
#include "markovcopula/copula.hpp"
#include "markovcopula/kolmogorov.hpp"
#include "markovcopula/model_io.hpp"
#include "markovcopula/montecarlo.hpp"
#include "markovcopula/report.hpp"
#include "markovcopula/version.hpp"

namespace markovcopula::cli {

namespace cli_detail {

// Operational failure (unreadable file, bad flag value, precondition break):
// message to stderr, exit 2. Certified mathematical failures exit 1 instead.
class CommandError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CommandError("cannot read file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline ModelFile parse_model_text(const std::string& path, const std::string& bytes) {
  try {
    return parse_model(bytes);
  } catch (const ModelParseError& e) {
    throw CommandError("parse error in '" + path + "' at " + e.context() + ": " +
                       std::string(e.what()).substr(e.context().size() + 2));
  }
}

inline std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double t = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      if (!(t >= 0.0)) throw CommandError("--grid times must be >= 0, got " + item);
      grid.push_back(t);
    } catch (const CommandError&) {
      throw;
    } catch (const std::exception&) {
      throw CommandError("--grid expects comma-separated numbers, got '" + item + "'");
    }
  }
  if (grid.empty()) throw CommandError("--grid must contain at least one time");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

// 16 log-spaced probe times on [0.01, 4], scaled by the inverse of the
// largest exit rate seen at those times (so fast chains are probed inside
// their transient and slow chains beyond it).
inline std::vector<double> default_probe_grid(const GeneratorFunction& g) {
  std::vector<double> base;
  const double lo = std::log(0.01), hi = std::log(4.0);
  for (std::size_t k = 0; k < 16; ++k)
    base.push_back(std::exp(lo + (hi - lo) * static_cast<double>(k) / 15.0));
  double rho = g.at(0.0).max_exit_rate();
  for (double t : base) rho = std::max(rho, g.at(t).max_exit_rate());
  if (!(rho > 0.0)) rho = 1.0;
  for (double& t : base) t /= rho;
  return base;
}

inline std::string join_args(int argc, const char* const* argv) {
  std::string echo;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) echo += ' ';
    echo += argv[i];
  }
  return echo;
}

inline void write_report(const ReportJson& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CommandError("cannot write report file '" + path + "'");
  out << report.dump(2) << "\n";
  if (!out) throw CommandError("failed writing report file '" + path + "'");
}

inline const char* violation_kind_name(RateMatrixViolation::Kind kind) {
  switch (kind) {
    case RateMatrixViolation::Kind::negative_off_diagonal: return "negative_off_diagonal";
    case RateMatrixViolation::Kind::positive_diagonal: return "positive_diagonal";
    case RateMatrixViolation::Kind::row_sum: return "row_sum";
  }
  return "?";
}

inline ReportJson violations_to_json(const StateSpace& space,
                                     const std::vector<TimedViolation>& violations) {
  ReportJson arr = ReportJson::array();
  for (const TimedViolation& tv : violations) {
    ReportJson j = ReportJson::object();
    j["time"] = tv.time;
    j["kind"] = violation_kind_name(tv.violation.kind);
    j["row"] = report_detail::config_label(space, tv.violation.row);
    if (tv.violation.kind == RateMatrixViolation::Kind::negative_off_diagonal)
      j["col"] = report_detail::config_label(space, tv.violation.col);
    j["value"] = tv.violation.value;
    j["description"] = tv.violation.describe();
    arr.push_back(std::move(j));
  }
  return arr;
}

// ---- validate ------------------------------------------------------------

struct ValidateOptions {
  std::string model_path;
  std::string out_path;
  std::string grid_text;
  bool grid_given = false;
};

inline int run_validate(const ValidateOptions& opt, const std::string& echo,
                        std::ostream& out) {
  const std::string bytes = read_file(opt.model_path);
  const ModelFile model = parse_model_text(opt.model_path, bytes);

  std::vector<double> grid =
      opt.grid_given ? parse_grid(opt.grid_text) : default_probe_grid(model.generator);
  for (double b : model.generator.all_breakpoints())
    if (b > 0.0) grid.push_back(b);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const ValidationReport vr = validate_generator(model.generator, grid);

  ReportJson report = report_envelope(echo, {{opt.model_path, bytes}});
  ReportJson result = ReportJson::object();
  result["states"] = model.space.flat_size();
  result["factors"] = model.space.num_factors();
  result["probe_times"] = grid;
  result["valid"] = vr.ok;
  result["violations"] = violations_to_json(model.space, vr.violations);
  report["result"] = std::move(result);
  if (!opt.out_path.empty()) write_report(report, opt.out_path);

  if (vr.ok) {
    out << "model '" << opt.model_path << "': valid generator on " << model.space.flat_size()
        << " states (" << model.space.num_factors() << " factor(s), " << grid.size()
        << " probe times)\n";
    return 0;
  }
  out << "model '" << opt.model_path << "': INVALID generator, " << vr.violations.size()
      << " violation(s)\n";
  for (const TimedViolation& tv : vr.violations)
    out << "  t=" << tv.time << ": " << tv.violation.describe() << "\n";
  return 1;
}

// ---- check ---------------------------------------------------------------

struct CheckOptions {
  std::string model_path;
  std::string out_path;
  std::string grid_text;
  bool grid_given = false;
  std::string mode = "both";
  std::string factor = "all";
  std::size_t depth = 2;
};

inline ReportJson strong_to_json(const StateSpace& space, const StrongCheckResult& sc) {
  ReportJson j = ReportJson::object();
  j["verdict"] = to_string(sc.verdict);
  ReportJson certs = ReportJson::array();
  if (sc.certificate) certs.push_back(certificate_to_json(space, *sc.certificate));
  j["certificates"] = std::move(certs);
  j["extracted_marginal"] = marginal_to_json(sc.extracted);
  j["notes"] = sc.notes;
  return j;
}

inline ReportJson weak_to_json(const StateSpace& space, const WeakCheckResult& wc) {
  ReportJson j = ReportJson::object();
  j["verdict"] = to_string(wc.verdict);
  ReportJson certs = ReportJson::array();
  for (const Certificate& c : wc.certificates)
    certs.push_back(certificate_to_json(space, c));
  j["certificates"] = std::move(certs);
  j["extracted_marginal"] = marginal_to_json(wc.extracted);
  j["notes"] = wc.notes;
  return j;
}

inline int run_check(const CheckOptions& opt, const std::string& echo, std::ostream& out) {
  const std::string bytes = read_file(opt.model_path);
  const ModelFile model = parse_model_text(opt.model_path, bytes);
  const StateSpace& space = model.space;
  if (space.num_factors() < 2)
    throw CommandError("check needs a factored model (>= 2 factors), got " +
                       std::to_string(space.num_factors()));
  if (opt.depth < 1 || opt.depth > 3)
    throw CommandError("--depth must be 1, 2, or 3");

  CheckMode mode;
  if (opt.mode == "strong") mode = CheckMode::strong_only;
  else if (opt.mode == "weak") mode = CheckMode::weak_only;
  else if (opt.mode == "both") mode = CheckMode::both;
  else throw CommandError("--mode must be strong, weak, or both, got '" + opt.mode + "'");

  std::vector<std::size_t> factors;
  if (opt.factor == "all") {
    for (std::size_t i = 0; i < space.num_factors(); ++i) factors.push_back(i);
  } else {
    try {
      std::size_t used = 0;
      const long idx = std::stol(opt.factor, &used);
      if (used != opt.factor.size()) throw std::invalid_argument(opt.factor);
      if (idx < 1 || static_cast<std::size_t>(idx) > space.num_factors())
        throw CommandError("--factor must be in 1.." + std::to_string(space.num_factors()) +
                           " or 'all', got " + opt.factor);
      factors.push_back(static_cast<std::size_t>(idx) - 1);
    } catch (const CommandError&) {
      throw;
    } catch (const std::exception&) {
      throw CommandError("--factor must be a 1-based index or 'all', got '" + opt.factor + "'");
    }
  }

  const std::vector<double> grid =
      opt.grid_given ? parse_grid(opt.grid_text) : default_probe_grid(model.generator);

  const ValidationReport vr = validate_generator(model.generator, grid);
  if (!vr.ok)
    throw CommandError("model is not a valid generator (t=" +
                       std::to_string(vr.violations.front().time) + ": " +
                       vr.violations.front().violation.describe() + "); run validate");

  ConsistencyReport cr;
  ConditionMReport m_report;
  try {
    cr = run_consistency(model.generator, model.initial_distribution, grid, opt.depth, mode,
                         factors);
    m_report = check_condition_M(model.generator, grid);
  } catch (const std::exception& e) {
    throw CommandError(e.what());
  }

  bool any_certificate = false;
  ReportJson factor_results = ReportJson::array();
  for (const FactorConsistency& fc : cr.factors) {
    ReportJson j = ReportJson::object();
    j["factor"] = fc.factor + 1;
    j["name"] = space.factor(fc.factor).name;
    if (fc.strong) {
      j["strong"] = strong_to_json(space, *fc.strong);
      any_certificate = any_certificate || fc.strong->certificate.has_value();
    }
    if (fc.weak) {
      j["weak"] = weak_to_json(space, *fc.weak);
      any_certificate = any_certificate || !fc.weak->certificates.empty();
    }
    j["immersion"] = to_string(fc.immersion);
    j["overall"] = to_string(fc.overall);
    factor_results.push_back(std::move(j));
  }

  ReportJson report = report_envelope(echo, {{opt.model_path, bytes}});
  ReportJson result = ReportJson::object();
  result["mode"] = opt.mode;
  result["event_depth"] = opt.depth;
  result["grid"] = grid;
  ReportJson m_json = ReportJson::object();
  m_json["holds_per_factor"] = m_report.holds;
  ReportJson m_viol = ReportJson::array();
  for (const ConditionMViolation& v : m_report.violations) {
    ReportJson vj = ReportJson::object();
    vj["time"] = v.time;
    vj["factor"] = v.factor + 1;
    vj["from_state"] = space.factor(v.factor).states[v.from_state];
    vj["to_state"] = space.factor(v.factor).states[v.to_state];
    vj["config_low"] = v.config_low_label;
    vj["config_high"] = v.config_high_label;
    vj["sum_low"] = v.sum_low;
    vj["sum_high"] = v.sum_high;
    vj["gap"] = v.gap;
    m_viol.push_back(std::move(vj));
  }
  m_json["violations"] = std::move(m_viol);
  result["condition_m"] = std::move(m_json);
  result["factor_results"] = std::move(factor_results);
  result["pass"] = !any_certificate;
  report["result"] = std::move(result);
  if (!opt.out_path.empty()) write_report(report, opt.out_path);

  for (const FactorConsistency& fc : cr.factors) {
    out << "factor " << fc.factor + 1 << " (" << space.factor(fc.factor).name << "): ";
    if (fc.strong) out << "strong=" << to_string(fc.strong->verdict) << " ";
    if (fc.weak) out << "weak=" << to_string(fc.weak->verdict) << " ";
    out << "overall=" << to_string(fc.overall) << "\n";
    if (fc.strong && fc.strong->certificate) {
      const Certificate& c = *fc.strong->certificate;
      out << "  certificate: t=" << c.time << " " << c.witness_high << " gives "
          << c.high_value << " vs " << c.witness_low << " gives " << c.low_value
          << " (gap " << c.gap << ")\n";
    }
    if (fc.weak)
      for (const Certificate& c : fc.weak->certificates)
        out << "  certificate: t=" << c.time << " " << c.witness_high << " gives "
            << c.high_value << " vs " << c.witness_low << " gives " << c.low_value
            << " (gap " << c.gap << ")\n";
  }
  out << (any_certificate ? "inconsistency certified\n" : "all requested checks passed\n");
  return any_certificate ? 1 : 0;
}

// ---- build ---------------------------------------------------------------

struct BuildOptions {
  std::vector<std::string> marginal_paths;
  std::string out_path;
  std::string out_model_path;
  std::string grid_text;
  bool grid_given = false;
  std::string objective = "maximize_common_jumps";
};

inline int run_build(const BuildOptions& opt, const std::string& echo, std::ostream& out) {
  CopulaObjective objective;
  if (opt.objective == "independent") objective = CopulaObjective::independent;
  else if (opt.objective == "maximize_common_jumps")
    objective = CopulaObjective::maximize_common_jumps;
  else if (opt.objective == "minimize_common_jumps")
    objective = CopulaObjective::minimize_common_jumps;
  else
    throw CommandError(
        "--objective must be independent, maximize_common_jumps, or minimize_common_jumps, "
        "got '" + opt.objective + "'");

  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<ModelFile> marginal_models;
  for (const std::string& path : opt.marginal_paths) {
    std::string bytes = read_file(path);
    marginal_models.push_back(parse_model_text(path, bytes));
    inputs.emplace_back(path, std::move(bytes));
  }

  CopulaProblem problem;
  problem.objective = objective;
  for (const ModelFile& m : marginal_models) problem.marginals.push_back(m.generator);
  if (opt.grid_given) {
    problem.probe_times = parse_grid(opt.grid_text);
  } else {
    bool time_dependent = false;
    for (const ModelFile& m : marginal_models)
      time_dependent = time_dependent || m.generator.time_dependent();
    if (time_dependent) {
      double rho = 0.0;
      std::vector<double> base;
      const double lo = std::log(0.01), hi = std::log(4.0);
      for (std::size_t k = 0; k < 16; ++k)
        base.push_back(std::exp(lo + (hi - lo) * static_cast<double>(k) / 15.0));
      for (const ModelFile& m : marginal_models) {
        rho = std::max(rho, m.generator.at(0.0).max_exit_rate());
        for (double t : base) rho = std::max(rho, m.generator.at(t).max_exit_rate());
      }
      if (!(rho > 0.0)) rho = 1.0;
      for (double t : base) problem.probe_times.push_back(t / rho);
    }
  }

  CopulaSolution solution{GeneratorFunction::constant(binary_space("X"), Matrix(2, 2))};
  try {
    solution = build_strong_copula(problem);
  } catch (const std::exception& e) {
    throw CommandError(e.what());
  }

  // Joint initial law: the product of the marginal initial laws.
  const StateSpace& joint_space = solution.generator.space();
  std::vector<double> weights(joint_space.flat_size(), 1.0);
  for (std::size_t x = 0; x < joint_space.flat_size(); ++x)
    for (std::size_t i = 0; i < joint_space.num_factors(); ++i)
      weights[x] *= marginal_models[i].initial_distribution[joint_space.coordinate(x, i)];
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw CommandError("marginal initial laws have empty product support");
  for (double& w : weights) w /= total;
  ModelFile joint{joint_space, Distribution(joint_space, std::move(weights)),
                  solution.generator};

  std::vector<GeneratorFunction> marginal_generators;
  for (const ModelFile& m : marginal_models) marginal_generators.push_back(m.generator);
  const StrongCopulaVerification verification =
      verify_strong_copula(solution.generator, marginal_generators, solution.probe_times);

  ReportJson report = report_envelope(echo, inputs);
  ReportJson result = ReportJson::object();
  result["objective"] = to_string(objective);
  result["status"] = to_string(solution.status);
  result["probe_times"] = solution.probe_times;
  result["objective_values"] = solution.objective_values;
  result["max_constraint_residual"] = solution.residual;
  ReportJson vj = ReportJson::object();
  vj["pass"] = verification.pass;
  vj["max_residual"] = verification.max_residual;
  result["verification"] = std::move(vj);
  result["model"] = model_to_json(joint);
  report["result"] = std::move(result);
  if (!opt.out_path.empty()) write_report(report, opt.out_path);

  if (!opt.out_model_path.empty()) {
    try {
      save_model(joint, opt.out_model_path);
    } catch (const std::exception& e) {
      throw CommandError(e.what());
    }
    out << "joint model written to '" << opt.out_model_path << "'\n";
  } else {
    out << write_model(joint);
  }
  out << "objective " << opt.objective << ": status " << to_string(solution.status)
      << ", worst constraint residual " << solution.residual << "\n";
  return verification.pass ? 0 : 1;
}

// ---- simulate ------------------------------------------------------------

struct SimulateOptions {
  std::string model_path;
  std::string out_path;
  std::string report_kind = "stats";
  double horizon = 1.0;
  std::size_t n_paths = 10000;
  std::uint64_t seed = 0;
};

inline int run_simulate(const SimulateOptions& opt, const std::string& echo,
                        std::ostream& out) {
  if (opt.n_paths == 0) throw CommandError("--paths must be >= 1");
  if (!(opt.horizon > 0.0)) throw CommandError("--t must be > 0");
  const std::string bytes = read_file(opt.model_path);
  const ModelFile model = parse_model_text(opt.model_path, bytes);
  const StateSpace& space = model.space;

  ReportJson report = report_envelope(echo, {{opt.model_path, bytes}});
  ReportJson result = ReportJson::object();
  result["report"] = opt.report_kind;
  result["horizon"] = opt.horizon;
  result["paths"] = opt.n_paths;
  result["seed"] = opt.seed;

  bool pass = false;
  if (opt.report_kind == "stats") {
    MartingaleReport mr{space};
    try {
      mr = martingale_residual_test(model.generator, model.initial_distribution, opt.horizon,
                                    opt.n_paths, opt.seed);
    } catch (const std::exception& e) {
      throw CommandError(e.what());
    }
    pass = mr.pass;
    result["pass"] = mr.pass;
    result["max_abs_z"] = mr.max_abs_z();
    ReportJson pairs = ReportJson::array();
    for (std::size_t v = 0; v < space.flat_size(); ++v)
      for (std::size_t w = 0; w < space.flat_size(); ++w) {
        if (v == w) continue;
        ReportJson pj = ReportJson::object();
        pj["from"] = report_detail::config_label(space, v);
        pj["to"] = report_detail::config_label(space, w);
        pj["mean_residual"] = mr.mean_residual(v, w);
        pj["standard_error"] = mr.standard_error(v, w);
        pj["z"] = mr.z_score(v, w);
        pairs.push_back(std::move(pj));
      }
    result["pairs"] = std::move(pairs);
    out << "martingale residual test: " << (pass ? "PASS" : "FAIL") << " (max |z| = "
        << mr.max_abs_z() << " over " << opt.n_paths << " paths)\n";
  } else if (opt.report_kind == "empirical") {
    EmpiricalTransition emp{space};
    try {
      emp = empirical_transition(model.generator, model.initial_distribution, opt.horizon,
                                 opt.n_paths, opt.seed);
    } catch (const std::exception& e) {
      throw CommandError(e.what());
    }
    const Distribution expected = evolve(model.initial_distribution, model.generator,
                                         opt.horizon);
    const EmpiricalComparison cmp = compare_empirical(emp, expected);
    pass = cmp.pass;
    result["pass"] = cmp.pass;
    result["max_sigma"] = cmp.max_sigma;
    ReportJson states = ReportJson::array();
    for (std::size_t x = 0; x < space.flat_size(); ++x) {
      ReportJson sj = ReportJson::object();
      sj["state"] = report_detail::config_label(space, x);
      sj["frequency"] = emp.frequency[x];
      sj["expected"] = cmp.expected[x];
      sj["standard_error"] = cmp.sigma[x];
      states.push_back(std::move(sj));
    }
    result["states"] = std::move(states);
    out << "empirical frequencies at t=" << opt.horizon << ": " << (pass ? "PASS" : "FAIL")
        << " (worst deviation " << cmp.max_sigma << " sigma over " << opt.n_paths
        << " paths)\n";
  } else {
    throw CommandError("--report must be stats or empirical, got '" + opt.report_kind + "'");
  }

  report["result"] = std::move(result);
  if (!opt.out_path.empty()) write_report(report, opt.out_path);
  return pass ? 0 : 1;
}

}  // namespace cli_detail

// Entry point shared by the installed binary and in-process tests. Returns
// the process exit code: 0 pass, 1 certified failure, 2 operational error.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;

  CLI::App app{"finite-state Markov copula toolkit: validate, audit, build, and simulate "
               "multivariate Markov chain models"};
  app.require_subcommand(1);

  ValidateOptions validate_opt;
  CLI::App* validate = app.add_subcommand(
      "validate", "check that a model file parses and its generator is valid");
  validate->add_option("model", validate_opt.model_path, "model JSON file")->required();
  CLI::Option* validate_grid =
      validate->add_option("--grid", validate_opt.grid_text,
                           "comma-separated probe times (default: auto log-spaced grid)");
  validate->add_option("--out", validate_opt.out_path, "write the machine report here");

  CheckOptions check_opt;
  CLI::App* check = app.add_subcommand(
      "check", "audit a factored model for strong/weak Markovian consistency");
  check->add_option("model", check_opt.model_path, "model JSON file")->required();
  check->add_option("--mode", check_opt.mode, "strong | weak | both (default both)");
  CLI::Option* check_grid =
      check->add_option("--grid", check_opt.grid_text,
                        "comma-separated probe times (default: auto log-spaced grid)");
  check->add_option("--depth", check_opt.depth, "path-event depth 1..3 (default 2)");
  check->add_option("--factor", check_opt.factor,
                    "1-based factor index or 'all' (default all)");
  check->add_option("--out", check_opt.out_path, "write the machine report here");

  BuildOptions build_opt;
  CLI::App* build = app.add_subcommand(
      "build", "construct a joint model with the given marginal models");
  build->add_option("marginals", build_opt.marginal_paths, "marginal model JSON files")
      ->required()
      ->expected(-2);
  build->add_option("--objective", build_opt.objective,
                    "independent | maximize_common_jumps | minimize_common_jumps "
                    "(default maximize_common_jumps)");
  CLI::Option* build_grid =
      build->add_option("--grid", build_opt.grid_text,
                        "comma-separated probe times for the coupling constraints");
  build->add_option("--out-model", build_opt.out_model_path,
                    "write the joint model here (default: print to stdout)");
  build->add_option("--out", build_opt.out_path, "write the machine report here");

  SimulateOptions simulate_opt;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "sample paths and run statistical diagnostics against the model");
  simulate->add_option("model", simulate_opt.model_path, "model JSON file")->required();
  simulate->add_option("--t", simulate_opt.horizon, "time horizon (default 1)");
  simulate->add_option("--paths", simulate_opt.n_paths, "number of paths (default 10000)");
  simulate->add_option("--seed", simulate_opt.seed, "random seed (default 0)");
  simulate->add_option("--report", simulate_opt.report_kind,
                       "stats (martingale residuals) | empirical (state frequencies)");
  simulate->add_option("--out", simulate_opt.out_path, "write the machine report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  validate_opt.grid_given = validate_grid->count() > 0;
  check_opt.grid_given = check_grid->count() > 0;
  build_opt.grid_given = build_grid->count() > 0;

  const std::string echo = join_args(argc, argv);
  const auto started = std::chrono::steady_clock::now();
  int code = 2;
  try {
    if (*validate) code = run_validate(validate_opt, echo, out);
    else if (*check) code = run_check(check_opt, echo, out);
    else if (*build) code = run_build(build_opt, echo, out);
    else if (*simulate) code = run_simulate(simulate_opt, echo, out);
  } catch (const CommandError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - started);
  out << "completed in " << elapsed.count() << " ms\n";
  return code;
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  return run(argc, const_cast<const char* const*>(argv), out, err);
}

}  // namespace markovcopula::cli
