#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "markovcopula/consistency.hpp"
#include "markovcopula/generator.hpp"
#include "markovcopula/kolmogorov.hpp"
#include "markovcopula/simplex.hpp"
#include "markovcopula/state_space.hpp"

namespace markovcopula {

// ---------------------------------------------------------------------------
// Problem statement
// ---------------------------------------------------------------------------

enum class CopulaObjective {
  independent,             // no optimization: Kronecker-sum coupling
  maximize_common_jumps,   // maximize total simultaneous-jump rate
  maximize_weighted,       // maximize a weighted sum of simultaneous-jump rates
  minimize_common_jumps,   // minimize total simultaneous-jump rate
};

inline const char* to_string(CopulaObjective o) {
  switch (o) {
    case CopulaObjective::independent: return "independent";
    case CopulaObjective::maximize_common_jumps: return "maximize_common_jumps";
    case CopulaObjective::maximize_weighted: return "maximize_weighted";
    case CopulaObjective::minimize_common_jumps: return "minimize_common_jumps";
  }
  return "?";
}

struct CopulaProblem {
  std::vector<GeneratorFunction> marginals;  // one single-factor generator per coordinate
  CopulaObjective objective = CopulaObjective::independent;
  // Weights per simultaneous-jump entry of the product space, keyed by flat
  // (from, to); only meaningful for maximize_weighted.
  std::map<std::pair<std::size_t, std::size_t>, double> weights;
  std::vector<double> probe_times;  // may be empty when all marginals are constant
};

enum class SolverStatus { optimal, feasible_fallback, infeasible_report };

inline const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::optimal: return "optimal";
    case SolverStatus::feasible_fallback: return "feasible_fallback";
    case SolverStatus::infeasible_report: return "infeasible_report";
  }
  return "?";
}

struct CopulaSolution {
  GeneratorFunction generator;
  std::vector<double> probe_times;       // times the system was solved at
  std::vector<double> objective_values;  // simultaneous-jump mass per probe time
  double residual = 0.0;                 // max marginal-constraint violation
  SolverStatus status = SolverStatus::optimal;

  explicit CopulaSolution(GeneratorFunction g) : generator(std::move(g)) {}
};

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

namespace copula_detail {

inline StateSpace product_space(const std::vector<GeneratorFunction>& marginals) {
  std::vector<Factor> factors;
  std::set<std::string> names;
  for (const GeneratorFunction& m : marginals) {
    if (m.space().num_factors() != 1)
      throw std::invalid_argument("copula marginals must live on single-factor spaces");
    const Factor& f = m.space().factor(0);
    if (!names.insert(f.name).second)
      throw std::invalid_argument("copula marginals must use distinct factor names ('" +
                                  f.name + "' repeats)");
    factors.push_back(f);
  }
  return StateSpace(std::move(factors));
}

// Number of coordinates in which two flat product states differ.
inline std::size_t changed_coordinates(const StateSpace& space, std::size_t v, std::size_t w) {
  std::size_t changed = 0;
  for (std::size_t i = 0; i < space.num_factors(); ++i)
    if (space.coordinate(v, i) != space.coordinate(w, i)) ++changed;
  return changed;
}

struct VariableTable {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // var index -> (from, to)
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
};

inline VariableTable make_variables(std::size_t flat_size) {
  VariableTable vt;
  for (std::size_t v = 0; v < flat_size; ++v)
    for (std::size_t w = 0; w < flat_size; ++w) {
      if (v == w) continue;
      vt.index[{v, w}] = vt.pairs.size();
      vt.pairs.push_back({v, w});
    }
  return vt;
}

// Marginal-matching equalities at one time: for every factor f, factor jump
// xf != yf, and complementary configuration, the joint rates out of that
// configuration summing over the other coordinates' targets must equal the
// factor's marginal rate.
inline void build_constraints(const StateSpace& space, const VariableTable& vt,
                              const std::vector<Matrix>& marginal_rates,
                              std::vector<std::vector<double>>& rows,
                              std::vector<double>& rhs) {
  for (std::size_t f = 0; f < space.num_factors(); ++f) {
    const std::size_t mf = space.factor_size(f);
    for (std::size_t xf = 0; xf < mf; ++xf)
      for (std::size_t yf = 0; yf < mf; ++yf) {
        if (xf == yf) continue;
        for (std::size_t cfg = 0; cfg < space.complement_size(f); ++cfg) {
          const std::size_t v = space.compose(f, xf, cfg);
          std::vector<double> row(vt.pairs.size(), 0.0);
          for (std::size_t w = 0; w < space.flat_size(); ++w)
            if (space.coordinate(w, f) == yf) row[vt.index.at({v, w})] = 1.0;
          rows.push_back(std::move(row));
          rhs.push_back(marginal_rates[f](xf, yf));
        }
      }
  }
}

inline Matrix assemble_matrix(const StateSpace& space, const VariableTable& vt,
                              const std::vector<double>& x) {
  Matrix m(space.flat_size(), space.flat_size());
  for (std::size_t k = 0; k < vt.pairs.size(); ++k) {
    double v = x[k];
    if (v < 0.0) {
      if (v < -1e-9) throw std::logic_error("copula assembly: negative rate from solver");
      v = 0.0;
    }
    m(vt.pairs[k].first, vt.pairs[k].second) = v;
  }
  for (std::size_t i = 0; i < space.flat_size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < space.flat_size(); ++j)
      if (j != i) row += m(i, j);
    m(i, i) = -row;  // diagonal completes each row to zero sum
  }
  return m;
}

inline double simultaneous_mass(const StateSpace& space, const Matrix& m) {
  double mass = 0.0;
  for (std::size_t v = 0; v < space.flat_size(); ++v)
    for (std::size_t w = 0; w < space.flat_size(); ++w)
      if (v != w && changed_coordinates(space, v, w) >= 2) mass += m(v, w);
  return mass;
}

// Kronecker-sum coupling evaluated entrywise (the always-feasible witness).
inline Matrix independent_matrix(const StateSpace& space,
                                 const std::vector<Matrix>& marginal_rates) {
  Matrix m(space.flat_size(), space.flat_size());
  for (std::size_t v = 0; v < space.flat_size(); ++v) {
    double diag = 0.0;
    for (std::size_t f = 0; f < space.num_factors(); ++f) {
      const std::size_t xf = space.coordinate(v, f);
      for (std::size_t yf = 0; yf < space.factor_size(f); ++yf) {
        if (yf == xf) continue;
        m(v, space.with_coordinate(v, f, yf)) = marginal_rates[f](xf, yf);
      }
      diag += marginal_rates[f](xf, xf);
    }
    m(v, v) = diag;
  }
  return m;
}

inline std::vector<Matrix> marginal_rates_at(const std::vector<GeneratorFunction>& marginals,
                                             double t) {
  std::vector<Matrix> out;
  for (const GeneratorFunction& m : marginals) out.push_back(m.at(t).entries);
  return out;
}

}  // namespace copula_detail

// ---------------------------------------------------------------------------
// Strong-copula construction
// ---------------------------------------------------------------------------

// Solves, per probe time, for all off-diagonal joint rates >= 0 matching every
// marginal's rates when summed over the other coordinates, picking the
// objective's representative; assembles constant or piecewise-constant output.
inline CopulaSolution build_strong_copula(const CopulaProblem& problem) {
  using namespace copula_detail;
  if (problem.marginals.size() < 2)
    throw std::invalid_argument("build_strong_copula: needs >= 2 marginals");
  const StateSpace space = product_space(problem.marginals);

  bool any_time_dependent = false;
  for (const GeneratorFunction& m : problem.marginals)
    if (m.time_dependent()) any_time_dependent = true;

  std::vector<double> times = problem.probe_times;
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  if (times.empty()) {
    if (any_time_dependent)
      throw std::invalid_argument(
          "build_strong_copula: time-dependent marginals need probe_times");
    times = {0.0};
  }
  for (double t : times)
    if (!(t >= 0.0))
      throw std::invalid_argument("build_strong_copula: probe times must be nonnegative");
  for (const GeneratorFunction& m : problem.marginals) {
    const ValidationReport vr = validate_generator(m, times);
    if (!vr.ok)
      throw std::invalid_argument("build_strong_copula: marginal is not a valid generator (" +
                                  vr.violations.front().violation.describe() + ")");
  }

  const VariableTable vt = make_variables(space.flat_size());

  if (!problem.weights.empty() && problem.objective != CopulaObjective::maximize_weighted)
    throw std::invalid_argument(
        "build_strong_copula: weights are only meaningful for maximize_weighted");
  std::vector<double> weight_vector(vt.pairs.size(), 0.0);
  if (problem.objective == CopulaObjective::maximize_weighted) {
    if (problem.weights.empty())
      throw std::invalid_argument("build_strong_copula: maximize_weighted needs weights");
    for (const auto& [pair, w] : problem.weights) {
      auto it = vt.index.find(pair);
      if (it == vt.index.end())
        throw std::invalid_argument("build_strong_copula: weight on a non-jump entry");
      if (changed_coordinates(space, pair.first, pair.second) < 2)
        throw std::invalid_argument(
            "build_strong_copula: weights must sit on simultaneous-jump entries");
      if (!(w >= 0.0))
        throw std::invalid_argument("build_strong_copula: weights must be nonnegative");
      weight_vector[it->second] = w;
    }
  }

  std::vector<Matrix> solved;
  std::vector<double> objective_values;
  SolverStatus status = SolverStatus::optimal;
  double residual = 0.0;

  for (double t : times) {
    const std::vector<Matrix> rates = marginal_rates_at(problem.marginals, t);
    Matrix m(0, 0);
    if (problem.objective == CopulaObjective::independent) {
      m = independent_matrix(space, rates);
    } else {
      std::vector<std::vector<double>> rows;
      std::vector<double> rhs;
      build_constraints(space, vt, rates, rows, rhs);
      std::vector<double> cost(vt.pairs.size(), 0.0);
      for (std::size_t k = 0; k < vt.pairs.size(); ++k) {
        const bool simultaneous =
            changed_coordinates(space, vt.pairs[k].first, vt.pairs[k].second) >= 2;
        switch (problem.objective) {
          case CopulaObjective::maximize_common_jumps:
            cost[k] = simultaneous ? -1.0 : 0.0;
            break;
          case CopulaObjective::minimize_common_jumps:
            cost[k] = simultaneous ? 1.0 : 0.0;
            break;
          case CopulaObjective::maximize_weighted:
            cost[k] = -weight_vector[k];
            break;
          case CopulaObjective::independent:
            break;
        }
      }
      const SimplexResult lp = simplex_lexmin(rows, rhs, cost);
      if (lp.status == SimplexResult::Status::infeasible) {
        // The Kronecker-sum coupling satisfies every constraint, so a proved
        // infeasibility can only be a solver defect; fail loudly.
        throw std::logic_error(
            "build_strong_copula: LP reported infeasible although a feasible coupling exists "
            "(solver defect; status would be infeasible_report)");
      }
      if (lp.status != SimplexResult::Status::optimal) {
        m = independent_matrix(space, rates);  // guaranteed-feasible fallback
        status = SolverStatus::feasible_fallback;
      } else {
        m = assemble_matrix(space, vt, lp.x);
      }
    }
    objective_values.push_back(simultaneous_mass(space, m));

    // Constraint residual of the assembled matrix against the marginals.
    for (std::size_t f = 0; f < space.num_factors(); ++f)
      for (std::size_t xf = 0; xf < space.factor_size(f); ++xf)
        for (std::size_t yf = 0; yf < space.factor_size(f); ++yf) {
          if (xf == yf) continue;
          for (std::size_t cfg = 0; cfg < space.complement_size(f); ++cfg) {
            const std::size_t v = space.compose(f, xf, cfg);
            double sum = 0.0;
            for (std::size_t w = 0; w < space.flat_size(); ++w)
              if (space.coordinate(w, f) == yf) sum += m(v, w);
            residual = std::max(residual, std::abs(sum - rates[f](xf, yf)));
          }
        }
    solved.push_back(std::move(m));
  }

  GeneratorFunction generator = [&]() {
    if (solved.size() == 1 && !any_time_dependent)
      return GeneratorFunction::constant(space, solved.front());
    std::vector<double> breakpoints;
    breakpoints.push_back(0.0);
    for (std::size_t k = 1; k < times.size(); ++k) breakpoints.push_back(times[k]);
    return GeneratorFunction::piecewise(space, std::move(breakpoints), std::move(solved));
  }();

  CopulaSolution solution(std::move(generator));
  solution.probe_times = times;
  solution.objective_values = std::move(objective_values);
  solution.residual = residual;
  solution.status = status;
  return solution;
}

// ---------------------------------------------------------------------------
// Strong-copula verification
// ---------------------------------------------------------------------------

struct ConstraintResidual {
  double time = 0.0;
  std::size_t factor = 0;
  std::size_t from_state = 0;
  std::size_t to_state = 0;
  std::string config_label;
  double joint_sum = 0.0;
  double marginal_rate = 0.0;
  double residual = 0.0;
};

struct StrongCopulaVerification {
  double max_residual = 0.0;
  bool generator_valid = true;
  bool pass = false;
  std::vector<ConstraintResidual> worst_rows;  // the maximal residual per probe time
  std::vector<TimedViolation> validator_violations;
};

// Checks a candidate joint generator against given marginals: every factor's
// rate sums must match at every probe time, and the candidate itself must be a
// valid generator. Pass at residual <= 1e-9.
inline StrongCopulaVerification verify_strong_copula(
    const GeneratorFunction& candidate, const std::vector<GeneratorFunction>& marginals,
    const std::vector<double>& probe_times) {
  using namespace copula_detail;
  consistency_detail::require_probe_times(probe_times, "verify_strong_copula");
  const StateSpace& space = candidate.space();
  if (space.num_factors() != marginals.size())
    throw std::invalid_argument(
        "verify_strong_copula: marginal count must match the candidate's factor count");
  for (std::size_t f = 0; f < marginals.size(); ++f) {
    if (marginals[f].space().num_factors() != 1 ||
        marginals[f].space().factor_size(0) != space.factor_size(f))
      throw std::invalid_argument("verify_strong_copula: marginal " + std::to_string(f + 1) +
                                  " has an incompatible state space");
  }

  StrongCopulaVerification out;
  const ValidationReport vr = validate_generator(candidate, probe_times);
  out.generator_valid = vr.ok;
  out.validator_violations = vr.violations;

  for (double t : probe_times) {
    const Matrix m = candidate.at(t).entries;
    const std::vector<Matrix> rates = marginal_rates_at(marginals, t);
    ConstraintResidual worst;
    worst.time = t;
    for (std::size_t f = 0; f < space.num_factors(); ++f)
      for (std::size_t xf = 0; xf < space.factor_size(f); ++xf)
        for (std::size_t yf = 0; yf < space.factor_size(f); ++yf) {
          if (xf == yf) continue;
          for (std::size_t cfg = 0; cfg < space.complement_size(f); ++cfg) {
            const std::size_t v = space.compose(f, xf, cfg);
            double sum = 0.0;
            for (std::size_t w = 0; w < space.flat_size(); ++w)
              if (space.coordinate(w, f) == yf) sum += m(v, w);
            const double r = std::abs(sum - rates[f](xf, yf));
            if (r >= worst.residual) {
              worst.factor = f;
              worst.from_state = xf;
              worst.to_state = yf;
              worst.config_label = space.state_label(v);
              worst.joint_sum = sum;
              worst.marginal_rate = rates[f](xf, yf);
              worst.residual = r;
            }
            out.max_residual = std::max(out.max_residual, r);
          }
        }
    out.worst_rows.push_back(std::move(worst));
  }
  out.pass = out.generator_valid && out.max_residual <= 1e-9;
  return out;
}

// ---------------------------------------------------------------------------
// Weak-copula candidates
// ---------------------------------------------------------------------------

struct WeakCopulaCandidate {
  GeneratorFunction joint;
  std::vector<GeneratorFunction> target_marginals;  // one per factor
};

// Registry of weak-copula constructions: each entry produces a joint generator
// together with the closed-form marginals it is engineered to reproduce in the
// coordinates' own filtrations.
inline WeakCopulaCandidate build_weak_copula_candidate(const std::string& family_name,
                                                       const FamilyParams& params) {
  if (family_name == "example_3_2") {
    WeakCopulaCandidate out{
        GeneratorFunction::family("example_3_2_joint", params),
        {GeneratorFunction::family("example_3_2_marginal_1", params),
         GeneratorFunction::family("example_3_2_marginal_2", params)}};
    return out;
  }
  throw std::invalid_argument("unknown weak-copula family '" + family_name + "'");
}

// ---------------------------------------------------------------------------
// Weak-copula verification
// ---------------------------------------------------------------------------

enum class WeakCopulaClass { weak_only, also_strong, failed };

inline const char* to_string(WeakCopulaClass c) {
  switch (c) {
    case WeakCopulaClass::weak_only: return "weak_only";
    case WeakCopulaClass::also_strong: return "also_strong";
    case WeakCopulaClass::failed: return "failed";
  }
  return "?";
}

struct WeakCopulaVerification {
  bool pass = false;
  WeakCopulaClass classification = WeakCopulaClass::failed;
  ValidationReport validator;
  std::vector<WeakCheckResult> weak;      // per factor
  std::vector<StrongCheckResult> strong;  // per factor
  double max_marginal_mismatch = 0.0;     // extracted vs target over the grid
};

// A candidate is a weak copula for the given targets when it validates, every
// coordinate shows weak-consistency evidence, and the extracted marginals
// reproduce the targets on the grid (tolerance 1e-6). Also classifies whether
// the candidate is in fact strongly consistent.
inline WeakCopulaVerification verify_weak_copula(const GeneratorFunction& candidate,
                                                 const std::vector<GeneratorFunction>& targets,
                                                 const Distribution& mu0,
                                                 const std::vector<double>& grid,
                                                 std::size_t event_depth) {
  const StateSpace& space = candidate.space();
  if (space.num_factors() != targets.size())
    throw std::invalid_argument(
        "verify_weak_copula: target count must match the candidate's factor count");
  for (std::size_t f = 0; f < targets.size(); ++f)
    if (targets[f].space().num_factors() != 1 ||
        targets[f].space().factor_size(0) != space.factor_size(f))
      throw std::invalid_argument("verify_weak_copula: target " + std::to_string(f + 1) +
                                  " has an incompatible state space");

  WeakCopulaVerification out;
  out.validator = validate_generator(candidate, grid);

  bool all_weak = true;
  bool all_strong = true;
  for (std::size_t f = 0; f < space.num_factors(); ++f) {
    WeakCheckResult wc = check_weak(candidate, mu0, f, grid, event_depth);
    StrongCheckResult sc = check_strong(candidate, mu0, grid, f);
    if (wc.verdict != WeakVerdict::weak_evidence) all_weak = false;
    if (sc.verdict != StrongVerdict::strong) all_strong = false;
    // Extracted-versus-target mismatch over defined rows.
    const std::size_t mf = space.factor_size(f);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Matrix target_rates = targets[f].at(grid[k]).entries;
      for (std::size_t xf = 0; xf < mf; ++xf) {
        if (!wc.extracted.row_defined[k][xf]) continue;
        for (std::size_t yf = 0; yf < mf; ++yf)
          out.max_marginal_mismatch =
              std::max(out.max_marginal_mismatch,
                       std::abs(wc.extracted.values[k](xf, yf) - target_rates(xf, yf)));
      }
    }
    out.weak.push_back(std::move(wc));
    out.strong.push_back(std::move(sc));
  }

  out.pass = out.validator.ok && all_weak && out.max_marginal_mismatch <= 1e-6;
  if (!out.pass)
    out.classification = WeakCopulaClass::failed;
  else
    out.classification = all_strong ? WeakCopulaClass::also_strong : WeakCopulaClass::weak_only;
  return out;
}

}  // namespace markovcopula
