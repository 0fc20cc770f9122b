#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "markovcopula/generator.hpp"
#include "markovcopula/kolmogorov.hpp"
#include "markovcopula/matrix.hpp"
#include "markovcopula/state_space.hpp"

namespace markovcopula {

// ---------------------------------------------------------------------------
// Verdicts and certificates
// ---------------------------------------------------------------------------

enum class StrongVerdict { strong, fails, undetermined };
enum class WeakVerdict { weak_evidence, inconsistent, undetermined };
enum class ImmersionVerdict { holds, fails, undetermined };
enum class OverallVerdict { strong, weak_evidence, inconsistent, undetermined };

inline const char* to_string(StrongVerdict v) {
  switch (v) {
    case StrongVerdict::strong: return "strong";
    case StrongVerdict::fails: return "fails";
    case StrongVerdict::undetermined: return "undetermined";
  }
  return "?";
}
inline const char* to_string(WeakVerdict v) {
  switch (v) {
    case WeakVerdict::weak_evidence: return "weak_evidence";
    case WeakVerdict::inconsistent: return "inconsistent";
    case WeakVerdict::undetermined: return "undetermined";
  }
  return "?";
}
inline const char* to_string(ImmersionVerdict v) {
  switch (v) {
    case ImmersionVerdict::holds: return "holds";
    case ImmersionVerdict::fails: return "fails";
    case ImmersionVerdict::undetermined: return "undetermined";
  }
  return "?";
}
inline const char* to_string(OverallVerdict v) {
  switch (v) {
    case OverallVerdict::strong: return "strong";
    case OverallVerdict::weak_evidence: return "weak_evidence";
    case OverallVerdict::inconsistent: return "inconsistent";
    case OverallVerdict::undetermined: return "undetermined";
  }
  return "?";
}

// Numeric witness of a failed comparison: two computed intensities that should
// agree but differ by `gap`.
struct Certificate {
  std::string kind;  // "condition_m" | "strong_rate" | "weak_event"
  double time = 0.0;
  std::size_t factor = 0;
  std::size_t from_state = 0;
  std::size_t to_state = 0;
  std::string witness_low;   // description of the object giving low_value
  std::string witness_high;  // description of the object giving high_value
  double low_value = 0.0;
  double high_value = 0.0;
  double gap = 0.0;
};

inline bool certificate_order(const Certificate& a, const Certificate& b) {
  if (a.time != b.time) return a.time < b.time;
  if (a.factor != b.factor) return a.factor < b.factor;
  if (a.from_state != b.from_state) return a.from_state < b.from_state;
  return a.to_state < b.to_state;
}

namespace consistency_detail {

inline std::string format_time(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", t);
  return buf;
}

inline void require_probe_times(const std::vector<double>& times, const char* who) {
  if (times.empty()) throw std::invalid_argument(std::string(who) + ": time grid must be nonempty");
  for (double t : times)
    if (!(t >= 0.0))
      throw std::invalid_argument(std::string(who) + ": times must be nonnegative");
}

inline void require_factor(const StateSpace& space, std::size_t i, const char* who) {
  if (i >= space.num_factors())
    throw std::invalid_argument(std::string(who) + ": factor index out of range");
}

inline void require_same_space(const Distribution& mu0, const GeneratorFunction& g,
                               const char* who) {
  if (mu0.space() != g.space())
    throw std::invalid_argument(std::string(who) +
                                ": initial distribution and generator spaces differ");
}

// Sum of rates out of flat state x into any state whose factor-i coordinate is
// yi (all other coordinates free).
inline double transition_sum(const StateSpace& space, const Matrix& rates, std::size_t x,
                             std::size_t i, std::size_t yi) {
  double sum = 0.0;
  for (std::size_t y = 0; y < space.flat_size(); ++y)
    if (space.coordinate(y, i) == yi) sum += rates(x, y);
  return sum;
}

}  // namespace consistency_detail

// ---------------------------------------------------------------------------
// MarginalGenerator
// ---------------------------------------------------------------------------

// A coordinate process's generator represented on a time grid, with per-state
// defined masks (states unreachable at a grid time have no extractable row)
// and an optional exact closed form when the values came from a named family.
struct MarginalGenerator {
  std::size_t factor = 0;
  StateSpace space;                            // single-factor space of X^i
  std::vector<double> grid;
  std::vector<Matrix> values;                  // one |X^i| x |X^i| matrix per grid time
  std::vector<std::vector<bool>> row_defined;  // [grid index][factor state]
  std::optional<GeneratorFunction> closed_form;

  MarginalGenerator() : space(binary_space("X")) {}
  explicit MarginalGenerator(StateSpace s) : space(std::move(s)) {}

  std::size_t dim() const { return space.flat_size(); }

  bool row_is_defined(std::size_t grid_index, std::size_t state) const {
    return row_defined.at(grid_index).at(state);
  }

  // Value at an arbitrary time: the closed form when present, otherwise an
  // exact grid lookup.
  Matrix value_at(double t) const {
    if (closed_form) return closed_form->at(t).entries;
    for (std::size_t k = 0; k < grid.size(); ++k)
      if (std::abs(grid[k] - t) <= 1e-12) return values[k];
    throw std::invalid_argument("marginal generator has no value at the requested time");
  }

  bool defined_at(double t, std::size_t state) const {
    if (closed_form) return true;
    for (std::size_t k = 0; k < grid.size(); ++k)
      if (std::abs(grid[k] - t) <= 1e-12) return row_defined[k][state];
    throw std::invalid_argument("marginal generator has no value at the requested time");
  }

  // Wraps a standalone single-factor GeneratorFunction as a target marginal.
  static MarginalGenerator from_generator(const GeneratorFunction& g, std::size_t factor,
                                          const std::vector<double>& grid) {
    if (g.space().num_factors() != 1)
      throw std::invalid_argument("target marginal must live on a single-factor space");
    consistency_detail::require_probe_times(grid, "MarginalGenerator::from_generator");
    MarginalGenerator out(g.space());
    out.factor = factor;
    out.grid = grid;
    for (double t : grid) {
      out.values.push_back(g.at(t).entries);
      out.row_defined.emplace_back(g.space().flat_size(), true);
    }
    out.closed_form = g;
    return out;
  }
};

// ---------------------------------------------------------------------------
// Condition (M): factor-level rate sums independent of the other coordinates
// at the level of the generator itself (no reachability involved).
// ---------------------------------------------------------------------------

struct ConditionMViolation {
  double time = 0.0;
  std::size_t factor = 0;
  std::size_t from_state = 0;
  std::size_t to_state = 0;
  std::size_t config_low = 0;   // complementary configuration giving the low sum
  std::size_t config_high = 0;  // complementary configuration giving the high sum
  std::string config_low_label;
  std::string config_high_label;
  double sum_low = 0.0;
  double sum_high = 0.0;
  double gap = 0.0;
};

struct ConditionMReport {
  std::vector<bool> holds;  // per factor
  std::vector<ConditionMViolation> violations;
  bool m1() const { return holds.at(0); }
  bool m2() const { return holds.at(1); }
  bool all_hold() const {
    return std::all_of(holds.begin(), holds.end(), [](bool b) { return b; });
  }
};

// For every factor i, probe time, and factor jump x^i != y^i, the sums
// sum_{y^{-i}} rate((x^i, x^{-i}) -> (y^i, y^{-i})) must not depend on the
// complementary configuration x^{-i}; tolerance 1e-10 (scaled by the matrix
// magnitude when rates are large).
inline ConditionMReport check_condition_M(const GeneratorFunction& g,
                                          const std::vector<double>& probe_times) {
  const StateSpace& space = g.space();
  if (space.num_factors() < 2)
    throw std::invalid_argument("check_condition_M: needs a factored space (>= 2 factors)");
  consistency_detail::require_probe_times(probe_times, "check_condition_M");

  ConditionMReport report;
  report.holds.assign(space.num_factors(), true);
  for (double t : probe_times) {
    const Matrix rates = g.at(t).entries;
    const double tol = 1e-10 * std::max(1.0, rates.max_abs());
    for (std::size_t i = 0; i < space.num_factors(); ++i) {
      const std::size_t mi = space.factor_size(i);
      const std::size_t n_configs = space.complement_size(i);
      for (std::size_t xi = 0; xi < mi; ++xi) {
        for (std::size_t yi = 0; yi < mi; ++yi) {
          if (yi == xi) continue;
          double low = 0.0, high = 0.0;
          std::size_t arg_low = 0, arg_high = 0;
          for (std::size_t cfg = 0; cfg < n_configs; ++cfg) {
            const std::size_t x = space.compose(i, xi, cfg);
            const double s = consistency_detail::transition_sum(space, rates, x, i, yi);
            if (cfg == 0 || s < low) { low = s; arg_low = cfg; }
            if (cfg == 0 || s > high) { high = s; arg_high = cfg; }
          }
          if (high - low > tol) {
            report.holds[i] = false;
            ConditionMViolation v;
            v.time = t;
            v.factor = i;
            v.from_state = xi;
            v.to_state = yi;
            v.config_low = arg_low;
            v.config_high = arg_high;
            v.config_low_label = space.state_label(space.compose(i, xi, arg_low));
            v.config_high_label = space.state_label(space.compose(i, xi, arg_high));
            v.sum_low = low;
            v.sum_high = high;
            v.gap = high - low;
            report.violations.push_back(std::move(v));
          }
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Strong consistency
// ---------------------------------------------------------------------------

struct StrongCheckResult {
  std::size_t factor = 0;
  StrongVerdict verdict = StrongVerdict::undetermined;
  std::optional<Certificate> certificate;  // maximal-gap witness when verdict = fails
  MarginalGenerator extracted;
  std::vector<std::string> notes;
};

// A coordinate process is a Markov chain in the full filtration iff its jump
// rate sums do not depend on the other coordinates' configuration on any
// reachable state. Comparisons run only over configurations with probability
// above the reachability floor; rows with no reachable configuration are
// skipped and noted. On success the common values (probability-weighted over
// the reachable configurations) define the extracted marginal generator.
inline StrongCheckResult check_strong(const GeneratorFunction& g, const Distribution& mu0,
                                      const std::vector<double>& probe_times, std::size_t i) {
  const StateSpace& space = g.space();
  consistency_detail::require_factor(space, i, "check_strong");
  consistency_detail::require_same_space(mu0, g, "check_strong");
  consistency_detail::require_probe_times(probe_times, "check_strong");

  StrongCheckResult result;
  result.factor = i;
  result.extracted = MarginalGenerator(space.marginal_space(i));
  result.extracted.factor = i;
  result.extracted.grid = probe_times;

  const std::size_t mi = space.factor_size(i);
  const std::size_t n_configs = space.complement_size(i);
  std::optional<Certificate> worst;

  for (double t : probe_times) {
    const Distribution mu_t = evolve(mu0, g, t);
    const Matrix rates = g.at(t).entries;
    const double tol = 1e-9 * std::max(1.0, rates.max_abs());
    Matrix marginal(mi, mi);
    std::vector<bool> defined(mi, false);

    for (std::size_t xi = 0; xi < mi; ++xi) {
      // Reachable complementary configurations and their conditional weights.
      std::vector<std::size_t> reachable;
      double mass = 0.0;
      for (std::size_t cfg = 0; cfg < n_configs; ++cfg) {
        const double w = mu_t[space.compose(i, xi, cfg)];
        if (w > kReachabilityEpsilon) {
          reachable.push_back(cfg);
          mass += w;
        }
      }
      if (reachable.empty()) {
        result.notes.push_back("factor state " + space.factor(i).states[xi] +
                               " unreachable at t=" + consistency_detail::format_time(t) +
                               "; row skipped");
        continue;
      }
      defined[xi] = true;
      double diag = 0.0;
      for (std::size_t yi = 0; yi < mi; ++yi) {
        if (yi == xi) continue;
        double low = 0.0, high = 0.0, weighted = 0.0;
        std::size_t arg_low = 0, arg_high = 0;
        bool first = true;
        for (std::size_t cfg : reachable) {
          const std::size_t x = space.compose(i, xi, cfg);
          const double s = consistency_detail::transition_sum(space, rates, x, i, yi);
          weighted += (mu_t[x] / mass) * s;
          if (first || s < low) { low = s; arg_low = cfg; }
          if (first || s > high) { high = s; arg_high = cfg; }
          first = false;
        }
        marginal(xi, yi) = weighted;
        diag += weighted;
        if (high - low > tol && (!worst || high - low > worst->gap)) {
          Certificate cert;
          cert.kind = "strong_rate";
          cert.time = t;
          cert.factor = i;
          cert.from_state = xi;
          cert.to_state = yi;
          cert.witness_low = "configuration " + space.state_label(space.compose(i, xi, arg_low));
          cert.witness_high = "configuration " + space.state_label(space.compose(i, xi, arg_high));
          cert.low_value = low;
          cert.high_value = high;
          cert.gap = high - low;
          worst = std::move(cert);
        }
      }
      marginal(xi, xi) = -diag;
    }
    result.extracted.values.push_back(std::move(marginal));
    result.extracted.row_defined.push_back(std::move(defined));
  }

  if (worst) {
    result.verdict = StrongVerdict::fails;
    result.certificate = std::move(worst);
  } else {
    result.verdict = StrongVerdict::strong;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Marginal extraction
// ---------------------------------------------------------------------------

// The necessary-form marginal rates: a convex combination of joint rate sums
// weighted by the conditional law of the hidden coordinates given the visible
// one. Rows of factor states with probability <= the reachability floor are
// marked undefined.
inline MarginalGenerator extract_marginal(const GeneratorFunction& g, const Distribution& mu0,
                                          std::size_t i, const std::vector<double>& grid) {
  const StateSpace& space = g.space();
  consistency_detail::require_factor(space, i, "extract_marginal");
  consistency_detail::require_same_space(mu0, g, "extract_marginal");
  consistency_detail::require_probe_times(grid, "extract_marginal");

  MarginalGenerator out(space.marginal_space(i));
  out.factor = i;
  out.grid = grid;
  const std::size_t mi = space.factor_size(i);

  for (double t : grid) {
    const ConditionalOperator q = conditional_operator(mu0, g, i, t);
    const Matrix rates = g.at(t).entries;
    Matrix marginal(mi, mi);
    std::vector<bool> defined(mi, false);
    for (std::size_t xi = 0; xi < mi; ++xi) {
      if (!q.defined[xi]) continue;
      defined[xi] = true;
      double diag = 0.0;
      for (std::size_t yi = 0; yi < mi; ++yi) {
        if (yi == xi) continue;
        double sum = 0.0;
        for (std::size_t x = 0; x < space.flat_size(); ++x) {
          const double w = q.rows(xi, x);
          if (w == 0.0) continue;
          sum += w * consistency_detail::transition_sum(space, rates, x, i, yi);
        }
        marginal(xi, yi) = sum;
        diag += sum;
      }
      marginal(xi, xi) = -diag;
    }
    out.values.push_back(std::move(marginal));
    out.row_defined.push_back(std::move(defined));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Operator necessary condition
// ---------------------------------------------------------------------------

struct OperatorConditionReport {
  std::size_t factor = 0;
  std::vector<double> grid;
  std::vector<double> residuals;  // per grid time, over rows defined on both sides
  double max_residual = 0.0;
  bool pass = false;
  std::vector<std::string> notes;
};

// Residual of the conditioning-operator identity: applying (conditional
// operator) * (joint rates) * (extension matrix) must reproduce the target
// marginal rates row by row wherever the conditioning is defined.
inline OperatorConditionReport check_operator_condition(const GeneratorFunction& g,
                                                        const Distribution& mu0,
                                                        const MarginalGenerator& target,
                                                        std::size_t i,
                                                        const std::vector<double>& grid) {
  const StateSpace& space = g.space();
  consistency_detail::require_factor(space, i, "check_operator_condition");
  consistency_detail::require_same_space(mu0, g, "check_operator_condition");
  consistency_detail::require_probe_times(grid, "check_operator_condition");
  if (target.dim() != space.factor_size(i))
    throw std::invalid_argument("check_operator_condition: target dimension mismatch");

  const ExtensionMatrix ext = extension_matrix(space, i);
  OperatorConditionReport report;
  report.factor = i;
  report.grid = grid;
  const std::size_t mi = space.factor_size(i);

  for (double t : grid) {
    const ConditionalOperator q = conditional_operator(mu0, g, i, t);
    const Matrix composed = q.rows * g.at(t).entries * ext.entries;  // mi x mi
    const Matrix target_rates = target.value_at(t);
    double residual = 0.0;
    for (std::size_t xi = 0; xi < mi; ++xi) {
      if (!q.defined[xi]) {
        report.notes.push_back("row " + space.factor(i).states[xi] + " at t=" +
                               consistency_detail::format_time(t) +
                               " excluded (state unreachable)");
        continue;
      }
      if (!target.defined_at(t, xi)) {
        report.notes.push_back("row " + space.factor(i).states[xi] + " at t=" +
                               consistency_detail::format_time(t) +
                               " excluded (target row undefined)");
        continue;
      }
      for (std::size_t yi = 0; yi < mi; ++yi)
        residual = std::max(residual, std::abs(composed(xi, yi) - target_rates(xi, yi)));
    }
    report.residuals.push_back(residual);
    report.max_residual = std::max(report.max_residual, residual);
  }
  report.pass = report.max_residual <= 1e-6;
  return report;
}

// ---------------------------------------------------------------------------
// Path-event projected intensities and the weak-consistency checker
// ---------------------------------------------------------------------------

// Intensity of the factor-i jump from_state -> to_state at the last time of a
// path event, projected onto the event: the conditional law given the event
// weighs the joint rate sums over the hidden coordinates.
inline double projected_intensity(const GeneratorFunction& g, const Distribution& mu0,
                                  const PathEvent& ev, std::size_t i, std::size_t from_state,
                                  std::size_t to_state) {
  const StateSpace& space = g.space();
  consistency_detail::require_factor(space, i, "projected_intensity");
  consistency_detail::require_same_space(mu0, g, "projected_intensity");
  if (ev.factor != i)
    throw std::invalid_argument("projected_intensity: event must observe the same factor");
  if (from_state == to_state)
    throw std::invalid_argument("projected_intensity: from and to states must differ");
  if (from_state >= space.factor_size(i) || to_state >= space.factor_size(i))
    throw std::invalid_argument("projected_intensity: factor state out of range");
  validate_path_event(space, ev);
  if (ev.constraints.back().second != from_state)
    throw std::invalid_argument(
        "projected_intensity: event must end in the jump's source state");

  const PathEventLaw law = path_event_law(mu0, g, ev);
  if (!law.conditional)
    throw std::domain_error("projected_intensity: event probability below reachability floor");
  const double t = ev.constraints.back().first;
  const Matrix rates = g.at(t).entries;
  double value = 0.0;
  for (std::size_t x = 0; x < space.flat_size(); ++x) {
    const double w = (*law.conditional)[x];
    if (w == 0.0) continue;
    value += w * consistency_detail::transition_sum(space, rates, x, i, to_state);
  }
  return value;
}

struct WeakCheckResult {
  std::size_t factor = 0;
  WeakVerdict verdict = WeakVerdict::undetermined;
  std::vector<Certificate> certificates;  // extremal event pair per violated comparison
  MarginalGenerator extracted;
  std::vector<std::string> notes;
};

namespace consistency_detail {

// Dyadic constraint times for one base time t: depth 1 -> {t}, 2 -> {t/2, t},
// 3 -> {t/2, 3t/4, t} (the last d points of the dyadic refinement of [0, t]).
inline std::vector<double> dyadic_times(double t, std::size_t d) {
  std::vector<double> out;
  const double denom = std::ldexp(1.0, static_cast<int>(d) - 1);  // 2^(d-1)
  for (std::size_t j = 1; j <= d; ++j)
    out.push_back(t * (denom - static_cast<double>(d) + static_cast<double>(j)) / denom);
  return out;
}

inline std::string describe_event(const StateSpace& space, const PathEvent& ev) {
  std::ostringstream os;
  os << "{";
  for (std::size_t k = 0; k < ev.constraints.size(); ++k) {
    if (k) os << ", ";
    os << space.factor(ev.factor).name << "(" << format_time(ev.constraints[k].first)
       << ")=" << space.factor(ev.factor).states[ev.constraints[k].second];
  }
  os << "}";
  return os.str();
}

}  // namespace consistency_detail

// Finite-event falsification of own-filtration Markovianity: for each grid
// time, every surviving dyadic history pattern of factor i ending in the same
// state must project the same jump intensities. A single disagreement above
// tolerance certifies inconsistency; agreement across all events is evidence
// (not proof — the full filtration quantifies over more than finite events).
inline WeakCheckResult check_weak(const GeneratorFunction& g, const Distribution& mu0,
                                  std::size_t i, const std::vector<double>& grid,
                                  std::size_t event_depth) {
  const StateSpace& space = g.space();
  consistency_detail::require_factor(space, i, "check_weak");
  consistency_detail::require_same_space(mu0, g, "check_weak");
  consistency_detail::require_probe_times(grid, "check_weak");
  if (event_depth < 1 || event_depth > 3)
    throw std::invalid_argument("check_weak: event_depth must be 1, 2, or 3");

  WeakCheckResult result;
  result.factor = i;
  result.extracted = MarginalGenerator(space.marginal_space(i));
  result.extracted.factor = i;
  result.extracted.grid = grid;

  const std::size_t mi = space.factor_size(i);

  struct Observation {
    double value;
    std::string event;
  };

  for (double t : grid) {
    // Group observations by (terminal state, jump target).
    std::vector<std::vector<std::vector<Observation>>> groups(
        mi, std::vector<std::vector<Observation>>(mi));
    std::vector<bool> any_event(mi, false);

    for (std::size_t d = 1; d <= event_depth; ++d) {
      const std::vector<double> times = consistency_detail::dyadic_times(t, d);
      if (d > 1 && times.front() <= 0.0) continue;  // t = 0 has no proper history
      std::size_t n_patterns = 1;
      for (std::size_t k = 0; k < d; ++k) n_patterns *= mi;
      for (std::size_t pattern = 0; pattern < n_patterns; ++pattern) {
        PathEvent ev;
        ev.factor = i;
        std::size_t rem = pattern;
        std::vector<std::size_t> states(d);
        for (std::size_t k = d; k-- > 0;) {
          states[k] = rem % mi;
          rem /= mi;
        }
        for (std::size_t k = 0; k < d; ++k) ev.constraints.push_back({times[k], states[k]});
        const PathEventLaw law = path_event_law(mu0, g, ev);
        if (law.probability <= kReachabilityEpsilon) continue;
        const std::size_t terminal = states.back();
        any_event[terminal] = true;
        const Matrix rates = g.at(t).entries;
        for (std::size_t yi = 0; yi < mi; ++yi) {
          if (yi == terminal) continue;
          double value = 0.0;
          for (std::size_t x = 0; x < space.flat_size(); ++x) {
            const double w = (*law.conditional)[x];
            if (w == 0.0) continue;
            value += w * consistency_detail::transition_sum(space, rates, x, i, yi);
          }
          groups[terminal][yi].push_back(
              {value, consistency_detail::describe_event(space, ev)});
        }
      }
    }

    Matrix marginal(mi, mi);
    std::vector<bool> defined(mi, false);
    for (std::size_t xi = 0; xi < mi; ++xi) {
      if (!any_event[xi]) {
        result.notes.push_back("no surviving events ending in state " +
                               space.factor(i).states[xi] + " at t=" +
                               consistency_detail::format_time(t));
        continue;
      }
      defined[xi] = true;
      double diag = 0.0;
      for (std::size_t yi = 0; yi < mi; ++yi) {
        if (yi == xi) continue;
        const auto& obs = groups[xi][yi];
        // The depth-1 event {X_t^i = xi} is always first in generation order
        // when it survived; its value is the extracted marginal entry.
        marginal(xi, yi) = obs.front().value;
        diag += obs.front().value;
        std::size_t arg_low = 0, arg_high = 0;
        for (std::size_t k = 1; k < obs.size(); ++k) {
          if (obs[k].value < obs[arg_low].value) arg_low = k;
          if (obs[k].value > obs[arg_high].value) arg_high = k;
        }
        const double spread = obs[arg_high].value - obs[arg_low].value;
        const double tol =
            1e-7 * (1.0 + std::max(std::abs(obs[arg_low].value), std::abs(obs[arg_high].value)));
        if (spread > tol) {
          Certificate cert;
          cert.kind = "weak_event";
          cert.time = t;
          cert.factor = i;
          cert.from_state = xi;
          cert.to_state = yi;
          cert.witness_low = "event " + obs[arg_low].event;
          cert.witness_high = "event " + obs[arg_high].event;
          cert.low_value = obs[arg_low].value;
          cert.high_value = obs[arg_high].value;
          cert.gap = spread;
          result.certificates.push_back(std::move(cert));
        }
      }
      marginal(xi, xi) = -diag;
    }
    result.extracted.values.push_back(std::move(marginal));
    result.extracted.row_defined.push_back(std::move(defined));
  }

  std::sort(result.certificates.begin(), result.certificates.end(), certificate_order);
  result.verdict =
      result.certificates.empty() ? WeakVerdict::weak_evidence : WeakVerdict::inconsistent;

  // Internal cross-check: the depth-1 projected intensities must reproduce the
  // direct marginal extraction (two code paths computing the same object).
  const MarginalGenerator direct = extract_marginal(g, mu0, i, grid);
  for (std::size_t k = 0; k < grid.size(); ++k)
    for (std::size_t xi = 0; xi < mi; ++xi) {
      if (!result.extracted.row_defined[k][xi] || !direct.row_defined[k][xi]) continue;
      for (std::size_t yi = 0; yi < mi; ++yi) {
        const double diff =
            std::abs(result.extracted.values[k](xi, yi) - direct.values[k](xi, yi));
        if (diff > 1e-9)
          throw std::logic_error(
              "check_weak: event-projected marginal disagrees with direct extraction");
      }
    }
  return result;
}

// ---------------------------------------------------------------------------
// Immersion
// ---------------------------------------------------------------------------

// A weakly consistent coordinate is strongly consistent exactly when its own
// filtration is immersed in the full one; with only finite-event evidence the
// verdict follows that equivalence and is otherwise undetermined.
inline ImmersionVerdict immersion_verdict(StrongVerdict strong, WeakVerdict weak) {
  if (weak == WeakVerdict::weak_evidence && strong == StrongVerdict::strong)
    return ImmersionVerdict::holds;
  if (weak == WeakVerdict::weak_evidence && strong == StrongVerdict::fails)
    return ImmersionVerdict::fails;
  return ImmersionVerdict::undetermined;
}

// ---------------------------------------------------------------------------
// Whole-model convenience runner (used by the command-line front end)
// ---------------------------------------------------------------------------

enum class CheckMode { strong_only, weak_only, both };

struct FactorConsistency {
  std::size_t factor = 0;
  std::optional<StrongCheckResult> strong;
  std::optional<WeakCheckResult> weak;
  ImmersionVerdict immersion = ImmersionVerdict::undetermined;
  OverallVerdict overall = OverallVerdict::undetermined;
};

struct ConsistencyReport {
  std::vector<double> grid;
  std::size_t event_depth = 2;
  std::vector<FactorConsistency> factors;

  bool any_certificate() const {
    for (const FactorConsistency& f : factors) {
      if (f.strong && f.strong->certificate) return true;
      if (f.weak && !f.weak->certificates.empty()) return true;
    }
    return false;
  }
};

inline ConsistencyReport run_consistency(const GeneratorFunction& g, const Distribution& mu0,
                                         const std::vector<double>& grid,
                                         std::size_t event_depth, CheckMode mode,
                                         const std::vector<std::size_t>& factors) {
  ConsistencyReport report;
  report.grid = grid;
  report.event_depth = event_depth;
  for (std::size_t i : factors) {
    FactorConsistency fc;
    fc.factor = i;
    if (mode != CheckMode::weak_only) fc.strong = check_strong(g, mu0, grid, i);
    if (mode != CheckMode::strong_only) fc.weak = check_weak(g, mu0, i, grid, event_depth);
    const StrongVerdict sv = fc.strong ? fc.strong->verdict : StrongVerdict::undetermined;
    const WeakVerdict wv = fc.weak ? fc.weak->verdict : WeakVerdict::undetermined;
    fc.immersion = immersion_verdict(sv, wv);
    if (wv == WeakVerdict::inconsistent)
      fc.overall = OverallVerdict::inconsistent;
    else if (sv == StrongVerdict::strong)
      fc.overall = OverallVerdict::strong;
    else if (wv == WeakVerdict::weak_evidence)
      fc.overall = OverallVerdict::weak_evidence;
    else
      fc.overall = OverallVerdict::undetermined;
    report.factors.push_back(std::move(fc));
  }
  return report;
}

}  // namespace markovcopula
