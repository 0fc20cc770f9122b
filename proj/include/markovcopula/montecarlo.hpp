#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "markovcopula/generator.hpp"
#include "markovcopula/kolmogorov.hpp"
#include "markovcopula/matrix.hpp"
#include "markovcopula/parallel.hpp"
#include "markovcopula/rng.hpp"
#include "markovcopula/state_space.hpp"

namespace markovcopula {

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

// One sampled trajectory on [0, horizon]: piecewise constant and
// right-continuous, holding states[k] on [jump_times[k-1], jump_times[k]).
struct SimulationPath {
  double horizon = 0.0;
  std::vector<double> jump_times;   // strictly increasing, all in (0, horizon]
  std::vector<std::size_t> states;  // visited states; jump_times.size() + 1 entries

  std::size_t jump_count() const { return jump_times.size(); }

  std::size_t state_at(double t) const {
    if (!(t >= 0.0) || t > horizon)
      throw std::invalid_argument("state_at: time outside [0, horizon]");
    const std::size_t jumps_by_t =
        std::upper_bound(jump_times.begin(), jump_times.end(), t) - jump_times.begin();
    return states.at(jumps_by_t);
  }
};

namespace montecarlo_detail {

// Everything a sampler needs, computed once per (generator, horizon) so batch
// runs do not rescan rate envelopes per path. Holds a reference to the
// generator; the caller keeps it alive.
struct SimulationPlan {
  const GeneratorFunction* generator = nullptr;
  double horizon = 0.0;
  bool smooth = false;                 // true: thinning; false: exact segments
  std::vector<double> segment_starts;  // exact case; first is 0
  std::vector<Matrix> segment_rates;   // matrix per segment
  std::vector<double> envelope;        // thinning case: per-state rate bound
};

inline SimulationPlan prepare_simulation(const GeneratorFunction& g, double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("simulate: horizon must be positive");
  const ValidationReport vr = validate_generator(g, {0.0, horizon});
  if (!vr.ok)
    throw std::invalid_argument("simulate: generator is invalid (" +
                                vr.violations.front().violation.describe() + ")");
  SimulationPlan plan;
  plan.generator = &g;
  plan.horizon = horizon;
  plan.smooth = g.smoothly_time_dependent();
  if (!plan.smooth) {
    plan.segment_starts = g.all_breakpoints();
    if (plan.segment_starts.empty() || plan.segment_starts.front() != 0.0)
      plan.segment_starts.insert(plan.segment_starts.begin(), 0.0);
    for (double s : plan.segment_starts) plan.segment_rates.push_back(g.at(s).entries);
  } else {
    // Per-state exit-rate bound over [0, horizon]: grid scan at step 1e-3
    // with a 1.01 safety factor (registered families are smooth and bounded).
    const double step = 1e-3;
    plan.envelope.assign(g.dim(), 0.0);
    double t = 0.0;
    while (true) {
      const Matrix rates = g.at(t).entries;
      for (std::size_t v = 0; v < g.dim(); ++v)
        plan.envelope[v] = std::max(plan.envelope[v], -rates(v, v));
      if (t >= horizon) break;
      t = std::min(t + step, horizon);
    }
    for (double& bound : plan.envelope) bound *= 1.01;
  }
  return plan;
}

inline std::size_t segment_of(const SimulationPlan& plan, double t) {
  const std::size_t idx = std::upper_bound(plan.segment_starts.begin(),
                                           plan.segment_starts.end(), t) -
                          plan.segment_starts.begin();
  return idx == 0 ? 0 : idx - 1;
}

inline std::size_t sample_initial_state(const Distribution& mu0, Xoshiro256pp& rng) {
  const double u = rng.uniform01();
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t x = 0; x < mu0.space().flat_size(); ++x) {
    const double w = mu0[x];
    if (w > 0.0) last_positive = x;
    acc += w;
    if (u < acc) return x;
  }
  return last_positive;  // guard against accumulated rounding at u ~ 1
}

inline std::size_t sample_destination(const Matrix& rates, std::size_t v, double exit_rate,
                                      Xoshiro256pp& rng) {
  const double u = rng.uniform01() * exit_rate;
  double acc = 0.0;
  std::size_t last_positive = v;
  for (std::size_t w = 0; w < rates.cols(); ++w) {
    if (w == v) continue;
    const double r = rates(v, w);
    if (r > 0.0) last_positive = w;
    acc += r;
    if (u < acc) return w;
  }
  return last_positive;
}

// Exact sampling for piecewise-constant rates: one Exp(1) budget per jump,
// consumed against the exit rate segment by segment.
inline SimulationPath sample_exact(const SimulationPlan& plan, const Distribution& mu0,
                                   Xoshiro256pp& rng) {
  SimulationPath path;
  path.horizon = plan.horizon;
  std::size_t v = sample_initial_state(mu0, rng);
  path.states.push_back(v);
  double now = 0.0;

  while (true) {
    double budget = rng.exponential();
    double t = now;
    std::size_t k = segment_of(plan, t);
    double jump_at = std::numeric_limits<double>::infinity();
    for (; k < plan.segment_starts.size(); ++k) {
      const double exit = -plan.segment_rates[k](v, v);
      const double seg_end = (k + 1 < plan.segment_starts.size())
                                 ? plan.segment_starts[k + 1]
                                 : std::numeric_limits<double>::infinity();
      if (exit > 0.0) {
        const double dt = budget / exit;
        if (t + dt <= seg_end) {
          jump_at = t + dt;
          break;
        }
        budget -= exit * (seg_end - t);
      }
      t = seg_end;
      if (t > plan.horizon) break;  // any jump would land beyond the horizon
    }
    // Tiny waits can round t + dt back onto t; keep jump times strictly
    // increasing.
    if (jump_at <= now)
      jump_at = std::nextafter(now, std::numeric_limits<double>::infinity());
    if (!(jump_at <= plan.horizon)) break;

    // Destination row from the segment whose hazard produced the jump (k is
    // the segment where the budget ran out, so its exit rate is positive).
    const Matrix& rates = plan.segment_rates[k];
    const double exit = -rates(v, v);
    v = sample_destination(rates, v, exit, rng);
    path.jump_times.push_back(jump_at);
    path.states.push_back(v);
    now = jump_at;
  }
  return path;
}

// Thinning for smoothly time-dependent rates: propose at the per-state bound,
// accept with probability (actual exit rate) / bound.
inline SimulationPath sample_thinned(const SimulationPlan& plan, const Distribution& mu0,
                                     Xoshiro256pp& rng) {
  SimulationPath path;
  path.horizon = plan.horizon;
  std::size_t v = sample_initial_state(mu0, rng);
  path.states.push_back(v);
  double now = 0.0;

  while (true) {
    const double bound = plan.envelope[v];
    if (!(bound > 0.0)) break;  // no exit channel anywhere on the horizon
    now += rng.exponential() / bound;
    if (now > plan.horizon) break;
    const Matrix rates = plan.generator->at(now).entries;
    const double exit = -rates(v, v);
    if (exit > bound * (1.0 + 1e-12))
      throw std::logic_error("simulate: rate envelope exceeded at t=" + std::to_string(now));
    if (rng.uniform01() * bound < exit) {
      if (!path.jump_times.empty() && now <= path.jump_times.back()) {
        now = std::nextafter(path.jump_times.back(), std::numeric_limits<double>::infinity());
        if (now > plan.horizon) break;
      }
      v = sample_destination(rates, v, exit, rng);
      path.jump_times.push_back(now);
      path.states.push_back(v);
    }
  }
  return path;
}

inline SimulationPath sample_path(const SimulationPlan& plan, const Distribution& mu0,
                                  Xoshiro256pp& rng) {
  return plan.smooth ? sample_thinned(plan, mu0, rng) : sample_exact(plan, mu0, rng);
}

// Integral over [left, right] of the off-diagonal rate row of state v,
// entrywise. Exact segment sums for piecewise-constant rates; composite
// Simpson with panel doubling to 1e-9 for smooth rates.
inline std::vector<double> integrate_row(const GeneratorFunction& g, std::size_t v,
                                         double left, double right) {
  const std::size_t n = g.dim();
  std::vector<double> total(n, 0.0);
  if (!(right > left)) return total;

  if (!g.smoothly_time_dependent()) {
    std::vector<double> cuts = g.breakpoints_within(left, right);
    cuts.insert(cuts.begin(), left);
    cuts.push_back(right);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      if (!(cuts[k + 1] > cuts[k])) continue;
      const Matrix rates = g.at(cuts[k]).entries;
      const double len = cuts[k + 1] - cuts[k];
      for (std::size_t w = 0; w < n; ++w)
        if (w != v) total[w] += rates(v, w) * len;
    }
    return total;
  }

  auto composite_simpson = [&](std::size_t panels) {
    const double h = (right - left) / static_cast<double>(panels);
    std::vector<double> acc(n, 0.0);
    auto add_row = [&](double t, double weight) {
      const Matrix rates = g.at(t).entries;
      for (std::size_t w = 0; w < n; ++w)
        if (w != v) acc[w] += weight * rates(v, w);
    };
    add_row(left, 1.0);
    add_row(right, 1.0);
    for (std::size_t k = 0; k < panels; ++k) add_row(left + (k + 0.5) * h, 4.0);
    for (std::size_t k = 1; k < panels; ++k) add_row(left + k * h, 2.0);
    for (double& x : acc) x *= h / 6.0;
    return acc;
  };

  std::vector<double> coarse = composite_simpson(1);
  for (std::size_t panels = 2; panels <= (1u << 16); panels *= 2) {
    const std::vector<double> fine = composite_simpson(panels);
    double change = 0.0, magnitude = 0.0;
    for (std::size_t w = 0; w < n; ++w) {
      change = std::max(change, std::abs(fine[w] - coarse[w]));
      magnitude = std::max(magnitude, std::abs(fine[w]));
    }
    coarse = fine;
    if (change <= 1e-9 * (1.0 + magnitude)) break;
  }
  return coarse;
}

}  // namespace montecarlo_detail

// ---------------------------------------------------------------------------
// Single-path simulation
// ---------------------------------------------------------------------------

// Samples one trajectory of the chain generated by g from mu0 over [0, T].
// Piecewise-constant generators are sampled exactly (one Exp(1) budget per
// jump, carried across segment boundaries); smoothly time-dependent ones by
// thinning against a per-state rate bound. Deterministic in (seed,
// path_index); batch operations use the same per-index streams.
inline SimulationPath simulate(const GeneratorFunction& g, const Distribution& mu0, double T,
                               std::uint64_t seed, std::uint64_t path_index = 0) {
  if (mu0.space() != g.space())
    throw std::invalid_argument("simulate: initial distribution and generator spaces differ");
  const montecarlo_detail::SimulationPlan plan =
      montecarlo_detail::prepare_simulation(g, T);
  Xoshiro256pp rng = path_stream(seed, path_index);
  return montecarlo_detail::sample_path(plan, mu0, rng);
}

// ---------------------------------------------------------------------------
// Counting processes and compensators
// ---------------------------------------------------------------------------

// Per ordered state pair (v, w): the jump count N_vw over the path and the
// compensator value, the integral of the v->w rate over the time the path
// spent in v. Component-level aggregates sum over the other coordinates.
struct CountingStats {
  StateSpace space;
  double horizon = 0.0;
  Matrix counts;        // integer-valued
  Matrix compensators;  // nonnegative

  explicit CountingStats(StateSpace s)
      : space(std::move(s)),
        counts(space.flat_size(), space.flat_size()),
        compensators(space.flat_size(), space.flat_size()) {}

  double total_jumps() const {
    double total = 0.0;
    for (std::size_t v = 0; v < space.flat_size(); ++v)
      for (std::size_t w = 0; w < space.flat_size(); ++w)
        if (w != v) total += counts(v, w);
    return total;
  }

  double component_count(std::size_t i, std::size_t xi, std::size_t yi) const {
    return component_sum(counts, i, xi, yi);
  }
  double component_compensator(std::size_t i, std::size_t xi, std::size_t yi) const {
    return component_sum(compensators, i, xi, yi);
  }

 private:
  double component_sum(const Matrix& m, std::size_t i, std::size_t xi, std::size_t yi) const {
    if (i >= space.num_factors())
      throw std::invalid_argument("component aggregate: factor index out of range");
    if (xi == yi || xi >= space.factor_size(i) || yi >= space.factor_size(i))
      throw std::invalid_argument("component aggregate: factor states invalid");
    double total = 0.0;
    for (std::size_t v = 0; v < space.flat_size(); ++v) {
      if (space.coordinate(v, i) != xi) continue;
      for (std::size_t w = 0; w < space.flat_size(); ++w)
        if (w != v && space.coordinate(w, i) == yi) total += m(v, w);
    }
    return total;
  }
};

inline CountingStats counting_stats(const SimulationPath& path, const GeneratorFunction& g) {
  for (std::size_t s : path.states)
    if (s >= g.dim())
      throw std::invalid_argument("counting_stats: path state outside the generator's space");
  if (path.states.size() != path.jump_times.size() + 1)
    throw std::invalid_argument("counting_stats: malformed path");

  CountingStats stats(g.space());
  stats.horizon = path.horizon;
  for (std::size_t k = 0; k < path.jump_times.size(); ++k)
    stats.counts(path.states[k], path.states[k + 1]) += 1.0;

  for (std::size_t k = 0; k < path.states.size(); ++k) {
    const double left = k == 0 ? 0.0 : path.jump_times[k - 1];
    const double right = k < path.jump_times.size() ? path.jump_times[k] : path.horizon;
    const std::size_t v = path.states[k];
    const std::vector<double> integral = montecarlo_detail::integrate_row(g, v, left, right);
    for (std::size_t w = 0; w < g.dim(); ++w)
      if (w != v) stats.compensators(v, w) += integral[w];
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Martingale-residual test
// ---------------------------------------------------------------------------

// Per pair (v, w): the mean over paths of N_vw(T) - nu_vw(T), its standard
// error, and the z-score. For a correctly specified generator the residuals
// are mean-zero, so the test passes iff every |z| <= 4. An optional
// compensator generator integrates nu under a different model than the one
// simulated, which turns the test into a mismatch detector.
struct MartingaleReport {
  StateSpace space;
  double horizon = 0.0;
  std::size_t n_paths = 0;
  Matrix mean_residual;
  Matrix standard_error;
  Matrix z_score;
  bool pass = false;

  explicit MartingaleReport(StateSpace s)
      : space(std::move(s)),
        mean_residual(space.flat_size(), space.flat_size()),
        standard_error(space.flat_size(), space.flat_size()),
        z_score(space.flat_size(), space.flat_size()) {}

  double max_abs_z() const { return z_score.max_abs(); }
};

namespace montecarlo_detail {

constexpr std::size_t kChunkSize = 4096;

// Deterministic two-level reduction: workers fill per-chunk partial sums
// (paths accumulated in index order within each chunk), and the chunks are
// combined serially in chunk order. The result is bit-identical for any
// worker count.
template <typename PerPath, typename ChunkState>
inline void run_chunked(std::size_t n_paths, std::vector<ChunkState>& chunk_states,
                        const PerPath& per_path) {
  const std::size_t n_chunks = (n_paths + kChunkSize - 1) / kChunkSize;
  chunk_states.resize(n_chunks);
  parallel_tasks(n_chunks, [&](std::size_t chunk) {
    const std::size_t begin = chunk * kChunkSize;
    const std::size_t end = std::min(n_paths, begin + kChunkSize);
    for (std::size_t p = begin; p < end; ++p) per_path(chunk_states[chunk], p);
  });
}

}  // namespace montecarlo_detail

inline MartingaleReport martingale_residual_test(
    const GeneratorFunction& g, const Distribution& mu0, double T, std::size_t n_paths,
    std::uint64_t seed, const std::optional<GeneratorFunction>& compensator_model = {}) {
  if (mu0.space() != g.space())
    throw std::invalid_argument(
        "martingale_residual_test: initial distribution and generator spaces differ");
  if (n_paths < 1000)
    throw std::invalid_argument("martingale_residual_test: needs at least 1000 paths");
  const GeneratorFunction& comp = compensator_model ? *compensator_model : g;
  if (comp.space().flat_size() != g.space().flat_size())
    throw std::invalid_argument(
        "martingale_residual_test: compensator model has a different state count");
  const montecarlo_detail::SimulationPlan plan =
      montecarlo_detail::prepare_simulation(g, T);

  const std::size_t n = g.dim();
  struct ChunkSums {
    Matrix sum;     // sum of residuals
    Matrix sum_sq;  // sum of squared residuals
  };
  std::vector<ChunkSums> chunks;
  montecarlo_detail::run_chunked(n_paths, chunks, [&](ChunkSums& out, std::size_t p) {
    if (out.sum.rows() == 0) {
      out.sum = Matrix(n, n);
      out.sum_sq = Matrix(n, n);
    }
    Xoshiro256pp rng = path_stream(seed, p);
    const SimulationPath path = montecarlo_detail::sample_path(plan, mu0, rng);
    const CountingStats stats = counting_stats(path, comp);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t w = 0; w < n; ++w) {
        if (w == v) continue;
        const double r = stats.counts(v, w) - stats.compensators(v, w);
        out.sum(v, w) += r;
        out.sum_sq(v, w) += r * r;
      }
  });

  Matrix sum(n, n), sum_sq(n, n);
  for (const ChunkSums& c : chunks) {
    if (c.sum.rows() == 0) continue;
    sum += c.sum;
    sum_sq += c.sum_sq;
  }

  MartingaleReport report(g.space());
  report.horizon = T;
  report.n_paths = n_paths;
  const double dn = static_cast<double>(n_paths);
  bool pass = true;
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w = 0; w < n; ++w) {
      if (w == v) continue;
      const double mean = sum(v, w) / dn;
      const double var =
          n_paths > 1 ? std::max(0.0, (sum_sq(v, w) - dn * mean * mean) / (dn - 1.0)) : 0.0;
      const double se = std::sqrt(var / dn);
      report.mean_residual(v, w) = mean;
      report.standard_error(v, w) = se;
      double z = 0.0;
      if (se > 0.0)
        z = mean / se;
      else if (mean != 0.0)
        z = std::copysign(std::numeric_limits<double>::infinity(), mean);
      report.z_score(v, w) = z;
      if (!(std::abs(z) <= 4.0)) pass = false;
    }
  report.pass = pass;
  return report;
}

// ---------------------------------------------------------------------------
// Empirical state frequencies
// ---------------------------------------------------------------------------

struct EmpiricalTransition {
  StateSpace space;
  double time = 0.0;
  std::size_t n_paths = 0;
  std::vector<double> frequency;       // per flat state, sums to 1
  std::vector<double> standard_error;  // binomial, from the frequencies

  explicit EmpiricalTransition(StateSpace s) : space(std::move(s)) {}
};

// Frequencies of states at time t over simulated paths. t = 0 draws only the
// initial states.
inline EmpiricalTransition empirical_transition(const GeneratorFunction& g,
                                                const Distribution& mu0, double t,
                                                std::size_t n_paths, std::uint64_t seed) {
  if (mu0.space() != g.space())
    throw std::invalid_argument(
        "empirical_transition: initial distribution and generator spaces differ");
  if (n_paths == 0)
    throw std::invalid_argument("empirical_transition: needs at least one path");
  if (!(t >= 0.0)) throw std::invalid_argument("empirical_transition: time must be >= 0");

  std::optional<montecarlo_detail::SimulationPlan> plan;
  if (t > 0.0) plan.emplace(montecarlo_detail::prepare_simulation(g, t));

  const std::size_t n = g.dim();
  using ChunkCounts = std::vector<std::uint64_t>;
  std::vector<ChunkCounts> chunks;
  montecarlo_detail::run_chunked(n_paths, chunks, [&](ChunkCounts& out, std::size_t p) {
    if (out.empty()) out.assign(n, 0);
    Xoshiro256pp rng = path_stream(seed, p);
    std::size_t terminal;
    if (plan) {
      const SimulationPath path = montecarlo_detail::sample_path(*plan, mu0, rng);
      terminal = path.states.back();
    } else {
      terminal = montecarlo_detail::sample_initial_state(mu0, rng);
    }
    ++out[terminal];
  });

  std::vector<std::uint64_t> totals(n, 0);
  for (const ChunkCounts& c : chunks)
    for (std::size_t x = 0; x < c.size(); ++x) totals[x] += c[x];

  EmpiricalTransition result(g.space());
  result.time = t;
  result.n_paths = n_paths;
  const double dn = static_cast<double>(n_paths);
  for (std::size_t x = 0; x < n; ++x) {
    const double f = static_cast<double>(totals[x]) / dn;
    result.frequency.push_back(f);
    result.standard_error.push_back(std::sqrt(f * (1.0 - f) / dn));
  }
  return result;
}

// Comparison against an expected distribution (typically the evolved law):
// each frequency must sit within 4 binomial standard deviations of its
// expected probability, computed from the expected p; entries with p in
// {0, 1} must match exactly.
struct EmpiricalComparison {
  bool pass = true;
  double max_sigma = 0.0;              // worst |freq - p| in sigma units
  std::vector<double> expected;
  std::vector<double> sigma;           // per state, 0 where p is degenerate
};

inline EmpiricalComparison compare_empirical(const EmpiricalTransition& empirical,
                                             const Distribution& expected) {
  if (!(expected.space() == empirical.space))
    throw std::invalid_argument("compare_empirical: spaces differ");
  EmpiricalComparison out;
  const double dn = static_cast<double>(empirical.n_paths);
  for (std::size_t x = 0; x < empirical.space.flat_size(); ++x) {
    const double p = expected[x];
    const double se = std::sqrt(p * (1.0 - p) / dn);
    const double diff = std::abs(empirical.frequency[x] - p);
    out.expected.push_back(p);
    out.sigma.push_back(se);
    if (se > 0.0) {
      out.max_sigma = std::max(out.max_sigma, diff / se);
      if (diff > 4.0 * se) out.pass = false;
    } else if (diff != 0.0) {
      out.pass = false;
      out.max_sigma = std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

}  // namespace markovcopula
