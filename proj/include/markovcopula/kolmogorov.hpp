#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "markovcopula/generator.hpp"
#include "markovcopula/matrix.hpp"
#include "markovcopula/state_space.hpp"

namespace markovcopula {

// ---------------------------------------------------------------------------
// Matrix exponential: scaling and squaring with a truncated Taylor series.
// ---------------------------------------------------------------------------

// exp(A) for small dense A. The matrix is scaled by 2^-j until its infinity
// norm is <= 0.5, the series is summed until terms fall below 2^-60 of the
// accumulated sum, and the result is squared j times.
inline Matrix expm(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("expm: matrix must be square");
  const std::size_t n = a.rows();
  const double norm = a.norm_inf();
  int j = 0;
  if (norm > 0.5) j = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  Matrix b = a * std::ldexp(1.0, -j);
  Matrix sum = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k <= 64; ++k) {
    term = term * b;
    term *= 1.0 / static_cast<double>(k);
    sum += term;
    if (term.norm_inf() <= std::ldexp(1.0, -60) * std::max(1.0, sum.norm_inf())) break;
  }
  for (int s = 0; s < j; ++s) sum = sum * sum;
  return sum;
}

// ---------------------------------------------------------------------------
// TransitionMatrix
// ---------------------------------------------------------------------------

struct TransitionMatrix {
  double s = 0.0;
  double t = 0.0;
  Matrix entries;             // clamped to [0,1] on output
  double boundary_defect = 0.0;  // max distance outside [0,1] before clamping
  double row_sum_defect = 0.0;   // max |row sum - 1| before clamping
};

namespace kolmogorov_detail {

inline constexpr double kRowSumTolerance = 1e-9;
inline constexpr double kStepHalvingTarget = 1e-9;

// Wraps a raw solution into a TransitionMatrix, recording and bounding the
// numerical defects before clamping entries into [0,1].
inline TransitionMatrix finalize(double s, double t, Matrix p) {
  TransitionMatrix out;
  out.s = s;
  out.t = t;
  const std::size_t n = p.rows();
  double boundary = 0.0, row_defect = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = p(i, j);
      row_sum += v;
      if (v < 0.0) boundary = std::max(boundary, -v);
      if (v > 1.0) boundary = std::max(boundary, v - 1.0);
    }
    row_defect = std::max(row_defect, std::abs(row_sum - 1.0));
  }
  if (boundary > kRowSumTolerance || row_defect > kRowSumTolerance) {
    std::ostringstream os;
    os << "transition matrix solve lost stochasticity (boundary defect " << boundary
       << ", row-sum defect " << row_defect << ")";
    throw std::runtime_error(os.str());
  }
  for (double& v : p.data()) v = std::clamp(v, 0.0, 1.0);
  out.entries = std::move(p);
  out.boundary_defect = boundary;
  out.row_sum_defect = row_defect;
  return out;
}

// One classical fourth-order step of dP/du = P * L(u).
inline Matrix rk4_step(const GeneratorFunction& g, const Matrix& p, double u, double h) {
  const Matrix k1 = p * g.at(u).entries;
  const Matrix k2 = (p + k1 * (h / 2.0)) * g.at(u + h / 2.0).entries;
  const Matrix k3 = (p + k2 * (h / 2.0)) * g.at(u + h / 2.0).entries;
  const Matrix k4 = (p + k3 * h) * g.at(u + h).entries;
  return p + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
}

inline Matrix rk4_integrate(const GeneratorFunction& g, Matrix p, double s, double t,
                            std::size_t steps) {
  const double h = (t - s) / static_cast<double>(steps);
  for (std::size_t k = 0; k < steps; ++k) p = rk4_step(g, p, s + h * static_cast<double>(k), h);
  return p;
}

// Fixed-step fourth-order integration with step <= min(1e-3, 0.05/rho) where
// rho is the largest total exit rate seen on the interval; the step count is
// doubled until two successive solutions agree to 1e-9.
inline Matrix solve_time_dependent(const GeneratorFunction& g, const Matrix& p0, double s,
                                   double t) {
  if (t <= s) return p0;
  double rho = 0.0;
  const int scan_points = 257;
  for (int k = 0; k < scan_points; ++k) {
    const double u = s + (t - s) * static_cast<double>(k) / (scan_points - 1);
    rho = std::max(rho, g.at(u).max_exit_rate());
  }
  double h0 = 1e-3;
  if (rho > 0.0) h0 = std::min(h0, 0.05 / rho);
  std::size_t steps = static_cast<std::size_t>(std::ceil((t - s) / h0));
  if (steps == 0) steps = 1;
  Matrix coarse = rk4_integrate(g, p0, s, t, steps);
  for (int halving = 0; halving < 8; ++halving) {
    steps *= 2;
    Matrix fine = rk4_integrate(g, p0, s, t, steps);
    if (max_abs_diff(coarse, fine) <= kStepHalvingTarget) return fine;
    coarse = std::move(fine);
  }
  return coarse;
}

inline Matrix solve(const GeneratorFunction& g, double s, double t);

// Product of per-segment solutions across every piecewise breakpoint in (s,t).
inline Matrix solve_segmented(const GeneratorFunction& g, double s, double t) {
  std::vector<double> cuts = g.breakpoints_within(s, t);
  cuts.push_back(t);
  Matrix p = Matrix::identity(g.dim());
  double left = s;
  for (double right : cuts) {
    if (right <= left) continue;
    if (g.smoothly_time_dependent()) {
      p = solve_time_dependent(g, p, left, right);
    } else {
      // Constant on [left, right): exact matrix exponential.
      const Matrix lambda = g.at(left).entries;
      p = p * expm(lambda * (right - left));
    }
    left = right;
  }
  return p;
}

inline Matrix solve(const GeneratorFunction& g, double s, double t) {
  return solve_segmented(g, s, t);
}

}  // namespace kolmogorov_detail

// P(s,t) with P[v][w] = P(X_t = w | X_s = v), by exact matrix exponentials on
// constant content and controlled fourth-order integration on time-dependent
// closed-form families. Kronecker-sum composites factor into per-part solves.
inline TransitionMatrix transition_matrix(const GeneratorFunction& g, double s, double t) {
  if (!(s >= 0.0)) throw std::invalid_argument("transition_matrix: s must be >= 0");
  if (t < s) throw std::invalid_argument("transition_matrix: t must be >= s");
  {
    std::vector<double> probes{s, t};
    for (double b : g.breakpoints_within(s, t)) probes.push_back(b);
    const ValidationReport vr = validate_generator(g, probes);
    if (!vr.ok) {
      std::ostringstream os;
      os << "transition_matrix: generator invalid at t=" << vr.violations.front().time << ": "
         << vr.violations.front().violation.describe();
      throw std::invalid_argument(os.str());
    }
  }
  if (t == s) {
    TransitionMatrix out;
    out.s = s;
    out.t = t;
    out.entries = Matrix::identity(g.dim());
    return out;
  }
  if (g.kind() == GeneratorFunction::Kind::tensor_sum) {
    // Independent blocks evolve independently: P = Kronecker product of parts.
    const TensorSumKind& ts = g.as_tensor_sum();
    Matrix p;
    double boundary = 0.0, row_defect = 0.0;
    bool first = true;
    for (const GeneratorFunction& part : ts.parts) {
      TransitionMatrix pp = transition_matrix(part, s, t);
      boundary = std::max(boundary, pp.boundary_defect);
      row_defect = std::max(row_defect, pp.row_sum_defect);
      p = first ? std::move(pp.entries) : kron(p, pp.entries);
      first = false;
    }
    TransitionMatrix out = kolmogorov_detail::finalize(s, t, std::move(p));
    out.boundary_defect = std::max(out.boundary_defect, boundary);
    out.row_sum_defect = std::max(out.row_sum_defect, row_defect);
    return out;
  }
  return kolmogorov_detail::finalize(s, t, kolmogorov_detail::solve(g, s, t));
}

// mu0 * P(0, t).
inline Distribution evolve(const Distribution& mu0, const GeneratorFunction& g, double t) {
  if (mu0.space() != g.space())
    throw std::invalid_argument("evolve: distribution and generator spaces differ");
  if (!(t >= 0.0)) throw std::invalid_argument("evolve: t must be >= 0");
  const TransitionMatrix p = transition_matrix(g, 0.0, t);
  std::vector<double> w = row_times(mu0.weights(), p.entries);
  double sum = 0.0;
  for (double& v : w) {
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::runtime_error("evolve: propagated mass drifted from 1");
  for (double& v : w) v /= sum;
  return Distribution(g.space(), std::move(w));
}

// ---------------------------------------------------------------------------
// Path events and conditioning
// ---------------------------------------------------------------------------

// A finite observation of one coordinate process: factor i visits the given
// states at the given (strictly increasing) times.
struct PathEvent {
  std::size_t factor = 0;
  std::vector<std::pair<double, std::size_t>> constraints;  // (time, state of factor i)
};

inline void validate_path_event(const StateSpace& space, const PathEvent& ev) {
  if (ev.factor >= space.num_factors())
    throw std::invalid_argument("path event: factor index out of range");
  if (ev.constraints.empty()) throw std::invalid_argument("path event: needs >= 1 constraint");
  bool first = true;
  double prev = 0.0;
  for (const auto& [time, state] : ev.constraints) {
    if (!(time >= 0.0)) throw std::invalid_argument("path event: times must be >= 0");
    if (!first && !(time > prev))
      throw std::invalid_argument("path event: times must be strictly increasing");
    if (state >= space.factor_size(ev.factor))
      throw std::invalid_argument("path event: state out of range for factor");
    prev = time;
    first = false;
  }
}

struct PathEventLaw {
  double probability = 0.0;
  // Distribution over flat states at the last constraint time, conditional on
  // the event; absent when the event probability is <= the reachability floor.
  std::optional<Distribution> conditional;
};

// Law of a path event by alternating propagation and masking: propagate the
// current (sub-probability) weights to the next constraint time, zero out
// states whose factor-i coordinate disagrees, repeat.
inline PathEventLaw path_event_law(const Distribution& mu0, const GeneratorFunction& g,
                                   const PathEvent& ev) {
  if (mu0.space() != g.space())
    throw std::invalid_argument("path_event_law: distribution and generator spaces differ");
  validate_path_event(g.space(), ev);
  std::vector<double> w = mu0.weights();
  double prev = 0.0;
  for (const auto& [time, state] : ev.constraints) {
    if (time > prev) {
      const TransitionMatrix p = transition_matrix(g, prev, time);
      w = row_times(w, p.entries);
    }
    for (std::size_t x = 0; x < w.size(); ++x)
      if (g.space().coordinate(x, ev.factor) != state) w[x] = 0.0;
    prev = time;
  }
  double prob = 0.0;
  for (double& v : w) {
    if (v < 0.0) v = 0.0;
    prob += v;
  }
  if (prob > 1.0 + 1e-9) throw std::runtime_error("path_event_law: probability exceeded 1");
  PathEventLaw out;
  out.probability = std::min(prob, 1.0);
  if (prob > kReachabilityEpsilon) {
    std::vector<double> cond = w;
    for (double& v : cond) v /= prob;
    out.conditional = Distribution(g.space(), std::move(cond));
  }
  return out;
}

// ---------------------------------------------------------------------------
// ConditionalOperator
// ---------------------------------------------------------------------------

// Matrix form of conditioning on one coordinate at a fixed time: row x_i is
// the law of the full state given {X_t^i = x_i}; rows of factor states with
// probability <= the reachability floor are undefined.
struct ConditionalOperator {
  std::size_t factor = 0;
  double time = 0.0;
  Matrix rows;               // |X^i| x flat_size
  std::vector<bool> defined;  // per factor state
};

inline ConditionalOperator conditional_operator(const Distribution& mu0,
                                                const GeneratorFunction& g, std::size_t i,
                                                double t) {
  if (i >= g.space().num_factors())
    throw std::invalid_argument("conditional_operator: factor index out of range");
  const Distribution mu_t = evolve(mu0, g, t);
  const StateSpace& space = g.space();
  const std::size_t mi = space.factor_size(i);
  ConditionalOperator out;
  out.factor = i;
  out.time = t;
  out.rows = Matrix(mi, space.flat_size());
  out.defined.assign(mi, false);
  const std::vector<double> marg = mu_t.marginal(i);
  for (std::size_t xi = 0; xi < mi; ++xi) {
    if (marg[xi] <= kReachabilityEpsilon) continue;
    out.defined[xi] = true;
    for (std::size_t x = 0; x < space.flat_size(); ++x)
      if (space.coordinate(x, i) == xi) out.rows(xi, x) = mu_t[x] / marg[xi];
  }
  return out;
}

}  // namespace markovcopula
