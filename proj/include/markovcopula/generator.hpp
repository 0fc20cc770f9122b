#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "markovcopula/matrix.hpp"
#include "markovcopula/rate_matrix.hpp"
#include "markovcopula/state_space.hpp"

namespace markovcopula {

class GeneratorFunction;

// ---------------------------------------------------------------------------
// Generator kinds
// ---------------------------------------------------------------------------

struct ConstantKind {
  RateMatrix matrix;
};

// Right-continuous piecewise-constant rates: matrices[k] applies on
// [breakpoints[k], breakpoints[k+1]), the last one on [breakpoints.back(), inf).
struct PiecewiseKind {
  std::vector<double> breakpoints;
  std::vector<RateMatrix> matrices;
};

struct FamilyKind {
  std::string name;
  std::map<std::string, double> params;  // ordered => deterministic serialization
};

// Kronecker-sum composite of generators on disjoint factor blocks; produced by
// tensor_sum. Never read from model files; serialization materializes it.
struct TensorSumKind {
  std::vector<GeneratorFunction> parts;
};

// ---------------------------------------------------------------------------
// Named closed-form families
// ---------------------------------------------------------------------------

using FamilyParams = std::map<std::string, double>;

struct FamilyDescriptor {
  std::string name;
  std::vector<std::string> param_names;    // required parameter set (exact)
  std::vector<std::size_t> factor_sizes;   // required space shape
  bool time_dependent;
  void (*validate)(const FamilyParams&);
  Matrix (*evaluate)(const FamilyParams&, double t);
};

namespace family_detail {

inline double get(const FamilyParams& p, const char* k) { return p.at(k); }

inline void require_nonneg(const FamilyParams& p, std::initializer_list<const char*> keys) {
  for (const char* k : keys)
    if (!(p.at(k) >= 0.0))
      throw std::invalid_argument(std::string("family parameter '") + k + "' must be >= 0");
}

// Two absorbing-upward binary factors with an extra simultaneous-jump rate c:
// single jumps a (first factor), b (second factor), joint jump c, upper state
// absorbing for both.
inline Matrix coupled_absorbing_pair(const FamilyParams& p, double) {
  const double a = get(p, "a"), b = get(p, "b"), c = get(p, "c");
  Matrix m(4, 4);
  m(0, 0) = -(a + b + c); m(0, 1) = b;        m(0, 2) = a;        m(0, 3) = c;
  m(1, 1) = -(a + c);                          m(1, 3) = a + c;
  m(2, 2) = -(b + c);                          m(2, 3) = b + c;
  return m;
}

// Same skeleton but the simultaneous jump replaces (rather than adds to) the
// single-coordinate completion rates out of the mixed states.
inline Matrix coupled_absorbing_pair_joint_only(const FamilyParams& p, double) {
  const double a = get(p, "a"), b = get(p, "b"), c = get(p, "c");
  Matrix m(4, 4);
  m(0, 0) = -(a + b + c); m(0, 1) = b;        m(0, 2) = a;        m(0, 3) = c;
  m(1, 1) = -a;                                m(1, 3) = a;
  m(2, 2) = -b;                                m(2, 3) = b;
  return m;
}

// Time-dependent one-jump marginal rates of the joint-only pair started at
// (0,0). The correction term alpha(t) (resp. beta(t)) is c times the
// conditional probability of sitting in the mixed state given the factor still
// reads 0; both probabilities come from the closed-form transition law.
inline double mixed_state_weight(double own, double other, double c, double t) {
  // P(own coordinate still 0, other coordinate already 1) at time t from (0,0):
  // e^{-own*t} * (1 - e^{-(other+c)*t}) * other/(other+c), with the limit 0 when
  // other + c == 0.
  const double oc = other + c;
  if (oc <= 0.0) return 0.0;
  return std::exp(-own * t) * (-std::expm1(-oc * t)) * other / oc;
}

inline double marginal_correction(double own, double other, double c, double t) {
  const double sum = own + other + c;
  const double p_both0 = std::exp(-sum * t);
  const double p_mixed = mixed_state_weight(own, other, c, t);
  const double denom = p_both0 + p_mixed;
  if (denom <= 0.0) return 0.0;
  return c * p_mixed / denom;
}

inline Matrix absorbing_marginal(double up_rate) {
  Matrix m(2, 2);
  m(0, 0) = -up_rate;
  m(0, 1) = up_rate;
  return m;
}

inline Matrix marginal_of_first(const FamilyParams& p, double t) {
  const double a = get(p, "a"), b = get(p, "b"), c = get(p, "c");
  return absorbing_marginal(a + c - marginal_correction(a, b, c, t));
}

inline Matrix marginal_of_second(const FamilyParams& p, double t) {
  const double a = get(p, "a"), b = get(p, "b"), c = get(p, "c");
  return absorbing_marginal(b + c - marginal_correction(b, a, c, t));
}

// Two binary factors where the first drifts upward (with joint-jump rate c)
// and the second keeps moving in both directions at rates that depend on the
// first coordinate — the canonical source of weak-only behaviour.
inline Matrix feedback_pair(const FamilyParams& p, double) {
  const double a = get(p, "a"), b = get(p, "b"), c = get(p, "c");
  const double d = get(p, "d"), e = get(p, "e"), f = get(p, "f"), g = get(p, "g");
  Matrix m(4, 4);
  m(0, 0) = -(a + b + c); m(0, 1) = b;        m(0, 2) = a;  m(0, 3) = c;
  m(1, 1) = -(d + e);     m(1, 2) = d;        m(1, 3) = e;
  m(2, 2) = -f;           m(2, 3) = f;
  m(3, 2) = g;            m(3, 3) = -g;
  return m;
}

inline void validate_abc_nonneg(const FamilyParams& p) { require_nonneg(p, {"a", "b", "c"}); }

inline void validate_abc_c_positive(const FamilyParams& p) {
  require_nonneg(p, {"a", "b"});
  if (!(get(p, "c") > 0.0)) throw std::invalid_argument("family parameter 'c' must be > 0");
}

inline void validate_a_to_g_nonneg(const FamilyParams& p) {
  require_nonneg(p, {"a", "b", "c", "d", "e", "f", "g"});
}

}  // namespace family_detail

inline const std::map<std::string, FamilyDescriptor>& family_registry() {
  static const std::map<std::string, FamilyDescriptor> registry = {
      {"example_3_1",
       {"example_3_1", {"a", "b", "c"}, {2, 2}, false,
        &family_detail::validate_abc_nonneg, &family_detail::coupled_absorbing_pair}},
      {"example_3_2_joint",
       {"example_3_2_joint", {"a", "b", "c"}, {2, 2}, false,
        &family_detail::validate_abc_c_positive,
        &family_detail::coupled_absorbing_pair_joint_only}},
      {"example_3_2_marginal_1",
       {"example_3_2_marginal_1", {"a", "b", "c"}, {2}, true,
        &family_detail::validate_abc_c_positive, &family_detail::marginal_of_first}},
      {"example_3_2_marginal_2",
       {"example_3_2_marginal_2", {"a", "b", "c"}, {2}, true,
        &family_detail::validate_abc_c_positive, &family_detail::marginal_of_second}},
      {"example_3_3",
       {"example_3_3", {"a", "b", "c", "d", "e", "f", "g"}, {2, 2}, false,
        &family_detail::validate_a_to_g_nonneg, &family_detail::feedback_pair}},
  };
  return registry;
}

inline const FamilyDescriptor& find_family(const std::string& name) {
  const auto& reg = family_registry();
  auto it = reg.find(name);
  if (it == reg.end()) throw std::invalid_argument("unknown generator family '" + name + "'");
  return it->second;
}

inline void validate_family_params(const FamilyDescriptor& fam, const FamilyParams& params) {
  std::set<std::string> expected(fam.param_names.begin(), fam.param_names.end());
  std::set<std::string> got;
  for (const auto& [k, v] : params) {
    got.insert(k);
    if (!std::isfinite(v))
      throw std::invalid_argument("family parameter '" + k + "' must be finite");
  }
  if (got != expected) {
    std::ostringstream os;
    os << "family '" << fam.name << "' requires exactly parameters {";
    for (auto it = expected.begin(); it != expected.end(); ++it)
      os << (it == expected.begin() ? "" : ",") << *it;
    os << "}";
    throw std::invalid_argument(os.str());
  }
  fam.validate(params);
}

inline StateSpace default_family_space(const FamilyDescriptor& fam) {
  std::vector<Factor> factors;
  for (std::size_t i = 0; i < fam.factor_sizes.size(); ++i) {
    Factor f;
    f.name = "X" + std::to_string(i + 1);
    for (std::size_t s = 0; s < fam.factor_sizes[i]; ++s) f.states.push_back(std::to_string(s));
    factors.push_back(std::move(f));
  }
  return StateSpace(std::move(factors));
}

// ---------------------------------------------------------------------------
// GeneratorFunction
// ---------------------------------------------------------------------------

// A time-dependent generator t -> Lambda(t) on a factored state space. Values
// are immutable after construction and freely shareable across threads.
class GeneratorFunction {
 public:
  enum class Kind { constant, piecewise, family, tensor_sum };

  static GeneratorFunction constant(StateSpace space, Matrix matrix) {
    RateMatrix rm(std::move(matrix));
    require_dim(space, rm.dim(), "constant matrix");
    return GeneratorFunction(std::move(space), ConstantKind{std::move(rm)});
  }

  static GeneratorFunction piecewise(StateSpace space, std::vector<double> breakpoints,
                                     std::vector<Matrix> matrices) {
    if (breakpoints.empty()) throw std::invalid_argument("piecewise generator needs >= 1 segment");
    if (breakpoints.size() != matrices.size())
      throw std::invalid_argument("piecewise generator: breakpoint and matrix counts differ");
    if (breakpoints.front() != 0.0)
      throw std::invalid_argument("piecewise generator: first breakpoint must be 0");
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k)
      if (!(breakpoints[k] < breakpoints[k + 1]))
        throw std::invalid_argument("piecewise generator: breakpoints must be strictly increasing");
    PiecewiseKind kind;
    kind.breakpoints = std::move(breakpoints);
    for (Matrix& m : matrices) {
      RateMatrix rm(std::move(m));
      require_dim(space, rm.dim(), "piecewise segment matrix");
      kind.matrices.push_back(std::move(rm));
    }
    return GeneratorFunction(std::move(space), std::move(kind));
  }

  static GeneratorFunction family(const std::string& name, FamilyParams params) {
    const FamilyDescriptor& fam = find_family(name);
    validate_family_params(fam, params);
    return GeneratorFunction(default_family_space(fam), FamilyKind{name, std::move(params)});
  }

  static GeneratorFunction family(StateSpace space, const std::string& name,
                                  FamilyParams params) {
    const FamilyDescriptor& fam = find_family(name);
    validate_family_params(fam, params);
    if (space.num_factors() != fam.factor_sizes.size())
      throw std::invalid_argument("family '" + name + "' expects " +
                                  std::to_string(fam.factor_sizes.size()) + " factor(s)");
    for (std::size_t i = 0; i < fam.factor_sizes.size(); ++i)
      if (space.factor_size(i) != fam.factor_sizes[i])
        throw std::invalid_argument("family '" + name + "' expects factor " +
                                    std::to_string(i + 1) + " to have " +
                                    std::to_string(fam.factor_sizes[i]) + " states");
    return GeneratorFunction(std::move(space), FamilyKind{name, std::move(params)});
  }

  Kind kind() const { return static_cast<Kind>(kind_.index()); }
  const StateSpace& space() const { return space_; }
  std::size_t dim() const { return space_.flat_size(); }

  const ConstantKind& as_constant() const { return expect<ConstantKind>("constant"); }
  const PiecewiseKind& as_piecewise() const { return expect<PiecewiseKind>("piecewise"); }
  const FamilyKind& as_family() const { return expect<FamilyKind>("family"); }
  const TensorSumKind& as_tensor_sum() const { return expect<TensorSumKind>("tensor_sum"); }

  // Evaluate Lambda(t). Piecewise lookup is right-continuous.
  RateMatrix at(double t) const {
    if (!(t >= 0.0)) throw std::invalid_argument("generator evaluation time must be >= 0");
    switch (kind()) {
      case Kind::constant:
        return as_constant().matrix;
      case Kind::piecewise: {
        const PiecewiseKind& pw = as_piecewise();
        return pw.matrices[segment_index(pw, t)];
      }
      case Kind::family: {
        const FamilyKind& fk = as_family();
        return RateMatrix(find_family(fk.name).evaluate(fk.params, t));
      }
      case Kind::tensor_sum: {
        const TensorSumKind& ts = as_tensor_sum();
        Matrix out(dim(), dim());
        std::size_t offset = 0;  // first factor index of the current part
        for (const GeneratorFunction& part : ts.parts) {
          embed_part(out, part.at(t).entries, offset, part.space().num_factors());
          offset += part.space().num_factors();
        }
        return RateMatrix(std::move(out));
      }
    }
    throw std::logic_error("unreachable generator kind");
  }

  bool time_dependent() const {
    switch (kind()) {
      case Kind::constant:
        return false;
      case Kind::piecewise:
        return as_piecewise().matrices.size() > 1;
      case Kind::family:
        return find_family(as_family().name).time_dependent;
      case Kind::tensor_sum: {
        for (const GeneratorFunction& part : as_tensor_sum().parts)
          if (part.time_dependent()) return true;
        return false;
      }
    }
    throw std::logic_error("unreachable generator kind");
  }

  // Whether the rates vary inside an interval containing no piecewise
  // breakpoints; solvers segment at breakpoints first, then ask this to pick
  // the exact-exponential versus integrator path.
  bool smoothly_time_dependent() const {
    switch (kind()) {
      case Kind::constant:
      case Kind::piecewise:
        return false;
      case Kind::family:
        return find_family(as_family().name).time_dependent;
      case Kind::tensor_sum: {
        for (const GeneratorFunction& part : as_tensor_sum().parts)
          if (part.smoothly_time_dependent()) return true;
        return false;
      }
    }
    throw std::logic_error("unreachable generator kind");
  }

  // Times strictly inside (s, t) where a piecewise segment switches; the
  // forward-equation solver splits its integration there.
  std::vector<double> breakpoints_within(double s, double t) const {
    std::vector<double> out;
    collect_breakpoints(s, t, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // All breakpoints of piecewise content (used for probe-grid construction).
  std::vector<double> all_breakpoints() const {
    std::vector<double> out;
    collect_breakpoints(0.0, std::numeric_limits<double>::infinity(), out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  static std::size_t segment_index(const PiecewiseKind& pw, double t) {
    auto it = std::upper_bound(pw.breakpoints.begin(), pw.breakpoints.end(), t);
    if (it == pw.breakpoints.begin())
      throw std::invalid_argument("piecewise evaluation before first breakpoint");
    return static_cast<std::size_t>(std::distance(pw.breakpoints.begin(), it)) - 1;
  }

  friend GeneratorFunction tensor_sum(std::vector<GeneratorFunction> parts);

 private:
  using KindVariant = std::variant<ConstantKind, PiecewiseKind, FamilyKind, TensorSumKind>;

  GeneratorFunction(StateSpace space, KindVariant kind)
      : space_(std::move(space)), kind_(std::move(kind)) {}

  static void require_dim(const StateSpace& space, std::size_t dim, const char* what) {
    if (dim != space.flat_size())
      throw std::invalid_argument(std::string(what) + " has dimension " + std::to_string(dim) +
                                  " but the state space has " +
                                  std::to_string(space.flat_size()) + " states");
  }

  template <typename T>
  const T& expect(const char* name) const {
    const T* p = std::get_if<T>(&kind_);
    if (!p) throw std::logic_error(std::string("generator kind is not ") + name);
    return *p;
  }

  // Adds a part's rates into the Kronecker-sum matrix: the part acts on its own
  // factor block, all other coordinates held fixed.
  void embed_part(Matrix& out, const Matrix& part, std::size_t first_factor,
                  std::size_t n_factors) const {
    const std::size_t m = dim();
    // Local flat index of the part inside a full flat index.
    std::vector<std::size_t> coords;
    for (std::size_t x = 0; x < m; ++x) {
      coords = space_.to_tuple(x);
      std::size_t local = 0;
      for (std::size_t k = 0; k < n_factors; ++k)
        local = local * space_.factor_size(first_factor + k) + coords[first_factor + k];
      const std::size_t local_size = part.rows();
      for (std::size_t target = 0; target < local_size; ++target) {
        // Rebuild the full index with the part block replaced by `target`.
        std::size_t rem = target;
        std::vector<std::size_t> tcoords = coords;
        for (std::size_t k = n_factors; k-- > 0;) {
          const std::size_t sz = space_.factor_size(first_factor + k);
          tcoords[first_factor + k] = rem % sz;
          rem /= sz;
        }
        const std::size_t y = space_.to_flat(tcoords);
        out(x, y) += part(local, target);
      }
    }
  }

  void collect_breakpoints(double s, double t, std::vector<double>& out) const {
    switch (kind()) {
      case Kind::constant:
      case Kind::family:
        return;
      case Kind::piecewise: {
        for (double b : as_piecewise().breakpoints)
          if (b > s && b < t) out.push_back(b);
        return;
      }
      case Kind::tensor_sum: {
        for (const GeneratorFunction& part : as_tensor_sum().parts)
          part.collect_breakpoints(s, t, out);
        return;
      }
    }
  }

  StateSpace space_;
  KindVariant kind_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

struct TimedViolation {
  double time;
  RateMatrixViolation violation;
};

struct ValidationReport {
  bool ok = true;
  std::vector<TimedViolation> violations;
};

// Checks that the generator evaluates to a valid rate matrix at every probe
// time: off-diagonals >= 0 and row sums 0 within 1e-12 * max(1, max|entry|).
inline ValidationReport validate_generator(const GeneratorFunction& g,
                                           const std::vector<double>& probe_times) {
  if (probe_times.empty()) throw std::invalid_argument("probe_times must be nonempty");
  for (double t : probe_times)
    if (!(t >= 0.0)) throw std::invalid_argument("probe times must be nonnegative");
  ValidationReport report;
  for (double t : probe_times) {
    const RateMatrix m = g.at(t);
    for (RateMatrixViolation v : m.violations()) {
      report.ok = false;
      report.violations.push_back({t, v});
    }
  }
  return report;
}

// Kronecker sum of independent coordinate generators: diagonal adds the parts'
// diagonals, single-block jumps carry that part's rate, simultaneous jumps 0.
inline GeneratorFunction tensor_sum(std::vector<GeneratorFunction> parts) {
  if (parts.size() < 2) throw std::invalid_argument("tensor_sum needs at least two parts");
  std::vector<Factor> factors;
  std::set<std::string> names;
  std::vector<GeneratorFunction> flat_parts;
  for (GeneratorFunction& p : parts) {
    // Flatten nested tensor sums so the composite has one level.
    if (p.kind() == GeneratorFunction::Kind::tensor_sum) {
      for (const GeneratorFunction& sub : p.as_tensor_sum().parts) flat_parts.push_back(sub);
    } else {
      flat_parts.push_back(std::move(p));
    }
  }
  for (const GeneratorFunction& p : flat_parts)
    for (const Factor& f : p.space().factors()) {
      if (!names.insert(f.name).second)
        throw std::invalid_argument("tensor_sum: duplicate factor name '" + f.name + "'");
      factors.push_back(f);
    }
  StateSpace product(std::move(factors));
  return GeneratorFunction(std::move(product), TensorSumKind{std::move(flat_parts)});
}

inline GeneratorFunction tensor_sum(GeneratorFunction g1, GeneratorFunction g2) {
  std::vector<GeneratorFunction> parts;
  parts.push_back(std::move(g1));
  parts.push_back(std::move(g2));
  return tensor_sum(std::move(parts));
}

// Zero-one matrix lifting a function on factor i's states to the product
// space: row x has its single 1 at column x_i.
struct ExtensionMatrix {
  std::size_t factor;
  Matrix entries;  // flat_size x |X^i|
};

inline ExtensionMatrix extension_matrix(const StateSpace& space, std::size_t i) {
  if (i >= space.num_factors()) throw std::out_of_range("extension_matrix: factor out of range");
  Matrix m(space.flat_size(), space.factor_size(i));
  for (std::size_t x = 0; x < space.flat_size(); ++x) m(x, space.coordinate(x, i)) = 1.0;
  return ExtensionMatrix{i, std::move(m)};
}

// The deterministic intensity factor of the (v,w) counting-process compensator.
inline double jump_intensity(const GeneratorFunction& g, std::size_t v, std::size_t w, double t) {
  if (v == w) throw std::invalid_argument("jump_intensity requires v != w");
  if (v >= g.dim() || w >= g.dim()) throw std::out_of_range("jump_intensity: state out of range");
  return g.at(t).rate(v, w);
}

}  // namespace markovcopula
