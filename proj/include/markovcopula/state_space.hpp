#pragma once

#include <cstddef>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace markovcopula {

// One coordinate of a product state space: a named factor with labelled states.
struct Factor {
  std::string name;
  std::vector<std::string> states;
};

// Finite product state space X = X^1 x ... x X^n with a fixed flat indexing:
// row-major with the first factor varying slowest. For two binary factors the
// flat order is (0,0), (0,1), (1,0), (1,1).
class StateSpace {
 public:
  explicit StateSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw std::invalid_argument("state space needs at least one factor");
    for (const Factor& f : factors_) {
      if (f.name.empty()) throw std::invalid_argument("factor name must be nonempty");
      if (f.states.size() < 2)
        throw std::invalid_argument("factor '" + f.name + "' needs at least two states");
      std::unordered_set<std::string> seen;
      for (const std::string& s : f.states)
        if (!seen.insert(s).second)
          throw std::invalid_argument("factor '" + f.name + "' has duplicate state label '" + s + "'");
    }
    strides_.resize(factors_.size());
    std::size_t stride = 1;
    for (std::size_t i = factors_.size(); i-- > 0;) {
      strides_[i] = stride;
      stride *= factors_[i].states.size();
    }
    flat_size_ = stride;
  }

  std::size_t num_factors() const { return factors_.size(); }
  const Factor& factor(std::size_t i) const {
    if (i >= factors_.size()) throw std::out_of_range("factor index out of range");
    return factors_[i];
  }
  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t factor_size(std::size_t i) const { return factor(i).states.size(); }
  std::size_t flat_size() const { return flat_size_; }

  std::size_t to_flat(std::span<const std::size_t> coords) const {
    if (coords.size() != factors_.size())
      throw std::invalid_argument("coordinate tuple has wrong arity");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (coords[i] >= factors_[i].states.size())
        throw std::out_of_range("coordinate out of range for factor '" + factors_[i].name + "'");
      flat += coords[i] * strides_[i];
    }
    return flat;
  }

  std::size_t to_flat(std::initializer_list<std::size_t> coords) const {
    return to_flat(std::span<const std::size_t>(coords.begin(), coords.size()));
  }

  std::vector<std::size_t> to_tuple(std::size_t flat) const {
    check_flat(flat);
    std::vector<std::size_t> coords(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i)
      coords[i] = (flat / strides_[i]) % factors_[i].states.size();
    return coords;
  }

  // Coordinate of one factor inside a flat index; hot path for consistency checks.
  std::size_t coordinate(std::size_t flat, std::size_t i) const {
    check_flat(flat);
    if (i >= factors_.size()) throw std::out_of_range("factor index out of range");
    return (flat / strides_[i]) % factors_[i].states.size();
  }

  // Flat index obtained by replacing factor i's coordinate inside `flat`.
  std::size_t with_coordinate(std::size_t flat, std::size_t i, std::size_t value) const {
    const std::size_t old = coordinate(flat, i);
    if (value >= factors_[i].states.size())
      throw std::out_of_range("coordinate out of range for factor '" + factors_[i].name + "'");
    return flat - old * strides_[i] + value * strides_[i];
  }

  // Flat index over the complementary coordinates (all factors except i),
  // in the same row-major order with factor i removed.
  std::size_t complement_size(std::size_t i) const {
    if (i >= factors_.size()) throw std::out_of_range("factor index out of range");
    return flat_size_ / factors_[i].states.size();
  }

  // Rebuild a full flat index from (coordinate of factor i, complementary flat index).
  std::size_t compose(std::size_t i, std::size_t coord_i, std::size_t complement_flat) const {
    if (i >= factors_.size()) throw std::out_of_range("factor index out of range");
    std::vector<std::size_t> coords(factors_.size());
    std::size_t rem = complement_flat;
    for (std::size_t k = factors_.size(); k-- > 0;) {
      if (k == i) continue;
      const std::size_t sz = factors_[k].states.size();
      coords[k] = rem % sz;
      rem /= sz;
    }
    if (rem != 0) throw std::out_of_range("complementary index out of range");
    coords[i] = coord_i;
    return to_flat(coords);
  }

  std::size_t complement_index(std::size_t flat, std::size_t i) const {
    check_flat(flat);
    std::size_t idx = 0;
    for (std::size_t k = 0; k < factors_.size(); ++k) {
      if (k == i) continue;
      idx = idx * factors_[k].states.size() + coordinate(flat, k);
    }
    return idx;
  }

  std::string state_label(std::size_t flat) const {
    const std::vector<std::size_t> coords = to_tuple(flat);
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (i) os << ',';
      os << factors_[i].states[coords[i]];
    }
    os << ')';
    return os.str();
  }

  bool operator==(const StateSpace& o) const {
    if (factors_.size() != o.factors_.size()) return false;
    for (std::size_t i = 0; i < factors_.size(); ++i)
      if (factors_[i].name != o.factors_[i].name || factors_[i].states != o.factors_[i].states)
        return false;
    return true;
  }
  bool operator!=(const StateSpace& o) const { return !(*this == o); }

  // The single-factor space of one coordinate process.
  StateSpace marginal_space(std::size_t i) const { return StateSpace({factor(i)}); }

 private:
  void check_flat(std::size_t flat) const {
    if (flat >= flat_size_) throw std::out_of_range("flat state index out of range");
  }

  std::vector<Factor> factors_;
  std::vector<std::size_t> strides_;
  std::size_t flat_size_ = 0;
};

inline StateSpace binary_space(const std::string& name) {
  return StateSpace({Factor{name, {"0", "1"}}});
}

inline StateSpace binary_pair_space(const std::string& first = "X1",
                                    const std::string& second = "X2") {
  return StateSpace({Factor{first, {"0", "1"}}, Factor{second, {"0", "1"}}});
}

// Probability distribution over the flat states of a StateSpace.
class Distribution {
 public:
  static constexpr double kMassTolerance = 1e-12;

  Distribution(StateSpace space, std::vector<double> weights)
      : space_(std::move(space)), weights_(std::move(weights)) {
    if (weights_.size() != space_.flat_size())
      throw std::invalid_argument("distribution weight count does not match state space size");
    double sum = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0)) throw std::invalid_argument("distribution weights must be nonnegative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > kMassTolerance)
      throw std::invalid_argument("distribution weights must sum to one");
  }

  static Distribution point_mass(const StateSpace& space, std::size_t flat) {
    if (flat >= space.flat_size()) throw std::out_of_range("point mass state out of range");
    std::vector<double> w(space.flat_size(), 0.0);
    w[flat] = 1.0;
    return Distribution(space, std::move(w));
  }

  static Distribution uniform(const StateSpace& space) {
    const double p = 1.0 / static_cast<double>(space.flat_size());
    return Distribution(space, std::vector<double>(space.flat_size(), p));
  }

  const StateSpace& space() const { return space_; }
  const std::vector<double>& weights() const { return weights_; }
  double operator[](std::size_t flat) const { return weights_.at(flat); }

  // Marginal law of one factor.
  std::vector<double> marginal(std::size_t i) const {
    std::vector<double> out(space_.factor_size(i), 0.0);
    for (std::size_t x = 0; x < weights_.size(); ++x) out[space_.coordinate(x, i)] += weights_[x];
    return out;
  }

 private:
  StateSpace space_;
  std::vector<double> weights_;
};

}  // namespace markovcopula
