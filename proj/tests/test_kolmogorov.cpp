#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <stdexcept>

#include "markovcopula/kolmogorov.hpp"
#include "oracles.hpp"

using namespace markovcopula;

namespace {

GeneratorFunction coupled_pair(double a, double b, double c) {
  return GeneratorFunction::family("example_3_1", {{"a", a}, {"b", b}, {"c", c}});
}

GeneratorFunction joint_only_pair(double a, double b, double c) {
  return GeneratorFunction::family("example_3_2_joint", {{"a", a}, {"b", b}, {"c", c}});
}

GeneratorFunction feedback_pair() {
  return GeneratorFunction::family("example_3_3", {{"a", 0.4}, {"b", 0.3}, {"c", 0.2},
                                                   {"d", 0.25}, {"e", 0.15}, {"f", 0.1},
                                                   {"g", 0.35}});
}

}  // namespace

TEST_CASE("matrix exponential agrees with uniformization on random generators",
          "[expm][property]") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(rng() % 5);
    const Matrix rates = oracles::random_rate_matrix(rng, n);
    const double t = 0.1 + 0.4 * static_cast<double>(trial % 8);
    const Matrix via_series = expm(rates * t);
    const Matrix via_uniform = oracles::uniformization_expm(rates, t);
    CHECK(max_abs_diff(via_series, via_uniform) <= 1e-12);
  }
  CHECK(max_abs_diff(expm(Matrix(3, 3)), Matrix::identity(3)) == 0.0);
}

TEST_CASE("transition matrix matches the coupled-pair closed form", "[transition]") {
  const double a = 0.5, b = 0.3, c = 0.2;
  const GeneratorFunction g = coupled_pair(a, b, c);
  for (double t : {0.25, 1.0, 2.0}) {
    const TransitionMatrix p = transition_matrix(g, 0.0, t);
    const Matrix expected = oracles::coupled_pair_transition(a, b, c, t);
    CHECK(max_abs_diff(p.entries, expected) <= 1e-10);
    CHECK(p.row_sum_defect <= 1e-12);
    CHECK(p.boundary_defect <= 1e-12);
  }
  const TransitionMatrix p1 = transition_matrix(g, 0.0, 1.0);
  CHECK(p1.entries(0, 0) == Catch::Approx(std::exp(-1.0)).margin(1e-10));
}

TEST_CASE("transition matrix matches the joint-only-pair closed form", "[transition]") {
  const double a = 0.5, b = 0.3, c = 0.2;
  const GeneratorFunction g = joint_only_pair(a, b, c);
  const TransitionMatrix p = transition_matrix(g, 0.0, 1.0);
  CHECK(p.entries(0, 1) == Catch::Approx(0.14319073112471464).margin(1e-10));
  const Matrix expected = oracles::joint_only_pair_transition(a, b, c, 1.0);
  CHECK(max_abs_diff(p.entries, expected) <= 1e-10);
}

TEST_CASE("transition matrix handles degenerate intervals and bad input", "[transition]") {
  const GeneratorFunction g = coupled_pair(0.5, 0.3, 0.2);
  const TransitionMatrix id = transition_matrix(g, 0.75, 0.75);
  CHECK(max_abs_diff(id.entries, Matrix::identity(4)) == 0.0);

  CHECK_THROWS_AS(transition_matrix(g, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(transition_matrix(g, -0.5, 0.5), std::invalid_argument);

  Matrix bad(2, 2);
  bad(0, 1) = -1.0;
  bad(0, 0) = 1.0;
  const GeneratorFunction invalid = GeneratorFunction::constant(binary_space("X1"), bad);
  CHECK_THROWS_AS(transition_matrix(invalid, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("piecewise solve is the ordered product of segment exponentials", "[transition]") {
  std::mt19937_64 rng(4242);
  const Matrix m1 = oracles::random_rate_matrix(rng, 3);
  const Matrix m2 = oracles::random_rate_matrix(rng, 3);
  const GeneratorFunction g = GeneratorFunction::piecewise(
      oracles::make_shape_space({3}), {0.0, 1.0}, {m1, m2});

  const Matrix expected = expm(m1 * 1.0) * expm(m2 * 0.8);
  CHECK(max_abs_diff(transition_matrix(g, 0.0, 1.8).entries, expected) <= 1e-13);

  // Interval straddling the breakpoint from the inside.
  const Matrix expected_mid = expm(m1 * 0.4) * expm(m2 * 0.3);
  CHECK(max_abs_diff(transition_matrix(g, 0.6, 1.3).entries, expected_mid) <= 1e-13);

  // Interval entirely inside the second segment.
  CHECK(max_abs_diff(transition_matrix(g, 2.0, 2.5).entries, expm(m2 * 0.5)) <= 1e-13);
}

TEST_CASE("time-dependent family solve reproduces the occupation closed form",
          "[transition][rk4]") {
  const double a = 0.5, b = 0.3, c = 0.2;
  const GeneratorFunction g = GeneratorFunction::family(
      "example_3_2_marginal_1", {{"a", a}, {"b", b}, {"c", c}});
  for (double t : {0.5, 1.0, 2.0}) {
    const TransitionMatrix p = transition_matrix(g, 0.0, t);
    // Survival in state 0 of the extracted one-jump chain equals the joint
    // model's probability that the first coordinate still reads 0.
    const Matrix joint = oracles::joint_only_pair_transition(a, b, c, t);
    const double expected = joint(0, 0) + joint(0, 1);
    CHECK(p.entries(0, 0) == Catch::Approx(expected).margin(1e-9));
    CHECK(p.entries(1, 1) == 1.0);
  }
}

TEST_CASE("kronecker-sum composites factor into per-part solutions", "[transition]") {
  Matrix up(2, 2), down(2, 2);
  up(0, 0) = -0.7; up(0, 1) = 0.7;
  down(0, 0) = -0.4; down(0, 1) = 0.4; down(1, 0) = 0.9; down(1, 1) = -0.9;
  const GeneratorFunction g1 = GeneratorFunction::constant(binary_space("X1"), up);
  const GeneratorFunction g2 = GeneratorFunction::constant(binary_space("X2"), down);
  const GeneratorFunction joint = tensor_sum(g1, g2);

  const TransitionMatrix p = transition_matrix(joint, 0.0, 1.3);
  const Matrix expected = kron(transition_matrix(g1, 0.0, 1.3).entries,
                               transition_matrix(g2, 0.0, 1.3).entries);
  CHECK(max_abs_diff(p.entries, expected) <= 1e-14);

  // Cross-check against a direct dense solve of the embedded 4x4 matrix.
  const Matrix dense = expm(joint.at(0.0).entries * 1.3);
  CHECK(max_abs_diff(p.entries, dense) <= 1e-12);
}

TEST_CASE("chapman-kolmogorov holds across the random corpus", "[transition][property]") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const GeneratorFunction g = oracles::random_factored_generator(seed);
    const double t1 = 0.4 + 0.05 * static_cast<double>(seed);
    const double t2 = t1 + 0.9;
    const Matrix lhs = transition_matrix(g, 0.0, t2).entries;
    const Matrix rhs =
        transition_matrix(g, 0.0, t1).entries * transition_matrix(g, t1, t2).entries;
    CHECK(max_abs_diff(lhs, rhs) <= 1e-7);
  }
}

TEST_CASE("evolve propagates and preserves point masses at absorbing states", "[evolve]") {
  const GeneratorFunction g = coupled_pair(0.5, 0.3, 0.2);
  const Distribution start = Distribution::point_mass(g.space(), 0);

  const Distribution at0 = evolve(start, g, 0.0);
  CHECK(at0[0] == 1.0);

  const Distribution absorbed = evolve(Distribution::point_mass(g.space(), 3), g, 5.0);
  CHECK(absorbed[3] == Catch::Approx(1.0).margin(1e-12));

  const Distribution mu1 = evolve(Distribution::point_mass(g.space(), 0),
                                  joint_only_pair(0.5, 0.3, 0.2), 1.0);
  CHECK(mu1[0] == Catch::Approx(std::exp(-1.0)).margin(1e-10));

  CHECK_THROWS_AS(evolve(Distribution::point_mass(binary_pair_space("A", "B"), 0), g, 1.0),
                  std::invalid_argument);
}

TEST_CASE("single-constraint path events are exactly a Bayes restriction", "[path_event]") {
  const GeneratorFunction g = feedback_pair();
  const Distribution mu0 = Distribution::point_mass(g.space(), 0);
  const double t = 1.0;
  const Distribution mu_t = evolve(mu0, g, t);

  for (std::size_t s2 = 0; s2 < 2; ++s2) {
    PathEvent ev;
    ev.factor = 1;
    ev.constraints = {{t, s2}};
    const PathEventLaw law = path_event_law(mu0, g, ev);
    const double expected_prob = mu_t.marginal(1)[s2];
    CHECK(law.probability == Catch::Approx(expected_prob).margin(1e-12));
    REQUIRE(law.conditional.has_value());
    for (std::size_t x = 0; x < 4; ++x) {
      const double expected =
          g.space().coordinate(x, 1) == s2 ? mu_t[x] / expected_prob : 0.0;
      CHECK((*law.conditional)[x] == Catch::Approx(expected).margin(1e-12));
    }
  }
}

TEST_CASE("pattern probabilities on a fixed grid sum to one", "[path_event][property]") {
  const GeneratorFunction g = feedback_pair();
  const Distribution mu0 = Distribution::point_mass(g.space(), 0);
  const std::vector<double> times = {0.4, 0.8, 1.2};
  double total = 0.0;
  for (std::size_t bits = 0; bits < 8; ++bits) {
    PathEvent ev;
    ev.factor = 1;
    for (std::size_t k = 0; k < times.size(); ++k)
      ev.constraints.push_back({times[k], (bits >> k) & 1});
    total += path_event_law(mu0, g, ev).probability;
  }
  CHECK(total == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("the mixed-history event pins the hidden coordinate", "[path_event]") {
  // Seeing the second coordinate at 1 then back at 0 forces the first
  // coordinate to have reached 1 (only (1,1) can fall back to (1,0)).
  const GeneratorFunction g = feedback_pair();
  const Distribution mu0 = Distribution::point_mass(g.space(), 0);
  PathEvent ev;
  ev.factor = 1;
  ev.constraints = {{0.5, 1}, {1.0, 0}};
  const PathEventLaw law = path_event_law(mu0, g, ev);
  REQUIRE(law.conditional.has_value());
  CHECK(law.probability > 0.0);
  CHECK((*law.conditional)[2] == Catch::Approx(1.0).margin(1e-12));
  CHECK((*law.conditional)[0] == 0.0);
  CHECK((*law.conditional)[1] == 0.0);
  CHECK((*law.conditional)[3] == 0.0);
}

TEST_CASE("impossible events report an undefined conditional", "[path_event]") {
  // With both downward rates (d and g) zero the second coordinate can never
  // fall back from 1 to 0, so the event below has probability zero.
  const GeneratorFunction g = GeneratorFunction::family(
      "example_3_3", {{"a", 0.4}, {"b", 0.3}, {"c", 0.2}, {"d", 0.0}, {"e", 0.15},
                      {"f", 0.1}, {"g", 0.0}});
  const Distribution mu0 = Distribution::point_mass(g.space(), 0);
  PathEvent ev;
  ev.factor = 1;
  ev.constraints = {{0.5, 1}, {1.0, 0}};
  const PathEventLaw law = path_event_law(mu0, g, ev);
  CHECK(law.probability <= kReachabilityEpsilon);
  CHECK_FALSE(law.conditional.has_value());
}

TEST_CASE("path events validate their structure", "[path_event]") {
  const GeneratorFunction g = feedback_pair();
  const Distribution mu0 = Distribution::point_mass(g.space(), 0);
  PathEvent ev;
  ev.factor = 1;
  ev.constraints = {{1.0, 0}, {0.5, 1}};  // times not increasing
  CHECK_THROWS_AS(path_event_law(mu0, g, ev), std::invalid_argument);
  ev.constraints = {{0.5, 7}};
  CHECK_THROWS_AS(path_event_law(mu0, g, ev), std::invalid_argument);
  ev.constraints = {};
  CHECK_THROWS_AS(path_event_law(mu0, g, ev), std::invalid_argument);
  ev.constraints = {{0.5, 0}};
  ev.factor = 5;
  CHECK_THROWS_AS(path_event_law(mu0, g, ev), std::invalid_argument);
}

TEST_CASE("conditional operator rows are Bayes restrictions per factor state",
          "[conditional]") {
  const double a = 0.5, b = 0.3, c = 0.2;
  const GeneratorFunction g = joint_only_pair(a, b, c);
  const Distribution mu0 = Distribution::point_mass(g.space(), 0);

  const ConditionalOperator q0 = conditional_operator(mu0, g, 0, 0.0);
  REQUIRE(q0.defined[0]);
  CHECK_FALSE(q0.defined[1]);  // first coordinate cannot read 1 at time 0
  CHECK(q0.rows(0, 0) == Catch::Approx(1.0).margin(1e-15));

  const ConditionalOperator q1 = conditional_operator(mu0, g, 0, 1.0);
  REQUIRE(q1.defined[0]);
  REQUIRE(q1.defined[1]);
  CHECK(q1.rows(0, 0) == Catch::Approx(0.7198217800867119).margin(1e-9));
  // Rows live on the matching coordinate and sum to one.
  for (std::size_t xi = 0; xi < 2; ++xi) {
    double sum = 0.0;
    for (std::size_t x = 0; x < 4; ++x) {
      if (g.space().coordinate(x, 0) != xi) CHECK(q1.rows(xi, x) == 0.0);
      sum += q1.rows(xi, x);
    }
    CHECK(sum == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("conditional operator factorizes for independent couplings", "[conditional]") {
  Matrix up(2, 2), flip(2, 2);
  up(0, 0) = -0.6; up(0, 1) = 0.6;
  flip(0, 0) = -0.8; flip(0, 1) = 0.8; flip(1, 0) = 0.5; flip(1, 1) = -0.5;
  const GeneratorFunction joint = tensor_sum(
      GeneratorFunction::constant(binary_space("X1"), up),
      GeneratorFunction::constant(binary_space("X2"), flip));
  const Distribution mu0 = Distribution::point_mass(joint.space(), 0);

  const double t = 0.9;
  const ConditionalOperator q = conditional_operator(mu0, joint, 0, t);
  const GeneratorFunction g2 = GeneratorFunction::constant(binary_space("X2"), flip);
  const Distribution nu_t = evolve(Distribution::point_mass(g2.space(), 0), g2, t);
  for (std::size_t x1 = 0; x1 < 2; ++x1) {
    REQUIRE(q.defined[x1]);
    for (std::size_t x2 = 0; x2 < 2; ++x2)
      CHECK(q.rows(x1, joint.space().to_flat({x1, x2})) ==
            Catch::Approx(nu_t[x2]).margin(1e-12));
  }
}
