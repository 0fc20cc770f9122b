#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <stdexcept>

#include "markovcopula/generator.hpp"
#include "markovcopula/rate_matrix.hpp"
#include "markovcopula/state_space.hpp"
#include "oracles.hpp"

using namespace markovcopula;

TEST_CASE("flat indexing is row-major with the first factor slowest", "[state_space]") {
  const StateSpace space = binary_pair_space();
  REQUIRE(space.flat_size() == 4);
  CHECK(space.to_flat({0, 0}) == 0);
  CHECK(space.to_flat({0, 1}) == 1);
  CHECK(space.to_flat({1, 0}) == 2);
  CHECK(space.to_flat({1, 1}) == 3);
  CHECK(space.state_label(1) == "(0,1)");
  CHECK(space.state_label(2) == "(1,0)");
}

TEST_CASE("flat index round-trips through tuples for a 3x2x4 space", "[state_space]") {
  const StateSpace space = oracles::make_shape_space({3, 2, 4});
  REQUIRE(space.flat_size() == 24);
  for (std::size_t x = 0; x < space.flat_size(); ++x) {
    const auto coords = space.to_tuple(x);
    CHECK(space.to_flat(coords) == x);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(space.coordinate(x, i) == coords[i]);
      CHECK(space.compose(i, coords[i], space.complement_index(x, i)) == x);
    }
  }
  // Last factor varies fastest.
  CHECK(space.to_flat({0, 0, 1}) == 1);
  CHECK(space.to_flat({0, 1, 0}) == 4);
  CHECK(space.to_flat({1, 0, 0}) == 8);
}

TEST_CASE("state space construction rejects degenerate factors", "[state_space]") {
  CHECK_THROWS_AS(StateSpace({}), std::invalid_argument);
  CHECK_THROWS_AS(StateSpace({Factor{"X1", {"only"}}}), std::invalid_argument);
  CHECK_THROWS_AS(StateSpace({Factor{"X1", {"a", "a"}}}), std::invalid_argument);
  CHECK_THROWS_AS(StateSpace({Factor{"", {"0", "1"}}}), std::invalid_argument);
}

TEST_CASE("distributions validate mass and expose marginals", "[distribution]") {
  const StateSpace space = binary_pair_space();
  const Distribution mu = Distribution(space, {0.1, 0.2, 0.3, 0.4});
  const auto m1 = mu.marginal(0);
  const auto m2 = mu.marginal(1);
  CHECK(m1[0] == Catch::Approx(0.3).margin(1e-15));
  CHECK(m1[1] == Catch::Approx(0.7).margin(1e-15));
  CHECK(m2[0] == Catch::Approx(0.4).margin(1e-15));

  CHECK_THROWS_AS(Distribution(space, {0.5, 0.5, 0.1, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Distribution(space, {-0.1, 0.6, 0.5, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Distribution(space, {1.0, 0.0, 0.0}), std::invalid_argument);

  const Distribution pm = Distribution::point_mass(space, 2);
  CHECK(pm[2] == 1.0);
  CHECK(pm[0] == 0.0);
}

TEST_CASE("rate matrix validation finds sign and row-sum defects", "[rate_matrix]") {
  Matrix good(4, 4);
  const double a = 0.5, b = 0.3, c = 0.2;
  good(0, 0) = -(a + b + c); good(0, 1) = b; good(0, 2) = a; good(0, 3) = c;
  good(1, 1) = -(a + c); good(1, 3) = a + c;
  good(2, 2) = -(b + c); good(2, 3) = b + c;
  CHECK(RateMatrix(good).valid());

  CHECK(RateMatrix(Matrix(3, 3)).valid());  // all-absorbing zero matrix

  Matrix neg = good;
  neg(0, 1) = -0.1;
  const auto viols = RateMatrix(neg).violations();
  REQUIRE_FALSE(viols.empty());
  bool found = false;
  for (const auto& v : viols)
    if (v.kind == RateMatrixViolation::Kind::negative_off_diagonal && v.row == 0 && v.col == 1)
      found = true;
  CHECK(found);

  Matrix drift = good;
  drift(2, 2) = -(b + c) + 1e-6;
  bool row_sum_flagged = false;
  for (const auto& v : RateMatrix(drift).violations())
    if (v.kind == RateMatrixViolation::Kind::row_sum && v.row == 2) row_sum_flagged = true;
  CHECK(row_sum_flagged);

  CHECK_THROWS_AS(RateMatrix(Matrix(2, 3)), std::invalid_argument);
}

TEST_CASE("named family: coupled absorbing pair builds the documented matrix", "[generator]") {
  const GeneratorFunction g = GeneratorFunction::family("example_3_1",
                                                        {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}});
  REQUIRE(g.space().flat_size() == 4);
  const RateMatrix m = g.at(0.0);
  CHECK(m.rate(0, 1) == 0.3);
  CHECK(m.rate(0, 2) == 0.5);
  CHECK(m.rate(0, 3) == 0.2);
  CHECK(m.entries(0, 0) == -1.0);
  CHECK(m.rate(1, 3) == 0.7);
  CHECK(m.rate(2, 3) == 0.5);
  CHECK(m.rate(1, 2) == 0.0);
  CHECK(m.exit_rate(3) == 0.0);
  CHECK(m.valid());
  CHECK_FALSE(g.time_dependent());
}

TEST_CASE("named family: joint-only pair and its parameter guard", "[generator]") {
  const GeneratorFunction g = GeneratorFunction::family("example_3_2_joint",
                                                        {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}});
  const RateMatrix m = g.at(1.0);
  CHECK(m.rate(1, 3) == 0.5);  // mixed state completes at the bare single rate
  CHECK(m.rate(2, 3) == 0.3);
  CHECK(m.rate(0, 3) == 0.2);
  CHECK(m.valid());

  CHECK_THROWS_AS(
      GeneratorFunction::family("example_3_2_joint", {{"a", 0.5}, {"b", 0.3}, {"c", 0.0}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      GeneratorFunction::family("example_3_2_joint", {{"a", -0.5}, {"b", 0.3}, {"c", 0.2}}),
      std::invalid_argument);
}

TEST_CASE("family registry rejects unknown names and wrong parameter sets", "[generator]") {
  CHECK_THROWS_AS(GeneratorFunction::family("no_such_family", {{"a", 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(GeneratorFunction::family("example_3_1", {{"a", 1.0}, {"b", 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      GeneratorFunction::family("example_3_1",
                                {{"a", 1.0}, {"b", 1.0}, {"c", 1.0}, {"d", 1.0}}),
      std::invalid_argument);
}

TEST_CASE("time-dependent marginal family evaluates its closed form", "[generator]") {
  const GeneratorFunction g = GeneratorFunction::family("example_3_2_marginal_1",
                                                        {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}});
  REQUIRE(g.space().flat_size() == 2);
  CHECK(g.time_dependent());
  const double t = 1.0;
  const double expected = oracles::marginal_up_rate_first(0.5, 0.3, 0.2, t);
  CHECK(g.at(t).rate(0, 1) == Catch::Approx(expected).margin(1e-12));
  CHECK(g.at(t).rate(0, 1) == Catch::Approx(0.6439643560173424).margin(1e-12));
  // At t = 0 the correction vanishes.
  CHECK(g.at(0.0).rate(0, 1) == Catch::Approx(0.7).margin(1e-15));
}

TEST_CASE("piecewise generators are right-continuous at breakpoints", "[generator]") {
  Matrix m1(2, 2), m2(2, 2);
  m1(0, 0) = -1.0; m1(0, 1) = 1.0;
  m2(0, 0) = -3.0; m2(0, 1) = 3.0;
  const GeneratorFunction g =
      GeneratorFunction::piecewise(binary_space("X1"), {0.0, 1.5}, {m1, m2});
  CHECK(g.at(0.0).rate(0, 1) == 1.0);
  CHECK(g.at(1.4999).rate(0, 1) == 1.0);
  CHECK(g.at(1.5).rate(0, 1) == 3.0);  // value of the right segment
  CHECK(g.at(10.0).rate(0, 1) == 3.0);
  CHECK(g.time_dependent());

  CHECK_THROWS_AS(GeneratorFunction::piecewise(binary_space("X1"), {0.5}, {m1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(GeneratorFunction::piecewise(binary_space("X1"), {0.0, 0.0}, {m1, m2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(GeneratorFunction::piecewise(binary_space("X1"), {0.0}, {m1, m2}),
                  std::invalid_argument);
}

TEST_CASE("constant factory rejects dimension mismatches", "[generator]") {
  CHECK_THROWS_AS(GeneratorFunction::constant(binary_pair_space(), Matrix(2, 2)),
                  std::invalid_argument);
}

TEST_CASE("validate_generator reports offending entries with their probe time", "[generator]") {
  Matrix bad(2, 2);
  bad(0, 0) = -1.0; bad(0, 1) = 1.0;
  bad(1, 0) = -0.25; bad(1, 1) = 0.25;
  const GeneratorFunction g = GeneratorFunction::constant(binary_space("X1"), bad);
  const ValidationReport rep = validate_generator(g, {0.0, 2.0});
  CHECK_FALSE(rep.ok);
  REQUIRE_FALSE(rep.violations.empty());
  CHECK(rep.violations.front().violation.row == 1);
  CHECK(rep.violations.front().violation.col == 0);

  const GeneratorFunction zero = GeneratorFunction::constant(binary_space("X1"), Matrix(2, 2));
  CHECK(validate_generator(zero, {0.0, 1.0, 7.5}).ok);

  CHECK_THROWS_AS(validate_generator(zero, {}), std::invalid_argument);
  CHECK_THROWS_AS(validate_generator(zero, {-1.0}), std::invalid_argument);
}

namespace {

GeneratorFunction absorbing_marginal_generator(const std::string& name, double up_rate) {
  Matrix m(2, 2);
  m(0, 0) = -up_rate;
  m(0, 1) = up_rate;
  return GeneratorFunction::constant(binary_space(name), m);
}

}  // namespace

TEST_CASE("tensor sum of absorbing marginals reproduces the c = 0 coupled pair", "[tensor_sum]") {
  const double a = 0.5, b = 0.3;
  const GeneratorFunction g1 = absorbing_marginal_generator("X1", a);
  const GeneratorFunction g2 = absorbing_marginal_generator("X2", b);
  const GeneratorFunction joint = tensor_sum(g1, g2);
  REQUIRE(joint.space().flat_size() == 4);

  const GeneratorFunction reference =
      GeneratorFunction::family("example_3_1", {{"a", a}, {"b", b}, {"c", 0.0}});
  const Matrix diff_l = joint.at(0.0).entries;
  const Matrix diff_r = reference.at(0.0).entries;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(diff_l(i, j) == diff_r(i, j));  // exact equality
}

TEST_CASE("tensor sum never produces simultaneous jumps", "[tensor_sum]") {
  const GeneratorFunction joint = tensor_sum(absorbing_marginal_generator("X1", 0.7),
                                             absorbing_marginal_generator("X2", 0.5));
  const RateMatrix m = joint.at(0.0);
  CHECK(m.rate(0, 3) == 0.0);  // (0,0) -> (1,1)
  CHECK(m.rate(1, 2) == 0.0);  // (0,1) -> (1,0)
  CHECK(m.rate(0, 1) == 0.5);
  CHECK(m.rate(0, 2) == 0.7);
  CHECK(m.valid());
}

TEST_CASE("tensor sum validates for random marginal pairs", "[tensor_sum][property]") {
  std::mt19937_64 rng(20260822);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n1 = 2 + static_cast<std::size_t>(rng() % 2);
    const std::size_t n2 = 2 + static_cast<std::size_t>(rng() % 2);
    const GeneratorFunction g1 = GeneratorFunction::constant(
        oracles::make_shape_space({n1}), oracles::random_rate_matrix(rng, n1));
    const GeneratorFunction g2 = GeneratorFunction::constant(
        StateSpace({Factor{"Y2", oracles::make_shape_space({n2}).factor(0).states}}),
        oracles::random_rate_matrix(rng, n2));
    const GeneratorFunction joint = tensor_sum(g1, g2);
    CHECK(validate_generator(joint, {0.0, 1.0}).ok);
    // Diagonal adds the parts' exit rates.
    const RateMatrix jm = joint.at(0.0);
    const RateMatrix m1 = g1.at(0.0);
    const RateMatrix m2 = g2.at(0.0);
    for (std::size_t x1 = 0; x1 < n1; ++x1)
      for (std::size_t x2 = 0; x2 < n2; ++x2) {
        const double expected = m1.entries(x1, x1) + m2.entries(x2, x2);
        CHECK(jm.entries(x1 * n2 + x2, x1 * n2 + x2) == Catch::Approx(expected).margin(1e-15));
      }
  }
}

TEST_CASE("tensor sum rejects duplicate factor names", "[tensor_sum]") {
  CHECK_THROWS_AS(tensor_sum(absorbing_marginal_generator("X1", 0.5),
                             absorbing_marginal_generator("X1", 0.3)),
                  std::invalid_argument);
}

TEST_CASE("extension matrices are one-hot on the selected coordinate", "[extension]") {
  const StateSpace space = binary_pair_space();
  const ExtensionMatrix c1 = extension_matrix(space, 0);
  const ExtensionMatrix c2 = extension_matrix(space, 1);
  REQUIRE(c1.entries.rows() == 4);
  REQUIRE(c1.entries.cols() == 2);
  // First coordinate: rows (0,0),(0,1) select column 0; rows (1,0),(1,1) column 1.
  const double expected1[4][2] = {{1, 0}, {1, 0}, {0, 1}, {0, 1}};
  const double expected2[4][2] = {{1, 0}, {0, 1}, {1, 0}, {0, 1}};
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 2; ++c) {
      CHECK(c1.entries(r, c) == expected1[r][c]);
      CHECK(c2.entries(r, c) == expected2[r][c]);
    }
  CHECK_THROWS_AS(extension_matrix(space, 2), std::out_of_range);
}

TEST_CASE("extension matrix reproduces factor functions exactly", "[extension][property]") {
  const StateSpace space = oracles::make_shape_space({3, 2});
  const ExtensionMatrix c1 = extension_matrix(space, 0);
  REQUIRE(c1.entries.rows() == 6);
  REQUIRE(c1.entries.cols() == 3);
  const std::vector<double> f = {2.5, -1.0, 7.25};
  for (std::size_t x = 0; x < space.flat_size(); ++x) {
    double lifted = 0.0;
    for (std::size_t j = 0; j < 3; ++j) lifted += c1.entries(x, j) * f[j];
    CHECK(lifted == f[space.coordinate(x, 0)]);  // bit-exact: entries are 0/1
  }
}

TEST_CASE("jump intensity reads one off-diagonal entry and rejects v = w", "[generator]") {
  const GeneratorFunction g = GeneratorFunction::family("example_3_2_joint",
                                                        {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}});
  CHECK(jump_intensity(g, 0, 3, 0.7) == 0.2);
  CHECK(jump_intensity(g, 1, 2, 123.0) == 0.0);
  CHECK_THROWS_AS(jump_intensity(g, 2, 2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(jump_intensity(g, 0, 9, 0.0), std::out_of_range);
}
