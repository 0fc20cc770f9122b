#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "markovcopula/copula.hpp"
#include "oracles.hpp"

using namespace markovcopula;

namespace {

Matrix absorbing_matrix(double rate) {
  Matrix m(2, 2);
  m(0, 0) = -rate;
  m(0, 1) = rate;
  return m;
}

GeneratorFunction absorbing_marginal(const std::string& name, double rate) {
  return GeneratorFunction::constant(binary_space(name), absorbing_matrix(rate));
}

// General binary marginal with up rate `up` and down rate `down`.
GeneratorFunction binary_marginal(const std::string& name, double up, double down) {
  Matrix m(2, 2);
  m(0, 0) = -up;
  m(0, 1) = up;
  m(1, 0) = down;
  m(1, 1) = -down;
  return GeneratorFunction::constant(binary_space(name), m);
}

CopulaProblem two_marginal_problem(GeneratorFunction m1, GeneratorFunction m2,
                                   CopulaObjective objective) {
  CopulaProblem p;
  p.marginals.push_back(std::move(m1));
  p.marginals.push_back(std::move(m2));
  p.objective = objective;
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// Equality-form simplex solver
// ---------------------------------------------------------------------------

TEST_CASE("simplex solves a pinned equality program", "[simplex]") {
  const SimplexResult r =
      simplex_solve({{1.0, 1.0}}, {1.0}, {-1.0, -1.0});
  REQUIRE(r.status == SimplexResult::Status::optimal);
  CHECK(r.objective == Catch::Approx(-1.0).margin(1e-12));
  CHECK(r.x[0] + r.x[1] == Catch::Approx(1.0).margin(1e-12));

  const SimplexResult s =
      simplex_solve({{1.0, 1.0, 1.0}}, {2.0}, {0.0, -1.0, 0.0});
  REQUIRE(s.status == SimplexResult::Status::optimal);
  CHECK(s.objective == Catch::Approx(-2.0).margin(1e-12));
  CHECK(s.x[1] == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("simplex detects infeasible and unbounded programs", "[simplex]") {
  // x1 = 1 and x1 = 2 cannot both hold.
  const SimplexResult inf =
      simplex_solve({{1.0, 0.0}, {1.0, 0.0}}, {1.0, 2.0}, {0.0, 0.0});
  CHECK(inf.status == SimplexResult::Status::infeasible);

  // x1 - x2 = 0 with objective -x1 runs off along the diagonal.
  const SimplexResult unb = simplex_solve({{1.0, -1.0}}, {0.0}, {-1.0, 0.0});
  CHECK(unb.status == SimplexResult::Status::unbounded);
}

TEST_CASE("simplex tolerates redundant rows and negative right-hand sides", "[simplex]") {
  const SimplexResult red =
      simplex_solve({{1.0, 1.0}, {2.0, 2.0}}, {1.0, 2.0}, {1.0, 0.0});
  REQUIRE(red.status == SimplexResult::Status::optimal);
  CHECK(red.objective == Catch::Approx(0.0).margin(1e-12));
  CHECK(red.x[1] == Catch::Approx(1.0).margin(1e-12));

  const SimplexResult neg = simplex_solve({{-1.0, -1.0}}, {-1.0}, {1.0, 1.0});
  REQUIRE(neg.status == SimplexResult::Status::optimal);
  CHECK(neg.objective == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("lexicographic refinement picks the canonical optimum", "[simplex]") {
  // Every point of the segment x1 + x2 = 1 is optimal; the refinement
  // minimizes the coordinates in index order, landing on (0, 1).
  const SimplexResult r = simplex_lexmin({{1.0, 1.0}}, {1.0}, {0.0, 0.0});
  REQUIRE(r.status == SimplexResult::Status::optimal);
  CHECK(r.x[0] == Catch::Approx(0.0).margin(1e-12));
  CHECK(r.x[1] == Catch::Approx(1.0).margin(1e-12));
}

// ---------------------------------------------------------------------------
// Maximal-coupling construction for the absorbing pair
// ---------------------------------------------------------------------------

TEST_CASE("maximal common-jump coupling of the absorbing marginals is the pinned matrix",
          "[build]") {
  const double up1 = 0.7, up2 = 0.5;
  const CopulaSolution sol = build_strong_copula(two_marginal_problem(
      absorbing_marginal("X1", up1), absorbing_marginal("X2", up2),
      CopulaObjective::maximize_common_jumps));

  CHECK(sol.status == SolverStatus::optimal);
  CHECK(sol.residual <= 1e-12);
  REQUIRE(sol.probe_times == std::vector<double>{0.0});
  REQUIRE(sol.objective_values.size() == 1);
  // The simultaneous jump can run at most at the smaller exit rate.
  CHECK(sol.objective_values[0] == Catch::Approx(0.5).margin(1e-12));
  CHECK(sol.generator.kind() == GeneratorFunction::Kind::constant);

  // The optimum is unique: states ordered (0,0),(0,1),(1,0),(1,1).
  const Matrix m = sol.generator.at(0.0).entries;
  Matrix expected(4, 4);
  expected(0, 3) = 0.5;   // both coordinates jump together
  expected(0, 2) = 0.2;   // first coordinate alone completes its 0.7 budget
  expected(1, 3) = 0.7;   // second coordinate already up: first jumps alone
  expected(2, 3) = 0.5;   // first already up: second jumps alone
  for (std::size_t i = 0; i < 4; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < 4; ++j)
      if (j != i) row += expected(i, j);
    expected(i, i) = -row;
  }
  CHECK(max_abs_diff(m, expected) <= 1e-9);

  const StrongCopulaVerification v = verify_strong_copula(
      sol.generator, {absorbing_marginal("X1", up1), absorbing_marginal("X2", up2)},
      {0.0, 0.8});
  CHECK(v.pass);
  CHECK(v.generator_valid);
  CHECK(v.max_residual <= 1e-9);
}

TEST_CASE("constructed couplings are strongly consistent and return their marginals",
          "[build][roundtrip]") {
  const GeneratorFunction m1 = absorbing_marginal("X1", 0.7);
  const GeneratorFunction m2 = absorbing_marginal("X2", 0.5);
  const CopulaSolution sol = build_strong_copula(
      two_marginal_problem(m1, m2, CopulaObjective::maximize_common_jumps));
  const Distribution mu0 = Distribution::uniform(sol.generator.space());

  for (std::size_t i : {0u, 1u}) {
    const StrongCheckResult r = check_strong(sol.generator, mu0, {0.3, 1.0}, i);
    CHECK(r.verdict == StrongVerdict::strong);
    const Matrix expected = (i == 0) ? m1.at(0.0).entries : m2.at(0.0).entries;
    for (const Matrix& value : r.extracted.values)
      CHECK(max_abs_diff(value, expected) <= 1e-8);
  }
}

TEST_CASE("maximal coupling attains the per-pair minimum formula on random binary marginals",
          "[build][property]") {
  std::mt19937_64 rng(321);
  std::uniform_real_distribution<double> rate(0.0, 2.0);
  for (int trial = 0; trial < 8; ++trial) {
    const double a1 = rate(rng), b1 = rate(rng), a2 = rate(rng), b2 = rate(rng);
    const GeneratorFunction m1 = binary_marginal("X1", a1, b1);
    const GeneratorFunction m2 = binary_marginal("X2", a2, b2);
    const CopulaSolution sol = build_strong_copula(
        two_marginal_problem(m1, m2, CopulaObjective::maximize_common_jumps));
    REQUIRE(sol.status == SolverStatus::optimal);

    // Each simultaneous jump is capped by the two marginal budgets it serves,
    // and the caps are independent because every constraint row contains
    // exactly one simultaneous-jump variable.
    const double expected = std::min(a1, a2) + std::min(a1, b2) + std::min(b1, a2) +
                            std::min(b1, b2);
    CHECK(sol.objective_values[0] == Catch::Approx(expected).margin(1e-9));

    const StrongCopulaVerification v =
        verify_strong_copula(sol.generator, {m1, m2}, {0.0, 1.0});
    CHECK(v.pass);
  }
}

// ---------------------------------------------------------------------------
// Independent and minimal couplings
// ---------------------------------------------------------------------------

TEST_CASE("independent objective reproduces the tensor-sum coupling without optimization",
          "[build]") {
  const GeneratorFunction m1 = absorbing_marginal("X1", 0.7);
  const GeneratorFunction m2 = absorbing_marginal("X2", 0.5);
  const CopulaSolution sol =
      build_strong_copula(two_marginal_problem(m1, m2, CopulaObjective::independent));

  CHECK(sol.status == SolverStatus::optimal);
  CHECK(sol.objective_values[0] == 0.0);
  CHECK(sol.residual <= 1e-15);

  const GeneratorFunction tensor = tensor_sum(m1, m2);
  for (double t : {0.0, 0.7, 2.0})
    CHECK(max_abs_diff(sol.generator.at(t).entries, tensor.at(t).entries) <= 1e-15);

  const Distribution mu0 = Distribution::point_mass(sol.generator.space(), 0);
  const StrongCheckResult r = check_strong(sol.generator, mu0, {0.5}, 0);
  CHECK(r.verdict == StrongVerdict::strong);
}

TEST_CASE("minimal common-jump coupling is the independent one for these marginals",
          "[build]") {
  const GeneratorFunction m1 = absorbing_marginal("X1", 0.7);
  const GeneratorFunction m2 = absorbing_marginal("X2", 0.5);
  const CopulaSolution minimal = build_strong_copula(
      two_marginal_problem(m1, m2, CopulaObjective::minimize_common_jumps));
  const CopulaSolution indep =
      build_strong_copula(two_marginal_problem(m1, m2, CopulaObjective::independent));

  CHECK(minimal.objective_values[0] <= 1e-12);
  CHECK(max_abs_diff(minimal.generator.at(0.0).entries, indep.generator.at(0.0).entries) <=
        1e-12);
}

// ---------------------------------------------------------------------------
// Weighted objective
// ---------------------------------------------------------------------------

TEST_CASE("weighted objective on the double jump recovers the maximal coupling", "[build]") {
  CopulaProblem p = two_marginal_problem(absorbing_marginal("X1", 0.7),
                                         absorbing_marginal("X2", 0.5),
                                         CopulaObjective::maximize_weighted);
  p.weights[{0, 3}] = 1.0;  // (0,0) -> (1,1)
  const CopulaSolution weighted = build_strong_copula(p);

  const CopulaSolution maximal = build_strong_copula(two_marginal_problem(
      absorbing_marginal("X1", 0.7), absorbing_marginal("X2", 0.5),
      CopulaObjective::maximize_common_jumps));
  CHECK(max_abs_diff(weighted.generator.at(0.0).entries,
                     maximal.generator.at(0.0).entries) <= 1e-12);
}

TEST_CASE("weighted objective validates its weights", "[build][errors]") {
  auto base = [] {
    return two_marginal_problem(absorbing_marginal("X1", 0.7),
                                absorbing_marginal("X2", 0.5),
                                CopulaObjective::maximize_weighted);
  };

  CopulaProblem missing = base();
  CHECK_THROWS_AS(build_strong_copula(missing), std::invalid_argument);

  CopulaProblem single_jump = base();
  single_jump.weights[{0, 2}] = 1.0;  // changes only the first coordinate
  CHECK_THROWS_AS(build_strong_copula(single_jump), std::invalid_argument);

  CopulaProblem diagonal = base();
  diagonal.weights[{1, 1}] = 1.0;
  CHECK_THROWS_AS(build_strong_copula(diagonal), std::invalid_argument);

  CopulaProblem negative = base();
  negative.weights[{0, 3}] = -1.0;
  CHECK_THROWS_AS(build_strong_copula(negative), std::invalid_argument);

  CopulaProblem misplaced = base();
  misplaced.objective = CopulaObjective::maximize_common_jumps;
  misplaced.weights[{0, 3}] = 1.0;
  CHECK_THROWS_AS(build_strong_copula(misplaced), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Verification of candidate couplings
// ---------------------------------------------------------------------------

TEST_CASE("verification rejects a coupling whose rate sums miss the marginals", "[verify]") {
  const GeneratorFunction candidate =
      GeneratorFunction::family("example_3_2_joint", {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}});
  const StrongCopulaVerification v = verify_strong_copula(
      candidate, {absorbing_marginal("X1", 0.7), absorbing_marginal("X2", 0.5)}, {1.0});

  CHECK_FALSE(v.pass);
  CHECK(v.generator_valid);
  // Away from (0,0) the simultaneous channel is missing, leaving a gap of c.
  CHECK(v.max_residual == Catch::Approx(0.2).margin(1e-12));
  REQUIRE(v.worst_rows.size() == 1);
  CHECK(v.worst_rows[0].factor == 1);
  CHECK(v.worst_rows[0].from_state == 0);
  CHECK(v.worst_rows[0].to_state == 1);
  CHECK(v.worst_rows[0].config_label == "(1,0)");
  CHECK(v.worst_rows[0].joint_sum == Catch::Approx(0.3).margin(1e-12));
  CHECK(v.worst_rows[0].marginal_rate == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("verification accepts the tensor sum against its factors exactly", "[verify]") {
  const GeneratorFunction m1 = absorbing_marginal("X1", 0.7);
  const GeneratorFunction m2 = absorbing_marginal("X2", 0.5);
  const StrongCopulaVerification v =
      verify_strong_copula(tensor_sum(m1, m2), {m1, m2}, {0.5});
  CHECK(v.pass);
  CHECK(v.max_residual <= 1e-15);
}

TEST_CASE("verification flags an invalid candidate generator", "[verify]") {
  Matrix broken(4, 4);
  broken(0, 0) = 1.0;  // positive diagonal, nonzero row sum
  const GeneratorFunction candidate =
      GeneratorFunction::constant(binary_pair_space("X1", "X2"), broken);
  const StrongCopulaVerification v = verify_strong_copula(
      candidate, {absorbing_marginal("X1", 0.7), absorbing_marginal("X2", 0.5)}, {0.5});
  CHECK_FALSE(v.pass);
  CHECK_FALSE(v.generator_valid);
  CHECK_FALSE(v.validator_violations.empty());
}

TEST_CASE("verification validates shapes and grids", "[verify][errors]") {
  const GeneratorFunction candidate =
      tensor_sum(absorbing_marginal("X1", 0.7), absorbing_marginal("X2", 0.5));
  CHECK_THROWS_AS(verify_strong_copula(candidate, {absorbing_marginal("X1", 0.7)}, {0.5}),
                  std::invalid_argument);
  StateSpace triple({Factor{"X2", {"0", "1", "2"}}});
  CHECK_THROWS_AS(
      verify_strong_copula(candidate,
                           {absorbing_marginal("X1", 0.7),
                            GeneratorFunction::constant(std::move(triple), Matrix(3, 3))},
                           {0.5}),
      std::invalid_argument);
  CHECK_THROWS_AS(verify_strong_copula(
                      candidate,
                      {absorbing_marginal("X1", 0.7), absorbing_marginal("X2", 0.5)}, {}),
                  std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Weak-coupling candidates
// ---------------------------------------------------------------------------

TEST_CASE("registered weak candidate passes verification as weak-only", "[weak_copula]") {
  const FamilyParams params = {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}};
  const WeakCopulaCandidate cand = build_weak_copula_candidate("example_3_2", params);
  REQUIRE(cand.target_marginals.size() == 2);

  const Distribution mu0 = Distribution::point_mass(cand.joint.space(), 0);
  const WeakCopulaVerification v =
      verify_weak_copula(cand.joint, cand.target_marginals, mu0, {0.25, 1.0}, 2);
  CHECK(v.pass);
  CHECK(v.classification == WeakCopulaClass::weak_only);
  CHECK(v.max_marginal_mismatch <= 1e-9);
  REQUIRE(v.weak.size() == 2);
  REQUIRE(v.strong.size() == 2);
  CHECK(v.weak[0].verdict == WeakVerdict::weak_evidence);
  CHECK(v.strong[0].verdict == StrongVerdict::fails);
}

TEST_CASE("tensor couplings verify as also strong", "[weak_copula]") {
  const GeneratorFunction m1 = absorbing_marginal("X1", 0.7);
  const GeneratorFunction m2 = absorbing_marginal("X2", 0.5);
  const GeneratorFunction joint = tensor_sum(m1, m2);
  const Distribution mu0 = Distribution::point_mass(joint.space(), 0);
  const WeakCopulaVerification v = verify_weak_copula(joint, {m1, m2}, mu0, {0.5, 1.0}, 2);
  CHECK(v.pass);
  CHECK(v.classification == WeakCopulaClass::also_strong);
}

TEST_CASE("weak verification fails on wrong targets with the correction-sized mismatch",
          "[weak_copula]") {
  const double a = 0.5, b = 0.3, c = 0.2;
  const GeneratorFunction joint =
      GeneratorFunction::family("example_3_2_joint", {{"a", a}, {"b", b}, {"c", c}});
  const Distribution mu0 = Distribution::point_mass(joint.space(), 0);
  const WeakCopulaVerification v = verify_weak_copula(
      joint, {absorbing_marginal("X1", a + c), absorbing_marginal("X2", b + c)}, mu0, {1.0},
      2);
  CHECK_FALSE(v.pass);
  CHECK(v.classification == WeakCopulaClass::failed);
  const double expected = std::max(oracles::alpha_correction(a, b, c, 1.0),
                                   oracles::beta_correction(a, b, c, 1.0));
  CHECK(v.max_marginal_mismatch == Catch::Approx(expected).margin(1e-9));
}

TEST_CASE("weak verification fails when a coordinate is falsified", "[weak_copula]") {
  const GeneratorFunction joint = GeneratorFunction::family(
      "example_3_3", {{"a", 0.4}, {"b", 0.3}, {"c", 0.2}, {"d", 0.25}, {"e", 0.15},
                      {"f", 0.1}, {"g", 0.35}});
  const Distribution mu0 = Distribution::point_mass(joint.space(), 0);
  const WeakCopulaVerification v = verify_weak_copula(
      joint, {absorbing_marginal("X1", 0.6), absorbing_marginal("X2", 0.5)}, mu0, {1.0}, 2);
  CHECK_FALSE(v.pass);
  CHECK(v.classification == WeakCopulaClass::failed);
}

TEST_CASE("unknown weak-candidate families are rejected", "[weak_copula][errors]") {
  CHECK_THROWS_AS(build_weak_copula_candidate("no_such_family", {{"a", 1.0}}),
                  std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Time-dependent marginals
// ---------------------------------------------------------------------------

TEST_CASE("piecewise marginals produce a piecewise coupling aligned on the probes",
          "[build][time]") {
  Matrix early = absorbing_matrix(0.7);
  Matrix late = absorbing_matrix(0.4);
  const GeneratorFunction m1 =
      GeneratorFunction::piecewise(binary_space("X1"), {0.0, 1.0}, {early, late});
  const GeneratorFunction m2 = absorbing_marginal("X2", 0.5);

  CopulaProblem p = two_marginal_problem(m1, m2, CopulaObjective::maximize_common_jumps);
  p.probe_times = {0.0, 1.0};
  const CopulaSolution sol = build_strong_copula(p);

  CHECK(sol.status == SolverStatus::optimal);
  CHECK(sol.generator.kind() == GeneratorFunction::Kind::piecewise);
  REQUIRE(sol.objective_values.size() == 2);
  CHECK(sol.objective_values[0] == Catch::Approx(0.5).margin(1e-9));
  CHECK(sol.objective_values[1] == Catch::Approx(0.4).margin(1e-9));

  CHECK(sol.generator.at(0.5).entries(0, 3) == Catch::Approx(0.5).margin(1e-9));
  CHECK(sol.generator.at(1.0).entries(0, 3) == Catch::Approx(0.4).margin(1e-9));
  CHECK(sol.generator.at(2.5).entries(0, 3) == Catch::Approx(0.4).margin(1e-9));

  const StrongCopulaVerification v =
      verify_strong_copula(sol.generator, {m1, m2}, {0.0, 0.5, 1.0, 2.0});
  CHECK(v.pass);
}

TEST_CASE("smoothly time-dependent marginals are matched exactly at the probes",
          "[build][time]") {
  const GeneratorFunction m1 = GeneratorFunction::family(
      "example_3_2_marginal_1", {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}});
  const GeneratorFunction m2 = absorbing_marginal("X2", 0.5);

  CopulaProblem p = two_marginal_problem(m1, m2, CopulaObjective::maximize_common_jumps);
  p.probe_times = {0.0, 0.5};
  const CopulaSolution sol = build_strong_copula(p);
  CHECK(sol.status == SolverStatus::optimal);

  const StrongCopulaVerification v =
      verify_strong_copula(sol.generator, {m1, m2}, {0.0, 0.5});
  CHECK(v.pass);

  CopulaProblem no_probes = two_marginal_problem(m1, m2, CopulaObjective::independent);
  CHECK_THROWS_AS(build_strong_copula(no_probes), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Problem validation and larger products
// ---------------------------------------------------------------------------

TEST_CASE("construction validates the problem statement", "[build][errors]") {
  CopulaProblem one;
  one.marginals.push_back(absorbing_marginal("X1", 0.7));
  CHECK_THROWS_AS(build_strong_copula(one), std::invalid_argument);

  CHECK_THROWS_AS(
      build_strong_copula(two_marginal_problem(absorbing_marginal("X1", 0.7),
                                               absorbing_marginal("X1", 0.5),
                                               CopulaObjective::independent)),
      std::invalid_argument);

  CopulaProblem multi = two_marginal_problem(
      GeneratorFunction::family("example_3_1", {{"a", 0.5}, {"b", 0.3}, {"c", 0.2}}),
      absorbing_marginal("X3", 0.5), CopulaObjective::independent);
  CHECK_THROWS_AS(build_strong_copula(multi), std::invalid_argument);

  CopulaProblem bad_probe = two_marginal_problem(absorbing_marginal("X1", 0.7),
                                                 absorbing_marginal("X2", 0.5),
                                                 CopulaObjective::independent);
  bad_probe.probe_times = {-1.0};
  CHECK_THROWS_AS(build_strong_copula(bad_probe), std::invalid_argument);

  Matrix invalid(2, 2);
  invalid(0, 1) = -0.5;  // negative rate
  CHECK_THROWS_AS(
      build_strong_copula(two_marginal_problem(
          GeneratorFunction::constant(binary_space("X1"), invalid),
          absorbing_marginal("X2", 0.5), CopulaObjective::independent)),
      std::invalid_argument);
}

TEST_CASE("three-factor couplings build and verify", "[build][multi]") {
  const GeneratorFunction m1 = absorbing_marginal("X1", 0.7);
  const GeneratorFunction m2 = absorbing_marginal("X2", 0.5);
  const GeneratorFunction m3 = absorbing_marginal("X3", 0.3);

  CopulaProblem indep;
  indep.marginals = {m1, m2, m3};
  indep.objective = CopulaObjective::independent;
  const CopulaSolution si = build_strong_copula(indep);
  const Distribution mu0 = Distribution::uniform(si.generator.space());
  for (std::size_t i : {0u, 1u, 2u})
    CHECK(check_strong(si.generator, mu0, {0.5}, i).verdict == StrongVerdict::strong);

  CopulaProblem maximal;
  maximal.marginals = {m1, m2, m3};
  maximal.objective = CopulaObjective::maximize_common_jumps;
  const CopulaSolution sm = build_strong_copula(maximal);
  CHECK(sm.status == SolverStatus::optimal);
  // A triple jump at 0.3 plus a pair jump at 0.2 are simultaneously feasible.
  CHECK(sm.objective_values[0] >= 0.5 - 1e-9);
  const StrongCopulaVerification v =
      verify_strong_copula(sm.generator, {m1, m2, m3}, {0.0, 1.0});
  CHECK(v.pass);
}

TEST_CASE("enum names render for reports", "[build]") {
  CHECK(std::string(to_string(CopulaObjective::maximize_common_jumps)) ==
        "maximize_common_jumps");
  CHECK(std::string(to_string(SolverStatus::feasible_fallback)) == "feasible_fallback");
  CHECK(std::string(to_string(WeakCopulaClass::also_strong)) == "also_strong");
}
