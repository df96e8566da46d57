#include <catch_amalgamated.hpp>

#include "qmeter/qmeter.hpp"

using namespace qmeter;

namespace {

constexpr Real kLn2 = 0.6931471805599453;
// Amplitude damping (gamma = 1/2) applied to the maximally mixed qubit.
constexpr Real kAdMeanH = 0.4773856262211096;
constexpr Real kAdEr = 0.2157615543388357;

}  // namespace

TEST_CASE("measurement construction enforces completeness", "[measurement]") {
  Rng rng(31);
  REQUIRE_NOTHROW(rng.measurement(3, 4));

  std::vector<Matrix> broken = {0.9 * identity(2)};
  REQUIRE_THROWS_AS(KrausMeasurement(broken), precondition_error);

  // negligible operators are dropped together with their labels
  std::vector<Matrix> padded = fixtures::basis_measurement(2).kraus_list();
  padded.push_back(1e-14 * identity(2));
  const KrausMeasurement m(padded, {"a", "b", "ghost"});
  REQUIRE(m.outcomes() == 2);
  REQUIRE(m.label(1) == "b");
}

TEST_CASE("outcome distribution of a basis measurement", "[measurement]") {
  Matrix d3 = Matrix::Zero(3, 3);
  d3(0, 0) = 0.5;
  d3(1, 1) = 0.3;
  d3(2, 2) = 0.2;
  const RealVector pi =
      outcome_distribution(fixtures::basis_measurement(3), DensityOperator(d3));
  REQUIRE(pi(0) == Catch::Approx(0.5).margin(1e-14));
  REQUIRE(pi(1) == Catch::Approx(0.3).margin(1e-14));
  REQUIRE(pi(2) == Catch::Approx(0.2).margin(1e-14));

  Rng rng(32);
  const RealVector random_pi =
      outcome_distribution(rng.measurement(4, 5), rng.ginibre_state(4));
  REQUIRE(random_pi.sum() == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(random_pi.minCoeff() >= 0.0);
}

TEST_CASE("posteriori states of a basis measurement are basis states", "[measurement]") {
  const PosterioriEnsemble e =
      posteriori(fixtures::basis_measurement(2), fixtures::plus_state());
  REQUIRE(e.outcomes() == 2);
  for (int i = 0; i < 2; ++i) {
    REQUIRE(e.defined(i));
    REQUIRE(e.probabilities(i) == Catch::Approx(0.5).margin(1e-14));
    REQUIRE(max_abs(e.states[i]->matrix() -
                    fixtures::computational_state(2, i).matrix()) < 1e-13);
  }
}

TEST_CASE("zero-probability outcomes stay undefined but indexed", "[measurement]") {
  const PosterioriEnsemble e =
      posteriori(fixtures::basis_measurement(2), fixtures::computational_state(2, 0));
  REQUIRE(e.defined(0));
  REQUIRE(!e.defined(1));
  REQUIRE(e.probabilities(1) == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("amplitude damping closed-form values", "[measurement]") {
  const KrausMeasurement m = fixtures::amplitude_damping(0.5);
  const DensityOperator rho = fixtures::maximally_mixed(2);
  const RealVector pi = outcome_distribution(m, rho);
  REQUIRE(pi(0) == Catch::Approx(0.75).margin(1e-14));
  REQUIRE(pi(1) == Catch::Approx(0.25).margin(1e-14));
  REQUIRE(mean_posteriori_entropy(m, rho) == Catch::Approx(kAdMeanH).margin(1e-12));
  REQUIRE(entropy_reduction_direct(m, rho) == Catch::Approx(kAdEr).margin(1e-12));
}

TEST_CASE("basis measurement on the maximally mixed state removes ln d", "[measurement]") {
  for (int d : {2, 3, 5}) {
    const Real er = entropy_reduction_direct(fixtures::basis_measurement(d),
                                             fixtures::maximally_mixed(d));
    REQUIRE(er == Catch::Approx(std::log(static_cast<Real>(d))).margin(1e-12));
  }
  REQUIRE(entropy_reduction_direct(fixtures::basis_measurement(2),
                                   fixtures::maximally_mixed(2)) ==
          Catch::Approx(kLn2).margin(1e-13));
}

TEST_CASE("unitary mixtures never reduce entropy", "[measurement]") {
  Rng rng(33);
  for (int t = 0; t < 10; ++t) {
    const int d = rng.uniform_int(2, 5);
    const KrausMeasurement m = rng.unitary_mixture(d, rng.uniform_int(1, 4));
    const DensityOperator rho = rng.ginibre_state(d);
    REQUIRE(std::abs(entropy_reduction_direct(m, rho)) < 1e-12);
  }
}

TEST_CASE("composition multiplies outcomes in the right order", "[measurement]") {
  const KrausMeasurement b = fixtures::basis_measurement(2);
  // Second stage: keep or flip, each with probability 1/2. No product of
  // operators vanishes, so all four pair outcomes survive.
  std::vector<Matrix> coin = {Matrix::Zero(2, 2), Matrix::Zero(2, 2)};
  coin[0](0, 0) = coin[0](1, 1) = 1.0 / std::sqrt(2.0);
  coin[1](0, 1) = coin[1](1, 0) = 1.0 / std::sqrt(2.0);
  const KrausMeasurement f{coin};
  const KrausMeasurement c = compose(f, b);
  REQUIRE(c.outcomes() == 4);
  REQUIRE(c.label(0) == "0×0");
  REQUIRE(c.label(1) == "0×1");
  REQUIRE(c.label(2) == "1×0");
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 0.25;
  diag(1, 1) = 0.75;
  const DensityOperator rho{diag};
  const RealVector pi = outcome_distribution(c, rho);
  REQUIRE(pi(0) == Catch::Approx(0.125).margin(1e-14));
  REQUIRE(pi(1) == Catch::Approx(0.125).margin(1e-14));
  REQUIRE(pi(2) == Catch::Approx(0.375).margin(1e-14));
  REQUIRE(pi(3) == Catch::Approx(0.375).margin(1e-14));
  // Outcome "0×1" means: projected onto |0>, then flipped. Were the factors
  // swapped the posterior would be |0><0| instead.
  const PosterioriEnsemble e = posteriori(c, rho);
  REQUIRE(e.defined(1));
  REQUIRE(std::abs(e.states[1]->matrix()(1, 1).real() - 1.0) < 1e-12);

  // Composing the basis readout with itself annihilates the cross terms and
  // the surviving outcomes keep their pair labels.
  const KrausMeasurement bb = compose(b, b);
  REQUIRE(bb.outcomes() == 2);
  REQUIRE(bb.label(0) == "0×0");
  REQUIRE(bb.label(1) == "1×1");
}

TEST_CASE("composing with a unitary mixture changes nothing", "[measurement]") {
  Rng rng(34);
  const KrausMeasurement m = rng.measurement(3, 2);
  const KrausMeasurement noise = rng.unitary_mixture(3, 2);
  const DensityOperator rho = rng.ginibre_state(3);
  // noise after m: each posteriori state is only rotated, entropies survive
  REQUIRE(entropy_reduction_direct(compose(noise, m), rho) ==
          Catch::Approx(entropy_reduction_direct(m, rho)).margin(1e-11));
}

TEST_CASE("tensor measurements factor on product states", "[measurement]") {
  Rng rng(35);
  const KrausMeasurement m1 = rng.measurement(2, 2);
  const KrausMeasurement m2 = rng.measurement(3, 2);
  const DensityOperator r1 = rng.ginibre_state(2);
  const DensityOperator r2 = rng.ginibre_state(3);
  const DensityOperator joint(tensor(r1.matrix(), r2.matrix()));
  const KrausMeasurement prod = tensor_measurement(m1, m2);
  REQUIRE(prod.outcomes() == 4);
  REQUIRE(entropy_reduction_direct(prod, joint) ==
          Catch::Approx(entropy_reduction_direct(m1, r1) +
                        entropy_reduction_direct(m2, r2)).margin(1e-11));
}

TEST_CASE("instruments wrap measurements outcome by outcome", "[measurement]") {
  Rng rng(36);
  const KrausMeasurement m = rng.measurement(3, 3);
  const Instrument inst(m);
  REQUIRE(inst.outcomes() == 3);
  const DensityOperator rho = rng.ginibre_state(3);
  for (int i = 0; i < 3; ++i) {
    const Matrix expected = m.kraus(i) * rho.matrix() * m.kraus(i).adjoint();
    REQUIRE(max_abs(inst.apply_operation(i, rho.matrix()) - expected) < 1e-13);
  }
  REQUIRE(entropy_reduction_direct(inst, rho) ==
          Catch::Approx(entropy_reduction_direct(m, rho)).margin(1e-13));
}

TEST_CASE("instrument completeness is joint across operations", "[measurement]") {
  // two operations, each trace-decreasing, jointly complete
  std::vector<std::vector<Matrix>> ops(2);
  ops[0] = {fixtures::amplitude_damping(0.3).kraus(0)};
  ops[1] = {fixtures::amplitude_damping(0.3).kraus(1)};
  REQUIRE_NOTHROW(Instrument(std::move(ops)));

  std::vector<std::vector<Matrix>> bad(1);
  bad[0] = {0.5 * identity(2)};
  REQUIRE_THROWS_AS(Instrument(std::move(bad)), precondition_error);
}

TEST_CASE("dimension mismatches are rejected", "[measurement]") {
  Rng rng(37);
  const KrausMeasurement m = rng.measurement(3, 2);
  REQUIRE_THROWS_AS(outcome_distribution(m, rng.ginibre_state(2)), shape_error);
  REQUIRE_THROWS_AS(entropy_reduction_direct(m, rng.ginibre_state(4)), shape_error);
}
