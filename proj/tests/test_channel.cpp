#include <catch_amalgamated.hpp>

#include "qmeter/qmeter.hpp"

using namespace qmeter;

TEST_CASE("channels preserve trace and positivity", "[channel]") {
  Rng rng(41);
  const QuantumChannel phi = rng.channel(3, 4, 2);
  const DensityOperator rho = rng.ginibre_state(3);
  const DensityOperator out = qmeter::apply(phi, rho);
  REQUIRE(out.dim() == 4);
  REQUIRE(out.matrix().trace().real() == Catch::Approx(1.0).margin(1e-12));

  REQUIRE_THROWS_AS(QuantumChannel({0.5 * identity(2)}), precondition_error);
  REQUIRE_THROWS_AS(qmeter::apply(phi, identity(2)), shape_error);
}

TEST_CASE("stinespring dilation reproduces the channel", "[channel]") {
  Rng rng(42);
  const QuantumChannel phi = rng.channel(3, 2, 3);
  const Matrix v = stinespring_isometry(phi);
  REQUIRE(v.rows() == 2 * 3);
  REQUIRE(max_abs(v.adjoint() * v - identity(3)) < 1e-12);

  const DensityOperator rho = rng.ginibre_state(3);
  const Matrix dilated = v * rho.matrix() * v.adjoint();
  // rows are indexed output-major, so tracing the environment keeps the output
  REQUIRE(max_abs(partial_trace(dilated, 2, 3, Keep::first) -
                  qmeter::apply(phi, rho.matrix())) < 1e-12);
  REQUIRE(max_abs(partial_trace(dilated, 2, 3, Keep::second) -
                  qmeter::apply(complementary(phi), rho.matrix())) < 1e-12);
}

TEST_CASE("complementary channel is complete and isospectral on pure inputs", "[channel]") {
  Rng rng(43);
  const QuantumChannel phi = rng.channel(4, 3, 3);
  const QuantumChannel comp = complementary(phi);  // constructor re-validates
  REQUIRE(comp.d_in() == 4);
  REQUIRE(comp.d_out() == phi.kraus_count());

  // V psi is pure on out (x) env, so the two marginals share a spectrum
  const DensityOperator psi = rng.pure_state(4);
  const PositiveOperator a(qmeter::apply(phi, psi.matrix()));
  const PositiveOperator b(qmeter::apply(comp, psi.matrix()));
  const int r = std::min(a.dim(), b.dim());
  for (int j = 0; j < r; ++j)
    REQUIRE(a.spectrum()(j) == Catch::Approx(b.spectrum()(j)).margin(1e-10));
}

TEST_CASE("the q-c channel carries the outcome statistics", "[channel]") {
  Rng rng(44);
  const KrausMeasurement m = rng.measurement(3, 4);
  const QuantumChannel pi_channel = qc_channel(Instrument(m));
  const DensityOperator rho = rng.ginibre_state(3);
  const Matrix out = qmeter::apply(pi_channel, rho.matrix());
  const RealVector pi = outcome_distribution(m, rho);
  REQUIRE(out.rows() == 4);
  for (int i = 0; i < 4; ++i) {
    REQUIRE(out(i, i).real() == Catch::Approx(pi(i)).margin(1e-12));
    for (int j = 0; j < 4; ++j)
      if (i != j) REQUIRE(std::abs(out(i, j)) < 1e-12);
  }

  // complementary output: block diagonal with blocks V_i rho V_i'
  const Matrix comp_out = qmeter::apply(complementary(pi_channel), rho.matrix());
  Matrix expected = Matrix::Zero(comp_out.rows(), comp_out.cols());
  for (int i = 0; i < 4; ++i) {
    const Matrix block = m.kraus(i) * rho.matrix() * m.kraus(i).adjoint();
    expected.block(i * 3, i * 3, 3, 3) = block;
  }
  REQUIRE(max_abs(comp_out - expected) < 1e-12);
}

TEST_CASE("hybrid channels apply operationwise", "[channel]") {
  Rng rng(45);
  const Instrument inst = rng.instrument(3, 2, 2, true);
  const HybridChannel lambda(inst);
  const DensityOperator rho = rng.ginibre_state(3);
  const HybridState out = apply_hybrid(lambda, rho);
  REQUIRE(out.outcomes() == inst.outcomes());
  Real total = 0.0;
  for (int i = 0; i < out.outcomes(); ++i) {
    REQUIRE(max_abs(out.component(i) - inst.apply_operation(i, rho.matrix())) < 1e-13);
    total += out.component_trace(i);
  }
  REQUIRE(total == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("choi matrices: trace, positivity, identity channel", "[channel]") {
  Rng rng(46);
  const QuantumChannel phi = rng.channel(3, 3, 2);
  const PositiveOperator j(choi(phi));  // constructor asserts positivity
  REQUIRE(j.trace() == Catch::Approx(3.0).margin(1e-12));

  const Matrix jid = choi(QuantumChannel({identity(2)}));
  Matrix omega = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) omega(i * 2 + i, k * 2 + k) = 1.0;
  REQUIRE(max_abs(jid - omega) < 1e-14);
}

TEST_CASE("apply_first acts only on the first factor", "[channel]") {
  Rng rng(47);
  const QuantumChannel phi = rng.channel(2, 2, 2);
  const DensityOperator r1 = rng.ginibre_state(2);
  const DensityOperator r2 = rng.ginibre_state(3);
  const Matrix joint = tensor(r1.matrix(), r2.matrix());
  const Matrix out = apply_first(phi, joint, 3);
  REQUIRE(max_abs(out - tensor(qmeter::apply(phi, r1.matrix()), r2.matrix())) < 1e-12);
}

TEST_CASE("complementary q-c entropy splits into shannon plus mean entropy", "[channel]") {
  Rng rng(48);
  for (int t = 0; t < 6; ++t) {
    const int d = rng.uniform_int(2, 4);
    const KrausMeasurement m = rng.measurement(d, rng.uniform_int(1, 4));
    const DensityOperator rho = rng.ginibre_state(d);
    const QuantumChannel pi_channel = qc_channel(Instrument(m));
    const Real lhs = von_neumann(
        PositiveOperator(qmeter::apply(complementary(pi_channel), rho.matrix())));
    const Real rhs =
        shannon(outcome_distribution(m, rho)) + mean_posteriori_entropy(m, rho);
    REQUIRE(lhs == Catch::Approx(rhs).margin(1e-9));
  }
}

TEST_CASE("dilation freedom leaves mutual information alone", "[channel]") {
  Rng rng(49);
  for (int t = 0; t < 6; ++t) {
    const int d_in = rng.uniform_int(2, 4);
    const int d_out = rng.uniform_int(2, 4);
    const int k_min = (d_in + d_out - 1) / d_out;
    const QuantumChannel phi = rng.channel(d_in, d_out, std::max(2, k_min));
    const DensityOperator rho = rng.ginibre_state(d_in);

    // complementary twice rebuilds the original Kraus list entry for entry
    const QuantumChannel twice = complementary(complementary(phi));
    for (int k = 0; k < phi.kraus_count(); ++k)
      REQUIRE(max_abs(twice.kraus(k) - phi.kraus(k)) == 0.0);

    // rotating the Kraus basis keeps the channel but reshuffles its dilation;
    // the complementary outputs differ by a unitary, so entropies agree
    const Matrix u = rng.haar_unitary(phi.kraus_count());
    std::vector<Matrix> mixed(phi.kraus_count(),
                              Matrix::Zero(phi.d_out(), phi.d_in()));
    for (int k = 0; k < phi.kraus_count(); ++k)
      for (int l = 0; l < phi.kraus_count(); ++l)
        mixed[k] += u(k, l) * phi.kraus(l);
    const QuantumChannel rotated{std::move(mixed)};
    REQUIRE(max_abs(qmeter::apply(rotated, rho.matrix()) -
                    qmeter::apply(phi, rho.matrix())) < 1e-12);
    REQUIRE(mutual_info_entropic(rho, rotated) ==
            Catch::Approx(mutual_info_entropic(rho, phi)).margin(1e-9));
  }
}
