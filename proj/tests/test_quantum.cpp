#include <cmath>
#include <numbers>

#include <doctest.h>

#include "gravbell/quantum.hpp"
#include "test_support.hpp"

using namespace gravbell;
using testsup::random_density;
using testsup::random_product_state;

TEST_CASE("singlet ket") {
  const Ket psi = singlet();
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(psi.dim() == 4);
  CHECK(psi.amplitude(0) == Complex{0.0, 0.0});
  CHECK(psi.amplitude(1).real() == doctest::Approx(s).epsilon(1e-15));
  CHECK(psi.amplitude(2).real() == doctest::Approx(-s).epsilon(1e-15));
  CHECK(psi.amplitude(3) == Complex{0.0, 0.0});
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fidelity(DensityMatrix::pure(psi), psi) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ket validation") {
  CHECK_THROWS_AS(Ket::from_amplitudes({{1.0, 0.0}, {1.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Ket::from_amplitudes({{1.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}}),
                  std::invalid_argument);
}

TEST_CASE("tensor") {
  const DensityMatrix zero = DensityMatrix::pure(basis_ket(2, 0));
  const DensityMatrix one = DensityMatrix::pure(basis_ket(2, 1));

  SUBCASE("basis product |0><0| x |1><1| = |01><01|") {
    const DensityMatrix t = tensor(zero, one);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        CHECK(t.entry(r, c).real() ==
              doctest::Approx(r == 1 && c == 1 ? 1.0 : 0.0).epsilon(1e-15));
  }
  SUBCASE("maximally mixed halves combine to I/4") {
    const DensityMatrix t =
        tensor(DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(2));
    CHECK(t.matrix().max_abs_diff(DensityMatrix::maximally_mixed(4).matrix()) < 1e-15);
  }
  SUBCASE("trace multiplicativity on random inputs") {
    RandomSource rng(11);
    for (int k = 0; k < 50; ++k) {
      const DensityMatrix t = tensor(random_density(2, rng), random_density(2, rng));
      CHECK(std::abs(t.matrix().trace().real() - 1.0) < 1e-12);
    }
  }
  SUBCASE("dimension mismatch rejected") {
    CHECK_THROWS_AS(tensor(tensor(zero, one), zero), std::invalid_argument);
  }
}

TEST_CASE("partial trace") {
  SUBCASE("singlet reduces to I/2") {
    const DensityMatrix reduced = partial_trace(DensityMatrix::pure(singlet()), 1);
    CHECK(reduced.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) <
          1e-12);
  }
  SUBCASE("product factorization") {
    RandomSource rng(12);
    for (int k = 0; k < 100; ++k) {
      const DensityMatrix a = random_density(2, rng);
      const DensityMatrix b = random_density(2, rng);
      const DensityMatrix t = tensor(a, b);
      CHECK(partial_trace(t, 1).matrix().max_abs_diff(a.matrix()) < 1e-10);
      CHECK(partial_trace(t, 2).matrix().max_abs_diff(b.matrix()) < 1e-10);
    }
  }
  SUBCASE("basis case |01><01| keeps |1><1| on subsystem 2") {
    const DensityMatrix t = tensor(DensityMatrix::pure(basis_ket(2, 0)),
                                   DensityMatrix::pure(basis_ket(2, 1)));
    const DensityMatrix kept = partial_trace(t, 2);
    CHECK(kept.entry(1, 1).real() == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("invalid subsystem index rejected") {
    CHECK_THROWS_AS(partial_trace(DensityMatrix::pure(singlet()), 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(DensityMatrix::maximally_mixed(2), 1),
                    std::invalid_argument);
  }
}

TEST_CASE("apply_channel") {
  SUBCASE("identity is a no-op") {
    RandomSource rng(13);
    const DensityMatrix rho = random_density(4, rng);
    CHECK(apply_channel(rho, QuantumChannel::identity(4))
              .matrix()
              .max_abs_diff(rho.matrix()) < 1e-14);
  }
  SUBCASE("full depolarizing sends |0><0| to I/2") {
    const DensityMatrix out = apply_channel(DensityMatrix::pure(basis_ket(2, 0)),
                                            QuantumChannel::depolarizing(1.0));
    CHECK(out.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-12);
  }
  SUBCASE("dephasing scales off-diagonals, Kraus-sum oracle agrees") {
    const double s = 1.0 / std::sqrt(2.0);
    const DensityMatrix plus = DensityMatrix::pure(Ket::from_amplitudes({{s, 0}, {s, 0}}));
    const double keep = std::exp(-0.37);
    const QuantumChannel ch = QuantumChannel::dephasing(keep);
    const DensityMatrix out = apply_channel(plus, ch);
    CHECK(out.entry(0, 1).real() == doctest::Approx(0.5 * keep).epsilon(1e-12));
    CHECK(out.entry(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));

    std::vector<std::vector<std::vector<Complex>>> kraus;
    for (const auto& k : ch.kraus())
      kraus.push_back({{k.at(0, 0), k.at(0, 1)}, {k.at(1, 0), k.at(1, 1)}});
    const auto expected = testsup::kraus_sum_oracle(
        kraus, {{plus.entry(0, 0), plus.entry(0, 1)}, {plus.entry(1, 0), plus.entry(1, 1)}});
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        CHECK(std::abs(out.entry(r, c) - expected[static_cast<std::size_t>(r)]
                                                 [static_cast<std::size_t>(c)]) < 1e-14);
  }
  SUBCASE("dimension mismatch rejected") {
    CHECK_THROWS_AS(
        apply_channel(DensityMatrix::maximally_mixed(4), QuantumChannel::identity(2)),
        std::invalid_argument);
  }
  SUBCASE("incomplete Kraus set rejected") {
    CMatrix half = CMatrix::identity(2);
    half *= Complex{0.5, 0.0};
    CHECK_THROWS_AS(QuantumChannel::from_kraus({half}), std::invalid_argument);
  }
  SUBCASE("trace preserved for random channels and states") {
    RandomSource rng(14);
    for (int k = 0; k < 50; ++k) {
      const DensityMatrix rho = random_density(4, rng);
      const QuantumChannel ch = QuantumChannel::on_qubit(
          QuantumChannel::depolarizing(rng.uniform01()), rng.uniform01() < 0.5 ? 1 : 2);
      CHECK(std::abs(apply_channel(rho, ch).matrix().trace().real() - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("fidelity") {
  const DensityMatrix rho_singlet = DensityMatrix::pure(singlet());
  CHECK(fidelity(rho_singlet, singlet()) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(fidelity(DensityMatrix::maximally_mixed(4), singlet()) ==
        doctest::Approx(0.25).epsilon(1e-13));

  // |<singlet|01>|^2 = 1/2
  const DensityMatrix rho01 = DensityMatrix::pure(basis_ket(4, 1));
  CHECK(fidelity(rho01, singlet()) == doctest::Approx(0.5).epsilon(1e-13));

  CHECK_THROWS_AS(fidelity(DensityMatrix::maximally_mixed(2), singlet()),
                  std::invalid_argument);

  SUBCASE("symmetric and bounded for pure arguments") {
    RandomSource rng(15);
    for (int k = 0; k < 100; ++k) {
      // two random pure states via unitaries on |0>
      const CMatrix u = testsup::random_single_qubit_unitary(rng);
      const CMatrix v = testsup::random_single_qubit_unitary(rng);
      const Ket ka = Ket::from_amplitudes({u.at(0, 0), u.at(1, 0)});
      const Ket kb = Ket::from_amplitudes({v.at(0, 0), v.at(1, 0)});
      const double f_ab = fidelity(DensityMatrix::pure(ka), kb);
      const double f_ba = fidelity(DensityMatrix::pure(kb), ka);
      CHECK(f_ab == doctest::Approx(f_ba).epsilon(1e-11));
      CHECK(f_ab >= 0.0);
      CHECK(f_ab <= 1.0);
    }
  }
}

TEST_CASE("negativity") {
  CHECK(negativity(DensityMatrix::pure(singlet())) == doctest::Approx(0.5).epsilon(1e-12));

  SUBCASE("separable states have zero negativity") {
    RandomSource rng(16);
    for (int k = 0; k < 100; ++k)
      CHECK(negativity(random_product_state(rng)) == 0.0);
  }
  SUBCASE("Werner boundary at v = 1/3") {
    CHECK(negativity(testsup::werner(1.0 / 3.0)) == doctest::Approx(0.0).epsilon(1e-12));
    // (3v - 1)/4 above the boundary
    for (const double v : {0.4, 0.6, 0.9, 1.0})
      CHECK(negativity(testsup::werner(v)) ==
            doctest::Approx((3.0 * v - 1.0) / 4.0).epsilon(1e-10));
    CHECK(negativity(testsup::werner(0.2)) == 0.0);
  }
  SUBCASE("invariant under local unitaries") {
    RandomSource rng(17);
    for (int k = 0; k < 60; ++k) {
      const DensityMatrix rho = random_density(4, rng);
      const CMatrix u = kron(testsup::random_single_qubit_unitary(rng),
                             testsup::random_single_qubit_unitary(rng));
      const DensityMatrix rotated =
          apply_channel(rho, QuantumChannel::unitary(u));
      CHECK(negativity(rotated) == doctest::Approx(negativity(rho)).epsilon(1e-9));
    }
  }
  SUBCASE("single-qubit input rejected") {
    CHECK_THROWS_AS(negativity(DensityMatrix::maximally_mixed(2)), std::invalid_argument);
  }
}

TEST_CASE("expectation") {
  const Observable sz = Observable::dichotomic(pauli_z());
  CHECK(expectation(DensityMatrix::maximally_mixed(2), sz) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK(expectation(DensityMatrix::pure(basis_ket(2, 0)), sz) ==
        doctest::Approx(1.0).epsilon(1e-15));

  const Observable szsz = Observable::tensor(sz, sz);
  CHECK(expectation(DensityMatrix::pure(singlet()), szsz) ==
        doctest::Approx(-1.0).epsilon(1e-13));

  CHECK_THROWS_AS(expectation(DensityMatrix::maximally_mixed(4), sz),
                  std::invalid_argument);
  CHECK_THROWS_AS(Observable::dichotomic(pauli_z() + pauli_z()), std::invalid_argument);
}

TEST_CASE("sample_outcomes") {
  SUBCASE("degenerate distribution") {
    RandomSource rng(18);
    const std::vector<double> probs{1.0, 0.0};
    for (int k = 0; k < 1000; ++k) CHECK(sample_outcomes(probs, rng) == 0);
  }
  SUBCASE("fair coin over a million draws") {
    RandomSource rng(19);
    const std::vector<double> probs{0.5, 0.5};
    long zeros = 0;
    for (int k = 0; k < 1'000'000; ++k)
      if (sample_outcomes(probs, rng) == 0) ++zeros;
    const double freq = static_cast<double>(zeros) / 1e6;
    CHECK(freq > 0.497);
    CHECK(freq < 0.503);
  }
  SUBCASE("same seed, same sequence") {
    const std::vector<double> probs{0.3, 0.3, 0.4};
    RandomSource a(20), b(20);
    for (int k = 0; k < 200; ++k) CHECK(sample_outcomes(probs, a) == sample_outcomes(probs, b));
  }
  SUBCASE("non-normalized input rejected") {
    RandomSource rng(21);
    const std::vector<double> probs{0.5, 0.4};
    CHECK_THROWS_AS(sample_outcomes(probs, rng), std::invalid_argument);
    const std::vector<double> neg{1.5, -0.5};
    CHECK_THROWS_AS(sample_outcomes(neg, rng), std::invalid_argument);
  }
}

TEST_CASE("density matrix invariants hold through the kernel ops") {
  RandomSource rng(22);
  for (int k = 0; k < 250; ++k) {
    const DensityMatrix rho = random_density(4, rng);
    // from_matrix re-validates everything
    CHECK_NOTHROW(DensityMatrix::from_matrix(partial_trace(rho, 1).matrix()));
    CHECK_NOTHROW(DensityMatrix::from_matrix(
        apply_channel(rho, QuantumChannel::on_qubit(
                               QuantumChannel::depolarizing(rng.uniform01()), 1))
            .matrix()));
    const DensityMatrix a = random_density(2, rng);
    const DensityMatrix b = random_density(2, rng);
    CHECK_NOTHROW(DensityMatrix::from_matrix(tensor(a, b).matrix()));
  }
}

TEST_CASE("hermitian eigenvalues match trace-moment oracle") {
  RandomSource rng(23);
  for (int k = 0; k < 200; ++k) {
    const int dim = k % 2 == 0 ? 4 : 2;
    CMatrix g = testsup::random_matrix(dim, rng);
    CMatrix h = g;
    h += g.adjoint();  // Hermitian
    const auto eig = hermitian_eigenvalues(h);
    for (int p = 1; p <= 4; ++p) {
      double moment = 0.0;
      for (const double ev : eig) moment += std::pow(ev, p);
      CHECK(moment ==
            doctest::Approx(testsup::trace_power_oracle(h, p).real()).epsilon(1e-9));
    }
  }

  SUBCASE("block diagonal 4x4 agrees with the 2x2 closed form") {
    RandomSource rng2(24);
    CMatrix g = testsup::random_matrix(2, rng2);
    CMatrix h2 = g;
    h2 += g.adjoint();
    CMatrix h4(4);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        h4.at(r, c) = h2.at(r, c);
        h4.at(2 + r, 2 + c) = h2.at(r, c);
      }
    const auto e2 = hermitian_eigenvalues(h2);
    const auto e4 = hermitian_eigenvalues(h4);
    CHECK(e4[0] == doctest::Approx(e2[0]).epsilon(1e-12));
    CHECK(e4[1] == doctest::Approx(e2[0]).epsilon(1e-12));
    CHECK(e4[2] == doctest::Approx(e2[1]).epsilon(1e-12));
    CHECK(e4[3] == doctest::Approx(e2[1]).epsilon(1e-12));
  }
}
