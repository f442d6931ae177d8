#pragma once

// Deterministic generators and independent oracles shared by the test
// suites. Oracles here recompute expected values through plain raw-array
// arithmetic so they do not share a code path with the library.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "gravbell/bell.hpp"
#include "gravbell/cmatrix.hpp"
#include "gravbell/lhv.hpp"
#include "gravbell/quantum.hpp"
#include "gravbell/random.hpp"

namespace testsup {

using gravbell::CMatrix;
using gravbell::Complex;
using gravbell::DensityMatrix;
using gravbell::RandomSource;

inline double uniform_in(RandomSource& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.uniform01();
}

inline Complex random_complex(RandomSource& rng) {
  return {uniform_in(rng, -1.0, 1.0), uniform_in(rng, -1.0, 1.0)};
}

inline CMatrix random_matrix(int dim, RandomSource& rng) {
  CMatrix m(dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m.at(r, c) = random_complex(rng);
  return m;
}

/// G G^dag / tr(G G^dag): Hermitian, PSD, unit trace by construction.
inline DensityMatrix random_density(int dim, RandomSource& rng) {
  const CMatrix g = random_matrix(dim, rng);
  CMatrix rho = g * g.adjoint();
  rho *= Complex{1.0 / rho.trace().real(), 0.0};
  return DensityMatrix::from_matrix(std::move(rho));
}

inline DensityMatrix random_product_state(RandomSource& rng) {
  return tensor(random_density(2, rng), random_density(2, rng));
}

/// Standard (theta, phi, lambda) parametrization of SU(2) up to phase.
inline CMatrix random_single_qubit_unitary(RandomSource& rng) {
  const double theta = uniform_in(rng, 0.0, 3.141592653589793);
  const double phi = uniform_in(rng, 0.0, 6.283185307179586);
  const double lam = uniform_in(rng, 0.0, 6.283185307179586);
  const Complex i{0.0, 1.0};
  CMatrix u(2);
  u.at(0, 0) = std::cos(theta / 2.0);
  u.at(0, 1) = -std::exp(i * lam) * std::sin(theta / 2.0);
  u.at(1, 0) = std::exp(i * phi) * std::sin(theta / 2.0);
  u.at(1, 1) = std::exp(i * (phi + lam)) * std::cos(theta / 2.0);
  return u;
}

inline gravbell::lhv::Mixture random_mixture(RandomSource& rng) {
  gravbell::lhv::Mixture m;
  double sum = 0.0;
  for (double& w : m.weights) {
    w = -std::log(1.0 - rng.uniform01());
    sum += w;
  }
  for (double& w : m.weights) w /= sum;
  return m;
}

inline DensityMatrix werner(double v) {
  return gravbell::mix({{v, DensityMatrix::pure(gravbell::singlet())},
                        {1.0 - v, DensityMatrix::maximally_mixed(4)}});
}

// ---------------------------------------------------------------------
// Raw-array oracles (no CMatrix arithmetic).
// ---------------------------------------------------------------------

using Raw4 = std::array<std::array<Complex, 4>, 4>;

inline Raw4 to_raw(const CMatrix& m) {
  Raw4 out{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out[r][c] = m.dim() == 4 ? m.at(r, c) : Complex{};
  return out;
}

/// sum_i K_i rho K_i^dag by explicit index loops.
inline std::vector<std::vector<Complex>> kraus_sum_oracle(
    const std::vector<std::vector<std::vector<Complex>>>& kraus,
    const std::vector<std::vector<Complex>>& rho) {
  const std::size_t n = rho.size();
  std::vector<std::vector<Complex>> out(n, std::vector<Complex>(n));
  for (const auto& k : kraus)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            out[r][c] += k[r][i] * rho[i][j] * std::conj(k[c][j]);
  return out;
}

/// Tr(M^p) for the eigenvalue moment checks, raw loops.
inline Complex trace_power_oracle(const CMatrix& m, int p) {
  const int n = m.dim();
  std::vector<std::vector<Complex>> acc(n, std::vector<Complex>(n));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) acc[r][c] = r == c ? Complex{1.0, 0.0} : Complex{};
  for (int step = 0; step < p; ++step) {
    std::vector<std::vector<Complex>> next(n, std::vector<Complex>(n));
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        for (int k = 0; k < n; ++k) next[r][c] += acc[r][k] * m.at(k, c);
    acc = std::move(next);
  }
  Complex tr{};
  for (int r = 0; r < n; ++r) tr += acc[r][r];
  return tr;
}

/// E(theta1, theta2) = Tr(rho (A x B)) via an explicitly built Kronecker
/// product over raw arrays.
inline double correlation_oracle(const DensityMatrix& rho, double theta1,
                                 double theta2) {
  const auto obs = [](double t) {
    std::array<std::array<Complex, 2>, 2> m{};
    m[0][0] = std::cos(t);
    m[0][1] = std::sin(t);
    m[1][0] = std::sin(t);
    m[1][1] = -std::cos(t);
    return m;
  };
  const auto a = obs(theta1);
  const auto b = obs(theta2);
  Complex ab[4][4];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) ab[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
  Complex tr{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) tr += rho.entry(r, c) * ab[c][r];
  return tr.real();
}

/// Four-correlation CHSH oracle.
inline double chsh_oracle(const DensityMatrix& rho, const gravbell::bell::SettingsQuad& q) {
  return correlation_oracle(rho, q.a.angle, q.b.angle) -
         correlation_oracle(rho, q.a.angle, q.b_prime.angle) +
         correlation_oracle(rho, q.a_prime.angle, q.b.angle) +
         correlation_oracle(rho, q.a_prime.angle, q.b_prime.angle);
}

/// Direct 4x4 evolution of the entangling drop in raw arrays: branch
/// phases on the product-plus state, uniform decay of the inter-branch
/// coherences, then the analytic corrective unitaries.
inline Raw4 bmv_evolution_oracle(double phi_ll, double phi_lr, double phi_rl,
                                 double phi_rr, double keep) {
  const Complex i{0.0, 1.0};
  const std::array<Complex, 4> psi{0.5 * std::exp(i * phi_ll), 0.5 * std::exp(i * phi_lr),
                                   0.5 * std::exp(i * phi_rl), 0.5 * std::exp(i * phi_rr)};
  Raw4 rho{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      rho[r][c] = psi[r] * std::conj(psi[c]) * (r == c ? 1.0 : keep);

  const double s = 1.0 / std::sqrt(2.0);
  std::array<std::array<Complex, 2>, 2> u1{{{1.0, 0.0}, {0.0, std::exp(-i * (phi_rl - phi_ll))}}};
  const Complex ph = std::exp(-i * (phi_lr - phi_ll));
  std::array<std::array<Complex, 2>, 2> u2{{{-s, s * ph}, {s, s * ph}}};

  Raw4 u{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) u[2 * a + c][2 * b + d] = u1[a][b] * u2[c][d];

  Raw4 tmp{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      for (int k = 0; k < 4; ++k) tmp[r][c] += u[r][k] * rho[k][c];
  Raw4 out{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      for (int k = 0; k < 4; ++k) out[r][c] += tmp[r][k] * std::conj(u[c][k]);
  return out;
}

/// <singlet| rho |singlet> over a raw matrix.
inline double singlet_fidelity_oracle(const Raw4& rho) {
  // |singlet> = (0, 1, -1, 0)/sqrt(2)
  const Complex v = 0.5 * (rho[1][1] - rho[1][2] - rho[2][1] + rho[2][2]);
  return v.real();
}

/// Closed-form singlet fidelity of the drop: F(dphi, keep) =
/// keep*(5/8 - 3/8 cos dphi) + (1 - keep)/4.
inline double bmv_fidelity_formula(double dphi, double keep) {
  return keep * (0.625 - 0.375 * std::cos(dphi)) + (1.0 - keep) * 0.25;
}

}  // namespace testsup
