#pragma once

#include <span>
#include <utility>
#include <vector>

#include "gravbell/cmatrix.hpp"
#include "gravbell/random.hpp"

namespace gravbell {

// Tolerances for the state invariants. PSD is looser than Hermiticity:
// channel composition accumulates rounding in the eigenvalues, and
// eigenvalues in (-1e-10, 0) are clamped to 0 when reported.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kCompletenessTol = 1e-10;
inline constexpr double kDichotomicTol = 1e-10;

/// Normalized pure state on a 2- or 4-dimensional Hilbert space.
/// Basis ordering for dim 4 is |00>, |01>, |10>, |11>, with subsystem 1
/// the left tensor factor. Every module inherits this convention.
class Ket {
 public:
  /// Validates dim in {2, 4} and unit norm (tolerance 1e-12).
  static Ket from_amplitudes(std::vector<Complex> amplitudes);

  int dim() const { return static_cast<int>(amp_.size()); }
  const std::vector<Complex>& amplitudes() const { return amp_; }
  Complex amplitude(int i) const { return amp_[static_cast<std::size_t>(i)]; }
  double norm() const;

 private:
  explicit Ket(std::vector<Complex> amp) : amp_(std::move(amp)) {}
  std::vector<Complex> amp_;
};

/// The maximally entangled singlet (|01> - |10>)/sqrt(2).
Ket singlet();

/// Computational basis vector |index> of the given dimension.
Ket basis_ket(int dim, int index);

/// Trace-one positive-semidefinite Hermitian operator on dim 2 or 4.
/// All constructors validate the invariants (Hermitian to 1e-12, unit
/// trace to 1e-12, minimum eigenvalue >= -1e-10).
class DensityMatrix {
 public:
  static DensityMatrix from_matrix(CMatrix m);
  static DensityMatrix pure(const Ket& k);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return mat_.dim(); }
  const CMatrix& matrix() const { return mat_; }
  Complex entry(int r, int c) const { return mat_.at(r, c); }
  double min_eigenvalue() const;

 private:
  explicit DensityMatrix(CMatrix m) : mat_(std::move(m)) {}
  CMatrix mat_;
};

/// Kraus-operator representation of a completely positive trace
/// preserving map. The factory checks completeness sum_i K_i^dag K_i = I
/// to 1e-10 per entry.
class QuantumChannel {
 public:
  static QuantumChannel from_kraus(std::vector<CMatrix> ops);
  static QuantumChannel identity(int dim);
  static QuantumChannel unitary(CMatrix u);
  /// Single-qubit depolarizing map rho -> (1-p) rho + p I/2.
  static QuantumChannel depolarizing(double p);
  /// Single-qubit dephasing; off-diagonals are scaled by `keep`.
  static QuantumChannel dephasing(double keep);
  /// Scales every off-diagonal entry (any basis pair) by `keep`.
  static QuantumChannel uniform_dephasing(int dim, double keep);
  /// Lifts a single-qubit channel to act on qubit `which` (1 or 2) of a
  /// two-qubit system.
  static QuantumChannel on_qubit(const QuantumChannel& ch, int which);

  const std::vector<CMatrix>& kraus() const { return kraus_; }
  int dim() const { return kraus_.front().dim(); }

 private:
  explicit QuantumChannel(std::vector<CMatrix> ops) : kraus_(std::move(ops)) {}
  std::vector<CMatrix> kraus_;
};

/// Hermitian operator; `dichotomic` additionally checks M^2 = I (1e-10),
/// i.e. eigenvalues in {-1, +1}.
class Observable {
 public:
  static Observable from_matrix(CMatrix m);
  static Observable dichotomic(CMatrix m);
  /// cos(angle) sigma_z + sin(angle) sigma_x: the measurement direction
  /// `angle` in the x-z Bloch plane. Dichotomic by construction.
  static Observable bloch_xz(double angle);
  static Observable tensor(const Observable& a, const Observable& b);

  int dim() const { return mat_.dim(); }
  const CMatrix& matrix() const { return mat_; }

 private:
  explicit Observable(CMatrix m) : mat_(std::move(m)) {}
  CMatrix mat_;
};

CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

/// Kronecker product of two single-qubit states (subsystem 1 left).
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced state of subsystem `keep` (1 or 2) of a two-qubit state.
DensityMatrix partial_trace(const DensityMatrix& rho, int keep);

/// sum_i K_i rho K_i^dag.
DensityMatrix apply_channel(const DensityMatrix& rho, const QuantumChannel& ch);

/// Convex mixture sum_i w_i rho_i; weights must be non-negative and sum
/// to 1 within 1e-9.
DensityMatrix mix(const std::vector<std::pair<double, DensityMatrix>>& parts);

/// <target| rho |target>, clamped to [0, 1].
double fidelity(const DensityMatrix& rho, const Ket& target);

/// Sum of |negative eigenvalues| of the partial transpose over
/// subsystem 2. Zero for all separable states; 1/2 for the singlet.
double negativity(const DensityMatrix& rho);

/// Tr(rho obs).
double expectation(const DensityMatrix& rho, const Observable& obs);

/// Draws an index with probability probs[i]. The probabilities must be
/// non-negative and sum to 1 within 1e-9. Deterministic given the
/// random source state.
int sample_outcomes(std::span<const double> probs, RandomSource& rng);

}  // namespace gravbell
