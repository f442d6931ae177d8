#pragma once

#include <complex>
#include <vector>

namespace gravbell {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major. Everything in this toolkit
/// lives on 2- or 4-dimensional Hilbert spaces, so the algorithms below
/// are written (and tested) for small fixed dimensions only.
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(int dim);
  static CMatrix identity(int dim);

  int dim() const { return dim_; }

  Complex& at(int r, int c) { return a_[static_cast<std::size_t>(r) * dim_ + c]; }
  const Complex& at(int r, int c) const {
    return a_[static_cast<std::size_t>(r) * dim_ + c];
  }

  CMatrix adjoint() const;
  Complex trace() const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(const Complex& s);
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(const Complex& s, CMatrix m) { return m *= s; }

  /// max_ij |a_ij - o_ij|
  double max_abs_diff(const CMatrix& o) const;
  /// max_ij |a_ij - conj(a_ji)|
  double hermiticity_defect() const;

 private:
  int dim_ = 0;
  std::vector<Complex> a_;
};

/// Kronecker product; the left factor is subsystem 1.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Eigenvalues of a Hermitian matrix, ascending. Closed form for 2x2,
/// classical Jacobi rotations with off-diagonal threshold 1e-13 for
/// larger dimensions. Rejects inputs with hermiticity defect above 1e-9.
std::vector<double> hermitian_eigenvalues(CMatrix m);

}  // namespace gravbell
