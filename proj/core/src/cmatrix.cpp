#include "gravbell/cmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gravbell {

CMatrix::CMatrix(int dim)
    : dim_(dim), a_(static_cast<std::size_t>(dim) * dim, Complex{0.0, 0.0}) {
  if (dim <= 0) throw std::invalid_argument("CMatrix: dimension must be positive");
}

CMatrix CMatrix::identity(int dim) {
  CMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c) m.at(c, r) = std::conj(at(r, c));
  return m;
}

Complex CMatrix::trace() const {
  Complex t{0.0, 0.0};
  for (int i = 0; i < dim_; ++i) t += at(i, i);
  return t;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  if (dim_ != o.dim_) throw std::invalid_argument("CMatrix: dimension mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  if (dim_ != o.dim_) throw std::invalid_argument("CMatrix: dimension mismatch");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(const Complex& s) {
  for (auto& v : a_) v *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("CMatrix: dimension mismatch");
  const int n = a.dim_;
  CMatrix c(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const Complex aik = a.at(i, k);
      if (aik == Complex{0.0, 0.0}) continue;
      for (int j = 0; j < n; ++j) c.at(i, j) += aik * b.at(k, j);
    }
  return c;
}

double CMatrix::max_abs_diff(const CMatrix& o) const {
  if (dim_ != o.dim_) throw std::invalid_argument("CMatrix: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i)
    m = std::max(m, std::abs(a_[i] - o.a_[i]));
  return m;
}

double CMatrix::hermiticity_defect() const {
  double m = 0.0;
  for (int r = 0; r < dim_; ++r)
    for (int c = 0; c < dim_; ++c)
      m = std::max(m, std::abs(at(r, c) - std::conj(at(c, r))));
  return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const int na = a.dim();
  const int nb = b.dim();
  CMatrix c(na * nb);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) {
      const Complex aij = a.at(i, j);
      for (int k = 0; k < nb; ++k)
        for (int l = 0; l < nb; ++l)
          c.at(i * nb + k, j * nb + l) = aij * b.at(k, l);
    }
  return c;
}

namespace {

constexpr double kJacobiThreshold = 1e-13;
constexpr int kJacobiMaxRotations = 500;

// One complex Jacobi rotation zeroing m(p,q). The rotation is
// U = [[c, -s e^{i phi}], [s e^{-i phi}, c]] on the (p,q) plane with
// phi the phase of m(p,q); m <- U^dag m U.
void jacobi_rotate(CMatrix& m, int p, int q) {
  const Complex beta = m.at(p, q);
  const double ab = std::abs(beta);
  if (ab == 0.0) return;
  const Complex phase = beta / ab;
  const double alpha = m.at(p, p).real();
  const double delta = m.at(q, q).real();
  const double tau = (delta - alpha) / (2.0 * ab);
  // small-magnitude root of t^2 - 2 tau t - 1 = 0
  const double sign = tau >= 0.0 ? 1.0 : -1.0;
  const double t = -sign / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const int n = m.dim();
  CMatrix u = CMatrix::identity(n);
  u.at(p, p) = c;
  u.at(p, q) = -s * phase;
  u.at(q, p) = s * std::conj(phase);
  u.at(q, q) = c;
  m = u.adjoint() * m * u;
}

}  // namespace

std::vector<double> hermitian_eigenvalues(CMatrix m) {
  if (m.hermiticity_defect() > 1e-9)
    throw std::invalid_argument("hermitian_eigenvalues: input is not Hermitian");
  const int n = m.dim();

  if (n == 1) return {m.at(0, 0).real()};
  if (n == 2) {
    const double a = m.at(0, 0).real();
    const double d = m.at(1, 1).real();
    const double h = (a - d) / 2.0;
    const double r = std::sqrt(h * h + std::norm(m.at(0, 1)));
    const double mid = (a + d) / 2.0;
    return {mid - r, mid + r};
  }

  for (int iter = 0; iter < kJacobiMaxRotations; ++iter) {
    int bp = 0, bq = 1;
    double best = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double v = std::abs(m.at(p, q));
        if (v > best) {
          best = v;
          bp = p;
          bq = q;
        }
      }
    if (best <= kJacobiThreshold) break;
    jacobi_rotate(m, bp, bq);
  }

  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = m.at(i, i).real();
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace gravbell
