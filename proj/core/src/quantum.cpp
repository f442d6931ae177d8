#include "gravbell/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gravbell {

namespace {

void require_state_dim(int dim, const char* who) {
  if (dim != 2 && dim != 4)
    throw std::invalid_argument(std::string(who) + ": dimension must be 2 or 4");
}

}  // namespace

Ket Ket::from_amplitudes(std::vector<Complex> amplitudes) {
  require_state_dim(static_cast<int>(amplitudes.size()), "Ket");
  double n2 = 0.0;
  for (const auto& a : amplitudes) n2 += std::norm(a);
  if (std::abs(n2 - 1.0) > 1e-12)
    throw std::invalid_argument("Ket: amplitudes are not normalized");
  return Ket(std::move(amplitudes));
}

double Ket::norm() const {
  double n2 = 0.0;
  for (const auto& a : amp_) n2 += std::norm(a);
  return std::sqrt(n2);
}

Ket singlet() {
  const double s = 1.0 / std::sqrt(2.0);
  return Ket::from_amplitudes({{0.0, 0.0}, {s, 0.0}, {-s, 0.0}, {0.0, 0.0}});
}

Ket basis_ket(int dim, int index) {
  require_state_dim(dim, "basis_ket");
  if (index < 0 || index >= dim)
    throw std::invalid_argument("basis_ket: index out of range");
  std::vector<Complex> amp(static_cast<std::size_t>(dim), Complex{0.0, 0.0});
  amp[static_cast<std::size_t>(index)] = 1.0;
  return Ket::from_amplitudes(std::move(amp));
}

DensityMatrix DensityMatrix::from_matrix(CMatrix m) {
  require_state_dim(m.dim(), "DensityMatrix");
  if (m.hermiticity_defect() > kHermitianTol)
    throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-12");
  if (std::abs(m.trace().real() - 1.0) > kTraceTol ||
      std::abs(m.trace().imag()) > kTraceTol)
    throw std::invalid_argument("DensityMatrix: trace is not 1 within 1e-12");
  const auto eig = hermitian_eigenvalues(m);
  if (eig.front() < -kPsdTol)
    throw std::invalid_argument("DensityMatrix: not positive semidefinite");
  return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::pure(const Ket& k) {
  const int n = k.dim();
  CMatrix m(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      m.at(r, c) = k.amplitude(r) * std::conj(k.amplitude(c));
  return from_matrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  require_state_dim(dim, "maximally_mixed");
  CMatrix m = CMatrix::identity(dim);
  m *= Complex{1.0 / dim, 0.0};
  return from_matrix(std::move(m));
}

double DensityMatrix::min_eigenvalue() const {
  return hermitian_eigenvalues(mat_).front();
}

QuantumChannel QuantumChannel::from_kraus(std::vector<CMatrix> ops) {
  if (ops.empty())
    throw std::invalid_argument("QuantumChannel: needs at least one Kraus operator");
  const int n = ops.front().dim();
  require_state_dim(n, "QuantumChannel");
  CMatrix sum(n);
  for (const auto& k : ops) {
    if (k.dim() != n)
      throw std::invalid_argument("QuantumChannel: mixed Kraus dimensions");
    sum += k.adjoint() * k;
  }
  if (sum.max_abs_diff(CMatrix::identity(n)) > kCompletenessTol)
    throw std::invalid_argument("QuantumChannel: Kraus operators are not complete");
  return QuantumChannel(std::move(ops));
}

QuantumChannel QuantumChannel::identity(int dim) {
  return from_kraus({CMatrix::identity(dim)});
}

QuantumChannel QuantumChannel::unitary(CMatrix u) {
  return from_kraus({std::move(u)});
}

QuantumChannel QuantumChannel::depolarizing(double p) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument("depolarizing: probability must be in [0,1]");
  CMatrix k0 = CMatrix::identity(2);
  k0 *= Complex{std::sqrt(1.0 - 0.75 * p), 0.0};
  const double w = std::sqrt(0.25 * p);
  CMatrix kx = pauli_x(), ky = pauli_y(), kz = pauli_z();
  kx *= Complex{w, 0.0};
  ky *= Complex{w, 0.0};
  kz *= Complex{w, 0.0};
  return from_kraus({std::move(k0), std::move(kx), std::move(ky), std::move(kz)});
}

QuantumChannel QuantumChannel::dephasing(double keep) {
  if (keep < 0.0 || keep > 1.0)
    throw std::invalid_argument("dephasing: keep factor must be in [0,1]");
  CMatrix k0 = CMatrix::identity(2);
  k0 *= Complex{std::sqrt((1.0 + keep) / 2.0), 0.0};
  CMatrix k1 = pauli_z();
  k1 *= Complex{std::sqrt((1.0 - keep) / 2.0), 0.0};
  return from_kraus({std::move(k0), std::move(k1)});
}

QuantumChannel QuantumChannel::uniform_dephasing(int dim, double keep) {
  require_state_dim(dim, "uniform_dephasing");
  if (keep < 0.0 || keep > 1.0)
    throw std::invalid_argument("uniform_dephasing: keep factor must be in [0,1]");
  // rho -> keep*rho + (1-keep)*diag(rho): Kraus set {sqrt(keep) I} plus
  // sqrt(1-keep) |b><b| for each basis state b.
  std::vector<CMatrix> ops;
  CMatrix k0 = CMatrix::identity(dim);
  k0 *= Complex{std::sqrt(keep), 0.0};
  ops.push_back(std::move(k0));
  const double w = std::sqrt(1.0 - keep);
  for (int b = 0; b < dim; ++b) {
    CMatrix kb(dim);
    kb.at(b, b) = w;
    ops.push_back(std::move(kb));
  }
  return from_kraus(std::move(ops));
}

QuantumChannel QuantumChannel::on_qubit(const QuantumChannel& ch, int which) {
  if (ch.dim() != 2)
    throw std::invalid_argument("on_qubit: channel must be single-qubit");
  if (which != 1 && which != 2)
    throw std::invalid_argument("on_qubit: qubit index must be 1 or 2");
  std::vector<CMatrix> lifted;
  lifted.reserve(ch.kraus().size());
  const CMatrix eye = CMatrix::identity(2);
  for (const auto& k : ch.kraus())
    lifted.push_back(which == 1 ? kron(k, eye) : kron(eye, k));
  return from_kraus(std::move(lifted));
}

Observable Observable::from_matrix(CMatrix m) {
  require_state_dim(m.dim(), "Observable");
  if (m.hermiticity_defect() > kHermitianTol)
    throw std::invalid_argument("Observable: not Hermitian within 1e-12");
  return Observable(std::move(m));
}

Observable Observable::dichotomic(CMatrix m) {
  Observable obs = from_matrix(std::move(m));
  const CMatrix sq = obs.mat_ * obs.mat_;
  if (sq.max_abs_diff(CMatrix::identity(obs.dim())) > kDichotomicTol)
    throw std::invalid_argument("Observable: not dichotomic (M^2 != I)");
  return obs;
}

Observable Observable::bloch_xz(double angle) {
  CMatrix m(2);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  m.at(0, 0) = c;
  m.at(0, 1) = s;
  m.at(1, 0) = s;
  m.at(1, 1) = -c;
  return dichotomic(std::move(m));
}

Observable Observable::tensor(const Observable& a, const Observable& b) {
  return from_matrix(kron(a.matrix(), b.matrix()));
}

CMatrix pauli_x() {
  CMatrix m(2);
  m.at(0, 1) = 1.0;
  m.at(1, 0) = 1.0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2);
  m.at(0, 1) = Complex{0.0, -1.0};
  m.at(1, 0) = Complex{0.0, 1.0};
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2);
  m.at(0, 0) = 1.0;
  m.at(1, 1) = -1.0;
  return m;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != 2 || b.dim() != 2)
    throw std::invalid_argument("tensor: both factors must be single-qubit states");
  return DensityMatrix::from_matrix(kron(a.matrix(), b.matrix()));
}

DensityMatrix partial_trace(const DensityMatrix& rho, int keep) {
  if (rho.dim() != 4)
    throw std::invalid_argument("partial_trace: state must be two-qubit");
  if (keep != 1 && keep != 2)
    throw std::invalid_argument("partial_trace: subsystem index must be 1 or 2");
  CMatrix out(2);
  // Index (i,j) -> 2i + j with i on subsystem 1, j on subsystem 2.
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      Complex sum{0.0, 0.0};
      for (int t = 0; t < 2; ++t)
        sum += keep == 1 ? rho.entry(2 * r + t, 2 * c + t)
                         : rho.entry(2 * t + r, 2 * t + c);
      out.at(r, c) = sum;
    }
  return DensityMatrix::from_matrix(std::move(out));
}

DensityMatrix apply_channel(const DensityMatrix& rho, const QuantumChannel& ch) {
  if (rho.dim() != ch.dim())
    throw std::invalid_argument("apply_channel: dimension mismatch");
  CMatrix out(rho.dim());
  for (const auto& k : ch.kraus()) out += k * rho.matrix() * k.adjoint();
  return DensityMatrix::from_matrix(std::move(out));
}

DensityMatrix mix(const std::vector<std::pair<double, DensityMatrix>>& parts) {
  if (parts.empty()) throw std::invalid_argument("mix: empty mixture");
  const int n = parts.front().second.dim();
  CMatrix out(n);
  double total = 0.0;
  for (const auto& [w, rho] : parts) {
    if (w < 0.0) throw std::invalid_argument("mix: negative weight");
    if (rho.dim() != n) throw std::invalid_argument("mix: dimension mismatch");
    CMatrix part = rho.matrix();
    part *= Complex{w, 0.0};
    out += part;
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("mix: weights must sum to 1");
  return DensityMatrix::from_matrix(std::move(out));
}

double fidelity(const DensityMatrix& rho, const Ket& target) {
  if (rho.dim() != target.dim())
    throw std::invalid_argument("fidelity: dimension mismatch");
  Complex f{0.0, 0.0};
  for (int r = 0; r < rho.dim(); ++r)
    for (int c = 0; c < rho.dim(); ++c)
      f += std::conj(target.amplitude(r)) * rho.entry(r, c) * target.amplitude(c);
  return std::clamp(f.real(), 0.0, 1.0);
}

double negativity(const DensityMatrix& rho) {
  if (rho.dim() != 4)
    throw std::invalid_argument("negativity: state must be two-qubit");
  // Partial transpose over subsystem 2: (i,j),(k,l) -> (i,l),(k,j).
  CMatrix pt(4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          pt.at(2 * i + j, 2 * k + l) = rho.entry(2 * i + l, 2 * k + j);
  double neg = 0.0;
  for (double ev : hermitian_eigenvalues(pt))
    if (ev < -kPsdTol) neg -= ev;  // eigenvalues in (-1e-10, 0) count as 0
  return neg;
}

double expectation(const DensityMatrix& rho, const Observable& obs) {
  if (rho.dim() != obs.dim())
    throw std::invalid_argument("expectation: dimension mismatch");
  Complex t{0.0, 0.0};
  for (int r = 0; r < rho.dim(); ++r)
    for (int c = 0; c < rho.dim(); ++c) t += rho.entry(r, c) * obs.matrix().at(c, r);
  return t.real();
}

int sample_outcomes(std::span<const double> probs, RandomSource& rng) {
  if (probs.empty()) throw std::invalid_argument("sample_outcomes: empty distribution");
  double sum = 0.0;
  for (double p : probs) {
    if (p < -1e-12)
      throw std::invalid_argument("sample_outcomes: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("sample_outcomes: probabilities must sum to 1");
  const double u = rng.uniform01();
  double acc = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last_positive = static_cast<int>(i);
    acc += std::max(probs[i], 0.0);
    if (u < acc) return static_cast<int>(i);
  }
  return last_positive;  // u landed in rounding slack at the top
}

}  // namespace gravbell
