#include "ergokit/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ergokit/errors.hpp"

namespace ergokit {

namespace {

constexpr double kSymmetriseTol = 1e-10;

Matrix symmetrised(Matrix m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionMismatch(std::string(what) + ": matrix must be square and non-empty");
  }
  const double dev = max_abs(m - m.adjoint());
  if (dev > kSymmetriseTol) {
    throw NotHermitian(std::string(what) + ": deviation from Hermitian " + std::to_string(dev));
  }
  return (m + m.adjoint()) * 0.5;
}

}  // namespace

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

void check_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimensions " + std::to_string(a) + " and " +
                            std::to_string(b));
  }
}

SystemObservable::SystemObservable(Matrix m) : m_(symmetrised(std::move(m), "observable")) {}

SystemObservable SystemObservable::diagonal(const RVector& values) {
  return SystemObservable(values.cast<cplx>().asDiagonal().toDenseMatrix());
}

SystemObservable SystemObservable::zero(int dim) { return SystemObservable(Matrix::Zero(dim, dim)); }

bool SystemObservable::is_diagonal(double tol) const {
  Matrix off = m_;
  off.diagonal().setZero();
  return max_abs(off) <= tol;
}

SystemState::SystemState(Matrix m) : m_(symmetrised(std::move(m), "state")) {
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > 1e-12) {
    throw InvalidState("state: trace " + std::to_string(tr) + " differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw InvalidState("state: negative eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
  }
}

SystemState SystemState::pure(const CVector& amplitudes) {
  const double nrm = amplitudes.norm();
  if (nrm == 0.0) throw InvalidState("state: zero vector");
  const CVector v = amplitudes / nrm;
  return SystemState(v * v.adjoint());
}

SystemState SystemState::bloch(double x, double y, double z) {
  if (std::sqrt(x * x + y * y + z * z) > 1.0 + 1e-10) throw InvalidState("state: Bloch vector longer than 1");
  Matrix m = Matrix::Identity(2, 2) + x * pauli_x() + y * pauli_y() + z * pauli_z();
  return SystemState(m * 0.5);
}

SystemState SystemState::maximally_mixed(int dim) {
  return SystemState(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

double SystemState::purity() const { return (m_ * m_).trace().real(); }

SystemUnitary::SystemUnitary(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) throw DimensionMismatch("unitary: matrix must be square");
  const double dev = max_abs(m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols()));
  if (dev > 1e-10) throw NotUnitary("unitary: deviation " + std::to_string(dev));
}

SystemUnitary SystemUnitary::identity(int dim) { return SystemUnitary(Matrix::Identity(dim, dim)); }

Eigensystem hermitian_eigensystem(const Matrix& a) {
  const Matrix h = symmetrised(a, "eigensystem");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

Eigensystem eigensystem(const SystemObservable& a) { return hermitian_eigensystem(a.matrix()); }
Eigensystem eigensystem(const SystemState& rho) { return hermitian_eigensystem(rho.matrix()); }

Matrix dephase_matrix(const Matrix& a, const SystemObservable& hamiltonian) {
  check_same_dim(static_cast<int>(a.rows()), hamiltonian.dim(), "dephase");
  const Eigensystem es = eigensystem(hamiltonian);
  const Matrix in_basis = es.vectors.adjoint() * a * es.vectors;
  Matrix kept = Matrix::Zero(a.rows(), a.cols());
  const auto d = a.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (std::abs(es.values(i) - es.values(j)) <= 1e-9) kept(i, j) = in_basis(i, j);
    }
  }
  return es.vectors * kept * es.vectors.adjoint();
}

SystemState dephase(const SystemState& rho, const SystemObservable& hamiltonian) {
  return SystemState(dephase_matrix(rho.matrix(), hamiltonian));
}

bool is_incoherent(const Matrix& a, const SystemObservable& hamiltonian, double tol) {
  check_same_dim(static_cast<int>(a.rows()), hamiltonian.dim(), "is_incoherent");
  return max_abs(commutator(a, hamiltonian.matrix())) <= tol;
}

bool is_incoherent(const SystemObservable& a, const SystemObservable& hamiltonian, double tol) {
  return is_incoherent(a.matrix(), hamiltonian, tol);
}

bool is_incoherent(const SystemState& a, const SystemObservable& hamiltonian, double tol) {
  return is_incoherent(a.matrix(), hamiltonian, tol);
}

double expectation(const SystemObservable& a, const SystemState& rho) {
  check_same_dim(a.dim(), rho.dim(), "expectation");
  return (a.matrix() * rho.matrix()).trace().real();
}

double variance(const SystemObservable& a, const SystemState& rho) {
  const double m = expectation(a, rho);
  return (a.matrix() * a.matrix() * rho.matrix()).trace().real() - m * m;
}

SystemState conjugate(const SystemUnitary& v, const SystemState& rho) {
  check_same_dim(v.dim(), rho.dim(), "conjugate");
  return SystemState(v.matrix() * rho.matrix() * v.matrix().adjoint());
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

SystemUnitary haar_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) z(i, j) = cplx(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const double mag = std::abs(r(k, k));
    q.col(k) *= mag > 0.0 ? r(k, k) / mag : cplx(1.0);
  }
  // Re-orthonormalise to wash out the last ulp before the unitary check.
  Eigen::HouseholderQR<Matrix> polish(q);
  Matrix q2 = polish.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r2 = polish.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) q2.col(k) *= r2(k, k) / std::abs(r2(k, k));
  return SystemUnitary(q2);
}

SystemState random_state(int dim, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  RVector spectrum(dim);
  for (int k = 0; k < dim; ++k) spectrum(k) = expo(rng);
  spectrum /= spectrum.sum();
  const Matrix u = haar_unitary(dim, rng).matrix();
  return SystemState(u * spectrum.cast<cplx>().asDiagonal() * u.adjoint());
}

SystemState random_pure_state(int dim, std::mt19937_64& rng) {
  return SystemState::pure(haar_unitary(dim, rng).matrix().col(0));
}

}  // namespace ergokit
