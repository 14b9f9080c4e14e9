#pragma once

#include <complex>
#include <random>

#include <Eigen/Dense>

namespace ergokit {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

double max_abs(const Matrix& m);
Matrix commutator(const Matrix& a, const Matrix& b);

// Hermitian operator on the system. Inputs within 1e-10 of Hermitian are
// symmetrised; anything further off is rejected.
class SystemObservable {
 public:
  explicit SystemObservable(Matrix m);
  static SystemObservable diagonal(const RVector& values);
  static SystemObservable zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  bool is_diagonal(double tol = 1e-12) const;
  RVector diagonal_values() const { return m_.diagonal().real(); }

 private:
  Matrix m_;
};

// Density matrix: Hermitian, unit trace, PSD up to -1e-10.
class SystemState {
 public:
  explicit SystemState(Matrix m);
  static SystemState pure(const CVector& amplitudes);
  // Bloch vector with rho = (1 + x sx + y sy + z sz) / 2, sz|0> = +|0>.
  static SystemState bloch(double x, double y, double z);
  static SystemState maximally_mixed(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double purity() const;

 private:
  Matrix m_;
};

class SystemUnitary {
 public:
  explicit SystemUnitary(Matrix m);
  static SystemUnitary identity(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  SystemUnitary adjoint() const { return SystemUnitary(m_.adjoint()); }

 private:
  Matrix m_;
};

struct Eigensystem {
  RVector values;  // ascending
  Matrix vectors;  // columns, orthonormal
};

Eigensystem eigensystem(const SystemObservable& a);
Eigensystem eigensystem(const SystemState& rho);
// Checks Hermiticity itself; throws NotHermitian beyond 1e-10.
Eigensystem hermitian_eigensystem(const Matrix& a);

// Pinching in the eigenbasis of H: blocks between distinct eigenvalues are
// zeroed, blocks inside one eigenspace are kept.
SystemState dephase(const SystemState& rho, const SystemObservable& hamiltonian);
Matrix dephase_matrix(const Matrix& a, const SystemObservable& hamiltonian);

bool is_incoherent(const Matrix& a, const SystemObservable& hamiltonian, double tol = 1e-10);
bool is_incoherent(const SystemObservable& a, const SystemObservable& hamiltonian, double tol = 1e-10);
bool is_incoherent(const SystemState& a, const SystemObservable& hamiltonian, double tol = 1e-10);

double expectation(const SystemObservable& a, const SystemState& rho);
double variance(const SystemObservable& a, const SystemState& rho);
SystemState conjugate(const SystemUnitary& v, const SystemState& rho);  // V rho V^dagger

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

// Haar measure via QR of a complex Ginibre matrix with R's diagonal phases
// absorbed into Q.
SystemUnitary haar_unitary(int dim, std::mt19937_64& rng);
// Random density matrix: Haar unitary applied to a flat Dirichlet spectrum.
SystemState random_state(int dim, std::mt19937_64& rng);
SystemState random_pure_state(int dim, std::mt19937_64& rng);

void check_same_dim(int a, int b, const char* what);

}  // namespace ergokit
