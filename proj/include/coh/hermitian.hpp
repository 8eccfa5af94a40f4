#pragma once

// Dense complex Hermitian linear algebra used throughout the library.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

namespace coh {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kTolHerm = 1e-10;
inline constexpr double kTolEig = 1e-10;
inline constexpr double kPsdSlack = 1e-9;

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// as columns. Order among equal eigenvalues is unspecified.
struct EigenSystem {
  RVector values;
  CMatrix vectors;
};

CMatrix hadamard(const CMatrix& a, const CMatrix& b);

bool is_hermitian(const CMatrix& h, double tol = kTolHerm);

/// Cyclic Jacobi. Throws std::invalid_argument for non-Hermitian input
/// (relative tolerance kTolHerm).
EigenSystem eig_hermitian(const CMatrix& h);

double min_eigenvalue(const CMatrix& h);

/// True iff the smallest eigenvalue is >= -tol * max(1, ||h||_F).
bool is_psd(const CMatrix& h, double tol = kPsdSlack);

/// Nearest PSD matrix in Frobenius norm (eigenvalue clipping).
CMatrix project_psd(const CMatrix& h);

/// Unit vectors eta_n with <eta_n|eta_m> = c_nm, of length rank(c).
std::vector<CVector> gram_vectors(const CMatrix& c);

/// Frobenius-relative tolerance used by the is_* predicates.
inline double scaled_tol(const CMatrix& h, double tol) {
  return tol * std::max(1.0, h.norm());
}

}  // namespace coh
