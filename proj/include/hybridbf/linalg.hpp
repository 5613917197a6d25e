#pragma once

#include <complex>

#include <Eigen/Dense>

namespace hybridbf {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

namespace linalg {

// Relative tolerance used by every Hermitian precondition check.
inline constexpr double kHermitianTol = 1e-10;
// Eigenvalues above -kPsdTol are clamped to zero by principal_sqrt.
inline constexpr double kPsdTol = 1e-10;

struct EvdResult {
  RVec eigenvalues;  // descending
  CMat eigenvectors;  // column i pairs with eigenvalues(i)
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
///
/// Inputs are validated, never symmetrized: an entry of A - A^H larger than
/// kHermitianTol * max|A| raises NonHermitian, NaN/Inf raises NonFinite.
EvdResult hermitian_evd(const CMat& a);

/// Hermitian principal square root U diag(sqrt(lambda)) U^H. Diagonal inputs
/// take an exact entrywise path so sqrt(I) == I bit for bit.
CMat principal_sqrt(const CMat& a);

/// log2 det(A) of a Hermitian positive definite matrix via its eigenvalues.
double logdet_hpd(const CMat& a);

/// Solves A X = B for Hermitian positive definite A.
CMat solve_hermitian(const CMat& a, const CMat& b);

bool is_finite(const CMat& a);
// max |A - A^H| relative to max |A|; 0 for the zero matrix.
double hermitian_defect(const CMat& a);
void require_hermitian(const CMat& a, const char* what);
bool approx_equal(const CMat& a, const CMat& b, double tol);

}  // namespace linalg
}  // namespace hybridbf
