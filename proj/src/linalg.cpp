#include "hybridbf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "hybridbf/error.hpp"

namespace hybridbf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonHermitian: return "NonHermitian";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kIndefiniteMatrix: return "IndefiniteMatrix";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kNotDivisible: return "NotDivisible";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kDuplicateIndex: return "DuplicateIndex";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kStreamCountTooLarge: return "StreamCountTooLarge";
    case ErrorCode::kEmptyGains: return "EmptyGains";
    case ErrorCode::kNonPositivePower: return "NonPositivePower";
    case ErrorCode::kSingularEffectiveChannel: return "SingularEffectiveChannel";
    case ErrorCode::kZeroColumn: return "ZeroColumn";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kUnknownPreset: return "UnknownPreset";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

namespace linalg {

bool is_finite(const CMat& a) {
  return a.allFinite();
}

double hermitian_defect(const CMat& a) {
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

void require_hermitian(const CMat& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + " must be square");
  }
  if (!is_finite(a)) {
    throw Error(ErrorCode::kNonFinite, std::string(what) + " has NaN/Inf entries");
  }
  if (hermitian_defect(a) > kHermitianTol) {
    throw Error(ErrorCode::kNonHermitian,
                std::string(what) + " is not Hermitian within tolerance");
  }
}

bool approx_equal(const CMat& a, const CMat& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

namespace {

bool is_diagonal(const CMat& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j && a(i, j) != cplx{}) return false;
    }
  }
  return true;
}

}  // namespace

EvdResult hermitian_evd(const CMat& a) {
  require_hermitian(a, "hermitian_evd input");
  const Eigen::Index n = a.rows();
  if (n == 0) return {};

  // Only the lower triangle is read by the solver.
  Eigen::SelfAdjointEigenSolver<CMat> solver(a, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNonFinite, "eigensolver failed to converge");
  }
  EvdResult out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

CMat principal_sqrt(const CMat& a) {
  require_hermitian(a, "principal_sqrt input");
  const Eigen::Index n = a.rows();

  if (is_diagonal(a)) {
    CMat out = CMat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = a(i, i).real();
      if (d < -kPsdTol) {
        throw Error(ErrorCode::kIndefiniteMatrix, "negative diagonal entry");
      }
      out(i, i) = std::sqrt(std::max(d, 0.0));
    }
    return out;
  }

  const EvdResult evd = hermitian_evd(a);
  RVec root(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = evd.eigenvalues(i);
    if (lambda < -kPsdTol) {
      throw Error(ErrorCode::kIndefiniteMatrix,
                  "eigenvalue " + std::to_string(lambda) + " below PSD tolerance");
    }
    root(i) = std::sqrt(std::max(lambda, 0.0));
  }
  const CMat& u = evd.eigenvectors;
  CMat out = u * root.asDiagonal() * u.adjoint();
  // Round-off leaves a ~1e-16 anti-Hermitian part; fold it back.
  return 0.5 * (out + out.adjoint());
}

double logdet_hpd(const CMat& a) {
  const EvdResult evd = hermitian_evd(a);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < evd.eigenvalues.size(); ++i) {
    const double lambda = evd.eigenvalues(i);
    if (!(lambda > 0.0)) {
      throw Error(ErrorCode::kNotPositiveDefinite,
                  "eigenvalue " + std::to_string(lambda) + " is not positive");
    }
    acc += std::log2(lambda);
  }
  return acc;
}

CMat solve_hermitian(const CMat& a, const CMat& b) {
  require_hermitian(a, "solve_hermitian matrix");
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "solve_hermitian: A is " + std::to_string(a.rows()) +
                    " rows, B is " + std::to_string(b.rows()));
  }
  Eigen::LLT<CMat> llt(a);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kNotPositiveDefinite, "Cholesky factorization failed");
  }
  return llt.solve(b);
}

}  // namespace linalg
}  // namespace hybridbf
