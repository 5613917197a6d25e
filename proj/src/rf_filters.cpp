#include "hybridbf/rf_filters.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <unordered_set>

#include "hybridbf/error.hpp"

namespace hybridbf::rf {

std::string_view to_string(RfKind kind) {
  switch (kind) {
    case RfKind::kRowCombiner: return "RowCombiner";
    case RfKind::kColumnSpreader: return "ColumnSpreader";
    case RfKind::kDftProjection: return "DftProjection";
    case RfKind::kAntennaSelection: return "AntennaSelection";
    case RfKind::kEgcPhase: return "EgcPhase";
    case RfKind::kPhaseAligned: return "PhaseAligned";
  }
  return "Unknown";
}

double RfMatrix::common_magnitude() const {
  for (Eigen::Index j = 0; j < mat.cols(); ++j) {
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      if (mat(i, j) != cplx{}) return std::abs(mat(i, j));
    }
  }
  return 0.0;
}

bool RfMatrix::has_common_magnitude(double tol) const {
  const double ref = common_magnitude();
  for (Eigen::Index j = 0; j < mat.cols(); ++j) {
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      if (mat(i, j) != cplx{} && std::abs(std::abs(mat(i, j)) - ref) > tol) {
        return false;
      }
    }
  }
  return true;
}

namespace {

int count_nonzero(const CMat& m) {
  int count = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) != cplx{}) ++count;
    }
  }
  return count;
}

void check_indices(int n, std::span<const int> indices) {
  std::unordered_set<int> seen;
  for (int idx : indices) {
    if (idx < 0 || idx >= n) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "index " + std::to_string(idx) + " outside [0, " +
                      std::to_string(n) + ")");
    }
    if (!seen.insert(idx).second) {
      throw Error(ErrorCode::kDuplicateIndex, "index " + std::to_string(idx) +
                                                  " appears more than once");
    }
  }
}

// Wraps arg() from [-pi, pi] into (-pi, pi].
double wrap_phase(double phi) {
  return phi <= -std::numbers::pi ? phi + 2.0 * std::numbers::pi : phi;
}

}  // namespace

int cluster_size(double alpha, double epsilon) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kDomainError,
                "cluster_size alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::kDomainError, "cluster_size epsilon must lie in (0, 1), got " +
                                             std::to_string(epsilon));
  }
  const double ratio = std::log(epsilon) / std::log(alpha);
  const int k = 2 * static_cast<int>(std::floor(std::sqrt(ratio)));
  return std::max(1, k);
}

int smallest_divisor_at_least(int n, int k) {
  if (n < 1) throw Error(ErrorCode::kDomainError, "n must be positive");
  for (int d = std::max(1, k); d < n; ++d) {
    if (n % d == 0) return d;
  }
  return n;
}

RfMatrix row_combiner(int n, int k) {
  if (n < 1 || k < 1) {
    throw Error(ErrorCode::kDomainError, "row_combiner needs positive n and k");
  }
  if (n % k != 0) {
    throw Error(ErrorCode::kNotDivisible, "cluster size " + std::to_string(k) +
                                              " does not divide " + std::to_string(n));
  }
  const int l = n / k;
  const double w = 1.0 / std::sqrt(static_cast<double>(k));
  CMat m = CMat::Zero(l, n);
  for (int row = 0; row < l; ++row) {
    for (int c = row * k; c < (row + 1) * k; ++c) m(row, c) = w;
  }
  return RfMatrix{std::move(m), RfKind::kRowCombiner, n};
}

RfMatrix column_spreader(int n, int k) {
  RfMatrix rc = row_combiner(n, k);
  return RfMatrix{rc.mat.adjoint(), RfKind::kColumnSpreader, rc.phase_shifter_count};
}

RfMatrix dft_projection(int n, std::span<const int> column_indices) {
  if (n < 1) throw Error(ErrorCode::kDomainError, "dft_projection needs n >= 1");
  const int l = static_cast<int>(column_indices.size());
  if (l < 1 || l > n) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "dft_projection needs 1 <= l <= n, got l = " + std::to_string(l));
  }
  check_indices(n, column_indices);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  CMat m(n, l);
  for (int c = 0; c < l; ++c) {
    for (int row = 0; row < n; ++row) {
      // Reduce m*c mod n first so large arrays keep full phase accuracy.
      const long long e = (static_cast<long long>(row) * column_indices[c]) % n;
      const double phi = -2.0 * std::numbers::pi * static_cast<double>(e) / n;
      m(row, c) = std::polar(scale, phi);
    }
  }
  return RfMatrix{std::move(m), RfKind::kDftProjection, n * l};
}

RfMatrix antenna_selection(int n, std::span<const int> indices) {
  if (n < 1) throw Error(ErrorCode::kDomainError, "antenna_selection needs n >= 1");
  check_indices(n, indices);
  CMat m = CMat::Zero(n, static_cast<Eigen::Index>(indices.size()));
  for (std::size_t c = 0; c < indices.size(); ++c) {
    m(indices[c], static_cast<Eigen::Index>(c)) = 1.0;
  }
  // Switches, not phase shifters.
  return RfMatrix{std::move(m), RfKind::kAntennaSelection, 0};
}

RfMatrix egc_phase_matrix(const CMat& h) {
  CMat m(h.rows(), h.cols());
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      const double mag = std::abs(h(i, j));
      m(i, j) = mag == 0.0 ? cplx(1.0, 0.0) : h(i, j) / mag;
    }
  }
  return RfMatrix{std::move(m), RfKind::kEgcPhase, static_cast<int>(h.size())};
}

PhaseAlignment phase_align_cluster(std::span<const CVec> vectors) {
  if (vectors.empty()) {
    throw Error(ErrorCode::kEmptyInput, "phase_align_cluster needs at least one vector");
  }
  const Eigen::Index len = vectors.front().size();
  for (const CVec& v : vectors) {
    if (v.size() != len) {
      throw Error(ErrorCode::kDimensionMismatch, "cluster vectors differ in length");
    }
  }

  PhaseAlignment out;
  out.phases.reserve(vectors.size());
  out.phases.push_back(0.0);
  out.combined = vectors.front();
  for (std::size_t k = 1; k < vectors.size(); ++k) {
    const cplx inner = vectors[k].dot(out.combined);  // v_k^H u
    // arg(0) is 0, so a vector orthogonal to the running sum keeps phase 0.
    const double phi = wrap_phase(std::arg(inner));
    out.phases.push_back(phi);
    out.combined += vectors[k] * std::polar(1.0, phi);
  }
  return out;
}

RfMatrix phase_aligned_spreader(const CMat& h, int k) {
  const int n = static_cast<int>(h.cols());
  RfMatrix spreader = column_spreader(n, k);
  const int l = n / k;
  const double w = 1.0 / std::sqrt(static_cast<double>(k));
  std::vector<CVec> cluster(k);
  for (int c = 0; c < l; ++c) {
    for (int m = 0; m < k; ++m) cluster[m] = h.col(c * k + m);
    const PhaseAlignment pa = phase_align_cluster(cluster);
    for (int m = 0; m < k; ++m) {
      spreader.mat(c * k + m, c) = std::polar(w, pa.phases[m]);
    }
  }
  spreader.kind = RfKind::kPhaseAligned;
  spreader.phase_shifter_count = count_nonzero(spreader.mat);
  return spreader;
}

}  // namespace hybridbf::rf
