#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "hybridbf/linalg.hpp"

namespace hybridbf::rf {

enum class RfKind {
  kRowCombiner,
  kColumnSpreader,
  kDftProjection,
  kAntennaSelection,
  kEgcPhase,
  kPhaseAligned,
};

std::string_view to_string(RfKind kind);

// RF-stage matrix: every entry is 0 or a phase with one common magnitude.
struct RfMatrix {
  CMat mat;
  RfKind kind;
  int phase_shifter_count = 0;  // nonzero entries

  // Magnitude shared by the nonzero entries (0 for an all-zero matrix).
  double common_magnitude() const;
  // True when all nonzero |entries| agree within tol.
  bool has_common_magnitude(double tol = 1e-12) const;
};

/// K_c = 2 floor(sqrt(log eps / log alpha)), clamped to >= 1.
int cluster_size(double alpha, double epsilon);

/// Smallest divisor of n that is >= k (n itself when none smaller fits).
int smallest_divisor_at_least(int n, int k);

/// L x n block combiner, row l holding 1/sqrt(k) on columns [l k, (l+1) k).
RfMatrix row_combiner(int n, int k);
/// n x L spreader, the conjugate transpose of row_combiner(n, k).
RfMatrix column_spreader(int n, int k);

/// n x l DFT columns: (1/sqrt n) exp(-j 2 pi m c / n).
RfMatrix dft_projection(int n, std::span<const int> column_indices);

RfMatrix antenna_selection(int n, std::span<const int> indices);

/// Unit-modulus phase matrix of h; exact-zero entries map to 1.
RfMatrix egc_phase_matrix(const CMat& h);

struct PhaseAlignment {
  std::vector<double> phases;  // in (-pi, pi], phases[0] == 0
  CVec combined;
};

/// Greedy co-phasing: each vector is rotated onto the running sum of the
/// ones before it, which maximizes ||u + v e^{j phi}||^2 at every step.
PhaseAlignment phase_align_cluster(std::span<const CVec> vectors);

/// Column spreader whose per-antenna phases co-phase each cluster's channel
/// columns (needs CSI). Same sparsity and magnitude as column_spreader(n, k).
RfMatrix phase_aligned_spreader(const CMat& h, int k);

}  // namespace hybridbf::rf
