#pragma once

#include <cstdint>
#include <random>

namespace hybridbf {

// Purpose tags keep substreams that share (master seed, index) disjoint.
enum class StreamPurpose : std::uint32_t {
  kChannel = 0,
  kDftColumns = 1,
  kEstimator = 2,
};

// Deterministic random stream for one trial (or one auxiliary draw).
//
// The engine is std::mt19937_64 seeded through std::seed_seq with the words
// (seed lo, seed hi, index lo, index hi, purpose). Both are fully specified
// by the standard. Gaussian samples go through std::normal_distribution,
// whose algorithm is library-defined, so streams are bit-stable per build.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t index,
               StreamPurpose purpose = StreamPurpose::kChannel);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::mt19937_64& engine() { return engine_; }

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t index() const { return index_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace hybridbf
