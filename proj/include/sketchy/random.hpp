#ifndef SKETCHY_RANDOM_HPP_
#define SKETCHY_RANDOM_HPP_

#include <cstdint>

#include "sketchy/types.hpp"

namespace sketchy {

/// Counter-based pseudorandom stream (splitmix64 over a keyed counter).
///
/// A stream is identified by (seed, stream_id). The n-th output is a pure
/// function of (seed, stream_id, n), so sequences are reproducible across
/// platforms and independent of how work is scheduled. Substreams derived
/// via substream(id) are statistically independent of the parent and of
/// each other.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Derive an independent substream; does not advance this stream.
  RandomStream substream(std::uint64_t id) const;

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double next_uniform();

  /// Standard normal via Box-Muller; consumes exactly two u64 draws.
  double next_gaussian();

  /// Unbiased uniform integer on [0, bound); bound must be positive.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_;
};

/// Uniformly random size-`count` subset of {0, ..., population-1},
/// sampled without replacement; every subset is equally likely.
IndexSet sample_without_replacement(Index count, Index population,
                                    RandomStream& rng);

/// Dense matrix of i.i.d. standard normal entries (mean 0, variance 1).
Matrix gaussian_map(Index rows, Index cols, RandomStream& rng);

/// Sparse sign dimension-reduction map, stored densely: each column has
/// exactly `nonzeros_per_column` entries of value +-sqrt(rows / nnz) at
/// uniformly chosen positions. Column norms match the Gaussian map's
/// expected column norms, so the two kinds are interchangeable.
Matrix sparse_sign_map(Index rows, Index cols, Index nonzeros_per_column,
                       RandomStream& rng);

}  // namespace sketchy

#endif  // SKETCHY_RANDOM_HPP_
