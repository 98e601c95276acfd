#include "sketchy/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sketchy {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer (Steele/Lea/Flood mixing constants).
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t key_of(std::uint64_t seed, std::uint64_t stream_id) {
  return mix64(mix64(seed + kGolden) + stream_id);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), counter_(key_of(seed, stream_id)) {}

RandomStream RandomStream::substream(std::uint64_t id) const {
  return RandomStream(seed_, mix64(stream_id_ + kGolden) + id);
}

std::uint64_t RandomStream::next_u64() {
  counter_ += kGolden;
  return mix64(counter_);
}

double RandomStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_gaussian() {
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  // 1 - u1 lies in (0, 1], so the log is always finite.
  const double radius = std::sqrt(-2.0 * std::log1p(-u1));
  return radius * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RandomStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("next_below: bound must be > 0");
  // Lemire's multiply-and-reject method.
  std::uint64_t x = next_u64();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  auto lo = static_cast<std::uint64_t>(m);
  if (lo < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (lo < threshold) {
      x = next_u64();
      m = static_cast<__uint128_t>(x) * bound;
      lo = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

IndexSet sample_without_replacement(Index count, Index population,
                                    RandomStream& rng) {
  if (population <= 0)
    throw std::invalid_argument(
        "sample_without_replacement: population must be positive");
  if (count < 0 || count > population)
    throw std::invalid_argument(
        "sample_without_replacement: count " + std::to_string(count) +
        " exceeds population " + std::to_string(population));

  // Partial Fisher-Yates; the first `count` slots form a uniform ordered
  // sample, hence a uniform subset once sorted.
  std::vector<Index> pool(static_cast<std::size_t>(population));
  for (Index i = 0; i < population; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (Index i = 0; i < count; ++i) {
    const auto j =
        i + static_cast<Index>(rng.next_below(
                static_cast<std::uint64_t>(population - i)));
    std::swap(pool[static_cast<std::size_t>(i)],
              pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(count));
  std::sort(pool.begin(), pool.end());
  return IndexSet(std::move(pool), population);
}

Matrix gaussian_map(Index rows, Index cols, RandomStream& rng) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("gaussian_map: dimensions must be positive");
  Matrix G(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) G(i, j) = rng.next_gaussian();
  return G;
}

Matrix sparse_sign_map(Index rows, Index cols, Index nonzeros_per_column,
                       RandomStream& rng) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument(
        "sparse_sign_map: dimensions must be positive");
  if (nonzeros_per_column < 1 || nonzeros_per_column > rows)
    throw std::invalid_argument(
        "sparse_sign_map: nonzeros_per_column must lie in [1, rows]");

  const double magnitude = std::sqrt(static_cast<double>(rows) /
                                     static_cast<double>(nonzeros_per_column));
  Matrix G = Matrix::Zero(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    const IndexSet positions =
        sample_without_replacement(nonzeros_per_column, rows, rng);
    for (Index i : positions.indices()) {
      const bool negative = (rng.next_u64() & 1ULL) != 0;
      G(i, j) = negative ? -magnitude : magnitude;
    }
  }
  return G;
}

}  // namespace sketchy
