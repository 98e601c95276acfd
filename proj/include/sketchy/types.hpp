#ifndef SKETCHY_TYPES_HPP_
#define SKETCHY_TYPES_HPP_

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace sketchy {

using Scalar = double;
using Index = Eigen::Index;
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Strictly increasing zero-based indices drawn from {0, ..., population-1}.
class IndexSet {
 public:
  IndexSet() = default;

  IndexSet(std::vector<Index> indices, Index population)
      : indices_(std::move(indices)), population_(population) {
    if (population_ < 0)
      throw std::invalid_argument("IndexSet: population must be nonnegative");
    Index prev = -1;
    for (Index i : indices_) {
      if (i <= prev)
        throw std::invalid_argument(
            "IndexSet: indices must be strictly increasing");
      if (i >= population_)
        throw std::invalid_argument("IndexSet: index " + std::to_string(i) +
                                    " >= population " +
                                    std::to_string(population_));
      prev = i;
    }
  }

  static IndexSet full(Index population) {
    std::vector<Index> idx(static_cast<std::size_t>(population));
    for (Index i = 0; i < population; ++i) idx[static_cast<std::size_t>(i)] = i;
    return IndexSet(std::move(idx), population);
  }

  Index size() const { return static_cast<Index>(indices_.size()); }
  Index population() const { return population_; }
  const std::vector<Index>& indices() const { return indices_; }
  Index operator[](Index i) const {
    return indices_[static_cast<std::size_t>(i)];
  }
  bool is_full() const { return size() == population_; }

  bool operator==(const IndexSet& other) const {
    return population_ == other.population_ && indices_ == other.indices_;
  }

 private:
  std::vector<Index> indices_;
  Index population_ = 0;
};

inline void require_finite(const Eigen::Ref<const Matrix>& A,
                           const char* what) {
  if (!A.allFinite())
    throw std::invalid_argument(std::string(what) +
                                ": matrix has non-finite entries");
}

}  // namespace sketchy

#endif  // SKETCHY_TYPES_HPP_
