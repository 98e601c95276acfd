#ifndef SKETCHY_BASELINES_HPP_
#define SKETCHY_BASELINES_HPP_

#include <string>

#include "sketchy/random.hpp"
#include "sketchy/sketch.hpp"
#include "sketchy/types.hpp"

namespace sketchy {

/// Prior sketch-based low-rank approximation schemes, named after their
/// authors' papers. All build full-matrix sketches (no subsampling).
enum class BaselineMethod { hmt, woodruff, cohen, boutsidis, tropp17 };

const char* to_string(BaselineMethod method);
BaselineMethod baseline_from_string(const std::string& name);

/// Runs the chosen method with sketch sizes k (and s, used only by
/// boutsidis) and returns the rank-r result in factored SVD form with
/// orthonormal U and V.
RankRFactors baseline_approx(const Matrix& A, BaselineMethod method, Index r,
                             Index k, Index s, RandomStream& rng);

}  // namespace sketchy

#endif  // SKETCHY_BASELINES_HPP_
