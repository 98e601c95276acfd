#ifndef SKETCHY_SYNTH_HPP_
#define SKETCHY_SYNTH_HPP_

#include <cstdint>
#include <string>

#include "sketchy/types.hpp"

namespace sketchy {

enum class SpectrumFamily { explicit_values, polynomial, exponential, lowrank_noise };
enum class CoherenceMode { incoherent, spiked };

const char* to_string(SpectrumFamily family);
const char* to_string(CoherenceMode mode);
SpectrumFamily spectrum_family_from_string(const std::string& name);
CoherenceMode coherence_mode_from_string(const std::string& name);

/// Recipe for a dense test matrix with a prescribed singular spectrum and
/// controlled coherence.
struct SynthSpec {
  Index M = 0;
  Index N = 0;

  SpectrumFamily family = SpectrumFamily::polynomial;
  Vector values;             // explicit_values
  Scalar alpha = 1.0;        // polynomial: sigma_i = i^-alpha
  Scalar beta = 0.5;         // exponential: sigma_i = beta^i
  Index rank = 0;            // lowrank_noise: leading block size
  Scalar noise = 0.0;        // lowrank_noise: trailing value
  Index spectrum_length = 0; // 0 means min(M, N)

  CoherenceMode coherence = CoherenceMode::incoherent;
  Scalar mu_target = 0;      // spiked: row coherence of the leading block
  Scalar nu_target = 0;      // spiked: column side (0 keeps that side Haar)
  Index coherence_rank = 1;  // rank scale the targets are calibrated at

  std::uint64_t seed = 0;

  /// Materialize the singular values (nonincreasing, nonnegative).
  Vector spectrum() const;
};

/// A = U diag(spectrum) V^T with generated orthonormal factors, so the
/// singular values match the request to roundoff. Deterministic in seed.
Matrix generate(const SynthSpec& spec);

/// Polynomial-decay spec calibrated by bisection so that scree(r_ref)
/// matches `scree_target` for the given shape; the coherence targets are
/// applied in spiked mode.
SynthSpec calibrated_spec(Index M, Index N, Index r_ref, Scalar scree_target,
                          Scalar mu_target, Scalar nu_target,
                          std::uint64_t seed = 0);

/// Stand-ins for the face / MRI / video matrices used in the experiments:
/// same shape, same scree value at the reference rank, and spiked coherence
/// matching the reported row/column incoherence.
SynthSpec yale_like_spec(std::uint64_t seed = 0);
SynthSpec cardiac_like_spec(std::uint64_t seed = 0);
SynthSpec video_like_spec(std::uint64_t seed = 0);

}  // namespace sketchy

#endif  // SKETCHY_SYNTH_HPP_
