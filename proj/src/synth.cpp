#include "sketchy/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "sketchy/diagnostics.hpp"
#include "sketchy/linalg.hpp"
#include "sketchy/random.hpp"

namespace sketchy {

namespace {

Scalar scree_at(const Vector& sigma, Index r) {
  Scalar tail = 0, total = 0;
  for (Index i = sigma.size() - 1; i >= 0; --i) {
    const Scalar sq = sigma(i) * sigma(i);
    total += sq;
    if (i >= r) tail += sq;
  }
  return tail / total;
}

Vector polynomial_spectrum(Index length, Scalar alpha) {
  Vector sigma(length);
  for (Index i = 0; i < length; ++i)
    sigma(i) = std::pow(static_cast<Scalar>(i + 1), -alpha);
  return sigma;
}

// Haar-distributed orthonormal columns via QR of a Gaussian matrix.
Matrix haar_basis(Index rows, Index cols, RandomStream& rng) {
  return thin_qr(gaussian_map(rows, cols, rng)).Q;
}

// Orthonormal basis whose leading column carries weight `spike_sq` on
// coordinate 0; the remaining columns are Haar in its orthogonal complement.
Matrix spiked_basis(Index rows, Index cols, Scalar spike_sq,
                    RandomStream& rng) {
  Vector lead(rows);
  lead(0) = std::sqrt(spike_sq);
  if (rows > 1) {
    Vector rest(rows - 1);
    for (Index i = 0; i < rows - 1; ++i) rest(i) = rng.next_gaussian();
    rest.normalize();
    lead.tail(rows - 1) = std::sqrt(1 - spike_sq) * rest;
  } else {
    lead(0) = 1;
  }

  if (cols == 1) return lead;

  Matrix G = gaussian_map(rows, cols - 1, rng);
  G -= lead * (lead.transpose() * G);  // project out the spike direction
  Matrix basis(rows, cols);
  basis.col(0) = lead;
  basis.rightCols(cols - 1) = thin_qr(G).Q;
  return basis;
}

}  // namespace

const char* to_string(SpectrumFamily family) {
  switch (family) {
    case SpectrumFamily::explicit_values: return "explicit";
    case SpectrumFamily::polynomial: return "polynomial";
    case SpectrumFamily::exponential: return "exponential";
    case SpectrumFamily::lowrank_noise: return "lowrank-noise";
  }
  throw std::invalid_argument("unknown spectrum family");
}

const char* to_string(CoherenceMode mode) {
  return mode == CoherenceMode::incoherent ? "incoherent" : "spiked";
}

SpectrumFamily spectrum_family_from_string(const std::string& name) {
  if (name == "explicit") return SpectrumFamily::explicit_values;
  if (name == "polynomial" || name == "poly") return SpectrumFamily::polynomial;
  if (name == "exponential" || name == "exp") return SpectrumFamily::exponential;
  if (name == "lowrank-noise" || name == "lowrank")
    return SpectrumFamily::lowrank_noise;
  throw std::invalid_argument("unknown spectrum family: " + name);
}

CoherenceMode coherence_mode_from_string(const std::string& name) {
  if (name == "incoherent") return CoherenceMode::incoherent;
  if (name == "spiked") return CoherenceMode::spiked;
  throw std::invalid_argument("unknown coherence mode: " + name);
}

Vector SynthSpec::spectrum() const {
  const Index limit = std::min(M, N);
  const Index length = spectrum_length > 0 ? spectrum_length : limit;
  if (length < 1 || length > limit)
    throw std::invalid_argument(
        "SynthSpec: spectrum length must lie in [1, min(M, N)]");

  Vector sigma;
  switch (family) {
    case SpectrumFamily::explicit_values:
      sigma = values;
      break;
    case SpectrumFamily::polynomial:
      sigma = polynomial_spectrum(length, alpha);
      break;
    case SpectrumFamily::exponential: {
      if (!(beta > 0 && beta <= 1))
        throw std::invalid_argument("SynthSpec: beta must lie in (0, 1]");
      sigma.resize(length);
      for (Index i = 0; i < length; ++i)
        sigma(i) = std::pow(beta, static_cast<Scalar>(i));
      break;
    }
    case SpectrumFamily::lowrank_noise: {
      if (rank < 1 || rank > length)
        throw std::invalid_argument("SynthSpec: rank must lie in [1, length]");
      if (noise < 0 || noise > 1)
        throw std::invalid_argument("SynthSpec: noise must lie in [0, 1]");
      sigma = Vector::Constant(length, noise);
      sigma.head(rank).setOnes();
      break;
    }
  }
  if (sigma.size() < 1 || sigma.size() > limit)
    throw std::invalid_argument(
        "SynthSpec: spectrum length must lie in [1, min(M, N)]");
  for (Index i = 0; i < sigma.size(); ++i) {
    if (!(sigma(i) >= 0))
      throw std::invalid_argument("SynthSpec: negative singular value");
    if (i > 0 && sigma(i) > sigma(i - 1))
      throw std::invalid_argument("SynthSpec: spectrum not nonincreasing");
  }
  return sigma;
}

Matrix generate(const SynthSpec& spec) {
  if (spec.M < 1 || spec.N < 1)
    throw std::invalid_argument("generate: dimensions must be positive");
  const Vector sigma = spec.spectrum();
  const Index L = sigma.size();

  RandomStream root(spec.seed);
  auto rs_left = root.substream(0);
  auto rs_right = root.substream(1);

  Matrix U, V;
  if (spec.coherence == CoherenceMode::incoherent) {
    U = haar_basis(spec.M, L, rs_left);
    V = haar_basis(spec.N, L, rs_right);
  } else {
    const Index scale = spec.coherence_rank;
    if (scale < 1)
      throw std::invalid_argument("generate: coherence_rank must be positive");
    auto spike_sq = [scale](Scalar target, Index dim) {
      // mu = (dim / scale) * max row norm^2, so the spike carries
      // target * scale / dim of the leading column's energy.
      return target * static_cast<Scalar>(scale) / static_cast<Scalar>(dim);
    };
    if (spec.mu_target > 0) {
      const Scalar w = spike_sq(spec.mu_target, spec.M);
      if (w > 1)
        throw std::invalid_argument(
            "generate: mu target exceeds M / coherence_rank");
      U = spiked_basis(spec.M, L, w, rs_left);
    } else {
      U = haar_basis(spec.M, L, rs_left);
    }
    if (spec.nu_target > 0) {
      const Scalar w = spike_sq(spec.nu_target, spec.N);
      if (w > 1)
        throw std::invalid_argument(
            "generate: nu target exceeds N / coherence_rank");
      V = spiked_basis(spec.N, L, w, rs_right);
    } else {
      V = haar_basis(spec.N, L, rs_right);
    }
  }
  return U * sigma.asDiagonal() * V.transpose();
}

SynthSpec calibrated_spec(Index M, Index N, Index r_ref, Scalar scree_target,
                          Scalar mu_target, Scalar nu_target,
                          std::uint64_t seed) {
  if (r_ref < 1 || r_ref >= std::min(M, N))
    throw std::invalid_argument("calibrated_spec: r_ref out of range");
  if (!(scree_target > 0 && scree_target < 1))
    throw std::invalid_argument("calibrated_spec: target must lie in (0, 1)");

  const Index L = std::min(M, N);
  // scree(r_ref) is monotone decreasing in the decay exponent.
  Scalar lo = 1e-3, hi = 20.0;
  for (int iter = 0; iter < 200; ++iter) {
    const Scalar mid = (lo + hi) / 2;
    if (scree_at(polynomial_spectrum(L, mid), r_ref) > scree_target)
      lo = mid;
    else
      hi = mid;
  }

  SynthSpec spec;
  spec.M = M;
  spec.N = N;
  spec.family = SpectrumFamily::polynomial;
  spec.alpha = (lo + hi) / 2;
  spec.coherence =
      (mu_target > 0 || nu_target > 0) ? CoherenceMode::spiked
                                       : CoherenceMode::incoherent;
  spec.mu_target = mu_target;
  spec.nu_target = nu_target;
  spec.coherence_rank = r_ref;
  spec.seed = seed;
  return spec;
}

SynthSpec yale_like_spec(std::uint64_t seed) {
  return calibrated_spec(2500, 640, 20, 0.033, 4.1137, 2.7068, seed);
}

SynthSpec cardiac_like_spec(std::uint64_t seed) {
  return calibrated_spec(45056, 160, 5, 0.0011, 127.5935, 2.1507, seed);
}

SynthSpec video_like_spec(std::uint64_t seed) {
  return calibrated_spec(518400, 2200, 25, 0.0066, 20.3505, 14.0194, seed);
}

}  // namespace sketchy
