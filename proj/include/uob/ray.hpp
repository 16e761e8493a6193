#pragma once

// Single-qubit rays: unit vectors in C^2 up to global phase, stored in a
// canonical representative so value comparison and hashing stay cheap.

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

namespace uob {

using Complex = std::complex<double>;

// Comparison tolerances used across state synthesis, verification, and
// recovery. The defaults are deliberately far apart: rays drawn at random
// land either well inside ray_eq or far outside the ambiguity band around it.
struct Tolerances {
  double ray_eq = 1e-9;        // two rays count as the same ray
  double gram_pass = 1e-10;    // largest acceptable off-diagonal overlap
  double hat_pair = 1e-8;      // cluster matches its orthogonal partner
  double certainty = 1e-9;     // measurement branch counts as deterministic
  double prob_sum = 1e-12;     // Born probabilities must sum to 1 this tightly
  double unit_norm = 1e-12;    // norm drift allowed before renormalizing fails
  double cluster_ambiguity_factor = 100;  // no-mans-land width around ray_eq
};

// components smaller than this are treated as exact zeros when choosing the
// phase anchor
inline constexpr double kZeroAmplitude = 1e-12;

class QubitRay {
 public:
  // canonicalizes: unit norm, and the first component that is not a numeric
  // zero is made real and positive, fixing the global phase
  QubitRay(Complex zero_component, Complex one_component)
      : a_(zero_component), b_(one_component) {
    double norm = std::sqrt(std::norm(a_) + std::norm(b_));
    if (norm < kZeroAmplitude) {
      throw std::invalid_argument("ray components are all zero");
    }
    a_ /= norm;
    b_ /= norm;
    Complex anchor = std::abs(a_) > kZeroAmplitude ? a_ : b_;
    Complex phase = std::conj(anchor) / std::abs(anchor);
    a_ *= phase;
    b_ *= phase;
    if (std::abs(a_) <= kZeroAmplitude) a_ = 0;
  }

  static QubitRay zero() { return QubitRay(1, 0); }
  static QubitRay one() { return QubitRay(0, 1); }

  Complex amp0() const { return a_; }
  Complex amp1() const { return b_; }

  // the unique ray orthogonal to this one
  QubitRay hat() const { return QubitRay(-std::conj(b_), std::conj(a_)); }

  friend Complex inner(const QubitRay& x, const QubitRay& y) {
    return std::conj(x.a_) * y.a_ + std::conj(x.b_) * y.b_;
  }

 private:
  Complex a_, b_;
};

inline double overlap(const QubitRay& x, const QubitRay& y) {
  return std::abs(inner(x, y));
}

// Fubini-Study sine distance, 0 for equal rays and 1 for orthogonal ones.
// Computed as the norm of y's component orthogonal to x: the direct
// sqrt(1 - overlap^2) form loses half the mantissa near zero, which matters
// because equality tolerances sit far below sqrt(machine epsilon).
inline double fs_distance(const QubitRay& x, const QubitRay& y) {
  Complex p = inner(x, y);
  Complex w0 = y.amp0() - p * x.amp0();
  Complex w1 = y.amp1() - p * x.amp1();
  return std::min(1.0, std::sqrt(std::norm(w0) + std::norm(w1)));
}

inline bool same_ray(const QubitRay& x, const QubitRay& y,
                     double tolerance = Tolerances{}.ray_eq) {
  return fs_distance(x, y) <= tolerance;
}

namespace detail {

// uniform in [0, 1) built directly from the generator's bits so results do
// not depend on the standard library's distribution implementations
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

inline std::pair<double, double> gaussian_pair(std::mt19937_64& rng) {
  double u1 = 0;
  while (u1 <= 0) u1 = unit_uniform(rng);
  double u2 = unit_uniform(rng);
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::acos(-1.0) * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace detail

// Haar-uniform random ray: four independent gaussians, normalized
inline QubitRay random_ray(std::mt19937_64& rng) {
  auto [x0, y0] = detail::gaussian_pair(rng);
  auto [x1, y1] = detail::gaussian_pair(rng);
  return QubitRay(Complex(x0, y0), Complex(x1, y1));
}

}  // namespace uob
