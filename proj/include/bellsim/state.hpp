#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "bellsim/mode.hpp"

namespace bellsim {

using Complex = std::complex<double>;

// Photon count per mode; zero counts are never stored, keys are in canonical
// mode order by construction of std::map.
using Occupation = std::map<ModeLabel, int>;

// Photon count per detector-facing port (temporal bins already summed out).
using PortPattern = std::map<PortKey, int>;

struct FockTerm {
  Occupation occupation;
  Complex amplitude;
};

// Amplitudes below a relative weight of kMergeTolerance are discarded after
// term merging; all circuit amplitudes are dyadic fractions of sqrt(2), so
// genuine cancellation is exact up to rounding.
inline constexpr double kMergeTolerance = 1e-12;

// A superposition of multimode Fock occupation vectors with fixed total
// photon number. Amplitudes follow the orthonormal-basis convention: a term
// with n photons in one mode, created by (a^dag)^n / sqrt(n!), has unit
// weight, so probabilities are plain |amplitude|^2.
//
// Immutable after construction; all operations below are pure functions.
class PhotonicState {
 public:
  using TermMap = std::map<Occupation, Complex>;

  PhotonicState() = default;
  PhotonicState(TermMap terms, int photons);

  const TermMap& terms() const { return terms_; }
  int photons() const { return photons_; }
  bool empty() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  double norm() const;  // sqrt of the summed |amplitude|^2
  PhotonicState normalized() const;

  Complex amplitude_of(const Occupation& occ) const;

  // Linear-combination helpers; results may be unnormalized.
  friend PhotonicState operator*(Complex scale, const PhotonicState& s);
  friend PhotonicState operator+(const PhotonicState& a, const PhotonicState& b);
  friend PhotonicState operator-(const PhotonicState& a, const PhotonicState& b);

 private:
  TermMap terms_;
  int photons_ = 0;
};

// Builds a canonical normalized state from raw terms. Rejects empty input,
// non-positive photon counts, mixed total photon numbers and zero-norm input.
// When original_norm is non-null it receives the pre-normalization norm.
PhotonicState make_state(const std::vector<FockTerm>& terms,
                         double* original_norm = nullptr);

// Same as make_state but with amplitudes given as creation-operator monomial
// coefficients, i.e. the literal prefactors of products like g_H^dag2; each
// coefficient is multiplied by sqrt(prod n!) before normalization.
PhotonicState from_monomials(const std::vector<FockTerm>& monomials,
                             double* original_norm = nullptr);

// Conjugate-linear in the first argument. States with different total photon
// numbers have inner product 0 by definition.
Complex inner_product(const PhotonicState& a, const PhotonicState& b);

// Probability of observing `pattern` with photon-number-resolving detectors
// that do not resolve the temporal bin: the summed |amplitude|^2 over all
// temporal assignments reducing to the pattern. With trace_out_temporal set
// to false only bin-0 occupations contribute. The pattern photon count must
// equal the state photon count.
double pattern_probability(const PhotonicState& state, const PortPattern& pattern,
                           bool trace_out_temporal = true);

// Debug serialization: {"schema_version":1,"photons":n,"terms":{occ:[re,im]}}
// with occupation keys like "a:H:0*1;b:H:0*1". Stable ordering, suitable for
// golden tests.
std::string to_debug_json(const PhotonicState& state);

// sqrt(prod n_m!) over an occupation; the conversion factor between
// operator-monomial coefficients and orthonormal-basis amplitudes.
double sqrt_factorial_weight(const Occupation& occ);

}  // namespace bellsim
