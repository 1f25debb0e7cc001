#pragma once

#include <map>
#include <optional>
#include <string>

#include "bellsim/circuit.hpp"
#include "bellsim/density_matrix.hpp"

namespace bellsim {

// Photon count per detector id; only detectors that fired are stored.
using DetectionPattern = std::map<int, int>;

// Compact names: "D13" is a coincidence of D1 and D3, "D11" two photons at
// D1. Detector ids above 9 are joined with commas ("D1,D10").
std::string pattern_name(const DetectionPattern& pattern);
DetectionPattern pattern_from_name(const std::string& name);

struct OutcomeDistribution {
  std::map<DetectionPattern, double> entries;

  double total() const;
  double probability_of(const DetectionPattern& pattern) const;
};

std::string distribution_csv(const OutcomeDistribution& dist);
std::string distribution_json(const OutcomeDistribution& dist);

enum class BsmVerdict { PhiPlus, PhiMinus, PsiPlus, PsiMinus, Inconclusive };

std::string verdict_name(BsmVerdict v);

// Photon-number-resolving, temporal-bin-blind outcome distribution of the
// circuit output `state`. Every occupied port must be wired to a detector.
OutcomeDistribution measure(const PhotonicState& state, const CircuitSpec& spec);

// Table-driven two-photon verdict. The symmetric scheme resolves phi+/phi-
// (D13/D24 vs D14/D23), the standard scheme psi+/psi- (D12/D34 vs D14/D23);
// every other pattern is Inconclusive.
BsmVerdict classify(const DetectionPattern& pattern, Scheme scheme);

struct HeraldResult {
  std::optional<DensityMatrix> state;  // empty when the projection never succeeds
  double probability = 0.0;
};

// Projects the preparation output onto exactly one photon per output path,
// traces out the temporal bins and renormalizes. Returns the polarization
// density matrix on the output paths and the success probability.
HeraldResult heralded_state(const PhotonicState& state, const CircuitSpec& spec);

}  // namespace bellsim
