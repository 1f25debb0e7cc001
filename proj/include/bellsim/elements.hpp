#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bellsim/transfer.hpp"

namespace bellsim {

// Wavepacket overlap model for the scanned optical delay. The overlap between
// the delayed and undelayed wavepackets is gamma(l) = exp(-l^2 / (2 lc^2));
// gamma may also be pinned directly, bypassing the Gaussian model.
struct DelayModel {
  double l = 0.0;
  double coherence_length = 0.085;
  std::optional<double> gamma_override;

  static DelayModel from_delay(double l, double coherence_length);
  static DelayModel from_gamma(double gamma);

  double gamma() const;
  DelayModel at_delay(double new_l) const;  // same lc, override cleared
};

namespace elements {

// Polarizing beamsplitter with transmit/reflect phase convention 1 / i:
//   in1 H -> out1 H,  in1 V -> i * out2 V,
//   in2 H -> out2 H,  in2 V -> i * out1 V.
// The double-reflection product i*i = -1 carries the phi -> phi-with-flipped-
// sign behaviour of the first splitting stage. All four labels must differ.
TransferMap pbs(const std::string& in1, const std::string& in2,
                const std::string& out1, const std::string& out2,
                const std::vector<int>& bins = {0});

// Half-wave plate at angle theta (degrees) on one path:
//   H -> cos(2t) H + sin(2t) V,  V -> sin(2t) H - cos(2t) V.
// 45 deg swaps H and V; 22.5 deg maps H -> (H+V)/sqrt2, V -> (H-V)/sqrt2.
TransferMap hwp(double theta_deg, const std::string& path,
                const std::vector<int>& bins = {0});

// Symmetric 50:50 beamsplitter, polarization independent:
//   in1 -> (out1 + i out2)/sqrt2,  in2 -> (out2 + i out1)/sqrt2.
TransferMap bs(const std::string& in1, const std::string& in2,
               const std::string& out1, const std::string& out2,
               const std::vector<int>& bins = {0});

// Circulator pair: lossless phase-free relabeling path_a^dag <-> path_b^dag.
TransferMap circulator_exchange(const std::string& path_a, const std::string& path_b,
                                const std::vector<int>& bins = {0});

// Optical delay on one path: bin 0 -> gamma * bin 0 + sqrt(1-gamma^2) * bin 1
// for both polarizations. Isometry into the enlarged mode set; the target
// bin 1 must not already carry photons of this path.
TransferMap delay(const DelayModel& model, const std::string& path);

}  // namespace elements
}  // namespace bellsim
