#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace bellsim {

enum class Pol : std::uint8_t { H = 0, V = 1 };

char pol_char(Pol p);
Pol pol_from_char(char c);

// One bosonic mode: spatial path, polarization, temporal wavepacket bin.
// Bin 0 is the reference wavepacket; the optical delay populates bin 1.
// The member order (spatial, pol, bin) is the canonical sort key everywhere.
struct ModeLabel {
  std::string spatial;
  Pol pol = Pol::H;
  int bin = 0;

  auto operator<=>(const ModeLabel&) const = default;

  // Canonical textual form "g:H:0", used in the JSON debug dump.
  std::string str() const;
};

inline ModeLabel mode(std::string spatial, Pol pol, int bin = 0) {
  return ModeLabel{std::move(spatial), pol, bin};
}

// A detector-facing port: spatial path and polarization, temporal bin ignored.
// Detector wiring and photon-number patterns are expressed on ports because
// the detectors resolve photon number but not the arrival bin.
struct PortKey {
  std::string spatial;
  Pol pol = Pol::H;

  auto operator<=>(const PortKey&) const = default;

  std::string str() const;
};

inline PortKey port(std::string spatial, Pol pol) {
  return PortKey{std::move(spatial), pol};
}

}  // namespace bellsim
