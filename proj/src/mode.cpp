#include "bellsim/mode.hpp"

#include <stdexcept>

namespace bellsim {

char pol_char(Pol p) { return p == Pol::H ? 'H' : 'V'; }

Pol pol_from_char(char c) {
  if (c == 'H' || c == 'h') return Pol::H;
  if (c == 'V' || c == 'v') return Pol::V;
  throw std::invalid_argument(std::string("not a polarization: '") + c + "'");
}

std::string ModeLabel::str() const {
  return spatial + ":" + pol_char(pol) + ":" + std::to_string(bin);
}

std::string PortKey::str() const { return spatial + ":" + pol_char(pol); }

}  // namespace bellsim
