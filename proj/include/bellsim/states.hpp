#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "bellsim/state.hpp"

namespace bellsim {

enum class Bell { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

std::string bell_name(Bell b);
Bell bell_from_name(const std::string& name);  // "phi+", "phi-", "psi+", "psi-"

// Two-photon Bell state on two input paths, temporal bin 0.
PhotonicState bell_state(Bell which, const std::string& path_a = "a",
                         const std::string& path_b = "b");

// Single-qubit polarization ket for one of H, V, D, A, R, L
// (D/A = (H±V)/sqrt2, R/L = (H±iV)/sqrt2).
Eigen::Vector2cd pol_ket(char c);

// Product of single-photon polarization states, one character per party.
PhotonicState product_state(const std::string& pols,
                            const std::vector<std::string>& paths);

// N-photon GHZ state (|H..H> ± |V..V>)/sqrt2 on the given paths.
PhotonicState ghz_state(int parties, bool plus, const std::vector<std::string>& paths);

// Qubit-space target vectors (basis order HH..H, ..., VV..V).
Eigen::VectorXcd bell_vector(Bell which);
Eigen::VectorXcd ghz_vector(int parties, bool plus);

// Parses "phi+", "psi-", "ghz+", "ghz-" or a product string like "DD" / "DAD"
// into an input state on `paths` (the circuit input paths). Product strings
// must have one character per path.
PhotonicState named_state(const std::string& name, const std::vector<std::string>& paths);

}  // namespace bellsim
