#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "bellsim/state.hpp"

namespace bellsim {

// A linear map on creation operators: modes_in[i]^dag -> sum_j U(j,i) modes_out[j]^dag.
// U must be an isometry (columns orthonormal within 1e-12); square maps are
// unitary. Modes not listed in modes_in pass through a state unchanged.
class TransferMap {
 public:
  static constexpr double kIsometryTolerance = 1e-12;

  // The empty map: no declared modes, every mode passes through (identity).
  TransferMap() = default;

  TransferMap(std::vector<ModeLabel> modes_in, std::vector<ModeLabel> modes_out,
              Eigen::MatrixXcd matrix);

  const std::vector<ModeLabel>& modes_in() const { return modes_in_; }
  const std::vector<ModeLabel>& modes_out() const { return modes_out_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  bool is_square() const { return matrix_.rows() == matrix_.cols(); }
  double isometry_deviation() const;  // max |(U^dag U - I)_ij|

  // Index of a mode in modes_in, or -1 when the mode passes through.
  int input_index(const ModeLabel& m) const;

 private:
  std::vector<ModeLabel> modes_in_;
  std::vector<ModeLabel> modes_out_;
  Eigen::MatrixXcd matrix_;
};

// Substitutes every creation operator by its image, expands the products and
// merges like terms. Norm is preserved within 1e-12 for isometric maps.
PhotonicState apply_transfer(const PhotonicState& state, const TransferMap& map);

// Single map equivalent to applying `first` then `second`. Labels produced by
// `first` are treated as internal wires: they are not inputs of the composite,
// so the equivalence holds for states carrying no amplitude on those labels
// (always true for circuit states, whose wire labels are fresh).
TransferMap compose(const TransferMap& first, const TransferMap& second);
TransferMap compose(std::span<const TransferMap> chain);

TransferMap identity_map(const std::vector<ModeLabel>& modes);

}  // namespace bellsim
