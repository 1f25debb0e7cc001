#pragma once

#include <Eigen/Dense>
#include <string>

namespace bellsim {

// An N-qubit polarization density operator. Basis order is the tensor order
// of the parties with H = 0, V = 1, so for two qubits: HH, HV, VH, VV.
class DensityMatrix {
 public:
  static constexpr double kHermiticityTolerance = 1e-10;
  static constexpr double kTraceTolerance = 1e-10;

  explicit DensityMatrix(Eigen::MatrixXcd matrix);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  int qubits() const { return qubits_; }
  Eigen::Index dimension() const { return matrix_.rows(); }

  double min_eigenvalue() const;
  std::string to_json() const;

  static DensityMatrix from_pure(const Eigen::VectorXcd& ket);

 private:
  Eigen::MatrixXcd matrix_;
  int qubits_ = 0;
};

}  // namespace bellsim
