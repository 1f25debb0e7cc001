#include "bellsim/density_matrix.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>

namespace bellsim {

DensityMatrix::DensityMatrix(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 2)
    throw std::invalid_argument("density matrix must be square with dimension >= 2");
  Eigen::Index dim = matrix_.rows();
  while (dim > 1) {
    if (dim % 2 != 0)
      throw std::invalid_argument("density matrix dimension must be a power of two");
    dim /= 2;
    ++qubits_;
  }
  const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermiticityTolerance)
    throw std::invalid_argument("density matrix is not Hermitian (deviation " +
                                std::to_string(herm) + ")");
  const double trace_err = std::abs(matrix_.trace() - std::complex<double>{1.0, 0.0});
  if (trace_err > kTraceTolerance)
    throw std::invalid_argument("density matrix trace differs from 1 by " +
                                std::to_string(trace_err));
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_);
  return solver.eigenvalues().minCoeff();
}

std::string DensityMatrix::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["qubits"] = qubits_;
  j["basis"] = "tensor order over parties, H=0 V=1";
  nlohmann::ordered_json re = nlohmann::ordered_json::array();
  nlohmann::ordered_json im = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < matrix_.rows(); ++r) {
    nlohmann::ordered_json re_row = nlohmann::ordered_json::array();
    nlohmann::ordered_json im_row = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < matrix_.cols(); ++c) {
      re_row.push_back(matrix_(r, c).real());
      im_row.push_back(matrix_(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j.dump();
}

DensityMatrix DensityMatrix::from_pure(const Eigen::VectorXcd& ket) {
  const double n = ket.norm();
  if (n <= 0.0) throw std::invalid_argument("cannot build a density matrix from a zero ket");
  const Eigen::VectorXcd unit = ket / n;
  return DensityMatrix(unit * unit.adjoint());
}

}  // namespace bellsim
