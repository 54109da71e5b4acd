#include <cmath>
#include <stdexcept>

#include "graphon/errors.hpp"
#include "graphon/estimators.hpp"

namespace graphon {

namespace {

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()));
  const Eigen::VectorXd mu = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * mu.asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::MatrixXd project_box(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd w = m.cwiseMax(0.0).cwiseMin(1.0);
  w.diagonal().setOnes();
  return w;
}

}  // namespace

SdpResult sdp_community(const AdjacencyMatrix& a, double p, double q, const SdpControls& controls) {
  const Eigen::Index n = a.size();
  if (!(p > q)) throw std::invalid_argument("sdp_community: need p > q");
  if (n > kSdpMaxSize) throw GuardError("sdp_community: n exceeds " + std::to_string(kSdpMaxSize));
  if (controls.max_iterations < 1 || !(controls.penalty > 0) || !(controls.tolerance > 0))
    throw std::invalid_argument("sdp_community: bad controls");

  const Eigen::MatrixXd b = a.values().array() - 0.5 * (p + q);
  SdpResult result;
  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd z;
  double rho = controls.penalty;
  const double scale = static_cast<double>(std::max<Eigen::Index>(n, 1));
  for (int it = 1; it <= controls.max_iterations; ++it) {
    z = project_psd(w - u + b / rho);
    const Eigen::MatrixXd w_prev = w;
    w = project_box(z + u);
    u += z - w;
    const double primal = (z - w).norm() / scale;
    const double dual = rho * (w - w_prev).norm() / scale;
    result.primal_residuals.push_back(primal);
    result.dual_residuals.push_back(dual);
    result.iterations = it;
    if (primal + dual < controls.tolerance) {
      result.converged = true;
      break;
    }
    if (controls.adapt_penalty) {
      if (primal > 10.0 * dual) {
        rho *= 2.0;
        u /= 2.0;
      } else if (dual > 10.0 * primal) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }
  result.Zhat = w;
  return result;
}

}  // namespace graphon
