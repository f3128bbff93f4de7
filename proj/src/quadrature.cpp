#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "sphgrf/error.hpp"
#include "sphgrf/specfun.hpp"

namespace sgrf {

// Golub-Welsch on the symmetric Jacobi matrix of the W_n recurrence
//   x W_n = (n + 2 lam)/(2(n + lam)) W_{n+1} + n/(2(n + lam)) W_{n-1}.
// The off-diagonal entry k couples degrees k and k+1.
QuadratureRule gauss_gegenbauer(double lambda, int n_nodes) {
  if (n_nodes < 1) throw DomainError("quadrature needs at least one node");
  if (!std::isfinite(lambda) || lambda <= 0.0) throw DomainError("quadrature requires a finite lambda > 0");

  const Eigen::Index n = n_nodes;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const double kk = static_cast<double>(k);
    off(k) = std::sqrt((kk + 1.0) * (kk + 2.0 * lambda) / (4.0 * (kk + lambda) * (kk + 1.0 + lambda)));
  }

  QuadratureRule rule;
  if (n == 1) {
    rule.nodes = {0.0};
    rule.weights = {1.0};
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Gauss-Gegenbauer eigenvalue iteration did not converge for " +
                         std::to_string(n_nodes) + " nodes");
  }
  rule.nodes.resize(n_nodes);
  rule.weights.resize(n_nodes);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = v0 * v0;
    total += rule.weights[i];
  }
  for (double& w : rule.weights) w /= total;
  // The spectrum is symmetric about 0; enforce it exactly.
  for (int i = 0; i < n_nodes / 2; ++i) {
    const int j = n_nodes - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (n_nodes % 2 == 1) rule.nodes[n_nodes / 2] = 0.0;
  for (int i = 1; i < n_nodes; ++i) {
    if (!(rule.nodes[i] > rule.nodes[i - 1])) throw NumericalError("quadrature nodes are not strictly increasing");
  }
  return rule;
}

}  // namespace sgrf
