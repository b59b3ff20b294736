#include "nnls.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lglab::detail {

namespace {

// Unconstrained least squares restricted to the passive columns, solved on
// the Gram system.
Eigen::VectorXd solve_passive(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs,
                              const std::vector<bool>& passive) {
  std::vector<Eigen::Index> idx;
  for (std::size_t j = 0; j < passive.size(); ++j) {
    if (passive[j]) idx.push_back(static_cast<Eigen::Index>(j));
  }
  Eigen::VectorXd z = Eigen::VectorXd::Zero(rhs.size());
  if (idx.empty()) return z;
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd g(k, k);
  Eigen::VectorXd r(k);
  for (Eigen::Index a = 0; a < k; ++a) {
    r(a) = rhs(idx[a]);
    for (Eigen::Index b = 0; b < k; ++b) g(a, b) = gram(idx[a], idx[b]);
  }
  const Eigen::VectorXd sol = g.completeOrthogonalDecomposition().solve(r);
  for (Eigen::Index a = 0; a < k; ++a) z(idx[a]) = sol(a);
  return z;
}

}  // namespace

NnlsSolution nnls(std::span<const std::vector<double>> columns, std::span<const double> target,
                  std::size_t max_iterations) {
  const auto n = static_cast<Eigen::Index>(columns.size());
  const auto m = static_cast<Eigen::Index>(target.size());
  NnlsSolution out;
  if (n == 0) {
    double r = 0.0;
    for (double v : target) r += v * v;
    out.residual_l2 = std::sqrt(r);
    out.converged = true;
    return out;
  }
  Eigen::MatrixXd a(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (static_cast<Eigen::Index>(columns[j].size()) != m) {
      throw std::invalid_argument("nnls: column length mismatch");
    }
    for (Eigen::Index i = 0; i < m; ++i) a(i, j) = columns[j][i];
  }
  const Eigen::Map<const Eigen::VectorXd> b(target.data(), m);
  const Eigen::MatrixXd gram = a.transpose() * a;
  const Eigen::VectorXd atb = a.transpose() * b;
  if (max_iterations == 0) max_iterations = 30 * static_cast<std::size_t>(n) + 10;

  const double tol = 1e-14 * std::max(1.0, gram.diagonal().maxCoeff());
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(n, false);

  for (out.iterations = 0; out.iterations < max_iterations; ++out.iterations) {
    const Eigen::VectorXd grad = atb - gram * w;
    Eigen::Index best = -1;
    double best_val = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && grad(j) > best_val) {
        best_val = grad(j);
        best = j;
      }
    }
    if (best < 0) {
      out.converged = true;
      break;
    }
    passive[best] = true;
    for (;;) {
      Eigen::VectorXd z = solve_passive(gram, atb, passive);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && z(j) <= 0.0) feasible = false;
      }
      if (feasible) {
        w = z;
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && z(j) <= 0.0) alpha = std::min(alpha, w(j) / (w(j) - z(j)));
      }
      w += alpha * (z - w);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j] && w(j) <= tol) {
          passive[j] = false;
          w(j) = 0.0;
        }
      }
    }
  }
  out.weights.assign(w.data(), w.data() + n);
  out.residual_l2 = (a * w - b).norm();
  return out;
}

}  // namespace lglab::detail
