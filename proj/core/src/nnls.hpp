#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lglab::detail {

struct NnlsSolution {
  std::vector<double> weights;
  double residual_l2 = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Lawson-Hanson active-set NNLS: min ||A w - b||_2 subject to w >= 0.
/// `columns` holds A column-wise; all columns and b share the same length.
NnlsSolution nnls(std::span<const std::vector<double>> columns, std::span<const double> target,
                  std::size_t max_iterations = 0);

}  // namespace lglab::detail
