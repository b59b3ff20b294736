#pragma once

// Small constructors shared by the built-in models.

#include <array>
#include <string>
#include <vector>

#include "lglab/ontic.hpp"

namespace lglab::detail {

inline SpacePtr make_space(std::vector<std::string> labels) {
  return std::make_shared<const StateSpace>(std::move(labels));
}

inline DistributionPtr delta(const SpacePtr& space, std::size_t state) {
  return std::make_shared<const Distribution>(Distribution::point_mass(space, state));
}

inline DistributionPtr shared(Distribution d) {
  return std::make_shared<const Distribution>(std::move(d));
}

/// Deterministic kernel sending state i to target[i].
inline TransformationKernel map_kernel(const SpacePtr& space, const std::vector<std::size_t>& target) {
  std::vector<DistributionPtr> rows;
  rows.reserve(target.size());
  for (std::size_t t : target) rows.push_back(delta(space, t));
  return TransformationKernel(space, std::move(rows));
}

/// Outcomes "+1" and "-1". rows[s] holds the update for (+1, -1); a row may
/// be null where that outcome has zero probability.
inline Measurement binary_measurement(std::string label, const SpacePtr& space,
                                      const std::vector<double>& p_plus,
                                      const std::vector<std::array<DistributionPtr, 2>>& rows) {
  std::vector<double> table;
  table.reserve(2 * p_plus.size());
  std::vector<DistributionPtr> update;
  update.reserve(2 * p_plus.size());
  for (std::size_t s = 0; s < p_plus.size(); ++s) {
    table.push_back(p_plus[s]);
    table.push_back(1.0 - p_plus[s]);
    update.push_back(rows[s][0]);
    update.push_back(rows[s][1]);
  }
  return Measurement(std::move(label), ResponseFunction(space, {"+1", "-1"}, std::move(table)),
                     MeasurementUpdate(space, 2, std::move(update)));
}

/// Binary measurement with the identity update.
inline Measurement binary_readout(std::string label, const SpacePtr& space,
                                  const std::vector<double>& p_plus) {
  std::vector<std::array<DistributionPtr, 2>> rows;
  rows.reserve(p_plus.size());
  for (std::size_t s = 0; s < p_plus.size(); ++s) {
    auto d = delta(space, s);
    rows.push_back({d, d});
  }
  return binary_measurement(std::move(label), space, p_plus, rows);
}

}  // namespace lglab::detail
