#pragma once

// Structural rewrites of a model that must not change any verdict:
// renaming and reordering ontic states, reordering declared preparations.

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "lglab/ontic.hpp"

namespace lglab::testing {

/// `perm[old] = new` position of each state; labels get `prefix`. When
/// `reverse_preparations` is set, preparations are declared in reverse order.
inline ModelPtr permuted_model(const OnticModel& m, const std::vector<std::size_t>& perm,
                               const std::string& prefix, bool reverse_preparations) {
  const std::size_t n = m.states().size();
  std::vector<std::string> labels(n);
  for (std::size_t s = 0; s < n; ++s) labels[perm[s]] = prefix + m.states().label(s);
  auto space = std::make_shared<const StateSpace>(std::move(labels));
  auto out = std::make_shared<OnticModel>(space);

  auto map_dist = [&](const Distribution& d) {
    std::vector<WeightedState> e;
    for (const auto& w : d.entries()) e.push_back({perm[w.state], w.weight});
    std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.state < b.state; });
    return Distribution::from_entries(space, std::move(e));
  };
  auto map_ptr = [&](const DistributionPtr& p) -> DistributionPtr {
    return p ? std::make_shared<const Distribution>(map_dist(*p)) : nullptr;
  };

  auto names = m.preparations().names();
  if (reverse_preparations) std::reverse(names.begin(), names.end());
  for (const auto& name : names) out->add_preparation(name, map_dist(m.preparation(name)));

  for (const auto& [name, k] : m.transformations()) {
    std::vector<DistributionPtr> rows(n);
    for (std::size_t s = 0; s < n; ++s) rows[perm[s]] = map_ptr(k.row_ptr(s));
    out->add_transformation(name, TransformationKernel(space, std::move(rows)));
  }
  for (const auto& [name, meas] : m.measurements()) {
    const auto& r = meas.response();
    const std::size_t q = r.outcome_count();
    std::vector<double> table(n * q);
    std::vector<DistributionPtr> rows(n * q);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t o = 0; o < q; ++o) {
        table[perm[s] * q + o] = r.probability(s, o);
        rows[perm[s] * q + o] = map_ptr(meas.update().row_ptr(s, o));
      }
    }
    std::vector<double> values;
    if (meas.has_explicit_values()) values = *meas.values();
    out->add_measurement(name, Measurement(meas.label(), ResponseFunction(space, r.outcomes(), table),
                                           MeasurementUpdate(space, q, std::move(rows)), values));
  }
  return out;
}

/// Reverses the state order.
inline std::vector<std::size_t> reversal(std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t s = 0; s < n; ++s) p[s] = n - 1 - s;
  return p;
}

}  // namespace lglab::testing
