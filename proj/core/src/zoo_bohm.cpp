#include <algorithm>
#include <cmath>
#include <numbers>

#include "build_util.hpp"
#include "lglab/zoo.hpp"
#include "stage_angles.hpp"

namespace lglab {

namespace {

constexpr double kPi = std::numbers::pi;
// Below this a path value counts as unreachable for transport purposes.
constexpr double kUnreachable = 1e-14;

double born_plus(double a) {
  const double c = std::cos(a / 2.0);
  return c * c;
}

}  // namespace

ModelBundle build_bohm(double theta1, double theta2) {
  if (!std::isfinite(theta1) || !std::isfinite(theta2)) throw DomainError("rotation angle must be finite");
  const std::array<double, 4> prepared{0.0, kPi, kPi / 2.0, 3.0 * kPi / 2.0};
  const std::array<double, 2> collapse{0.0, kPi};
  const detail::StagedAngles angles(prepared, collapse, theta1, theta2);

  std::vector<std::string> labels;
  std::array<std::size_t, 3> offset{};
  for (std::size_t s = 0; s < 3; ++s) {
    offset[s] = labels.size();
    for (double a : angles.at(s)) {
      const std::string stem = std::to_string(s) + ":" + detail::angle_text(a) + ":";
      labels.push_back(stem + "+");
      labels.push_back(stem + "-");
    }
  }
  const std::size_t n = labels.size();
  auto space = detail::make_space(std::move(labels));
  // bit 0 is path +, bit 1 is path -.
  auto state = [&](std::size_t s, double a, std::size_t bit) {
    return offset[s] + 2 * angles.index(s, a) + bit;
  };
  auto split = [&](std::size_t s, double a, double p) {
    std::vector<WeightedState> e;
    if (p > 0.0) e.push_back({state(s, a, 0), p});
    if (p < 1.0) e.push_back({state(s, a, 1), 1.0 - p});
    return Distribution::from_entries(space, std::move(e));
  };

  auto model = std::make_shared<OnticModel>(space);
  model->add_preparation("+z", Distribution::point_mass(space, state(0, 0.0, 0)));
  model->add_preparation("-z", Distribution::point_mass(space, state(0, kPi, 1)));
  model->add_preparation("+x", split(0, kPi / 2.0, born_plus(kPi / 2.0)));
  model->add_preparation("-x", split(0, 3.0 * kPi / 2.0, born_plus(3.0 * kPi / 2.0)));

  // Monotone coupling: the path bit changes only as much as the Born
  // marginal requires. Unreachable bits fall back to the new marginal.
  const std::array<double, 2> theta{theta1, theta2};
  for (std::size_t k = 0; k < 2; ++k) {
    std::vector<DistributionPtr> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = detail::delta(space, i);
    for (double a : angles.at(k)) {
      const double next = a + theta[k];
      const double p = born_plus(a);
      const double q = born_plus(next);
      const std::size_t to_plus = state(k + 1, next, 0);
      const std::size_t to_minus = state(k + 1, next, 1);
      auto mix = [&](double w_plus) {
        std::vector<WeightedState> e;
        if (w_plus > 0.0) e.push_back({to_plus, w_plus});
        if (w_plus < 1.0) e.push_back({to_minus, 1.0 - w_plus});
        std::sort(e.begin(), e.end(), [](const auto& x, const auto& y) { return x.state < y.state; });
        return detail::shared(Distribution::from_entries(space, std::move(e)));
      };
      const auto marginal = mix(q);
      DistributionPtr from_plus;
      DistributionPtr from_minus;
      if (p <= kUnreachable) {
        from_plus = marginal;
      } else {
        from_plus = q >= p ? detail::delta(space, to_plus) : mix(q / p);
      }
      if (1.0 - p <= kUnreachable) {
        from_minus = marginal;
      } else {
        from_minus = q <= p ? detail::delta(space, to_minus) : mix((q - p) / (1.0 - p));
      }
      rows[state(k, a, 0)] = from_plus;
      rows[state(k, a, 1)] = from_minus;
    }
    model->add_transformation(k == 0 ? "T1" : "T2", TransformationKernel(space, std::move(rows)));
  }

  std::vector<double> plus(n);
  std::vector<std::array<DistributionPtr, 2>> rows(n);
  for (std::size_t s = 0; s < 3; ++s) {
    const auto up = detail::delta(space, state(s, 0.0, 0));
    const auto down = detail::delta(space, state(s, kPi, 1));
    for (std::size_t j = 0; j < angles.at(s).size(); ++j) {
      plus[offset[s] + 2 * j] = 1.0;
      plus[offset[s] + 2 * j + 1] = 0.0;
      rows[offset[s] + 2 * j] = {up, nullptr};
      rows[offset[s] + 2 * j + 1] = {nullptr, down};
    }
  }
  model->add_measurement("Z", detail::binary_measurement("Z", space, plus, rows));

  model->set_metadata("family", "bohm-two-path");
  model->set_metadata("theta1", detail::angle_text(theta1));
  model->set_metadata("theta2", detail::angle_text(theta2));
  model->set_metadata("transport_rule", "monotone minimal-transport coupling (surrogate)");

  ModelBundle b;
  b.name = "bohm-two-path";
  b.model = model;
  b.quantity_classes.add("Z", {"Z"});
  b.protocols.add("three", Protocol{"+z", {{"", "Z"}, {"T1", "Z"}, {"T2", "Z"}}});
  b.arrangements.add("lg", ArrangementSpec{"+z", "T1", "T2", "Z", "Z", "Z"});
  return b;
}

LgArrangement build_bohm_arrangement(double theta1, double theta2) {
  return build_bohm(theta1, theta2).arrangement();
}

}  // namespace lglab
