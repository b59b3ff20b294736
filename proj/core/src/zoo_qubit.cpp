#include <cmath>
#include <numbers>

#include "build_util.hpp"
#include "lglab/zoo.hpp"
#include "stage_angles.hpp"

namespace lglab {

namespace {

constexpr double kPi = std::numbers::pi;

void check_angle(double theta) {
  if (!std::isfinite(theta)) throw DomainError("rotation angle must be finite");
}

}  // namespace

ModelBundle build_qubit(double theta1, double theta2) {
  check_angle(theta1);
  check_angle(theta2);
  const std::array<double, 4> prepared{0.0, kPi, kPi / 2.0, 3.0 * kPi / 2.0};
  const detail::StagedAngles angles(prepared, prepared, theta1, theta2);

  std::vector<std::string> labels;
  std::array<std::size_t, 3> offset{};
  for (std::size_t s = 0; s < 3; ++s) {
    offset[s] = labels.size();
    for (double a : angles.at(s)) labels.push_back(std::to_string(s) + ":" + detail::angle_text(a));
  }
  auto space = detail::make_space(labels);
  const std::size_t n = labels.size();
  auto state = [&](std::size_t s, double a) { return offset[s] + angles.index(s, a); };

  auto model = std::make_shared<OnticModel>(space);
  model->add_preparation("+z", Distribution::point_mass(space, state(0, 0.0)));
  model->add_preparation("-z", Distribution::point_mass(space, state(0, kPi)));
  model->add_preparation("+x", Distribution::point_mass(space, state(0, kPi / 2.0)));
  model->add_preparation("-x", Distribution::point_mass(space, state(0, 3.0 * kPi / 2.0)));

  const std::array<double, 2> theta{theta1, theta2};
  for (std::size_t k = 0; k < 2; ++k) {
    std::vector<std::size_t> target(n);
    for (std::size_t i = 0; i < n; ++i) target[i] = i;
    for (std::size_t j = 0; j < angles.at(k).size(); ++j) {
      target[offset[k] + j] = state(k + 1, angles.at(k)[j] + theta[k]);
    }
    model->add_transformation(k == 0 ? "T1" : "T2", detail::map_kernel(space, target));
  }

  std::vector<double> z_plus(n), x_plus(n);
  std::vector<std::array<DistributionPtr, 2>> z_rows(n), x_rows(n);
  for (std::size_t s = 0; s < 3; ++s) {
    const auto zp = detail::delta(space, state(s, 0.0));
    const auto zm = detail::delta(space, state(s, kPi));
    const auto xp = detail::delta(space, state(s, kPi / 2.0));
    const auto xm = detail::delta(space, state(s, 3.0 * kPi / 2.0));
    for (std::size_t j = 0; j < angles.at(s).size(); ++j) {
      const double a = angles.at(s)[j];
      const std::size_t i = offset[s] + j;
      const double c = std::cos(a / 2.0);
      z_plus[i] = c * c;
      x_plus[i] = (1.0 + std::sin(a)) / 2.0;
      z_rows[i] = {zp, zm};
      x_rows[i] = {xp, xm};
    }
  }
  model->add_measurement("Z", detail::binary_measurement("Z", space, z_plus, z_rows));
  model->add_measurement("X", detail::binary_measurement("X", space, x_plus, x_rows));

  model->set_metadata("family", "qubit");
  model->set_metadata("theta1", detail::angle_text(theta1));
  model->set_metadata("theta2", detail::angle_text(theta2));
  model->set_metadata("ontic_states", "protocol-reachable pure states, stage tagged");

  ModelBundle b;
  b.name = "qubit";
  b.model = model;
  b.quantity_classes.add("Z", {"Z"});
  b.quantity_classes.add("X", {"X"});
  b.protocols.add("three", Protocol{"+z", {{"", "Z"}, {"T1", "Z"}, {"T2", "Z"}}});
  b.arrangements.add("lg", ArrangementSpec{"+z", "T1", "T2", "Z", "Z", "Z"});
  return b;
}

LgArrangement build_qubit_arrangement(double theta1, double theta2) {
  return build_qubit(theta1, theta2).arrangement();
}

}  // namespace lglab
