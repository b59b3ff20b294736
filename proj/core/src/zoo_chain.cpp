#include <cmath>

#include "build_util.hpp"
#include "lglab/zoo.hpp"
#include "stage_angles.hpp"

namespace lglab {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

TransformationKernel flip_kernel(const SpacePtr& space, double p) {
  const std::array<double, 2> stay{1.0 - p, p};
  const std::array<double, 2> flip{p, 1.0 - p};
  return TransformationKernel(space, {detail::shared(Distribution::from_dense(space, stay)),
                                      detail::shared(Distribution::from_dense(space, flip))});
}

}  // namespace

ModelBundle build_superselected(double p1, double p2) {
  check_probability(p1, "p1");
  check_probability(p2, "p2");
  auto space = detail::make_space({"0", "1"});
  auto model = std::make_shared<OnticModel>(space);
  model->add_preparation("+z", Distribution::point_mass(space, 0));
  model->add_preparation("-z", Distribution::point_mass(space, 1));
  const std::array<double, 2> half{0.5, 0.5};
  model->add_preparation("mixed", Distribution::from_dense(space, half));
  model->add_transformation("T1", flip_kernel(space, p1));
  model->add_transformation("T2", flip_kernel(space, p2));
  model->add_measurement("Z", detail::binary_readout("Z", space, {1.0, 0.0}));
  model->set_metadata("family", "superselected");
  model->set_metadata("p1", detail::angle_text(p1));
  model->set_metadata("p2", detail::angle_text(p2));

  ModelBundle b;
  b.name = "superselected";
  b.model = model;
  b.quantity_classes.add("Z", {"Z"});
  b.protocols.add("three", Protocol{"+z", {{"", "Z"}, {"T1", "Z"}, {"T2", "Z"}}});
  b.arrangements.add("lg", ArrangementSpec{"+z", "T1", "T2", "Z", "Z", "Z"});
  return b;
}

LgArrangement build_superselected_arrangement(double p1, double p2) {
  return build_superselected(p1, p2).arrangement();
}

ModelBundle build_classical_chain() {
  enum : std::size_t { kPa, kPb, kMa, kMb };
  auto space = detail::make_space({"+a", "+b", "-a", "-b"});
  auto model = std::make_shared<OnticModel>(space);
  auto dist = [&](std::array<double, 4> w) { return Distribution::from_dense(space, w); };
  model->add_preparation("+a", Distribution::point_mass(space, kPa));
  model->add_preparation("-a", Distribution::point_mass(space, kMa));
  model->add_preparation("+mix", dist({0.5, 0.5, 0.0, 0.0}));
  model->add_preparation("-mix", dist({0.0, 0.0, 0.5, 0.5}));
  model->add_preparation("uniform", dist({0.25, 0.25, 0.25, 0.25}));

  // Macrostate flips keep the micro letter. Rates depend on the macrostate only,
  // so re-randomizing the microstate is operationally invisible.
  auto hop = [&](std::array<double, 4> flip) {
    std::vector<DistributionPtr> rows;
    const std::array<std::size_t, 4> partner{kMa, kMb, kPa, kPb};
    for (std::size_t s = 0; s < 4; ++s) {
      std::array<double, 4> w{};
      w[s] = 1.0 - flip[s];
      w[partner[s]] = flip[s];
      rows.push_back(detail::shared(dist(w)));
    }
    return TransformationKernel(space, std::move(rows));
  };
  model->add_transformation("T1", hop({0.1, 0.1, 0.2, 0.2}));
  model->add_transformation("T2", hop({0.35, 0.35, 0.05, 0.05}));

  const std::vector<double> plus{1.0, 1.0, 0.0, 0.0};
  model->add_measurement("Z", detail::binary_readout("Z", space, plus));
  const auto shuffle_plus = detail::shared(dist({0.5, 0.5, 0.0, 0.0}));
  const auto shuffle_minus = detail::shared(dist({0.0, 0.0, 0.5, 0.5}));
  model->add_measurement(
      "Z_shuffle",
      detail::binary_measurement("Z_shuffle", space, plus,
                                 {{shuffle_plus, nullptr},
                                  {shuffle_plus, nullptr},
                                  {nullptr, shuffle_minus},
                                  {nullptr, shuffle_minus}}));
  model->set_metadata("family", "classical-chain");

  ModelBundle b;
  b.name = "classical-chain";
  b.model = model;
  b.quantity_classes.add("Z", {"Z", "Z_shuffle"});
  b.protocols.add("three", Protocol{"uniform", {{"", "Z"}, {"T1", "Z"}, {"T2", "Z"}}});
  b.arrangements.add("lg", ArrangementSpec{"uniform", "T1", "T2", "Z", "Z", "Z"});
  b.arrangements.add("lg-shuffle", ArrangementSpec{"uniform", "T1", "T2", "Z_shuffle", "Z_shuffle", "Z"});
  return b;
}

}  // namespace lglab
