#include <cmath>
#include <numbers>

#include "build_util.hpp"
#include "lglab/zoo.hpp"
#include "stage_angles.hpp"

namespace lglab {

namespace {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Measurement direction seen from stage s: z rotated back by the accumulated angle.
Vec3 stage_direction(double accumulated) {
  return {-std::sin(accumulated), 0.0, std::cos(accumulated)};
}

}  // namespace

Vec3 fibonacci_point(std::size_t i, std::size_t n) {
  static const double kGolden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = static_cast<double>(i) * kGolden;
  return {r * std::cos(phi), r * std::sin(phi), z};
}

std::vector<double> ks_density(std::size_t n, const Vec3& s) {
  std::vector<double> w(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::max(dot(fibonacci_point(i, n), s), 0.0);
    total += w[i];
  }
  if (!(total > 0.0)) throw DomainError("density direction has no support on the grid");
  for (double& x : w) x /= total;
  return w;
}

double ks_response_probability(std::size_t n, const Vec3& s, const Vec3& m) {
  const auto w = ks_density(n, s);
  double p = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (dot(fibonacci_point(i, n), m) >= 0.0) p += w[i];
  }
  return p;
}

ModelBundle build_ks(std::size_t grid, double theta1, double theta2) {
  if (grid < 100) throw DomainError("ks-sphere grid must have at least 100 points");
  if (!std::isfinite(theta1) || !std::isfinite(theta2)) throw DomainError("rotation angle must be finite");
  const std::size_t n = grid;
  std::vector<Vec3> points(n);
  for (std::size_t i = 0; i < n; ++i) points[i] = fibonacci_point(i, n);

  std::vector<std::string> labels;
  labels.reserve(3 * n);
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(s) + ":n" + std::to_string(i));
  }
  auto space = detail::make_space(std::move(labels));
  auto model = std::make_shared<OnticModel>(space);

  auto density = [&](std::size_t stage, const Vec3& s) {
    const auto w = ks_density(n, s);
    std::vector<WeightedState> entries;
    for (std::size_t i = 0; i < n; ++i) {
      if (w[i] > 0.0) entries.push_back({stage * n + i, w[i]});
    }
    return Distribution::from_entries(space, std::move(entries));
  };

  model->add_preparation("+z", density(0, {0.0, 0.0, 1.0}));
  model->add_preparation("-z", density(0, {0.0, 0.0, -1.0}));
  model->add_preparation("+x", density(0, {1.0, 0.0, 0.0}));
  model->add_preparation("-x", density(0, {-1.0, 0.0, 0.0}));

  for (std::size_t k = 0; k < 2; ++k) {
    std::vector<std::size_t> target(3 * n);
    for (std::size_t i = 0; i < 3 * n; ++i) target[i] = i;
    for (std::size_t i = 0; i < n; ++i) target[k * n + i] = (k + 1) * n + i;
    model->add_transformation(k == 0 ? "T1" : "T2", detail::map_kernel(space, target));
  }

  const std::array<double, 3> accumulated{0.0, theta1, theta1 + theta2};
  std::vector<double> plus(3 * n);
  std::vector<std::array<DistributionPtr, 2>> rows(3 * n);
  for (std::size_t s = 0; s < 3; ++s) {
    const Vec3 m = stage_direction(accumulated[s]);
    const auto up = detail::shared(density(s, m));
    const auto down = detail::shared(density(s, {-m[0], -m[1], -m[2]}));
    for (std::size_t i = 0; i < n; ++i) {
      plus[s * n + i] = dot(points[i], m) >= 0.0 ? 1.0 : 0.0;
      rows[s * n + i] = {up, down};
    }
  }
  model->add_measurement("Z", detail::binary_measurement("Z", space, plus, rows));

  model->set_metadata("family", "ks-sphere");
  model->set_metadata("grid", std::to_string(n));
  model->set_metadata("lattice", "fibonacci");
  model->set_metadata("theta1", detail::angle_text(theta1));
  model->set_metadata("theta2", detail::angle_text(theta2));
  model->set_metadata("update_rule", "posterior eigenstate re-sampling (surrogate)");

  ModelBundle b;
  b.name = "ks-sphere";
  b.model = model;
  b.quantity_classes.add("Z", {"Z"});
  b.protocols.add("three", Protocol{"+z", {{"", "Z"}, {"T1", "Z"}, {"T2", "Z"}}});
  b.arrangements.add("lg", ArrangementSpec{"+z", "T1", "T2", "Z", "Z", "Z"});
  return b;
}

LgArrangement build_ks_arrangement(std::size_t grid, double theta1, double theta2) {
  return build_ks(grid, theta1, theta2).arrangement();
}

}  // namespace lglab
