#pragma once

// Stage-tagged Bloch angles in the xz-plane, shared by the qubit and
// two-path models.

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "lglab/ontic.hpp"

namespace lglab::detail {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kAngleMatch = 1e-9;

inline double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

inline std::string angle_text(double a) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, a);
  return std::string(buf, ptr);
}

class StagedAngles {
 public:
  static constexpr std::size_t kStages = 3;

  /// Stage 0 holds the preparation and collapse angles; stage k adds the
  /// collapse angles and stage k-1 rotated by theta_k.
  StagedAngles(std::span<const double> prepared, std::span<const double> collapse, double theta1,
               double theta2) {
    for (double a : prepared) insert(0, a);
    for (double a : collapse) insert(0, a);
    const std::array<double, 2> theta{theta1, theta2};
    for (std::size_t s = 1; s < kStages; ++s) {
      for (double a : collapse) insert(s, a);
      const auto previous = angles_[s - 1];
      for (double a : previous) insert(s, a + theta[s - 1]);
    }
  }

  const std::vector<double>& at(std::size_t stage) const { return angles_[stage]; }

  /// Index within the stage of the stored angle matching `a`.
  std::size_t index(std::size_t stage, double a) const {
    const auto& v = angles_[stage];
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (same(v[i], a)) return i;
    }
    throw EngineDefect("angle " + angle_text(a) + " not reachable at stage " + std::to_string(stage));
  }

 private:
  static bool same(double a, double b) {
    const double d = std::abs(wrap_angle(a) - wrap_angle(b));
    return std::min(d, kTwoPi - d) <= kAngleMatch;
  }

  void insert(std::size_t stage, double a) {
    for (double x : angles_[stage]) {
      if (same(x, a)) return;
    }
    angles_[stage].push_back(wrap_angle(a));
  }

  std::array<std::vector<double>, kStages> angles_;
};

}  // namespace lglab::detail
