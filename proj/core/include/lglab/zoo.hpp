#pragma once

// Built-in exemplar models compiled to finite ontic models, plus the
// hand-built counterexample fixtures.

#include <array>
#include <cstddef>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "lglab/bundle.hpp"
#include "lglab/lg_analysis.hpp"

namespace lglab {

/// Reset probability of the shipped lgi-holds-d-nonzero fixture.
inline constexpr double kFixtureReset = 0.25;

struct ZooParams {
  double theta1 = 2.0 * std::numbers::pi / 3.0;
  double theta2 = 2.0 * std::numbers::pi / 3.0;
  double p1 = 0.25;  ///< superselected flip probabilities
  double p2 = 0.25;
  std::size_t grid = 10000;  ///< sphere points for ks-sphere
  double mod1_sq = 0.2;      ///< two-slit
  double phi = std::numbers::pi;
  double reset = kFixtureReset;  ///< lgi-holds-d-nonzero reset probability
};

struct ZooEntry {
  std::string name;
  std::string description;
  bool fixture = false;
};

/// Stable order: models first, then fixtures.
const std::vector<ZooEntry>& zoo_list();

/// Throws DomainError for an empty or unknown name.
ModelBundle build_zoo(std::string_view name, const ZooParams& params = {});

// -- models ---------------------------------------------------------------------
// Qubit, KS and two-path states carry a stage tag 0, 1, 2: T1 moves stage 0
// to 1, T2 moves stage 1 to 2, both act as the identity elsewhere.

/// Pure states in the xz-plane, reachable from the +-z/+-x preparations
/// under T1, T2 and Z/X collapses. Rotations are about y.
ModelBundle build_qubit(double theta1, double theta2);
/// Two basis states; T1, T2 flip with probability p1, p2.
ModelBundle build_superselected(double p1, double p2);
/// Four microstates in two macrostates; Z_shuffle re-randomizes the microstate.
ModelBundle build_classical_chain();
/// Fibonacci sphere of `grid` points per stage. Throws DomainError below 100.
ModelBundle build_ks(std::size_t grid, double theta1, double theta2);
/// States (stage, angle, path bit); Z reads the path bit.
ModelBundle build_bohm(double theta1, double theta2);

LgArrangement build_qubit_arrangement(double theta1, double theta2);
LgArrangement build_superselected_arrangement(double p1, double p2);
LgArrangement build_ks_arrangement(std::size_t grid, double theta1, double theta2);
LgArrangement build_bohm_arrangement(double theta1, double theta2);

using Vec3 = std::array<double, 3>;

/// Point i of the n-point Fibonacci lattice.
Vec3 fibonacci_point(std::size_t i, std::size_t n);
/// Grid weights proportional to max(n . s, 0), normalized over the lattice.
std::vector<double> ks_density(std::size_t n, const Vec3& s);
/// Probability of +1 along `m` for the density of `s` on the n-point lattice.
double ks_response_probability(std::size_t n, const Vec3& s, const Vec3& m);

// -- fixtures ---------------------------------------------------------------------

/// Two states. M2 resets "-" to "+" with probability `reset`, giving
/// D2(-1,+1) = -reset/2 and a pairwise value of 3 - reset.
ModelBundle build_lgi_holds_d_nonzero(double reset);
/// M_plus_null leaves states alone on +1 and swaps microstates on -1;
/// M_minus_null is the reverse. Responses coincide.
ModelBundle build_null_result_pair();
/// States {a, b, c}; the preparation E' is supported inside the eigenstate
/// supports without being a mixture of eigenstate preparations.
ModelBundle build_support_mr_minimal();

struct Fixture {
  std::string name;
  std::string contract;
  ModelBundle bundle;
};

/// Builds every fixture and re-verifies its contract by enumeration.
/// Throws EngineDefect if any contract fails.
std::vector<Fixture> build_fixtures();

/// Single fixture, verified. Throws DomainError for an empty or unknown name.
Fixture fixture(std::string_view name);

}  // namespace lglab
