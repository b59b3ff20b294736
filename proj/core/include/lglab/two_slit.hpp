#pragma once

// Two-slit interference at a single screen bin: closed-form detection
// probabilities, the one-sided LG quantity, the intermediate-measurement
// disturbance, and a compiled finite model for the general engine.

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "lglab/bundle.hpp"
#include "lglab/lg_analysis.hpp"

namespace lglab {

/// Per-bin amplitudes from each slit. Stored as moduli plus the phase of a2
/// relative to a1, normalized to [0, 2pi).
class SlitAmplitudes {
 public:
  /// Throws DomainError unless |a1|^2, |a2|^2 and |a1+a2|^2 / 2 are all at most 1.
  static SlitAmplitudes from_complex(std::complex<double> a1, std::complex<double> a2);
  static SlitAmplitudes from_moduli(double mod1, double mod2, double phi);
  /// |a1|^2 given, |a2|^2 = 1 - |a1|^2.
  static SlitAmplitudes from_mod1_sq(double mod1_sq, double phi);

  double mod1() const { return mod1_; }
  double mod2() const { return mod2_; }
  double phi() const { return phi_; }
  std::complex<double> a1() const { return {mod1_, 0.0}; }
  std::complex<double> a2() const { return std::polar(mod2_, phi_); }

 private:
  SlitAmplitudes(double mod1, double mod2, double phi) : mod1_(mod1), mod2_(mod2), phi_(phi) {}

  double mod1_;
  double mod2_;
  double phi_;
};

/// Wraps any finite angle into [0, 2pi).
double normalize_phase(double phi);

struct DetectionProbabilities {
  double both_open = 0.0;       ///< |a1 + a2|^2 / 2
  double slit1_blocked = 0.0;   ///< |a2|^2
  double slit2_blocked = 0.0;   ///< |a1|^2
  double interference = 0.0;    ///< both_open - (|a1|^2 + |a2|^2) / 2
};

DetectionProbabilities detection_probabilities(const SlitAmplitudes& s);

struct LgPlus {
  double value = 0.0;     ///< slit 1 assigned +1
  double mirrored = 0.0;  ///< slit 2 assigned +1
  bool violated = false;
  bool mirrored_violated = false;
};

/// 2|a1|(|a1| + |a2| cos phi) - 1 and its mirror image.
LgPlus lg_plus_value(const SlitAmplitudes& s);

/// |a1| |a2| cos phi.
double disturbance_d2(const SlitAmplitudes& s);

/// Finite model: emit (always +1), which-slit readout with collapse, screen-bin readout.
ModelBundle compile_to_bundle(const SlitAmplitudes& s);
LgArrangement compile_to_arrangement(const SlitAmplitudes& s);

struct ViolationRow {
  double mod1_sq = 0.0;
  double phi = 0.0;
  double lg_plus = 0.0;
  double lg_plus_mirrored = 0.0;
  bool violated = false;
};

struct BoundaryPoint {
  double mod1_sq = 0.0;
  double phi_low = 0.0;   ///< arccos(-|a1|/|a2|)
  double phi_high = 0.0;  ///< 2pi - phi_low
};

struct ViolationMap {
  std::vector<ViolationRow> rows;     ///< modulus-major order
  std::vector<BoundaryPoint> boundary;  ///< where cos phi = -|a1|/|a2| has a solution
};

/// Sweeps with |a2|^2 = 1 - |a1|^2. Throws DomainError on an empty grid.
ViolationMap violation_map(std::span<const double> mod1_sq_grid, std::span<const double> phi_grid);

/// Header plus one line per row, 12 significant digits.
void write_violation_csv(std::ostream& out, const ViolationMap& map);

}  // namespace lglab
