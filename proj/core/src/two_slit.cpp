#include "lglab/two_slit.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>

#include "build_util.hpp"

namespace lglab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Probability caps are checked with the row-normalization tolerance.
constexpr double kCapSlack = kDefaultTolerances.normalization;

void validate(double mod1, double mod2, double phi) {
  if (!std::isfinite(mod1) || !std::isfinite(mod2) || !std::isfinite(phi)) {
    throw DomainError("slit amplitudes must be finite");
  }
  if (mod1 < 0.0 || mod2 < 0.0) throw DomainError("slit moduli must be non-negative");
  if (mod1 * mod1 > 1.0 + kCapSlack || mod2 * mod2 > 1.0 + kCapSlack) {
    throw DomainError("single-slit bin probability exceeds 1");
  }
  const double both = std::norm(std::complex<double>(mod1, 0.0) + std::polar(mod2, phi)) / 2.0;
  if (both > 1.0 + kCapSlack) throw DomainError("two-slit bin probability exceeds 1");
}

std::string format12(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, ptr);
}

}  // namespace

double normalize_phase(double phi) {
  if (!std::isfinite(phi)) throw DomainError("phase must be finite");
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

SlitAmplitudes SlitAmplitudes::from_complex(std::complex<double> a1, std::complex<double> a2) {
  const double mod1 = std::abs(a1);
  const double mod2 = std::abs(a2);
  const double phi = (mod1 == 0.0 || mod2 == 0.0) ? 0.0 : normalize_phase(std::arg(a2) - std::arg(a1));
  validate(mod1, mod2, phi);
  return SlitAmplitudes(mod1, mod2, phi);
}

SlitAmplitudes SlitAmplitudes::from_moduli(double mod1, double mod2, double phi) {
  const double p = normalize_phase(phi);
  validate(mod1, mod2, p);
  return SlitAmplitudes(mod1, mod2, p);
}

SlitAmplitudes SlitAmplitudes::from_mod1_sq(double mod1_sq, double phi) {
  if (!(mod1_sq >= 0.0 && mod1_sq <= 1.0)) throw DomainError("|a1|^2 must lie in [0, 1]");
  return from_moduli(std::sqrt(mod1_sq), std::sqrt(1.0 - mod1_sq), phi);
}

DetectionProbabilities detection_probabilities(const SlitAmplitudes& s) {
  DetectionProbabilities d;
  d.both_open = std::norm(s.a1() + s.a2()) / 2.0;
  d.slit1_blocked = s.mod2() * s.mod2();
  d.slit2_blocked = s.mod1() * s.mod1();
  d.interference = d.both_open - (d.slit1_blocked + d.slit2_blocked) / 2.0;
  return d;
}

LgPlus lg_plus_value(const SlitAmplitudes& s) {
  const double c = std::cos(s.phi());
  LgPlus r;
  r.value = 2.0 * s.mod1() * (s.mod1() + s.mod2() * c) - 1.0;
  r.mirrored = 2.0 * s.mod2() * (s.mod2() + s.mod1() * c) - 1.0;
  r.violated = r.value < -1.0;
  r.mirrored_violated = r.mirrored < -1.0;
  return r;
}

double disturbance_d2(const SlitAmplitudes& s) {
  return s.mod1() * s.mod2() * std::cos(s.phi());
}

ModelBundle compile_to_bundle(const SlitAmplitudes& s) {
  enum : std::size_t { kSrc, kSup, kSlit1, kSlit2, kScreenSup, kScreen1, kScreen2, kCount };
  auto space = detail::make_space(
      {"src", "slits:sup", "slits:1", "slits:2", "screen:sup", "screen:1", "screen:2"});
  auto model = std::make_shared<OnticModel>(space);
  model->add_preparation("source", Distribution::point_mass(space, kSrc));
  model->add_transformation("to_slits",
                            detail::map_kernel(space, {kSup, kSup, kSlit1, kSlit2, kScreenSup, kScreen1, kScreen2}));
  model->add_transformation("to_screen",
                            detail::map_kernel(space, {kSrc, kScreenSup, kScreen1, kScreen2, kScreenSup, kScreen1, kScreen2}));

  model->add_measurement("emit", detail::binary_readout("emit", space, std::vector<double>(kCount, 1.0)));

  std::vector<std::array<DistributionPtr, 2>> which(kCount);
  std::vector<double> which_p(kCount);
  for (std::size_t st : {kSrc, kSup}) {
    which_p[st] = 0.5;
    which[st] = {detail::delta(space, kSlit1), detail::delta(space, kSlit2)};
  }
  which_p[kScreenSup] = 0.5;
  which[kScreenSup] = {detail::delta(space, kScreen1), detail::delta(space, kScreen2)};
  for (std::size_t st : {kSlit1, kScreen1}) {
    which_p[st] = 1.0;
    which[st] = {detail::delta(space, st), nullptr};
  }
  for (std::size_t st : {kSlit2, kScreen2}) {
    which_p[st] = 0.0;
    which[st] = {nullptr, detail::delta(space, st)};
  }
  model->add_measurement("which_slit", detail::binary_measurement("which_slit", space, which_p, which));

  const auto det = detection_probabilities(s);
  std::vector<double> screen_p(kCount);
  screen_p[kSrc] = screen_p[kSup] = screen_p[kScreenSup] = det.both_open;
  screen_p[kSlit1] = screen_p[kScreen1] = det.slit2_blocked;
  screen_p[kSlit2] = screen_p[kScreen2] = det.slit1_blocked;
  for (double& p : screen_p) p = std::min(p, 1.0);
  model->add_measurement("screen_bin", detail::binary_readout("screen_bin", space, screen_p));

  model->set_metadata("family", "two-slit");
  model->set_metadata("mod1", format12(s.mod1()));
  model->set_metadata("mod2", format12(s.mod2()));
  model->set_metadata("phi", format12(s.phi()));

  ModelBundle b;
  b.name = "two-slit";
  b.model = model;
  b.quantity_classes.add("which_slit", {"which_slit"});
  b.protocols.add("three", Protocol{"source", {{"", "emit"}, {"to_slits", "which_slit"}, {"to_screen", "screen_bin"}}});
  b.arrangements.add("coda", ArrangementSpec{"source", "to_slits", "to_screen", "emit", "which_slit", "screen_bin"});
  return b;
}

LgArrangement compile_to_arrangement(const SlitAmplitudes& s) {
  return compile_to_bundle(s).arrangement();
}

ViolationMap violation_map(std::span<const double> mod1_sq_grid, std::span<const double> phi_grid) {
  if (mod1_sq_grid.empty() || phi_grid.empty()) throw DomainError("violation map grids must be non-empty");
  ViolationMap map;
  map.rows.reserve(mod1_sq_grid.size() * phi_grid.size());
  for (double m : mod1_sq_grid) {
    for (double phi : phi_grid) {
      const auto s = SlitAmplitudes::from_mod1_sq(m, phi);
      const auto lg = lg_plus_value(s);
      map.rows.push_back({m, s.phi(), lg.value, lg.mirrored, lg.violated});
    }
    const auto s = SlitAmplitudes::from_mod1_sq(m, 0.0);
    if (s.mod2() > 0.0 && s.mod1() <= s.mod2()) {
      const double low = std::acos(-s.mod1() / s.mod2());
      map.boundary.push_back({m, low, kTwoPi - low});
    }
  }
  return map;
}

void write_violation_csv(std::ostream& out, const ViolationMap& map) {
  out << "mod1_sq,phi,lg_plus,lg_plus_mirrored,violated\n";
  for (const auto& r : map.rows) {
    out << format12(r.mod1_sq) << ',' << format12(r.phi) << ',' << format12(r.lg_plus) << ','
        << format12(r.lg_plus_mirrored) << ',' << (r.violated ? 1 : 0) << '\n';
  }
}

}  // namespace lglab
