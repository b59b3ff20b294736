#include "lglab/zoo.hpp"

#include "lglab/two_slit.hpp"

namespace lglab {

const std::vector<ZooEntry>& zoo_list() {
  static const std::vector<ZooEntry> entries{
      {"qubit", "qubit with projective Z/X measurements on reachable pure states; params theta1, theta2", false},
      {"superselected", "two basis states with stochastic flips; params p1, p2", false},
      {"classical-chain", "four-microstate Markov chain with a microstate-shuffling readout", false},
      {"ks-sphere", "Kochen-Specker style sphere model on a Fibonacci grid; params grid, theta1, theta2", false},
      {"bohm-two-path", "quantum state plus value-definite path bit; params theta1, theta2", false},
      {"two-slit", "screen-bin two-slit model; params mod1_sq, phi", false},
      {"lgi-holds-d-nonzero", "LG inequality satisfied while disturbance exceeds 0.1; param reset", true},
      {"null-result-pair", "two equivalent measurements, each noninvasive for one outcome", true},
      {"support-mr-minimal", "three-state model supported inside eigenstate supports, not a mixture", true},
  };
  return entries;
}

ModelBundle build_zoo(std::string_view name, const ZooParams& p) {
  if (name.empty()) throw DomainError("empty zoo model name");
  if (name == "qubit") return build_qubit(p.theta1, p.theta2);
  if (name == "superselected") return build_superselected(p.p1, p.p2);
  if (name == "classical-chain") return build_classical_chain();
  if (name == "ks-sphere") return build_ks(p.grid, p.theta1, p.theta2);
  if (name == "bohm-two-path") return build_bohm(p.theta1, p.theta2);
  if (name == "two-slit") return compile_to_bundle(SlitAmplitudes::from_mod1_sq(p.mod1_sq, p.phi));
  if (name == "lgi-holds-d-nonzero") {
    // A non-default reset is built without the contract check.
    if (p.reset != ZooParams{}.reset) return build_lgi_holds_d_nonzero(p.reset);
    return fixture(name).bundle;
  }
  if (name == "null-result-pair" || name == "support-mr-minimal") return fixture(name).bundle;
  throw DomainError("unknown zoo model '" + std::string(name) + "'");
}

}  // namespace lglab
