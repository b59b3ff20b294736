#pragma once

// Macrodefiniteness and the three-way macrorealism taxonomy for a finite
// model, relative to a quantity class and the model's declared preparations.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lglab/ontic.hpp"
#include "lglab/operational.hpp"

namespace lglab {

/// Pairwise operationally equivalent measurements of one quantity.
class QuantityClass {
 public:
  /// Verifies equivalence of every member against the first one, on the
  /// model's default preparation probes. Throws DomainError on failure.
  static QuantityClass create(const OnticModel& model, std::string label,
                              std::vector<std::string> measurements,
                              double eps = kDefaultTolerances.equivalence);

  const std::string& label() const { return label_; }
  const std::vector<std::string>& measurements() const { return measurements_; }
  /// Outcome labels shared by every member.
  const std::vector<std::string>& outcomes() const { return outcomes_; }

 private:
  QuantityClass(std::string label, std::vector<std::string> measurements,
                std::vector<std::string> outcomes)
      : label_(std::move(label)), measurements_(std::move(measurements)),
        outcomes_(std::move(outcomes)) {}

  std::string label_;
  std::vector<std::string> measurements_;
  std::vector<std::string> outcomes_;
};

struct MacrodefiniteWitness {
  std::string state;
  std::string measurement;
  std::string outcome;
  double probability = 0.0;
  std::string reason;  ///< "indeterminate" or "contextual"
};

struct MacrodefinitenessResult {
  bool macrodefinite = false;
  std::size_t offending_states = 0;
  std::vector<MacrodefiniteWitness> witnesses;  ///< first few offenders
  /// Outcome index each state determinately yields; empty unless macrodefinite.
  std::vector<std::size_t> value_of_state;
};

MacrodefinitenessResult check_macrodefinite(const OnticModel& model, const QuantityClass& cls,
                                            double eps = kDefaultTolerances.support,
                                            std::size_t max_witnesses = 16);

struct EigenstateSupport {
  std::string outcome;
  std::vector<std::string> preparations;  ///< declared eigenstate preparations for this value
  std::vector<std::size_t> states;        ///< union of their supports, ascending
  bool declared() const { return !preparations.empty(); }
};

EigenstateSupport operational_eigenstate_supports(const OnticModel& model,
                                                  const QuantityClass& cls,
                                                  std::string_view outcome,
                                                  const Tolerances& tol = kDefaultTolerances);

enum class Verdict { kMixture, kSupport, kSupra, kNotMacrorealist };

/// "MR1-mixture", "MR2-support", "MR3-supra", "not-MR".
std::string_view to_string(Verdict v);

struct ValueComponent {
  std::string outcome;
  double weight = 0.0;
  std::vector<WeightedState> component;  ///< normalized nu_q
};

struct PreparationAssessment {
  std::string preparation;
  bool hull_feasible = false;
  double hull_residual = 0.0;  ///< total-variation distance of the best mixture
  std::vector<std::pair<std::string, double>> hull_weights;
  bool support_contained = false;
  std::vector<std::string> novel_states;  ///< support outside every eigenstate support
  std::size_t novel_state_count = 0;
  std::vector<ValueComponent> decomposition;
};

struct Classification {
  std::string quantity;
  MacrodefinitenessResult macrodefiniteness;
  Verdict verdict = Verdict::kNotMacrorealist;
  std::vector<EigenstateSupport> eigenstates;  ///< one per outcome
  std::vector<PreparationAssessment> preparations;
  std::vector<std::string> declared_preparations;
};

/// Throws DomainError when no eigenstate preparation is declared at all.
Classification classify(const OnticModel& model, const QuantityClass& cls,
                        const Tolerances& tol = kDefaultTolerances);

struct EquilibriumCheck {
  bool holds = false;
  double max_deviation = 0.0;
  std::size_t preparations_checked = 0;
};

/// Every declared eigenstate preparation of the class is a fixed point of the
/// measurement's update conditioned on its own value.
EquilibriumCheck check_equilibrium_property(const OnticModel& model, const QuantityClass& cls,
                                            std::string_view measurement,
                                            const Tolerances& tol = kDefaultTolerances);

}  // namespace lglab
