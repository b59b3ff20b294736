#pragma once

// Leggett-Garg quantities for the three-measurement arrangement
// (E, M1, T1, M2, T2, M3), the disturbance tables D1/D2/D3 and the checks
// relating ontic noninvasiveness, operational non-disturbance and the
// inequality.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lglab/ontic.hpp"
#include "lglab/operational.hpp"

namespace lglab {

struct ArrangementSpec {
  std::string preparation;
  std::string t1;  ///< may be empty
  std::string t2;  ///< may be empty
  std::string m1;
  std::string m2;
  std::string m3;
};

/// A validated arrangement. Every sub-experiment is generated from the same
/// preparation and transformations, so they cannot drift apart.
class LgArrangement {
 public:
  /// Values default to the measurements' own outcome values. Each measurement
  /// must have exactly two outcomes, one valued +1 and one valued -1.
  static LgArrangement create(ModelPtr model, ArrangementSpec spec,
                              std::optional<ObservableAssignment> assignment = std::nullopt);

  const OnticModel& model() const { return *model_; }
  const ModelPtr& model_ptr() const { return model_; }
  const ArrangementSpec& spec() const { return spec_; }
  const ObservableAssignment& assignment() const { return assignment_; }

  /// The protocol with the given measurements performed.
  Protocol protocol(bool m1, bool m2, bool m3) const;
  /// Index of the outcome of measurement k (0, 1, 2) carrying value +1 or -1.
  std::size_t outcome_for(std::size_t k, int sign) const;
  /// +1 or -1 for outcome index q of measurement k.
  int sign_of(std::size_t k, std::size_t q) const;

 private:
  LgArrangement(ModelPtr model, ArrangementSpec spec, ObservableAssignment assignment);

  ModelPtr model_;
  ArrangementSpec spec_;
  ObservableAssignment assignment_;
  std::array<std::array<std::size_t, 2>, 3> plus_minus_{};  // [k][0]=+1 index, [k][1]=-1 index
};

/// 2x2 table indexed by value sign: [0] is +1, [1] is -1.
using SignTable = std::array<std::array<double, 2>, 2>;

double lg_value_all_three(const LgArrangement& arrangement);
double lg_value_pairwise(const LgArrangement& arrangement);

struct DisturbanceReport {
  SignTable d1{};  ///< (q2, q3): P_(M2,M3) - P_(M1,M2,M3) marginal
  SignTable d2{};  ///< (q1, q3): P_(M1,M3) - P_(M1,M2,M3) marginal
  SignTable d3{};  ///< (q1, q2): P_(M1,M2) - P_(M1,M2,M3) marginal; zero by time order
  double p_plus_all = 0.0;   ///< P_(M1,M2,M3)(+1,+1,+1)
  double p_minus_all = 0.0;  ///< P_(M1,M2,M3)(-1,-1,-1)
  double lg_all_three = 0.0;
  double lg_pairwise = 0.0;
  double decomposition_residual = 0.0;

  double max_abs_d1() const;
  double max_abs_d2() const;
  double max_abs_d3() const;
};

/// Four protocol runs; throws EngineDefect if D3 is non-zero or the D1/D2
/// tables fail to sum to zero.
DisturbanceReport disturbance_report(const LgArrangement& arrangement);

// -- operational non-disturbance ---------------------------------------------

/// Where M sits: an optional prefix of steps after the preparation (performed
/// measurements keep their outcomes in the compared table) and the
/// transformation applied immediately before M.
struct OpndContext {
  std::vector<ProtocolStep> prefix;
  std::string lead_transformation;
};

struct OpndResult {
  bool non_disturbing = false;
  double max_deviation = 0.0;
};

/// Compares the statistics of prefix + suffix with M performed and its
/// outcome summed out against M skipped.
OpndResult check_opnd(const OnticModel& model, std::string_view preparation,
                      std::string_view measurement, std::span<const ProtocolStep> suffix,
                      const OpndContext& context = {},
                      double eps = kDefaultTolerances.equivalence);

/// Bounds for the "for every preparation and every later measurement" check.
struct OpndBounds {
  std::size_t prefix_depth = 1;
  std::size_t suffix_depth = 2;
};

struct OpndWitness {
  std::string preparation;
  std::vector<ProtocolStep> prefix;
  std::vector<std::size_t> prefix_outcomes;
  std::string lead_transformation;
  std::vector<ProtocolStep> suffix;
  double deviation = 0.0;
};

struct CompleteOpndResult {
  bool non_disturbing = false;
  double max_deviation = 0.0;
  std::optional<OpndWitness> worst;  ///< present whenever max_deviation > 0
  OpndBounds bounds;
  std::size_t contexts_checked = 0;
  std::size_t suffixes_checked = 0;
};

/// Quantifies over declared preparations, prefixes of declared
/// (transformation, measurement) steps up to bounds.prefix_depth, every
/// choice of lead transformation, and suffixes up to bounds.suffix_depth.
CompleteOpndResult check_opnd_complete(const OnticModel& model, std::string_view measurement,
                                       OpndBounds bounds = {},
                                       double eps = kDefaultTolerances.equivalence);

struct ChainRecord {
  bool oni = false;            ///< M1 and M2 ontically noninvasive
  bool opnd_complete = false;  ///< M1 and M2 operationally non-disturbing, bounded tout court
  bool opnd_specific = false;  ///< the two arrangement-specific conditions
  bool lgi = false;            ///< lg_value_pairwise >= -1 - eps
  double lg_pairwise = 0.0;
  double oni_deviation = 0.0;
  double opnd_complete_deviation = 0.0;
  double opnd_specific_deviation = 0.0;
  CompleteOpndResult complete_m1;
  CompleteOpndResult complete_m2;
};

/// Evaluates ONI -> OPND_complete -> OPND_specific -> LGI and throws
/// EngineDefect if any forward implication fails.
ChainRecord check_implication_chain(const LgArrangement& arrangement, OpndBounds bounds = {},
                                    double eps = kDefaultTolerances.equivalence);

// -- post-selection -----------------------------------------------------------

struct KeptBranch {
  std::string measurement;
  std::string kept_outcome;
};

/// Precondition failure of the post-selection construction.
class PreconditionError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct PostSelectionCheck {
  std::string preparation;
  double kept_fraction = 0.0;
  std::vector<double> kept_distribution;  ///< conditioned on keeping the run
  double deviation_from_restricted = 0.0;  ///< vs mu(l) * P(keep | l), unnormalized
  double deviation_from_input = 0.0;       ///< conditioned kept distribution vs mu
};

struct PostSelectionResult {
  std::vector<PostSelectionCheck> checks;
  bool kept_runs_undisturbed = false;  ///< every kept branch left its ontic state alone
  bool composite_noninvasive = false;  ///< conditioned kept distribution equals the input
  double max_deviation_from_input = 0.0;
  EquivalenceReport equivalence;
};

/// Half the runs use `first`, half `second`; runs are kept only when the
/// measurement returned its kept outcome. Requires the two measurements to be
/// operationally equivalent and each ontically noninvasive for its kept
/// outcome; throws PreconditionError naming the failed check otherwise.
PostSelectionResult post_select_noninvasive(const OnticModel& model, const KeptBranch& first,
                                            const KeptBranch& second,
                                            const Tolerances& tol = kDefaultTolerances);

}  // namespace lglab
