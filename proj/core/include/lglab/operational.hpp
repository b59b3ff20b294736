#pragma once

// Sequential-measurement protocols, joint outcome tables and the operational
// equivalence relations, all evaluated by exact branch enumeration.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lglab/ontic.hpp"

namespace lglab {

struct ProtocolStep {
  std::string transformation;  ///< empty: no transformation before the measurement
  std::string measurement;
  bool perform = true;  ///< skipped measurements apply neither response nor update
};

struct Protocol {
  std::string preparation;
  std::vector<ProtocolStep> steps;
};

/// Throws DomainError unless every name resolves and at least one
/// measurement is performed.
void validate_protocol(const OnticModel& model, const Protocol& protocol);

struct Axis {
  std::size_t step = 0;  ///< index into the protocol's step list
  std::string measurement;
  std::vector<std::string> outcomes;
};

/// Dense probability table over outcome tuples, first axis most significant.
class JointDistribution {
 public:
  JointDistribution(std::vector<Axis> axes, std::vector<double> table);

  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t rank() const { return axes_.size(); }
  const std::vector<double>& table() const { return table_; }
  std::size_t size() const { return table_.size(); }

  double probability(std::span<const std::size_t> outcomes) const;
  /// Outcome labels -> probability; labels must appear in axis order.
  double probability_of(std::span<const std::string> outcomes) const;
  std::size_t flat_index(std::span<const std::size_t> outcomes) const;
  std::vector<std::size_t> unflatten(std::size_t flat) const;
  double total() const;

 private:
  std::vector<Axis> axes_;
  std::vector<double> table_;
};

JointDistribution run_protocol(const OnticModel& model, const Protocol& protocol);

/// Same engine from an arbitrary (possibly sub-normalized) ontic weight
/// vector; table entries then sum to the starting mass.
JointDistribution run_steps(const OnticModel& model, std::span<const double> start,
                            std::span<const ProtocolStep> steps);

struct Branch {
  std::vector<std::size_t> outcomes;  ///< one per performed measurement
  std::vector<double> state;          ///< unnormalized ontic weights at the end
  double mass = 0.0;
};

/// Depth-first enumeration of outcome branches with non-zero mass, in the
/// measurements' declared outcome order.
std::vector<Branch> evolve_branches(const OnticModel& model, std::span<const double> start,
                                    std::span<const ProtocolStep> steps);

/// Sums out every axis not listed in `keep` (axis indices, kept in the given order).
JointDistribution marginalize(const JointDistribution& joint, std::span<const std::size_t> keep);

/// Real value for each outcome of each measurement.
class ObservableAssignment {
 public:
  ObservableAssignment() = default;
  /// Uses each measurement's declared or numeric outcome values.
  static ObservableAssignment from_model(const OnticModel& model);

  void set(const std::string& measurement, const std::string& outcome, double value);
  double value(const std::string& measurement, const std::string& outcome) const;
  bool covers(const std::string& measurement) const { return values_.contains(measurement); }
  const std::map<std::string, std::map<std::string, double>>& values() const { return values_; }

 private:
  std::map<std::string, std::map<std::string, double>> values_;
};

/// Sum over the table of probability times the product of assigned values on `axes`.
double expectation(const JointDistribution& joint, const ObservableAssignment& assignment,
                   std::span<const std::size_t> axes);

struct Probe {
  std::string transformation;  ///< empty: none
  std::string measurement;
};

struct PreparationProbe {
  std::string preparation;
  std::string transformation;  ///< empty: none
};

/// Equivalence is only ever certified relative to a finite probe set.
struct EquivalenceReport {
  bool equivalent = false;
  double max_deviation = 0.0;
  std::size_t probes_checked = 0;
  std::string probe_set;  ///< human-readable description of what was probed
};

/// Every ({none} + declared transformations) x declared measurements pair.
std::vector<Probe> default_probes(const OnticModel& model);
/// Every declared preparation x ({none} + declared transformations).
std::vector<PreparationProbe> default_preparation_probes(const OnticModel& model);

EquivalenceReport preparations_equivalent(const OnticModel& model, std::string_view first,
                                          std::string_view second, std::span<const Probe> probes,
                                          double eps = kDefaultTolerances.equivalence);

/// Compares response statistics only; updates may differ. `correspondence`
/// maps outcomes of `first` to outcomes of `second`; by default the labels
/// must coincide.
EquivalenceReport measurements_equivalent(
    const OnticModel& model, std::string_view first, std::string_view second,
    std::span<const PreparationProbe> probes,
    const std::optional<std::map<std::string, std::string>>& correspondence = std::nullopt,
    double eps = kDefaultTolerances.equivalence);

/// True iff every class member returns `outcome` with probability 1 after `preparation`.
bool is_operational_eigenstate(const OnticModel& model, std::string_view preparation,
                               std::span<const std::string> measurement_class,
                               std::string_view outcome,
                               double eps = kDefaultTolerances.equivalence);

/// Same test for an arbitrary ontic distribution.
bool is_operational_eigenstate(const OnticModel& model, const Distribution& mu,
                               std::span<const std::string> measurement_class,
                               std::string_view outcome,
                               double eps = kDefaultTolerances.equivalence);

}  // namespace lglab
