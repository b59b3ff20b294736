#pragma once

// Finite ontic models: state spaces, preparation distributions, response
// functions, transformation kernels and measurement-update kernels.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lglab {

/// Numerical tolerances shared by every analysis. Reports echo these.
struct Tolerances {
  double normalization = 1e-9;  ///< row sums must be within this of 1
  double support = 1e-12;       ///< weights at or below this are treated as zero
  double equivalence = 1e-9;    ///< statistical agreement threshold
  double hull = 1e-8;           ///< convex-hull residual, total-variation norm
};

inline constexpr Tolerances kDefaultTolerances{};

/// Invalid input: unknown names, malformed tables, mismatched spaces.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An identity that must hold exactly failed. Signals a defect in the engine
/// or a corrupted model, never a property of the physics.
class EngineDefect : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class StateSpace {
 public:
  explicit StateSpace(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> find(std::string_view label) const;
  std::size_t index_of(std::string_view label) const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

using SpacePtr = std::shared_ptr<const StateSpace>;

struct WeightedState {
  std::size_t state = 0;
  double weight = 0.0;

  friend bool operator==(const WeightedState&, const WeightedState&) = default;
};

/// Probability distribution over a finite state space, stored sparsely with
/// entries sorted by state index. Zero weights are dropped.
class Distribution {
 public:
  static Distribution from_dense(SpacePtr space, std::span<const double> weights,
                                 double tol = kDefaultTolerances.normalization);
  static Distribution from_entries(SpacePtr space, std::vector<WeightedState> entries,
                                   double tol = kDefaultTolerances.normalization);
  static Distribution point_mass(SpacePtr space, std::size_t state);

  const SpacePtr& space() const { return space_; }
  std::span<const WeightedState> entries() const { return entries_; }
  double weight(std::size_t state) const;
  std::vector<double> dense() const;
  std::vector<std::size_t> support(double eps = kDefaultTolerances.support) const;
  bool is_point_mass() const { return entries_.size() == 1; }

  friend bool operator==(const Distribution& a, const Distribution& b) {
    return a.space_.get() == b.space_.get() && a.entries_ == b.entries_;
  }

 private:
  Distribution(SpacePtr space, std::vector<WeightedState> entries)
      : space_(std::move(space)), entries_(std::move(entries)) {}

  SpacePtr space_;
  std::vector<WeightedState> entries_;
};

using DistributionPtr = std::shared_ptr<const Distribution>;

/// Normalizes `weights` in place. Throws if any weight is below -tol or the
/// sum is off by more than tol. Rescaling only happens when the sum is off by
/// more than accumulated rounding, which keeps the operation idempotent.
void normalize_weights(std::span<double> weights, double tol, std::string_view what);

/// xi(q | lambda): dense |states| x |outcomes| table.
class ResponseFunction {
 public:
  ResponseFunction(SpacePtr space, std::vector<std::string> outcomes, std::vector<double> table,
                   double tol = kDefaultTolerances.normalization);

  const SpacePtr& space() const { return space_; }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  std::size_t outcome_count() const { return outcomes_.size(); }
  std::optional<std::size_t> find_outcome(std::string_view outcome) const;
  std::size_t outcome_index(std::string_view outcome) const;
  double probability(std::size_t state, std::size_t outcome) const {
    return table_[state * outcomes_.size() + outcome];
  }
  std::span<const double> row(std::size_t state) const {
    return std::span<const double>(table_).subspan(state * outcomes_.size(), outcomes_.size());
  }
  bool deterministic(std::size_t state, double eps = kDefaultTolerances.support) const;

 private:
  SpacePtr space_;
  std::vector<std::string> outcomes_;
  std::vector<double> table_;
};

/// tau_T(lambda | lambda0). Rows may be shared between source states.
class TransformationKernel {
 public:
  TransformationKernel(SpacePtr space, std::vector<DistributionPtr> rows);
  static TransformationKernel identity(SpacePtr space);

  const SpacePtr& space() const { return space_; }
  const Distribution& row(std::size_t from) const { return *rows_.at(from); }
  const DistributionPtr& row_ptr(std::size_t from) const { return rows_.at(from); }
  const std::vector<DistributionPtr>& rows() const { return rows_; }

 private:
  SpacePtr space_;
  std::vector<DistributionPtr> rows_;
};

/// tau_M(lambda | q, lambda0). A null row is allowed only where the outcome
/// has zero response probability; such rows are never consulted.
class MeasurementUpdate {
 public:
  MeasurementUpdate(SpacePtr space, std::size_t outcome_count, std::vector<DistributionPtr> rows);
  /// Every (state, outcome) row is the point mass on the state itself.
  static MeasurementUpdate identity(SpacePtr space, std::size_t outcome_count);

  const SpacePtr& space() const { return space_; }
  std::size_t outcome_count() const { return outcome_count_; }
  const DistributionPtr& row_ptr(std::size_t from, std::size_t outcome) const {
    return rows_[from * outcome_count_ + outcome];
  }
  const std::vector<DistributionPtr>& rows() const { return rows_; }

 private:
  SpacePtr space_;
  std::size_t outcome_count_;
  std::vector<DistributionPtr> rows_;
};

class Measurement {
 public:
  /// `values` assigns a real number to each outcome; when empty the outcome
  /// labels are parsed as numbers where possible.
  Measurement(std::string label, ResponseFunction response, MeasurementUpdate update,
              std::vector<double> values = {}, double support_eps = kDefaultTolerances.support);

  const std::string& label() const { return label_; }
  const ResponseFunction& response() const { return response_; }
  const MeasurementUpdate& update() const { return update_; }
  const std::vector<std::string>& outcomes() const { return response_.outcomes(); }
  /// Real value of each outcome, or nullopt when an outcome is not numeric.
  const std::optional<std::vector<double>>& values() const { return values_; }
  bool has_explicit_values() const { return explicit_values_; }

 private:
  std::string label_;
  ResponseFunction response_;
  MeasurementUpdate update_;
  std::optional<std::vector<double>> values_;
  bool explicit_values_ = false;
};

/// Ordered name -> value registry; iteration follows insertion order.
template <class T>
class NamedSet {
 public:
  void add(std::string name, T value) {
    if (name.empty()) throw DomainError("empty name");
    if (index_.contains(name)) throw DomainError("duplicate name '" + name + "'");
    index_.emplace(name, items_.size());
    items_.emplace_back(std::move(name), std::move(value));
  }
  bool contains(std::string_view name) const { return index_.contains(std::string(name)); }
  const T& at(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) throw DomainError("unknown name '" + std::string(name) + "'");
    return items_[it->second].second;
  }
  const T* find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? nullptr : &items_[it->second].second;
  }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(items_.size());
    for (const auto& [name, _] : items_) out.push_back(name);
    return out;
  }

 private:
  std::vector<std::pair<std::string, T>> items_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Lambda, with named preparations, transformations and measurements all over
/// the same state space. Built incrementally, then shared as const.
class OnticModel {
 public:
  explicit OnticModel(SpacePtr space);

  void add_preparation(std::string name, Distribution mu);
  void add_transformation(std::string name, TransformationKernel kernel);
  void add_measurement(std::string name, Measurement measurement);
  void set_metadata(std::string key, std::string value);

  const SpacePtr& space() const { return space_; }
  const StateSpace& states() const { return *space_; }
  const NamedSet<Distribution>& preparations() const { return preparations_; }
  const NamedSet<TransformationKernel>& transformations() const { return transformations_; }
  const NamedSet<Measurement>& measurements() const { return measurements_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const { return metadata_; }

  const Distribution& preparation(std::string_view name) const;
  const TransformationKernel& transformation(std::string_view name) const;
  const Measurement& measurement(std::string_view name) const;

 private:
  SpacePtr space_;
  NamedSet<Distribution> preparations_;
  NamedSet<TransformationKernel> transformations_;
  NamedSet<Measurement> measurements_;
  std::vector<std::pair<std::string, std::string>> metadata_;
};

using ModelPtr = std::shared_ptr<const OnticModel>;

// -- propagation primitives --------------------------------------------------
// Dense, possibly sub-normalized weight vectors indexed by state.

/// out = sum_l0 in[l0] * tau(. | l0)
void apply_kernel(std::span<const double> in, const TransformationKernel& kernel,
                  std::span<double> out);

/// out = sum_l0 in[l0] * xi(q | l0) * tau_M(. | q, l0); returns the branch mass.
double apply_outcome(std::span<const double> in, const Measurement& measurement,
                     std::size_t outcome, std::span<double> out);

/// Non-selective update: sum over outcomes of apply_outcome.
void apply_nonselective(std::span<const double> in, const Measurement& measurement,
                        std::span<double> out);

// -- operations ---------------------------------------------------------------

/// mu'(l) = sum_l0 mu(l0) tau(l | l0).
Distribution compose_preparation(const Distribution& mu, const TransformationKernel& kernel);

/// P_(E,T,M)(Q = q). Pass nullptr for the transformation to measure directly.
double single_shot_probability(const Distribution& mu, const TransformationKernel* kernel,
                               const Measurement& measurement, std::string_view outcome);

struct NoninvasivenessCheck {
  bool noninvasive = false;
  double max_deviation = 0.0;  ///< max total-variation distance from delta rows
};

/// Tests tau_M(l | q, l0) = delta(l, l0) for one outcome, or for all of them.
/// Rows whose outcome has zero response probability are not checked.
NoninvasivenessCheck is_ontically_noninvasive(const Measurement& measurement,
                                              std::optional<std::string_view> for_outcome = {},
                                              double eps = kDefaultTolerances.support);

}  // namespace lglab
