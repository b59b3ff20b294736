#include "lglab/ontic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

namespace lglab {

namespace {

void require_same_space(const StateSpace& a, const StateSpace& b, std::string_view what) {
  if (&a != &b) throw DomainError(std::string(what) + ": state spaces differ");
}

std::optional<double> parse_number(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

// Groups rows by identity so that a row shared by many source states is
// expanded once. First-seen order keeps the summation order deterministic.
class RowAccumulator {
 public:
  explicit RowAccumulator(std::size_t n) : out_(n, 0.0) {}

  void add(const Distribution* row, double mass) {
    if (row->is_point_mass()) {
      const auto& e = row->entries().front();
      out_[e.state] += mass * e.weight;
      return;
    }
    auto [it, inserted] = slot_.try_emplace(row, pending_.size());
    if (inserted) {
      pending_.emplace_back(row, mass);
    } else {
      pending_[it->second].second += mass;
    }
  }

  void flush(std::span<double> out) {
    for (const auto& [row, mass] : pending_) {
      for (const auto& e : row->entries()) out_[e.state] += mass * e.weight;
    }
    std::copy(out_.begin(), out_.end(), out.begin());
  }

 private:
  std::vector<double> out_;
  std::vector<std::pair<const Distribution*, double>> pending_;
  std::unordered_map<const Distribution*, std::size_t> slot_;
};

}  // namespace

// -- StateSpace ---------------------------------------------------------------

StateSpace::StateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw DomainError("state space must contain at least one state");
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw DomainError("empty state label");
    if (!index_.emplace(labels_[i], i).second) {
      throw DomainError("duplicate state label '" + labels_[i] + "'");
    }
  }
}

std::optional<std::size_t> StateSpace::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t StateSpace::index_of(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw DomainError("unknown state '" + std::string(label) + "'");
}

// -- normalization ------------------------------------------------------------

void normalize_weights(std::span<double> weights, double tol, std::string_view what) {
  double sum = 0.0;
  for (double& w : weights) {
    if (!std::isfinite(w)) throw DomainError(std::string(what) + ": non-finite weight");
    if (w < -tol) throw DomainError(std::string(what) + ": negative weight");
    if (w < 0.0) w = 0.0;
    sum += w;
  }
  if (std::abs(sum - 1.0) > tol) {
    throw DomainError(std::string(what) + ": weights sum to " + std::to_string(sum) +
                      ", expected 1");
  }
  const double rounding =
      8.0 * static_cast<double>(weights.size() + 1) * std::numeric_limits<double>::epsilon();
  if (std::abs(sum - 1.0) > rounding) {
    for (double& w : weights) w /= sum;
  }
}

// -- Distribution -------------------------------------------------------------

Distribution Distribution::from_dense(SpacePtr space, std::span<const double> weights, double tol) {
  if (!space) throw DomainError("distribution without a state space");
  if (weights.size() != space->size()) {
    throw DomainError("distribution has " + std::to_string(weights.size()) +
                      " weights for a space of " + std::to_string(space->size()) + " states");
  }
  std::vector<double> w(weights.begin(), weights.end());
  normalize_weights(w, tol, "distribution");
  std::vector<WeightedState> entries;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] > 0.0) entries.push_back({i, w[i]});
  }
  return Distribution(std::move(space), std::move(entries));
}

Distribution Distribution::from_entries(SpacePtr space, std::vector<WeightedState> entries,
                                        double tol) {
  if (!space) throw DomainError("distribution without a state space");
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.state < b.state; });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].state >= space->size()) throw DomainError("distribution entry out of range");
    if (i > 0 && entries[i].state == entries[i - 1].state) {
      throw DomainError("distribution lists state '" + space->label(entries[i].state) + "' twice");
    }
  }
  std::vector<double> w(entries.size());
  std::transform(entries.begin(), entries.end(), w.begin(), [](const auto& e) { return e.weight; });
  normalize_weights(w, tol, "distribution");
  std::vector<WeightedState> kept;
  kept.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (w[i] > 0.0) kept.push_back({entries[i].state, w[i]});
  }
  return Distribution(std::move(space), std::move(kept));
}

Distribution Distribution::point_mass(SpacePtr space, std::size_t state) {
  if (!space) throw DomainError("distribution without a state space");
  if (state >= space->size()) throw DomainError("point mass out of range");
  return Distribution(std::move(space), {{state, 1.0}});
}

double Distribution::weight(std::size_t state) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), state,
                             [](const WeightedState& e, std::size_t s) { return e.state < s; });
  return (it != entries_.end() && it->state == state) ? it->weight : 0.0;
}

std::vector<double> Distribution::dense() const {
  std::vector<double> out(space_->size(), 0.0);
  for (const auto& e : entries_) out[e.state] = e.weight;
  return out;
}

std::vector<std::size_t> Distribution::support(double eps) const {
  std::vector<std::size_t> out;
  for (const auto& e : entries_) {
    if (e.weight > eps) out.push_back(e.state);
  }
  return out;
}

// -- ResponseFunction ---------------------------------------------------------

ResponseFunction::ResponseFunction(SpacePtr space, std::vector<std::string> outcomes,
                                   std::vector<double> table, double tol)
    : space_(std::move(space)), outcomes_(std::move(outcomes)), table_(std::move(table)) {
  if (!space_) throw DomainError("response function without a state space");
  if (outcomes_.empty()) throw DomainError("response function needs at least one outcome");
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (outcomes_[i].empty()) throw DomainError("empty outcome label");
    for (std::size_t j = 0; j < i; ++j) {
      if (outcomes_[i] == outcomes_[j]) throw DomainError("duplicate outcome '" + outcomes_[i] + "'");
    }
  }
  if (table_.size() != space_->size() * outcomes_.size()) {
    throw DomainError("response table has wrong shape");
  }
  const std::size_t k = outcomes_.size();
  for (std::size_t s = 0; s < space_->size(); ++s) {
    normalize_weights(std::span<double>(table_).subspan(s * k, k), tol,
                      "response row for state '" + space_->label(s) + "'");
  }
}

std::optional<std::size_t> ResponseFunction::find_outcome(std::string_view outcome) const {
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (outcomes_[i] == outcome) return i;
  }
  return std::nullopt;
}

std::size_t ResponseFunction::outcome_index(std::string_view outcome) const {
  if (auto i = find_outcome(outcome)) return *i;
  throw DomainError("unknown outcome '" + std::string(outcome) + "'");
}

bool ResponseFunction::deterministic(std::size_t state, double eps) const {
  return std::all_of(row(state).begin(), row(state).end(),
                     [eps](double p) { return p <= eps || p >= 1.0 - eps; });
}

// -- kernels ------------------------------------------------------------------

TransformationKernel::TransformationKernel(SpacePtr space, std::vector<DistributionPtr> rows)
    : space_(std::move(space)), rows_(std::move(rows)) {
  if (!space_) throw DomainError("kernel without a state space");
  if (rows_.size() != space_->size()) throw DomainError("kernel needs one row per state");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (!rows_[i]) throw DomainError("kernel row for '" + space_->label(i) + "' is missing");
    require_same_space(*rows_[i]->space(), *space_, "kernel row");
  }
}

TransformationKernel TransformationKernel::identity(SpacePtr space) {
  std::vector<DistributionPtr> rows;
  rows.reserve(space->size());
  for (std::size_t i = 0; i < space->size(); ++i) {
    rows.push_back(std::make_shared<const Distribution>(Distribution::point_mass(space, i)));
  }
  return TransformationKernel(space, std::move(rows));
}

MeasurementUpdate::MeasurementUpdate(SpacePtr space, std::size_t outcome_count,
                                     std::vector<DistributionPtr> rows)
    : space_(std::move(space)), outcome_count_(outcome_count), rows_(std::move(rows)) {
  if (!space_) throw DomainError("update without a state space");
  if (rows_.size() != space_->size() * outcome_count_) {
    throw DomainError("update table has wrong shape");
  }
  for (const auto& row : rows_) {
    if (row) require_same_space(*row->space(), *space_, "update row");
  }
}

MeasurementUpdate MeasurementUpdate::identity(SpacePtr space, std::size_t outcome_count) {
  std::vector<DistributionPtr> rows;
  rows.reserve(space->size() * outcome_count);
  for (std::size_t i = 0; i < space->size(); ++i) {
    auto delta = std::make_shared<const Distribution>(Distribution::point_mass(space, i));
    for (std::size_t q = 0; q < outcome_count; ++q) rows.push_back(delta);
  }
  return MeasurementUpdate(space, outcome_count, std::move(rows));
}

Measurement::Measurement(std::string label, ResponseFunction response, MeasurementUpdate update,
                         std::vector<double> values, double support_eps)
    : label_(std::move(label)), response_(std::move(response)), update_(std::move(update)) {
  require_same_space(*response_.space(), *update_.space(), "measurement '" + label_ + "'");
  if (update_.outcome_count() != response_.outcome_count()) {
    throw DomainError("measurement '" + label_ + "': response and update outcome sets differ");
  }
  const auto& space = *response_.space();
  for (std::size_t s = 0; s < space.size(); ++s) {
    for (std::size_t q = 0; q < response_.outcome_count(); ++q) {
      if (response_.probability(s, q) > support_eps && !update_.row_ptr(s, q)) {
        throw DomainError("measurement '" + label_ + "': missing update row for state '" +
                          space.label(s) + "', outcome '" + response_.outcomes()[q] + "'");
      }
    }
  }
  if (!values.empty()) {
    if (values.size() != response_.outcome_count()) {
      throw DomainError("measurement '" + label_ + "': one value per outcome required");
    }
    for (double v : values) {
      if (!std::isfinite(v)) throw DomainError("measurement '" + label_ + "': non-finite value");
    }
    values_ = std::move(values);
    explicit_values_ = true;
  } else {
    std::vector<double> parsed;
    for (const auto& o : response_.outcomes()) {
      auto v = parse_number(o);
      if (!v) {
        parsed.clear();
        break;
      }
      parsed.push_back(*v);
    }
    if (parsed.size() == response_.outcome_count()) values_ = std::move(parsed);
  }
}

// -- OnticModel ---------------------------------------------------------------

OnticModel::OnticModel(SpacePtr space) : space_(std::move(space)) {
  if (!space_) throw DomainError("model without a state space");
}

void OnticModel::add_preparation(std::string name, Distribution mu) {
  require_same_space(*mu.space(), *space_, "preparation '" + name + "'");
  preparations_.add(std::move(name), std::move(mu));
}

void OnticModel::add_transformation(std::string name, TransformationKernel kernel) {
  require_same_space(*kernel.space(), *space_, "transformation '" + name + "'");
  transformations_.add(std::move(name), std::move(kernel));
}

void OnticModel::add_measurement(std::string name, Measurement measurement) {
  require_same_space(*measurement.response().space(), *space_, "measurement '" + name + "'");
  measurements_.add(std::move(name), std::move(measurement));
}

void OnticModel::set_metadata(std::string key, std::string value) {
  for (auto& [k, v] : metadata_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  metadata_.emplace_back(std::move(key), std::move(value));
}

const Distribution& OnticModel::preparation(std::string_view name) const {
  if (const auto* p = preparations_.find(name)) return *p;
  throw DomainError("unknown preparation '" + std::string(name) + "'");
}

const TransformationKernel& OnticModel::transformation(std::string_view name) const {
  if (const auto* t = transformations_.find(name)) return *t;
  throw DomainError("unknown transformation '" + std::string(name) + "'");
}

const Measurement& OnticModel::measurement(std::string_view name) const {
  if (const auto* m = measurements_.find(name)) return *m;
  throw DomainError("unknown measurement '" + std::string(name) + "'");
}

// -- propagation --------------------------------------------------------------

void apply_kernel(std::span<const double> in, const TransformationKernel& kernel,
                  std::span<double> out) {
  const std::size_t n = kernel.space()->size();
  if (in.size() != n || out.size() != n) throw DomainError("apply_kernel: size mismatch");
  RowAccumulator acc(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (in[s] != 0.0) acc.add(kernel.row_ptr(s).get(), in[s]);
  }
  acc.flush(out);
}

double apply_outcome(std::span<const double> in, const Measurement& measurement,
                     std::size_t outcome, std::span<double> out) {
  const auto& response = measurement.response();
  const std::size_t n = response.space()->size();
  if (in.size() != n || out.size() != n) throw DomainError("apply_outcome: size mismatch");
  RowAccumulator acc(n);
  double mass = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double w = in[s] * response.probability(s, outcome);
    if (w == 0.0) continue;
    const auto& row = measurement.update().row_ptr(s, outcome);
    if (!row) continue;  // outcome has (numerically) zero response here
    mass += w;
    acc.add(row.get(), w);
  }
  acc.flush(out);
  return mass;
}

void apply_nonselective(std::span<const double> in, const Measurement& measurement,
                        std::span<double> out) {
  std::vector<double> branch(in.size());
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t q = 0; q < measurement.outcomes().size(); ++q) {
    apply_outcome(in, measurement, q, branch);
    for (std::size_t s = 0; s < in.size(); ++s) out[s] += branch[s];
  }
}

// -- operations ---------------------------------------------------------------

Distribution compose_preparation(const Distribution& mu, const TransformationKernel& kernel) {
  require_same_space(*mu.space(), *kernel.space(), "compose_preparation");
  const auto in = mu.dense();
  std::vector<double> out(in.size());
  apply_kernel(in, kernel, out);
  return Distribution::from_dense(mu.space(), out);
}

double single_shot_probability(const Distribution& mu, const TransformationKernel* kernel,
                               const Measurement& measurement, std::string_view outcome) {
  const std::size_t q = measurement.response().outcome_index(outcome);
  require_same_space(*mu.space(), *measurement.response().space(), "single_shot_probability");
  std::vector<double> state = mu.dense();
  if (kernel) {
    require_same_space(*mu.space(), *kernel->space(), "single_shot_probability");
    std::vector<double> next(state.size());
    apply_kernel(state, *kernel, next);
    state.swap(next);
  }
  double p = 0.0;
  for (std::size_t s = 0; s < state.size(); ++s) {
    p += state[s] * measurement.response().probability(s, q);
  }
  return p;
}

NoninvasivenessCheck is_ontically_noninvasive(const Measurement& measurement,
                                              std::optional<std::string_view> for_outcome,
                                              double eps) {
  const auto& response = measurement.response();
  const std::size_t n = response.space()->size();
  std::vector<std::size_t> outcomes;
  if (for_outcome) {
    outcomes.push_back(response.outcome_index(*for_outcome));
  } else {
    outcomes.resize(response.outcome_count());
    std::iota(outcomes.begin(), outcomes.end(), std::size_t{0});
  }
  double worst = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t q : outcomes) {
      if (response.probability(s, q) <= eps) continue;
      const auto& row = measurement.update().row_ptr(s, q);
      // TV distance from delta_s is 1 - row(s).
      worst = std::max(worst, 1.0 - row->weight(s));
    }
  }
  return {worst <= eps, worst};
}

}  // namespace lglab
