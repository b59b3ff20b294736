#include "lglab/operational.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace lglab {

namespace {

std::vector<Axis> axes_for(const OnticModel& model, std::span<const ProtocolStep> steps) {
  std::vector<Axis> axes;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!steps[i].perform) continue;
    const auto& m = model.measurement(steps[i].measurement);
    axes.push_back({i, steps[i].measurement, m.outcomes()});
  }
  return axes;
}

struct Walker {
  const OnticModel& model;
  std::span<const ProtocolStep> steps;
  std::vector<const TransformationKernel*> kernels;
  std::vector<const Measurement*> measurements;
  std::vector<std::size_t> outcomes;

  Walker(const OnticModel& m, std::span<const ProtocolStep> s) : model(m), steps(s) {
    for (const auto& step : steps) {
      kernels.push_back(step.transformation.empty() ? nullptr
                                                    : &model.transformation(step.transformation));
      measurements.push_back(&model.measurement(step.measurement));
    }
  }

  template <class Leaf>
  void walk(std::size_t i, std::vector<double> state, double mass, const Leaf& leaf) {
    if (i == steps.size()) {
      leaf(outcomes, std::move(state), mass);
      return;
    }
    if (kernels[i]) {
      std::vector<double> next(state.size());
      apply_kernel(state, *kernels[i], next);
      state.swap(next);
    }
    if (!steps[i].perform) {
      walk(i + 1, std::move(state), mass, leaf);
      return;
    }
    const auto& m = *measurements[i];
    for (std::size_t q = 0; q < m.outcomes().size(); ++q) {
      std::vector<double> branch(state.size());
      const double branch_mass = apply_outcome(state, m, q, branch);
      if (branch_mass == 0.0) continue;
      outcomes.push_back(q);
      walk(i + 1, std::move(branch), branch_mass, leaf);
      outcomes.pop_back();
    }
  }
};

std::string describe(const std::string& transformation, const std::string& tail) {
  return (transformation.empty() ? std::string("-") : transformation) + "/" + tail;
}

}  // namespace

void validate_protocol(const OnticModel& model, const Protocol& protocol) {
  model.preparation(protocol.preparation);
  bool any = false;
  for (const auto& step : protocol.steps) {
    if (!step.transformation.empty()) model.transformation(step.transformation);
    model.measurement(step.measurement);
    any = any || step.perform;
  }
  if (!any) throw DomainError("protocol performs no measurement");
}

// -- JointDistribution --------------------------------------------------------

JointDistribution::JointDistribution(std::vector<Axis> axes, std::vector<double> table)
    : axes_(std::move(axes)), table_(std::move(table)) {
  std::size_t expected = 1;
  for (const auto& a : axes_) expected *= a.outcomes.size();
  if (table_.size() != expected) throw DomainError("joint table has wrong size");
}

std::size_t JointDistribution::flat_index(std::span<const std::size_t> outcomes) const {
  if (outcomes.size() != axes_.size()) throw DomainError("outcome tuple has wrong length");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    if (outcomes[k] >= axes_[k].outcomes.size()) throw DomainError("outcome index out of range");
    flat = flat * axes_[k].outcomes.size() + outcomes[k];
  }
  return flat;
}

std::vector<std::size_t> JointDistribution::unflatten(std::size_t flat) const {
  std::vector<std::size_t> out(axes_.size());
  for (std::size_t k = axes_.size(); k-- > 0;) {
    out[k] = flat % axes_[k].outcomes.size();
    flat /= axes_[k].outcomes.size();
  }
  return out;
}

double JointDistribution::probability(std::span<const std::size_t> outcomes) const {
  return table_[flat_index(outcomes)];
}

double JointDistribution::probability_of(std::span<const std::string> outcomes) const {
  if (outcomes.size() != axes_.size()) throw DomainError("outcome tuple has wrong length");
  std::vector<std::size_t> idx(outcomes.size());
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    const auto& labels = axes_[k].outcomes;
    auto it = std::find(labels.begin(), labels.end(), outcomes[k]);
    if (it == labels.end()) throw DomainError("unknown outcome '" + outcomes[k] + "'");
    idx[k] = static_cast<std::size_t>(it - labels.begin());
  }
  return probability(idx);
}

double JointDistribution::total() const {
  return std::accumulate(table_.begin(), table_.end(), 0.0);
}

// -- engine -------------------------------------------------------------------

std::vector<Branch> evolve_branches(const OnticModel& model, std::span<const double> start,
                                    std::span<const ProtocolStep> steps) {
  if (start.size() != model.states().size()) throw DomainError("start vector has wrong size");
  Walker walker(model, steps);
  std::vector<Branch> out;
  const double mass = std::accumulate(start.begin(), start.end(), 0.0);
  walker.walk(0, std::vector<double>(start.begin(), start.end()), mass,
              [&](const std::vector<std::size_t>& outcomes, std::vector<double> state, double m) {
                out.push_back({outcomes, std::move(state), m});
              });
  return out;
}

JointDistribution run_steps(const OnticModel& model, std::span<const double> start,
                            std::span<const ProtocolStep> steps) {
  if (start.size() != model.states().size()) throw DomainError("start vector has wrong size");
  auto axes = axes_for(model, steps);
  std::size_t size = 1;
  for (const auto& a : axes) size *= a.outcomes.size();
  std::vector<double> table(size, 0.0);
  Walker walker(model, steps);
  const double mass = std::accumulate(start.begin(), start.end(), 0.0);
  walker.walk(0, std::vector<double>(start.begin(), start.end()), mass,
              [&](const std::vector<std::size_t>& outcomes, const std::vector<double>&, double m) {
                std::size_t flat = 0;
                for (std::size_t k = 0; k < axes.size(); ++k) {
                  flat = flat * axes[k].outcomes.size() + outcomes[k];
                }
                table[flat] += m;
              });
  return JointDistribution(std::move(axes), std::move(table));
}

JointDistribution run_protocol(const OnticModel& model, const Protocol& protocol) {
  validate_protocol(model, protocol);
  const auto start = model.preparation(protocol.preparation).dense();
  return run_steps(model, start, protocol.steps);
}

JointDistribution marginalize(const JointDistribution& joint, std::span<const std::size_t> keep) {
  if (keep.empty()) throw DomainError("marginalize: keep set is empty");
  std::vector<Axis> axes;
  for (std::size_t k : keep) {
    if (k >= joint.rank()) throw DomainError("marginalize: axis out of range");
    if (std::count(keep.begin(), keep.end(), k) > 1) throw DomainError("marginalize: repeated axis");
    axes.push_back(joint.axes()[k]);
  }
  std::size_t size = 1;
  for (const auto& a : axes) size *= a.outcomes.size();
  std::vector<double> table(size, 0.0);
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    const auto full = joint.unflatten(flat);
    std::size_t target = 0;
    for (std::size_t j = 0; j < keep.size(); ++j) {
      target = target * axes[j].outcomes.size() + full[keep[j]];
    }
    table[target] += joint.table()[flat];
  }
  return JointDistribution(std::move(axes), std::move(table));
}

// -- expectation --------------------------------------------------------------

ObservableAssignment ObservableAssignment::from_model(const OnticModel& model) {
  ObservableAssignment a;
  for (const auto& [name, m] : model.measurements()) {
    if (!m.values()) continue;
    for (std::size_t q = 0; q < m.outcomes().size(); ++q) {
      a.set(name, m.outcomes()[q], (*m.values())[q]);
    }
  }
  return a;
}

void ObservableAssignment::set(const std::string& measurement, const std::string& outcome,
                               double value) {
  if (!std::isfinite(value)) throw DomainError("assigned value must be finite");
  values_[measurement][outcome] = value;
}

double ObservableAssignment::value(const std::string& measurement,
                                   const std::string& outcome) const {
  auto m = values_.find(measurement);
  if (m == values_.end()) throw DomainError("no values assigned for '" + measurement + "'");
  auto o = m->second.find(outcome);
  if (o == m->second.end()) {
    throw DomainError("no value assigned to outcome '" + outcome + "' of '" + measurement + "'");
  }
  return o->second;
}

double expectation(const JointDistribution& joint, const ObservableAssignment& assignment,
                   std::span<const std::size_t> axes) {
  std::vector<std::vector<double>> values;
  for (std::size_t k : axes) {
    if (k >= joint.rank()) throw DomainError("expectation: axis out of range");
    const auto& axis = joint.axes()[k];
    std::vector<double> v;
    for (const auto& o : axis.outcomes) v.push_back(assignment.value(axis.measurement, o));
    values.push_back(std::move(v));
  }
  double sum = 0.0;
  for (std::size_t flat = 0; flat < joint.size(); ++flat) {
    const double p = joint.table()[flat];
    if (p == 0.0) continue;
    const auto idx = joint.unflatten(flat);
    double product = 1.0;
    for (std::size_t j = 0; j < axes.size(); ++j) product *= values[j][idx[axes[j]]];
    sum += p * product;
  }
  return sum;
}

// -- equivalence --------------------------------------------------------------

std::vector<Probe> default_probes(const OnticModel& model) {
  std::vector<std::string> transformations{""};
  for (const auto& name : model.transformations().names()) transformations.push_back(name);
  std::vector<Probe> out;
  for (const auto& t : transformations) {
    for (const auto& m : model.measurements().names()) out.push_back({t, m});
  }
  return out;
}

std::vector<PreparationProbe> default_preparation_probes(const OnticModel& model) {
  std::vector<std::string> transformations{""};
  for (const auto& name : model.transformations().names()) transformations.push_back(name);
  std::vector<PreparationProbe> out;
  for (const auto& e : model.preparations().names()) {
    for (const auto& t : transformations) out.push_back({e, t});
  }
  return out;
}

EquivalenceReport preparations_equivalent(const OnticModel& model, std::string_view first,
                                          std::string_view second, std::span<const Probe> probes,
                                          double eps) {
  const auto& mu1 = model.preparation(first);
  const auto& mu2 = model.preparation(second);
  EquivalenceReport report;
  std::ostringstream desc;
  desc << "preparation probes {";
  for (const auto& probe : probes) {
    const TransformationKernel* t =
        probe.transformation.empty() ? nullptr : &model.transformation(probe.transformation);
    const auto& m = model.measurement(probe.measurement);
    for (const auto& q : m.outcomes()) {
      const double d = std::abs(single_shot_probability(mu1, t, m, q) -
                                single_shot_probability(mu2, t, m, q));
      report.max_deviation = std::max(report.max_deviation, d);
    }
    if (report.probes_checked > 0) desc << ", ";
    desc << describe(probe.transformation, probe.measurement);
    ++report.probes_checked;
  }
  desc << "}";
  report.probe_set = desc.str();
  report.equivalent = report.max_deviation <= eps;
  return report;
}

EquivalenceReport measurements_equivalent(
    const OnticModel& model, std::string_view first, std::string_view second,
    std::span<const PreparationProbe> probes,
    const std::optional<std::map<std::string, std::string>>& correspondence, double eps) {
  const auto& m1 = model.measurement(first);
  const auto& m2 = model.measurement(second);
  if (m1.outcomes().size() != m2.outcomes().size()) {
    throw DomainError("measurements '" + std::string(first) + "' and '" + std::string(second) +
                      "' have different outcome counts");
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& o : m1.outcomes()) {
    std::string partner = o;
    if (correspondence) {
      auto it = correspondence->find(o);
      if (it == correspondence->end()) {
        throw DomainError("outcome '" + o + "' has no declared correspondent");
      }
      partner = it->second;
    }
    if (!m2.response().find_outcome(partner)) {
      throw DomainError("no outcome correspondence between '" + std::string(first) + "' and '" +
                        std::string(second) + "' for outcome '" + o + "'");
    }
    for (const auto& [_, taken] : pairs) {
      if (taken == partner) throw DomainError("outcome correspondence is not one-to-one");
    }
    pairs.emplace_back(o, partner);
  }
  EquivalenceReport report;
  std::ostringstream desc;
  desc << "measurement probes {";
  for (const auto& probe : probes) {
    const auto& mu = model.preparation(probe.preparation);
    const TransformationKernel* t =
        probe.transformation.empty() ? nullptr : &model.transformation(probe.transformation);
    for (const auto& [a, b] : pairs) {
      const double d = std::abs(single_shot_probability(mu, t, m1, a) -
                                single_shot_probability(mu, t, m2, b));
      report.max_deviation = std::max(report.max_deviation, d);
    }
    if (report.probes_checked > 0) desc << ", ";
    desc << probe.preparation << "/" << (probe.transformation.empty() ? "-" : probe.transformation);
    ++report.probes_checked;
  }
  desc << "}";
  report.probe_set = desc.str();
  report.equivalent = report.max_deviation <= eps;
  return report;
}

bool is_operational_eigenstate(const OnticModel& model, const Distribution& mu,
                               std::span<const std::string> measurement_class,
                               std::string_view outcome, double eps) {
  if (measurement_class.empty()) throw DomainError("empty measurement class");
  for (const auto& name : measurement_class) {
    const auto& m = model.measurement(name);
    if (single_shot_probability(mu, nullptr, m, outcome) < 1.0 - eps) return false;
  }
  return true;
}

bool is_operational_eigenstate(const OnticModel& model, std::string_view preparation,
                               std::span<const std::string> measurement_class,
                               std::string_view outcome, double eps) {
  return is_operational_eigenstate(model, model.preparation(preparation), measurement_class,
                                   outcome, eps);
}

}  // namespace lglab
