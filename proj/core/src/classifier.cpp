#include "lglab/classifier.hpp"

#include <algorithm>
#include <cmath>

#include "nnls.hpp"

namespace lglab {

QuantityClass QuantityClass::create(const OnticModel& model, std::string label,
                                    std::vector<std::string> measurements, double eps) {
  if (measurements.empty()) throw DomainError("quantity class '" + label + "' is empty");
  const auto& head = model.measurement(measurements.front());
  const auto probes = default_preparation_probes(model);
  for (std::size_t i = 1; i < measurements.size(); ++i) {
    const auto report =
        measurements_equivalent(model, measurements.front(), measurements[i], probes, std::nullopt, eps);
    if (!report.equivalent) {
      throw DomainError("quantity class '" + label + "': '" + measurements[i] +
                        "' is not equivalent to '" + measurements.front() + "'");
    }
  }
  return QuantityClass(std::move(label), std::move(measurements), head.outcomes());
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kMixture: return "MR1-mixture";
    case Verdict::kSupport: return "MR2-support";
    case Verdict::kSupra: return "MR3-supra";
    case Verdict::kNotMacrorealist: return "not-MR";
  }
  return "not-MR";
}

MacrodefinitenessResult check_macrodefinite(const OnticModel& model, const QuantityClass& cls,
                                            double eps, std::size_t max_witnesses) {
  MacrodefinitenessResult r;
  const std::size_t n = model.states().size();
  std::vector<std::size_t> value(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    std::optional<std::size_t> agreed;
    std::optional<MacrodefiniteWitness> witness;
    for (const auto& name : cls.measurements()) {
      const auto& response = model.measurement(name).response();
      std::optional<std::size_t> certain;
      for (std::size_t q = 0; q < response.outcome_count(); ++q) {
        const double p = response.probability(s, q);
        if (p >= 1.0 - eps) {
          certain = q;
        } else if (p > eps && !witness) {
          witness = MacrodefiniteWitness{model.states().label(s), name, response.outcomes()[q], p,
                                         "indeterminate"};
        }
      }
      if (!certain) continue;
      // Outcome labels are shared across the class, so indices line up.
      if (agreed && *agreed != *certain && !witness) {
        witness = MacrodefiniteWitness{model.states().label(s), name,
                                       response.outcomes()[*certain], 1.0, "contextual"};
      }
      agreed = agreed.value_or(*certain);
    }
    if (witness) {
      ++r.offending_states;
      if (r.witnesses.size() < max_witnesses) r.witnesses.push_back(*witness);
    } else {
      value[s] = *agreed;
    }
  }
  r.macrodefinite = r.offending_states == 0;
  if (r.macrodefinite) r.value_of_state = std::move(value);
  return r;
}

EigenstateSupport operational_eigenstate_supports(const OnticModel& model, const QuantityClass& cls,
                                                  std::string_view outcome, const Tolerances& tol) {
  EigenstateSupport out;
  out.outcome = std::string(outcome);
  std::vector<bool> in(model.states().size(), false);
  for (const auto& [name, mu] : model.preparations()) {
    if (!is_operational_eigenstate(model, mu, cls.measurements(), outcome, tol.equivalence)) continue;
    out.preparations.push_back(name);
    for (std::size_t s : mu.support(tol.support)) in[s] = true;
  }
  for (std::size_t s = 0; s < in.size(); ++s) {
    if (in[s]) out.states.push_back(s);
  }
  return out;
}

Classification classify(const OnticModel& model, const QuantityClass& cls, const Tolerances& tol) {
  Classification c;
  c.quantity = cls.label();
  c.declared_preparations = model.preparations().names();
  c.macrodefiniteness = check_macrodefinite(model, cls, tol.support);

  std::vector<std::string> eigen_names;
  std::vector<std::vector<double>> eigen_columns;
  std::vector<bool> covered(model.states().size(), false);
  for (const auto& q : cls.outcomes()) {
    auto support = operational_eigenstate_supports(model, cls, q, tol);
    for (const auto& name : support.preparations) {
      eigen_names.push_back(name);
      eigen_columns.push_back(model.preparation(name).dense());
    }
    for (std::size_t s : support.states) covered[s] = true;
    c.eigenstates.push_back(std::move(support));
  }
  if (eigen_names.empty()) {
    throw DomainError("classification impossible: no eigenstate preparation declared for '" +
                      cls.label() + "'");
  }
  if (!c.macrodefiniteness.macrodefinite) {
    c.verdict = Verdict::kNotMacrorealist;
    return c;
  }

  bool all_mixtures = true;
  bool all_contained = true;
  for (const auto& [name, mu] : model.preparations()) {
    PreparationAssessment pa;
    pa.preparation = name;
    const auto target = mu.dense();

    // Each column and the target sum to one, so an exact fit has unit weight.
    const auto fit = detail::nnls(eigen_columns, target);
    double tv = 0.0;
    for (std::size_t s = 0; s < target.size(); ++s) {
      double mix = 0.0;
      for (std::size_t j = 0; j < eigen_columns.size(); ++j) mix += fit.weights[j] * eigen_columns[j][s];
      tv += std::abs(mix - target[s]);
    }
    pa.hull_residual = 0.5 * tv;
    pa.hull_feasible = pa.hull_residual <= tol.hull;
    for (std::size_t j = 0; j < eigen_names.size(); ++j) {
      if (fit.weights[j] > 0.0) pa.hull_weights.emplace_back(eigen_names[j], fit.weights[j]);
    }

    pa.support_contained = true;
    for (std::size_t s : mu.support(tol.support)) {
      if (covered[s]) continue;
      pa.support_contained = false;
      ++pa.novel_state_count;
      if (pa.novel_states.size() < 16) pa.novel_states.push_back(model.states().label(s));
    }

    // nu_q: the preparation restricted to states whose determinate value is q.
    const auto& value = c.macrodefiniteness.value_of_state;
    for (std::size_t q = 0; q < cls.outcomes().size(); ++q) {
      ValueComponent vc;
      vc.outcome = cls.outcomes()[q];
      for (const auto& e : mu.entries()) {
        if (value[e.state] == q) {
          vc.weight += e.weight;
          vc.component.push_back(e);
        }
      }
      for (auto& e : vc.component) e.weight /= vc.weight;
      if (vc.weight > 0.0) pa.decomposition.push_back(std::move(vc));
    }

    all_mixtures = all_mixtures && pa.hull_feasible;
    all_contained = all_contained && pa.support_contained;
    c.preparations.push_back(std::move(pa));
  }

  if (all_mixtures) {
    c.verdict = Verdict::kMixture;
  } else if (all_contained) {
    c.verdict = Verdict::kSupport;
  } else {
    c.verdict = Verdict::kSupra;
  }
  return c;
}

EquilibriumCheck check_equilibrium_property(const OnticModel& model, const QuantityClass& cls,
                                            std::string_view measurement, const Tolerances& tol) {
  const auto& m = model.measurement(measurement);
  EquilibriumCheck out;
  out.holds = true;
  const std::size_t n = model.states().size();
  for (const auto& q : cls.outcomes()) {
    const auto support = operational_eigenstate_supports(model, cls, q, tol);
    const std::size_t qi = m.response().outcome_index(q);
    for (const auto& name : support.preparations) {
      const auto mu = model.preparation(name).dense();
      std::vector<double> after(n);
      const double mass = apply_outcome(mu, m, qi, after);
      double dev = 0.0;
      for (std::size_t s = 0; s < n; ++s) {
        dev = std::max(dev, std::abs((mass > 0.0 ? after[s] / mass : 0.0) - mu[s]));
      }
      out.max_deviation = std::max(out.max_deviation, dev);
      ++out.preparations_checked;
    }
  }
  out.holds = out.max_deviation <= tol.normalization;
  return out;
}

}  // namespace lglab
