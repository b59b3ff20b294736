#include <algorithm>
#include <cmath>

#include "lglab/lg_analysis.hpp"

namespace lglab {

PostSelectionResult post_select_noninvasive(const OnticModel& model, const KeptBranch& first,
                                            const KeptBranch& second, const Tolerances& tol) {
  const auto& m1 = model.measurement(first.measurement);
  const auto& m2 = model.measurement(second.measurement);
  const std::size_t q1 = m1.response().outcome_index(first.kept_outcome);
  const std::size_t q2 = m2.response().outcome_index(second.kept_outcome);

  PostSelectionResult result;
  const auto probes = default_preparation_probes(model);
  result.equivalence = measurements_equivalent(model, first.measurement, second.measurement, probes,
                                               std::nullopt, tol.equivalence);
  std::vector<std::string> failures;
  if (!result.equivalence.equivalent) {
    failures.push_back("'" + first.measurement + "' and '" + second.measurement +
                       "' are not operationally equivalent");
  }
  if (!is_ontically_noninvasive(m1, first.kept_outcome, tol.support).noninvasive) {
    failures.push_back("'" + first.measurement + "' is not ontically noninvasive for outcome " +
                       first.kept_outcome);
  }
  if (!is_ontically_noninvasive(m2, second.kept_outcome, tol.support).noninvasive) {
    failures.push_back("'" + second.measurement + "' is not ontically noninvasive for outcome " +
                       second.kept_outcome);
  }
  if (!failures.empty()) {
    std::string msg = "post-selection precondition failed: ";
    for (std::size_t i = 0; i < failures.size(); ++i) msg += (i ? "; " : "") + failures[i];
    throw PreconditionError(msg);
  }

  const std::size_t n = model.states().size();
  result.kept_runs_undisturbed = true;
  result.composite_noninvasive = true;
  for (const auto& [name, mu] : model.preparations()) {
    const auto in = mu.dense();
    std::vector<double> a(n), b(n);
    apply_outcome(in, m1, q1, a);
    apply_outcome(in, m2, q2, b);

    PostSelectionCheck check;
    check.preparation = name;
    std::vector<double> kept(n);
    for (std::size_t s = 0; s < n; ++s) {
      kept[s] = 0.5 * a[s] + 0.5 * b[s];
      check.kept_fraction += kept[s];
      const double restricted = 0.5 * in[s] *
                                (m1.response().probability(s, q1) + m2.response().probability(s, q2));
      check.deviation_from_restricted =
          std::max(check.deviation_from_restricted, std::abs(kept[s] - restricted));
    }
    check.kept_distribution.resize(n, 0.0);
    if (check.kept_fraction > 0.0) {
      for (std::size_t s = 0; s < n; ++s) {
        check.kept_distribution[s] = kept[s] / check.kept_fraction;
        check.deviation_from_input =
            std::max(check.deviation_from_input, std::abs(check.kept_distribution[s] - in[s]));
      }
    } else {
      check.deviation_from_input = 1.0;
    }
    result.kept_runs_undisturbed =
        result.kept_runs_undisturbed && check.deviation_from_restricted <= tol.support;
    result.composite_noninvasive =
        result.composite_noninvasive && check.deviation_from_input <= tol.equivalence;
    result.max_deviation_from_input =
        std::max(result.max_deviation_from_input, check.deviation_from_input);
    result.checks.push_back(std::move(check));
  }
  return result;
}

}  // namespace lglab
