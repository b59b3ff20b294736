#include "lglab/lg_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lglab {

namespace {

constexpr double kIdentityTol = 1e-12;

using SignCube = std::array<SignTable, 2>;

double max_abs(const SignTable& t) {
  double m = 0.0;
  for (const auto& row : t) {
    for (double v : row) m = std::max(m, std::abs(v));
  }
  return m;
}

double sum_all(const SignTable& t) { return t[0][0] + t[0][1] + t[1][0] + t[1][1]; }
double sum_diagonal(const SignTable& t) { return t[0][0] + t[1][1]; }

// Joint over (k_a, k_b) re-indexed by sign.
SignTable sign_table(const JointDistribution& joint, const LgArrangement& a, std::size_t ka,
                     std::size_t kb) {
  SignTable t{};
  for (int sa = 0; sa < 2; ++sa) {
    for (int sb = 0; sb < 2; ++sb) {
      const std::array<std::size_t, 2> idx{a.outcome_for(ka, sa == 0 ? 1 : -1),
                                           a.outcome_for(kb, sb == 0 ? 1 : -1)};
      t[sa][sb] = joint.probability(idx);
    }
  }
  return t;
}

SignCube sign_cube(const JointDistribution& joint, const LgArrangement& a) {
  SignCube c{};
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) {
      for (int s3 = 0; s3 < 2; ++s3) {
        const std::array<std::size_t, 3> idx{a.outcome_for(0, s1 == 0 ? 1 : -1),
                                             a.outcome_for(1, s2 == 0 ? 1 : -1),
                                             a.outcome_for(2, s3 == 0 ? 1 : -1)};
        c[s1][s2][s3] = joint.probability(idx);
      }
    }
  }
  return c;
}

double correlator(const SignTable& t) { return t[0][0] + t[1][1] - t[0][1] - t[1][0]; }

double max_table_gap(const JointDistribution& a, const JointDistribution& b) {
  if (a.size() != b.size()) throw EngineDefect("compared joint tables differ in shape");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.table()[i] - b.table()[i]));
  return m;
}

std::size_t performed_count(std::span<const ProtocolStep> steps) {
  return static_cast<std::size_t>(
      std::count_if(steps.begin(), steps.end(), [](const auto& s) { return s.perform; }));
}

std::vector<std::vector<ProtocolStep>> step_sequences(const std::vector<ProtocolStep>& alphabet,
                                                      std::size_t min_len, std::size_t max_len) {
  std::vector<std::vector<ProtocolStep>> out;
  std::vector<std::vector<ProtocolStep>> layer{{}};
  for (std::size_t len = 0; len <= max_len; ++len) {
    if (len >= min_len) out.insert(out.end(), layer.begin(), layer.end());
    if (len == max_len) break;
    std::vector<std::vector<ProtocolStep>> next;
    for (const auto& seq : layer) {
      for (const auto& step : alphabet) {
        auto longer = seq;
        longer.push_back(step);
        next.push_back(std::move(longer));
      }
    }
    layer = std::move(next);
  }
  return out;
}

}  // namespace

// -- LgArrangement ------------------------------------------------------------

LgArrangement::LgArrangement(ModelPtr model, ArrangementSpec spec, ObservableAssignment assignment)
    : model_(std::move(model)), spec_(std::move(spec)), assignment_(std::move(assignment)) {}

LgArrangement LgArrangement::create(ModelPtr model, ArrangementSpec spec,
                                    std::optional<ObservableAssignment> assignment) {
  if (!model) throw DomainError("arrangement without a model");
  model->preparation(spec.preparation);
  if (!spec.t1.empty()) model->transformation(spec.t1);
  if (!spec.t2.empty()) model->transformation(spec.t2);
  ObservableAssignment values = assignment ? *assignment : ObservableAssignment::from_model(*model);
  LgArrangement a(model, spec, values);
  const std::array<const std::string*, 3> names{&a.spec_.m1, &a.spec_.m2, &a.spec_.m3};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& m = model->measurement(*names[k]);
    if (m.outcomes().size() != 2) {
      throw DomainError("measurement '" + *names[k] + "' is not binary");
    }
    std::optional<std::size_t> plus, minus;
    for (std::size_t q = 0; q < 2; ++q) {
      const double v = values.value(*names[k], m.outcomes()[q]);
      if (v == 1.0 && !plus) {
        plus = q;
      } else if (v == -1.0 && !minus) {
        minus = q;
      } else {
        throw DomainError("measurement '" + *names[k] + "' must assign +1 and -1 to its outcomes");
      }
    }
    a.plus_minus_[k] = {*plus, *minus};
  }
  return a;
}

Protocol LgArrangement::protocol(bool m1, bool m2, bool m3) const {
  return Protocol{spec_.preparation,
                  {{"", spec_.m1, m1}, {spec_.t1, spec_.m2, m2}, {spec_.t2, spec_.m3, m3}}};
}

std::size_t LgArrangement::outcome_for(std::size_t k, int sign) const {
  return plus_minus_.at(k)[sign > 0 ? 0 : 1];
}

int LgArrangement::sign_of(std::size_t k, std::size_t q) const {
  return plus_minus_.at(k)[0] == q ? 1 : -1;
}

// -- LG values ------------------------------------------------------------------

double lg_value_all_three(const LgArrangement& a) {
  const auto joint = run_protocol(a.model(), a.protocol(true, true, true));
  const std::array<std::size_t, 2> p12{0, 1}, p13{0, 2}, p23{1, 2};
  return expectation(joint, a.assignment(), p12) + expectation(joint, a.assignment(), p13) +
         expectation(joint, a.assignment(), p23);
}

double lg_value_pairwise(const LgArrangement& a) {
  const std::array<std::size_t, 2> both{0, 1};
  const auto j12 = run_protocol(a.model(), a.protocol(true, true, false));
  const auto j13 = run_protocol(a.model(), a.protocol(true, false, true));
  const auto j23 = run_protocol(a.model(), a.protocol(false, true, true));
  return expectation(j12, a.assignment(), both) + expectation(j13, a.assignment(), both) +
         expectation(j23, a.assignment(), both);
}

double DisturbanceReport::max_abs_d1() const { return max_abs(d1); }
double DisturbanceReport::max_abs_d2() const { return max_abs(d2); }
double DisturbanceReport::max_abs_d3() const { return max_abs(d3); }

DisturbanceReport disturbance_report(const LgArrangement& a) {
  const auto j123 = run_protocol(a.model(), a.protocol(true, true, true));
  const auto j12 = run_protocol(a.model(), a.protocol(true, true, false));
  const auto j13 = run_protocol(a.model(), a.protocol(true, false, true));
  const auto j23 = run_protocol(a.model(), a.protocol(false, true, true));

  const SignCube all = sign_cube(j123, a);
  const SignTable pair12 = sign_table(j12, a, 0, 1);
  const SignTable pair13 = sign_table(j13, a, 0, 2);
  const SignTable pair23 = sign_table(j23, a, 1, 2);

  DisturbanceReport r;
  SignTable m12{}, m13{}, m23{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        m12[i][j] += all[i][j][k];
        m13[i][k] += all[i][j][k];
        m23[j][k] += all[i][j][k];
      }
    }
  }
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      r.d1[x][y] = pair23[x][y] - m23[x][y];
      r.d2[x][y] = pair13[x][y] - m13[x][y];
      r.d3[x][y] = pair12[x][y] - m12[x][y];
    }
  }
  r.p_plus_all = all[0][0][0];
  r.p_minus_all = all[1][1][1];
  r.lg_all_three = correlator(m12) + correlator(m13) + correlator(m23);
  r.lg_pairwise = correlator(pair12) + correlator(pair13) + correlator(pair23);
  r.decomposition_residual =
      r.lg_pairwise - (4.0 * (r.p_plus_all + r.p_minus_all) +
                       2.0 * (sum_diagonal(r.d1) + sum_diagonal(r.d2)) - 1.0);

  if (r.max_abs_d3() > kIdentityTol) {
    std::ostringstream msg;
    msg << "D3 = " << r.max_abs_d3() << ": later measurement changed earlier statistics";
    throw EngineDefect(msg.str());
  }
  if (std::abs(sum_all(r.d1)) > kDefaultTolerances.normalization ||
      std::abs(sum_all(r.d2)) > kDefaultTolerances.normalization) {
    throw EngineDefect("disturbance tables do not sum to zero");
  }
  return r;
}

// -- OPND ---------------------------------------------------------------------

OpndResult check_opnd(const OnticModel& model, std::string_view preparation,
                      std::string_view measurement, std::span<const ProtocolStep> suffix,
                      const OpndContext& context, double eps) {
  std::vector<ProtocolStep> steps = context.prefix;
  const std::size_t axis = performed_count(steps);
  steps.push_back({context.lead_transformation, std::string(measurement), true});
  steps.insert(steps.end(), suffix.begin(), suffix.end());
  if (performed_count(steps) < 2) {
    throw DomainError("check_opnd: nothing observed besides the tested measurement");
  }

  const auto start = model.preparation(preparation).dense();
  const auto performed = run_steps(model, start, steps);
  steps[context.prefix.size()].perform = false;
  const auto skipped = run_steps(model, start, steps);

  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < performed.rank(); ++k) {
    if (k != axis) keep.push_back(k);
  }
  const auto summed_out = marginalize(performed, keep);
  const double gap = max_table_gap(summed_out, skipped);
  return {gap <= eps, gap};
}

CompleteOpndResult check_opnd_complete(const OnticModel& model, std::string_view measurement,
                                       OpndBounds bounds, double eps) {
  if (bounds.suffix_depth == 0) throw DomainError("suffix depth must be at least 1");
  const auto& tested = model.measurement(measurement);
  const std::size_t n = model.states().size();

  std::vector<std::string> leads{""};
  for (const auto& t : model.transformations().names()) leads.push_back(t);
  std::vector<ProtocolStep> alphabet;
  for (const auto& t : leads) {
    for (const auto& m : model.measurements().names()) alphabet.push_back({t, m, true});
  }
  const auto prefixes = step_sequences(alphabet, 0, bounds.prefix_depth);
  const auto suffixes = step_sequences(alphabet, 1, bounds.suffix_depth);

  struct Context {
    std::string preparation;
    const std::vector<ProtocolStep>* prefix;
    std::vector<std::size_t> prefix_outcomes;
    std::string lead;
    std::vector<double> skipped;
    std::vector<double> performed;
  };
  std::vector<Context> contexts;
  for (const auto& [name, mu] : model.preparations()) {
    const auto start = mu.dense();
    for (const auto& prefix : prefixes) {
      for (auto& branch : evolve_branches(model, start, prefix)) {
        for (const auto& lead : leads) {
          std::vector<double> before = branch.state;
          if (!lead.empty()) {
            std::vector<double> moved(n);
            apply_kernel(before, model.transformation(lead), moved);
            before.swap(moved);
          }
          std::vector<double> after(n);
          apply_nonselective(before, tested, after);
          contexts.push_back({name, &prefix, branch.outcomes, lead, std::move(before),
                              std::move(after)});
        }
      }
    }
  }

  CompleteOpndResult result;
  result.bounds = bounds;
  result.contexts_checked = contexts.size();
  result.suffixes_checked = suffixes.size();

  auto consider = [&](const Context& c, const std::vector<ProtocolStep>& suffix, double gap) {
    if (gap > result.max_deviation) {
      result.max_deviation = gap;
      result.worst =
          OpndWitness{c.preparation, *c.prefix, c.prefix_outcomes, c.lead, suffix, gap};
    }
  };

  // Suffix statistics are linear in the starting weights. When there are more
  // contexts than states, tabulate each suffix's response to every point mass
  // once and apply it to all contexts.
  const bool tabulate = contexts.size() > n;
  for (const auto& suffix : suffixes) {
    if (tabulate) {
      std::vector<std::vector<double>> columns(n);
      std::vector<double> unit(n, 0.0);
      for (std::size_t s = 0; s < n; ++s) {
        unit[s] = 1.0;
        columns[s] = run_steps(model, unit, suffix).table();
        unit[s] = 0.0;
      }
      const std::size_t rows = columns.front().size();
      for (const auto& c : contexts) {
        double gap = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          double delta = 0.0;
          for (std::size_t s = 0; s < n; ++s) {
            const double d = c.performed[s] - c.skipped[s];
            if (d != 0.0) delta += columns[s][i] * d;
          }
          gap = std::max(gap, std::abs(delta));
        }
        consider(c, suffix, gap);
      }
    } else {
      for (const auto& c : contexts) {
        if (c.performed == c.skipped) continue;
        const auto a = run_steps(model, c.performed, suffix);
        const auto b = run_steps(model, c.skipped, suffix);
        consider(c, suffix, max_table_gap(a, b));
      }
    }
  }
  result.non_disturbing = result.max_deviation <= eps;
  return result;
}

// -- implication chain --------------------------------------------------------

ChainRecord check_implication_chain(const LgArrangement& a, OpndBounds bounds, double eps) {
  const auto& model = a.model();
  const auto& spec = a.spec();
  // The arrangement's own conditions must fall inside the quantified contexts.
  bounds.prefix_depth = std::max<std::size_t>(bounds.prefix_depth, 1);
  bounds.suffix_depth = std::max<std::size_t>(bounds.suffix_depth, 2);

  ChainRecord rec;
  const auto oni1 = is_ontically_noninvasive(model.measurement(spec.m1));
  const auto oni2 = is_ontically_noninvasive(model.measurement(spec.m2));
  rec.oni = oni1.noninvasive && oni2.noninvasive;
  rec.oni_deviation = std::max(oni1.max_deviation, oni2.max_deviation);

  rec.complete_m1 = check_opnd_complete(model, spec.m1, bounds, eps);
  rec.complete_m2 =
      spec.m2 == spec.m1 ? rec.complete_m1 : check_opnd_complete(model, spec.m2, bounds, eps);
  rec.opnd_complete = rec.complete_m1.non_disturbing && rec.complete_m2.non_disturbing;
  rec.opnd_complete_deviation =
      std::max(rec.complete_m1.max_deviation, rec.complete_m2.max_deviation);

  const std::vector<ProtocolStep> after_m1{{spec.t1, spec.m2, true}, {spec.t2, spec.m3, true}};
  const std::vector<ProtocolStep> after_m2{{spec.t2, spec.m3, true}};
  const auto s1 = check_opnd(model, spec.preparation, spec.m1, after_m1, {}, eps);
  const auto s2 = check_opnd(model, spec.preparation, spec.m2, after_m2,
                             OpndContext{{{"", spec.m1, true}}, spec.t1}, eps);
  rec.opnd_specific = s1.non_disturbing && s2.non_disturbing;
  rec.opnd_specific_deviation = std::max(s1.max_deviation, s2.max_deviation);

  rec.lg_pairwise = lg_value_pairwise(a);
  rec.lgi = rec.lg_pairwise >= -1.0 - eps;

  if (rec.oni && !rec.opnd_complete) {
    throw EngineDefect("ontically noninvasive measurement found operationally disturbing");
  }
  if (rec.opnd_complete && !rec.opnd_specific) {
    throw EngineDefect("complete non-disturbance did not entail the specific conditions");
  }
  // Each of the eight disturbance entries may sit at eps.
  if (rec.opnd_specific && rec.lg_pairwise < -1.0 - 8.0 * eps - kIdentityTol) {
    throw EngineDefect("specific non-disturbance did not entail the inequality");
  }
  if (rec.lg_pairwise < -1.0 - eps && rec.opnd_specific_deviation == 0.0) {
    throw EngineDefect("inequality violated without any disturbance");
  }
  return rec;
}

}  // namespace lglab
