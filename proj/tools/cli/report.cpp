#include "report.hpp"

#include <chrono>
#include <ctime>

namespace lglab::cli {

namespace {

Json labels(const StateSpace& space, std::span<const std::size_t> states) {
  Json out = Json::array();
  for (std::size_t s : states) out.push_back(space.label(s));
  return out;
}

Json steps_json(const std::vector<ProtocolStep>& steps) {
  Json out = Json::array();
  for (const auto& st : steps) {
    out.push_back({{"transformation", st.transformation}, {"measurement", st.measurement}, {"perform", st.perform}});
  }
  return out;
}

}  // namespace

Json to_json(const Tolerances& tol) {
  return {{"normalization", tol.normalization},
          {"support", tol.support},
          {"equivalence", tol.equivalence},
          {"hull", tol.hull}};
}

Json to_json(const JointDistribution& joint) {
  Json axes = Json::array();
  for (const auto& a : joint.axes()) {
    axes.push_back({{"step", a.step}, {"measurement", a.measurement}, {"outcomes", a.outcomes}});
  }
  Json rows = Json::array();
  for (std::size_t i = 0; i < joint.size(); ++i) {
    const auto idx = joint.unflatten(i);
    Json outcomes = Json::array();
    for (std::size_t k = 0; k < idx.size(); ++k) outcomes.push_back(joint.axes()[k].outcomes[idx[k]]);
    rows.push_back({{"outcomes", outcomes}, {"probability", joint.table()[i]}});
  }
  return {{"axes", axes}, {"rows", rows}, {"total", joint.total()}};
}

Json to_json(const ArrangementSpec& spec) {
  return {{"preparation", spec.preparation}, {"t1", spec.t1}, {"t2", spec.t2},
          {"m1", spec.m1},                   {"m2", spec.m2}, {"m3", spec.m3}};
}

Json to_json(const SignTable& t) {
  // Keys name the value signs of the two axes.
  return {{"++", t[0][0]}, {"+-", t[0][1]}, {"-+", t[1][0]}, {"--", t[1][1]}};
}

Json to_json(const DisturbanceReport& r) {
  return {{"lg_value_all_three", r.lg_all_three},
          {"lg_value_pairwise", r.lg_pairwise},
          {"p_plus_all", r.p_plus_all},
          {"p_minus_all", r.p_minus_all},
          {"d1", to_json(r.d1)},
          {"d2", to_json(r.d2)},
          {"d3", to_json(r.d3)},
          {"max_abs_d1", r.max_abs_d1()},
          {"max_abs_d2", r.max_abs_d2()},
          {"max_abs_d3", r.max_abs_d3()},
          {"decomposition_residual", r.decomposition_residual}};
}

Json to_json(const CompleteOpndResult& r) {
  Json out{{"non_disturbing", r.non_disturbing},
           {"max_deviation", r.max_deviation},
           {"prefix_depth", r.bounds.prefix_depth},
           {"suffix_depth", r.bounds.suffix_depth},
           {"contexts_checked", r.contexts_checked},
           {"suffixes_checked", r.suffixes_checked}};
  if (r.worst) {
    out["worst"] = {{"preparation", r.worst->preparation},
                    {"prefix", steps_json(r.worst->prefix)},
                    {"prefix_outcomes", r.worst->prefix_outcomes},
                    {"lead_transformation", r.worst->lead_transformation},
                    {"suffix", steps_json(r.worst->suffix)},
                    {"deviation", r.worst->deviation}};
  }
  return out;
}

Json to_json(const ChainRecord& c) {
  return {{"oni", c.oni},
          {"opnd_complete", c.opnd_complete},
          {"opnd_specific", c.opnd_specific},
          {"lgi", c.lgi},
          {"lg_value_pairwise", c.lg_pairwise},
          {"oni_deviation", c.oni_deviation},
          {"opnd_complete_deviation", c.opnd_complete_deviation},
          {"opnd_specific_deviation", c.opnd_specific_deviation},
          {"complete_m1", to_json(c.complete_m1)},
          {"complete_m2", to_json(c.complete_m2)}};
}

Json to_json(const StateSpace& space, const Classification& c) {
  Json witnesses = Json::array();
  for (const auto& w : c.macrodefiniteness.witnesses) {
    witnesses.push_back({{"state", w.state},
                         {"measurement", w.measurement},
                         {"outcome", w.outcome},
                         {"probability", w.probability},
                         {"reason", w.reason}});
  }
  Json eigen = Json::array();
  for (const auto& e : c.eigenstates) {
    eigen.push_back({{"outcome", e.outcome},
                     {"preparations", e.preparations},
                     {"support_size", e.states.size()},
                     {"support", labels(space, e.states)}});
  }
  Json preps = Json::array();
  for (const auto& p : c.preparations) {
    Json weights = Json::object();
    for (const auto& [name, w] : p.hull_weights) weights[name] = w;
    Json decomposition = Json::array();
    for (const auto& v : p.decomposition) {
      Json component = Json::object();
      for (const auto& e : v.component) component[space.label(e.state)] = e.weight;
      decomposition.push_back({{"outcome", v.outcome}, {"weight", v.weight}, {"component", component}});
    }
    preps.push_back({{"preparation", p.preparation},
                     {"hull_feasible", p.hull_feasible},
                     {"hull_residual_tv", p.hull_residual},
                     {"hull_weights", weights},
                     {"support_contained", p.support_contained},
                     {"novel_state_count", p.novel_state_count},
                     {"novel_states", p.novel_states},
                     {"value_decomposition", decomposition}});
  }
  return {{"quantity", c.quantity},
          {"declared_preparations", c.declared_preparations},
          {"macrodefinite", c.macrodefiniteness.macrodefinite},
          {"offending_states", c.macrodefiniteness.offending_states},
          {"macrodefiniteness_witnesses", witnesses},
          {"verdict", std::string(to_string(c.verdict))},
          {"eigenstate_supports", eigen},
          {"preparations", preps}};
}

Json to_json(const EquivalenceReport& r) {
  return {{"equivalent", r.equivalent},
          {"max_deviation", r.max_deviation},
          {"probes_checked", r.probes_checked},
          {"probe_set", r.probe_set}};
}

Json to_json(const DetectionProbabilities& d) {
  return {{"both_open", d.both_open},
          {"slit1_blocked", d.slit1_blocked},
          {"slit2_blocked", d.slit2_blocked},
          {"interference", d.interference}};
}

Json to_json(const ViolationMap& map) {
  Json rows = Json::array();
  for (const auto& r : map.rows) {
    rows.push_back({{"mod1_sq", r.mod1_sq},
                    {"phi", r.phi},
                    {"lg_plus", r.lg_plus},
                    {"lg_plus_mirrored", r.lg_plus_mirrored},
                    {"violated", r.violated}});
  }
  Json boundary = Json::array();
  for (const auto& b : map.boundary) {
    boundary.push_back({{"mod1_sq", b.mod1_sq}, {"phi_low", b.phi_low}, {"phi_high", b.phi_high}});
  }
  return {{"rows", rows}, {"boundary", boundary}};
}

Json envelope(const std::string& command, const Json& inputs, const Tolerances& tol,
              const std::string& timestamp) {
  Json out{{"report_version", kReportVersion},
           {"tool", "lglab"},
           {"tool_version", LGLAB_VERSION},
           {"command", command},
           {"inputs", inputs},
           {"tolerances", to_json(tol)}};
  if (!timestamp.empty()) out["generated_at"] = timestamp;
  return out;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace lglab::cli
