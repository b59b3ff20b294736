#include <algorithm>

#include "build_util.hpp"
#include "lglab/classifier.hpp"
#include "lglab/zoo.hpp"
#include "stage_angles.hpp"

namespace lglab {

ModelBundle build_lgi_holds_d_nonzero(double reset) {
  if (!(reset >= 0.0 && reset <= 1.0)) throw DomainError("reset probability must lie in [0, 1]");
  auto space = detail::make_space({"+", "-"});
  auto model = std::make_shared<OnticModel>(space);
  const std::array<double, 2> half{0.5, 0.5};
  model->add_preparation("uniform", Distribution::from_dense(space, half));
  model->add_preparation("+", Distribution::point_mass(space, 0));
  model->add_preparation("-", Distribution::point_mass(space, 1));
  model->add_measurement("Z", detail::binary_readout("Z", space, {1.0, 0.0}));
  const std::array<double, 2> after_minus{reset, 1.0 - reset};
  model->add_measurement(
      "Z_reset",
      detail::binary_measurement(
          "Z_reset", space, {1.0, 0.0},
          {{detail::delta(space, 0), nullptr},
           {nullptr, detail::shared(Distribution::from_dense(space, after_minus))}}));
  model->set_metadata("family", "fixture");
  model->set_metadata("reset", detail::angle_text(reset));

  ModelBundle b;
  b.name = "lgi-holds-d-nonzero";
  b.model = model;
  b.quantity_classes.add("Z", {"Z", "Z_reset"});
  b.protocols.add("three", Protocol{"uniform", {{"", "Z"}, {"", "Z_reset"}, {"", "Z"}}});
  b.arrangements.add("lg", ArrangementSpec{"uniform", "", "", "Z", "Z_reset", "Z"});
  return b;
}

ModelBundle build_null_result_pair() {
  enum : std::size_t { kPa, kPb, kMa, kMb };
  auto space = detail::make_space({"+a", "+b", "-a", "-b"});
  auto model = std::make_shared<OnticModel>(space);
  auto dist = [&](std::array<double, 4> w) { return Distribution::from_dense(space, w); };
  model->add_preparation("+a", Distribution::point_mass(space, kPa));
  model->add_preparation("-b", Distribution::point_mass(space, kMb));
  model->add_preparation("skewed", dist({0.1, 0.2, 0.3, 0.4}));
  model->add_preparation("uniform", dist({0.25, 0.25, 0.25, 0.25}));

  std::vector<DistributionPtr> hop;
  for (auto w : std::array<std::array<double, 4>, 4>{{{0.7, 0.1, 0.2, 0.0},
                                                      {0.0, 0.6, 0.0, 0.4},
                                                      {0.3, 0.0, 0.5, 0.2},
                                                      {0.1, 0.1, 0.1, 0.7}}}) {
    hop.push_back(detail::shared(dist(w)));
  }
  model->add_transformation("T", TransformationKernel(space, std::move(hop)));

  const std::vector<double> plus{1.0, 1.0, 0.0, 0.0};
  auto d = [&](std::size_t s) { return detail::delta(space, s); };
  // Each measurement leaves the states carrying its null value untouched and
  // swaps the microstate of the others.
  model->add_measurement("M_plus_null",
                         detail::binary_measurement("M_plus_null", space, plus,
                                                    {{d(kPa), nullptr},
                                                     {d(kPb), nullptr},
                                                     {nullptr, d(kMb)},
                                                     {nullptr, d(kMa)}}));
  model->add_measurement("M_minus_null",
                         detail::binary_measurement("M_minus_null", space, plus,
                                                    {{d(kPb), nullptr},
                                                     {d(kPa), nullptr},
                                                     {nullptr, d(kMa)},
                                                     {nullptr, d(kMb)}}));
  model->set_metadata("family", "fixture");

  ModelBundle b;
  b.name = "null-result-pair";
  b.model = model;
  b.quantity_classes.add("Q", {"M_plus_null", "M_minus_null"});
  b.protocols.add("three", Protocol{"skewed", {{"", "M_plus_null"}, {"T", "M_minus_null"}, {"T", "M_plus_null"}}});
  b.arrangements.add("lg", ArrangementSpec{"skewed", "T", "T", "M_plus_null", "M_minus_null", "M_plus_null"});
  return b;
}

ModelBundle build_support_mr_minimal() {
  auto space = detail::make_space({"a", "b", "c"});
  auto model = std::make_shared<OnticModel>(space);
  auto dist = [&](std::array<double, 3> w) { return Distribution::from_dense(space, w); };
  model->add_preparation("E+", dist({0.5, 0.5, 0.0}));
  model->add_preparation("E-", dist({0.0, 0.0, 1.0}));
  model->add_preparation("E'", dist({0.5, 0.0, 0.5}));
  model->add_measurement("Z", detail::binary_readout("Z", space, {1.0, 1.0, 0.0}));
  model->set_metadata("family", "fixture");

  ModelBundle b;
  b.name = "support-mr-minimal";
  b.model = model;
  b.quantity_classes.add("Z", {"Z"});
  b.protocols.add("three", Protocol{"E'", {{"", "Z"}, {"", "Z"}, {"", "Z"}}});
  b.arrangements.add("lg", ArrangementSpec{"E'", "", "", "Z", "Z", "Z"});
  return b;
}

namespace {

[[noreturn]] void contract_failed(const std::string& name, const std::string& detail) {
  throw EngineDefect("fixture '" + name + "' violates its contract: " + detail);
}

Fixture verify_lgi_holds_d_nonzero() {
  Fixture f{"lgi-holds-d-nonzero", "max|D| > 0.1 and lg_value_pairwise >= -1",
            build_lgi_holds_d_nonzero(kFixtureReset)};
  const auto report = disturbance_report(f.bundle.arrangement());
  const double d = std::max(report.max_abs_d1(), report.max_abs_d2());
  if (!(d > 0.1)) contract_failed(f.name, "max|D| = " + std::to_string(d));
  if (report.lg_pairwise < -1.0) contract_failed(f.name, "lg = " + std::to_string(report.lg_pairwise));
  return f;
}

Fixture verify_null_result_pair() {
  Fixture f{"null-result-pair",
            "M_plus_null noninvasive on +1, M_minus_null on -1, equivalent responses",
            build_null_result_pair()};
  const auto& model = *f.bundle.model;
  if (!is_ontically_noninvasive(model.measurement("M_plus_null"), "+1").noninvasive ||
      is_ontically_noninvasive(model.measurement("M_plus_null"), "-1").noninvasive) {
    contract_failed(f.name, "M_plus_null is not partially noninvasive for +1 only");
  }
  if (!is_ontically_noninvasive(model.measurement("M_minus_null"), "-1").noninvasive ||
      is_ontically_noninvasive(model.measurement("M_minus_null"), "+1").noninvasive) {
    contract_failed(f.name, "M_minus_null is not partially noninvasive for -1 only");
  }
  const auto probes = default_preparation_probes(model);
  if (!measurements_equivalent(model, "M_plus_null", "M_minus_null", probes).equivalent) {
    contract_failed(f.name, "responses differ");
  }
  return f;
}

Fixture verify_support_mr_minimal() {
  Fixture f{"support-mr-minimal", "classified MR2-support", build_support_mr_minimal()};
  const auto c = classify(*f.bundle.model, f.bundle.quantity_class());
  if (c.verdict != Verdict::kSupport) {
    contract_failed(f.name, "verdict " + std::string(to_string(c.verdict)));
  }
  return f;
}

}  // namespace

std::vector<Fixture> build_fixtures() {
  std::vector<Fixture> out;
  out.push_back(verify_lgi_holds_d_nonzero());
  out.push_back(verify_null_result_pair());
  out.push_back(verify_support_mr_minimal());
  return out;
}

Fixture fixture(std::string_view name) {
  if (name.empty()) throw DomainError("empty fixture name");
  if (name == "lgi-holds-d-nonzero") return verify_lgi_holds_d_nonzero();
  if (name == "null-result-pair") return verify_null_result_pair();
  if (name == "support-mr-minimal") return verify_support_mr_minimal();
  throw DomainError("unknown fixture '" + std::string(name) + "'");
}

}  // namespace lglab
