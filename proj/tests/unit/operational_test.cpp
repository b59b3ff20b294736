#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lglab/operational.hpp"
#include "lglab/zoo.hpp"
#include "tiny_model.hpp"

namespace lglab {
namespace {

using testing::TinyModel;
constexpr double kPi = std::numbers::pi;

double p(const JointDistribution& j, std::vector<std::string> labels) { return j.probability_of(labels); }

TEST(RunProtocol, DeterministicReadoutOnPointMass) {
  TinyModel t({"a", "b"});
  t.prep("E", {0, 1});
  t.measure("M", t.binary("M", {1.0, 0.0}));
  t.measure("N", t.binary("N", {0.5, 0.5}));
  const auto j = run_protocol(*t.finish(), {"E", {{"", "N", false}, {"", "M"}, {"", "N", false}}});
  ASSERT_EQ(j.rank(), 1u);
  EXPECT_EQ(j.axes()[0].step, 1u);
  EXPECT_EQ(p(j, {"+1"}), 0.0);
  EXPECT_EQ(p(j, {"-1"}), 1.0);
}

TEST(RunProtocol, QubitQuarterTurnBetweenTwoMeasurements) {
  const auto b = build_qubit(kPi / 2, kPi / 2);
  const auto j = run_protocol(*b.model, {"+z", {{"", "Z"}, {"T1", "Z"}}});
  EXPECT_NEAR(p(j, {"+1", "+1"}), 0.5, 1e-15);
  EXPECT_NEAR(p(j, {"+1", "-1"}), 0.5, 1e-15);
  EXPECT_NEAR(p(j, {"-1", "+1"}), 0.0, 1e-15);
}

TEST(RunProtocol, QubitThreeQuarterTurns) {
  const auto b = build_qubit(kPi / 2, kPi / 2);
  const auto j = run_protocol(*b.model, b.protocols.at("three"));
  EXPECT_NEAR(p(j, {"+1", "+1", "+1"}), 0.25, 1e-15);
  EXPECT_NEAR(p(j, {"+1", "-1", "+1"}), 0.25, 1e-15);
  EXPECT_NEAR(j.total(), 1.0, 1e-15);
}

TEST(RunProtocol, UnresolvedNamesRejected) {
  const auto b = build_qubit(kPi / 2, kPi / 2);
  EXPECT_THROW(run_protocol(*b.model, {"nope", {{"", "Z"}}}), DomainError);
  EXPECT_THROW(run_protocol(*b.model, {"+z", {{"T9", "Z"}}}), DomainError);
  EXPECT_THROW(run_protocol(*b.model, {"+z", {{"", "Y"}}}), DomainError);
  EXPECT_THROW(run_protocol(*b.model, {"+z", {{"", "Z", false}}}), DomainError);
}

TEST(RunProtocol, ArbitraryLength) {
  const auto b = build_superselected(0.1, 0.1);
  std::vector<ProtocolStep> steps{{"", "Z"}};
  for (int i = 0; i < 6; ++i) steps.push_back({"T1", "Z"});
  const auto j = run_protocol(*b.model, {"+z", steps});
  EXPECT_EQ(j.rank(), 7u);
  EXPECT_EQ(j.size(), 128u);
  EXPECT_NEAR(j.total(), 1.0, 1e-14);
}

TEST(Marginalize, KeepAllIsIdentity) {
  const auto b = build_qubit(1.0, 0.4);
  const auto j = run_protocol(*b.model, b.protocols.at("three"));
  const std::vector<std::size_t> all{0, 1, 2};
  EXPECT_EQ(marginalize(j, all).table(), j.table());
}

TEST(Marginalize, UniformPairToOneAxis) {
  JointDistribution j({{0, "A", {"+1", "-1"}}, {1, "B", {"+1", "-1"}}}, {0.25, 0.25, 0.25, 0.25});
  const std::vector<std::size_t> keep{1};
  const auto m = marginalize(j, keep);
  EXPECT_EQ(m.table(), (std::vector<double>{0.5, 0.5}));
  EXPECT_THROW(marginalize(j, std::vector<std::size_t>{}), DomainError);
}

TEST(Marginalize, HandSumOnEightEntryTable) {
  const std::vector<double> t{0.05, 0.10, 0.15, 0.20, 0.02, 0.08, 0.13, 0.27};
  JointDistribution j({{0, "M1", {"+1", "-1"}}, {1, "M2", {"+1", "-1"}}, {2, "M3", {"+1", "-1"}}}, t);
  const auto m1 = marginalize(j, std::vector<std::size_t>{0});
  EXPECT_NEAR(m1.table()[0], 0.05 + 0.10 + 0.15 + 0.20, 1e-15);
  EXPECT_NEAR(m1.table()[1], 0.02 + 0.08 + 0.13 + 0.27, 1e-15);
  const auto m31 = marginalize(j, std::vector<std::size_t>{2, 0});
  EXPECT_EQ(m31.axes()[0].measurement, "M3");
  EXPECT_NEAR(m31.table()[0], 0.05 + 0.15, 1e-15);  // (M3=+1, M1=+1)
  EXPECT_NEAR(m31.table()[1], 0.02 + 0.13, 1e-15);  // (M3=+1, M1=-1)
}

TEST(Expectation, ConstantObservable) {
  const auto b = build_qubit(0.7, 1.3);
  const auto j = run_protocol(*b.model, b.protocols.at("three"));
  ObservableAssignment a;
  a.set("Z", "+1", 1.0);
  a.set("Z", "-1", 1.0);
  EXPECT_NEAR(expectation(j, a, std::vector<std::size_t>{0, 1, 2}), 1.0, 1e-15);
}

TEST(Expectation, QubitPairCorrelators) {
  for (double theta : {kPi / 2, 2 * kPi / 3}) {
    const auto b = build_qubit(theta, theta);
    const auto j = run_protocol(*b.model, {"+z", {{"", "Z"}, {"T1", "Z"}}});
    EXPECT_NEAR(expectation(j, ObservableAssignment::from_model(*b.model), std::vector<std::size_t>{0, 1}),
                std::cos(theta), 1e-15);
  }
}

TEST(Expectation, LinearInValues) {
  const auto b = build_qubit(0.9, 2.1);
  const auto j = run_protocol(*b.model, b.protocols.at("three"));
  const std::vector<std::size_t> axes{1};
  auto with = [&](double plus, double minus) {
    ObservableAssignment a;
    a.set("Z", "+1", plus);
    a.set("Z", "-1", minus);
    return expectation(j, a, axes);
  };
  EXPECT_NEAR(with(2.0 + 3.0, -1.0 + 0.5), with(2.0, -1.0) + with(3.0, 0.5), 1e-14);
  EXPECT_NEAR(with(-4.0, 6.0), -2.0 * with(2.0, -3.0), 1e-14);
}

TEST(PreparationEquivalence, SamePreparation) {
  const auto b = build_qubit(0.3, 0.3);
  const auto probes = default_probes(*b.model);
  const auto r = preparations_equivalent(*b.model, "+x", "+x", probes);
  EXPECT_TRUE(r.equivalent);
  EXPECT_EQ(r.max_deviation, 0.0);
  EXPECT_FALSE(r.probe_set.empty());
}

TEST(PreparationEquivalence, OnticallyDistinctButIndistinguishable) {
  TinyModel t({"a", "b", "c"});
  t.prep("mix", {0.5, 0.5, 0.0});
  t.prep("c", {0.0, 0.0, 1.0});
  t.transform("T", {{0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}, {0.0, 0.0, 1.0}});
  t.measure("M", t.binary("M", {1.0, 0.0, 0.5}));
  const auto m = t.finish();
  const auto r = preparations_equivalent(*m, "mix", "c", default_probes(*m));
  EXPECT_TRUE(r.equivalent);
  EXPECT_EQ(r.probes_checked, 2u);
  EXPECT_NE(m->preparation("mix"), m->preparation("c"));
}

TEST(PreparationEquivalence, DiscriminatingReadout) {
  TinyModel t({"a", "b"});
  t.prep("E", {0.3, 0.7});
  t.prep("swapped", {0.7, 0.3});
  t.measure("M", t.binary("M", {1.0, 0.0}));
  const auto m = t.finish();
  const auto r = preparations_equivalent(*m, "E", "swapped", default_probes(*m));
  EXPECT_FALSE(r.equivalent);
  EXPECT_NEAR(r.max_deviation, 0.4, 1e-15);
}

TEST(MeasurementEquivalence, SameMeasurement) {
  const auto b = build_qubit(0.3, 0.3);
  EXPECT_TRUE(measurements_equivalent(*b.model, "Z", "Z", default_preparation_probes(*b.model)).equivalent);
}

TEST(MeasurementEquivalence, UpdatesIgnored) {
  const auto b = build_classical_chain();
  const auto r = measurements_equivalent(*b.model, "Z", "Z_shuffle", default_preparation_probes(*b.model));
  EXPECT_TRUE(r.equivalent);
  EXPECT_EQ(r.max_deviation, 0.0);
}

TEST(MeasurementEquivalence, ResponseDiffersOnReachableState) {
  TinyModel t({"a", "b"});
  t.prep("E", {0.5, 0.5});
  t.measure("M", t.binary("M", {1.0, 0.0}));
  t.measure("N", t.binary("N", {1.0, 0.2}));
  const auto m = t.finish();
  const auto r = measurements_equivalent(*m, "M", "N", default_preparation_probes(*m));
  EXPECT_FALSE(r.equivalent);
  EXPECT_NEAR(r.max_deviation, 0.1, 1e-15);
}

TEST(MeasurementEquivalence, UnreachableDifferenceInvisible) {
  TinyModel t({"a", "b"});
  t.prep("E", {1.0, 0.0});
  t.measure("M", t.binary("M", {1.0, 0.0}));
  t.measure("N", t.binary("N", {1.0, 0.7}));
  const auto m = t.finish();
  EXPECT_TRUE(measurements_equivalent(*m, "M", "N", default_preparation_probes(*m)).equivalent);
}

TEST(MeasurementEquivalence, OutcomeCorrespondence) {
  TinyModel t({"a", "b"});
  t.prep("E", {0.5, 0.5});
  t.measure("M", t.binary("M", {1.0, 0.0}));
  t.measure("U", Measurement("U", ResponseFunction(t.space(), {"up", "down"}, {1, 0, 0, 1}),
                             MeasurementUpdate::identity(t.space(), 2)));
  const auto m = t.finish();
  const auto probes = default_preparation_probes(*m);
  EXPECT_THROW(measurements_equivalent(*m, "M", "U", probes), DomainError);
  const std::map<std::string, std::string> corr{{"+1", "up"}, {"-1", "down"}};
  EXPECT_TRUE(measurements_equivalent(*m, "M", "U", probes, corr).equivalent);
  const std::map<std::string, std::string> bad{{"+1", "up"}, {"-1", "up"}};
  EXPECT_THROW(measurements_equivalent(*m, "M", "U", probes, bad), DomainError);
}

TEST(OperationalEigenstate, DeterministicPointMass) {
  TinyModel t({"a", "b"});
  t.prep("E", {1.0, 0.0});
  t.measure("M", t.binary("M", {1.0, 0.0}));
  const std::vector<std::string> cls{"M"};
  EXPECT_TRUE(is_operational_eigenstate(*t.finish(), "E", cls, "+1"));
  EXPECT_FALSE(is_operational_eigenstate(*t.finish(), "E", cls, "-1"));
}

TEST(OperationalEigenstate, QubitPlusIsNotZEigenstate) {
  const auto b = build_qubit(0.3, 0.3);
  const std::vector<std::string> cls{"Z"};
  EXPECT_FALSE(is_operational_eigenstate(*b.model, "+x", cls, "+1"));
  EXPECT_FALSE(is_operational_eigenstate(*b.model, "+x", cls, "-1"));
  EXPECT_TRUE(is_operational_eigenstate(*b.model, "+z", cls, "+1"));
}

TEST(OperationalEigenstate, ClosedUnderMixtures) {
  TinyModel t({"a", "b", "c", "d"});
  t.measure("M", t.binary("M", {1.0, 1.0, 0.0, 0.3}));
  t.measure("N", t.binary("N", {1.0, 1.0, 0.0, 0.3}, {{{0, 1, 0, 0}, {}}, {{1, 0, 0, 0}, {}},
                                                     {{}, {0, 0, 1, 0}}, {{0, 0, 0, 1}, {0, 0, 0, 1}}}));
  const auto m = t.finish();
  const std::vector<std::string> cls{"M", "N"};
  for (double w = 0.0; w <= 1.0; w += 0.125) {
    EXPECT_TRUE(is_operational_eigenstate(*m, t.dist({w, 1.0 - w, 0, 0}), cls, "+1"));
    EXPECT_FALSE(is_operational_eigenstate(*m, t.dist({w * 0.9, (1.0 - w) * 0.9, 0, 0.1}), cls, "+1"));
  }
}

}  // namespace
}  // namespace lglab
