#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "born_oracle.hpp"
#include "lglab/zoo.hpp"

namespace lglab {
namespace {

constexpr double kPi = std::numbers::pi;

testing::Ket ket_for(const std::string& prep) {
  if (prep == "+z") return testing::bloch_xz(0.0);
  if (prep == "-z") return testing::bloch_xz(kPi);
  if (prep == "+x") return testing::bloch_xz(kPi / 2);
  return testing::bloch_xz(3 * kPi / 2);
}

/// Protocol "", T1, T2 with the given bases and perform flags.
Protocol protocol_for(const std::string& prep, std::array<const char*, 3> bases, unsigned mask) {
  Protocol p{prep, {}};
  const char* t[3] = {"", "T1", "T2"};
  for (std::size_t k = 0; k < 3; ++k) p.steps.push_back({t[k], bases[k], ((mask >> k) & 1u) != 0});
  return p;
}

std::vector<testing::BornStep> born_steps(double t1, double t2, std::array<const char*, 3> bases,
                                          unsigned mask) {
  const double rot[3] = {0.0, t1, t2};
  std::vector<testing::BornStep> s;
  for (std::size_t k = 0; k < 3; ++k) {
    s.push_back({rot[k], std::string(bases[k]) == "Z" ? testing::Basis::kZ : testing::Basis::kX,
                 ((mask >> k) & 1u) != 0});
  }
  return s;
}

TEST(Qubit, LgValues) {
  EXPECT_NEAR(lg_value_pairwise(build_qubit_arrangement(0.0, 0.0)), 3.0, 1e-15);
  EXPECT_NEAR(lg_value_pairwise(build_qubit_arrangement(kPi / 2, kPi / 2)), -1.0, 1e-15);
  EXPECT_NEAR(lg_value_pairwise(build_qubit_arrangement(2 * kPi / 3, 2 * kPi / 3)), -1.5, 1e-12);
}

TEST(Qubit, BornStatisticsForEveryProtocol) {
  const std::vector<std::pair<double, double>> angles{
      {2 * kPi / 3, 2 * kPi / 3}, {kPi / 2, kPi / 2}, {0.3, 1.7}, {kPi, 0.1}, {5.9, 4.4}, {0.0, 0.0}};
  const std::vector<std::array<const char*, 3>> bases{
      {"Z", "Z", "Z"}, {"X", "Z", "X"}, {"Z", "X", "Z"}, {"X", "X", "X"}};
  for (const auto& [t1, t2] : angles) {
    const auto b = build_qubit(t1, t2);
    for (const auto& prep : {"+z", "-z", "+x", "-x"}) {
      for (const auto& basis : bases) {
        for (unsigned mask = 1; mask < 8; ++mask) {
          const auto j = run_protocol(*b.model, protocol_for(prep, basis, mask));
          const auto born = testing::born_joint(ket_for(prep), born_steps(t1, t2, basis, mask));
          ASSERT_EQ(j.size(), born.size());
          for (std::size_t i = 0; i < born.size(); ++i) {
            EXPECT_NEAR(j.table()[i], born[i], 1e-12) << prep << " " << t1 << " " << t2 << " mask " << mask;
          }
        }
      }
    }
  }
}

TEST(Qubit, OnticSpaceIsReachableSetOnly) {
  const auto b = build_qubit(2 * kPi / 3, 2 * kPi / 3);
  EXPECT_LT(b.model->states().size(), 40u);
}

TEST(Superselected, LgValues) {
  EXPECT_NEAR(lg_value_pairwise(build_superselected_arrangement(0.0, 0.0)), 3.0, 1e-15);
  EXPECT_NEAR(lg_value_pairwise(build_superselected_arrangement(0.25, 0.25)), 1.25, 1e-15);
  EXPECT_NEAR(lg_value_pairwise(build_superselected_arrangement(0.5, 0.5)), 0.0, 1e-15);
}

TEST(Superselected, NeverViolatesOnSweep) {
  double lowest = 3.0;
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) {
      const double p1 = i / 39.0, p2 = j / 39.0;
      const double v = lg_value_pairwise(build_superselected_arrangement(p1, p2));
      lowest = std::min(lowest, v);
      // Markov correlators (1-2p1) + (1-2p2) + (1-2p1)(1-2p2).
      EXPECT_NEAR(v, (1 - 2 * p1) + (1 - 2 * p2) + (1 - 2 * p1) * (1 - 2 * p2), 1e-14);
    }
  }
  EXPECT_GE(lowest, -1.0);
}

TEST(Superselected, RejectsBadProbabilities) {
  EXPECT_THROW(build_superselected(-0.1, 0.2), DomainError);
  EXPECT_THROW(build_superselected(0.2, 1.1), DomainError);
}

TEST(Ks, DeterministicResponses) {
  const auto b = build_ks(500, 1.0, 1.0);
  const auto& r = b.model->measurement("Z").response();
  for (std::size_t s = 0; s < b.model->states().size(); ++s) EXPECT_TRUE(r.deterministic(s, 0.0));
}

TEST(Ks, SingleShotAlongPreparationAxis) {
  EXPECT_NEAR(ks_response_probability(10000, {0, 0, 1}, {0, 0, 1}), 1.0, 1e-12);
  const double perp = ks_response_probability(10000, {0, 0, 1}, {1, 0, 0});
  EXPECT_NEAR(perp, 0.5, 2e-3);
}

TEST(Ks, DensityNormalizedOnGrid) {
  const auto w = ks_density(1000, {0.6, 0.0, 0.8});
  double sum = 0.0;
  for (double x : w) {
    EXPECT_GE(x, 0.0);
    sum += x;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Ks, BornErrorShrinksWithGrid) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::vector<Vec3> dirs;
  for (int i = 0; i < 50; ++i) {
    Vec3 v{g(rng), g(rng), g(rng)};
    const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    for (double& c : v) c /= r;
    dirs.push_back(v);
  }
  auto sup_error = [&](std::size_t n) {
    double worst = 0.0;
    const Vec3 s{0, 0, 1};
    for (const auto& m : dirs) worst = std::max(worst, std::abs(ks_response_probability(n, s, m) - (1 + m[2]) / 2));
    return worst;
  };
  const double coarse = sup_error(300);
  const double fine = sup_error(10000);
  EXPECT_LT(fine, coarse);
  EXPECT_LE(fine, 2e-2);
}

TEST(Ks, ModelMatchesBornForDeclaredPreparations) {
  const auto b = build_ks(10000, 2 * kPi / 3, 2 * kPi / 3);
  const auto& z = b.model->measurement("Z");
  EXPECT_NEAR(single_shot_probability(b.model->preparation("+z"), nullptr, z, "+1"), 1.0, 1e-12);
  EXPECT_NEAR(single_shot_probability(b.model->preparation("-z"), nullptr, z, "+1"), 0.0, 1e-12);
  EXPECT_NEAR(single_shot_probability(b.model->preparation("+x"), nullptr, z, "+1"), 0.5, 2e-2);
  // After T1 the measured direction has turned by theta1.
  const double expected = (1 + std::cos(2 * kPi / 3)) / 2;
  EXPECT_NEAR(single_shot_probability(b.model->preparation("+z"), &b.model->transformation("T1"), z, "+1"),
              expected, 2e-2);
}

TEST(Ks, ConvergesToQuantumViolation) {
  EXPECT_NEAR(lg_value_pairwise(build_ks_arrangement(10000, 2 * kPi / 3, 2 * kPi / 3)), -1.5, 5e-2);
}

TEST(Ks, GridFloorAndMetadata) {
  EXPECT_THROW(build_ks(99, 1.0, 1.0), DomainError);
  const auto b = build_ks(100, 1.0, 1.0);
  bool grid = false, rule = false;
  for (const auto& [k, v] : b.model->metadata()) {
    grid = grid || (k == "grid" && v == "100");
    rule = rule || k == "update_rule";
  }
  EXPECT_TRUE(grid);
  EXPECT_TRUE(rule);
}

TEST(Bohm, OperationallyEqualToQubit) {
  for (const auto& [t1, t2] : std::vector<std::pair<double, double>>{
           {2 * kPi / 3, 2 * kPi / 3}, {kPi / 2, kPi / 2}, {0.3, 1.7}, {kPi, 0.1}, {5.9, 4.4}}) {
    const auto q = build_qubit(t1, t2);
    const auto b = build_bohm(t1, t2);
    for (const auto& prep : {"+z", "-z", "+x", "-x"}) {
      for (unsigned mask = 1; mask < 8; ++mask) {
        const auto p = protocol_for(prep, {"Z", "Z", "Z"}, mask);
        const auto jq = run_protocol(*q.model, p);
        const auto jb = run_protocol(*b.model, p);
        for (std::size_t i = 0; i < jq.size(); ++i) EXPECT_NEAR(jq.table()[i], jb.table()[i], 1e-12);
      }
    }
  }
}

TEST(Bohm, PathBitIsValueDefinite) {
  const auto b = build_bohm(2 * kPi / 3, 2 * kPi / 3);
  EXPECT_TRUE(check_macrodefinite(*b.model, b.quantity_class("Z")).macrodefinite);
  EXPECT_NEAR(lg_value_pairwise(b.arrangement()), -1.5, 1e-12);
  bool rule = false;
  for (const auto& [k, v] : b.model->metadata()) rule = rule || k == "transport_rule";
  EXPECT_TRUE(rule);
}

TEST(ClassicalChain, ShuffleArrangementMatches) {
  const auto b = build_classical_chain();
  EXPECT_NEAR(lg_value_pairwise(b.arrangement("lg")), lg_value_pairwise(b.arrangement("lg-shuffle")), 1e-14);
}

TEST(Fixtures, ListIsStableAndComplete) {
  const auto a = build_fixtures();
  const auto b = build_fixtures();
  ASSERT_EQ(a.size(), b.size());
  std::set<std::string> names;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].name, b[i].name);
    EXPECT_FALSE(a[i].contract.empty());
    names.insert(a[i].name);
  }
  EXPECT_TRUE(names.contains("lgi-holds-d-nonzero"));
  EXPECT_TRUE(names.contains("null-result-pair"));
  EXPECT_TRUE(names.contains("support-mr-minimal"));
}

TEST(Fixtures, LookupErrors) {
  EXPECT_THROW(fixture(""), DomainError);
  EXPECT_THROW(fixture("no-such-fixture"), DomainError);
}

TEST(Fixtures, InequalityHoldsWithDisturbance) {
  const auto a = fixture("lgi-holds-d-nonzero").bundle.arrangement();
  const auto r = disturbance_report(a);
  EXPECT_GE(r.lg_pairwise, -1.0);
  EXPECT_GT(std::max(r.max_abs_d1(), r.max_abs_d2()), 0.1);
  EXPECT_NEAR(r.lg_pairwise, 3.0 - kFixtureReset, 1e-14);
}

TEST(Zoo, ListAndBuild) {
  const auto& list = zoo_list();
  EXPECT_GE(list.size(), 6u);
  std::set<std::string> names;
  for (const auto& e : list) {
    EXPECT_TRUE(names.insert(e.name).second) << e.name;
    EXPECT_FALSE(e.description.empty());
    ZooParams p;
    p.grid = 200;
    const auto b = build_zoo(e.name, p);
    EXPECT_EQ(b.name, e.name);
    EXPECT_FALSE(b.arrangements.empty()) << e.name;
    EXPECT_NO_THROW(b.arrangement()) << e.name;
  }
  EXPECT_THROW(build_zoo(""), DomainError);
  EXPECT_THROW(build_zoo("nope"), DomainError);
}

}  // namespace
}  // namespace lglab
