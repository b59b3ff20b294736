#pragma once

// Brute-force reference: enumerate every ontic path lambda_0 -> ... one
// state at a time and add up path weights per outcome tuple. Shares nothing
// with the engine beyond reading model tables. Exponential; keep |Lambda| small.

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "lglab/lg_analysis.hpp"
#include "lglab/ontic.hpp"
#include "lglab/operational.hpp"

namespace lglab::testing {

struct OracleStep {
  std::string transformation;
  std::string measurement;
  bool perform = true;
};

/// Table indexed first-axis-most-significant over performed measurements.
inline std::vector<double> oracle_joint(const OnticModel& model, const std::vector<double>& start,
                                        const std::vector<OracleStep>& steps) {
  const std::size_t n = model.states().size();
  std::vector<std::size_t> radix;
  for (const auto& st : steps) {
    if (st.perform) radix.push_back(model.measurement(st.measurement).outcomes().size());
  }
  std::size_t cells = 1;
  for (auto r : radix) cells *= r;
  std::vector<double> table(cells, 0.0);

  std::function<void(std::size_t, std::size_t, double, std::size_t)> walk =
      [&](std::size_t k, std::size_t state, double w, std::size_t flat) {
        if (k == steps.size()) {
          table[flat] += w;
          return;
        }
        const auto& st = steps[k];
        auto measure = [&](std::size_t s, double v) {
          if (!st.perform) {
            walk(k + 1, s, v, flat);
            return;
          }
          const Measurement& m = model.measurement(st.measurement);
          const std::size_t outcomes = m.outcomes().size();
          for (std::size_t q = 0; q < outcomes; ++q) {
            const double xi = m.response().probability(s, q);
            if (xi == 0.0) continue;
            const auto& row = m.update().row_ptr(s, q);
            for (std::size_t t = 0; t < n; ++t) {
              const double u = row->weight(t);
              if (u != 0.0) walk(k + 1, t, v * xi * u, flat * outcomes + q);
            }
          }
        };
        if (st.transformation.empty()) {
          measure(state, w);
        } else {
          const auto& row = model.transformation(st.transformation).row(state);
          for (std::size_t t = 0; t < n; ++t) {
            const double u = row.weight(t);
            if (u != 0.0) measure(t, w * u);
          }
        }
      };
  for (std::size_t s = 0; s < n; ++s) {
    if (start[s] != 0.0) walk(0, s, start[s], 0);
  }
  return table;
}

inline std::vector<double> oracle_joint(const OnticModel& model, const std::string& preparation,
                                        const std::vector<OracleStep>& steps) {
  return oracle_joint(model, model.preparation(preparation).dense(), steps);
}

/// Oracle LG quantities for a binary arrangement whose outcome labels are "+1"/"-1".
struct OracleLg {
  std::array<double, 8> all{};  ///< index 4*i + 2*j + k, 0 = +1
  std::array<double, 4> p12{}, p13{}, p23{};
  double lg_all_three = 0.0;
  double lg_pairwise = 0.0;
  std::array<double, 4> d1{}, d2{}, d3{};  ///< index 2*a + b, 0 = +1
};

inline OracleLg oracle_lg(const OnticModel& model, const ArrangementSpec& a) {
  auto steps = [&](bool m1, bool m2, bool m3) {
    return std::vector<OracleStep>{{"", a.m1, m1}, {a.t1, a.m2, m2}, {a.t2, a.m3, m3}};
  };
  // Outcome index 0 must carry +1.
  auto sign = [&](const std::string& m, std::size_t q) {
    return model.measurement(m).outcomes()[q] == "+1" ? 1.0 : -1.0;
  };
  OracleLg r;
  const auto all = oracle_joint(model, a.preparation, steps(true, true, true));
  const auto p12 = oracle_joint(model, a.preparation, steps(true, true, false));
  const auto p13 = oracle_joint(model, a.preparation, steps(true, false, true));
  const auto p23 = oracle_joint(model, a.preparation, steps(false, true, true));
  for (std::size_t i = 0; i < 8; ++i) r.all[i] = all[i];
  for (std::size_t i = 0; i < 4; ++i) {
    r.p12[i] = p12[i];
    r.p13[i] = p13[i];
    r.p23[i] = p23[i];
  }
  double c12 = 0, c13 = 0, c23 = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 2; ++k) {
        const double p = all[4 * i + 2 * j + k];
        const double s1 = sign(a.m1, i), s2 = sign(a.m2, j), s3 = sign(a.m3, k);
        c12 += p * s1 * s2;
        c13 += p * s1 * s3;
        c23 += p * s2 * s3;
        r.d1[2 * j + k] -= p;
        r.d2[2 * i + k] -= p;
        r.d3[2 * i + j] -= p;
      }
    }
  }
  r.lg_all_three = c12 + c13 + c23;
  double q12 = 0, q13 = 0, q23 = 0;
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) {
      q12 += p12[2 * x + y] * sign(a.m1, x) * sign(a.m2, y);
      q13 += p13[2 * x + y] * sign(a.m1, x) * sign(a.m3, y);
      q23 += p23[2 * x + y] * sign(a.m2, x) * sign(a.m3, y);
      r.d1[2 * x + y] += p23[2 * x + y];
      r.d2[2 * x + y] += p13[2 * x + y];
      r.d3[2 * x + y] += p12[2 * x + y];
    }
  }
  r.lg_pairwise = q12 + q13 + q23;
  return r;
}

}  // namespace lglab::testing
