#pragma once

#include <array>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "dsfolio/evidence.hpp"
#include "dsfolio/portfolio.hpp"
#include "dsfolio/triangular.hpp"

namespace testutil {

inline dsfolio::Frame performance_frame() {
  return dsfolio::Frame({"H_P", "A_P", "P_P"});
}

/// Random mass function over the frame. Always keeps positive mass on the
/// full set so any pair combines with conflict < 1.
inline dsfolio::MassFunction random_mass(const dsfolio::Frame& frame,
                                         std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const dsfolio::HypothesisSet full = frame.full_set();
  std::map<dsfolio::HypothesisSet, double> raw;
  std::uniform_int_distribution<int> n_focal(1, 3);
  const int extra = n_focal(rng);
  for (int i = 0; i < extra; ++i) {
    std::uniform_int_distribution<dsfolio::HypothesisSet> subset(1, full);
    raw[subset(rng)] += unit(rng);
  }
  raw[full] += 0.05 + unit(rng);
  double sum = 0.0;
  for (const auto& [set, value] : raw) sum += value;
  std::map<dsfolio::HypothesisSet, double> masses;
  for (const auto& [set, value] : raw) masses[set] = value / sum;
  // Rounding drift: put any residual on the full set.
  double total = 0.0;
  for (const auto& [set, value] : masses) total += value;
  masses[full] += 1.0 - total;
  return dsfolio::MassFunction(frame, masses);
}

/// Exact centroid of a full trapezoid (a,b,c,d) at height 1.
inline double trapezoid_centroid(double a, double b, double c, double d) {
  const double left_area = (b - a) / 2.0;
  const double left_moment = (b - a) * (2.0 * b + a) / 6.0;
  const double core_area = c - b;
  const double core_moment = (c * c - b * b) / 2.0;
  const double right_area = (d - c) / 2.0;
  const double right_moment = (d - c) * (2.0 * c + d) / 6.0;
  return (left_moment + core_moment + right_moment) /
         (left_area + core_area + right_area);
}

struct Moments {
  double mean;
  double variance;
  double skewness;
};

/// Level-set quadrature oracle for the weighted possibilistic moments of a
/// triangular number: cut endpoints u(g)=a+g(b-a), v(g)=c-g(c-b) carry equal
/// weight under the density 2g on [0,1]. Simpson integration of the raw
/// moments, then central/normalized forms. Independent of the closed forms.
inline Moments possibilistic_moments_oracle(double a, double b, double c,
                                            int intervals = 4000) {
  auto raw_moment = [&](int k) {
    const double h = 1.0 / intervals;
    double acc = 0.0;
    for (int i = 0; i <= intervals; ++i) {
      const double g = i * h;
      const double u = a + g * (b - a);
      const double v = c - g * (c - b);
      const double f = 2.0 * g * (std::pow(u, k) + std::pow(v, k)) / 2.0;
      const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      acc += w * f;
    }
    return acc * h / 3.0;
  };
  const double m1 = raw_moment(1);
  const double m2 = raw_moment(2);
  const double m3 = raw_moment(3);
  Moments out{};
  out.mean = m1;
  out.variance = m2 - m1 * m1;
  const double central3 = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
  out.skewness = central3 / std::pow(out.variance, 1.5);
  return out;
}

/// Reference run constants: per-asset expected fuzzy returns, semivariances
/// and the published allocation (rank order).
inline const std::array<double, 10> kReferenceExpectedReturns = {
    0.1443, 0.0529, 0.2801, 0.1275, 0.1228,
    0.0356, 0.0484, 0.0579, 0.1379, 0.0437};
inline const std::array<double, 10> kReferenceSemivariances = {
    0.00004, 0.00254, 0.00314, 0.0373, 0.00557,
    0.0002, 0.00098, 0.0013, 0.00049, 0.00018};
inline const std::array<double, 10> kReferenceWeights = {
    0.2403, 0.2235, 0.1970, 0.0764, 0.0574,
    0.0525, 0.0452, 0.0413, 0.0407, 0.0255};

/// Ten assets whose fuzzy-return means equal the reference expected returns
/// exactly: triangle (E - s/6 - p, E - s/6, E - s/6 + q) has mean E when
/// q - p = s. Mildly right-skewed so the skewness bound is satisfiable.
inline dsfolio::PortfolioProblem reference_problem() {
  dsfolio::PortfolioProblem problem;
  constexpr double p = 0.05, q = 0.08;
  for (std::size_t i = 0; i < kReferenceExpectedReturns.size(); ++i) {
    const double core = kReferenceExpectedReturns[i] - (q - p) / 6.0;
    problem.assets.push_back(dsfolio::Asset{
        "asset" + std::to_string(i + 1),
        dsfolio::TriangularFuzzyNumber(core - p, core, core + q),
        kReferenceSemivariances[i]});
  }
  problem.risk_free_rate = 0.01;
  problem.alpha = 0.05;
  problem.beta = 0.5;
  problem.gamma = 0.001;
  problem.max_weight = 0.8;
  problem.fixed_mu_s = 0.0016;
  problem.rank_preference = true;
  return problem;
}

inline Eigen::VectorXd reference_weight_vector() {
  Eigen::VectorXd w(10);
  for (int i = 0; i < 10; ++i) w[i] = kReferenceWeights[static_cast<std::size_t>(i)];
  return w / w.sum();  // published weights round to 0.9998
}

}  // namespace testutil
