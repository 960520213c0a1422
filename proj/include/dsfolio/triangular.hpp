#pragma once

#include <utility>
#include <vector>

namespace dsfolio {

/// Triangular fuzzy number (a, b, c): support [a, c], core b, a <= b <= c.
/// Used for fuzzy asset returns; units are per-period return fractions.
struct TriangularFuzzyNumber {
  double a;
  double b;
  double c;

  TriangularFuzzyNumber(double a_, double b_, double c_);

  bool degenerate() const { return a == c; }
};

/// Weighted possibilistic mean: (a + 4b + c) / 6.
double mean(const TriangularFuzzyNumber& t);

/// Weighted possibilistic variance: (a^2+b^2+c^2-ab-bc-ca) / 18. Zero iff
/// the triangle is degenerate.
double variance(const TriangularFuzzyNumber& t);

/// Weighted possibilistic skewness (dimensionless). Undefined for a
/// degenerate triangle (zero variance); throws DomainError there.
double skewness(const TriangularFuzzyNumber& t);

/// Non-negative scalar combination sum_i w_i * t_i, exact under standard
/// fuzzy arithmetic: components combine coordinate-wise. Negative weights
/// are rejected (no short selling). An empty list yields (0,0,0).
TriangularFuzzyNumber weighted_sum(
    const std::vector<std::pair<double, TriangularFuzzyNumber>>& terms);

}  // namespace dsfolio
