#include "dsfolio/triangular.hpp"

#include <cmath>

#include "dsfolio/errors.hpp"

namespace dsfolio {

TriangularFuzzyNumber::TriangularFuzzyNumber(double a_, double b_, double c_)
    : a(a_), b(b_), c(c_) {
  if (!(a <= b && b <= c)) {
    throw DomainError("triangular fuzzy number requires a <= b <= c");
  }
}

double mean(const TriangularFuzzyNumber& t) {
  return (t.a + 4.0 * t.b + t.c) / 6.0;
}

double variance(const TriangularFuzzyNumber& t) {
  // (a^2+b^2+c^2-ab-bc-ca)/18 rewritten over the spreads; exact zero for a
  // degenerate triangle and exactly translation invariant.
  const double p = t.b - t.a;
  const double q = t.c - t.b;
  return (p * p + p * q + q * q) / 18.0;
}

double skewness(const TriangularFuzzyNumber& t) {
  if (t.degenerate()) {
    throw DomainError("skewness undefined for a degenerate fuzzy number");
  }
  const double a = t.a, b = t.b, c = t.c;
  const double p = b - a;
  const double r = c - b;
  const double q = p * p + p * r + r * r;  // = a^2+b^2+c^2-ab-bc-ca
  const double numerator = 19.0 * (a * a * a + c * c * c) - 8.0 * b * b * b -
                           42.0 * b * (a * a + c * c) +
                           12.0 * b * b * (a + c) -
                           15.0 * (a * a * c + a * c * c) + 60.0 * a * b * c;
  const double denominator = 10.0 * std::sqrt(2.0) * std::pow(std::sqrt(q), 3);
  return numerator / denominator;
}

TriangularFuzzyNumber weighted_sum(
    const std::vector<std::pair<double, TriangularFuzzyNumber>>& terms) {
  double a = 0.0, b = 0.0, c = 0.0;
  for (const auto& [w, t] : terms) {
    if (w < 0.0) {
      throw DomainError("weighted_sum requires non-negative weights");
    }
    a += w * t.a;
    b += w * t.b;
    c += w * t.c;
  }
  return TriangularFuzzyNumber(a, b, c);
}

}  // namespace dsfolio
