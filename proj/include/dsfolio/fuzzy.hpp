#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dsfolio {

/// Trapezoidal membership set with breakpoints a <= b <= c <= d: membership
/// is 0 outside [a,d], 1 on [b,c], linear on the shoulders. a==b (or c==d)
/// collapses the shoulder into a plateau edge with membership 1.
struct TrapezoidalSet {
  std::string label;
  double a, b, c, d;

  TrapezoidalSet(std::string label_, double a_, double b_, double c_, double d_);
};

/// Membership degree of x in the set, in [0,1].
double membership(const TrapezoidalSet& set, double x);

/// A named variable over [lo, hi] with an ordered list of trapezoidal sets.
class LinguisticVariable {
 public:
  LinguisticVariable(std::string name, double lo, double hi,
                     std::vector<TrapezoidalSet> sets);

  const std::string& name() const { return name_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<TrapezoidalSet>& sets() const { return sets_; }
  const TrapezoidalSet& set(const std::string& label) const;
  bool has_set(const std::string& label) const;

  /// Degree of every set at crisp x. Throws DomainError when x is outside
  /// [lo, hi]; inputs are expected pre-normalized, so out-of-range values
  /// indicate a data bug rather than something to clamp silently.
  std::map<std::string, double> fuzzify(double x) const;

  /// Intervals of [lo, hi] where no set has positive membership, scanned on
  /// a uniform grid. Empty result means the sets cover the whole range.
  std::vector<std::pair<double, double>> coverage_gaps(int samples = 2001) const;

 private:
  std::string name_;
  double lo_, hi_;
  std::vector<TrapezoidalSet> sets_;
};

/// IF <antecedent labels, one per input variable> THEN <consequent label>.
/// Rules produced by evidence-based induction carry the final combined mass
/// on the scored hypothesis as provenance.
struct FuzzyRule {
  std::vector<std::string> antecedent;
  std::string consequent;
  std::optional<double> induced_mass;
  bool conflict_flagged = false;
};

enum class TNorm { Min, Product };
enum class SNorm { Max, ProbOr };

struct InferenceOptions {
  TNorm and_op = TNorm::Min;
  TNorm implication = TNorm::Min;
  SNorm aggregation = SNorm::Max;
};

/// The aggregated output membership of one inference run: each fired rule's
/// consequent set clipped at the rule's firing strength, aggregated
/// pointwise. Callable at any z in the output range.
class AggregatedCurve {
 public:
  AggregatedCurve(double lo, double hi,
                  std::vector<std::pair<double, TrapezoidalSet>> clipped,
                  TNorm implication, SNorm aggregation);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double operator()(double z) const;

  /// The clipped consequents (firing strength, set), one per rule.
  const std::vector<std::pair<double, TrapezoidalSet>>& clipped() const {
    return clipped_;
  }

  /// Support [min a, max d] over rules with positive strength; nullopt when
  /// nothing fired.
  std::optional<std::pair<double, double>> support() const;

 private:
  double lo_, hi_;
  std::vector<std::pair<double, TrapezoidalSet>> clipped_;
  TNorm implication_;
  SNorm aggregation_;
};

/// Firing strength of each rule at the given crisp inputs (one value per
/// input variable, in variable order): the AND-combination of antecedent
/// membership degrees.
std::vector<double> firing_strengths(
    const std::vector<LinguisticVariable>& input_variables,
    const std::vector<FuzzyRule>& rules, const std::vector<double>& inputs,
    TNorm and_op = TNorm::Min);

/// Mamdani-style inference: fuzzify inputs, fire every rule, clip each
/// consequent at its firing strength, aggregate pointwise.
AggregatedCurve infer(const std::vector<LinguisticVariable>& input_variables,
                      const LinguisticVariable& output_variable,
                      const std::vector<FuzzyRule>& rules,
                      const std::vector<double>& inputs,
                      const InferenceOptions& options = {});

/// Centroid defuzzification by composite trapezoidal quadrature on a
/// uniform grid: z* = integral(mu(z)*z) / integral(mu(z)). Throws
/// NoRuleFiredError when the curve area is below 1e-12.
double defuzzify_centroid(const std::function<double(double)>& mu, double lo,
                          double hi, int samples = 1001);
double defuzzify_centroid(const AggregatedCurve& curve, int samples = 1001);

}  // namespace dsfolio
