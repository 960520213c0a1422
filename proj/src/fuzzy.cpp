#include "dsfolio/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "dsfolio/errors.hpp"

namespace dsfolio {

TrapezoidalSet::TrapezoidalSet(std::string label_, double a_, double b_,
                               double c_, double d_)
    : label(std::move(label_)), a(a_), b(b_), c(c_), d(d_) {
  if (!(a <= b && b <= c && c <= d)) {
    throw ConfigError("trapezoid '" + label + "' requires a <= b <= c <= d");
  }
}

double membership(const TrapezoidalSet& set, double x) {
  if (x < set.a || x > set.d) return 0.0;
  if (x < set.b) return (x - set.a) / (set.b - set.a);  // a < b here
  if (x <= set.c) return 1.0;
  if (set.c == set.d) return 1.0;  // right plateau edge
  return (set.d - x) / (set.d - set.c);
}

LinguisticVariable::LinguisticVariable(std::string name, double lo, double hi,
                                       std::vector<TrapezoidalSet> sets)
    : name_(std::move(name)), lo_(lo), hi_(hi), sets_(std::move(sets)) {
  if (!(lo_ < hi_)) {
    throw ConfigError("variable '" + name_ + "': range must satisfy lo < hi");
  }
  if (sets_.empty()) {
    throw ConfigError("variable '" + name_ + "': needs at least one set");
  }
  std::set<std::string> labels;
  for (const auto& s : sets_) {
    if (s.a < lo_ - 1e-12 || s.d > hi_ + 1e-12) {
      throw ConfigError("variable '" + name_ + "': set '" + s.label +
                        "' breakpoints fall outside the range");
    }
    if (!labels.insert(s.label).second) {
      throw ConfigError("variable '" + name_ + "': duplicate set label '" +
                        s.label + "'");
    }
  }
}

const TrapezoidalSet& LinguisticVariable::set(const std::string& label) const {
  for (const auto& s : sets_) {
    if (s.label == label) return s;
  }
  throw DomainError("variable '" + name_ + "' has no set '" + label + "'");
}

bool LinguisticVariable::has_set(const std::string& label) const {
  return std::any_of(sets_.begin(), sets_.end(),
                     [&](const TrapezoidalSet& s) { return s.label == label; });
}

std::map<std::string, double> LinguisticVariable::fuzzify(double x) const {
  if (x < lo_ || x > hi_) {
    std::ostringstream msg;
    msg << "input " << x << " outside range [" << lo_ << ", " << hi_
        << "] of variable '" << name_ << "'";
    throw DomainError(msg.str());
  }
  std::map<std::string, double> degrees;
  for (const auto& s : sets_) degrees[s.label] = membership(s, x);
  return degrees;
}

std::vector<std::pair<double, double>> LinguisticVariable::coverage_gaps(
    int samples) const {
  std::vector<std::pair<double, double>> gaps;
  const double h = (hi_ - lo_) / (samples - 1);
  bool in_gap = false;
  double gap_start = lo_;
  for (int i = 0; i < samples; ++i) {
    const double x = lo_ + i * h;
    bool covered = false;
    for (const auto& s : sets_) {
      if (membership(s, x) > 0.0) {
        covered = true;
        break;
      }
    }
    if (!covered && !in_gap) {
      in_gap = true;
      gap_start = x;
    } else if (covered && in_gap) {
      in_gap = false;
      gaps.emplace_back(gap_start, x);
    }
  }
  if (in_gap) gaps.emplace_back(gap_start, hi_);
  return gaps;
}

namespace {

double tnorm(TNorm op, double x, double y) {
  return op == TNorm::Min ? std::min(x, y) : x * y;
}

double snorm(SNorm op, double x, double y) {
  return op == SNorm::Max ? std::max(x, y) : x + y - x * y;
}

}  // namespace

AggregatedCurve::AggregatedCurve(
    double lo, double hi, std::vector<std::pair<double, TrapezoidalSet>> clipped,
    TNorm implication, SNorm aggregation)
    : lo_(lo), hi_(hi), clipped_(std::move(clipped)),
      implication_(implication), aggregation_(aggregation) {}

double AggregatedCurve::operator()(double z) const {
  double agg = 0.0;
  for (const auto& [strength, set] : clipped_) {
    if (strength <= 0.0) continue;
    agg = snorm(aggregation_, agg, tnorm(implication_, strength, membership(set, z)));
  }
  return agg;
}

std::optional<std::pair<double, double>> AggregatedCurve::support() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& [strength, set] : clipped_) {
    if (strength <= 0.0) continue;
    lo = std::min(lo, set.a);
    hi = std::max(hi, set.d);
  }
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

std::vector<double> firing_strengths(
    const std::vector<LinguisticVariable>& input_variables,
    const std::vector<FuzzyRule>& rules, const std::vector<double>& inputs,
    TNorm and_op) {
  if (inputs.size() != input_variables.size()) {
    throw DomainError("expected one crisp input per input variable");
  }
  // Fuzzify each input once; rules then only look degrees up.
  std::vector<std::map<std::string, double>> degrees;
  degrees.reserve(input_variables.size());
  for (std::size_t i = 0; i < input_variables.size(); ++i) {
    degrees.push_back(input_variables[i].fuzzify(inputs[i]));
  }
  std::vector<double> strengths;
  strengths.reserve(rules.size());
  for (const auto& rule : rules) {
    if (rule.antecedent.size() != input_variables.size()) {
      throw DomainError("rule antecedent arity does not match input variables");
    }
    double strength = 1.0;
    for (std::size_t i = 0; i < rule.antecedent.size(); ++i) {
      auto it = degrees[i].find(rule.antecedent[i]);
      if (it == degrees[i].end()) {
        throw DomainError("rule references unknown set '" + rule.antecedent[i] +
                          "' of variable '" + input_variables[i].name() + "'");
      }
      strength = tnorm(and_op, strength, it->second);
    }
    strengths.push_back(strength);
  }
  return strengths;
}

AggregatedCurve infer(const std::vector<LinguisticVariable>& input_variables,
                      const LinguisticVariable& output_variable,
                      const std::vector<FuzzyRule>& rules,
                      const std::vector<double>& inputs,
                      const InferenceOptions& options) {
  if (rules.empty()) {
    throw DomainError("inference needs a non-empty rule list");
  }
  const std::vector<double> strengths =
      firing_strengths(input_variables, rules, inputs, options.and_op);
  std::vector<std::pair<double, TrapezoidalSet>> clipped;
  clipped.reserve(rules.size());
  for (std::size_t r = 0; r < rules.size(); ++r) {
    clipped.emplace_back(strengths[r], output_variable.set(rules[r].consequent));
  }
  return AggregatedCurve(output_variable.lo(), output_variable.hi(),
                         std::move(clipped), options.implication,
                         options.aggregation);
}

double defuzzify_centroid(const std::function<double(double)>& mu, double lo,
                          double hi, int samples) {
  if (samples < 2) throw DomainError("centroid quadrature needs >= 2 samples");
  const double h = (hi - lo) / (samples - 1);
  double area = 0.0;
  double moment = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double z = lo + i * h;
    const double m = mu(z);
    const double w = (i == 0 || i == samples - 1) ? 0.5 : 1.0;
    area += w * m;
    moment += w * m * z;
  }
  area *= h;
  moment *= h;
  if (area <= 1e-12) {
    throw NoRuleFiredError("aggregated output has zero area; no rule fired");
  }
  return moment / area;
}

double defuzzify_centroid(const AggregatedCurve& curve, int samples) {
  return defuzzify_centroid([&](double z) { return curve(z); }, curve.lo(),
                            curve.hi(), samples);
}

}  // namespace dsfolio
