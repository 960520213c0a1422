#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "dsfolio/evidence.hpp"
#include "dsfolio/fuzzy.hpp"

namespace dsfolio {

/// One cell of the evidence table: the hypothesis a linguistic value points
/// at and the belief assigned to it.
struct BpaEntry {
  std::string hypothesis;
  double belief = 0.0;
};

/// Per (input variable, linguistic value) belief assignments. Each cell maps
/// one observation ("pe is Low") to a single-belief mass function over the
/// performance frame.
class BpaTable {
 public:
  BpaTable() = default;
  void set(const std::string& variable, const std::string& value, BpaEntry entry);
  /// Throws ConfigError naming the missing cell.
  const BpaEntry& entry(const std::string& variable, const std::string& value) const;
  bool has(const std::string& variable, const std::string& value) const;

 private:
  std::map<std::string, std::map<std::string, BpaEntry>> cells_;
};

/// Bands on the combined mass of the scored hypothesis that decide a rule's
/// consequent. The mass is rounded half-up to 2 decimals before banding so
/// the three bands are exhaustive.
struct FavourabilityThresholds {
  double not_max = 0.45;
  double moderate_min = 0.46;
  double moderate_max = 0.75;
  double high_min = 0.76;

  void validate() const;
};

/// Generates the complete rule base: for every antecedent combination, the
/// per-factor beliefs are combined with Dempster's rule and the combined
/// mass on the scored hypothesis picks the consequent.
///
/// Note: over the default evidence table the best attainable combined mass
/// on H_P is 1 - 0.25*0.35*0.25*0.4 = 0.99125 (all four factors pointing at
/// H_P; no conflict, so the same-singleton product identity applies).
class RuleInducer {
 public:
  RuleInducer(Frame frame, BpaTable bpa, std::vector<std::string> variable_names,
              std::vector<std::vector<std::string>> value_labels,
              FavourabilityThresholds thresholds,
              std::array<std::string, 3> consequents,
              std::string scored_hypothesis);

  /// Induce the rule for one antecedent (one value label per variable).
  /// A total-conflict combination does not throw: the rule is classified
  /// into the lowest band and conflict_flagged is set.
  FuzzyRule induce(const std::vector<std::string>& antecedent) const;

  /// All value combinations in lexicographic order, first variable
  /// outermost. 3 values per variable and 4 variables yield 81 rules.
  std::vector<FuzzyRule> induce_all() const;

  std::size_t rule_count() const;
  const std::vector<std::string>& variable_names() const { return variable_names_; }

 private:
  Frame frame_;
  BpaTable bpa_;
  std::vector<std::string> variable_names_;
  std::vector<std::vector<std::string>> value_labels_;
  FavourabilityThresholds thresholds_;
  std::array<std::string, 3> consequents_;  // not / moderately / highly
  std::string scored_hypothesis_;
};

/// Classification band for a combined mass, after half-up rounding to
/// 2 decimals: index 0, 1 or 2 into the consequent labels.
int favourability_band(double scored_mass, const FavourabilityThresholds& t);

/// Rule base serialization. The JSON document stores the variable order,
/// the scored hypothesis, and per rule the antecedent labels, consequent,
/// full-precision induced mass and the conflict flag; export/load round-trip
/// losslessly. Throws DomainError on an empty rule list, IoError on
/// unreadable/unwritable paths, ConfigError on schema violations.
void export_rulebase(const std::vector<FuzzyRule>& rules,
                     const std::vector<std::string>& variable_names,
                     const std::string& scored_hypothesis,
                     const std::string& path);
struct RulebaseFile {
  std::vector<std::string> variable_names;
  std::string scored_hypothesis;
  std::vector<FuzzyRule> rules;
};
RulebaseFile load_rulebase(const std::string& path);

/// Human-readable listing, one rule per line:
/// "IF pe is Low AND ... THEN Not Favourable  [m(H_P)=0.2701]".
std::string format_rule_listing(const std::vector<FuzzyRule>& rules,
                                const std::vector<std::string>& variable_names,
                                const std::string& scored_hypothesis);

}  // namespace dsfolio
