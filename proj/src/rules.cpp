#include "dsfolio/rules.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "dsfolio/errors.hpp"

namespace dsfolio {

void BpaTable::set(const std::string& variable, const std::string& value,
                   BpaEntry entry) {
  if (!(entry.belief >= 0.0 && entry.belief <= 1.0)) {
    throw ConfigError("bpa belief for (" + variable + ", " + value +
                      ") must lie in [0,1]");
  }
  cells_[variable][value] = std::move(entry);
}

const BpaEntry& BpaTable::entry(const std::string& variable,
                                const std::string& value) const {
  auto vit = cells_.find(variable);
  if (vit != cells_.end()) {
    auto cit = vit->second.find(value);
    if (cit != vit->second.end()) return cit->second;
  }
  throw ConfigError("bpa table has no cell for (" + variable + ", " + value + ")");
}

bool BpaTable::has(const std::string& variable, const std::string& value) const {
  auto vit = cells_.find(variable);
  return vit != cells_.end() && vit->second.count(value) > 0;
}

void FavourabilityThresholds::validate() const {
  if (!(0.0 <= not_max && not_max < moderate_min && moderate_min <= moderate_max &&
        moderate_max < high_min && high_min <= 1.0)) {
    throw ConfigError("favourability thresholds must satisfy "
                      "0 <= not_max < moderate_min <= moderate_max < high_min <= 1");
  }
}

int favourability_band(double scored_mass, const FavourabilityThresholds& t) {
  // The published bands sit on 2-decimal boundaries; rounding first makes
  // them exhaustive for unrounded masses.
  const double rounded = std::floor(scored_mass * 100.0 + 0.5) / 100.0;
  if (rounded <= t.not_max) return 0;
  if (rounded <= t.moderate_max) return 1;
  return 2;
}

RuleInducer::RuleInducer(Frame frame, BpaTable bpa,
                         std::vector<std::string> variable_names,
                         std::vector<std::vector<std::string>> value_labels,
                         FavourabilityThresholds thresholds,
                         std::array<std::string, 3> consequents,
                         std::string scored_hypothesis)
    : frame_(std::move(frame)), bpa_(std::move(bpa)),
      variable_names_(std::move(variable_names)),
      value_labels_(std::move(value_labels)), thresholds_(thresholds),
      consequents_(std::move(consequents)),
      scored_hypothesis_(std::move(scored_hypothesis)) {
  thresholds_.validate();
  if (variable_names_.size() != value_labels_.size() || variable_names_.empty()) {
    throw ConfigError("rule induction needs value labels for every variable");
  }
  frame_.index_of(scored_hypothesis_);  // must exist
  // Fail early on incomplete tables, naming the missing cell.
  for (std::size_t v = 0; v < variable_names_.size(); ++v) {
    for (const auto& value : value_labels_[v]) {
      const BpaEntry& e = bpa_.entry(variable_names_[v], value);
      frame_.index_of(e.hypothesis);
    }
  }
}

FuzzyRule RuleInducer::induce(const std::vector<std::string>& antecedent) const {
  if (antecedent.size() != variable_names_.size()) {
    throw DomainError("antecedent arity does not match the variable list");
  }
  std::vector<MassFunction> masses;
  masses.reserve(antecedent.size());
  for (std::size_t v = 0; v < antecedent.size(); ++v) {
    const BpaEntry& e = bpa_.entry(variable_names_[v], antecedent[v]);
    masses.push_back(from_single_belief(frame_, frame_.singleton(e.hypothesis),
                                        e.belief));
  }
  FuzzyRule rule;
  rule.antecedent = antecedent;
  try {
    const MassFunction combined = combine_all(masses);
    const double scored = combined.mass(frame_.singleton(scored_hypothesis_));
    rule.induced_mass = scored;
    rule.consequent = consequents_[static_cast<std::size_t>(
        favourability_band(scored, thresholds_))];
  } catch (const TotalConflictError&) {
    // No evidence survives; flag the rule instead of dropping it. Cannot
    // trigger while every per-factor mass keeps some belief on the full set.
    rule.induced_mass = 0.0;
    rule.conflict_flagged = true;
    rule.consequent = consequents_[0];
  }
  return rule;
}

std::size_t RuleInducer::rule_count() const {
  std::size_t n = 1;
  for (const auto& labels : value_labels_) n *= labels.size();
  return n;
}

std::vector<FuzzyRule> RuleInducer::induce_all() const {
  std::vector<FuzzyRule> rules;
  rules.reserve(rule_count());
  std::vector<std::size_t> idx(variable_names_.size(), 0);
  while (true) {
    std::vector<std::string> antecedent;
    antecedent.reserve(idx.size());
    for (std::size_t v = 0; v < idx.size(); ++v) {
      antecedent.push_back(value_labels_[v][idx[v]]);
    }
    rules.push_back(induce(antecedent));
    // Advance the odometer, last variable fastest (first variable outermost).
    std::size_t v = idx.size();
    while (v > 0) {
      --v;
      if (++idx[v] < value_labels_[v].size()) break;
      idx[v] = 0;
      if (v == 0) return rules;
    }
  }
}

void export_rulebase(const std::vector<FuzzyRule>& rules,
                     const std::vector<std::string>& variable_names,
                     const std::string& scored_hypothesis,
                     const std::string& path) {
  if (rules.empty()) {
    throw DomainError("refusing to export an empty rule base");
  }
  nlohmann::json doc;
  doc["format"] = "dsfolio-rulebase";
  doc["version"] = 1;
  doc["variables"] = variable_names;
  doc["scored_hypothesis"] = scored_hypothesis;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& rule : rules) {
    nlohmann::json r;
    r["antecedent"] = rule.antecedent;
    r["consequent"] = rule.consequent;
    if (rule.induced_mass) r["mass"] = *rule.induced_mass;
    r["conflict_flagged"] = rule.conflict_flagged;
    list.push_back(std::move(r));
  }
  doc["rules"] = std::move(list);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open rule base file for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed writing rule base file: " + path);
}

RulebaseFile load_rulebase(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open rule base file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("rule base " + path + ": " + e.what());
  }
  if (doc.value("format", "") != "dsfolio-rulebase") {
    throw ConfigError("rule base " + path + ": unexpected format field");
  }
  RulebaseFile file;
  try {
    file.variable_names = doc.at("variables").get<std::vector<std::string>>();
    file.scored_hypothesis = doc.at("scored_hypothesis").get<std::string>();
    for (const auto& r : doc.at("rules")) {
      FuzzyRule rule;
      rule.antecedent = r.at("antecedent").get<std::vector<std::string>>();
      rule.consequent = r.at("consequent").get<std::string>();
      if (r.contains("mass")) rule.induced_mass = r.at("mass").get<double>();
      rule.conflict_flagged = r.value("conflict_flagged", false);
      if (rule.antecedent.size() != file.variable_names.size()) {
        throw ConfigError("rule base " + path +
                          ": rule antecedent arity does not match variables");
      }
      file.rules.push_back(std::move(rule));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("rule base " + path + ": " + e.what());
  }
  if (file.rules.empty()) {
    throw ConfigError("rule base " + path + ": contains no rules");
  }
  return file;
}

std::string format_rule_listing(const std::vector<FuzzyRule>& rules,
                                const std::vector<std::string>& variable_names,
                                const std::string& scored_hypothesis) {
  std::ostringstream out;
  for (const auto& rule : rules) {
    out << "IF ";
    for (std::size_t v = 0; v < rule.antecedent.size(); ++v) {
      if (v > 0) out << " AND ";
      out << variable_names[v] << " is " << rule.antecedent[v];
    }
    out << " THEN " << rule.consequent;
    if (rule.induced_mass) {
      out << "  [m(" << scored_hypothesis << ")=" << std::fixed
          << std::setprecision(4) << *rule.induced_mass << "]";
      out.unsetf(std::ios_base::floatfield);
    }
    if (rule.conflict_flagged) out << "  [total conflict]";
    out << '\n';
  }
  return out.str();
}

}  // namespace dsfolio
