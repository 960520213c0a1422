#include "dsfolio/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dsfolio/errors.hpp"

namespace dsfolio {

namespace {

using nlohmann::json;

std::vector<LinguisticVariable> default_input_variables() {
  return {
      LinguisticVariable("pe", 0.0, 10.0,
                         {TrapezoidalSet("Low", 0.0, 0.0, 1.8, 2.8),
                          TrapezoidalSet("Standard", 1.7, 3.5, 4.6, 5.8),
                          TrapezoidalSet("High", 5.3, 7.5, 10.0, 10.0)}),
      LinguisticVariable("pb", 0.0, 10.0,
                         {TrapezoidalSet("Low", 0.0, 0.0, 2.2, 3.5),
                          TrapezoidalSet("Standard", 2.5, 4.6, 5.6, 7.9),
                          TrapezoidalSet("High", 6.4, 9.6, 10.0, 10.0)}),
      LinguisticVariable("ps", 0.0, 10.0,
                         {TrapezoidalSet("Low", 0.0, 0.0, 2.4, 3.6),
                          TrapezoidalSet("Standard", 1.8, 4.4, 5.7, 8.2),
                          TrapezoidalSet("High", 6.4, 8.7, 10.0, 10.0)}),
      LinguisticVariable("ltder", 0.0, 10.0,
                         {TrapezoidalSet("Low", 0.0, 0.0, 2.3, 3.6),
                          TrapezoidalSet("Standard", 2.8, 4.6, 5.7, 7.6),
                          TrapezoidalSet("High", 6.124, 8.09, 10.0, 10.0)}),
  };
}

LinguisticVariable default_output_variable() {
  return LinguisticVariable(
      "Selection", 0.0, 1.0,
      {TrapezoidalSet("Not Favourable", 0.0, 0.0, 0.172, 0.448),
       TrapezoidalSet("Moderately Favourable", 0.34, 0.46, 0.57, 0.75),
       TrapezoidalSet("Highly Favourable", 0.64, 0.88, 1.0, 1.0)});
}

BpaTable default_bpa() {
  BpaTable bpa;
  bpa.set("pe", "Low", {"A_P", 0.6});
  bpa.set("pe", "Standard", {"H_P", 0.75});
  bpa.set("pe", "High", {"P_P", 0.7});
  bpa.set("pb", "Low", {"P_P", 0.8});
  bpa.set("pb", "Standard", {"A_P", 0.6});
  bpa.set("pb", "High", {"H_P", 0.65});
  bpa.set("ps", "Low", {"P_P", 0.7});
  bpa.set("ps", "Standard", {"A_P", 0.65});
  bpa.set("ps", "High", {"H_P", 0.75});
  bpa.set("ltder", "Low", {"H_P", 0.6});
  bpa.set("ltder", "Standard", {"A_P", 0.75});
  bpa.set("ltder", "High", {"P_P", 0.65});
  return bpa;
}

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) {
      throw ConfigError(context + ": unknown key '" + key + "'");
    }
  }
}

double get_number(const json& obj, const std::string& key, const std::string& ctx) {
  if (!obj.at(key).is_number()) {
    throw ConfigError(ctx + "." + key + ": expected a number");
  }
  return obj.at(key).get<double>();
}

TNorm parse_tnorm(const std::string& text, const std::string& ctx) {
  if (text == "min") return TNorm::Min;
  if (text == "product") return TNorm::Product;
  throw ConfigError(ctx + ": expected 'min' or 'product', got '" + text + "'");
}

SNorm parse_snorm(const std::string& text, const std::string& ctx) {
  if (text == "max") return SNorm::Max;
  if (text == "probor") return SNorm::ProbOr;
  throw ConfigError(ctx + ": expected 'max' or 'probor', got '" + text + "'");
}

Bound parse_bound(const std::string& text, const std::string& ctx) {
  if (text == "ge") return Bound::GreaterEq;
  if (text == "le") return Bound::LessEq;
  if (text == "gt") return Bound::Greater;
  if (text == "lt") return Bound::Less;
  throw ConfigError(ctx + ": expected one of ge/le/gt/lt, got '" + text + "'");
}

std::string tnorm_name(TNorm op) { return op == TNorm::Min ? "min" : "product"; }
std::string snorm_name(SNorm op) { return op == SNorm::Max ? "max" : "probor"; }
std::string bound_name(Bound b) {
  switch (b) {
    case Bound::GreaterEq: return "ge";
    case Bound::LessEq: return "le";
    case Bound::Greater: return "gt";
    case Bound::Less: return "lt";
  }
  return "ge";
}

LinguisticVariable parse_variable(const json& v, const std::string& ctx) {
  check_keys(v, {"name", "range", "sets"}, ctx);
  const std::string name = v.at("name").get<std::string>();
  const auto& range = v.at("range");
  if (!range.is_array() || range.size() != 2) {
    throw ConfigError(ctx + ".range: expected [lo, hi]");
  }
  std::vector<TrapezoidalSet> sets;
  for (const auto& s : v.at("sets")) {
    check_keys(s, {"label", "points"}, ctx + ".sets");
    const auto& pts = s.at("points");
    if (!pts.is_array() || pts.size() != 4) {
      throw ConfigError(ctx + ".sets: expected points [a,b,c,d]");
    }
    sets.emplace_back(s.at("label").get<std::string>(), pts[0].get<double>(),
                      pts[1].get<double>(), pts[2].get<double>(),
                      pts[3].get<double>());
  }
  return LinguisticVariable(name, range[0].get<double>(), range[1].get<double>(),
                            std::move(sets));
}

json variable_to_json(const LinguisticVariable& var) {
  json sets = json::array();
  for (const auto& s : var.sets()) {
    sets.push_back({{"label", s.label}, {"points", {s.a, s.b, s.c, s.d}}});
  }
  return {{"name", var.name()}, {"range", {var.lo(), var.hi()}}, {"sets", sets}};
}

}  // namespace

RunConfig::RunConfig()
    : input_variables(default_input_variables()),
      output_variable(default_output_variable()),
      hypotheses({"H_P", "A_P", "P_P"}),
      scored_hypothesis("H_P"),
      bpa(default_bpa()) {}

std::vector<std::string> RunConfig::variable_names() const {
  std::vector<std::string> names;
  names.reserve(input_variables.size());
  for (const auto& v : input_variables) names.push_back(v.name());
  return names;
}

std::vector<std::vector<std::string>> RunConfig::value_labels() const {
  std::vector<std::vector<std::string>> labels;
  labels.reserve(input_variables.size());
  for (const auto& v : input_variables) {
    std::vector<std::string> l;
    l.reserve(v.sets().size());
    for (const auto& s : v.sets()) l.push_back(s.label);
    labels.push_back(std::move(l));
  }
  return labels;
}

RuleInducer RunConfig::make_inducer() const {
  if (output_variable.sets().size() != 3) {
    throw ConfigError("output variable must have exactly 3 sets "
                      "(not/moderately/highly favourable bands)");
  }
  std::array<std::string, 3> consequents = {output_variable.sets()[0].label,
                                            output_variable.sets()[1].label,
                                            output_variable.sets()[2].label};
  return RuleInducer(frame(), bpa, variable_names(), value_labels(),
                     favourability, consequents, scored_hypothesis);
}

std::string RunConfig::rulebase_path() const {
  return paths.rulebase.empty() ? paths.out_dir + "/rulebase.json"
                                : paths.rulebase;
}

void RunConfig::validate() const {
  favourability.validate();
  (void)frame();
  make_inducer();  // checks BPA completeness and hypothesis names
  if (years.training_first > years.training_last) {
    throw ConfigError("years.training_first must be <= years.training_last");
  }
  if (years.returns_first > years.returns_last) {
    throw ConfigError("years.returns_first must be <= years.returns_last");
  }
  if (inference.grid_samples < 2) {
    throw ConfigError("inference.grid_samples must be >= 2");
  }
  if (portfolio.top_k < 1) throw ConfigError("portfolio.top_k must be >= 1");
  if (!(portfolio.max_weight > 0.0 && portfolio.max_weight <= 1.0)) {
    throw ConfigError("portfolio.max_weight must lie in (0, 1]");
  }
  if (portfolio.mu_s_mode == MuSMode::Fixed && portfolio.mu_s_fixed == 0.0) {
    throw ConfigError("portfolio.mu_s_fixed must be non-zero in fixed mode");
  }
  aco.validate();
}

RunConfig apply_config_json(const RunConfig& base, const std::string& json_text,
                            const std::string& context) {
  RunConfig cfg = base;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(context + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(context + ": expected a JSON object");
  check_keys(doc,
             {"paths", "years", "variables", "hypotheses", "scored_hypothesis",
              "bpa", "favourability", "inference", "portfolio", "aco"},
             context);
  try {
    if (doc.contains("paths")) {
      const auto& p = doc["paths"];
      check_keys(p, {"factors", "returns", "rulebase", "out_dir"}, "paths");
      if (p.contains("factors")) cfg.paths.factors = p["factors"].get<std::string>();
      if (p.contains("returns")) cfg.paths.returns = p["returns"].get<std::string>();
      if (p.contains("rulebase")) cfg.paths.rulebase = p["rulebase"].get<std::string>();
      if (p.contains("out_dir")) cfg.paths.out_dir = p["out_dir"].get<std::string>();
    }
    if (doc.contains("years")) {
      const auto& y = doc["years"];
      check_keys(y, {"training_first", "training_last", "test", "returns_first",
                     "returns_last"},
                 "years");
      if (y.contains("training_first")) cfg.years.training_first = y["training_first"].get<int>();
      if (y.contains("training_last")) cfg.years.training_last = y["training_last"].get<int>();
      if (y.contains("test")) cfg.years.test = y["test"].get<int>();
      if (y.contains("returns_first")) cfg.years.returns_first = y["returns_first"].get<int>();
      if (y.contains("returns_last")) cfg.years.returns_last = y["returns_last"].get<int>();
    }
    if (doc.contains("variables")) {
      const auto& v = doc["variables"];
      check_keys(v, {"inputs", "output"}, "variables");
      if (v.contains("inputs")) {
        std::vector<LinguisticVariable> inputs;
        for (const auto& item : v["inputs"]) {
          inputs.push_back(parse_variable(item, "variables.inputs"));
        }
        if (inputs.empty()) {
          throw ConfigError("variables.inputs: needs at least one variable");
        }
        cfg.input_variables = std::move(inputs);
      }
      if (v.contains("output")) {
        cfg.output_variable = parse_variable(v["output"], "variables.output");
      }
    }
    if (doc.contains("hypotheses")) {
      cfg.hypotheses = doc["hypotheses"].get<std::vector<std::string>>();
    }
    if (doc.contains("scored_hypothesis")) {
      cfg.scored_hypothesis = doc["scored_hypothesis"].get<std::string>();
    }
    if (doc.contains("bpa")) {
      for (const auto& [variable, cells] : doc["bpa"].items()) {
        for (const auto& [value, cell] : cells.items()) {
          check_keys(cell, {"hypothesis", "belief"}, "bpa." + variable + "." + value);
          BpaEntry entry;
          entry.hypothesis = cell.at("hypothesis").get<std::string>();
          entry.belief = get_number(cell, "belief", "bpa." + variable + "." + value);
          cfg.bpa.set(variable, value, std::move(entry));
        }
      }
    }
    if (doc.contains("favourability")) {
      const auto& f = doc["favourability"];
      check_keys(f, {"not_max", "moderate_min", "moderate_max", "high_min"},
                 "favourability");
      if (f.contains("not_max")) cfg.favourability.not_max = get_number(f, "not_max", "favourability");
      if (f.contains("moderate_min")) cfg.favourability.moderate_min = get_number(f, "moderate_min", "favourability");
      if (f.contains("moderate_max")) cfg.favourability.moderate_max = get_number(f, "moderate_max", "favourability");
      if (f.contains("high_min")) cfg.favourability.high_min = get_number(f, "high_min", "favourability");
    }
    if (doc.contains("inference")) {
      const auto& i = doc["inference"];
      check_keys(i, {"and_op", "implication", "aggregation", "grid_samples",
                     "clamp_inputs"},
                 "inference");
      if (i.contains("and_op")) cfg.inference.and_op = parse_tnorm(i["and_op"].get<std::string>(), "inference.and_op");
      if (i.contains("implication")) cfg.inference.implication = parse_tnorm(i["implication"].get<std::string>(), "inference.implication");
      if (i.contains("aggregation")) cfg.inference.aggregation = parse_snorm(i["aggregation"].get<std::string>(), "inference.aggregation");
      if (i.contains("grid_samples")) cfg.inference.grid_samples = i["grid_samples"].get<int>();
      if (i.contains("clamp_inputs")) cfg.inference.clamp_inputs = i["clamp_inputs"].get<bool>();
    }
    if (doc.contains("portfolio")) {
      const auto& p = doc["portfolio"];
      check_keys(p,
                 {"risk_free_rate", "alpha", "beta", "gamma", "max_weight",
                  "mu_s_mode", "mu_s_fixed", "rank_preference", "top_k",
                  "return_direction", "variance_direction", "skewness_direction",
                  "semivariance_divisor", "return_weighting"},
                 "portfolio");
      if (p.contains("risk_free_rate")) cfg.portfolio.risk_free_rate = get_number(p, "risk_free_rate", "portfolio");
      if (p.contains("alpha")) cfg.portfolio.alpha = get_number(p, "alpha", "portfolio");
      if (p.contains("beta")) cfg.portfolio.beta = get_number(p, "beta", "portfolio");
      if (p.contains("gamma")) cfg.portfolio.gamma = get_number(p, "gamma", "portfolio");
      if (p.contains("max_weight")) cfg.portfolio.max_weight = get_number(p, "max_weight", "portfolio");
      if (p.contains("mu_s_mode")) {
        const std::string mode = p["mu_s_mode"].get<std::string>();
        if (mode == "fixed") cfg.portfolio.mu_s_mode = MuSMode::Fixed;
        else if (mode == "computed") cfg.portfolio.mu_s_mode = MuSMode::Computed;
        else throw ConfigError("portfolio.mu_s_mode: expected 'fixed' or 'computed'");
      }
      if (p.contains("mu_s_fixed")) cfg.portfolio.mu_s_fixed = get_number(p, "mu_s_fixed", "portfolio");
      if (p.contains("rank_preference")) cfg.portfolio.rank_preference = p["rank_preference"].get<bool>();
      if (p.contains("top_k")) cfg.portfolio.top_k = p["top_k"].get<int>();
      if (p.contains("return_direction")) cfg.portfolio.directions.portfolio_return = parse_bound(p["return_direction"].get<std::string>(), "portfolio.return_direction");
      if (p.contains("variance_direction")) cfg.portfolio.directions.portfolio_variance = parse_bound(p["variance_direction"].get<std::string>(), "portfolio.variance_direction");
      if (p.contains("skewness_direction")) cfg.portfolio.directions.portfolio_skewness = parse_bound(p["skewness_direction"].get<std::string>(), "portfolio.skewness_direction");
      if (p.contains("semivariance_divisor")) {
        const std::string div = p["semivariance_divisor"].get<std::string>();
        if (div == "population") cfg.portfolio.semivariance_divisor = SemivarianceDivisor::Population;
        else if (div == "sample") cfg.portfolio.semivariance_divisor = SemivarianceDivisor::Sample;
        else throw ConfigError("portfolio.semivariance_divisor: expected 'population' or 'sample'");
      }
      if (p.contains("return_weighting")) {
        const std::string w = p["return_weighting"].get<std::string>();
        if (w == "positional") cfg.portfolio.return_weighting = ReturnWeighting::Positional;
        else if (w == "uniform") cfg.portfolio.return_weighting = ReturnWeighting::Uniform;
        else throw ConfigError("portfolio.return_weighting: expected 'positional' or 'uniform'");
      }
    }
    if (doc.contains("aco")) {
      const auto& a = doc["aco"];
      check_keys(a,
                 {"nodes", "ants", "iterations", "lifetime", "evaporation",
                  "deposit", "initial_pheromone", "seed"},
                 "aco");
      if (a.contains("nodes")) cfg.aco.node_count = a["nodes"].get<int>();
      if (a.contains("ants")) cfg.aco.ants = a["ants"].get<int>();
      if (a.contains("iterations")) cfg.aco.iterations = a["iterations"].get<int>();
      if (a.contains("lifetime")) cfg.aco.lifetime = a["lifetime"].get<int>();
      if (a.contains("evaporation")) cfg.aco.evaporation = get_number(a, "evaporation", "aco");
      if (a.contains("deposit")) cfg.aco.deposit = get_number(a, "deposit", "aco");
      if (a.contains("initial_pheromone")) cfg.aco.initial_pheromone = get_number(a, "initial_pheromone", "aco");
      if (a.contains("seed")) cfg.aco.seed = a["seed"].get<std::uint64_t>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(context + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return apply_config_json(RunConfig(), buffer.str(), path);
}

std::string default_config_json() {
  const RunConfig cfg;
  json doc;
  doc["paths"] = {{"factors", cfg.paths.factors},
                  {"returns", cfg.paths.returns},
                  {"rulebase", cfg.paths.rulebase},
                  {"out_dir", cfg.paths.out_dir}};
  doc["years"] = {{"training_first", cfg.years.training_first},
                  {"training_last", cfg.years.training_last},
                  {"test", cfg.years.test},
                  {"returns_first", cfg.years.returns_first},
                  {"returns_last", cfg.years.returns_last}};
  json inputs = json::array();
  for (const auto& v : cfg.input_variables) inputs.push_back(variable_to_json(v));
  doc["variables"] = {{"inputs", inputs},
                      {"output", variable_to_json(cfg.output_variable)}};
  doc["hypotheses"] = cfg.hypotheses;
  doc["scored_hypothesis"] = cfg.scored_hypothesis;
  json bpa;
  for (const auto& v : cfg.input_variables) {
    for (const auto& s : v.sets()) {
      const BpaEntry& e = cfg.bpa.entry(v.name(), s.label);
      bpa[v.name()][s.label] = {{"hypothesis", e.hypothesis}, {"belief", e.belief}};
    }
  }
  doc["bpa"] = bpa;
  doc["favourability"] = {{"not_max", cfg.favourability.not_max},
                          {"moderate_min", cfg.favourability.moderate_min},
                          {"moderate_max", cfg.favourability.moderate_max},
                          {"high_min", cfg.favourability.high_min}};
  doc["inference"] = {{"and_op", tnorm_name(cfg.inference.and_op)},
                      {"implication", tnorm_name(cfg.inference.implication)},
                      {"aggregation", snorm_name(cfg.inference.aggregation)},
                      {"grid_samples", cfg.inference.grid_samples},
                      {"clamp_inputs", cfg.inference.clamp_inputs}};
  doc["portfolio"] = {
      {"risk_free_rate", cfg.portfolio.risk_free_rate},
      {"alpha", cfg.portfolio.alpha},
      {"beta", cfg.portfolio.beta},
      {"gamma", cfg.portfolio.gamma},
      {"max_weight", cfg.portfolio.max_weight},
      {"mu_s_mode", cfg.portfolio.mu_s_mode == MuSMode::Fixed ? "fixed" : "computed"},
      {"mu_s_fixed", cfg.portfolio.mu_s_fixed},
      {"rank_preference", cfg.portfolio.rank_preference},
      {"top_k", cfg.portfolio.top_k},
      {"return_direction", bound_name(cfg.portfolio.directions.portfolio_return)},
      {"variance_direction", bound_name(cfg.portfolio.directions.portfolio_variance)},
      {"skewness_direction", bound_name(cfg.portfolio.directions.portfolio_skewness)},
      {"semivariance_divisor",
       cfg.portfolio.semivariance_divisor == SemivarianceDivisor::Population
           ? "population" : "sample"},
      {"return_weighting",
       cfg.portfolio.return_weighting == ReturnWeighting::Positional
           ? "positional" : "uniform"}};
  doc["aco"] = {{"nodes", cfg.aco.node_count},
                {"ants", cfg.aco.ants},
                {"iterations", cfg.aco.iterations},
                {"lifetime", cfg.aco.lifetime},
                {"evaporation", cfg.aco.evaporation},
                {"deposit", cfg.aco.deposit},
                {"initial_pheromone", cfg.aco.initial_pheromone},
                {"seed", cfg.aco.seed}};
  return doc.dump(2) + "\n";
}

}  // namespace dsfolio
