#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dsfolio/fuzzy.hpp"
#include "dsfolio/market.hpp"
#include "dsfolio/portfolio.hpp"
#include "dsfolio/rules.hpp"

namespace dsfolio {

struct PathsConfig {
  std::string factors = "data/sample/factors.csv";
  std::string returns = "data/sample/returns.csv";
  std::string rulebase;  // defaults to <out_dir>/rulebase.json when empty
  std::string out_dir = "out";
};

struct YearsConfig {
  int training_first = 2003;
  int training_last = 2011;
  int test = 2012;
  int returns_first = 2008;
  int returns_last = 2012;
};

struct InferenceConfig {
  TNorm and_op = TNorm::Min;
  TNorm implication = TNorm::Min;
  SNorm aggregation = SNorm::Max;
  int grid_samples = 1001;
  bool clamp_inputs = false;
};

enum class MuSMode { Fixed, Computed };

struct PortfolioConfig {
  double risk_free_rate = 0.01;
  double alpha = 0.05;
  double beta = 0.5;
  double gamma = 0.001;
  double max_weight = 0.8;
  MuSMode mu_s_mode = MuSMode::Fixed;
  double mu_s_fixed = 0.0016;
  bool rank_preference = true;
  int top_k = 10;
  ConstraintDirections directions;
  SemivarianceDivisor semivariance_divisor = SemivarianceDivisor::Population;
  ReturnWeighting return_weighting = ReturnWeighting::Positional;
};

/// Full run configuration. Defaults reproduce the reference run: the stock
/// scoring variables and evidence table ship as defaults, the portfolio and
/// colony parameters default to r_f=0.01, alpha=0.05, beta=0.5, gamma=0.001,
/// M=0.8, fixed mu_s=0.0016, top-k=10, N=2000, 50 ants, 400 iterations,
/// lifetime 20. A config file overrides only the fields it names.
struct RunConfig {
  PathsConfig paths;
  YearsConfig years;
  std::vector<LinguisticVariable> input_variables;
  LinguisticVariable output_variable;
  std::vector<std::string> hypotheses;  // frame labels
  std::string scored_hypothesis;        // hypothesis whose mass is banded
  BpaTable bpa;
  FavourabilityThresholds favourability;
  InferenceConfig inference;
  PortfolioConfig portfolio;
  AcoParams aco;

  RunConfig();

  Frame frame() const { return Frame(hypotheses); }
  std::vector<std::string> variable_names() const;
  /// Value labels per input variable, in set order.
  std::vector<std::vector<std::string>> value_labels() const;
  RuleInducer make_inducer() const;
  std::string rulebase_path() const;

  /// Cross-field validation; throws ConfigError with the offending field.
  void validate() const;
};

/// Parse a JSON config file on top of the defaults. Unknown keys are
/// rejected (they are usually typos). Throws IoError / ConfigError.
RunConfig load_config(const std::string& path);

/// Apply a JSON document (already parsed) on top of `base`. Exposed for
/// tests.
RunConfig apply_config_json(const RunConfig& base, const std::string& json_text,
                            const std::string& context);

/// The built-in defaults serialized as a JSON document (documentation aid:
/// `dsfolio rules --dump-config`).
std::string default_config_json();

}  // namespace dsfolio
