#include "dsfolio/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dsfolio/errors.hpp"
#include "dsfolio/rules.hpp"

namespace dsfolio {

namespace {

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

std::string format_score(double score) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << score;
  return out.str();
}

}  // namespace

StockInputs normalized_inputs(const RunConfig& config, const MarketData& data,
                              const std::string& stock) {
  StockInputs result;
  const StockRecord& rec = data.record(stock);
  const int test_year = config.years.test;
  auto test_it = rec.factors.find(test_year);
  if (test_it == rec.factors.end()) {
    result.reason = "no factor data for test year " + std::to_string(test_year);
    return result;
  }
  for (const auto& var : config.input_variables) {
    const std::string& factor = var.name();
    const Eigen::VectorXd training = data.factor_series(
        stock, factor, config.years.training_first, config.years.training_last);
    if (training.size() == 0) {
      result.reason = "no training data for factor " + factor;
      return result;
    }
    const double basis = normalization_basis(training);
    const double raw = test_it->second.by_name(factor);
    // Throws DataError naming stock/factor when the basis is unusable.
    const Eigen::VectorXd normalized =
        normalize(Eigen::VectorXd::Constant(1, raw), basis, stock + "/" + factor);
    double value = normalized[0];
    if (value < var.lo() || value > var.hi()) {
      if (config.inference.clamp_inputs) {
        value = std::clamp(value, var.lo(), var.hi());
      } else {
        std::ostringstream reason;
        reason << factor << " value " << value << " outside ["
               << var.lo() << ", " << var.hi() << "] (clamp_inputs off)";
        result.reason = reason.str();
        return result;
      }
    }
    result.values.push_back(value);
  }
  result.ok = true;
  return result;
}

RankingOutcome rank_stocks(const RunConfig& config, const MarketData& data,
                           const std::vector<FuzzyRule>& rules) {
  RankingOutcome outcome;
  for (const auto& stock : data.stocks()) {
    const StockInputs inputs = normalized_inputs(config, data, stock);
    if (!inputs.ok) {
      outcome.excluded.emplace_back(stock, inputs.reason);
      continue;
    }
    InferenceOptions options;
    options.and_op = config.inference.and_op;
    options.implication = config.inference.implication;
    options.aggregation = config.inference.aggregation;
    const AggregatedCurve curve = infer(config.input_variables,
                                        config.output_variable, rules,
                                        inputs.values, options);
    double score;
    try {
      score = defuzzify_centroid(curve, config.inference.grid_samples);
    } catch (const NoRuleFiredError&) {
      outcome.excluded.emplace_back(stock, "no rule fired for its inputs");
      continue;
    }
    outcome.ranked.push_back(RankingRow{stock, score});
  }
  std::sort(outcome.ranked.begin(), outcome.ranked.end(),
            [](const RankingRow& a, const RankingRow& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.stock < b.stock;
            });
  return outcome;
}

PortfolioProblem build_problem(const RunConfig& config, const MarketData& data,
                               const std::vector<std::string>& stocks) {
  PortfolioProblem problem;
  problem.risk_free_rate = config.portfolio.risk_free_rate;
  problem.alpha = config.portfolio.alpha;
  problem.beta = config.portfolio.beta;
  problem.gamma = config.portfolio.gamma;
  problem.max_weight = config.portfolio.max_weight;
  problem.rank_preference = config.portfolio.rank_preference;
  problem.directions = config.portfolio.directions;
  if (config.portfolio.mu_s_mode == MuSMode::Fixed) {
    problem.fixed_mu_s = config.portfolio.mu_s_fixed;
  }
  for (const auto& stock : stocks) {
    const Eigen::VectorXd series = data.returns_series(
        stock, config.years.returns_first, config.years.returns_last);
    if (series.size() == 0) {
      throw DataError("stock '" + stock + "' has no returns in [" +
                      std::to_string(config.years.returns_first) + ", " +
                      std::to_string(config.years.returns_last) + "]");
    }
    Asset asset{stock,
                fuzzy_return(series, config.portfolio.return_weighting),
                semivariance(series, config.portfolio.semivariance_divisor)};
    problem.assets.push_back(std::move(asset));
  }
  return problem;
}

std::string cmd_rules(const RunConfig& config) {
  config.validate();
  ensure_out_dir(config.paths.out_dir);
  std::ostringstream summary;
  for (const auto& var : config.input_variables) {
    for (const auto& [lo, hi] : var.coverage_gaps()) {
      summary << "warning: variable '" << var.name() << "' has a coverage gap ("
              << lo << ", " << hi << ")\n";
    }
  }
  const RuleInducer inducer = config.make_inducer();
  const std::vector<FuzzyRule> rules = inducer.induce_all();
  std::size_t flagged = 0;
  for (const auto& r : rules) flagged += r.conflict_flagged ? 1 : 0;

  export_rulebase(rules, config.variable_names(), config.scored_hypothesis,
                  config.rulebase_path());
  auto listing = open_out(config.paths.out_dir + "/rules.txt");
  listing << format_rule_listing(rules, config.variable_names(),
                                 config.scored_hypothesis);

  summary << "induced " << rules.size() << " rules";
  if (flagged > 0) summary << " (" << flagged << " flagged for total conflict)";
  summary << " -> " << config.rulebase_path() << "\n";
  return summary.str();
}

void write_ranking(const RankingOutcome& outcome, const std::string& ranking_csv,
                   const std::string& excluded_csv) {
  auto out = open_out(ranking_csv);
  out << "rank,stock,score\n";
  for (std::size_t i = 0; i < outcome.ranked.size(); ++i) {
    out << (i + 1) << ',' << outcome.ranked[i].stock << ','
        << format_score(outcome.ranked[i].score) << '\n';
  }
  auto excluded = open_out(excluded_csv);
  excluded << "stock,reason\n";
  for (const auto& [stock, reason] : outcome.excluded) {
    excluded << stock << ',' << reason << '\n';
  }
}

std::vector<RankingRow> load_ranking(const std::string& ranking_csv) {
  std::ifstream in(ranking_csv);
  if (!in) {
    throw IoError("cannot open ranking file: " + ranking_csv +
                  " (run the rank command first)");
  }
  std::string line;
  if (!std::getline(in, line) || line.rfind("rank,stock,score", 0) != 0) {
    throw DataError(ranking_csv + ": expected header 'rank,stock,score'");
  }
  std::vector<RankingRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string rank_text, stock, score_text;
    if (!std::getline(ss, rank_text, ',') || !std::getline(ss, stock, ',') ||
        !std::getline(ss, score_text)) {
      throw DataError(ranking_csv + ":" + std::to_string(line_no) + ": bad row");
    }
    try {
      rows.push_back(RankingRow{stock, std::stod(score_text)});
    } catch (const std::exception&) {
      throw DataError(ranking_csv + ":" + std::to_string(line_no) +
                      ": bad score '" + score_text + "'");
    }
  }
  return rows;
}

std::string cmd_rank(const RunConfig& config) {
  config.validate();
  ensure_out_dir(config.paths.out_dir);
  const RulebaseFile rulebase = load_rulebase(config.rulebase_path());
  if (rulebase.variable_names != config.variable_names()) {
    throw ConfigError("rule base variables do not match the configured inputs");
  }
  const MarketData data = MarketData::load(config.paths.factors, config.paths.returns);
  const RankingOutcome outcome = rank_stocks(config, data, rulebase.rules);
  write_ranking(outcome, config.paths.out_dir + "/ranking.csv",
                config.paths.out_dir + "/excluded.csv");
  std::ostringstream summary;
  for (const auto& warning : data.warnings()) {
    summary << "warning: " << warning << "\n";
  }
  for (const auto& [stock, reason] : outcome.excluded) {
    summary << "warning: excluded " << stock << ": " << reason << "\n";
  }
  summary << "ranked " << outcome.ranked.size() << " stocks ("
          << outcome.excluded.size() << " excluded) -> "
          << config.paths.out_dir << "/ranking.csv\n";
  return summary.str();
}

WeightsFile load_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open weights file: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("rank,stock,weight", 0) != 0) {
    throw DataError(path + ": expected header 'rank,stock,weight'");
  }
  WeightsFile file;
  std::vector<double> weights;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string rank_text, stock, weight_text;
    if (!std::getline(ss, rank_text, ',') || !std::getline(ss, stock, ',') ||
        !std::getline(ss, weight_text)) {
      throw DataError(path + ":" + std::to_string(line_no) + ": bad row");
    }
    try {
      weights.push_back(std::stod(weight_text));
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(line_no) + ": bad weight '" +
                      weight_text + "'");
    }
    file.stocks.push_back(stock);
  }
  if (weights.empty()) throw DataError(path + ": no weight rows");
  file.weights = Eigen::Map<const Eigen::VectorXd>(
      weights.data(), static_cast<Eigen::Index>(weights.size()));
  return file;
}

namespace {

std::string format_metric(double v) {
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}

}  // namespace

std::string cmd_optimize(const RunConfig& config) {
  config.validate();
  ensure_out_dir(config.paths.out_dir);
  const std::vector<RankingRow> ranking =
      load_ranking(config.paths.out_dir + "/ranking.csv");
  const int k = config.portfolio.top_k;
  if (static_cast<int>(ranking.size()) < k) {
    throw ConfigError("ranking has " + std::to_string(ranking.size()) +
                      " stocks but top_k is " + std::to_string(k));
  }
  std::vector<std::string> stocks;
  stocks.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) stocks.push_back(ranking[static_cast<std::size_t>(i)].stock);

  const MarketData data = MarketData::load(config.paths.factors, config.paths.returns);
  const PortfolioProblem problem = build_problem(config, data, stocks);
  const AcoResult result = solve_aco(problem, config.aco);

  auto allocation = open_out(config.paths.out_dir + "/allocation.csv");
  allocation << "rank,stock,weight\n";
  for (std::size_t i = 0; i < stocks.size(); ++i) {
    allocation << (i + 1) << ',' << stocks[i] << ',' << std::fixed
               << std::setprecision(6)
               << result.best.weights[static_cast<Eigen::Index>(i)] << '\n';
  }

  auto convergence = open_out(config.paths.out_dir + "/convergence.csv");
  convergence << "iteration,best_objective,winner_node,ants_at_winner\n";
  for (const auto& stats : result.trace) {
    convergence << stats.iteration << ',' << std::fixed << std::setprecision(6)
                << stats.best_objective << ',' << stats.winner_node << ','
                << stats.ants_at_winner << '\n';
  }

  std::ostringstream summary;
  summary << "r_p = " << format_metric(result.best.portfolio_return) << "\n"
          << "v_p = " << format_metric(result.best.portfolio_variance) << "\n"
          << "s_p = " << format_metric(result.best.portfolio_skewness) << "\n"
          << "mu_s = " << format_metric(result.best.mu_s) << "\n"
          << "objective = " << format_metric(result.best.objective) << "\n"
          << "feasible = " << (result.best.feasible ? "yes" : "no") << "\n"
          << "seed = " << config.aco.seed << "\n";
  auto summary_file = open_out(config.paths.out_dir + "/summary.txt");
  summary_file << summary.str();
  summary << "allocation -> " << config.paths.out_dir << "/allocation.csv\n";
  return summary.str();
}

std::string cmd_evaluate(const RunConfig& config, const std::string& weights_csv) {
  config.validate();
  const WeightsFile file = load_weights(weights_csv);
  const double sum = file.weights.sum();
  if (std::abs(sum - 1.0) > 0.01) {
    throw DataError(weights_csv + ": weights sum to " + format_metric(sum) +
                    "; expected 1 within 0.01");
  }
  const MarketData data = MarketData::load(config.paths.factors, config.paths.returns);
  for (const auto& stock : file.stocks) {
    if (!data.has_stock(stock)) {
      throw DataError(weights_csv + ": unknown stock '" + stock + "'");
    }
  }
  PortfolioProblem problem = build_problem(config, data, file.stocks);
  const Eigen::VectorXd weights = file.weights / sum;  // absorb rounding drift

  const PortfolioCandidate candidate = evaluate(problem, weights);

  // Report mu_s both ways regardless of the configured mode.
  PortfolioProblem computed_problem = problem;
  computed_problem.fixed_mu_s.reset();
  const double mu_computed = mu_s(computed_problem, weights);

  std::ostringstream out;
  out << "weights_renormalized = " << (std::abs(sum - 1.0) > 1e-12 ? "yes" : "no")
      << "\n"
      << "r_p = " << format_metric(candidate.portfolio_return) << "\n"
      << "v_p = " << format_metric(candidate.portfolio_variance) << "\n"
      << "s_p = " << format_metric(candidate.portfolio_skewness) << "\n"
      << "mu_s_computed = " << format_metric(mu_computed) << "\n";
  if (problem.fixed_mu_s) {
    out << "mu_s_fixed = " << format_metric(*problem.fixed_mu_s) << "\n";
  }
  out << "objective = " << format_metric(candidate.objective) << "\n"
      << "feasible = " << (candidate.feasible ? "yes" : "no") << "\n";
  for (const auto& violation : candidate.violations) {
    out << "violated: " << violation << "\n";
  }
  return out.str();
}

}  // namespace dsfolio
