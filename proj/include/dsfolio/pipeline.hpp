#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dsfolio/config.hpp"
#include "dsfolio/market.hpp"
#include "dsfolio/portfolio.hpp"

namespace dsfolio {

struct RankingRow {
  std::string stock;
  double score = 0.0;
};

struct RankingOutcome {
  /// Scored stocks, best first; equal scores ordered alphabetically.
  std::vector<RankingRow> ranked;
  /// Stocks left out of the ranking, with the reason.
  std::vector<std::pair<std::string, std::string>> excluded;
};

/// Crisp inference inputs for one stock: test-year factors normalized by the
/// per-stock training-window maximum.
struct StockInputs {
  bool ok = false;
  std::vector<double> values;  // one per input variable, in variable order
  std::string reason;          // exclusion reason when !ok
};

StockInputs normalized_inputs(const RunConfig& config, const MarketData& data,
                              const std::string& stock);

/// Score every stock with the rule base and order them.
RankingOutcome rank_stocks(const RunConfig& config, const MarketData& data,
                           const std::vector<FuzzyRule>& rules);

/// Assemble the allocation problem for the given stocks (rank order): fuzzy
/// returns over the configured window, semivariances, bounds from config.
PortfolioProblem build_problem(const RunConfig& config, const MarketData& data,
                               const std::vector<std::string>& stocks);

/// Command implementations shared by the CLI and the integration tests.
/// Each writes its outputs under config.paths.out_dir and returns a short
/// human-readable summary for stdout. Errors are thrown (ConfigError /
/// DataError -> exit 1, InfeasibleError -> 2, IoError -> 3).
std::string cmd_rules(const RunConfig& config);
std::string cmd_rank(const RunConfig& config);
std::string cmd_optimize(const RunConfig& config);
std::string cmd_evaluate(const RunConfig& config, const std::string& weights_csv);

/// Ranking file helpers (ranking.csv: rank,stock,score).
void write_ranking(const RankingOutcome& outcome, const std::string& ranking_csv,
                   const std::string& excluded_csv);
std::vector<RankingRow> load_ranking(const std::string& ranking_csv);

/// Allocation weights file (rank,stock,weight), row order = rank order.
struct WeightsFile {
  std::vector<std::string> stocks;
  Eigen::VectorXd weights;
};
WeightsFile load_weights(const std::string& path);

}  // namespace dsfolio
