#include <doctest.h>

#include <cmath>
#include <fstream>
#include <string>

#include "dsfolio/config.hpp"
#include "dsfolio/errors.hpp"
#include "dsfolio/pipeline.hpp"
#include "dsfolio/rules.hpp"

using namespace dsfolio;

namespace {

const std::string kSourceDir = DSFOLIO_SOURCE_DIR;

RunConfig sample_config() {
  RunConfig cfg;
  cfg.paths.factors = kSourceDir + "/data/sample/factors.csv";
  cfg.paths.returns = kSourceDir + "/data/sample/returns.csv";
  return cfg;
}

}  // namespace

TEST_CASE("defaults are valid and serialize round-trip") {
  RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.portfolio.risk_free_rate == 0.01);
  CHECK(cfg.portfolio.alpha == 0.05);
  CHECK(cfg.portfolio.beta == 0.5);
  CHECK(cfg.portfolio.gamma == 0.001);
  CHECK(cfg.portfolio.max_weight == 0.8);
  CHECK(cfg.portfolio.mu_s_mode == MuSMode::Fixed);
  CHECK(cfg.portfolio.mu_s_fixed == 0.0016);
  CHECK(cfg.portfolio.top_k == 10);
  CHECK(cfg.aco.node_count == 2000);
  CHECK(cfg.aco.ants == 50);
  CHECK(cfg.aco.iterations == 400);
  CHECK(cfg.aco.lifetime == 20);

  // Applying the serialized defaults changes nothing observable.
  const RunConfig reparsed =
      apply_config_json(RunConfig(), default_config_json(), "defaults");
  CHECK(reparsed.portfolio.alpha == cfg.portfolio.alpha);
  CHECK(reparsed.aco.node_count == cfg.aco.node_count);
  CHECK(reparsed.input_variables.size() == cfg.input_variables.size());
  CHECK(reparsed.bpa.entry("pe", "Standard").belief == 0.75);
}

TEST_CASE("config overrides and validation errors") {
  SUBCASE("partial override keeps other defaults") {
    const RunConfig cfg = apply_config_json(
        RunConfig(), R"({"portfolio": {"alpha": 0.07}, "aco": {"seed": 9}})",
        "test");
    CHECK(cfg.portfolio.alpha == 0.07);
    CHECK(cfg.portfolio.beta == 0.5);
    CHECK(cfg.aco.seed == 9);
    CHECK(cfg.aco.ants == 50);
  }
  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_WITH_AS(
        apply_config_json(RunConfig(), R"({"portfolioo": {}})", "test"),
        doctest::Contains("portfolioo"), ConfigError);
    CHECK_THROWS_WITH_AS(
        apply_config_json(RunConfig(), R"({"aco": {"alpha": 1}})", "test"),
        doctest::Contains("alpha"), ConfigError);
  }
  SUBCASE("bad enum values are rejected") {
    CHECK_THROWS_AS(apply_config_json(
                        RunConfig(), R"({"inference": {"and_op": "mean"}})", "test"),
                    ConfigError);
    CHECK_THROWS_AS(
        apply_config_json(RunConfig(),
                          R"({"portfolio": {"variance_direction": "up"}})", "test"),
        ConfigError);
  }
  SUBCASE("bpa cells merge on top of defaults") {
    const RunConfig cfg = apply_config_json(
        RunConfig(),
        R"({"bpa": {"pe": {"Low": {"hypothesis": "P_P", "belief": 0.5}}}})",
        "test");
    CHECK(cfg.bpa.entry("pe", "Low").hypothesis == "P_P");
    CHECK(cfg.bpa.entry("pe", "Low").belief == 0.5);
    CHECK(cfg.bpa.entry("pb", "Low").hypothesis == "P_P");  // untouched
  }
  SUBCASE("new input variable without bpa cells fails naming the cell") {
    const std::string json = R"({
      "variables": {"inputs": [
        {"name": "roe", "range": [0, 10], "sets": [
          {"label": "Low", "points": [0, 0, 2, 3]},
          {"label": "High", "points": [2, 3, 10, 10]}]}
      ]}})";
    CHECK_THROWS_WITH_AS(apply_config_json(RunConfig(), json, "test"),
                         doctest::Contains("(roe, Low)"), ConfigError);
  }
  SUBCASE("malformed json carries context") {
    CHECK_THROWS_AS(apply_config_json(RunConfig(), "{", "broken.json"), ConfigError);
  }
  SUBCASE("invalid threshold ordering") {
    CHECK_THROWS_AS(apply_config_json(
                        RunConfig(), R"({"favourability": {"not_max": 0.9}})", "test"),
                    ConfigError);
  }
}

TEST_CASE("load_config reads files and maps io errors") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
  const std::string path = "/tmp/dsfolio_test_config.json";
  {
    std::ofstream out(path);
    out << R"({"aco": {"nodes": 64}})";
  }
  const RunConfig cfg = load_config(path);
  CHECK(cfg.aco.node_count == 64);
  std::remove(path.c_str());
}

TEST_CASE("pipeline ranks the sample dataset in the engineered order") {
  const RunConfig cfg = sample_config();
  const MarketData data = MarketData::load(cfg.paths.factors, cfg.paths.returns);
  const auto rules = cfg.make_inducer().induce_all();
  const RankingOutcome outcome = rank_stocks(cfg, data, rules);

  const std::vector<std::string> expected = {
      "Hindustan Unilever Ltd.",
      "Sun Pharmaceutical Inds. Ltd.",
      "I T C Ltd.",
      "Coal India Ltd.",
      "Tata Consultancy Services Ltd.",
      "Infosys Ltd.",
      "Dr. Reddy'S Laboratories Ltd.",
      "Bajaj Auto Ltd.",
      "Hero Motocorp Ltd.",
      "Cipla Ltd.",
      "Vintage Textiles Ltd.",
      "Meridian Infra Ltd."};
  REQUIRE(outcome.ranked.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(outcome.ranked[i].stock == expected[i]);
    CHECK(outcome.ranked[i].score >= 0.0);
    CHECK(outcome.ranked[i].score <= 1.0);
    if (i > 0) CHECK(outcome.ranked[i].score < outcome.ranked[i - 1].score);
  }
  // The top profile fires the strongest rule at full strength; its score is
  // the centroid of the whole top output set (about 0.87).
  CHECK(outcome.ranked[0].score == doctest::Approx(0.87).epsilon(2e-3));

  REQUIRE(outcome.excluded.size() == 1);
  CHECK(outcome.excluded[0].first == "Sterling Chemicals Ltd.");
  CHECK(outcome.excluded[0].second.find("test year") != std::string::npos);
}

TEST_CASE("identical inputs give identical scores with alphabetical ties") {
  RunConfig cfg = sample_config();
  const std::string factors = "/tmp/dsfolio_tie_factors.csv";
  const std::string returns = "/tmp/dsfolio_tie_returns.csv";
  {
    std::ofstream f(factors);
    f << "stock,year,pe,pb,ps,ltder\n";
    for (const auto& stock : {"Zeta Ltd.", "Alpha Ltd."}) {
      for (int y = 2003; y <= 2011; ++y) {
        f << stock << ',' << y << ",20,8,4,2\n";
      }
      f << stock << ",2012,8,7.84,3.6,0.25\n";  // same test-year inputs
    }
  }
  {
    std::ofstream r(returns);
    r << "stock,year,return\n";
    for (const auto& stock : {"Zeta Ltd.", "Alpha Ltd."}) {
      for (int y = 2008; y <= 2012; ++y) {
        r << stock << ',' << y << ",0.05\n";
      }
    }
  }
  cfg.paths.factors = factors;
  cfg.paths.returns = returns;
  const MarketData data = MarketData::load(factors, returns);
  const auto rules = cfg.make_inducer().induce_all();
  const RankingOutcome outcome = rank_stocks(cfg, data, rules);
  REQUIRE(outcome.ranked.size() == 2);
  CHECK(outcome.ranked[0].score == outcome.ranked[1].score);
  CHECK(outcome.ranked[0].stock == "Alpha Ltd.");  // tie broken alphabetically
  std::remove(factors.c_str());
  std::remove(returns.c_str());
}

TEST_CASE("grid doubling moves pipeline scores by less than 1e-4") {
  RunConfig cfg = sample_config();
  const MarketData data = MarketData::load(cfg.paths.factors, cfg.paths.returns);
  const auto rules = cfg.make_inducer().induce_all();
  const RankingOutcome at_1001 = rank_stocks(cfg, data, rules);
  cfg.inference.grid_samples = 2001;
  const RankingOutcome at_2001 = rank_stocks(cfg, data, rules);
  REQUIRE(at_1001.ranked.size() == at_2001.ranked.size());
  for (std::size_t i = 0; i < at_1001.ranked.size(); ++i) {
    CHECK(at_1001.ranked[i].stock == at_2001.ranked[i].stock);
    CHECK(std::abs(at_1001.ranked[i].score - at_2001.ranked[i].score) < 1e-4);
  }
}

TEST_CASE("clamp_inputs rescues out-of-range test values") {
  RunConfig cfg = sample_config();
  const std::string factors = "/tmp/dsfolio_clamp_factors.csv";
  const std::string returns = "/tmp/dsfolio_clamp_returns.csv";
  {
    std::ofstream f(factors);
    f << "stock,year,pe,pb,ps,ltder\n";
    for (int y = 2003; y <= 2011; ++y) f << "Hot Ltd.," << y << ",10,5,2,1\n";
    // Test-year pe exceeds the 9-year maximum: normalized value 12 > 10.
    f << "Hot Ltd.,2012,12,5,2,1\n";
  }
  {
    std::ofstream r(returns);
    r << "stock,year,return\n";
    for (int y = 2008; y <= 2012; ++y) r << "Hot Ltd.," << y << ",0.05\n";
  }
  cfg.paths.factors = factors;
  cfg.paths.returns = returns;
  const MarketData data = MarketData::load(factors, returns);
  const auto rules = cfg.make_inducer().induce_all();

  const RankingOutcome strict = rank_stocks(cfg, data, rules);
  CHECK(strict.ranked.empty());
  REQUIRE(strict.excluded.size() == 1);
  CHECK(strict.excluded[0].second.find("outside") != std::string::npos);

  cfg.inference.clamp_inputs = true;
  const RankingOutcome clamped = rank_stocks(cfg, data, rules);
  CHECK(clamped.ranked.size() == 1);
  std::remove(factors.c_str());
  std::remove(returns.c_str());
}

TEST_CASE("build_problem assembles fuzzy returns from the dataset") {
  const RunConfig cfg = sample_config();
  const MarketData data = MarketData::load(cfg.paths.factors, cfg.paths.returns);
  const PortfolioProblem problem =
      build_problem(cfg, data, {"Hindustan Unilever Ltd.", "I T C Ltd."});
  REQUIRE(problem.assets.size() == 2);
  const Eigen::VectorXd series = data.returns_series("Hindustan Unilever Ltd.",
                                                     cfg.years.returns_first,
                                                     cfg.years.returns_last);
  const TriangularFuzzyNumber expected = fuzzy_return(series);
  CHECK(problem.assets[0].fuzzy_ret.a == expected.a);
  CHECK(problem.assets[0].fuzzy_ret.b == expected.b);
  CHECK(problem.assets[0].fuzzy_ret.c == expected.c);
  CHECK(problem.assets[0].semivariance == doctest::Approx(semivariance(series)));
  CHECK(problem.fixed_mu_s.has_value());
  CHECK(*problem.fixed_mu_s == 0.0016);

  CHECK_THROWS_AS(build_problem(cfg, data, {"No Such Stock"}), DataError);
}

TEST_CASE("sample dataset reproduces the published portfolio return") {
  const RunConfig cfg = sample_config();
  const MarketData data = MarketData::load(cfg.paths.factors, cfg.paths.returns);
  const WeightsFile file =
      load_weights(kSourceDir + "/data/sample/reference_allocation.csv");
  REQUIRE(file.stocks.size() == 10);
  const PortfolioProblem problem = build_problem(cfg, data, file.stocks);
  const Eigen::VectorXd weights = file.weights / file.weights.sum();
  const PortfolioCandidate candidate = evaluate(problem, weights);
  CHECK(std::abs(candidate.portfolio_return - 0.1317) <= 0.0005);
  CHECK(std::abs(candidate.objective - 76.06) <= 0.4);
  CHECK(candidate.feasible);
}
