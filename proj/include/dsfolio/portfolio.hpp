#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dsfolio/triangular.hpp"

namespace dsfolio {

/// One investable asset, in ranking order.
struct Asset {
  std::string name;
  TriangularFuzzyNumber fuzzy_ret;
  double semivariance = 0.0;
};

/// Direction of an inequality constraint on a portfolio statistic.
enum class Bound { GreaterEq, LessEq, Greater, Less };

struct ConstraintDirections {
  Bound portfolio_return = Bound::GreaterEq;   // r_p vs alpha
  Bound portfolio_variance = Bound::LessEq;    // v_p vs beta (risk tolerance)
  Bound portfolio_skewness = Bound::GreaterEq; // s_p vs gamma
};

/// The allocation model: maximize (r_p - r_f) / mu_s over simplex weights,
/// subject to bounds on the portfolio return/variance/skewness, a per-asset
/// cap M, and (optionally) non-increasing weights in ranking order.
struct PortfolioProblem {
  std::vector<Asset> assets;  // order fixed: rank 1 first
  double risk_free_rate = 0.01;
  double alpha = 0.05;
  double beta = 0.5;
  double gamma = 0.001;
  double max_weight = 0.8;  // M
  /// Fixed weighted-mean-semivariance denominator; when unset mu_s is
  /// computed from the candidate weights.
  std::optional<double> fixed_mu_s;
  bool rank_preference = true;
  ConstraintDirections directions;

  std::size_t size() const { return assets.size(); }
  /// Throws InfeasibleError when no allocation can satisfy the structural
  /// constraints (e.g. n*M < 1), ConfigError on parameter nonsense.
  void validate() const;
};

struct PortfolioCandidate {
  Eigen::VectorXd weights;
  double portfolio_return = 0.0;    // r_p
  double portfolio_variance = 0.0;  // v_p
  double portfolio_skewness = 0.0;  // s_p; NaN when undefined (degenerate)
  double mu_s = 0.0;
  double objective = 0.0;
  bool feasible = false;
  std::vector<std::string> violations;
};

/// Ant colony parameters. All stochastic behaviour flows from `seed`.
struct AcoParams {
  int node_count = 2000;   // N random solution nodes
  int ants = 50;           // colony size
  int iterations = 400;    // I
  int lifetime = 20;       // L steps per ant (L-1 moves)
  double evaporation = 0.1;        // rho in (0,1)
  double deposit = 1.0;            // Delta
  double initial_pheromone = 1.0;  // tau_0
  std::uint64_t seed = 1;

  void validate() const;
};

struct IterationStats {
  int iteration = 0;        // 1-based
  double best_objective = 0.0;  // best objective visited by any ant so far
  int winner_node = 0;      // node where most ants terminated
  int ants_at_winner = 0;
};

struct AcoResult {
  PortfolioCandidate best;
  std::vector<IterationStats> trace;
  double max_pheromone = 0.0;  // peak pheromone observed (bound check)
};

/// Weighted mean of asset semivariances: weights sorted descending, the
/// i-th largest weight paired with the i-th ranked asset's semivariance.
/// In fixed mode returns the configured constant regardless of weights.
double mu_s(const PortfolioProblem& problem, const Eigen::VectorXd& weights);

/// Compute all cached statistics for a weight vector: the portfolio return
/// triangle via the weighted sum of asset triangles, its possibilistic
/// moments, mu_s, the objective (r_p - r_f)/mu_s, and feasibility.
/// Throws DomainError when mu_s is zero (objective undefined).
PortfolioCandidate evaluate(const PortfolioProblem& problem,
                            const Eigen::VectorXd& weights);

/// Feasibility verdict plus the list of violated constraints. Checks the
/// statistic bounds, the simplex constraints (sum 1 within 1e-9, weights
/// strictly positive, per-asset cap) and, with rank preference on,
/// non-increasing weights.
std::vector<std::string> check_feasible(const PortfolioProblem& problem,
                                        const PortfolioCandidate& candidate);

/// Sample a random feasible candidate: exponential(1) variates normalized
/// onto the simplex (uniform Dirichlet), sorted descending under rank
/// preference, cap violations repaired by clipping to M and redistributing
/// the excess proportionally. Retries up to 1000 times before declaring the
/// problem infeasible.
PortfolioCandidate random_feasible(const PortfolioProblem& problem,
                                   std::mt19937_64& rng);

/// Ant-colony search over a population of random feasible candidates:
/// ants walk a pheromone-weighted node graph, moving only to better nodes;
/// the node where most ants settle each iteration reinforces its incoming
/// paths; pheromone evaporates each iteration. Deterministic for a fixed
/// seed. Returns the best candidate evaluated plus a per-iteration trace.
AcoResult solve_aco(const PortfolioProblem& problem, const AcoParams& params);

}  // namespace dsfolio
