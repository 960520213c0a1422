#include "dsfolio/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "dsfolio/errors.hpp"

namespace dsfolio {

namespace {

constexpr double kSimplexTolerance = 1e-9;
constexpr double kCapTolerance = 1e-12;
constexpr double kHeuristicFloor = 1e-9;

/// 53-bit uniform draw in [0,1); bit-stable across standard libraries.
double canonical(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double exponential_variate(std::mt19937_64& rng) {
  return -std::log1p(-canonical(rng));
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

bool satisfies(double value, Bound bound, double limit) {
  switch (bound) {
    case Bound::GreaterEq: return value >= limit;
    case Bound::LessEq: return value <= limit;
    case Bound::Greater: return value > limit;
    case Bound::Less: return value < limit;
  }
  return false;
}

const char* bound_symbol(Bound bound) {
  switch (bound) {
    case Bound::GreaterEq: return ">=";
    case Bound::LessEq: return "<=";
    case Bound::Greater: return ">";
    case Bound::Less: return "<";
  }
  return "?";
}

}  // namespace

void PortfolioProblem::validate() const {
  if (assets.empty()) throw ConfigError("portfolio problem has no assets");
  if (!(max_weight > 0.0 && max_weight <= 1.0)) {
    throw ConfigError("per-asset cap M must lie in (0, 1]");
  }
  if (fixed_mu_s && *fixed_mu_s == 0.0) {
    throw ConfigError("fixed mu_s must be non-zero");
  }
  const double n = static_cast<double>(assets.size());
  if (n * max_weight < 1.0 - kCapTolerance) {
    throw InfeasibleError("cap infeasibility: n*M < 1, weights cannot sum to 1");
  }
}

void AcoParams::validate() const {
  if (node_count < 1 || ants < 1 || iterations < 1 || lifetime < 1) {
    throw ConfigError("aco counts must all be >= 1");
  }
  if (!(evaporation > 0.0 && evaporation < 1.0)) {
    throw ConfigError("aco evaporation rate must lie in (0, 1)");
  }
  if (!(deposit >= 0.0) || !(initial_pheromone > 0.0)) {
    throw ConfigError("aco deposit must be >= 0 and initial pheromone > 0");
  }
}

double mu_s(const PortfolioProblem& problem, const Eigen::VectorXd& weights) {
  if (problem.fixed_mu_s) return *problem.fixed_mu_s;
  if (static_cast<std::size_t>(weights.size()) != problem.size()) {
    throw DomainError("weight vector size does not match asset count");
  }
  std::vector<double> sorted(weights.data(), weights.data() + weights.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double acc = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    acc += sorted[i] * problem.assets[i].semivariance;
  }
  return acc;
}

PortfolioCandidate evaluate(const PortfolioProblem& problem,
                            const Eigen::VectorXd& weights) {
  if (static_cast<std::size_t>(weights.size()) != problem.size()) {
    throw DomainError("weight vector size does not match asset count");
  }
  std::vector<std::pair<double, TriangularFuzzyNumber>> terms;
  terms.reserve(problem.size());
  for (std::size_t i = 0; i < problem.size(); ++i) {
    terms.emplace_back(std::max(weights[static_cast<Eigen::Index>(i)], 0.0),
                       problem.assets[i].fuzzy_ret);
  }
  const TriangularFuzzyNumber portfolio = weighted_sum(terms);

  PortfolioCandidate candidate;
  candidate.weights = weights;
  candidate.portfolio_return = mean(portfolio);
  candidate.portfolio_variance = variance(portfolio);
  if (portfolio.degenerate()) {
    candidate.portfolio_skewness = std::numeric_limits<double>::quiet_NaN();
  } else {
    candidate.portfolio_skewness = skewness(portfolio);
  }
  candidate.mu_s = mu_s(problem, weights);
  if (candidate.mu_s == 0.0) {
    throw DomainError("objective undefined: mu_s is zero");
  }
  candidate.objective =
      (candidate.portfolio_return - problem.risk_free_rate) / candidate.mu_s;
  candidate.violations = check_feasible(problem, candidate);
  candidate.feasible = candidate.violations.empty();
  return candidate;
}

std::vector<std::string> check_feasible(const PortfolioProblem& problem,
                                        const PortfolioCandidate& candidate) {
  std::vector<std::string> violations;
  const Eigen::VectorXd& x = candidate.weights;
  if (static_cast<std::size_t>(x.size()) != problem.size()) {
    violations.push_back("weight count");
    return violations;
  }
  if (std::abs(x.sum() - 1.0) > kSimplexTolerance) {
    violations.push_back("weight sum");
  }
  if ((x.array() <= 0.0).any()) {
    violations.push_back("weight positivity");
  }
  if ((x.array() > problem.max_weight + kCapTolerance).any()) {
    violations.push_back("weight cap");
  }
  const auto& dir = problem.directions;
  if (!satisfies(candidate.portfolio_return, dir.portfolio_return, problem.alpha)) {
    violations.push_back(std::string("return bound (r_p ") +
                         bound_symbol(dir.portfolio_return) + " alpha)");
  }
  if (!satisfies(candidate.portfolio_variance, dir.portfolio_variance,
                 problem.beta)) {
    violations.push_back(std::string("variance bound (v_p ") +
                         bound_symbol(dir.portfolio_variance) + " beta)");
  }
  if (std::isnan(candidate.portfolio_skewness)) {
    violations.push_back("skewness undefined (degenerate portfolio return)");
  } else if (!satisfies(candidate.portfolio_skewness, dir.portfolio_skewness,
                        problem.gamma)) {
    violations.push_back(std::string("skewness bound (s_p ") +
                         bound_symbol(dir.portfolio_skewness) + " gamma)");
  }
  if (problem.rank_preference) {
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
      if (x[i] < x[i + 1] - kCapTolerance) {
        violations.push_back("rank preference (weights not non-increasing)");
        break;
      }
    }
  }
  return violations;
}

namespace {

/// Clip weights above the cap to M and hand the excess to unclipped assets
/// proportionally to their current size. Preserves the total and, for a
/// descending input, the descending order.
void repair_cap(Eigen::VectorXd& x, double cap) {
  for (int pass = 0; pass < static_cast<int>(x.size()) + 1; ++pass) {
    double excess = 0.0;
    double free_total = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] > cap) {
        excess += x[i] - cap;
      } else {
        free_total += x[i];
      }
    }
    if (excess <= 0.0) return;
    if (free_total <= 0.0) {
      // Everything at the cap; only possible when n*M == 1.
      x.setConstant(cap);
      return;
    }
    const double scale = 1.0 + excess / free_total;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x[i] = (x[i] > cap) ? cap : x[i] * scale;
    }
  }
}

}  // namespace

PortfolioCandidate random_feasible(const PortfolioProblem& problem,
                                   std::mt19937_64& rng) {
  problem.validate();
  const auto n = static_cast<Eigen::Index>(problem.size());
  constexpr int kMaxAttempts = 1000;
  std::map<std::string, int> violation_counts;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = exponential_variate(rng);
    const double total = x.sum();
    if (total <= 0.0) continue;
    x /= total;
    if (problem.rank_preference) {
      std::sort(x.data(), x.data() + x.size(), std::greater<double>());
    }
    repair_cap(x, problem.max_weight);
    x /= x.sum();
    PortfolioCandidate candidate = evaluate(problem, x);
    if (candidate.feasible) return candidate;
    for (const auto& violation : candidate.violations) {
      ++violation_counts[violation];
    }
  }
  std::string report = "no feasible allocation found in " +
                       std::to_string(kMaxAttempts) + " samples; violations:";
  for (const auto& [violation, count] : violation_counts) {
    report += " [" + violation + " x" + std::to_string(count) + "]";
  }
  throw InfeasibleError(report);
}

AcoResult solve_aco(const PortfolioProblem& problem, const AcoParams& params) {
  problem.validate();
  params.validate();
  std::mt19937_64 rng(params.seed);

  const int n_nodes = params.node_count;
  std::vector<PortfolioCandidate> nodes;
  nodes.reserve(static_cast<std::size_t>(n_nodes));
  for (int i = 0; i < n_nodes; ++i) nodes.push_back(random_feasible(problem, rng));

  Eigen::VectorXd objective(n_nodes);
  for (int i = 0; i < n_nodes; ++i) objective[i] = nodes[static_cast<std::size_t>(i)].objective;
  const double obj_lo = objective.minCoeff();
  const double obj_hi = objective.maxCoeff();
  const double gain_scale = std::max(obj_hi - obj_lo, 1e-12);

  Eigen::VectorXd heuristic(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    heuristic[i] = std::max(objective[i], 0.0) + kHeuristicFloor;
  }

  Eigen::MatrixXd pheromone =
      Eigen::MatrixXd::Constant(n_nodes, n_nodes, params.initial_pheromone);
  double current_max_pheromone = params.initial_pheromone;

  int best_node = 0;
  for (int i = 1; i < n_nodes; ++i) {
    if (objective[i] > objective[best_node]) best_node = i;
  }

  AcoResult result;
  result.max_pheromone = current_max_pheromone;
  double best_visited = -std::numeric_limits<double>::infinity();

  std::vector<double> cumulative(static_cast<std::size_t>(n_nodes));
  std::vector<int> terminal_count(static_cast<std::size_t>(n_nodes));
  std::vector<std::vector<int>> paths(static_cast<std::size_t>(params.ants));
  std::unordered_map<std::int64_t, double> deposits;

  const auto edge_key = [n_nodes](int from, int to) {
    return static_cast<std::int64_t>(from) * n_nodes + to;
  };

  for (int iteration = 1; iteration <= params.iterations; ++iteration) {
    std::fill(terminal_count.begin(), terminal_count.end(), 0);
    deposits.clear();

    for (int ant = 0; ant < params.ants; ++ant) {
      int current = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n_nodes)));
      best_visited = std::max(best_visited, objective[current]);
      auto& path = paths[static_cast<std::size_t>(ant)];
      path.clear();
      path.push_back(current);

      for (int step = 1; step < params.lifetime; ++step) {
        // Next node sampled with probability proportional to
        // pheromone(current -> j) * heuristic(j).
        double total = 0.0;
        for (int j = 0; j < n_nodes; ++j) {
          if (j != current) total += pheromone(current, j) * heuristic[j];
          cumulative[static_cast<std::size_t>(j)] = total;
        }
        if (total <= 0.0) break;
        const double u = canonical(rng) * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        int next = static_cast<int>(it - cumulative.begin());
        if (next >= n_nodes) next = n_nodes - 1;
        if (next == current) continue;  // cannot happen: zero-width slot
        if (objective[next] > objective[current]) {
          const double gain = (objective[next] - objective[current]) / gain_scale;
          deposits[edge_key(current, next)] += params.deposit * gain;
          current = next;
          path.push_back(current);
          best_visited = std::max(best_visited, objective[current]);
        }
      }
      ++terminal_count[static_cast<std::size_t>(current)];
    }

    // Iteration winner: most ants, then higher objective, then lowest index.
    int winner = 0;
    for (int i = 1; i < n_nodes; ++i) {
      if (terminal_count[static_cast<std::size_t>(i)] >
              terminal_count[static_cast<std::size_t>(winner)] ||
          (terminal_count[static_cast<std::size_t>(i)] ==
               terminal_count[static_cast<std::size_t>(winner)] &&
           objective[i] > objective[winner])) {
        winner = i;
      }
    }

    // Reinforce the paths of every ant that settled on the winner.
    for (const auto& path : paths) {
      if (path.empty() || path.back() != winner) continue;
      for (std::size_t e = 0; e + 1 < path.size(); ++e) {
        deposits[edge_key(path[e], path[e + 1])] += params.deposit;
      }
    }

    // Apply deposits (capped at Delta per edge per iteration), then
    // evaporate. The cap keeps pheromone within tau_0 + Delta*I overall.
    for (const auto& [key, amount] : deposits) {
      const int from = static_cast<int>(key / n_nodes);
      const int to = static_cast<int>(key % n_nodes);
      double& cell = pheromone(from, to);
      cell += std::min(amount, params.deposit);
      current_max_pheromone = std::max(current_max_pheromone, cell);
    }
    result.max_pheromone = std::max(result.max_pheromone, current_max_pheromone);
    pheromone *= (1.0 - params.evaporation);
    current_max_pheromone *= (1.0 - params.evaporation);

    result.trace.push_back(IterationStats{
        iteration, best_visited, winner,
        terminal_count[static_cast<std::size_t>(winner)]});
  }

  result.best = nodes[static_cast<std::size_t>(best_node)];
  return result;
}

}  // namespace dsfolio
