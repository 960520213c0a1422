#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dsfolio/triangular.hpp"

namespace dsfolio {

/// Raw factor ratios for one stock and fiscal year. Years are keyed by the
/// fiscal-year start (2012 means FY 2012-13).
struct FactorSample {
  double pe = 0.0;
  double pb = 0.0;
  double ps = 0.0;
  double ltder = 0.0;

  double by_name(const std::string& factor) const;
  static const std::vector<std::string>& factor_names();  // pe, pb, ps, ltder
};

struct StockRecord {
  std::string name;
  std::map<int, FactorSample> factors;  // year -> ratios
  std::map<int, double> returns;        // year -> per-period return fraction
};

/// Immutable historical dataset loaded from the factors/returns CSV files.
/// Schemas (exact headers, '.' decimal separator):
///   factors.csv: stock,year,pe,pb,ps,ltder
///   returns.csv: stock,year,return
/// Rows with missing or unparsable fields are rejected with line numbers;
/// duplicate (stock, year) rows are rejected. Negative factor values are
/// accepted but flagged in warnings() (loss-making firms can print a
/// negative P/E).
class MarketData {
 public:
  static MarketData load(const std::string& factors_csv,
                         const std::string& returns_csv);

  /// Stock names, sorted, for deterministic iteration.
  std::vector<std::string> stocks() const;
  bool has_stock(const std::string& name) const;
  const StockRecord& record(const std::string& name) const;

  /// Factor values for one stock over [first_year, last_year], only the
  /// years present, oldest first.
  Eigen::VectorXd factor_series(const std::string& stock,
                                const std::string& factor, int first_year,
                                int last_year) const;
  /// Returns over [first_year, last_year], only the years present, oldest
  /// first. Empty vector when no year is covered.
  Eigen::VectorXd returns_series(const std::string& stock, int first_year,
                                 int last_year) const;

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::map<std::string, StockRecord> records_;
  std::vector<std::string> warnings_;
};

/// Largest value of a training series, used as the normalization basis.
double normalization_basis(const Eigen::VectorXd& training_values);

/// Scale values so that `basis` maps to 10: v -> 10*v/basis. Full precision;
/// round only for report output. Throws DataError naming `what` when the
/// basis is not positive.
Eigen::VectorXd normalize(const Eigen::VectorXd& values, double basis,
                          const std::string& what = {});

/// Arithmetic mean of a non-empty return series.
double mean_return(const Eigen::VectorXd& returns);

enum class SemivarianceDivisor { Population, Sample };  // T vs T-1

/// Below-mean semivariance: (1/T) * sum(min(r - mean, 0)^2). The Markowitz
/// downside form; divisor configurable.
double semivariance(const Eigen::VectorXd& returns,
                    SemivarianceDivisor divisor = SemivarianceDivisor::Population);

/// Semivariance / mean. Lower is better. Throws DomainError on zero mean.
double sr_ratio(const Eigen::VectorXd& returns);

enum class ReturnWeighting { Positional, Uniform };

/// Triangular fuzzy return of a series ordered oldest -> newest:
/// (min, weighted mean, max) with position weights t_i = i (1-based), so the
/// newest observation weighs heaviest. Uniform weighting uses the plain mean.
TriangularFuzzyNumber fuzzy_return(const Eigen::VectorXd& returns,
                                   ReturnWeighting weighting = ReturnWeighting::Positional);

}  // namespace dsfolio
