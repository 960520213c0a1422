#include "dsfolio/market.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dsfolio/errors.hpp"

namespace dsfolio {

double FactorSample::by_name(const std::string& factor) const {
  if (factor == "pe") return pe;
  if (factor == "pb") return pb;
  if (factor == "ps") return ps;
  if (factor == "ltder") return ltder;
  throw DomainError("unknown factor: " + factor);
}

const std::vector<std::string>& FactorSample::factor_names() {
  static const std::vector<std::string> names = {"pe", "pb", "ps", "ltder"};
  return names;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& text, const std::string& file, int line_no,
                    const std::string& column) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw DataError(file + ":" + std::to_string(line_no) + ": bad value '" +
                    text + "' in column " + column);
  }
}

int parse_year(const std::string& text, const std::string& file, int line_no) {
  try {
    std::size_t pos = 0;
    const int y = std::stoi(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return y;
  } catch (const std::exception&) {
    throw DataError(file + ":" + std::to_string(line_no) + ": bad year '" +
                    text + "'");
  }
}

void expect_header(const std::string& got, const std::string& want,
                   const std::string& file) {
  std::string trimmed = got;
  while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == '\n')) {
    trimmed.pop_back();
  }
  if (trimmed != want) {
    throw DataError(file + ": expected header '" + want + "', got '" + trimmed + "'");
  }
}

std::string strip_cr(std::string line) {
  while (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

MarketData MarketData::load(const std::string& factors_csv,
                            const std::string& returns_csv) {
  MarketData data;

  std::ifstream factors(factors_csv);
  if (!factors) throw IoError("cannot open factors file: " + factors_csv);
  std::string line;
  if (!std::getline(factors, line)) {
    throw DataError(factors_csv + ": empty file");
  }
  expect_header(line, "stock,year,pe,pb,ps,ltder", factors_csv);
  int line_no = 1;
  while (std::getline(factors, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 6) {
      throw DataError(factors_csv + ":" + std::to_string(line_no) +
                      ": expected 6 fields, got " + std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (fields[i].empty()) {
        throw DataError(factors_csv + ":" + std::to_string(line_no) +
                        ": missing field " + std::to_string(i + 1));
      }
    }
    const std::string& stock = fields[0];
    const int year = parse_year(fields[1], factors_csv, line_no);
    FactorSample sample;
    sample.pe = parse_number(fields[2], factors_csv, line_no, "pe");
    sample.pb = parse_number(fields[3], factors_csv, line_no, "pb");
    sample.ps = parse_number(fields[4], factors_csv, line_no, "ps");
    sample.ltder = parse_number(fields[5], factors_csv, line_no, "ltder");
    StockRecord& rec = data.records_[stock];
    rec.name = stock;
    if (!rec.factors.emplace(year, sample).second) {
      throw DataError(factors_csv + ":" + std::to_string(line_no) +
                      ": duplicate factor row for (" + stock + ", " +
                      std::to_string(year) + ")");
    }
    for (const auto& factor : FactorSample::factor_names()) {
      if (sample.by_name(factor) < 0.0) {
        data.warnings_.push_back(stock + " " + std::to_string(year) +
                                 ": negative " + factor + " value " +
                                 std::to_string(sample.by_name(factor)));
      }
    }
  }

  std::ifstream returns(returns_csv);
  if (!returns) throw IoError("cannot open returns file: " + returns_csv);
  if (!std::getline(returns, line)) {
    throw DataError(returns_csv + ": empty file");
  }
  expect_header(line, "stock,year,return", returns_csv);
  line_no = 1;
  while (std::getline(returns, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3) {
      throw DataError(returns_csv + ":" + std::to_string(line_no) +
                      ": expected 3 fields, got " + std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (fields[i].empty()) {
        throw DataError(returns_csv + ":" + std::to_string(line_no) +
                        ": missing field " + std::to_string(i + 1));
      }
    }
    const std::string& stock = fields[0];
    const int year = parse_year(fields[1], returns_csv, line_no);
    const double value = parse_number(fields[2], returns_csv, line_no, "return");
    StockRecord& rec = data.records_[stock];
    rec.name = stock;
    if (!rec.returns.emplace(year, value).second) {
      throw DataError(returns_csv + ":" + std::to_string(line_no) +
                      ": duplicate return row for (" + stock + ", " +
                      std::to_string(year) + ")");
    }
  }
  return data;
}

std::vector<std::string> MarketData::stocks() const {
  std::vector<std::string> names;
  names.reserve(records_.size());
  for (const auto& [name, rec] : records_) names.push_back(name);
  return names;
}

bool MarketData::has_stock(const std::string& name) const {
  return records_.count(name) > 0;
}

const StockRecord& MarketData::record(const std::string& name) const {
  auto it = records_.find(name);
  if (it == records_.end()) throw DataError("unknown stock: " + name);
  return it->second;
}

Eigen::VectorXd MarketData::factor_series(const std::string& stock,
                                          const std::string& factor,
                                          int first_year, int last_year) const {
  const StockRecord& rec = record(stock);
  std::vector<double> values;
  for (const auto& [year, sample] : rec.factors) {
    if (year >= first_year && year <= last_year) {
      values.push_back(sample.by_name(factor));
    }
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

Eigen::VectorXd MarketData::returns_series(const std::string& stock,
                                           int first_year, int last_year) const {
  const StockRecord& rec = record(stock);
  std::vector<double> values;
  for (const auto& [year, value] : rec.returns) {
    if (year >= first_year && year <= last_year) values.push_back(value);
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                           static_cast<Eigen::Index>(values.size()));
}

double normalization_basis(const Eigen::VectorXd& training_values) {
  if (training_values.size() == 0) {
    throw DataError("normalization basis needs a non-empty training series");
  }
  return training_values.maxCoeff();
}

Eigen::VectorXd normalize(const Eigen::VectorXd& values, double basis,
                          const std::string& what) {
  if (!(basis > 0.0)) {
    const std::string label = what.empty() ? "series" : what;
    throw DataError("normalization basis for " + label + " must be positive (got " +
                    std::to_string(basis) + ")");
  }
  return 10.0 * values / basis;
}

double mean_return(const Eigen::VectorXd& returns) {
  if (returns.size() == 0) throw DomainError("mean of an empty return series");
  return returns.mean();
}

double semivariance(const Eigen::VectorXd& returns, SemivarianceDivisor divisor) {
  if (returns.size() == 0) {
    throw DomainError("semivariance of an empty return series");
  }
  const double mean = returns.mean();
  const Eigen::ArrayXd below = (returns.array() - mean).min(0.0);
  const double sum = (below * below).sum();
  const double t = static_cast<double>(returns.size());
  if (divisor == SemivarianceDivisor::Sample) {
    if (returns.size() < 2) {
      throw DomainError("sample semivariance needs at least 2 observations");
    }
    return sum / (t - 1.0);
  }
  return sum / t;
}

double sr_ratio(const Eigen::VectorXd& returns) {
  const double mean = mean_return(returns);
  if (mean == 0.0) {
    throw DomainError("S/R ratio undefined: mean return is zero");
  }
  return semivariance(returns) / mean;
}

TriangularFuzzyNumber fuzzy_return(const Eigen::VectorXd& returns,
                                   ReturnWeighting weighting) {
  if (returns.size() == 0) {
    throw DomainError("fuzzy return of an empty return series");
  }
  double core;
  if (weighting == ReturnWeighting::Uniform) {
    core = returns.mean();
  } else {
    // Position weights 1..T, newest (last) observation weighs heaviest.
    double weighted = 0.0, total = 0.0;
    for (Eigen::Index i = 0; i < returns.size(); ++i) {
      const double w = static_cast<double>(i + 1);
      weighted += w * returns[i];
      total += w;
    }
    core = weighted / total;
  }
  const double lo = returns.minCoeff();
  const double hi = returns.maxCoeff();
  // The weighted mean is a convex combination; keep rounding from pushing
  // it one ulp outside [lo, hi].
  core = std::clamp(core, lo, hi);
  return TriangularFuzzyNumber(lo, core, hi);
}

}  // namespace dsfolio
