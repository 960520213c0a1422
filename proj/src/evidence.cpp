#include "dsfolio/evidence.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "dsfolio/errors.hpp"

namespace dsfolio {

namespace {
constexpr double kTotalConflictEps = 1e-12;
}

Frame::Frame(std::vector<std::string> hypotheses) : labels_(std::move(hypotheses)) {
  if (labels_.size() < 2) {
    throw DomainError("frame needs at least 2 hypotheses");
  }
  if (labels_.size() > kMaxHypotheses) {
    throw DomainError("frame supports at most 16 hypotheses");
  }
  std::set<std::string> seen(labels_.begin(), labels_.end());
  if (seen.size() != labels_.size()) {
    throw DomainError("frame hypothesis labels must be unique");
  }
}

std::size_t Frame::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  throw DomainError("unknown hypothesis label: " + label);
}

HypothesisSet Frame::singleton(const std::string& label) const {
  return static_cast<HypothesisSet>(1u << index_of(label));
}

HypothesisSet Frame::subset(const std::vector<std::string>& labels) const {
  HypothesisSet s = 0;
  for (const auto& l : labels) s |= singleton(l);
  return s;
}

std::string Frame::subset_to_string(HypothesisSet set) const {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (set & (1u << i)) {
      if (!first) out << ',';
      out << labels_[i];
      first = false;
    }
  }
  out << '}';
  return out.str();
}

MassFunction::MassFunction(Frame frame, std::map<HypothesisSet, double> masses)
    : frame_(std::move(frame)), masses_(std::move(masses)) {
  const HypothesisSet full = frame_.full_set();
  double sum = 0.0;
  for (auto it = masses_.begin(); it != masses_.end();) {
    const auto [set, value] = *it;
    if (set == 0 && value != 0.0) {
      throw DomainError("the empty set cannot carry mass");
    }
    if ((set & ~full) != 0) {
      throw DomainError("focal element is not a subset of the frame");
    }
    if (!(value >= 0.0 && value <= 1.0)) {
      throw DomainError("mass values must lie in [0,1]");
    }
    sum += value;
    if (value == 0.0) {
      it = masses_.erase(it);
    } else {
      ++it;
    }
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw DomainError("masses must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

double MassFunction::mass(HypothesisSet set) const {
  auto it = masses_.find(set);
  return it == masses_.end() ? 0.0 : it->second;
}

std::string MassFunction::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [set, value] : masses_) {
    if (!first) out << '\n';
    out << frame_.subset_to_string(set) << ':' << value;
    first = false;
  }
  return out.str();
}

MassFunction vacuous(const Frame& frame) {
  return MassFunction(frame, {{frame.full_set(), 1.0}});
}

MassFunction from_single_belief(const Frame& frame, HypothesisSet hypothesis,
                                double belief) {
  if (hypothesis == 0) {
    throw DomainError("belief must target a non-empty subset");
  }
  if ((hypothesis & ~frame.full_set()) != 0) {
    throw DomainError("belief target is not a subset of the frame");
  }
  if (!(belief >= 0.0 && belief <= 1.0)) {
    throw DomainError("belief must lie in [0,1]");
  }
  std::map<HypothesisSet, double> m;
  m[hypothesis] += belief;
  m[frame.full_set()] += 1.0 - belief;
  return MassFunction(frame, std::move(m));
}

CombineResult combine(const MassFunction& m1, const MassFunction& m2) {
  if (m1.frame() != m2.frame()) {
    throw DomainError("cannot combine masses over different frames");
  }
  double conflict = 0.0;
  std::map<HypothesisSet, double> out;
  for (const auto& [s1, v1] : m1.masses()) {
    for (const auto& [s2, v2] : m2.masses()) {
      const HypothesisSet inter = s1 & s2;
      const double product = v1 * v2;
      if (inter == 0) {
        conflict += product;
      } else {
        out[inter] += product;
      }
    }
  }
  const double normalizer = 1.0 - conflict;
  if (normalizer <= kTotalConflictEps) {
    throw TotalConflictError("total contradiction between evidences (k = 1)");
  }
  for (auto& [set, value] : out) {
    (void)set;
    value /= normalizer;
  }
  return CombineResult{MassFunction(m1.frame(), std::move(out)), conflict};
}

MassFunction combine_all(const std::vector<MassFunction>& masses) {
  if (masses.empty()) {
    throw DomainError("combine_all needs at least one mass function");
  }
  MassFunction acc = masses.front();
  for (std::size_t i = 1; i < masses.size(); ++i) {
    acc = combine(acc, masses[i]).combined;
  }
  return acc;
}

}  // namespace dsfolio
