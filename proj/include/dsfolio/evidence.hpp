#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dsfolio {

/// A subset of a frame's hypotheses, encoded as a bitset over hypothesis
/// indices: bit i set means the i-th hypothesis is in the subset. Subset
/// intersection is bitwise AND; the empty set is 0.
using HypothesisSet = std::uint32_t;

/// Frame of discernment: an ordered list of mutually exclusive, exhaustive
/// hypothesis labels. The order fixes bit positions and the iteration order
/// of every operation built on top, so results are deterministic.
class Frame {
 public:
  static constexpr std::size_t kMaxHypotheses = 16;

  explicit Frame(std::vector<std::string> hypotheses);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// The full set Θ (all hypothesis bits set).
  HypothesisSet full_set() const {
    return static_cast<HypothesisSet>((1u << labels_.size()) - 1u);
  }

  std::size_t index_of(const std::string& label) const;
  HypothesisSet singleton(const std::string& label) const;
  /// Subset from a list of labels, e.g. {"H_P","A_P"}.
  HypothesisSet subset(const std::vector<std::string>& labels) const;

  /// Renders a subset as "{H_P,A_P}" with labels in frame order.
  std::string subset_to_string(HypothesisSet set) const;

  bool operator==(const Frame& other) const { return labels_ == other.labels_; }
  bool operator!=(const Frame& other) const { return !(*this == other); }

 private:
  std::vector<std::string> labels_;
};

/// Basic probability assignment: unit belief distributed over subsets of a
/// frame. Invariants enforced on construction: every mass in [0,1], masses
/// sum to 1 within 1e-9, the empty set carries no mass. Zero-mass subsets
/// are dropped from the map. Immutable after construction.
class MassFunction {
 public:
  static constexpr double kSumTolerance = 1e-9;

  MassFunction(Frame frame, std::map<HypothesisSet, double> masses);

  const Frame& frame() const { return frame_; }
  /// Focal elements and their masses, keyed (and iterated) by bitset value.
  const std::map<HypothesisSet, double>& masses() const { return masses_; }
  /// Mass of a subset; 0 when it is not a focal element.
  double mass(HypothesisSet set) const;

  /// Debug form: one line per focal element, "{H_P}:0.75", sorted by
  /// bitset value.
  std::string to_string() const;

 private:
  Frame frame_;
  std::map<HypothesisSet, double> masses_;
};

/// Total ignorance: all mass on Θ. Identity element of combine().
MassFunction vacuous(const Frame& frame);

/// Mass `belief` on one non-empty subset and the remainder 1-belief on Θ.
MassFunction from_single_belief(const Frame& frame, HypothesisSet hypothesis,
                                double belief);

struct CombineResult {
  MassFunction combined;
  /// Conflict k: the product mass that fell on the empty intersection
  /// before normalization. k=0 means no conflict; k→1 total contradiction.
  double conflict;
};

/// Dempster's rule of combination. Throws TotalConflictError when the
/// conflict reaches 1 (within 1e-12), since normalization divides by 1-k.
/// Throws DomainError when the operands live on different frames.
CombineResult combine(const MassFunction& m1, const MassFunction& m2);

/// Left fold of combine() over a non-empty sequence. Dempster's rule is
/// commutative and associative, so the result is order-independent.
MassFunction combine_all(const std::vector<MassFunction>& masses);

}  // namespace dsfolio
