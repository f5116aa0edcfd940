#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "activelab/core.hpp"
#include "activelab/strategy.hpp"

namespace activelab {

/// Known side of a graph node for the graph of class X.
enum class Side : std::uint8_t { Unknown, X, Y };

/// One-vs-all margin p_X - max_{c != X} p_c, in [-1, 1].
struct MarginScore {
  SampleId id = 0;
  ClassId class_x = 0;
  double value = 0.0;
};

double one_vs_all_margin(std::span<const double> probs, ClassId class_x);

/// One score per pool id, in id order.
std::vector<MarginScore> margin_scores(const PredictionMatrix& predictions, ClassId class_x);

/// All pool samples for class X sorted by margin descending (ties: ascending
/// id), so confident-X samples sit at position 0 and confident-Y samples at
/// the far end.
struct LinearGraph {
  ClassId class_x = 0;
  std::vector<SampleId> nodes;          // position -> id
  std::vector<std::uint32_t> position;  // id -> position
  std::vector<Side> sides;              // position -> side

  std::size_t size() const noexcept { return nodes.size(); }
  bool labeled_at(std::size_t pos) const { return sides[pos] != Side::Unknown; }
};

LinearGraph build_graph(const PoolState& pool, const PredictionMatrix& predictions,
                        ClassId class_x);

/// Span between two consecutive labeled nodes of opposite sides with at
/// least one unlabeled node between them.
struct Segment {
  ClassId graph = 0;
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const noexcept { return end - start; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Adjacent labeled nodes (left, left + 1) of opposite sides.
struct Cut {
  ClassId graph = 0;
  std::size_t left = 0;

  std::size_t right() const noexcept { return left + 1; }
  friend auto operator<=>(const Cut&, const Cut&) = default;
};

struct GraphScan {
  std::vector<Segment> segments;
  std::vector<Cut> cuts;
};

/// Walks consecutive labeled nodes of `graph`: opposite sides at distance
/// >= 2 give a bisectable segment, at distance 1 a cut.
GraphScan find_bisectable_segments(const LinearGraph& graph);

/// The unlabeled interior node nearest to floor((start + end) / 2), ties
/// toward start. Throws NoInteriorUnlabeled.
SampleId bisect_step(const LinearGraph& graph, const Segment& segment);

enum class GalaxyPhase { Bisect, AroundCuts, Fallback };

/// Graph-bisection query strategy for class-imbalanced pools.
///
/// Phase 1 bisects the globally shortest bisectable segment (ties: class,
/// then start). With no segment left, phase 2 sweeps the cuts found so far
/// round-robin in (class, position) order, each cut expanding outward one
/// node at a time and alternating left/right. A query that opens a new
/// segment sends the next call back to phase 1. With neither segments nor
/// sweepable cuts the least-confidence choice is returned.
///
/// Graphs and cut memory are rebuilt by begin_iteration; observe() updates
/// all K graphs incrementally in O(K log n).
class GalaxyStrategy final : public QueryStrategy {
 public:
  std::string_view name() const noexcept override { return "galaxy"; }
  void begin_iteration(const StrategyContext& ctx) override;
  SampleId next_query(const StrategyContext& ctx) override;
  void observe(const StrategyContext& ctx, SampleId id, ClassId label) override;
  Diagnostics diagnostics() const override;

  std::optional<GalaxyPhase> phase() const noexcept { return phase_; }
  std::size_t graph_count() const noexcept { return graphs_.size(); }
  const LinearGraph& graph(ClassId class_x) const { return graphs_.at(class_x); }
  /// Current bisectable segments in priority order.
  std::vector<Segment> bisectable_segments() const;
  std::vector<Cut> cuts() const;

 private:
  struct CutCursor {
    std::int64_t left_next = 0;
    std::int64_t right_next = 0;
    bool left_turn = true;
  };
  // (length, class, start, end): std::set order is the phase-1 priority.
  using SegmentKey = std::tuple<std::size_t, ClassId, std::size_t, std::size_t>;
  using CutKey = std::pair<ClassId, std::size_t>;

  void rebuild(const StrategyContext& ctx);
  void label_position(ClassId g, std::size_t pos, Side side);
  void link(ClassId g, std::size_t a, std::size_t b);
  std::optional<SampleId> around_cut_query();
  void enter(GalaxyPhase phase);

  const PoolState* pool_ = nullptr;
  std::vector<LinearGraph> graphs_;
  std::vector<std::set<std::size_t>> labeled_;
  std::set<SegmentKey> segments_;
  std::map<CutKey, CutCursor> cuts_;
  std::optional<CutKey> last_cut_;
  ConfidenceStrategy fallback_;
  std::optional<GalaxyPhase> phase_;

  std::size_t segments_at_start_ = 0;
  std::size_t cuts_at_start_ = 0;
  std::size_t segments_found_ = 0;
  std::size_t cuts_found_ = 0;
  std::size_t phase_transitions_ = 0;
  std::size_t bisect_queries_ = 0;
  std::size_t around_cut_queries_ = 0;
  std::size_t fallback_queries_ = 0;
};

}  // namespace activelab
