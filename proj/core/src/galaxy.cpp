#include "activelab/galaxy.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>

#include "activelab/error.hpp"

namespace activelab {

double one_vs_all_margin(std::span<const double> probs, ClassId class_x) {
  double other = -1.0;
  for (std::size_t c = 0; c < probs.size(); ++c)
    if (c != class_x) other = std::max(other, probs[c]);
  if (other < 0.0) other = 0.0;  // single-class degenerate case
  return probs[class_x] - other;
}

std::vector<MarginScore> margin_scores(const PredictionMatrix& predictions, ClassId class_x) {
  if (class_x >= predictions.num_classes())
    throw DegenerateInput("class index out of range for margin scores");
  std::vector<MarginScore> out(predictions.rows());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto id = static_cast<SampleId>(i);
    out[i] = {id, class_x, one_vs_all_margin(predictions.row(id), class_x)};
  }
  return out;
}

LinearGraph build_graph(const PoolState& pool, const PredictionMatrix& predictions,
                        ClassId class_x) {
  if (predictions.rows() != pool.size()) throw DimensionMismatch(pool.size(), predictions.rows());
  const auto scores = margin_scores(predictions, class_x);
  LinearGraph g;
  g.class_x = class_x;
  g.nodes.resize(scores.size());
  std::iota(g.nodes.begin(), g.nodes.end(), SampleId{0});
  std::sort(g.nodes.begin(), g.nodes.end(), [&](SampleId a, SampleId b) {
    return scores[a].value != scores[b].value ? scores[a].value > scores[b].value : a < b;
  });
  g.position.resize(g.nodes.size());
  g.sides.assign(g.nodes.size(), Side::Unknown);
  for (std::size_t pos = 0; pos < g.nodes.size(); ++pos) {
    const SampleId id = g.nodes[pos];
    g.position[id] = static_cast<std::uint32_t>(pos);
    if (const auto label = pool.label_of(id)) g.sides[pos] = *label == class_x ? Side::X : Side::Y;
  }
  return g;
}

GraphScan find_bisectable_segments(const LinearGraph& graph) {
  GraphScan scan;
  std::optional<std::size_t> prev;
  for (std::size_t pos = 0; pos < graph.size(); ++pos) {
    if (!graph.labeled_at(pos)) continue;
    if (prev && graph.sides[*prev] != graph.sides[pos]) {
      if (pos - *prev >= 2)
        scan.segments.push_back({graph.class_x, *prev, pos});
      else
        scan.cuts.push_back({graph.class_x, *prev});
    }
    prev = pos;
  }
  return scan;
}

SampleId bisect_step(const LinearGraph& graph, const Segment& segment) {
  if (segment.end < segment.start + 2 || segment.end >= graph.size())
    throw NoInteriorUnlabeled(segment.start, segment.end);
  const auto mid = static_cast<std::int64_t>((segment.start + segment.end) / 2);
  const auto lo = static_cast<std::int64_t>(segment.start);
  const auto hi = static_cast<std::int64_t>(segment.end);
  const std::int64_t reach = std::max(mid - lo, hi - mid);
  for (std::int64_t off = 0; off <= reach; ++off) {
    for (std::int64_t pos : {mid - off, mid + off}) {
      if (pos > lo && pos < hi && !graph.labeled_at(static_cast<std::size_t>(pos)))
        return graph.nodes[static_cast<std::size_t>(pos)];
      if (off == 0) break;
    }
  }
  throw NoInteriorUnlabeled(segment.start, segment.end);
}

void GalaxyStrategy::begin_iteration(const StrategyContext& ctx) {
  rebuild(ctx);
  fallback_.begin_iteration(ctx);
}

void GalaxyStrategy::rebuild(const StrategyContext& ctx) {
  const std::size_t k = ctx.predictions.num_classes();
  pool_ = &ctx.pool;
  graphs_.clear();
  graphs_.reserve(k);
  labeled_.assign(k, {});
  segments_.clear();
  cuts_.clear();
  last_cut_.reset();
  phase_.reset();
  segments_found_ = cuts_found_ = phase_transitions_ = 0;
  bisect_queries_ = around_cut_queries_ = fallback_queries_ = 0;

  for (ClassId g = 0; g < k; ++g) {
    graphs_.push_back(build_graph(ctx.pool, ctx.predictions, g));
    const LinearGraph& graph = graphs_.back();
    auto& labeled = labeled_[g];
    for (std::size_t pos = 0; pos < graph.size(); ++pos)
      if (graph.labeled_at(pos)) labeled.insert(labeled.end(), pos);
    const GraphScan scan = find_bisectable_segments(graph);
    for (const Segment& s : scan.segments) segments_.emplace(s.length(), g, s.start, s.end);
    for (const Cut& c : scan.cuts)
      cuts_.emplace(CutKey{g, c.left},
                    CutCursor{static_cast<std::int64_t>(c.left) - 1,
                              static_cast<std::int64_t>(c.left) + 2, true});
  }
  segments_at_start_ = segments_.size();
  cuts_at_start_ = cuts_.size();
}

void GalaxyStrategy::observe(const StrategyContext& /*ctx*/, SampleId id, ClassId label) {
  for (ClassId g = 0; g < graphs_.size(); ++g) {
    const std::size_t pos = graphs_[g].position.at(id);
    if (graphs_[g].labeled_at(pos)) continue;
    label_position(g, pos, label == g ? Side::X : Side::Y);
  }
}

void GalaxyStrategy::label_position(ClassId g, std::size_t pos, Side side) {
  graphs_[g].sides[pos] = side;
  auto& labeled = labeled_[g];
  const auto it = labeled.insert(pos).first;
  const bool has_pred = it != labeled.begin();
  const auto next = std::next(it);
  const bool has_succ = next != labeled.end();
  if (has_pred && has_succ) {
    const std::size_t a = *std::prev(it);
    const std::size_t b = *next;
    segments_.erase(SegmentKey{b - a, g, a, b});
  }
  if (has_pred) link(g, *std::prev(it), pos);
  if (has_succ) link(g, pos, *next);
}

void GalaxyStrategy::link(ClassId g, std::size_t a, std::size_t b) {
  const auto& sides = graphs_[g].sides;
  if (sides[a] == sides[b]) return;
  if (b - a >= 2) {
    if (segments_.emplace(b - a, g, a, b).second) ++segments_found_;
  } else if (cuts_
                 .try_emplace(CutKey{g, a},
                              CutCursor{static_cast<std::int64_t>(a) - 1,
                                        static_cast<std::int64_t>(a) + 2, true})
                 .second) {
    ++cuts_found_;
  }
}

std::optional<SampleId> GalaxyStrategy::around_cut_query() {
  if (cuts_.empty()) return std::nullopt;
  auto it = last_cut_ ? cuts_.upper_bound(*last_cut_) : cuts_.begin();
  for (std::size_t visited = 0; visited < cuts_.size(); ++visited) {
    if (it == cuts_.end()) it = cuts_.begin();
    const CutKey key = it->first;
    CutCursor& cursor = it->second;
    const LinearGraph& graph = graphs_[key.first];
    const auto n = static_cast<std::int64_t>(graph.size());
    while (cursor.left_next >= 0 && graph.labeled_at(static_cast<std::size_t>(cursor.left_next)))
      --cursor.left_next;
    while (cursor.right_next < n && graph.labeled_at(static_cast<std::size_t>(cursor.right_next)))
      ++cursor.right_next;
    const bool left_ok = cursor.left_next >= 0;
    const bool right_ok = cursor.right_next < n;
    if (left_ok || right_ok) {
      const bool take_left = cursor.left_turn ? left_ok : !right_ok;
      const std::int64_t pos = take_left ? cursor.left_next-- : cursor.right_next++;
      cursor.left_turn = !take_left;
      last_cut_ = key;
      return graph.nodes[static_cast<std::size_t>(pos)];
    }
    ++it;
  }
  return std::nullopt;
}

void GalaxyStrategy::enter(GalaxyPhase phase) {
  if (phase_ && *phase_ != phase) ++phase_transitions_;
  phase_ = phase;
}

SampleId GalaxyStrategy::next_query(const StrategyContext& ctx) {
  if (ctx.pool.unlabeled_count() == 0) throw PoolExhausted();
  if (pool_ != &ctx.pool || graphs_.size() != ctx.predictions.num_classes() ||
      (!graphs_.empty() && graphs_.front().size() != ctx.pool.size()))
    begin_iteration(ctx);

  if (!segments_.empty()) {
    const auto& [len, g, start, end] = *segments_.begin();
    enter(GalaxyPhase::Bisect);
    ++bisect_queries_;
    return bisect_step(graphs_[g], Segment{g, start, end});
  }
  if (const auto id = around_cut_query()) {
    enter(GalaxyPhase::AroundCuts);
    ++around_cut_queries_;
    return *id;
  }
  enter(GalaxyPhase::Fallback);
  ++fallback_queries_;
  return fallback_.next_query(ctx);
}

std::vector<Segment> GalaxyStrategy::bisectable_segments() const {
  std::vector<Segment> out;
  out.reserve(segments_.size());
  for (const auto& [len, g, start, end] : segments_) out.push_back({g, start, end});
  return out;
}

std::vector<Cut> GalaxyStrategy::cuts() const {
  std::vector<Cut> out;
  out.reserve(cuts_.size());
  for (const auto& [key, cursor] : cuts_) out.push_back({key.first, key.second});
  return out;
}

Diagnostics GalaxyStrategy::diagnostics() const {
  return {{"segments_at_start", segments_at_start_},
          {"cuts_at_start", cuts_at_start_},
          {"segments_found", segments_found_},
          {"cuts_found", cuts_found_},
          {"phase_transitions", phase_transitions_},
          {"bisect_queries", bisect_queries_},
          {"around_cut_queries", around_cut_queries_},
          {"fallback_queries", fallback_queries_}};
}

}  // namespace activelab
