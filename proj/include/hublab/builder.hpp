#ifndef HUBLAB_BUILDER_HPP_
#define HUBLAB_BUILDER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hublab/graph.hpp"
#include "hublab/labeling.hpp"

namespace hublab {

// Sparse-graph hub labeling built from a random cover set, a random coloring and
// per-bucket greedy matchings:
//   hubs(v) = S  u  Q_v  u  R_v  u  N[F_v]
struct BuilderConfig {
    std::uint32_t D = 0; // 0 selects default_threshold(n)
    std::uint64_t seed = 0;
    std::uint32_t max_resamples = 32;
    unsigned threads = 1;
};

// max(2, ceil(sqrt(ln n)))
std::uint32_t default_threshold(std::size_t n);

// ceil((n / D) * ln D), clamped to n; zero when D = 1.
std::size_t cover_set_size(std::size_t n, std::uint32_t D);

// Candidate-set bookkeeping shared by all stages. Only unordered pairs u < v are
// classified; candidate sets are enumerated up to D + 1 members.
class PairClassification {
public:
    static constexpr std::uint8_t kNone = 0;
    static constexpr std::uint8_t kLarge = 1; // |H_uv| >= D, D > 1
    static constexpr std::uint8_t kSmall = 2; // |H_uv| <= D, or any pair when D = 1

    struct SmallPair {
        Vertex u = 0;
        Vertex v = 0;
        std::uint32_t offset = 0; // into candidates()
        std::uint32_t size = 0;
        bool exact = true; // size == |H_uv|
    };

    PairClassification(const WeightedGraph& g, const DistanceMatrix& dm, std::uint32_t D);

    std::size_t num_vertices() const noexcept { return n_; }
    std::uint32_t threshold() const noexcept { return D_; }
    std::uint8_t flags(Vertex u, Vertex v) const noexcept { return flags_[std::size_t{u} * n_ + v]; }
    const std::vector<SmallPair>& small_pairs() const noexcept { return small_; }
    std::span<const Vertex> candidates(const SmallPair& p) const noexcept
    {
        return {cand_.data() + p.offset, p.size};
    }
    std::uint64_t num_reachable_pairs() const noexcept { return reachable_pairs_; }
    std::uint64_t num_large_pairs() const noexcept { return large_pairs_; }

private:
    std::size_t n_ = 0;
    std::uint32_t D_ = 1;
    std::vector<std::uint8_t> flags_; // upper triangle only
    std::vector<SmallPair> small_;
    std::vector<Vertex> cand_;
    std::uint64_t reachable_pairs_ = 0;
    std::uint64_t large_pairs_ = 0;
};

struct CoverSetStage {
    std::vector<Vertex> S;
    std::vector<std::vector<Vertex>> Q; // v in Q_u for uncovered large pairs, u < v
    std::uint64_t sum_Q = 0;
    std::uint32_t attempts = 0;
    bool skipped = false; // D = 1
};

// Resamples S until sum |Q_v| <= 2n^2/D. Throws ResampleExhausted otherwise.
CoverSetStage sample_cover_set(const PairClassification& pc, const DistanceMatrix& dm, const BuilderConfig& cfg);

struct ColoringStage {
    std::vector<std::uint64_t> colors; // in [1, D^3]
    std::vector<std::vector<Vertex>> R;
    std::vector<std::uint8_t> conflict; // per small pair
    std::uint64_t sum_R = 0;
    std::uint32_t attempts = 0;
};

// Resamples colors until sum |R_v| <= 2n^2/D. Throws ResampleExhausted otherwise.
ColoringStage sample_coloring(const PairClassification& pc, const BuilderConfig& cfg);

struct BucketLog {
    Dist a = 0;
    Dist b = 0;
    Vertex h = 0;
    std::uint64_t edges = 0;
    std::uint64_t matched = 0;
};

// Matched edge (left, right) of bucket (a, b, h): d(left, h) = a, d(h, right) = b.
struct MatchedEdge {
    Dist a = 0;
    Dist b = 0;
    Vertex h = 0;
    Vertex left = 0;
    Vertex right = 0;
};

struct MatchingStage {
    std::vector<std::vector<Vertex>> F;
    std::vector<MatchedEdge> matched; // bucket order
    std::vector<BucketLog> buckets; // sorted by (a, b, h)
    std::uint64_t sum_F = 0;
    std::uint64_t bucket_edges = 0;
    std::uint64_t matched_edges = 0;
    std::uint64_t induced_checks = 0;
};

// Per (a, b, h) bucket: greedy maximal matching in canonical edge order, both
// endpoints of each matched edge take h. Verifies that every bucket matching is an
// induced matching in its color-class union and throws InvariantViolation naming
// (a, b, h, h', u, v) if not.
MatchingStage build_matchings(const PairClassification& pc, const DistanceMatrix& dm, const ColoringStage& coloring);

// Small pairs that no stage covers (conflict-free with d = 0 or d > D); v is added to Q_u.
std::vector<std::vector<Vertex>> uncovered_fallback(const PairClassification& pc, const DistanceMatrix& dm,
                                                    const ColoringStage& coloring);

struct SizeLedger {
    std::uint64_t n = 0;
    std::uint64_t cover_set = 0;
    std::uint64_t sum_Q = 0; // sampled + fallback
    std::uint64_t sum_Q_fallback = 0;
    std::uint64_t sum_R = 0;
    std::uint64_t sum_F = 0;
    std::uint64_t sum_NF = 0;
    std::uint64_t max_degree = 0;
    std::uint64_t total = 0;
    // n|S| + sum|Q| + sum|R| + (max_degree + 1) sum|F|
    std::uint64_t bound = 0;
    bool holds() const noexcept { return total <= bound; }
};

// Throws VerificationError if the union is not a cover of dm, InvariantViolation if
// the size bound fails.
HubLabeling assemble(const CoverSetStage& cover, const ColoringStage& coloring, const MatchingStage& matching,
                     const std::vector<std::vector<Vertex>>& fallback, const WeightedGraph& g,
                     const DistanceMatrix& dm, SizeLedger* ledger = nullptr, unsigned threads = 1);

struct BuilderArtifacts {
    std::uint32_t D = 0;
    CoverSetStage cover;
    ColoringStage coloring;
    MatchingStage matching;
    std::vector<std::vector<Vertex>> fallback;
    std::uint64_t reachable_pairs = 0;
    std::uint64_t large_pairs = 0;
    std::uint64_t small_pairs = 0;
    SizeLedger ledger;
};

struct BuildResult {
    HubLabeling labeling;
    BuilderArtifacts artifacts;
};

// Runs all stages on g with the given distance table.
BuildResult build_labeling(const WeightedGraph& g, const DistanceMatrix& dm, const BuilderConfig& cfg);

struct DegreeReduction {
    WeightedGraph graph;
    std::vector<Vertex> representative; // original -> clone
    std::vector<Vertex> origin;         // clone -> original
    std::size_t degree_cap = 0;          // 2 + ceil(m/n)
    std::size_t split_vertices = 0;
};

// Splits each vertex of degree above 2 + ceil(m/n) into a weight-0 chain of
// ceil(deg / ceil(m/n)) clones. Requires unit weights.
DegreeReduction reduce_degree(const WeightedGraph& g);

// hubs(v) = origin(hubs'(representative(v))) with distances from dm. Throws
// VerificationError if the result does not cover dm.
HubLabeling project_back(const HubLabeling& reduced, const DegreeReduction& red, const DistanceMatrix& dm,
                         unsigned threads = 1);

enum class ReduceMode { Auto, Always, Never };

struct PipelineOptions {
    ReduceMode reduce = ReduceMode::Auto;
    AllPairsOptions all_pairs;
};

struct PipelineResult {
    HubLabeling labeling;
    BuilderArtifacts artifacts; // on the working (possibly reduced) graph
    std::optional<DegreeReduction> reduction;
    CoverReport cover;          // of `labeling` against the input graph
};

bool needs_degree_reduction(const WeightedGraph& g);

PipelineResult run_pipeline(const WeightedGraph& g, const BuilderConfig& cfg, const PipelineOptions& opts = {});

} // namespace hublab

#endif // HUBLAB_BUILDER_HPP_
