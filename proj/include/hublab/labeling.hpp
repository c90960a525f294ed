#ifndef HUBLAB_LABELING_HPP_
#define HUBLAB_LABELING_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hublab/graph.hpp"

namespace hublab {

struct HubEntry {
    Vertex hub = 0;
    Dist dist = 0;

    friend bool operator==(const HubEntry&, const HubEntry&) = default;
};

// Per-vertex hub sets, each kept sorted by hub id.
class HubLabeling {
public:
    HubLabeling() = default;
    explicit HubLabeling(std::size_t n) : hubs_(n) {}
    // Sorts each set; duplicate hubs must agree on distance.
    explicit HubLabeling(std::vector<std::vector<HubEntry>> hubs);

    std::size_t num_vertices() const noexcept { return hubs_.size(); }
    std::span<const HubEntry> hubs(Vertex v) const noexcept { return hubs_[v]; }

    std::uint64_t total_size() const noexcept;
    std::size_t max_size() const noexcept;

    // min over common hubs of d(u,h) + d(h,v); kUnreachable when none are shared.
    Dist query(Vertex u, Vertex v) const noexcept;

    friend bool operator==(const HubLabeling&, const HubLabeling&) = default;

private:
    std::vector<std::vector<HubEntry>> hubs_;
};

inline constexpr std::size_t kUncoveredListLimit = 1000;

struct CoverReport {
    bool valid = false;
    std::vector<std::pair<Vertex, Vertex>> uncovered; // canonical order, truncated
    std::uint64_t uncovered_count = 0;
    std::uint64_t pairs_checked = 0;
    std::uint64_t n = 0;
    std::uint64_t total_size = 0;
    std::uint64_t max_hub_size = 0;
    std::uint64_t bit_estimate = 0;
    // Stored (v, hub, dist) entries disagreeing with the distance table.
    std::uint64_t distance_mismatches = 0;
    Dist diameter = 0;

    double avg_hub_size() const noexcept { return n == 0 ? 0.0 : static_cast<double>(total_size) / n; }
};

unsigned ceil_log2(std::uint64_t x) noexcept;

// |S_v| * (ceil(log2 n) + ceil(log2(diam + 1)))
std::uint64_t label_bits(std::uint64_t hub_count, std::uint64_t n, Dist diameter) noexcept;

// Checks query(u,v) = d(u,v) for every mutually reachable pair u <= v.
CoverReport verify_cover(const HubLabeling& hl, const DistanceMatrix& dm, unsigned threads = 1);

// S*_v: vertices of the smallest subtree of T_v rooted at v that contains S_v.
// trees[v] must be rooted at v. Throws InvalidArgument if a hub is unreachable in its tree.
HubLabeling monotone_closure(const HubLabeling& hl, std::span<const ShortestPathTree> trees);

// Same, using the canonical lowest-id-parent trees of g, computed one root at a time.
HubLabeling monotone_closure(const HubLabeling& hl, const WeightedGraph& g);

// S_v = every vertex reachable from v.
HubLabeling baseline_full(const DistanceMatrix& dm);

} // namespace hublab

#endif // HUBLAB_LABELING_HPP_
