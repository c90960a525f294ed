#ifndef HUBLAB_GRAPH_HPP_
#define HUBLAB_GRAPH_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace hublab {

using Vertex = std::uint32_t;
using Dist = std::int64_t;

// Distances are never stored as "large" finite values; unreachable is its own sentinel.
inline constexpr Dist kUnreachable = -1;
inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();

constexpr bool is_reachable(Dist d) noexcept { return d >= 0; }

struct Edge {
    Vertex u = 0;
    Vertex v = 0;
    Dist w = 1;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Arc {
    Vertex to = 0;
    Dist w = 1;
};

enum class WeightClass { Unit, ZeroOne, General };

// Undirected graph with nonnegative integer weights in CSR form. Immutable once built.
class WeightedGraph {
public:
    WeightedGraph() = default;

    // Throws InvalidArgument on self-loops, parallel edges, negative weights or
    // out-of-range endpoints.
    WeightedGraph(std::size_t n, std::vector<Edge> edges);

    std::size_t num_vertices() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }

    std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
    std::size_t max_degree() const noexcept { return max_degree_; }

    // Sorted by neighbor id.
    std::span<const Arc> neighbors(Vertex v) const noexcept
    {
        return {arcs_.data() + offsets_[v], arcs_.data() + offsets_[v + 1]};
    }

    // Normalized (u < v) and sorted lexicographically.
    std::span<const Edge> edges() const noexcept { return edges_; }

    std::optional<Dist> weight(Vertex u, Vertex v) const;

    WeightClass weight_class() const noexcept { return weight_class_; }
    bool has_zero_weights() const noexcept { return has_zero_; }

    friend bool operator==(const WeightedGraph& a, const WeightedGraph& b)
    {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Arc> arcs_;
    std::size_t max_degree_ = 0;
    WeightClass weight_class_ = WeightClass::Unit;
    bool has_zero_ = false;
};

struct ShortestPathTree {
    Vertex root = 0;
    std::vector<Vertex> parent; // root maps to itself, unreachable to kNoVertex
    std::vector<Dist> dist;
};

// Exact single-source distances. BFS for unit weights, deque search for {0,1}
// weights, binary heap otherwise.
std::vector<Dist> distances_from(const WeightedGraph& g, Vertex src);

// Distances plus canonical parents: among all tight predecessors the lowest id
// wins. Over zero-weight edges a predecessor must also be strictly closer in
// hop count, which keeps the parent relation acyclic.
ShortestPathTree shortest_paths_from(const WeightedGraph& g, Vertex src);

struct AllPairsOptions {
    unsigned threads = 1;
    std::size_t max_entries = std::size_t{1} << 28; // 2 GiB of int64
};

class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n);

    std::size_t num_vertices() const noexcept { return n_; }

    Dist operator()(Vertex u, Vertex v) const noexcept { return d_[std::size_t{u} * n_ + v]; }

    std::span<const Dist> row(Vertex u) const noexcept { return {d_.data() + std::size_t{u} * n_, n_}; }
    std::span<Dist> mutable_row(Vertex u) noexcept { return {d_.data() + std::size_t{u} * n_, n_}; }

    // Largest finite entry.
    Dist diameter() const noexcept;

    friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Dist> d_;
};

// One search per source; sources may run concurrently, result is schedule-independent.
// Throws ResourceError when n^2 exceeds opts.max_entries.
DistanceMatrix all_pairs(const WeightedGraph& g, const AllPairsOptions& opts = {});

// {x : d(u,x) + d(x,v) = d(u,v)} given the two distance rows from u and from v.
// Throws InvalidArgument if u and v are mutually unreachable.
std::vector<Vertex> hub_candidates(std::span<const Dist> from_u, std::span<const Dist> from_v, Vertex v);
std::vector<Vertex> hub_candidates(const DistanceMatrix& dm, Vertex u, Vertex v);

// Number of shortest paths from the source of `from_src` to each vertex. Counts that
// do not fit in 64 bits are flagged rather than wrapped.
struct PathCounts {
    std::vector<std::uint64_t> count;
    std::vector<std::uint8_t> overflow;
};

// Requires strictly positive weights (zero-weight edges make path counts ill-posed).
PathCounts count_shortest_paths(const WeightedGraph& g, std::span<const Dist> from_src);

struct UniquePathResult {
    bool unique = false;
    std::optional<std::vector<Vertex>> path; // u ... v when unique
};

// Throws OverflowError if the count for v overflowed, InvalidArgument if unreachable.
UniquePathResult is_unique_shortest_path(const WeightedGraph& g, std::span<const Dist> from_u,
                                         const PathCounts& counts, Vertex u, Vertex v);
UniquePathResult is_unique_shortest_path(const DistanceMatrix& dm, const WeightedGraph& g, Vertex u,
                                         Vertex v);

} // namespace hublab

#endif // HUBLAB_GRAPH_HPP_
