#include "hublab/graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <queue>
#include <string>
#include <utility>

#include "hublab/error.hpp"
#include "parallel.hpp"

namespace hublab {

WeightedGraph::WeightedGraph(std::size_t n, std::vector<Edge> edges) : n_(n)
{
    if (n >= kNoVertex)
        throw InvalidArgument("vertex count exceeds id range");
    bool all_unit = true;
    bool all_01 = true;
    for (auto& e : edges) {
        if (e.u >= n || e.v >= n)
            throw InvalidArgument("edge endpoint out of range: " + std::to_string(e.u) + " " +
                                  std::to_string(e.v));
        if (e.u == e.v)
            throw InvalidArgument("self-loop at vertex " + std::to_string(e.u));
        if (e.w < 0)
            throw InvalidArgument("negative edge weight");
        if (e.u > e.v)
            std::swap(e.u, e.v);
        all_unit = all_unit && e.w == 1;
        all_01 = all_01 && e.w <= 1;
        has_zero_ = has_zero_ || e.w == 0;
    }
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
            throw InvalidArgument("parallel edge " + std::to_string(edges[i].u) + " " +
                                  std::to_string(edges[i].v));
    weight_class_ = all_unit ? WeightClass::Unit : all_01 ? WeightClass::ZeroOne : WeightClass::General;
    edges_ = std::move(edges);

    std::vector<std::size_t> deg(n, 0);
    for (const auto& e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v)
        offsets_[v + 1] = offsets_[v] + deg[v];
    arcs_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    // Edges are sorted by (u, v), so both directions land in neighbor-id order
    // once each row is sorted.
    for (const auto& e : edges_) {
        arcs_[fill[e.u]++] = {e.v, e.w};
        arcs_[fill[e.v]++] = {e.u, e.w};
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::sort(arcs_.begin() + offsets_[v], arcs_.begin() + offsets_[v + 1],
                  [](const Arc& a, const Arc& b) { return a.to < b.to; });
        max_degree_ = std::max(max_degree_, deg[v]);
    }
}

std::optional<Dist> WeightedGraph::weight(Vertex u, Vertex v) const
{
    if (u >= n_ || v >= n_)
        return std::nullopt;
    auto nb = neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), v, [](const Arc& a, Vertex x) { return a.to < x; });
    if (it == nb.end() || it->to != v)
        return std::nullopt;
    return it->w;
}

namespace {

void bfs(const WeightedGraph& g, Vertex src, std::vector<Dist>& dist)
{
    std::vector<Vertex> queue;
    queue.reserve(g.num_vertices());
    queue.push_back(src);
    dist[src] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Vertex x = queue[head];
        for (const auto& a : g.neighbors(x)) {
            if (dist[a.to] == kUnreachable) {
                dist[a.to] = dist[x] + 1;
                queue.push_back(a.to);
            }
        }
    }
}

void zero_one_bfs(const WeightedGraph& g, Vertex src, std::vector<Dist>& dist)
{
    std::deque<Vertex> dq;
    dist[src] = 0;
    dq.push_back(src);
    while (!dq.empty()) {
        const Vertex x = dq.front();
        dq.pop_front();
        for (const auto& a : g.neighbors(x)) {
            const Dist nd = dist[x] + a.w;
            if (dist[a.to] == kUnreachable || nd < dist[a.to]) {
                dist[a.to] = nd;
                if (a.w == 0)
                    dq.push_front(a.to);
                else
                    dq.push_back(a.to);
            }
        }
    }
}

void dijkstra(const WeightedGraph& g, Vertex src, std::vector<Dist>& dist)
{
    using Item = std::pair<Dist, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[src] = 0;
    pq.emplace(0, src);
    while (!pq.empty()) {
        auto [d, x] = pq.top();
        pq.pop();
        if (d != dist[x])
            continue;
        for (const auto& a : g.neighbors(x)) {
            const Dist nd = d + a.w;
            if (dist[a.to] == kUnreachable || nd < dist[a.to]) {
                dist[a.to] = nd;
                pq.emplace(nd, a.to);
            }
        }
    }
}

// Minimum edge count over shortest paths; only needed when zero-weight edges exist.
std::vector<std::size_t> min_hops(const WeightedGraph& g, Vertex src, const std::vector<Dist>& dist)
{
    constexpr auto kInf = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> hops(g.num_vertices(), kInf);
    using Item = std::tuple<Dist, std::size_t, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    hops[src] = 0;
    pq.emplace(0, 0, src);
    while (!pq.empty()) {
        auto [d, h, x] = pq.top();
        pq.pop();
        if (h != hops[x])
            continue;
        for (const auto& a : g.neighbors(x)) {
            if (dist[x] + a.w != dist[a.to])
                continue;
            if (h + 1 < hops[a.to]) {
                hops[a.to] = h + 1;
                pq.emplace(dist[a.to], h + 1, a.to);
            }
        }
    }
    return hops;
}

} // namespace

std::vector<Dist> distances_from(const WeightedGraph& g, Vertex src)
{
    if (src >= g.num_vertices())
        throw InvalidArgument("source vertex out of range");
    std::vector<Dist> dist(g.num_vertices(), kUnreachable);
    switch (g.weight_class()) {
    case WeightClass::Unit:
        bfs(g, src, dist);
        break;
    case WeightClass::ZeroOne:
        zero_one_bfs(g, src, dist);
        break;
    case WeightClass::General:
        dijkstra(g, src, dist);
        break;
    }
    return dist;
}

ShortestPathTree shortest_paths_from(const WeightedGraph& g, Vertex src)
{
    ShortestPathTree t;
    t.root = src;
    t.dist = distances_from(g, src);
    t.parent.assign(g.num_vertices(), kNoVertex);
    std::vector<std::size_t> hops;
    if (g.has_zero_weights())
        hops = min_hops(g, src, t.dist);
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        if (v == src) {
            t.parent[v] = src;
            continue;
        }
        if (!is_reachable(t.dist[v]))
            continue;
        // Neighbors are sorted, so the first tight one is the lowest id.
        for (const auto& a : g.neighbors(v)) {
            const Dist du = t.dist[a.to];
            if (!is_reachable(du) || du + a.w != t.dist[v])
                continue;
            if (a.w == 0 && hops[a.to] >= hops[v])
                continue;
            t.parent[v] = a.to;
            break;
        }
    }
    return t;
}

DistanceMatrix::DistanceMatrix(std::size_t n) : n_(n), d_(n * n, kUnreachable) {}

Dist DistanceMatrix::diameter() const noexcept
{
    Dist best = 0;
    for (Dist d : d_)
        best = std::max(best, d);
    return best;
}

DistanceMatrix all_pairs(const WeightedGraph& g, const AllPairsOptions& opts)
{
    const std::size_t n = g.num_vertices();
    if (n != 0 && n > opts.max_entries / n)
        throw ResourceError("all-pairs table of " + std::to_string(n) + "^2 entries exceeds cap of " +
                            std::to_string(opts.max_entries));
    DistanceMatrix dm(n);
    detail::parallel_blocks(n, opts.threads, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t u = begin; u < end; ++u) {
            auto row = distances_from(g, static_cast<Vertex>(u));
            std::copy(row.begin(), row.end(), dm.mutable_row(static_cast<Vertex>(u)).begin());
        }
    });
    return dm;
}

std::vector<Vertex> hub_candidates(std::span<const Dist> from_u, std::span<const Dist> from_v, Vertex v)
{
    const Dist duv = from_u[v];
    if (!is_reachable(duv))
        throw InvalidArgument("hub candidates requested for mutually unreachable pair");
    std::vector<Vertex> out;
    for (std::size_t x = 0; x < from_u.size(); ++x) {
        if (is_reachable(from_u[x]) && is_reachable(from_v[x]) && from_u[x] + from_v[x] == duv)
            out.push_back(static_cast<Vertex>(x));
    }
    return out;
}

std::vector<Vertex> hub_candidates(const DistanceMatrix& dm, Vertex u, Vertex v)
{
    return hub_candidates(dm.row(u), dm.row(v), v);
}

PathCounts count_shortest_paths(const WeightedGraph& g, std::span<const Dist> from_src)
{
    if (g.has_zero_weights())
        throw InvalidArgument("shortest-path counting requires strictly positive weights");
    const std::size_t n = g.num_vertices();
    PathCounts pc;
    pc.count.assign(n, 0);
    pc.overflow.assign(n, 0);
    std::vector<Vertex> order;
    order.reserve(n);
    for (Vertex x = 0; x < n; ++x)
        if (is_reachable(from_src[x]))
            order.push_back(x);
    std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
        return std::tie(from_src[a], a) < std::tie(from_src[b], b);
    });
    for (Vertex x : order) {
        if (from_src[x] == 0) {
            pc.count[x] = 1;
            continue;
        }
        std::uint64_t c = 0;
        bool ovf = false;
        for (const auto& a : g.neighbors(x)) {
            const Dist dp = from_src[a.to];
            if (!is_reachable(dp) || dp + a.w != from_src[x])
                continue;
            ovf = ovf || pc.overflow[a.to];
            if (__builtin_add_overflow(c, pc.count[a.to], &c))
                ovf = true;
        }
        pc.count[x] = c;
        pc.overflow[x] = ovf;
    }
    return pc;
}

UniquePathResult is_unique_shortest_path(const WeightedGraph& g, std::span<const Dist> from_u,
                                         const PathCounts& counts, Vertex u, Vertex v)
{
    if (!is_reachable(from_u[v]))
        throw InvalidArgument("uniqueness requested for mutually unreachable pair");
    if (counts.overflow[v])
        throw OverflowError("shortest-path count overflows 64 bits for pair " + std::to_string(u) + " " +
                            std::to_string(v));
    UniquePathResult r;
    if (counts.count[v] != 1)
        return r;
    std::vector<Vertex> path{v};
    Vertex cur = v;
    while (cur != u) {
        Vertex prev = kNoVertex;
        for (const auto& a : g.neighbors(cur)) {
            const Dist dp = from_u[a.to];
            if (is_reachable(dp) && dp + a.w == from_u[cur]) {
                prev = a.to;
                break;
            }
        }
        if (prev == kNoVertex)
            throw InvariantViolation("broken tight-edge chain while reconstructing path");
        cur = prev;
        path.push_back(cur);
    }
    std::reverse(path.begin(), path.end());
    r.unique = true;
    r.path = std::move(path);
    return r;
}

UniquePathResult is_unique_shortest_path(const DistanceMatrix& dm, const WeightedGraph& g, Vertex u,
                                         Vertex v)
{
    auto row = dm.row(u);
    return is_unique_shortest_path(g, row, count_shortest_paths(g, row), u, v);
}

} // namespace hublab
