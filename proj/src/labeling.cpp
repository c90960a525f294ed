#include "hublab/labeling.hpp"

#include <algorithm>
#include <string>

#include "hublab/error.hpp"
#include "parallel.hpp"

namespace hublab {

HubLabeling::HubLabeling(std::vector<std::vector<HubEntry>> hubs) : hubs_(std::move(hubs))
{
    for (std::size_t v = 0; v < hubs_.size(); ++v) {
        auto& set = hubs_[v];
        std::sort(set.begin(), set.end(),
                  [](const HubEntry& a, const HubEntry& b) { return std::tie(a.hub, a.dist) < std::tie(b.hub, b.dist); });
        for (std::size_t i = 1; i < set.size(); ++i)
            if (set[i].hub == set[i - 1].hub && set[i].dist != set[i - 1].dist)
                throw InvalidArgument("vertex " + std::to_string(v) + " lists hub " + std::to_string(set[i].hub) +
                                      " with two distances");
        set.erase(std::unique(set.begin(), set.end()), set.end());
        for (const auto& e : set)
            if (e.hub >= hubs_.size() || !is_reachable(e.dist))
                throw InvalidArgument("invalid hub entry at vertex " + std::to_string(v));
    }
}

std::uint64_t HubLabeling::total_size() const noexcept
{
    std::uint64_t t = 0;
    for (const auto& s : hubs_)
        t += s.size();
    return t;
}

std::size_t HubLabeling::max_size() const noexcept
{
    std::size_t m = 0;
    for (const auto& s : hubs_)
        m = std::max(m, s.size());
    return m;
}

Dist HubLabeling::query(Vertex u, Vertex v) const noexcept
{
    const auto& a = hubs_[u];
    const auto& b = hubs_[v];
    Dist best = kUnreachable;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].hub < b[j].hub) {
            ++i;
        } else if (b[j].hub < a[i].hub) {
            ++j;
        } else {
            const Dist d = a[i].dist + b[j].dist;
            if (best == kUnreachable || d < best)
                best = d;
            ++i;
            ++j;
        }
    }
    return best;
}

unsigned ceil_log2(std::uint64_t x) noexcept
{
    unsigned r = 0;
    while ((std::uint64_t{1} << r) < x && r < 64)
        ++r;
    return r;
}

std::uint64_t label_bits(std::uint64_t hub_count, std::uint64_t n, Dist diameter) noexcept
{
    return hub_count * (ceil_log2(n) + ceil_log2(static_cast<std::uint64_t>(diameter) + 1));
}

CoverReport verify_cover(const HubLabeling& hl, const DistanceMatrix& dm, unsigned threads)
{
    const std::size_t n = dm.num_vertices();
    if (hl.num_vertices() != n)
        throw InvalidArgument("labeling has " + std::to_string(hl.num_vertices()) + " vertices, graph has " +
                              std::to_string(n));
    struct Partial {
        std::vector<std::pair<Vertex, Vertex>> uncovered;
        std::uint64_t uncovered_count = 0;
        std::uint64_t checked = 0;
        std::uint64_t mismatches = 0;
    };
    const unsigned workers = std::max(1u, threads);
    std::vector<Partial> parts(workers);
    detail::parallel_blocks(n, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
        Partial& part = parts[w];
        for (std::size_t ui = begin; ui < end; ++ui) {
            const auto u = static_cast<Vertex>(ui);
            for (const auto& e : hl.hubs(u))
                if (dm(u, e.hub) != e.dist)
                    ++part.mismatches;
            const auto row = dm.row(u);
            for (Vertex v = u; v < n; ++v) {
                if (!is_reachable(row[v]))
                    continue;
                ++part.checked;
                if (hl.query(u, v) != row[v]) {
                    ++part.uncovered_count;
                    if (part.uncovered.size() < kUncoveredListLimit)
                        part.uncovered.emplace_back(u, v);
                }
            }
        }
    });

    CoverReport r;
    r.n = n;
    for (const auto& part : parts) {
        r.uncovered_count += part.uncovered_count;
        r.pairs_checked += part.checked;
        r.distance_mismatches += part.mismatches;
        for (const auto& p : part.uncovered)
            if (r.uncovered.size() < kUncoveredListLimit)
                r.uncovered.push_back(p);
    }
    r.valid = r.uncovered_count == 0;
    r.total_size = hl.total_size();
    r.max_hub_size = hl.max_size();
    r.diameter = dm.diameter();
    r.bit_estimate = label_bits(r.total_size, n, r.diameter);
    return r;
}

namespace {

std::vector<HubEntry> closure_of(Vertex v, std::span<const HubEntry> hubs, const ShortestPathTree& t,
                                 std::vector<std::uint32_t>& mark, std::uint32_t stamp)
{
    if (t.root != v)
        throw InvalidArgument("shortest-path tree for vertex " + std::to_string(v) + " has the wrong root");
    std::vector<HubEntry> out;
    mark[v] = stamp;
    out.push_back({v, 0});
    for (const auto& e : hubs) {
        Vertex x = e.hub;
        while (mark[x] != stamp) {
            if (t.parent[x] == kNoVertex)
                throw InvalidArgument("hub " + std::to_string(e.hub) + " of vertex " + std::to_string(v) +
                                      " is unreachable in its tree");
            mark[x] = stamp;
            out.push_back({x, t.dist[x]});
            x = t.parent[x];
        }
    }
    return out;
}

} // namespace

HubLabeling monotone_closure(const HubLabeling& hl, std::span<const ShortestPathTree> trees)
{
    const std::size_t n = hl.num_vertices();
    if (trees.size() != n)
        throw InvalidArgument("need one shortest-path tree per vertex");
    std::vector<std::vector<HubEntry>> sets(n);
    std::vector<std::uint32_t> mark(n, 0);
    for (Vertex v = 0; v < n; ++v)
        sets[v] = closure_of(v, hl.hubs(v), trees[v], mark, v + 1);
    return HubLabeling(std::move(sets));
}

HubLabeling monotone_closure(const HubLabeling& hl, const WeightedGraph& g)
{
    const std::size_t n = hl.num_vertices();
    if (g.num_vertices() != n)
        throw InvalidArgument("labeling and graph disagree on vertex count");
    std::vector<std::vector<HubEntry>> sets(n);
    std::vector<std::uint32_t> mark(n, 0);
    for (Vertex v = 0; v < n; ++v)
        sets[v] = closure_of(v, hl.hubs(v), shortest_paths_from(g, v), mark, v + 1);
    return HubLabeling(std::move(sets));
}

HubLabeling baseline_full(const DistanceMatrix& dm)
{
    const std::size_t n = dm.num_vertices();
    std::vector<std::vector<HubEntry>> sets(n);
    for (Vertex v = 0; v < n; ++v) {
        const auto row = dm.row(v);
        for (Vertex h = 0; h < n; ++h)
            if (is_reachable(row[h]))
                sets[v].push_back({h, row[h]});
    }
    return HubLabeling(std::move(sets));
}

} // namespace hublab
