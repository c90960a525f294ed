#include "hublab/audit.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "hublab/error.hpp"
#include "hublab/rng.hpp"

namespace hublab {

namespace {

bool contains_hub(std::span<const HubEntry> set, Vertex h)
{
    auto it = std::lower_bound(set.begin(), set.end(), h, [](const HubEntry& e, Vertex x) { return e.hub < x; });
    return it != set.end() && it->hub == h;
}

} // namespace

std::vector<Triplet> enumerate_triplets(const FamilyParams& p)
{
    p.validate();
    const unsigned s = static_cast<unsigned>(p.side());
    const unsigned half = s / 2;
    std::uint64_t per_level = p.level_size();
    std::uint64_t half_count = 1;
    for (unsigned k = 0; k < p.ell; ++k)
        half_count *= half;
    std::vector<Triplet> out;
    out.reserve(per_level * half_count);
    std::vector<unsigned> x(p.ell), z(p.ell), y(p.ell);
    for (std::uint64_t xi = 0; xi < per_level; ++xi) {
        std::uint64_t t = xi;
        for (unsigned k = 0; k < p.ell; ++k) {
            x[k] = static_cast<unsigned>(t % s);
            t /= s;
        }
        // z_k ranges over values with the parity of x_k, in increasing mixed-radix order.
        for (std::uint64_t zi = 0; zi < half_count; ++zi) {
            std::uint64_t r = zi;
            for (unsigned k = 0; k < p.ell; ++k) {
                z[k] = static_cast<unsigned>(2 * (r % half) + (x[k] & 1u));
                r /= half;
                y[k] = (x[k] + z[k]) / 2;
            }
            out.push_back({x, y, z});
        }
    }
    return out;
}

TripletReport audit_lemma1(const FamilyInstance& inst, const AuditMode& mode)
{
    if (inst.kind == FamilyKind::GPrime)
        throw InvalidArgument("triplet audit needs an H or G instance (no deleted mid-level vertices)");
    const FamilyParams& p = inst.params;
    const auto all = enumerate_triplets(p);
    TripletReport rep;
    rep.total = all.size();

    std::vector<std::size_t> chosen(all.size());
    std::iota(chosen.begin(), chosen.end(), std::size_t{0});
    if (mode.sample && *mode.sample < all.size()) {
        rep.sampled = true;
        auto rng = make_stream(mode.seed, 3);
        const std::size_t k = static_cast<std::size_t>(*mode.sample);
        for (std::size_t i = 0; i < k; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, chosen.size() - 1);
            std::swap(chosen[i], chosen[pick(rng)]);
        }
        chosen.resize(k);
        std::sort(chosen.begin(), chosen.end());
    }

    const Dist A = p.base_weight();
    const WeightedGraph& g = inst.graph;
    std::size_t i = 0;
    while (i < chosen.size()) {
        const auto& x = all[chosen[i]].x;
        const Vertex src = inst.id_of({0, x});
        const auto dist = distances_from(g, src);
        const auto counts = count_shortest_paths(g, dist);
        for (; i < chosen.size() && all[chosen[i]].x == x; ++i) {
            const Triplet& t = all[chosen[i]];
            ++rep.checked;
            const Vertex tgt = inst.id_of({2 * p.ell, t.z});
            const Vertex mid = inst.id_of({p.ell, t.y});
            Dist expected = 2 * static_cast<Dist>(p.ell) * A;
            for (unsigned k = 0; k < p.ell; ++k) {
                const Dist delta = (static_cast<Dist>(t.z[k]) - static_cast<Dist>(t.x[k])) / 2;
                expected += 2 * delta * delta;
            }
            if (dist[tgt] == expected)
                ++rep.length_ok;
            UniquePathResult u;
            try {
                u = is_unique_shortest_path(g, dist, counts, src, tgt);
            } catch (const OverflowError&) {
                rep.failures.push_back({t, "path count overflow"});
                continue;
            }
            if (!u.unique) {
                rep.failures.push_back({t, "shortest path not unique"});
                continue;
            }
            ++rep.unique_ok;
            if (std::find(u.path->begin(), u.path->end(), mid) == u.path->end()) {
                rep.failures.push_back({t, "path misses midpoint"});
                continue;
            }
            ++rep.midpoint_ok;
            if (dist[tgt] != expected)
                rep.failures.push_back({t, "path length differs from 2*ell*A + 2*sum(delta^2)"});
        }
    }
    std::sort(rep.failures.begin(), rep.failures.end(),
              [](const TripletFailure& a, const TripletFailure& b) { return a.triplet < b.triplet; });
    return rep;
}

CountingReport audit_counting(const FamilyInstance& inst, const HubLabeling& hl, const AllPairsOptions& opts)
{
    const DistanceMatrix dm = all_pairs(inst.graph, opts);
    return audit_counting(inst, hl, dm, opts.threads);
}

CountingReport audit_counting(const FamilyInstance& inst, const HubLabeling& hl, const DistanceMatrix& dm,
                              unsigned threads)
{
    if (inst.kind == FamilyKind::GPrime)
        throw InvalidArgument("counting audit needs an H or G instance");
    CountingReport rep;
    rep.cover = verify_cover(hl, dm, threads);
    if (!rep.cover.valid)
        throw VerificationError("labeling fails cover verification (" + std::to_string(rep.cover.uncovered_count) +
                                " uncovered pairs); counting audit requires a valid labeling");
    const HubLabeling closure = monotone_closure(hl, inst.graph);
    rep.lhs = closure.total_size();
    const FamilyParams& p = inst.params;
    const std::uint64_t per_level = p.level_size();
    rep.rhs = per_level * per_level >> p.ell;
    for (const auto& t : enumerate_triplets(p)) {
        ++rep.triplets;
        const Vertex x = inst.id_of({0, t.x});
        const Vertex y = inst.id_of({p.ell, t.y});
        const Vertex z = inst.id_of({2 * p.ell, t.z});
        if (contains_hub(closure.hubs(x), y) || contains_hub(closure.hubs(z), y))
            ++rep.membership_ok;
        else
            rep.membership_failures.push_back(t);
    }
    rep.pass = rep.lhs >= rep.rhs && rep.membership_failures.empty();
    return rep;
}

} // namespace hublab
