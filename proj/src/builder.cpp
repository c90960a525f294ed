#include "hublab/builder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <tuple>

#include "hublab/error.hpp"
#include "hublab/rng.hpp"

namespace hublab {

namespace {

// sum * D <= 2 n^2
bool within_markov_bound(std::uint64_t sum, std::size_t n, std::uint32_t D)
{
    const unsigned __int128 lhs = static_cast<unsigned __int128>(sum) * D;
    const unsigned __int128 rhs = static_cast<unsigned __int128>(2) * n * n;
    return lhs <= rhs;
}

void sort_unique(std::vector<Vertex>& v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::uint64_t sum_sizes(const std::vector<std::vector<Vertex>>& sets)
{
    std::uint64_t t = 0;
    for (const auto& s : sets)
        t += s.size();
    return t;
}

} // namespace

std::uint32_t default_threshold(std::size_t n)
{
    if (n < 2)
        return 2;
    const double d = std::ceil(std::sqrt(std::log(static_cast<double>(n))));
    return std::max<std::uint32_t>(2, static_cast<std::uint32_t>(d));
}

std::size_t cover_set_size(std::size_t n, std::uint32_t D)
{
    if (D <= 1)
        return 0;
    const double k = std::ceil(static_cast<double>(n) / D * std::log(static_cast<double>(D)));
    return std::min(n, static_cast<std::size_t>(k));
}

PairClassification::PairClassification(const WeightedGraph& g, const DistanceMatrix& dm, std::uint32_t D)
    : n_(dm.num_vertices()), D_(D), flags_(n_ * n_, kNone)
{
    if (D == 0)
        throw InvalidArgument("threshold D must be at least 1");
    if (g.num_vertices() != n_)
        throw InvalidArgument("graph and distance table disagree on vertex count");
    const std::size_t cap = std::size_t{D} + 1;
    std::vector<std::uint32_t> seen(n_, 0);
    std::uint32_t stamp = 0;
    std::vector<Vertex> found;
    found.reserve(cap);

    for (Vertex u = 0; u < n_; ++u) {
        const auto from_u = dm.row(u);
        for (Vertex v = u + 1; v < n_; ++v) {
            const Dist duv = from_u[v];
            if (!is_reachable(duv))
                continue;
            ++reachable_pairs_;
            const auto from_v = dm.row(v);
            // Every candidate lies on a shortest u-v path, so they are all reached
            // from v through candidates.
            ++stamp;
            found.clear();
            found.push_back(v);
            seen[v] = stamp;
            for (std::size_t head = 0; head < found.size() && found.size() < cap; ++head) {
                const Vertex x = found[head];
                for (const auto& a : g.neighbors(x)) {
                    const Vertex y = a.to;
                    if (seen[y] == stamp || !is_reachable(from_u[y]) || !is_reachable(from_v[y]))
                        continue;
                    if (from_u[y] + from_v[y] != duv)
                        continue;
                    seen[y] = stamp;
                    found.push_back(y);
                    if (found.size() >= cap)
                        break;
                }
            }
            const std::size_t size = found.size(); // min(|H_uv|, D + 1)
            std::uint8_t f = kNone;
            if (D > 1 && size >= D) {
                f |= kLarge;
                ++large_pairs_;
            }
            if (size <= D || D == 1) {
                f |= kSmall;
                std::sort(found.begin(), found.end());
                small_.push_back({u, v, static_cast<std::uint32_t>(cand_.size()),
                                  static_cast<std::uint32_t>(size), size <= D});
                cand_.insert(cand_.end(), found.begin(), found.end());
            }
            flags_[std::size_t{u} * n_ + v] = f;
        }
    }
}

CoverSetStage sample_cover_set(const PairClassification& pc, const DistanceMatrix& dm, const BuilderConfig& cfg)
{
    const std::size_t n = pc.num_vertices();
    const std::uint32_t D = pc.threshold();
    CoverSetStage out;
    out.Q.assign(n, {});
    if (D == 1) {
        out.skipped = true;
        return out;
    }
    const std::size_t k = cover_set_size(n, D);
    std::vector<Vertex> perm(n);
    std::vector<std::uint8_t> covered(n);
    for (std::uint32_t attempt = 0; attempt < std::max(1u, cfg.max_resamples); ++attempt) {
        auto rng = make_stream(cfg.seed, 1, attempt);
        std::iota(perm.begin(), perm.end(), Vertex{0});
        for (std::size_t i = 0; i < k; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, n - 1);
            std::swap(perm[i], perm[pick(rng)]);
        }
        std::vector<Vertex> S(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
        std::sort(S.begin(), S.end());

        std::vector<std::vector<Vertex>> Q(n);
        std::uint64_t sum = 0;
        for (Vertex u = 0; u < n; ++u) {
            const auto from_u = dm.row(u);
            std::fill(covered.begin() + u, covered.end(), 0);
            for (Vertex s : S) {
                const Dist dus = from_u[s];
                if (!is_reachable(dus))
                    continue;
                const auto from_s = dm.row(s);
                // Unreachable entries of from_s coincide with unreachable entries
                // of from_u; those pairs are never large, so no branch is needed.
                for (std::size_t v = u + 1; v < n; ++v)
                    covered[v] |= static_cast<std::uint8_t>(from_u[v] == dus + from_s[v]);
            }
            for (Vertex v = u + 1; v < n; ++v) {
                if ((pc.flags(u, v) & PairClassification::kLarge) && !covered[v]) {
                    Q[u].push_back(v);
                    ++sum;
                }
            }
        }
        out.attempts = attempt + 1;
        if (within_markov_bound(sum, n, D)) {
            out.S = std::move(S);
            out.Q = std::move(Q);
            out.sum_Q = sum;
            return out;
        }
    }
    throw ResampleExhausted("cover set stage exceeded " + std::to_string(cfg.max_resamples) +
                            " resamples without meeting sum|Q| <= 2n^2/D");
}

ColoringStage sample_coloring(const PairClassification& pc, const BuilderConfig& cfg)
{
    const std::size_t n = pc.num_vertices();
    const std::uint64_t D = pc.threshold();
    const std::uint64_t palette = D * D * D;
    const auto& small = pc.small_pairs();
    for (std::uint32_t attempt = 0; attempt < std::max(1u, cfg.max_resamples); ++attempt) {
        auto rng = make_stream(cfg.seed, 2, attempt);
        std::uniform_int_distribution<std::uint64_t> pick(1, palette);
        ColoringStage out;
        out.colors.resize(n);
        for (auto& c : out.colors)
            c = pick(rng);
        out.R.assign(n, {});
        out.conflict.assign(small.size(), 0);
        std::vector<std::uint64_t> cols;
        for (std::size_t i = 0; i < small.size(); ++i) {
            const auto& p = small[i];
            cols.clear();
            for (Vertex x : pc.candidates(p))
                cols.push_back(out.colors[x]);
            std::sort(cols.begin(), cols.end());
            if (std::adjacent_find(cols.begin(), cols.end()) != cols.end()) {
                out.conflict[i] = 1;
                out.R[p.u].push_back(p.v);
                ++out.sum_R;
            }
        }
        out.attempts = attempt + 1;
        if (within_markov_bound(out.sum_R, n, pc.threshold()))
            return out;
    }
    throw ResampleExhausted("coloring stage exceeded " + std::to_string(cfg.max_resamples) +
                            " resamples without meeting sum|R| <= 2n^2/D");
}

namespace {

struct BucketEdge {
    Dist a;
    Dist b;
    Vertex h;
    Vertex left;
    Vertex right;

    auto key() const { return std::tie(a, b, h, left, right); }
};

struct MatchKey {
    Dist a;
    Dist b;
    std::uint64_t color;
    Vertex x;

    friend auto operator<=>(const MatchKey&, const MatchKey&) = default;
};

} // namespace

MatchingStage build_matchings(const PairClassification& pc, const DistanceMatrix& dm, const ColoringStage& coloring)
{
    const std::size_t n = pc.num_vertices();
    const Dist D = pc.threshold();
    const auto& small = pc.small_pairs();
    const auto& colors = coloring.colors;

    std::vector<BucketEdge> edges;
    for (std::size_t i = 0; i < small.size(); ++i) {
        const auto& p = small[i];
        if (coloring.conflict[i] || !p.exact)
            continue;
        const Dist duv = dm(p.u, p.v);
        if (duv < 1 || duv > D)
            continue;
        for (Vertex h : pc.candidates(p)) {
            edges.push_back({dm(p.u, h), dm(h, p.v), h, p.u, p.v});
            edges.push_back({dm(p.v, h), dm(h, p.u), h, p.v, p.u});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const BucketEdge& x, const BucketEdge& y) { return x.key() < y.key(); });

    MatchingStage out;
    out.F.resize(n);
    for (Vertex v = 0; v < n; ++v)
        out.F[v].push_back(v);
    out.bucket_edges = edges.size();

    std::vector<std::uint64_t> left_stamp(n, 0), right_stamp(n, 0);
    std::uint64_t bucket_no = 0;
    std::vector<BucketEdge> matched;
    for (std::size_t i = 0; i < edges.size();) {
        std::size_t j = i;
        ++bucket_no;
        BucketLog log{edges[i].a, edges[i].b, edges[i].h, 0, 0};
        while (j < edges.size() && edges[j].a == log.a && edges[j].b == log.b && edges[j].h == log.h) {
            const auto& e = edges[j];
            ++log.edges;
            if (left_stamp[e.left] != bucket_no && right_stamp[e.right] != bucket_no) {
                left_stamp[e.left] = bucket_no;
                right_stamp[e.right] = bucket_no;
                matched.push_back(e);
                ++log.matched;
                out.F[e.left].push_back(e.h);
                out.F[e.right].push_back(e.h);
            }
            ++j;
        }
        out.buckets.push_back(log);
        i = j;
    }
    out.matched_edges = matched.size();
    out.matched.reserve(matched.size());
    for (const auto& e : matched)
        out.matched.push_back({e.a, e.b, e.h, e.left, e.right});
    for (auto& f : out.F)
        sort_unique(f);
    out.sum_F = sum_sizes(out.F);

    // Induced-matching check. For a matched edge (u1, v2) of bucket h' and another
    // bucket h of the same (a, b) and color, u1 and v2 must not both be matched in
    // h to other partners.
    std::map<MatchKey, std::vector<std::pair<Vertex, Vertex>>> by_left, by_right; // -> (h, partner)
    for (const auto& e : matched) {
        by_left[{e.a, e.b, colors[e.h], e.left}].emplace_back(e.h, e.right);
        by_right[{e.a, e.b, colors[e.h], e.right}].emplace_back(e.h, e.left);
    }
    for (const auto& e : matched) {
        const std::uint64_t c = colors[e.h];
        const auto& lefts = by_left.at({e.a, e.b, c, e.left});
        const auto& rights = by_right.at({e.a, e.b, c, e.right});
        for (const auto& [h, v1] : lefts) {
            if (h == e.h)
                continue;
            ++out.induced_checks;
            for (const auto& [h2, u2] : rights) {
                if (h2 != h || v1 == e.right || u2 == e.left)
                    continue;
                std::ostringstream msg;
                msg << "bucket matching is not induced: a=" << e.a << " b=" << e.b << " h=" << h << " h'=" << e.h
                    << " u=" << e.left << " v=" << e.right;
                throw InvariantViolation(msg.str());
            }
        }
    }
    return out;
}

std::vector<std::vector<Vertex>> uncovered_fallback(const PairClassification& pc, const DistanceMatrix& dm,
                                                    const ColoringStage& coloring)
{
    std::vector<std::vector<Vertex>> out(pc.num_vertices());
    const Dist D = pc.threshold();
    const auto& small = pc.small_pairs();
    for (std::size_t i = 0; i < small.size(); ++i) {
        const auto& p = small[i];
        if (coloring.conflict[i] || (pc.flags(p.u, p.v) & PairClassification::kLarge))
            continue;
        const Dist duv = dm(p.u, p.v);
        if (duv < 1 || duv > D)
            out[p.u].push_back(p.v);
    }
    return out;
}

HubLabeling assemble(const CoverSetStage& cover, const ColoringStage& coloring, const MatchingStage& matching,
                     const std::vector<std::vector<Vertex>>& fallback, const WeightedGraph& g,
                     const DistanceMatrix& dm, SizeLedger* ledger, unsigned threads)
{
    const std::size_t n = dm.num_vertices();
    std::vector<std::vector<HubEntry>> sets(n);
    std::vector<std::uint32_t> mark(n, 0);
    std::uint64_t sum_nf = 0;
    for (Vertex v = 0; v < n; ++v) {
        const std::uint32_t stamp = v + 1;
        auto& out = sets[v];
        auto add = [&](Vertex h) {
            if (mark[h] != stamp) {
                mark[h] = stamp;
                out.push_back({h, dm(v, h)});
            }
        };
        for (Vertex s : cover.S)
            if (is_reachable(dm(v, s)))
                add(s);
        for (Vertex h : cover.Q[v])
            add(h);
        for (Vertex h : fallback[v])
            add(h);
        for (Vertex h : coloring.R[v])
            add(h);
        // N[F_v] counted separately for the ledger.
        std::vector<Vertex> nf;
        for (Vertex f : matching.F[v]) {
            nf.push_back(f);
            for (const auto& a : g.neighbors(f))
                nf.push_back(a.to);
        }
        sort_unique(nf);
        sum_nf += nf.size();
        for (Vertex h : nf)
            add(h);
    }
    HubLabeling hl(std::move(sets));

    SizeLedger led;
    led.n = n;
    led.cover_set = cover.S.size();
    led.sum_Q_fallback = sum_sizes(fallback);
    led.sum_Q = cover.sum_Q + led.sum_Q_fallback;
    led.sum_R = coloring.sum_R;
    led.sum_F = matching.sum_F;
    led.sum_NF = sum_nf;
    led.max_degree = g.max_degree();
    led.total = hl.total_size();
    led.bound = led.n * led.cover_set + led.sum_Q + led.sum_R + (led.max_degree + 1) * led.sum_F;
    if (ledger)
        *ledger = led;
    if (!led.holds())
        throw InvariantViolation("size ledger violated: total " + std::to_string(led.total) + " > bound " +
                                 std::to_string(led.bound));

    const CoverReport rep = verify_cover(hl, dm, threads);
    if (!rep.valid) {
        std::string msg = "assembled labeling misses " + std::to_string(rep.uncovered_count) + " pairs";
        if (!rep.uncovered.empty())
            msg += ", first (" + std::to_string(rep.uncovered[0].first) + "," +
                   std::to_string(rep.uncovered[0].second) + ")";
        throw VerificationError(msg);
    }
    return hl;
}

BuildResult build_labeling(const WeightedGraph& g, const DistanceMatrix& dm, const BuilderConfig& cfg)
{
    BuildResult r;
    auto& art = r.artifacts;
    art.D = cfg.D == 0 ? default_threshold(g.num_vertices()) : cfg.D;
    const PairClassification pc(g, dm, art.D);
    art.reachable_pairs = pc.num_reachable_pairs();
    art.large_pairs = pc.num_large_pairs();
    art.small_pairs = pc.small_pairs().size();
    art.cover = sample_cover_set(pc, dm, cfg);
    art.coloring = sample_coloring(pc, cfg);
    art.matching = build_matchings(pc, dm, art.coloring);
    art.fallback = uncovered_fallback(pc, dm, art.coloring);
    r.labeling = assemble(art.cover, art.coloring, art.matching, art.fallback, g, dm, &art.ledger, cfg.threads);
    return r;
}

DegreeReduction reduce_degree(const WeightedGraph& g)
{
    if (g.weight_class() != WeightClass::Unit)
        throw InvalidArgument("degree reduction requires an unweighted graph");
    const std::size_t n = g.num_vertices();
    const std::size_t m = g.num_edges();
    const std::size_t per_clone = std::max<std::size_t>(1, n == 0 ? 1 : (m + n - 1) / n);
    DegreeReduction red;
    red.degree_cap = 2 + per_clone;
    red.representative.resize(n);
    red.origin.resize(n);
    std::iota(red.representative.begin(), red.representative.end(), Vertex{0});
    std::iota(red.origin.begin(), red.origin.end(), Vertex{0});

    // First clone keeps the original id; extra clones are appended in vertex order.
    std::vector<Vertex> first_extra(n, kNoVertex);
    std::vector<Edge> edges;
    Vertex next = static_cast<Vertex>(n);
    for (Vertex v = 0; v < n; ++v) {
        const std::size_t deg = g.degree(v);
        if (deg <= red.degree_cap)
            continue;
        ++red.split_vertices;
        const std::size_t clones = (deg + per_clone - 1) / per_clone;
        first_extra[v] = next;
        Vertex prev = v;
        for (std::size_t k = 1; k < clones; ++k) {
            red.origin.push_back(v);
            edges.push_back({prev, next, 0});
            prev = next++;
        }
    }
    auto clone_for = [&](Vertex v, Vertex neighbor) {
        if (first_extra[v] == kNoVertex)
            return v;
        const auto nb = g.neighbors(v);
        const auto slot = static_cast<std::size_t>(
            std::lower_bound(nb.begin(), nb.end(), neighbor, [](const Arc& a, Vertex x) { return a.to < x; }) -
            nb.begin());
        const std::size_t k = slot / per_clone;
        return k == 0 ? v : static_cast<Vertex>(first_extra[v] + k - 1);
    };
    for (const Edge& e : g.edges())
        edges.push_back({clone_for(e.u, e.v), clone_for(e.v, e.u), 1});
    red.graph = WeightedGraph(next, std::move(edges));
    return red;
}

HubLabeling project_back(const HubLabeling& reduced, const DegreeReduction& red, const DistanceMatrix& dm,
                         unsigned threads)
{
    const std::size_t n = red.representative.size();
    if (dm.num_vertices() != n)
        throw InvalidArgument("distance table does not match the original graph");
    std::vector<std::vector<HubEntry>> sets(n);
    for (Vertex v = 0; v < n; ++v) {
        std::vector<Vertex> hs;
        for (const auto& e : reduced.hubs(red.representative[v]))
            hs.push_back(red.origin[e.hub]);
        sort_unique(hs);
        for (Vertex h : hs)
            sets[v].push_back({h, dm(v, h)});
    }
    HubLabeling hl(std::move(sets));
    const CoverReport rep = verify_cover(hl, dm, threads);
    if (!rep.valid)
        throw VerificationError("projected labeling misses " + std::to_string(rep.uncovered_count) + " pairs");
    return hl;
}

bool needs_degree_reduction(const WeightedGraph& g)
{
    const std::size_t n = g.num_vertices();
    if (n == 0 || g.weight_class() != WeightClass::Unit)
        return false;
    const std::size_t per_clone = std::max<std::size_t>(1, (g.num_edges() + n - 1) / n);
    return g.max_degree() > 2 + per_clone;
}

PipelineResult run_pipeline(const WeightedGraph& g, const BuilderConfig& cfg, const PipelineOptions& opts)
{
    PipelineResult out;
    AllPairsOptions apo = opts.all_pairs;
    apo.threads = std::max(apo.threads, cfg.threads);
    const DistanceMatrix dm = all_pairs(g, apo);
    const bool reduce = opts.reduce == ReduceMode::Always ||
                        (opts.reduce == ReduceMode::Auto && needs_degree_reduction(g));
    BuilderConfig c = cfg;
    if (c.D == 0)
        c.D = default_threshold(g.num_vertices());
    if (reduce) {
        DegreeReduction red = reduce_degree(g);
        const DistanceMatrix dm_red = all_pairs(red.graph, apo);
        BuildResult br = build_labeling(red.graph, dm_red, c);
        out.labeling = project_back(br.labeling, red, dm, c.threads);
        out.artifacts = std::move(br.artifacts);
        out.reduction = std::move(red);
    } else {
        BuildResult br = build_labeling(g, dm, c);
        out.labeling = std::move(br.labeling);
        out.artifacts = std::move(br.artifacts);
    }
    out.cover = verify_cover(out.labeling, dm, c.threads);
    return out;
}

} // namespace hublab
