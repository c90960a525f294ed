#include "hublab/family.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "hublab/error.hpp"

namespace hublab {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t r;
    return __builtin_mul_overflow(a, b, &r) ? kSaturated : r;
}

std::uint64_t add_sat(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t r;
    return __builtin_add_overflow(a, b, &r) ? kSaturated : r;
}

std::uint64_t tree_size(const FamilyParams& p) { return 2 * p.side() - 1; }

void check_cap(std::uint64_t count, const FamilyLimits& limits, const char* what)
{
    if (count > limits.max_vertices)
        throw ResourceError(std::string(what) + " would have " +
                            (count == kSaturated ? std::string("too many") : std::to_string(count)) +
                            " vertices, cap is " + std::to_string(limits.max_vertices));
}

} // namespace

void FamilyParams::validate() const
{
    if (b < 1 || ell < 1)
        throw InvalidArgument("family parameters require b >= 1 and ell >= 1");
    if (b > 20)
        throw InvalidArgument("side-length exponent b must be at most 20");
}

std::uint64_t FamilyParams::level_size() const noexcept
{
    std::uint64_t r = 1;
    for (unsigned k = 0; k < ell; ++k)
        r = mul_sat(r, side());
    return r;
}

const char* to_string(FamilyKind kind) noexcept
{
    switch (kind) {
    case FamilyKind::H:
        return "H";
    case FamilyKind::G:
        return "G";
    case FamilyKind::GPrime:
        return "Gprime";
    }
    return "?";
}

FamilyKind parse_family_kind(const std::string& s)
{
    if (s == "H")
        return FamilyKind::H;
    if (s == "G")
        return FamilyKind::G;
    if (s == "Gprime")
        return FamilyKind::GPrime;
    throw InvalidArgument("unknown family kind '" + s + "' (expected H, G or Gprime)");
}

char role_code(VertexRole r) noexcept
{
    switch (r) {
    case VertexRole::Level:
        return 'L';
    case VertexRole::TreeInternal:
        return 'I';
    case VertexRole::TreeLeaf:
        return 'F';
    case VertexRole::PathAux:
        return 'P';
    }
    return '?';
}

VertexRole parse_role_code(char c)
{
    switch (c) {
    case 'L':
        return VertexRole::Level;
    case 'I':
        return VertexRole::TreeInternal;
    case 'F':
        return VertexRole::TreeLeaf;
    case 'P':
        return VertexRole::PathAux;
    default:
        throw ParseError(std::string("unknown vertex role code '") + c + "'");
    }
}

std::uint64_t FamilyInstance::coord_index(std::span<const unsigned> coords) const
{
    if (coords.size() != params.ell)
        throw InvalidArgument("coordinate vector has wrong dimension");
    std::uint64_t idx = 0;
    for (std::size_t k = coords.size(); k-- > 0;) {
        if (coords[k] >= params.side())
            throw InvalidArgument("coordinate out of range");
        idx = idx * params.side() + coords[k];
    }
    return idx;
}

std::vector<unsigned> FamilyInstance::coords_of(std::uint64_t index) const
{
    std::vector<unsigned> c(params.ell);
    for (unsigned k = 0; k < params.ell; ++k) {
        c[k] = static_cast<unsigned>(index % params.side());
        index /= params.side();
    }
    return c;
}

bool FamilyInstance::contains(const LevelCoord& c) const
{
    if (c.level >= params.num_levels() || c.coords.size() != params.ell)
        return false;
    for (unsigned x : c.coords)
        if (x >= params.side())
            return false;
    return level_vertex(c.level, coord_index(c.coords)) != kNoVertex;
}

Vertex FamilyInstance::id_of(const LevelCoord& c) const
{
    if (c.level >= params.num_levels())
        throw InvalidArgument("level out of range");
    const Vertex id = level_vertex(c.level, coord_index(c.coords));
    if (id == kNoVertex)
        throw InvalidArgument("level vertex was deleted");
    return id;
}

std::optional<Dist> level_edge_weight(const FamilyParams& p, unsigned level, std::span<const unsigned> lower,
                                      std::span<const unsigned> upper)
{
    if (level + 1 >= p.num_levels() || lower.size() != p.ell || upper.size() != p.ell)
        return std::nullopt;
    const unsigned c = p.free_coordinate(level) - 1;
    for (unsigned k = 0; k < p.ell; ++k)
        if (k != c && lower[k] != upper[k])
            return std::nullopt;
    const Dist delta = static_cast<Dist>(lower[c]) - static_cast<Dist>(upper[c]);
    return p.base_weight() + delta * delta;
}

FamilyInstance build_H(const FamilyParams& params, const FamilyLimits& limits)
{
    params.validate();
    const std::uint64_t per_level = params.level_size();
    check_cap(mul_sat(per_level, params.num_levels()), limits, "H instance");

    FamilyInstance inst;
    inst.params = params;
    inst.kind = FamilyKind::H;
    const std::size_t n = static_cast<std::size_t>(per_level) * params.num_levels();
    inst.level_ids.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        inst.level_ids[i] = static_cast<Vertex>(i);
    inst.roles.assign(n, VertexRole::Level);
    inst.owner_low = inst.level_ids;
    inst.owner_high = inst.level_ids;

    const std::uint64_t s = params.side();
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(per_level * s * 2 * params.ell));
    for (unsigned level = 0; level + 1 < params.num_levels(); ++level) {
        const unsigned c = params.free_coordinate(level) - 1;
        std::uint64_t stride = 1;
        for (unsigned k = 0; k < c; ++k)
            stride *= s;
        for (std::uint64_t idx = 0; idx < per_level; ++idx) {
            const auto jc = static_cast<Dist>((idx / stride) % s);
            const std::uint64_t base = idx - static_cast<std::uint64_t>(jc) * stride;
            for (std::uint64_t t = 0; t < s; ++t) {
                const Dist delta = jc - static_cast<Dist>(t);
                edges.push_back({inst.level_vertex(level, idx), inst.level_vertex(level + 1, base + t * stride),
                                 params.base_weight() + delta * delta});
            }
        }
    }
    inst.graph = WeightedGraph(n, std::move(edges));
    return inst;
}

std::uint64_t expanded_vertex_count(const FamilyParams& params)
{
    params.validate();
    const std::uint64_t per_level = params.level_size();
    const std::uint64_t s = params.side();
    const std::uint64_t levels = params.num_levels();
    std::uint64_t total = mul_sat(per_level, levels);
    // Two trees per level vertex except the in-tree at level 0 and out-tree at the top.
    total = add_sat(total, mul_sat(mul_sat(per_level, 2 * levels - 2), tree_size(params)));
    // Sum of (w - 2b - 3) over all H-edges; per lower vertex the free coordinate
    // contributes sum_t (jc - t)^2, and jc ranges uniformly over [0, s).
    std::uint64_t sq_sum = 0;
    for (std::uint64_t jc = 0; jc < s; ++jc)
        for (std::uint64_t t = 0; t < s; ++t)
        {
            const std::uint64_t d = jc > t ? jc - t : t - jc;
            sq_sum = add_sat(sq_sum, d * d);
        }
    const std::uint64_t per_edge_base = static_cast<std::uint64_t>(params.base_weight()) - 2 * params.b - 3;
    // per transition: per_level/s groups, each with s*s edges
    const std::uint64_t groups = per_level / s;
    const std::uint64_t one_transition = add_sat(mul_sat(mul_sat(groups, s * s), per_edge_base), mul_sat(groups, sq_sum));
    total = add_sat(total, mul_sat(one_transition, levels - 1));
    return total;
}

FamilyInstance expand_to_G(const FamilyInstance& h, const FamilyLimits& limits)
{
    if (h.kind != FamilyKind::H)
        throw InvalidArgument("expand_to_G requires an H instance");
    const FamilyParams& p = h.params;
    check_cap(expanded_vertex_count(p), limits, "G instance");

    const std::uint64_t s = p.side();
    const std::uint64_t per_level = p.level_size();
    const std::size_t n_level = h.graph.num_vertices();
    const Vertex tsize = static_cast<Vertex>(tree_size(p));
    const unsigned top = p.num_levels() - 1;

    FamilyInstance g;
    g.params = p;
    g.kind = FamilyKind::G;
    g.level_ids = h.level_ids;
    g.roles.assign(n_level, VertexRole::Level);
    g.owner_low = h.level_ids;
    g.owner_high = h.level_ids;

    std::vector<Edge> edges;
    std::vector<Vertex> in_base(n_level, kNoVertex), out_base(n_level, kNoVertex);
    Vertex next = static_cast<Vertex>(n_level);

    auto add_tree = [&](Vertex owner) {
        const Vertex base = next;
        next += tsize;
        for (Vertex k = 0; k < tsize; ++k) {
            const bool leaf = k >= s - 1;
            g.roles.push_back(leaf ? VertexRole::TreeLeaf : VertexRole::TreeInternal);
            g.owner_low.push_back(owner);
            g.owner_high.push_back(owner);
            if (k == 0)
                edges.push_back({owner, base, 1});
            else
                edges.push_back({base + (k - 1) / 2, base + k, 1});
        }
        return base;
    };

    for (Vertex v = 0; v < n_level; ++v) {
        const unsigned level = static_cast<unsigned>(v / per_level);
        if (level > 0)
            in_base[v] = add_tree(v);
        if (level < top)
            out_base[v] = add_tree(v);
    }

    for (const Edge& e : h.graph.edges()) {
        // H ids grow with level, so e.u is the lower endpoint.
        const unsigned level = static_cast<unsigned>(e.u / per_level);
        const unsigned c = p.free_coordinate(level) - 1;
        const auto lower = h.coords_of(e.u % per_level);
        const auto upper = h.coords_of(e.v % per_level);
        // Neighbors across one level differ only in coordinate c, so lexicographic
        // order of their coordinate vectors is the order of that coordinate.
        const Vertex out_leaf = out_base[e.u] + static_cast<Vertex>(s - 1 + upper[c]);
        const Vertex in_leaf = in_base[e.v] + static_cast<Vertex>(s - 1 + lower[c]);
        const Dist length = e.w - 2 * static_cast<Dist>(p.b) - 2;
        if (length <= 0)
            throw InvariantViolation("subdivided path length must be positive");
        Vertex prev = out_leaf;
        for (Dist k = 1; k < length; ++k) {
            const Vertex aux = next++;
            g.roles.push_back(VertexRole::PathAux);
            g.owner_low.push_back(e.u);
            g.owner_high.push_back(e.v);
            edges.push_back({prev, aux, 1});
            prev = aux;
        }
        edges.push_back({prev, in_leaf, 1});
    }
    g.graph = WeightedGraph(next, std::move(edges));
    return g;
}

FamilyInstance delete_level_mid(const FamilyInstance& g, const KeepPredicate& keep)
{
    if (g.kind != FamilyKind::G && g.kind != FamilyKind::GPrime)
        throw InvalidArgument("delete_level_mid requires a G instance");
    if (g.owner_low.size() != g.graph.num_vertices())
        throw InvalidArgument("delete_level_mid requires vertex ownership data");
    const FamilyParams& p = g.params;
    const std::uint64_t per_level = p.level_size();
    const std::size_t n = g.graph.num_vertices();

    std::vector<std::uint8_t> dropped_level(n, 0);
    FamilyInstance out;
    out.params = p;
    out.kind = FamilyKind::GPrime;
    out.removed = g.removed;
    for (std::uint64_t idx = 0; idx < per_level; ++idx) {
        const Vertex v = g.level_vertex(p.ell, idx);
        if (v == kNoVertex)
            continue;
        auto coords = g.coords_of(idx);
        if (!keep(coords)) {
            dropped_level[v] = 1;
            out.removed.push_back(std::move(coords));
        }
    }
    std::sort(out.removed.begin(), out.removed.end(),
              [&](const auto& a, const auto& b) { return g.coord_index(a) < g.coord_index(b); });

    std::vector<Vertex> remap(n, kNoVertex);
    Vertex next = 0;
    for (Vertex v = 0; v < n; ++v) {
        if (dropped_level[g.owner_low[v]] || dropped_level[g.owner_high[v]])
            continue;
        remap[v] = next++;
        out.roles.push_back(g.roles[v]);
        out.owner_low.push_back(g.owner_low[v]);
        out.owner_high.push_back(g.owner_high[v]);
    }
    for (auto& o : out.owner_low)
        o = remap[o];
    for (auto& o : out.owner_high)
        o = remap[o];
    out.level_ids.resize(g.level_ids.size());
    for (std::size_t i = 0; i < g.level_ids.size(); ++i)
        out.level_ids[i] = g.level_ids[i] == kNoVertex ? kNoVertex : remap[g.level_ids[i]];

    std::vector<Edge> edges;
    edges.reserve(g.graph.num_edges());
    for (const Edge& e : g.graph.edges())
        if (remap[e.u] != kNoVertex && remap[e.v] != kNoVertex)
            edges.push_back({remap[e.u], remap[e.v], e.w});
    out.graph = WeightedGraph(next, std::move(edges));
    return out;
}

} // namespace hublab
