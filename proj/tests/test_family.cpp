#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "hublab/error.hpp"
#include "hublab/family.hpp"
#include "support/test_support.hpp"

using namespace hublab;
using testsupport::Rng;

namespace {

std::vector<std::vector<unsigned>> all_vectors(unsigned s, unsigned ell)
{
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> cur(ell, 0);
    for (;;) {
        out.push_back(cur);
        unsigned k = 0;
        while (k < ell && ++cur[k] == s)
            cur[k++] = 0;
        if (k == ell)
            return out;
    }
}

// Edge set of H by the level rule, written independently of the generator.
std::set<std::tuple<LevelCoord, LevelCoord, Dist>> rule_edges(unsigned b, unsigned ell)
{
    const unsigned s = 1u << b;
    const Dist A = 3 * ell * s * s;
    const auto vecs = all_vectors(s, ell);
    std::set<std::tuple<LevelCoord, LevelCoord, Dist>> out;
    for (unsigned i = 0; i < 2 * ell; ++i) {
        const unsigned c = i < ell ? i + 1 : 2 * ell - i;
        for (const auto& j : vecs)
            for (const auto& jp : vecs) {
                bool ok = true;
                for (unsigned k = 0; k < ell; ++k)
                    if (k != c - 1 && j[k] != jp[k])
                        ok = false;
                if (!ok)
                    continue;
                const Dist d = static_cast<Dist>(j[c - 1]) - static_cast<Dist>(jp[c - 1]);
                out.insert({LevelCoord{i, j}, LevelCoord{i + 1, jp}, A + d * d});
            }
    }
    return out;
}

LevelCoord lc(unsigned level, std::vector<unsigned> c) { return {level, std::move(c)}; }

} // namespace

TEST_CASE("parameter validation")
{
    CHECK_THROWS_AS((FamilyParams{0, 1}.validate()), InvalidArgument);
    CHECK_THROWS_AS((FamilyParams{1, 0}.validate()), InvalidArgument);
    CHECK_NOTHROW((FamilyParams{2, 3}.validate()));
    const FamilyParams p{2, 2};
    CHECK(p.side() == 4);
    CHECK(p.level_size() == 16);
    CHECK(p.num_levels() == 5);
    CHECK(p.base_weight() == 96);
    CHECK(p.free_coordinate(0) == 1);
    CHECK(p.free_coordinate(1) == 2);
    CHECK(p.free_coordinate(2) == 2);
    CHECK(p.free_coordinate(3) == 1);
}

TEST_CASE("build_H matches the level rule")
{
    for (unsigned b : {1u, 2u})
        for (unsigned ell : {1u, 2u, 3u}) {
            if (b == 2 && ell == 3)
                continue;
            CAPTURE(b);
            CAPTURE(ell);
            const auto h = build_H({b, ell});
            const auto expect = rule_edges(b, ell);
            std::set<std::tuple<LevelCoord, LevelCoord, Dist>> got;
            const auto L = h.params.level_size();
            for (const auto& e : h.graph.edges()) {
                const LevelCoord a{static_cast<unsigned>(e.u / L), h.coords_of(e.u % L)};
                const LevelCoord c{static_cast<unsigned>(e.v / L), h.coords_of(e.v % L)};
                got.insert(a.level < c.level ? std::tuple{a, c, e.w} : std::tuple{c, a, e.w});
            }
            CHECK(got == expect);
            CHECK(h.graph.num_vertices() == (2 * ell + 1) * L);
            CHECK(h.kind == FamilyKind::H);
        }
}

TEST_CASE("H_{1,1} and H_{2,2} shapes")
{
    const auto h11 = build_H({1, 1});
    CHECK(h11.graph.num_vertices() == 6);
    CHECK(h11.graph.num_edges() == 8);
    CHECK(h11.params.base_weight() == 12);
    for (const auto& e : h11.graph.edges())
        CHECK((e.w == 12 || e.w == 13));

    const auto h = build_H({2, 2});
    const Dist A = 96;
    const unsigned s = 4;
    CHECK(h.graph.num_vertices() == 80);
    for (const auto& e : h.graph.edges()) {
        CHECK(e.w >= A);
        CHECK(e.w <= A + (s - 1) * (s - 1));
        CHECK(e.w <= (3 * 2 + 1) * s * s);
    }
    // s neighbors above and below.
    for (unsigned lvl = 0; lvl < 5; ++lvl)
        for (std::uint64_t i = 0; i < 16; ++i) {
            const Vertex v = h.level_vertex(lvl, i);
            std::size_t up = 0, down = 0;
            for (const auto& a : h.graph.neighbors(v))
                (a.to / 16 > lvl ? up : down)++;
            CHECK(up == (lvl < 4 ? s : 0));
            CHECK(down == (lvl > 0 ? s : 0));
        }
}

TEST_CASE("traced route on H_{2,2}")
{
    const auto h = build_H({2, 2});
    const Dist A = 96;
    const Vertex src = h.id_of(lc(0, {1, 0}));
    const Vertex dst = h.id_of(lc(4, {3, 2}));
    const Vertex mid = h.id_of(lc(2, {2, 1}));
    const auto dm = all_pairs(h.graph);
    CHECK(dm(src, dst) == 4 * A + 4);
    CHECK(dm(src, dst) == 388);
    CHECK(dm(src, mid) == 2 * A + 2);
    CHECK(dm(src, mid) == 194);
    const auto r = is_unique_shortest_path(dm, h.graph, src, dst);
    REQUIRE(r.unique);
    CHECK(std::count(r.path->begin(), r.path->end(), mid) == 1);

    // A competing route through v_{2,(1,2)}: coordinate changes of 2 on one side only.
    const std::vector<LevelCoord> red{lc(0, {1, 0}), lc(1, {1, 0}), lc(2, {1, 2}), lc(3, {1, 2}), lc(4, {3, 2})};
    Dist len = 0;
    for (std::size_t i = 0; i + 1 < red.size(); ++i) {
        const auto w = h.graph.weight(h.id_of(red[i]), h.id_of(red[i + 1]));
        REQUIRE(w.has_value());
        CHECK(*w == *level_edge_weight(h.params, red[i].level, red[i].coords, red[i + 1].coords));
        len += *w;
    }
    CHECK(len == 4 * A + 8);
    CHECK(len == 392);
}

TEST_CASE("short level-crossing paths are lighter than long ones")
{
    for (unsigned b : {1u, 2u})
        for (unsigned ell : {1u, 2u}) {
            const FamilyParams p{b, ell};
            const Dist A = p.base_weight();
            const Dist s = static_cast<Dist>(p.side());
            const Dist heaviest = 2 * ell * (A + (s - 1) * (s - 1));
            CHECK(heaviest < (2 * ell + 1) * A);
            const auto h = build_H(p);
            const auto dm = all_pairs(h.graph);
            const auto L = p.level_size();
            for (std::uint64_t x = 0; x < L; ++x)
                for (std::uint64_t z = 0; z < L; ++z)
                    CHECK(dm(h.level_vertex(0, x), h.level_vertex(2 * ell, z)) < (2 * ell + 1) * A);
        }
}

TEST_CASE("level_edge_weight")
{
    const FamilyParams p{2, 2};
    CHECK(level_edge_weight(p, 0, std::vector<unsigned>{1, 0}, std::vector<unsigned>{3, 0}) == 96 + 4);
    CHECK_FALSE(level_edge_weight(p, 0, std::vector<unsigned>{1, 0}, std::vector<unsigned>{1, 1}).has_value());
    CHECK(level_edge_weight(p, 1, std::vector<unsigned>{1, 0}, std::vector<unsigned>{1, 3}) == 96 + 9);
    CHECK(level_edge_weight(p, 2, std::vector<unsigned>{1, 0}, std::vector<unsigned>{1, 0}) == 96);
}

TEST_CASE("vertex cap")
{
    CHECK_THROWS_AS(build_H({2, 2}, {79}), ResourceError);
    CHECK_NOTHROW(build_H({2, 2}, {80}));
    const auto h = build_H({2, 2});
    CHECK_THROWS_AS(expand_to_G(h, {1000}), ResourceError);
    CHECK_THROWS_AS(build_H({20, 20}), ResourceError);
}

TEST_CASE("coordinate addressing")
{
    const auto h = build_H({2, 2});
    CHECK(h.coord_index(std::vector<unsigned>{1, 0}) == 1);
    CHECK(h.coord_index(std::vector<unsigned>{0, 1}) == 4);
    CHECK(h.coord_index(std::vector<unsigned>{3, 2}) == 11);
    CHECK(h.coords_of(11) == std::vector<unsigned>{3, 2});
    CHECK(h.id_of(lc(2, {3, 2})) == 2 * 16 + 11);
    CHECK_THROWS_AS(h.id_of(lc(5, {0, 0})), InvalidArgument);
    CHECK_THROWS_AS(h.id_of(lc(0, {4, 0})), InvalidArgument);
    CHECK_THROWS_AS(h.id_of(lc(0, {0})), InvalidArgument);
    CHECK(h.contains(lc(4, {3, 3})));
    CHECK_FALSE(h.contains(lc(4, {3, 4})));
}

TEST_CASE("expansion structure")
{
    for (unsigned b : {1u, 2u})
        for (unsigned ell : {1u, 2u}) {
            CAPTURE(b);
            CAPTURE(ell);
            const FamilyParams p{b, ell};
            const auto h = build_H(p);
            const auto g = expand_to_G(h);
            const std::uint64_t s = p.side();
            const std::uint64_t L = p.level_size();

            // Independent vertex count.
            std::uint64_t count = h.graph.num_vertices();
            count += 2 * (2 * ell) * L * (2 * s - 1);
            for (const auto& e : h.graph.edges())
                count += static_cast<std::uint64_t>(e.w) - 2 * b - 3;
            CHECK(g.graph.num_vertices() == count);
            CHECK(expanded_vertex_count(p) == count);
            const std::uint64_t envelope =
                4 * s * L * (2 * ell + 1) + (3 * ell + 1) * s * s * L * 2 * ell * s;
            CHECK(count <= envelope);

            CHECK(g.graph.max_degree() == 3);
            CHECK(g.graph.weight_class() == WeightClass::Unit);
            CHECK(g.kind == FamilyKind::G);
            REQUIRE(g.roles.size() == count);
            CHECK(std::count(g.roles.begin(), g.roles.end(), VertexRole::Level) ==
                  static_cast<std::ptrdiff_t>(h.graph.num_vertices()));
            CHECK(std::count(g.roles.begin(), g.roles.end(), VertexRole::TreeLeaf) ==
                  static_cast<std::ptrdiff_t>(2 * (2 * ell) * L * s));

            // Level vertices keep their H ids.
            for (Vertex v = 0; v < h.graph.num_vertices(); ++v)
                CHECK(g.level_ids[v] == h.level_ids[v]);

            // Every leaf sits b+1 steps from its owner.
            for (Vertex v = 0; v < count; ++v) {
                if (g.roles[v] != VertexRole::TreeLeaf)
                    continue;
                CHECK(distances_from(g.graph, g.owner_low[v])[v] == static_cast<Dist>(b + 1));
                break;
            }

            // H-edge weights are realized exactly.
            for (const auto& e : h.graph.edges())
                CHECK(distances_from(g.graph, g.level_ids[e.u])[g.level_ids[e.v]] == e.w);
        }
}

TEST_CASE("tree leaves sit b+1 from their owner on every tree")
{
    const auto g = expand_to_G(build_H({2, 1}));
    std::map<Vertex, std::vector<Dist>> rows;
    for (Vertex v = 0; v < g.graph.num_vertices(); ++v) {
        if (g.roles[v] != VertexRole::TreeLeaf)
            continue;
        const Vertex o = g.owner_low[v];
        auto it = rows.find(o);
        if (it == rows.end())
            it = rows.emplace(o, distances_from(g.graph, o)).first;
        CHECK(it->second[v] == 3);
    }
}

// Level i can reach level j > i without backtracking iff u and v agree outside the
// coordinates that are free between them.
static bool monotone_pair(const FamilyInstance& h, Vertex u, Vertex v)
{
    const auto L = h.params.level_size();
    const unsigned i = u / L, j = v / L;
    std::set<unsigned> free;
    for (unsigned t = i; t < j; ++t)
        free.insert(h.params.free_coordinate(t) - 1);
    const auto cu = h.coords_of(u % L), cv = h.coords_of(v % L);
    for (unsigned k = 0; k < h.params.ell; ++k)
        if (cu[k] != cv[k] && !free.count(k))
            return false;
    return true;
}

TEST_CASE("level distances survive expansion on monotone pairs")
{
    for (unsigned b : {1u, 2u})
        for (unsigned ell : {1u, 2u}) {
            CAPTURE(b);
            CAPTURE(ell);
            const auto h = build_H({b, ell});
            const auto g = expand_to_G(h);
            const auto dh = all_pairs(h.graph);
            const auto L = h.params.level_size();
            std::uint64_t equal = 0, eq_needed = 0, shortcut = 0, backtrack = 0, same_level = 0;
            for (Vertex u = 0; u < h.graph.num_vertices(); ++u) {
                const auto row = distances_from(g.graph, g.level_ids[u]);
                for (Vertex v = 0; v < h.graph.num_vertices(); ++v) {
                    const Dist dg = row[g.level_ids[v]];
                    if (u / L < v / L && monotone_pair(h, u, v)) {
                        ++eq_needed;
                        equal += dg == dh(u, v);
                    } else if (u / L < v / L) {
                        // Backtracking paths cut through a shared tree below its root.
                        ++backtrack;
                        shortcut += dg < dh(u, v) && dg >= dh(u, v) - 4;
                    } else if (u / L == v / L && u != v) {
                        ++same_level;
                        shortcut += dg < dh(u, v);
                    }
                }
            }
            CHECK(eq_needed > 0);
            CHECK(equal == eq_needed);
            CHECK(shortcut == backtrack + same_level);
            CHECK((ell == 1) == (backtrack == 0));
        }
}

TEST_CASE("delete_level_mid")
{
    const FamilyParams p{2, 2};
    const auto h = build_H(p);
    const auto g = expand_to_G(h);

    SUBCASE("keeping everything leaves the graph unchanged")
    {
        const auto gp = delete_level_mid(g, [](auto) { return true; });
        CHECK(gp.graph == g.graph);
        CHECK(gp.kind == FamilyKind::GPrime);
        CHECK(gp.removed.empty());
    }
    SUBCASE("removing the midpoint lengthens the pair")
    {
        const std::vector<unsigned> x{1, 0}, z{3, 2}, y{2, 1};
        const auto gp = delete_level_mid(g, [&](std::span<const unsigned> c) {
            return !(c[0] == y[0] && c[1] == y[1]);
        });
        CHECK(gp.removed == std::vector<std::vector<unsigned>>{y});
        CHECK_FALSE(gp.contains(lc(2, y)));
        CHECK_THROWS_AS(gp.id_of(lc(2, y)), InvalidArgument);
        const Dist before = distances_from(g.graph, g.id_of(lc(0, x)))[g.id_of(lc(4, z))];
        const Dist after = distances_from(gp.graph, gp.id_of(lc(0, x)))[gp.id_of(lc(4, z))];
        CHECK(before == 388);
        CHECK(after > before);

        // Expected size drop: the level vertex, two trees, 2s incident subdivided edges.
        std::uint64_t drop = 1 + 2 * (2 * p.side() - 1);
        const Vertex hy = h.id_of(lc(2, y));
        for (const auto& a : h.graph.neighbors(hy))
            drop += static_cast<std::uint64_t>(a.w) - 2 * p.b - 3;
        CHECK(g.graph.num_vertices() - gp.graph.num_vertices() == drop);
        CHECK(gp.graph.max_degree() <= 3);
    }
    SUBCASE("distances only grow and a single survivor keeps things connected")
    {
        const auto gp = delete_level_mid(g, [](std::span<const unsigned> c) { return c[0] == 0 && c[1] == 0; });
        CHECK(gp.removed.size() == 15);
        for (std::uint64_t xi = 0; xi < 16; xi += 3) {
            const Vertex a = g.level_vertex(0, xi);
            const Vertex a2 = gp.level_vertex(0, xi);
            const auto before = distances_from(g.graph, a);
            const auto after = distances_from(gp.graph, a2);
            for (std::uint64_t zi = 0; zi < 16; ++zi) {
                const Dist d0 = before[g.level_vertex(4, zi)];
                const Dist d1 = after[gp.level_vertex(4, zi)];
                CHECK(is_reachable(d1));
                CHECK(d1 >= d0);
            }
        }
    }
    SUBCASE("preconditions")
    {
        CHECK_THROWS_AS(delete_level_mid(h, [](auto) { return true; }), InvalidArgument);
    }
}

TEST_CASE("role codes")
{
    for (auto r : {VertexRole::Level, VertexRole::TreeInternal, VertexRole::TreeLeaf, VertexRole::PathAux})
        CHECK(parse_role_code(role_code(r)) == r);
    CHECK_THROWS(parse_role_code('x'));
    CHECK(parse_family_kind("Gprime") == FamilyKind::GPrime);
    CHECK(std::string(to_string(FamilyKind::G)) == "G");
    CHECK_THROWS_AS(parse_family_kind("K"), InvalidArgument);
}
