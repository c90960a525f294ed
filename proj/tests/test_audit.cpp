#include <doctest.h>

#include <algorithm>
#include <set>

#include "hublab/audit.hpp"
#include "hublab/builder.hpp"
#include "hublab/error.hpp"
#include "hublab/family.hpp"
#include "support/test_support.hpp"

using namespace hublab;
using namespace testsupport;

TEST_CASE("triplet enumeration")
{
    for (unsigned b : {1u, 2u})
        for (unsigned ell : {1u, 2u, 3u}) {
            const FamilyParams p{b, ell};
            const auto t = enumerate_triplets(p);
            std::uint64_t expect = 1;
            for (unsigned k = 0; k < ell; ++k)
                expect *= p.side() * (p.side() / 2);
            CHECK(t.size() == expect);
            std::set<Triplet> uniq(t.begin(), t.end());
            CHECK(uniq.size() == t.size());
            for (const auto& tr : t)
                for (unsigned k = 0; k < ell; ++k) {
                    CHECK((tr.z[k] - tr.x[k]) % 2 == 0);
                    CHECK(2 * tr.y[k] == tr.x[k] + tr.z[k]);
                    CHECK(tr.z[k] < p.side());
                }
        }
    const auto t = enumerate_triplets({2, 2});
    CHECK(std::find(t.begin(), t.end(), Triplet{{1, 0}, {2, 1}, {3, 2}}) != t.end());
    CHECK(t.front() == Triplet{{0, 0}, {0, 0}, {0, 0}});
}

TEST_CASE("lemma audit is exhaustive and clean on H and G")
{
    for (unsigned b : {1u, 2u})
        for (unsigned ell : {1u, 2u}) {
            CAPTURE(b);
            CAPTURE(ell);
            const auto h = build_H({b, ell});
            const auto g = expand_to_G(h);
            for (const auto* inst : {&h, &g}) {
                const auto r = audit_lemma1(*inst);
                CHECK(r.passed());
                CHECK_FALSE(r.sampled);
                CHECK(r.checked == r.total);
                CHECK(r.total == enumerate_triplets({b, ell}).size());
                CHECK(r.length_ok == r.checked);
                CHECK(r.failures.empty());
            }
        }
    const auto r11 = audit_lemma1(build_H({1, 1}));
    CHECK(r11.total == 2);
    CHECK(r11.checked == 2);
}

TEST_CASE("lemma audit agrees with path enumeration on H_{1,2}")
{
    const auto h = build_H({1, 2});
    const Dist A = h.params.base_weight();
    for (const auto& t : enumerate_triplets(h.params)) {
        const auto e = enumerate_paths(h.graph, h.id_of({0, t.x}), h.id_of({4, t.z}));
        CHECK(e.count == 1);
        const Vertex mid = h.id_of({2, t.y});
        CHECK(std::count(e.paths.front().begin(), e.paths.front().end(), mid) == 1);
        Dist expect = 2 * 2 * A;
        for (unsigned k = 0; k < 2; ++k) {
            const Dist half = (static_cast<Dist>(t.z[k]) - static_cast<Dist>(t.x[k])) / 2;
            expect += 2 * half * half;
        }
        CHECK(e.best == expect);
    }
}

TEST_CASE("sampled lemma audit")
{
    const auto g = expand_to_G(build_H({2, 2}));
    AuditMode m;
    m.sample = 20;
    m.seed = 4;
    const auto r = audit_lemma1(g, m);
    CHECK(r.sampled);
    CHECK(r.checked == 20);
    CHECK(r.total == 64);
    CHECK(r.passed());
    const auto again = audit_lemma1(g, m);
    CHECK(again.checked == r.checked);
    m.sample = 1000;
    CHECK(audit_lemma1(g, m).checked == 64);
}

TEST_CASE("lemma audit reports broken instances")
{
    // Flatten every weight to A: ties everywhere.
    auto h = build_H({2, 1});
    std::vector<Edge> flat;
    for (const auto& e : h.graph.edges())
        flat.push_back({e.u, e.v, h.params.base_weight()});
    h.graph = WeightedGraph(h.graph.num_vertices(), std::move(flat));
    const auto r = audit_lemma1(h);
    CHECK_FALSE(r.passed());
    CHECK_FALSE(r.failures.empty());
    CHECK(std::is_sorted(r.failures.begin(), r.failures.end(),
                         [](const TripletFailure& a, const TripletFailure& b) { return a.triplet < b.triplet; }));
    CHECK_FALSE(r.failures.front().reason.empty());

    const auto gp = delete_level_mid(expand_to_G(build_H({1, 1})), [](auto) { return true; });
    CHECK_THROWS_AS(audit_lemma1(gp), InvalidArgument);
}

TEST_CASE("counting audit")
{
    SUBCASE("full labeling on G_{1,1}")
    {
        const auto g = expand_to_G(build_H({1, 1}));
        const auto dm = all_pairs(g.graph);
        const auto r = audit_counting(g, baseline_full(dm));
        CHECK(r.pass);
        CHECK(r.rhs == 2);
        CHECK(r.triplets == 2);
        CHECK(r.membership_ok == 2);
        CHECK(r.lhs >= r.rhs);
        CHECK(r.cover.valid);
    }
    SUBCASE("pipeline output on G_{1,1} and H_{2,2}")
    {
        const auto g = expand_to_G(build_H({1, 1}));
        const auto pr = run_pipeline(g.graph, {0, 3});
        const auto r = audit_counting(g, pr.labeling);
        CHECK(r.pass);
        CHECK(r.membership_failures.empty());

        const auto h = build_H({2, 2});
        const auto ph = run_pipeline(h.graph, {3, 3});
        const auto rh = audit_counting(h, ph.labeling);
        CHECK(rh.rhs == 64);
        CHECK(rh.triplets == 64);
        CHECK(rh.membership_ok == 64);
        CHECK(rh.lhs >= 64);
        CHECK(rh.pass);
    }
    SUBCASE("random valid labelings")
    {
        Rng rng(61);
        const auto h = build_H({1, 2});
        const auto dm = all_pairs(h.graph);
        const auto full = baseline_full(dm);
        for (int trial = 0; trial < 10; ++trial) {
            // Full sets for a random half of the vertices, pipeline-free.
            std::bernoulli_distribution coin(0.5);
            std::vector<std::vector<HubEntry>> sets(h.graph.num_vertices());
            std::vector<char> lean(sets.size());
            for (Vertex v = 0; v < sets.size(); ++v) {
                lean[v] = coin(rng);
                if (lean[v])
                    sets[v].push_back({v, 0});
                else
                    sets[v].assign(full.hubs(v).begin(), full.hubs(v).end());
            }
            // Lean vertices must be stored by everyone else.
            for (Vertex v = 0; v < sets.size(); ++v)
                if (lean[v])
                    for (Vertex u = 0; u < sets.size(); ++u)
                        if (u != v)
                            sets[u].push_back({v, dm(u, v)});
            const HubLabeling hl(std::move(sets));
            REQUIRE(verify_cover(hl, dm).valid);
            const auto r = audit_counting(h, hl, dm);
            CHECK(r.pass);
            CHECK(r.membership_ok == r.triplets);
        }
    }
    SUBCASE("invalid labeling is an error")
    {
        const auto h = build_H({1, 1});
        std::vector<std::vector<HubEntry>> self(h.graph.num_vertices());
        for (Vertex v = 0; v < self.size(); ++v)
            self[v] = {{v, 0}};
        CHECK_THROWS_AS(audit_counting(h, HubLabeling(std::move(self))), VerificationError);
    }
}
