#include <doctest.h>

#include <string>

#include "hublab/error.hpp"
#include "hublab/sumindex.hpp"
#include "support/test_support.hpp"

using namespace hublab;
using testsupport::Rng;

namespace {

std::string bit_string(std::uint64_t value, std::uint64_t m)
{
    std::string s;
    for (std::uint64_t i = 0; i < m; ++i)
        s += (value >> i) & 1 ? '1' : '0';
    return s;
}

} // namespace

TEST_CASE("repr")
{
    const FamilyParams p{2, 2};
    CHECK(sumindex_length(p) == 4);
    CHECK(repr_decode(0, p) == std::vector<unsigned>{0, 0});
    CHECK(repr_decode(3, p) == std::vector<unsigned>{1, 1});
    CHECK(repr_decode(2, p) == std::vector<unsigned>{0, 1});
    CHECK_THROWS_AS(repr_decode(4, p), InvalidArgument);
    for (const FamilyParams q : {FamilyParams{2, 3}, FamilyParams{3, 2}, FamilyParams{1, 3}}) {
        const std::uint64_t m = sumindex_length(q);
        for (std::uint64_t a = 0; a < m; ++a)
            CHECK(repr(repr_decode(a, q), q) == a);
        // Homomorphism on the restricted domain.
        for (std::uint64_t a = 0; a < m; ++a)
            for (std::uint64_t b = 0; b < m; ++b) {
                auto x = repr_decode(a, q);
                const auto z = repr_decode(b, q);
                for (unsigned k = 0; k < q.ell; ++k)
                    x[k] += z[k];
                CHECK(repr(x, q) == (a + b) % m);
            }
    }
}

TEST_CASE("instance validation")
{
    const FamilyParams p{2, 2};
    CHECK_THROWS_AS(make_sumindex_instance(p, "101"), InvalidArgument);
    CHECK_THROWS_AS(make_sumindex_instance(p, "10a1"), InvalidArgument);
    const auto inst = make_sumindex_instance(p, "1001");
    CHECK(inst.m() == 4);
    CHECK(inst.bits == std::vector<std::uint8_t>{1, 0, 0, 1});
    CHECK_THROWS_AS(run_protocol(inst, 4, 0), InvalidArgument);
}

TEST_CASE("instance graphs")
{
    const FamilyParams p{2, 2};
    const auto base = expand_to_G(build_H(p));
    SUBCASE("all ones keeps G")
    {
        const auto g = build_instance_graph(make_sumindex_instance(p, "1111"), base);
        CHECK(g.graph == base.graph);
        CHECK(g.removed.empty());
    }
    SUBCASE("all zeros disconnects the outer levels")
    {
        const auto g = build_instance_graph(make_sumindex_instance(p, "0000"), base);
        CHECK(g.removed.size() == 16);
        const auto row = distances_from(g.graph, g.level_vertex(0, 5));
        for (std::uint64_t z = 0; z < 16; ++z)
            CHECK_FALSE(is_reachable(row[g.level_vertex(4, z)]));
    }
    SUBCASE("1010 keeps the mid-level vertices with repr 0 or 2")
    {
        const auto g = build_instance_graph(make_sumindex_instance(p, "1010"), base);
        for (unsigned y1 = 0; y1 < 4; ++y1)
            for (unsigned y2 = 0; y2 < 4; ++y2) {
                const unsigned r = (y1 + 2 * y2) % 4;
                CHECK(g.contains({2, {y1, y2}}) == (r == 0 || r == 2));
            }
        CHECK(g.removed.size() == 8);
    }
    CHECK(build_instance_graph(make_sumindex_instance(p, "1010")).graph ==
          build_instance_graph(make_sumindex_instance(p, "1010"), base).graph);
}

TEST_CASE("protocol examples")
{
    const FamilyParams p{2, 2};
    const Dist A = p.base_weight();
    SUBCASE("all ones")
    {
        SumIndexSession s(make_sumindex_instance(p, "1111"), {});
        for (std::uint64_t a = 0; a < 4; ++a)
            for (std::uint64_t b = 0; b < 4; ++b) {
                const auto t = s.run(a, b);
                CHECK(t.measured_dist == t.d_min);
                CHECK(t.decoded == 1);
                CHECK(t.alice_vertex.level == 0);
                CHECK(t.bob_vertex.level == 4);
            }
    }
    SUBCASE("a = b = 0 with bit 0 cleared")
    {
        const auto t = run_protocol(make_sumindex_instance(p, "0111"), 0, 0);
        CHECK(t.d_min == 4 * A);
        CHECK(t.d_min == 384);
        CHECK(t.measured_dist > t.d_min);
        CHECK(t.decoded == 0);
        CHECK(t.expected == 0);
    }
    SUBCASE("disconnected endpoints decode to zero")
    {
        const auto t = run_protocol(make_sumindex_instance(p, "0000"), 1, 2);
        CHECK(t.measured_dist == kUnreachable);
        CHECK(t.decoded == 0);
        CHECK(t.expected == 0);
    }
    SUBCASE("transcript coordinates")
    {
        const auto t = run_protocol(make_sumindex_instance(p, "1111"), 1, 2);
        CHECK(t.alice_vertex.coords == std::vector<unsigned>{2, 0});
        CHECK(t.bob_vertex.coords == std::vector<unsigned>{0, 2});
        CHECK(t.d_min == 4 * A + 2 * 1 + 2 * 1);
    }
}

TEST_CASE("ideal distance is the lemma path length")
{
    const FamilyParams p{2, 2};
    const auto g = expand_to_G(build_H(p));
    for (std::uint64_t a = 0; a < 4; ++a) {
        const auto x = repr_decode(a, p);
        std::vector<unsigned> x2{2 * x[0], 2 * x[1]};
        const auto row = distances_from(g.graph, g.id_of({0, x2}));
        for (std::uint64_t b = 0; b < 4; ++b) {
            const auto z = repr_decode(b, p);
            std::vector<unsigned> z2{2 * z[0], 2 * z[1]};
            CHECK(row[g.id_of({4, z2})] == ideal_distance(p, x, z));
        }
    }
}

TEST_CASE("exhaustive sweep at b = 2, l = 2")
{
    const FamilyParams p{2, 2};
    const auto base = expand_to_G(build_H(p));
    std::uint64_t runs = 0, correct = 0;
    for (std::uint64_t v = 0; v < 16; ++v) {
        SumIndexSession s(make_sumindex_instance(p, bit_string(v, 4)), base, {});
        for (std::uint64_t a = 0; a < 4; ++a)
            for (std::uint64_t b = 0; b < 4; ++b) {
                const auto t = s.run(a, b);
                ++runs;
                correct += t.decoded == t.expected;
            }
    }
    CHECK(runs == 256);
    CHECK(correct == 256);
}

TEST_CASE("sampled runs at b = 2, l = 3")
{
    const FamilyParams p{2, 3};
    const auto base = expand_to_G(build_H(p));
    Rng rng(67);
    std::uniform_int_distribution<std::uint64_t> bits(0, 255), idx(0, 7);
    for (int trial = 0; trial < 4; ++trial) {
        SumIndexSession s(make_sumindex_instance(p, bit_string(bits(rng), 8)), base, {});
        for (int k = 0; k < 8; ++k) {
            const auto t = s.run(idx(rng), idx(rng));
            CHECK(t.decoded == t.expected);
        }
    }
}

TEST_CASE("message sizes")
{
    const FamilyParams p{2, 2};
    const auto inst = make_sumindex_instance(p, "1101");
    const auto ms = measure_message_size(inst);
    CHECK(ms.index_bits == 2);
    const auto n = build_instance_graph(inst).graph.num_vertices();
    CHECK(ms.max_label_bits >= n);
    CHECK(ms.avg_label_bits <= static_cast<double>(ms.max_label_bits));
    CHECK(ms.avg_label_bits > 0.0);
}

TEST_CASE("hub mode decodes and reports finite labels")
{
    ProtocolOptions o;
    o.mode = LabelingMode::Hub;
    o.hub_config.seed = 3;
    for (const char* bits : {"1", "0"}) {
        const auto inst = make_sumindex_instance({1, 1}, bits);
        SumIndexSession s(inst, o);
        const auto t = s.run(0, 0);
        CHECK(t.decoded == t.expected);
        const auto ms = s.message_size();
        CHECK(ms.max_label_bits > 0);
        CHECK(ms.index_bits == 0);
    }
    SumIndexSession s(make_sumindex_instance({2, 1}, "10"), o);
    for (std::uint64_t a = 0; a < 2; ++a)
        for (std::uint64_t b = 0; b < 2; ++b) {
            const auto t = s.run(a, b);
            CHECK(t.decoded == t.expected);
            CHECK(t.alice_label_bits > 1);
        }
    CHECK(parse_labeling_mode("hub") == LabelingMode::Hub);
    CHECK_THROWS_AS(parse_labeling_mode("x"), InvalidArgument);
}
