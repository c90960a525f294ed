#include "hublab/sumindex.hpp"

#include <algorithm>

#include "hublab/error.hpp"

namespace hublab {

std::uint64_t sumindex_length(const FamilyParams& p)
{
    std::uint64_t m = 1;
    for (unsigned k = 0; k < p.ell; ++k)
        m *= p.side() / 2;
    return m;
}

std::uint64_t SumIndexInstance::m() const noexcept { return sumindex_length(params); }

void SumIndexInstance::validate() const
{
    params.validate();
    if (bits.size() != m())
        throw InvalidArgument("bit string must have length (s/2)^ell = " + std::to_string(m()));
}

SumIndexInstance make_sumindex_instance(const FamilyParams& p, const std::string& bitstring)
{
    SumIndexInstance inst{p, {}};
    for (char c : bitstring) {
        if (c != '0' && c != '1')
            throw InvalidArgument("bit string may only contain 0 and 1");
        inst.bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    inst.validate();
    return inst;
}

std::uint64_t repr(std::span<const unsigned> x, const FamilyParams& p)
{
    const std::uint64_t radix = p.side() / 2;
    const std::uint64_t m = sumindex_length(p);
    std::uint64_t value = 0;
    std::uint64_t weight = 1;
    for (unsigned k = 0; k < x.size(); ++k) {
        value = (value + (x[k] % m) * weight) % m;
        weight = (weight * radix) % m;
    }
    return value;
}

std::vector<unsigned> repr_decode(std::uint64_t a, const FamilyParams& p)
{
    const std::uint64_t m = sumindex_length(p);
    if (a >= m)
        throw InvalidArgument("index " + std::to_string(a) + " out of range [0, " + std::to_string(m) + ")");
    const std::uint64_t radix = p.side() / 2;
    std::vector<unsigned> x(p.ell, 0);
    for (unsigned k = 0; k < p.ell && radix > 1; ++k) {
        x[k] = static_cast<unsigned>(a % radix);
        a /= radix;
    }
    return x;
}

FamilyInstance build_instance_graph(const SumIndexInstance& inst, const FamilyInstance& base_g)
{
    inst.validate();
    if (base_g.kind != FamilyKind::G || base_g.params != inst.params)
        throw InvalidArgument("base graph must be the G instance for the same parameters");
    return delete_level_mid(base_g, [&](std::span<const unsigned> c) { return inst.bits[repr(c, inst.params)] == 1; });
}

FamilyInstance build_instance_graph(const SumIndexInstance& inst, const FamilyLimits& limits)
{
    inst.validate();
    return build_instance_graph(inst, expand_to_G(build_H(inst.params, limits), limits));
}

const char* to_string(LabelingMode m) noexcept { return m == LabelingMode::Oracle ? "oracle" : "hub"; }

LabelingMode parse_labeling_mode(const std::string& s)
{
    if (s == "oracle")
        return LabelingMode::Oracle;
    if (s == "hub")
        return LabelingMode::Hub;
    throw InvalidArgument("unknown labeling mode '" + s + "' (expected oracle or hub)");
}

Dist ideal_distance(const FamilyParams& p, std::span<const unsigned> x, std::span<const unsigned> z)
{
    Dist d = 2 * static_cast<Dist>(p.ell) * p.base_weight();
    for (unsigned k = 0; k < p.ell; ++k) {
        const Dist delta = static_cast<Dist>(z[k]) - static_cast<Dist>(x[k]);
        d += 2 * delta * delta;
    }
    return d;
}

SumIndexSession::SumIndexSession(SumIndexInstance inst, const ProtocolOptions& opts)
    : inst_(std::move(inst)), opts_(opts), gprime_(build_instance_graph(inst_, opts.limits))
{
    prepare();
}

SumIndexSession::SumIndexSession(SumIndexInstance inst, const FamilyInstance& base_g, const ProtocolOptions& opts)
    : inst_(std::move(inst)), opts_(opts), gprime_(build_instance_graph(inst_, base_g))
{
    prepare();
}

void SumIndexSession::prepare()
{
    if (opts_.mode != LabelingMode::Hub)
        return;
    // Both parties derive the same deterministic labeling from the shared bits.
    const DistanceMatrix dm = all_pairs(gprime_.graph, opts_.all_pairs);
    diameter_ = dm.diameter();
    hubs_ = build_labeling(gprime_.graph, dm, opts_.hub_config).labeling;
}

const std::vector<Dist>& SumIndexSession::alice_row(Vertex v)
{
    auto it = rows_.find(v);
    if (it == rows_.end())
        it = rows_.emplace(v, distances_from(gprime_.graph, v)).first;
    return it->second;
}

std::uint64_t SumIndexSession::label_bits_of(Vertex v) const
{
    const std::uint64_t n = gprime_.graph.num_vertices();
    if (opts_.mode == LabelingMode::Hub)
        return label_bits(hubs_->hubs(v).size(), n, diameter_);
    // Oracle "label": the vertex's full distance row.
    const auto row = distances_from(gprime_.graph, v);
    const Dist ecc = *std::max_element(row.begin(), row.end());
    return n * ceil_log2(static_cast<std::uint64_t>(std::max<Dist>(ecc, 0)) + 1);
}

SumIndexTranscript SumIndexSession::run(std::uint64_t a, std::uint64_t b)
{
    const FamilyParams& p = inst_.params;
    const std::uint64_t m = inst_.m();
    const auto x = repr_decode(a, p);
    const auto z = repr_decode(b, p);
    SumIndexTranscript t;
    t.a = a;
    t.b = b;
    t.alice_vertex = {0, x};
    t.bob_vertex = {2 * p.ell, z};
    for (auto& c : t.alice_vertex.coords)
        c *= 2;
    for (auto& c : t.bob_vertex.coords)
        c *= 2;
    const Vertex alice = gprime_.id_of(t.alice_vertex);
    const Vertex bob = gprime_.id_of(t.bob_vertex);
    const std::uint64_t index_bits = ceil_log2(m);
    t.alice_label_bits = label_bits_of(alice) + index_bits;
    t.bob_label_bits = label_bits_of(bob) + index_bits;

    // Referee: one distance evaluation, then compare with the unique-path length.
    t.measured_dist = opts_.mode == LabelingMode::Hub ? hubs_->query(alice, bob) : alice_row(alice)[bob];
    t.d_min = ideal_distance(p, x, z);
    t.decoded = t.measured_dist == t.d_min ? 1 : 0;
    t.expected = inst_.bits[(a + b) % m];
    return t;
}

MessageSize SumIndexSession::message_size() const
{
    const FamilyParams& p = inst_.params;
    MessageSize ms;
    ms.index_bits = ceil_log2(inst_.m());
    std::uint64_t total = 0, count = 0;
    for (unsigned level : {0u, 2 * p.ell}) {
        for (std::uint64_t idx = 0; idx < p.level_size(); ++idx) {
            const Vertex v = gprime_.level_vertex(level, idx);
            const std::uint64_t bits = label_bits_of(v);
            ms.max_label_bits = std::max(ms.max_label_bits, bits);
            total += bits;
            ++count;
        }
    }
    ms.avg_label_bits = count == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(count);
    return ms;
}

SumIndexTranscript run_protocol(const SumIndexInstance& inst, std::uint64_t a, std::uint64_t b,
                                const ProtocolOptions& opts)
{
    SumIndexSession session(inst, opts);
    return session.run(a, b);
}

MessageSize measure_message_size(const SumIndexInstance& inst, const ProtocolOptions& opts)
{
    return SumIndexSession(inst, opts).message_size();
}

} // namespace hublab
