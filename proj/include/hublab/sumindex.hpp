#ifndef HUBLAB_SUMINDEX_HPP_
#define HUBLAB_SUMINDEX_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hublab/builder.hpp"
#include "hublab/family.hpp"
#include "hublab/labeling.hpp"

namespace hublab {

// Shared input of the three-party game: a bit string of length m = (s/2)^ell.
struct SumIndexInstance {
    FamilyParams params;
    std::vector<std::uint8_t> bits; // bits[i] is the i-th character of the bit string

    std::uint64_t m() const noexcept;
    void validate() const;
};

std::uint64_t sumindex_length(const FamilyParams& p);
SumIndexInstance make_sumindex_instance(const FamilyParams& p, const std::string& bitstring);

// sum_i x_i (s/2)^i mod m, digit i is coordinate i+1.
std::uint64_t repr(std::span<const unsigned> x, const FamilyParams& p);
// Unique x in [0, s/2 - 1]^ell with repr(x) = a. Throws InvalidArgument when a >= m.
std::vector<unsigned> repr_decode(std::uint64_t a, const FamilyParams& p);

// G' keeping v_{ell,x} iff bits[repr(x)] = 1.
FamilyInstance build_instance_graph(const SumIndexInstance& inst, const FamilyLimits& limits = {});
FamilyInstance build_instance_graph(const SumIndexInstance& inst, const FamilyInstance& base_g);

enum class LabelingMode { Oracle, Hub };

const char* to_string(LabelingMode m) noexcept;
LabelingMode parse_labeling_mode(const std::string& s);

struct SumIndexTranscript {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    LevelCoord alice_vertex;
    LevelCoord bob_vertex;
    std::uint64_t alice_label_bits = 0;
    std::uint64_t bob_label_bits = 0;
    Dist measured_dist = kUnreachable;
    Dist d_min = 0;
    std::uint8_t decoded = 0;
    std::uint8_t expected = 0;
};

struct MessageSize {
    std::uint64_t max_label_bits = 0;
    double avg_label_bits = 0.0;
    std::uint64_t index_bits = 0; // ceil(log2 m), sent alongside each label
};

struct ProtocolOptions {
    LabelingMode mode = LabelingMode::Oracle;
    BuilderConfig hub_config; // used in Hub mode
    AllPairsOptions all_pairs;
    FamilyLimits limits;
};

// Holds G' for one bit string and the labels both parties derive from it.
// Alice's distance rows are cached across runs in Oracle mode.
class SumIndexSession {
public:
    SumIndexSession(SumIndexInstance inst, const ProtocolOptions& opts);
    SumIndexSession(SumIndexInstance inst, const FamilyInstance& base_g, const ProtocolOptions& opts);

    const SumIndexInstance& instance() const noexcept { return inst_; }
    const FamilyInstance& graph() const noexcept { return gprime_; }

    SumIndexTranscript run(std::uint64_t a, std::uint64_t b);
    MessageSize message_size() const;

private:
    void prepare();
    std::uint64_t label_bits_of(Vertex v) const;
    const std::vector<Dist>& alice_row(Vertex v);

    SumIndexInstance inst_;
    ProtocolOptions opts_;
    FamilyInstance gprime_;
    std::optional<HubLabeling> hubs_;
    Dist diameter_ = 0;
    std::map<Vertex, std::vector<Dist>> rows_;
};

// 2*ell*A + 2*sum (z_i - x_i)^2 for Alice at v_{0,2x} and Bob at v_{2ell,2z}.
Dist ideal_distance(const FamilyParams& p, std::span<const unsigned> x, std::span<const unsigned> z);

SumIndexTranscript run_protocol(const SumIndexInstance& inst, std::uint64_t a, std::uint64_t b,
                                const ProtocolOptions& opts = {});

MessageSize measure_message_size(const SumIndexInstance& inst, const ProtocolOptions& opts = {});

} // namespace hublab

#endif // HUBLAB_SUMINDEX_HPP_
