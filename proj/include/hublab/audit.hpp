#ifndef HUBLAB_AUDIT_HPP_
#define HUBLAB_AUDIT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hublab/family.hpp"
#include "hublab/labeling.hpp"

namespace hublab {

// (x, y, z) with y = (x + z) / 2: source v_{0,x}, midpoint v_{ell,y}, target v_{2ell,z}.
struct Triplet {
    std::vector<unsigned> x;
    std::vector<unsigned> y;
    std::vector<unsigned> z;

    friend auto operator<=>(const Triplet&, const Triplet&) = default;
};

struct TripletFailure {
    Triplet triplet;
    std::string reason;
};

struct TripletReport {
    std::uint64_t total = 0;   // s^ell * (s/2)^ell
    std::uint64_t checked = 0;
    std::uint64_t unique_ok = 0;
    std::uint64_t midpoint_ok = 0;
    bool sampled = false;
    std::vector<TripletFailure> failures; // sorted by triplet
    // Path length of every checked triplet equals 2*ell*A + 2*sum((z-x)/2)^2.
    std::uint64_t length_ok = 0;

    bool passed() const noexcept { return failures.empty() && checked == unique_ok && checked == midpoint_ok; }
};

struct AuditMode {
    std::optional<std::uint64_t> sample; // number of sampled (x, z) pairs; nullopt = exhaustive
    std::uint64_t seed = 0;
};

// Every parity-matching (x, z) has a unique shortest path through v_{ell,(x+z)/2}.
TripletReport audit_lemma1(const FamilyInstance& inst, const AuditMode& mode = {});

// All parity-matching triplets in canonical order (x index major, then z index).
std::vector<Triplet> enumerate_triplets(const FamilyParams& p);

struct CountingReport {
    std::uint64_t lhs = 0; // sum_v |S*_v|
    std::uint64_t rhs = 0; // (s^ell)^2 / 2^ell
    std::uint64_t triplets = 0;
    std::uint64_t membership_ok = 0;
    std::vector<Triplet> membership_failures;
    CoverReport cover;
    bool pass = false;
};

// Requires hl to cover inst.graph; throws VerificationError otherwise.
CountingReport audit_counting(const FamilyInstance& inst, const HubLabeling& hl, const AllPairsOptions& opts = {});

// Same, against a precomputed distance table.
CountingReport audit_counting(const FamilyInstance& inst, const HubLabeling& hl, const DistanceMatrix& dm,
                              unsigned threads = 1);

} // namespace hublab

#endif // HUBLAB_AUDIT_HPP_
