#ifndef HUBLAB_FAMILY_HPP_
#define HUBLAB_FAMILY_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hublab/graph.hpp"

namespace hublab {

// Layered hard instances. Level i in [0, 2*ell] holds s^ell vertices, s = 2^b,
// addressed by coordinate vectors in [0, s-1]^ell.
struct FamilyParams {
    unsigned b = 1;
    unsigned ell = 1;

    void validate() const;
    std::uint64_t side() const noexcept { return std::uint64_t{1} << b; }
    std::uint64_t level_size() const noexcept;
    unsigned num_levels() const noexcept { return 2 * ell + 1; }
    // A = 3 * ell * s^2
    Dist base_weight() const noexcept { return static_cast<Dist>(3 * ell * side() * side()); }
    // Coordinate (1-based) that may change between level i and level i+1.
    unsigned free_coordinate(unsigned level) const noexcept { return level < ell ? level + 1 : 2 * ell - level; }

    friend bool operator==(const FamilyParams&, const FamilyParams&) = default;
};

struct LevelCoord {
    unsigned level = 0;
    std::vector<unsigned> coords; // coords[k-1] is coordinate k

    friend auto operator<=>(const LevelCoord&, const LevelCoord&) = default;
};

enum class FamilyKind { H, G, GPrime };

enum class VertexRole : std::uint8_t { Level, TreeInternal, TreeLeaf, PathAux };

const char* to_string(FamilyKind kind) noexcept;
FamilyKind parse_family_kind(const std::string& s);
char role_code(VertexRole r) noexcept;
VertexRole parse_role_code(char c);

struct FamilyLimits {
    std::size_t max_vertices = 5'000'000;
};

struct FamilyInstance {
    WeightedGraph graph;
    FamilyParams params;
    FamilyKind kind = FamilyKind::H;
    std::vector<VertexRole> roles;
    // level * s^ell + index -> vertex id, kNoVertex when deleted
    std::vector<Vertex> level_ids;
    // Level-ell coordinate vectors removed by delete_level_mid, in index order.
    std::vector<std::vector<unsigned>> removed;
    // Level vertices a vertex belongs to: itself for level vertices, the tree
    // owner twice for tree nodes, the lower/upper endpoint of its H-edge for path
    // vertices. Empty on instances loaded from disk.
    std::vector<Vertex> owner_low;
    std::vector<Vertex> owner_high;

    // Mixed radix, coordinate 1 least significant.
    std::uint64_t coord_index(std::span<const unsigned> coords) const;
    std::vector<unsigned> coords_of(std::uint64_t index) const;

    // Throws InvalidArgument when out of range or deleted.
    Vertex id_of(const LevelCoord& c) const;
    bool contains(const LevelCoord& c) const;
    Vertex level_vertex(unsigned level, std::uint64_t index) const
    {
        return level_ids[level * params.level_size() + index];
    }
};

// Weight of the H-edge between v_{level, lower} and v_{level+1, upper}, or nullopt
// if the vectors differ outside the free coordinate.
std::optional<Dist> level_edge_weight(const FamilyParams& p, unsigned level, std::span<const unsigned> lower,
                                      std::span<const unsigned> upper);

FamilyInstance build_H(const FamilyParams& params, const FamilyLimits& limits = {});

// Unit-weight, max-degree-3 realization of an H instance with fan-in/fan-out trees.
FamilyInstance expand_to_G(const FamilyInstance& h, const FamilyLimits& limits = {});

// Exact vertex count of expand_to_G(build_H(params)) without building it.
std::uint64_t expanded_vertex_count(const FamilyParams& params);

using KeepPredicate = std::function<bool(std::span<const unsigned>)>;

// Drops every level-ell vertex with keep(coords) == false together with its two
// trees and the subdivided paths of its incident H-edges.
FamilyInstance delete_level_mid(const FamilyInstance& g, const KeepPredicate& keep);

} // namespace hublab

#endif // HUBLAB_FAMILY_HPP_
