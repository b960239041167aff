#pragma once

// Brute-force enumeration of curled pearl chains: leaky covers of the
// tropical elliptic curve (a circle with marked points p_0..p_n) by a
// pearl chain, with a fixed order and multidegree.
//
// Conventions. Places 1..n on the circle carry the vertices (vertex i sits
// at place Ω(i)); p_0 is at place 0. Each edge is traversed from its start
// endpoint, the one earlier in Ω, to its other endpoint. Travelling in the
// + direction from place s to place t does not cross p_0 when s < t; going
// in the - direction crosses it once. Every extra winding adds one crossing.
// Flag signs: the start flag of an edge points in its direction d, the end
// flag in -d; the leaking at a vertex is Σ_{+ flags} w - Σ_{- flags} w.

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "pearl/feynman.hpp"
#include "pearl/pearls.hpp"
#include "pearl/rational.hpp"

namespace pearl {

enum class Direction : std::int8_t { plus = 1, minus = -1 };

struct EdgeCover {
    int weight = 1;                  ///< expansion factor w_k
    Direction direction = Direction::plus;
    int windings = 0;                ///< m_k
    int crossings = 0;               ///< c_k = baseline + m_k

    friend bool operator==(const EdgeCover&, const EdgeCover&) = default;
};

struct CoverDatum {
    std::vector<EdgeCover> edges;    ///< indexed like the chain's edges

    [[nodiscard]] std::vector<int> multidegree() const; ///< a_k = c_k w_k
    [[nodiscard]] int degree() const;                   ///< Σ a_k
    [[nodiscard]] std::uint64_t multiplicity() const;   ///< ∏ w_k
    friend bool operator==(const CoverDatum&, const CoverDatum&) = default;
};

/// Crossings of p_0 from start place s to end place t going in direction d
/// with no extra windings.
int baseline_crossings(int start_place, int end_place, Direction d);

/// Start endpoint (earlier in Ω) of edge k.
std::size_t edge_start(const PearlChain& chain, const Order& order, std::size_t k);
std::size_t edge_end(const PearlChain& chain, const Order& order, std::size_t k);

struct CoverEnumeration {
    std::vector<CoverDatum> covers;
    mpz_class count;      ///< Σ multiplicity
    int weight_cap = 0;   ///< bound used for edges with zero crossings
};

/// All covers of type (P, Ω, v) with multidegree exactly `a`. Edges with
/// a_k = 0 have weight at most Σa + Σ|v| + extra_weight_cap.
CoverEnumeration enumerate_covers(const PearlChain& chain, const Order& order, const LeakingVector& leak,
                                  std::span<const int> multidegree, int extra_weight_cap = 0);

/// N^v_{P,Ω,a} for every multidegree a with 1 <= Σa <= D in one sweep;
/// agrees with enumerate_covers(...).count on each a.
std::map<std::vector<int>, mpz_class> cover_counts_by_multidegree(const PearlChain& chain, const Order& order,
                                                                  const LeakingVector& leak, int max_degree,
                                                                  int extra_weight_cap = 0);

/// Visits every cover of type (P, Ω, v) with 1 <= Σa <= D.
void for_each_cover(const PearlChain& chain, const Order& order, const LeakingVector& leak, int max_degree,
                    const std::function<void(const CoverDatum&)>& visit, int extra_weight_cap = 0);

struct ArcDegreeProfile {
    /// degrees[j] = local degree over the open arc from place j to j+1
    /// (the last arc runs from place n back to p_0).
    std::vector<int> degrees;
    int min_degree = 0;
};

ArcDegreeProfile arc_degree_profile(const CoverDatum& cover, const PearlChain& chain, const Order& order);

/// Counts by degree over p_0 for one pearl chain, summed over all orders and
/// leaking vectors of Δ.
struct CoverCountReport {
    GeneratingSeries labeled;               ///< Σ counts; divided by |Aut| when normalized
    std::uint64_t automorphisms = 1;
    bool orbit_counts = false;
    /// Per degree: number of Aut(P)-orbits of labeled covers, each counted
    /// with ∏w.
    std::vector<mpz_class> orbit_count;
    /// Per degree: Σ over orbits of ∏w / |Stab|.
    std::vector<Rational> weighted_orbit_count;
    /// Degrees d1 at which some cover has min arc degree != Σa.
    std::vector<int> degree_mismatch;
};

CoverCountReport count_covers_by_degree(const PearlChain& chain, const LeakyDegree& delta, int max_degree,
                                        bool normalize, bool orbit_counts);
CoverCountReport count_covers_by_degree_serial(const PearlChain& chain, const LeakyDegree& delta, int max_degree,
                                               bool normalize, bool orbit_counts);

/// Floor diagram of the tropical stable map a cover comes from: floors are
/// the white vertices, elevators the edges, marked points on elevators the
/// black vertices.
struct FloorDiagram {
    struct Floor {
        int point = 0;                 ///< place of the white vertex, 1-based
        std::string vertex;
        int leak = 0;
        std::vector<std::string> elevators_in;  ///< flags pointing in -
        std::vector<std::string> elevators_out; ///< flags pointing in +
    };
    struct Elevator {
        std::string edge;
        int weight = 1;
        int crossings = 0;
        int marked_point = 0;          ///< place of the black vertex, 1-based
        std::string marked_vertex;
        int floor_point = 0;
        /// Direction of travel from the floor to the marked point.
        Direction orientation = Direction::plus;
    };
    std::vector<Floor> floors;
    std::vector<Elevator> elevators;
    std::uint64_t multiplicity = 1;
};

FloorDiagram export_floor_diagram(const CoverDatum& cover, const PearlChain& chain, const Order& order,
                                  const LeakingVector& leak);

struct ContractedCover {
    PearlChain chain;
    Order order;
    LeakingVector leak;
    CoverDatum cover;
};

/// Shrinks floors to white vertices and markings to black vertices. Vertex
/// order of the result: floors in diagram order, then marked vertices by
/// place; edges in elevator order.
ContractedCover contract_floor_diagram(const FloorDiagram& diagram);

nlohmann::json to_json(const FloorDiagram& diagram);
FloorDiagram floor_diagram_from_json(const nlohmann::json& j);

} // namespace pearl
