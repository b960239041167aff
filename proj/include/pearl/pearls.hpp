#pragma once

// Pearl chains: connected bipartite graphs whose black vertices are
// 2-valent, with no pair of parallel edges. They index every other
// computation in the library.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pearl {

enum class Color : std::uint8_t { white, black };

struct Vertex {
    std::string label;
    Color color = Color::white;
};

/// An edge by endpoint indices into the vertex list.
struct Edge {
    std::string label;
    std::size_t u = 0;
    std::size_t v = 0;
};

/// A labeled colored multigraph, not yet known to be a pearl chain.
struct Multigraph {
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
};

enum class Violation {
    bad_endpoint,      ///< edge refers to a vertex index out of range
    duplicate_label,
    not_bipartite,     ///< an edge joins two vertices of the same color
    black_valence,     ///< a black vertex is not 2-valent
    parallel_edges,    ///< two edges share an endpoint pair (2-cycle)
    disconnected,
    genus_not_positive,
    color_count,       ///< |black| != |white| + g - 1
    type_mismatch,     ///< (d2, g) differs from the requested type
};

std::string to_string(Violation v);

struct ValidationReport {
    bool valid = false;
    std::vector<std::pair<Violation, std::string>> violations;
    int d2 = 0;
    int g = 0;
};

/// Checks every pearl-chain invariant. If `expected` is given, (d2,g) must
/// match it as well.
ValidationReport validate_pearl_chain(const Multigraph& candidate,
                                      std::pair<int, int> const* expected = nullptr);

/// Thrown when a request would exceed the desk-scale enumeration bounds.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A validated pearl chain of type (d2, g). Immutable.
class PearlChain {
public:
    /// Throws std::invalid_argument listing the violations if `graph` is not a
    /// pearl chain.
    static PearlChain from_graph(Multigraph graph);

    /// Builds a chain from black vertices given as pairs of distinct white
    /// indices. Whites are x1..x_d2, blacks follow; the edges of black j are
    /// {lo, b_j} then {b_j, hi}.
    static PearlChain from_black_pairs(int d2, std::span<const std::pair<int, int>> pairs);

    [[nodiscard]] int d2() const { return d2_; }
    [[nodiscard]] int genus() const { return g_; }
    [[nodiscard]] std::size_t vertex_count() const { return graph_.vertices.size(); }
    [[nodiscard]] std::size_t edge_count() const { return graph_.edges.size(); }
    [[nodiscard]] const std::vector<Vertex>& vertices() const { return graph_.vertices; }
    [[nodiscard]] const std::vector<Edge>& edges() const { return graph_.edges; }
    [[nodiscard]] const Multigraph& graph() const { return graph_; }
    [[nodiscard]] bool is_white(std::size_t i) const { return graph_.vertices[i].color == Color::white; }
    [[nodiscard]] std::vector<std::size_t> white_vertices() const;
    [[nodiscard]] std::vector<std::size_t> black_vertices() const;
    /// Edge indices incident to vertex i, in edge order.
    [[nodiscard]] const std::vector<std::size_t>& incident_edges(std::size_t i) const { return incidence_[i]; }

    /// For each black vertex (in vertex order) the pair of white vertex
    /// indices it joins, sorted.
    [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> black_pairs() const;

    /// Canonical representative of the isomorphism class.
    [[nodiscard]] PearlChain canonical_form() const;
    /// Isomorphism invariant encoding: the lexicographically minimal sorted
    /// list of black pairs over all relabelings of the whites.
    [[nodiscard]] std::vector<std::pair<int, int>> canonical_code() const;

    /// Vertex perm[i] of the result carries vertex i of this chain, label
    /// included. Edge order and edge labels are kept.
    [[nodiscard]] PearlChain relabeled(std::span<const std::size_t> perm) const;

    friend bool operator==(const PearlChain& a, const PearlChain& b);

private:
    PearlChain() = default;
    void build_incidence();

    Multigraph graph_;
    int d2_ = 0;
    int g_ = 0;
    std::vector<std::vector<std::size_t>> incidence_;
};

/// Ω: position of each vertex among the marked points, 0-based
/// (place(i) = Ω(i) - 1).
class Order {
public:
    Order() = default;
    /// Throws std::invalid_argument unless `places` is a permutation of 0..n-1.
    explicit Order(std::vector<int> places);
    static Order identity(std::size_t n);
    /// Parses the 1-based form "Ω(1),Ω(2),...".
    static Order parse(std::string_view text);

    [[nodiscard]] std::size_t size() const { return places_.size(); }
    [[nodiscard]] int place(std::size_t vertex) const { return places_[vertex]; }
    [[nodiscard]] const std::vector<int>& places() const { return places_; }
    /// Vertex sitting at the given place.
    [[nodiscard]] std::vector<std::size_t> vertices_by_place() const;
    [[nodiscard]] std::string to_string() const;

    /// All n! orders, in lexicographic order of the place vectors. Throws
    /// ResourceLimitError for n > max_order_size.
    static std::vector<Order> all(std::size_t n);
    static constexpr std::size_t max_order_size = 10;

    friend bool operator==(const Order&, const Order&) = default;
    friend auto operator<=>(const Order&, const Order&) = default;

private:
    std::vector<int> places_;
};

/// Multiset Δ of white leakings; must sum to zero.
struct LeakyDegree {
    std::vector<int> values;

    static LeakyDegree zero(int d2) { return {std::vector<int>(static_cast<std::size_t>(d2), 0)}; }
    /// Parses "a,b,c" (whitespace tolerated).
    static LeakyDegree parse(std::string_view text);
    [[nodiscard]] int sum() const;
    [[nodiscard]] int abs_sum() const;
    [[nodiscard]] std::string to_string() const;
};

/// Integer leaking per vertex: zero on black vertices, a permutation of Δ on
/// the white ones.
struct LeakingVector {
    std::vector<int> values;

    static LeakingVector zero(std::size_t n) { return {std::vector<int>(n, 0)}; }
    [[nodiscard]] int abs_sum() const;
    [[nodiscard]] bool is_zero() const;
    friend bool operator==(const LeakingVector&, const LeakingVector&) = default;
    friend auto operator<=>(const LeakingVector&, const LeakingVector&) = default;
};

/// One chain per isomorphism class, canonical, sorted by canonical code.
/// Throws ResourceLimitError when the search space exceeds `max_candidates`.
std::vector<PearlChain> enumerate_pearl_chains(int d2, int g, std::size_t max_candidates = 20'000'000);

/// Color-preserving automorphisms as vertex permutations (perm[i] = image of i).
std::vector<std::vector<std::size_t>> automorphisms(const PearlChain& chain);

/// |Aut(P)| without listing the group.
std::uint64_t automorphism_count(const PearlChain& chain);

/// All distinct assignments of Δ to the white vertices (whites in vertex
/// order), sorted. Throws std::invalid_argument if |Δ| != d2.
std::vector<LeakingVector> leaking_vectors(const PearlChain& chain, const LeakyDegree& delta);

} // namespace pearl
