#pragma once

// Refined and unrefined Feynman integrals of labeled pearl chains, by
// coefficient extraction from products of propagator slices, and the
// generating series assembled from them.

#include <cstdint>
#include <vector>

#include "pearl/pearls.hpp"
#include "pearl/series.hpp"

namespace pearl {

struct FeynmanRequest {
    const PearlChain& chain;
    const Order& order;
    const LeakingVector& leak; ///< the extracted exponents l_1..l_n
    int max_degree;            ///< D
};

/// Per-variable x-bound used for the propagator products. Large enough that
/// no monomial contributing to x^l is ever cut off (see feynman.cpp).
int feynman_x_bound(std::size_t vertex_count, int max_degree, const LeakingVector& leak);

/// Coef_{x^l} ∏_k P(x_{k1}/x_{k2}, q_k), as a series in q_1..q_r named after
/// the edge labels. For each edge the endpoint earlier in Ω is the numerator.
TruncatedSeries refined_feynman(const FeynmanRequest& req);

/// Coef_{x^l} ∏_k P(x_{k1}/x_{k2}, q), computed with a single q-variable.
QSeries feynman(const FeynmanRequest& req);

/// feynman() for every one of the n! orders, in Order::all() order.
std::vector<QSeries> order_summands(const PearlChain& chain, const LeakingVector& leak, int max_degree);

/// Σ_Ω feynman(P, Ω, l, D). Parallel over orders.
QSeries order_sum(const PearlChain& chain, const LeakingVector& leak, int max_degree);
/// Single-threaded reference for order_sum.
QSeries order_sum_serial(const PearlChain& chain, const LeakingVector& leak, int max_degree);

struct GeneratingSeries {
    int d2 = 0;
    int g = 0;
    LeakyDegree delta;
    int max_degree = 0;
    bool normalized = false;
    /// Coefficient of q^{d1} = count in degree d1 (the degree over p_0).
    /// The q^0 coefficient is always 0.
    QSeries series;
    /// The q^0 coefficient of the raw Feynman sum. Such terms come from
    /// monomials with no base-point crossing and do not count covers; they
    /// are removed from `series` and kept here for inspection.
    Rational discarded_constant_term;
};

/// Σ_v Σ_Ω I^v_{P,Ω}(q) over all leaking vectors of Δ, divided by |Aut(P)|
/// when `normalize` is set.
GeneratingSeries pearl_chain_series(const PearlChain& chain, const LeakyDegree& delta, int max_degree,
                                    bool normalize);
GeneratingSeries pearl_chain_series_serial(const PearlChain& chain, const LeakyDegree& delta, int max_degree,
                                           bool normalize);

struct ChainContribution {
    PearlChain chain;
    std::uint64_t automorphisms = 1;
    GeneratingSeries series;
};

struct GeneratingReport {
    GeneratingSeries total;
    std::vector<ChainContribution> breakdown;
};

/// Sum of pearl_chain_series over all pearl chains of type (d2, g).
GeneratingReport generating_series(int d2, int g, const LeakyDegree& delta, int max_degree, bool normalize);

/// Throws std::invalid_argument unless |Δ| = d2 and ΣΔ = 0.
void check_leaky_degree(int d2, const LeakyDegree& delta);

} // namespace pearl
