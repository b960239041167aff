#pragma once

// Eisenstein series and exact decomposition of q-series as polynomials in
// E2, E4, E6.

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "pearl/rational.hpp"
#include "pearl/series.hpp"

namespace pearl {

/// E2 = 1 - 24 Σ σ1(d) q^d, E4 = 1 + 240 Σ σ3(d) q^d, E6 = 1 - 504 Σ σ5(d) q^d.
/// Throws std::invalid_argument for k not in {2, 4, 6}.
QSeries eisenstein(int k, int max_degree);

/// E2^e2 E4^e4 E6^e6.
struct EisensteinMonomial {
    int e2 = 0;
    int e4 = 0;
    int e6 = 0;

    [[nodiscard]] int weight() const { return 2 * e2 + 4 * e4 + 6 * e6; }
    [[nodiscard]] std::string to_string() const;
    /// Graded lexicographic: by weight, then (e2, e4, e6).
    friend auto operator<=>(const EisensteinMonomial& a, const EisensteinMonomial& b)
    {
        return std::make_tuple(a.weight(), a.e2, a.e4, a.e6) <=> std::make_tuple(b.weight(), b.e2, b.e4, b.e6);
    }
    friend bool operator==(const EisensteinMonomial&, const EisensteinMonomial&) = default;
};

/// Monomials of weight <= max_weight in graded lexicographic order.
std::vector<EisensteinMonomial> eisenstein_basis(int max_weight);

struct QuasimodDecomposition {
    int max_weight = 0;
    std::map<EisensteinMonomial, Rational> coefficients; ///< nonzero only

    [[nodiscard]] bool is_homogeneous() const;
    /// Largest monomial weight, 0 for the empty decomposition.
    [[nodiscard]] int weight() const;
    /// Expansion through q^max_degree.
    [[nodiscard]] QSeries evaluate(int max_degree) const;
    [[nodiscard]] std::string to_string() const;
    friend bool operator==(const QuasimodDecomposition&, const QuasimodDecomposition&) = default;
};

struct WeightProfile {
    bool homogeneous = true;
    int weight = 0;
    std::map<int, QuasimodDecomposition> by_weight;
};

WeightProfile weight_profile(const QuasimodDecomposition& d);

struct DecompositionFailure {
    enum class Kind { insufficient_degree, inconsistent };
    Kind kind = Kind::inconsistent;
    int first_mismatch = -1; ///< first q-power where the fit fails
    std::string message;
};

/// Result of decompose(): exactly one of `decomposition` / `failure` is set.
struct DecompositionResult {
    std::optional<QuasimodDecomposition> decomposition;
    std::optional<DecompositionFailure> failure;
    int solve_rows = 0;   ///< coefficients used in the linear solve
    int verified_rows = 0; ///< further coefficients checked afterwards

    explicit operator bool() const { return decomposition.has_value(); }
};

constexpr int default_guard = 5;

/// Solves for s = Σ c_m m over the weight-<=W basis on the first
/// coefficients (extended until the system has full column rank), then
/// checks every remaining coefficient through q^D. Needs at least `guard`
/// unused coefficients.
DecompositionResult decompose(const QSeries& s, int max_weight, int guard = default_guard);

/// Smallest D that decompose() accepts for weight W without extra rows.
int required_degree(int max_weight, int guard = default_guard);

nlohmann::json to_json(const QuasimodDecomposition& d);

} // namespace pearl
