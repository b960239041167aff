#pragma once

// Sparse truncated series over the rationals: Laurent in the x-variables,
// power series in the q-variables, with explicit truncation bounds.

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "pearl/rational.hpp"

namespace pearl {

/// A coefficient was requested outside the truncation window. Signals that
/// the truncation was too small; never reported as a silent zero.
class TruncationError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

struct VariableSet {
    std::vector<std::string> x;
    std::vector<std::string> q;

    friend bool operator==(const VariableSet&, const VariableSet&) = default;
};

struct Truncation {
    int max_q_degree = 0; ///< D: bound on the total q-degree
    int max_x_abs = 0;    ///< B: bound on |exponent| of each x-variable

    friend bool operator==(const Truncation&, const Truncation&) = default;
};

/// Dense univariate truncated series in q, exact through q^max_degree.
class QSeries {
public:
    QSeries() = default;
    explicit QSeries(int max_degree) : coeffs_(static_cast<std::size_t>(max_degree) + 1) {}
    QSeries(int max_degree, std::span<const long> coefficients);

    [[nodiscard]] int max_degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    /// Throws TruncationError beyond max_degree.
    [[nodiscard]] const Rational& coefficient(int n) const;
    Rational& operator[](int n);
    [[nodiscard]] const std::vector<Rational>& coefficients() const { return coeffs_; }
    [[nodiscard]] bool is_zero() const;
    /// Same series, exact through q^d (d <= max_degree).
    [[nodiscard]] QSeries truncated(int d) const;

    QSeries& operator+=(const QSeries& o);
    QSeries& operator-=(const QSeries& o);
    QSeries& operator*=(const Rational& c);
    friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
    friend QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }
    friend QSeries operator*(QSeries a, const Rational& c) { return a *= c; }
    friend QSeries operator*(const Rational& c, QSeries a) { return a *= c; }
    /// Cauchy product, exact through the smaller of the two bounds.
    friend QSeries operator*(const QSeries& a, const QSeries& b);
    friend bool operator==(const QSeries&, const QSeries&) = default;

    [[nodiscard]] std::string to_string() const;

private:
    std::vector<Rational> coeffs_;
};

class TruncatedSeries {
public:
    /// x-exponents followed by q-exponents.
    using Key = boost::container::small_vector<std::int32_t, 16>;
    using TermMap = std::map<Key, Rational>;

    TruncatedSeries(VariableSet vars, Truncation trunc);
    static TruncatedSeries one(VariableSet vars, Truncation trunc);

    [[nodiscard]] const VariableSet& variables() const { return *vars_; }
    [[nodiscard]] const Truncation& truncation() const { return trunc_; }
    [[nodiscard]] std::size_t nx() const { return vars_->x.size(); }
    [[nodiscard]] std::size_t nq() const { return vars_->q.size(); }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    /// Terms in canonical (lexicographic exponent) order; no zeros stored.
    [[nodiscard]] const TermMap& terms() const& { return terms_; }
    /// By value on temporaries, so `for (auto& t : f().terms())` is safe.
    [[nodiscard]] TermMap terms() && { return std::move(terms_); }

    [[nodiscard]] bool in_bounds(std::span<const int> x, std::span<const int> q) const;
    [[nodiscard]] bool key_in_bounds(const Key& key) const;

    /// Adds c·x^x q^q. Throws TruncationError outside the bounds.
    void add_term(std::span<const int> x, std::span<const int> q, const Rational& c);
    void add_term(const Key& key, const Rational& c);

    /// Stored coefficient or 0. Throws TruncationError outside the bounds.
    [[nodiscard]] Rational coefficient(std::span<const int> x, std::span<const int> q) const;

    /// Coefficient of x^x as a series in the q-variables alone.
    [[nodiscard]] TruncatedSeries extract_x(std::span<const int> x) const;

    /// Collapses every q-exponent vector to its total degree.
    [[nodiscard]] QSeries specialize_q() const;

    TruncatedSeries& operator+=(const TruncatedSeries& o);
    TruncatedSeries& operator-=(const TruncatedSeries& o);
    TruncatedSeries& operator*=(const Rational& c);
    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b);

    /// Product keeping only terms inside the bounds for which
    /// keep(key) holds. `keep` must be a pure predicate on the exponent key.
    template <class Keep>
    friend TruncatedSeries multiply_filtered(const TruncatedSeries& a, const TruncatedSeries& b, Keep&& keep);

private:
    void require_compatible(const TruncatedSeries& o) const;
    [[nodiscard]] Key make_key(std::span<const int> x, std::span<const int> q) const;

    std::shared_ptr<const VariableSet> vars_;
    Truncation trunc_;
    TermMap terms_;
};

TruncatedSeries multiply(const TruncatedSeries& a, const TruncatedSeries& b);

template <class Keep>
TruncatedSeries multiply_filtered(const TruncatedSeries& a, const TruncatedSeries& b, Keep&& keep)
{
    a.require_compatible(b);
    TruncatedSeries out(a);
    out.terms_.clear();
    const std::size_t nx = a.nx();
    const std::size_t width = nx + a.nq();
    TruncatedSeries::Key key(width);
    for (const auto& [ka, ca] : a.terms_) {
        for (const auto& [kb, cb] : b.terms_) {
            bool inside = true;
            int qdeg = 0;
            for (std::size_t i = 0; i < width; ++i) {
                key[i] = ka[i] + kb[i];
                if (i < nx) {
                    if (key[i] > a.trunc_.max_x_abs || -key[i] > a.trunc_.max_x_abs) {
                        inside = false;
                        break;
                    }
                } else {
                    qdeg += key[i];
                }
            }
            if (!inside || qdeg > a.trunc_.max_q_degree || !keep(key))
                continue;
            out.terms_[key].add_product(ca, cb);
        }
    }
    std::erase_if(out.terms_, [](const auto& t) { return t.second.is_zero(); });
    return out;
}

/// The propagator P(x,q) with x = num/den, on the given q-variable:
///   -Σ_{d≥1} d x^d - Σ_{n≥1} Σ_{d|n} d (x^d + x^{-d}) q^n,
/// truncated to the series' bounds. Requires num != den and B >= 1.
TruncatedSeries propagator(const VariableSet& vars, Truncation trunc, std::size_t num_var, std::size_t den_var,
                           std::size_t q_var);

} // namespace pearl
