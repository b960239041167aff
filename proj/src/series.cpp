#include "pearl/series.hpp"

#include <algorithm>

namespace pearl {

QSeries::QSeries(int max_degree, std::span<const long> coefficients) : QSeries(max_degree)
{
    if (coefficients.size() > coeffs_.size())
        throw TruncationError("more coefficients than the truncation allows");
    for (std::size_t i = 0; i < coefficients.size(); ++i)
        coeffs_[i] = Rational(coefficients[i]);
}

const Rational& QSeries::coefficient(int n) const
{
    if (n < 0 || n > max_degree())
        throw TruncationError("q^" + std::to_string(n) + " requested from a series exact through q^"
                              + std::to_string(max_degree()));
    return coeffs_[static_cast<std::size_t>(n)];
}

Rational& QSeries::operator[](int n)
{
    if (n < 0 || n > max_degree())
        throw TruncationError("q^" + std::to_string(n) + " outside truncation q^" + std::to_string(max_degree()));
    return coeffs_[static_cast<std::size_t>(n)];
}

bool QSeries::is_zero() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c.is_zero(); });
}

QSeries QSeries::truncated(int d) const
{
    if (d > max_degree())
        throw TruncationError("cannot extend a series beyond its truncation");
    QSeries out(d);
    std::copy_n(coeffs_.begin(), static_cast<std::size_t>(d) + 1, out.coeffs_.begin());
    return out;
}

QSeries& QSeries::operator+=(const QSeries& o)
{
    if (o.max_degree() != max_degree())
        throw std::invalid_argument("adding q-series with different truncations");
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] += o.coeffs_[i];
    return *this;
}

QSeries& QSeries::operator-=(const QSeries& o)
{
    if (o.max_degree() != max_degree())
        throw std::invalid_argument("subtracting q-series with different truncations");
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] -= o.coeffs_[i];
    return *this;
}

QSeries& QSeries::operator*=(const Rational& c)
{
    for (auto& x : coeffs_)
        x *= c;
    return *this;
}

QSeries operator*(const QSeries& a, const QSeries& b)
{
    const int d = std::min(a.max_degree(), b.max_degree());
    QSeries out(d);
    for (int i = 0; i <= d; ++i) {
        if (a.coeffs_[static_cast<std::size_t>(i)].is_zero())
            continue;
        for (int j = 0; i + j <= d; ++j)
            out.coeffs_[static_cast<std::size_t>(i + j)].add_product(a.coeffs_[static_cast<std::size_t>(i)],
                                                                     b.coeffs_[static_cast<std::size_t>(j)]);
    }
    return out;
}

std::string QSeries::to_string() const
{
    std::string out;
    for (int n = 0; n <= max_degree(); ++n) {
        const auto& c = coeffs_[static_cast<std::size_t>(n)];
        if (c.is_zero())
            continue;
        if (!out.empty())
            out += c.sign() < 0 ? " - " : " + ";
        else if (c.sign() < 0)
            out += "-";
        const Rational mag = c.sign() < 0 ? -c : c;
        if (n == 0 || !(mag == Rational(1)))
            out += mag.to_short_string();
        if (n > 0)
            out += n == 1 ? "q" : "q^" + std::to_string(n);
    }
    if (out.empty())
        out = "0";
    return out + " + O(q^" + std::to_string(max_degree() + 1) + ")";
}

TruncatedSeries::TruncatedSeries(VariableSet vars, Truncation trunc)
    : vars_(std::make_shared<const VariableSet>(std::move(vars))), trunc_(trunc)
{
    if (trunc_.max_q_degree < 0 || trunc_.max_x_abs < 0)
        throw std::invalid_argument("negative truncation bound");
}

TruncatedSeries TruncatedSeries::one(VariableSet vars, Truncation trunc)
{
    TruncatedSeries s(std::move(vars), trunc);
    s.terms_.emplace(Key(s.nx() + s.nq(), 0), Rational(1));
    return s;
}

bool TruncatedSeries::in_bounds(std::span<const int> x, std::span<const int> q) const
{
    if (x.size() != nx() || q.size() != nq())
        throw std::invalid_argument("exponent vector length does not match the variable declaration");
    for (int e : x)
        if (e > trunc_.max_x_abs || -e > trunc_.max_x_abs)
            return false;
    int total = 0;
    for (int e : q) {
        if (e < 0)
            return false;
        total += e;
    }
    return total <= trunc_.max_q_degree;
}

bool TruncatedSeries::key_in_bounds(const Key& key) const
{
    int total = 0;
    for (std::size_t i = 0; i < key.size(); ++i) {
        if (i < nx()) {
            if (key[i] > trunc_.max_x_abs || -key[i] > trunc_.max_x_abs)
                return false;
        } else {
            if (key[i] < 0)
                return false;
            total += key[i];
        }
    }
    return total <= trunc_.max_q_degree;
}

TruncatedSeries::Key TruncatedSeries::make_key(std::span<const int> x, std::span<const int> q) const
{
    Key key;
    key.reserve(x.size() + q.size());
    key.insert(key.end(), x.begin(), x.end());
    key.insert(key.end(), q.begin(), q.end());
    return key;
}

void TruncatedSeries::add_term(std::span<const int> x, std::span<const int> q, const Rational& c)
{
    if (!in_bounds(x, q))
        throw TruncationError("term outside the truncation bounds");
    add_term(make_key(x, q), c);
}

void TruncatedSeries::add_term(const Key& key, const Rational& c)
{
    if (key.size() != nx() + nq())
        throw std::invalid_argument("key length does not match the variable declaration");
    if (!key_in_bounds(key))
        throw TruncationError("term outside the truncation bounds");
    if (c.is_zero())
        return;
    auto [it, inserted] = terms_.try_emplace(key, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

Rational TruncatedSeries::coefficient(std::span<const int> x, std::span<const int> q) const
{
    if (!in_bounds(x, q))
        throw TruncationError("coefficient requested outside the truncation bounds (D="
                              + std::to_string(trunc_.max_q_degree) + ", B=" + std::to_string(trunc_.max_x_abs)
                              + ")");
    auto it = terms_.find(make_key(x, q));
    return it == terms_.end() ? Rational(0) : it->second;
}

TruncatedSeries TruncatedSeries::extract_x(std::span<const int> x) const
{
    if (x.size() != nx())
        throw std::invalid_argument("x-exponent vector length does not match the variable declaration");
    for (int e : x)
        if (e > trunc_.max_x_abs || -e > trunc_.max_x_abs)
            throw TruncationError("x-exponent outside the truncation bounds");
    TruncatedSeries out(VariableSet{{}, vars_->q}, Truncation{trunc_.max_q_degree, 0});
    for (const auto& [key, c] : terms_) {
        if (!std::equal(x.begin(), x.end(), key.begin()))
            continue;
        out.terms_.emplace(Key(key.begin() + static_cast<std::ptrdiff_t>(nx()), key.end()), c);
    }
    return out;
}

QSeries TruncatedSeries::specialize_q() const
{
    QSeries out(trunc_.max_q_degree);
    for (const auto& [key, c] : terms_) {
        int total = 0;
        for (std::size_t i = nx(); i < key.size(); ++i)
            total += key[i];
        out[total] += c;
    }
    return out;
}

void TruncatedSeries::require_compatible(const TruncatedSeries& o) const
{
    if (!(vars_ == o.vars_ || *vars_ == *o.vars_))
        throw std::invalid_argument("series have different variable declarations");
    if (!(trunc_ == o.trunc_))
        throw std::invalid_argument("series have different truncation bounds");
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o)
{
    require_compatible(o);
    for (const auto& [key, c] : o.terms_)
        add_term(key, c);
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o)
{
    require_compatible(o);
    for (const auto& [key, c] : o.terms_)
        add_term(key, -c);
    return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const Rational& c)
{
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [key, v] : terms_)
        v *= c;
    return *this;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b)
{
    return multiply_filtered(a, b, [](const TruncatedSeries::Key&) { return true; });
}

bool operator==(const TruncatedSeries& a, const TruncatedSeries& b)
{
    return *a.vars_ == *b.vars_ && a.trunc_ == b.trunc_ && a.terms_ == b.terms_;
}

TruncatedSeries multiply(const TruncatedSeries& a, const TruncatedSeries& b) { return a * b; }

TruncatedSeries propagator(const VariableSet& vars, Truncation trunc, std::size_t num_var, std::size_t den_var,
                           std::size_t q_var)
{
    if (num_var == den_var)
        throw std::invalid_argument("propagator needs two distinct x-variables");
    if (num_var >= vars.x.size() || den_var >= vars.x.size() || q_var >= vars.q.size())
        throw std::invalid_argument("propagator variable index out of range");
    if (trunc.max_x_abs < 1)
        throw std::invalid_argument("propagator needs an x-bound B >= 1");

    TruncatedSeries out(vars, trunc);
    const std::size_t nx = vars.x.size();
    TruncatedSeries::Key key(nx + vars.q.size(), 0);
    auto put = [&](int e, int n, long c) {
        key[num_var] = e;
        key[den_var] = -e;
        key[nx + q_var] = n;
        out.add_term(key, Rational(c));
    };
    const int B = trunc.max_x_abs;
    for (int d = 1; d <= B; ++d)
        put(d, 0, -d);
    for (int n = 1; n <= trunc.max_q_degree; ++n)
        for (int d = 1; d <= std::min(n, B); ++d)
            if (n % d == 0) {
                put(d, n, -d);
                put(-d, n, -d);
            }
    return out;
}

} // namespace pearl
