#include "pearl/quasimod.hpp"

#include <algorithm>
#include <stdexcept>

namespace pearl {

namespace {

mpz_class sigma(int power, int n)
{
    mpz_class total = 0;
    for (int d = 1; d <= n; ++d) {
        if (n % d != 0)
            continue;
        mpz_class t;
        mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(power));
        total += t;
    }
    return total;
}

QSeries power(const QSeries& base, int exponent, int max_degree)
{
    QSeries out(max_degree);
    out[0] = Rational(1);
    for (int i = 0; i < exponent; ++i)
        out = out * base;
    return out;
}

} // namespace

QSeries eisenstein(int k, int max_degree)
{
    long scale = 0;
    int sigma_power = 0;
    switch (k) {
    case 2: scale = -24; sigma_power = 1; break;
    case 4: scale = 240; sigma_power = 3; break;
    case 6: scale = -504; sigma_power = 5; break;
    default: throw std::invalid_argument("Eisenstein series index must be 2, 4 or 6");
    }
    if (max_degree < 0)
        throw std::invalid_argument("negative q-degree bound");
    QSeries out(max_degree);
    out[0] = Rational(1);
    for (int n = 1; n <= max_degree; ++n)
        out[n] = Rational(mpz_class(sigma(sigma_power, n) * scale));
    return out;
}

std::string EisensteinMonomial::to_string() const
{
    std::string out;
    auto factor = [&](const char* name, int e) {
        if (e == 0)
            return;
        if (!out.empty())
            out += "*";
        out += name;
        if (e > 1)
            out += "^" + std::to_string(e);
    };
    factor("E2", e2);
    factor("E4", e4);
    factor("E6", e6);
    return out.empty() ? "1" : out;
}

std::vector<EisensteinMonomial> eisenstein_basis(int max_weight)
{
    std::vector<EisensteinMonomial> basis;
    for (int e6 = 0; 6 * e6 <= max_weight; ++e6)
        for (int e4 = 0; 6 * e6 + 4 * e4 <= max_weight; ++e4)
            for (int e2 = 0; 6 * e6 + 4 * e4 + 2 * e2 <= max_weight; ++e2)
                basis.push_back({e2, e4, e6});
    std::sort(basis.begin(), basis.end());
    return basis;
}

bool QuasimodDecomposition::is_homogeneous() const
{
    if (coefficients.empty())
        return true;
    const int w = coefficients.begin()->first.weight();
    return std::all_of(coefficients.begin(), coefficients.end(),
                       [w](const auto& t) { return t.first.weight() == w; });
}

int QuasimodDecomposition::weight() const
{
    int w = 0;
    for (const auto& [m, c] : coefficients)
        w = std::max(w, m.weight());
    return w;
}

QSeries QuasimodDecomposition::evaluate(int max_degree) const
{
    const auto e2 = eisenstein(2, max_degree);
    const auto e4 = eisenstein(4, max_degree);
    const auto e6 = eisenstein(6, max_degree);
    QSeries out(max_degree);
    for (const auto& [m, c] : coefficients)
        out += c * (power(e2, m.e2, max_degree) * power(e4, m.e4, max_degree) * power(e6, m.e6, max_degree));
    return out;
}

std::string QuasimodDecomposition::to_string() const
{
    if (coefficients.empty())
        return "0";
    std::string out;
    for (const auto& [m, c] : coefficients) {
        const bool negative = c.sign() < 0;
        if (out.empty())
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        out += (negative ? -c : c).to_short_string() + "*" + m.to_string();
    }
    return out;
}

WeightProfile weight_profile(const QuasimodDecomposition& d)
{
    WeightProfile profile;
    profile.homogeneous = d.is_homogeneous();
    profile.weight = d.weight();
    for (const auto& [m, c] : d.coefficients) {
        auto& part = profile.by_weight[m.weight()];
        part.max_weight = m.weight();
        part.coefficients.emplace(m, c);
    }
    return profile;
}

int required_degree(int max_weight, int guard)
{
    return static_cast<int>(eisenstein_basis(max_weight).size()) + guard;
}

DecompositionResult decompose(const QSeries& s, int max_weight, int guard)
{
    if (max_weight < 0 || max_weight % 2 != 0)
        throw std::invalid_argument("maximal weight must be a nonnegative even integer");
    const auto basis = eisenstein_basis(max_weight);
    const std::size_t dim = basis.size();
    const int D = s.max_degree();
    DecompositionResult result;

    auto fail = [&](DecompositionFailure::Kind kind, int at, std::string msg) {
        result.failure = DecompositionFailure{kind, at, std::move(msg)};
        return result;
    };
    if (D < static_cast<int>(dim) + guard)
        return fail(DecompositionFailure::Kind::insufficient_degree, -1,
                    "weight " + std::to_string(max_weight) + " needs the series through q^"
                        + std::to_string(required_degree(max_weight, guard)));

    const auto e2 = eisenstein(2, D);
    const auto e4 = eisenstein(4, D);
    const auto e6 = eisenstein(6, D);
    std::vector<QSeries> expansions;
    expansions.reserve(dim);
    for (const auto& m : basis)
        expansions.push_back(power(e2, m.e2, D) * power(e4, m.e4, D) * power(e6, m.e6, D));

    // Incremental row echelon form over the rows q^0, q^1, ...; each stored
    // row is [coefficients | right-hand side] with a unit pivot.
    std::vector<std::vector<Rational>> rows;
    std::vector<std::size_t> pivots;
    int next_row = 0;
    while (rows.size() < dim && next_row <= D - guard) {
        std::vector<Rational> row(dim + 1);
        for (std::size_t j = 0; j < dim; ++j)
            row[j] = expansions[j].coefficient(next_row);
        row[dim] = s.coefficient(next_row);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const Rational factor = row[pivots[r]];
            if (factor.is_zero())
                continue;
            for (std::size_t j = 0; j <= dim; ++j)
                row[j] -= factor * rows[r][j];
        }
        const auto pivot = std::find_if(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(dim),
                                        [](const Rational& x) { return !x.is_zero(); });
        if (pivot == row.begin() + static_cast<std::ptrdiff_t>(dim)) {
            if (!row[dim].is_zero())
                return fail(DecompositionFailure::Kind::inconsistent, next_row,
                            "no combination of weight <= " + std::to_string(max_weight) + " matches q^"
                                + std::to_string(next_row));
        } else {
            const std::size_t p = static_cast<std::size_t>(pivot - row.begin());
            const Rational inv = Rational(1) / row[p];
            for (auto& x : row)
                x *= inv;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                const Rational factor = rows[r][p];
                if (factor.is_zero())
                    continue;
                for (std::size_t j = 0; j <= dim; ++j)
                    rows[r][j] -= factor * row[j];
            }
            rows.push_back(std::move(row));
            pivots.push_back(p);
        }
        ++next_row;
    }
    result.solve_rows = next_row;
    if (rows.size() < dim)
        return fail(DecompositionFailure::Kind::insufficient_degree, -1,
                    "coefficient matrix does not reach full column rank before the guard window");

    QuasimodDecomposition decomposition;
    decomposition.max_weight = max_weight;
    std::vector<Rational> solution(dim);
    for (std::size_t r = 0; r < rows.size(); ++r)
        solution[pivots[r]] = rows[r][dim];
    for (std::size_t j = 0; j < dim; ++j)
        if (!solution[j].is_zero())
            decomposition.coefficients.emplace(basis[j], solution[j]);

    for (int n = 0; n <= D; ++n) {
        Rational fit;
        for (std::size_t j = 0; j < dim; ++j)
            if (!solution[j].is_zero())
                fit.add_product(solution[j], expansions[j].coefficient(n));
        if (!(fit == s.coefficient(n)))
            return fail(DecompositionFailure::Kind::inconsistent, n,
                        "fit of weight <= " + std::to_string(max_weight) + " breaks at q^" + std::to_string(n));
    }
    result.verified_rows = D + 1 - result.solve_rows;
    result.decomposition = std::move(decomposition);
    return result;
}

nlohmann::json to_json(const QuasimodDecomposition& d)
{
    nlohmann::json monomials = nlohmann::json::array();
    for (const auto& [m, c] : d.coefficients)
        monomials.push_back({{"e2", m.e2}, {"e4", m.e4}, {"e6", m.e6}, {"c", c.to_string()}});
    return {{"max_weight", d.max_weight},
            {"monomials", monomials},
            {"homogeneous", d.is_homogeneous()},
            {"weight", d.weight()}};
}

} // namespace pearl
