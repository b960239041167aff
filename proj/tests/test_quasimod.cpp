#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "golden.hpp"
#include "pearl/quasimod.hpp"

using namespace pearl;

namespace {

using Coeffs = std::map<EisensteinMonomial, Rational>;

QSeries combine(long a, const std::vector<long>& x, long b, const std::vector<long>& y)
{
    std::vector<long> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = a * x[i] + b * y[i];
    return golden::series(out);
}

const Coeffs g1_form{{{0, 0, 1}, Rational(-1, 1080)}, {{1, 1, 0}, Rational(1, 1080)},
                     {{0, 2, 0}, Rational(1, 6912)},  {{1, 0, 1}, Rational(-1, 2592)},
                     {{2, 1, 0}, Rational(1, 3456)},  {{4, 0, 0}, Rational(-1, 20736)}};
const Coeffs g2_form{{{0, 0, 1}, Rational(1, 2160)}, {{1, 1, 0}, Rational(-1, 2160)},
                     {{0, 2, 0}, Rational(1, 6912)}, {{1, 0, 1}, Rational(-1, 2592)},
                     {{2, 1, 0}, Rational(1, 3456)}, {{4, 0, 0}, Rational(-1, 20736)}};
const Coeffs total_form{{{0, 2, 0}, Rational(1, 288)},
                        {{1, 0, 1}, Rational(-1, 108)},
                        {{2, 1, 0}, Rational(1, 144)},
                        {{4, 0, 0}, Rational(-1, 864)}};

} // namespace

TEST_CASE("Eisenstein expansions")
{
    const auto e2 = eisenstein(2, 6);
    CHECK(e2.coefficient(0) == Rational(1));
    CHECK(e2.coefficient(1) == Rational(-24));
    CHECK(e2.coefficient(2) == Rational(-72));
    CHECK(e2.coefficient(3) == Rational(-96));
    CHECK(e2.coefficient(6) == Rational(-24 * 12));
    const auto e4 = eisenstein(4, 3);
    const auto e6 = eisenstein(6, 3);
    CHECK(e4.coefficient(0) == Rational(1));
    CHECK(e6.coefficient(0) == Rational(1));
    CHECK(e4.coefficient(1) == Rational(240));
    CHECK(e4.coefficient(2) == Rational(240 * 9));
    CHECK(e6.coefficient(1) == Rational(-504));
    CHECK(e6.coefficient(2) == Rational(-504 * 33));
    // E4^2 has weight 8 like E8 = 1 + 480 Σ σ7
    const auto e8 = eisenstein(4, 3) * eisenstein(4, 3);
    CHECK(e8.coefficient(1) == Rational(480));
    CHECK(e8.coefficient(2) == Rational(480 * 129));
    CHECK(eisenstein(2, 0).max_degree() == 0);
    CHECK_THROWS_AS(eisenstein(3, 5), std::invalid_argument);
    CHECK_THROWS_AS(eisenstein(8, 5), std::invalid_argument);
}

TEST_CASE("monomial basis")
{
    const std::vector<std::pair<int, std::size_t>> dims{{0, 1}, {2, 2}, {4, 4}, {6, 7}, {8, 11}, {12, 23}, {16, 41}};
    for (const auto& [w, dim] : dims)
        CHECK(eisenstein_basis(w).size() == dim);
    const auto b = eisenstein_basis(6);
    CHECK(std::is_sorted(b.begin(), b.end()));
    CHECK(b.front() == EisensteinMonomial{});
    CHECK(b.back().weight() == 6);
    CHECK(EisensteinMonomial{2, 1, 0}.to_string() == "E2^2*E4");
    CHECK(EisensteinMonomial{}.to_string() == "1");
    CHECK(required_degree(8) == 16);
    CHECK(required_degree(8, 1) == 12);
}

TEST_CASE("golden (2,1) summands decompose at weight 8")
{
    const auto g1 = golden::series(golden::g1_long);
    const auto g2 = golden::series(golden::g2_long);
    for (int n = 0; n <= 11; ++n) {
        CHECK(g1.coefficient(n) == Rational(golden::g1[static_cast<std::size_t>(n)]));
        CHECK(g2.coefficient(n) == Rational(golden::g2[static_cast<std::size_t>(n)]));
    }

    const auto r1 = decompose(g1, 8);
    REQUIRE(r1);
    CHECK(r1.decomposition->coefficients == g1_form);
    CHECK(r1.solve_rows == 11);
    CHECK(r1.verified_rows == 6);
    CHECK_FALSE(r1.decomposition->is_homogeneous());
    CHECK(r1.decomposition->weight() == 8);

    const auto r2 = decompose(g2, 8);
    REQUIRE(r2);
    CHECK(r2.decomposition->coefficients == g2_form);

    const auto r = decompose(combine(8, golden::g1_long, 16, golden::g2_long), 8);
    REQUIRE(r);
    CHECK(r.decomposition->coefficients == total_form);
    CHECK(r.decomposition->is_homogeneous());
    CHECK(r.decomposition->weight() == 8);
    CHECK(r.decomposition->to_string().find("1/288*E4^2") != std::string::npos);
}

TEST_CASE("weight profile")
{
    const auto d = *decompose(golden::series(golden::g1_long), 8).decomposition;
    const auto p = weight_profile(d);
    CHECK_FALSE(p.homogeneous);
    CHECK(p.weight == 8);
    REQUIRE(p.by_weight.size() == 2);
    const Coeffs six{{{0, 0, 1}, Rational(-1, 1080)}, {{1, 1, 0}, Rational(1, 1080)}};
    CHECK(p.by_weight.at(6).coefficients == six);
    CHECK(p.by_weight.at(8).coefficients.size() == 4);

    const auto zero = decompose(QSeries(16), 8);
    REQUIRE(zero);
    CHECK(zero.decomposition->coefficients.empty());
    const auto pz = weight_profile(*zero.decomposition);
    CHECK(pz.homogeneous);
    CHECK(pz.weight == 0);
    CHECK(pz.by_weight.empty());
}

TEST_CASE("fits are unique and reproduce the input")
{
    const auto g1 = golden::series(golden::g1_long);
    const auto a = decompose(g1, 8);
    const auto b = decompose(g1, 8, 3);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(*a.decomposition == *b.decomposition);
    CHECK(a.decomposition->evaluate(16) == g1);
    // a larger basis still finds the same polynomial
    const auto wide = decompose(eisenstein(2, 40) * eisenstein(4, 40) - eisenstein(6, 40), 12);
    REQUIRE(wide);
    const Coeffs expected{{{1, 1, 0}, Rational(1)}, {{0, 0, 1}, Rational(-1)}};
    CHECK(wide.decomposition->coefficients == expected);
}

TEST_CASE("decomposition failures")
{
    const auto short_g1 = golden::series(golden::g1);
    const auto r = decompose(short_g1, 8);
    REQUIRE_FALSE(r);
    CHECK(r.failure->kind == DecompositionFailure::Kind::insufficient_degree);
    CHECK_FALSE(decompose(short_g1, 8, 1));
    CHECK(decompose(golden::series(golden::g1_long).truncated(12), 8, 1));

    // q alone: the 1, E2 fit on q^0, q^1 predicts 3q^2
    QSeries q(8);
    q[1] = Rational(1);
    const auto bad = decompose(q, 2);
    REQUIRE_FALSE(bad);
    CHECK(bad.failure->kind == DecompositionFailure::Kind::inconsistent);
    CHECK(bad.failure->first_mismatch == 2);
    CHECK_FALSE(bad.failure->message.empty());

    CHECK_THROWS_AS(decompose(q, 3), std::invalid_argument);
    CHECK_THROWS_AS(decompose(q, -2), std::invalid_argument);
}

TEST_CASE("decomposition JSON")
{
    const auto d = *decompose(combine(8, golden::g1_long, 16, golden::g2_long), 8).decomposition;
    const auto j = to_json(d);
    CHECK(j.at("max_weight") == 8);
    CHECK(j.at("homogeneous") == true);
    CHECK(j.at("weight") == 8);
    REQUIRE(j.at("monomials").size() == 4);
    for (const auto& m : j.at("monomials")) {
        const EisensteinMonomial key{m.at("e2").get<int>(), m.at("e4").get<int>(), m.at("e6").get<int>()};
        CHECK(Rational::parse(m.at("c").get<std::string>()) == total_form.at(key));
    }
}
