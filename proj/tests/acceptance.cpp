// Acceptance run: one [PASS]/[FAIL] line per criterion, nonzero exit on any
// failure. Exact arithmetic throughout, so every tolerance is zero.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

#include "golden.hpp"
#include "pearl/cli.hpp"
#include "pearl/covers.hpp"
#include "pearl/feynman.hpp"
#include "pearl/io.hpp"
#include "pearl/parallel.hpp"
#include "pearl/quasimod.hpp"

using namespace pearl;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& detail)
{
    std::printf("[%s] %d: %s\n", ok ? "PASS" : "FAIL", n, detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

void criterion(int n, const std::function<std::pair<bool, std::string>()>& body)
{
    const auto start = std::chrono::steady_clock::now();
    std::pair<bool, std::string> r;
    try {
        r = body();
    } catch (const std::exception& e) {
        r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, " (%.1fs)", secs);
    report(n, r.first, r.second + buf);
}

std::vector<LeakyDegree> deltas(int d2)
{
    auto leaky = LeakyDegree::zero(d2);
    leaky.values[0] = -1;
    leaky.values[1] = 1;
    return {LeakyDegree::zero(d2), leaky};
}

PearlChain cyclic_chain()
{
    Multigraph g;
    g.vertices = {{"x1", Color::white}, {"x2", Color::black}, {"x3", Color::white}, {"x4", Color::black}};
    g.edges = {{"q1", 0, 1}, {"q2", 1, 2}, {"q3", 2, 3}, {"q4", 3, 0}};
    return PearlChain::from_graph(g);
}

std::pair<bool, std::string> order_multiset()
{
    const auto chain = enumerate_pearl_chains(2, 1).at(0);
    const auto summands = order_summands(chain, LeakingVector::zero(4), 11);
    const auto g1 = golden::series(golden::g1);
    const auto g2 = golden::series(golden::g2);
    int n1 = 0, n2 = 0, other = 0;
    for (const auto& s : summands)
        (s == g1 ? n1 : s == g2 ? n2 : other) += 1;
    return {summands.size() == 24 && n1 == 8 && n2 == 16 && other == 0,
            "(2,1) D=11: " + std::to_string(n1) + " x g1, " + std::to_string(n2) + " x g2, " + std::to_string(other)
                + " other of " + std::to_string(summands.size()) + " orders"};
}

std::pair<bool, std::string> eisenstein_decompositions()
{
    using Coeffs = std::map<EisensteinMonomial, Rational>;
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
    const int W = 8;
    const int D = required_degree(W);
    const auto chain = enumerate_pearl_chains(2, 1).at(0);
    const auto summands = order_summands(chain, LeakingVector::zero(4), D);
    // the two distinct summands, told apart by their q^1 coefficient
    QSeries g1(D), g2(D), total(D);
    for (const auto& s : summands) {
        (s.coefficient(1) == Rational(1) ? g1 : g2) = s;
        total += s;
    }
    bool ok = g1.truncated(11) == golden::series(golden::g1) && g2.truncated(11) == golden::series(golden::g2);
    std::string detail = "D=" + std::to_string(D);
    auto check = [&](const char* name, const QSeries& s, const Coeffs& expected, bool homogeneous) {
        const auto r = decompose(s, W);
        const bool match = r && r.decomposition->coefficients == expected
                           && r.decomposition->is_homogeneous() == homogeneous && r.verified_rows >= default_guard;
        ok = ok && match;
        detail += std::string(", ") + name + (match ? " exact" : " MISMATCH");
        if (r)
            detail += " (solve " + std::to_string(r.solve_rows) + ", verified " + std::to_string(r.verified_rows) + ")";
        return r;
    };
    check("g1", g1, g1_form, false);
    check("g2", g2, g2_form, false);
    const auto r = check("8g1+16g2", total, total_form, true);
    if (r)
        detail += ": " + r.decomposition->to_string();
    return {ok, detail};
}

std::pair<bool, std::string> cross_oracle()
{
    struct Task {
        const PearlChain* chain;
        Order order;
        LeakingVector leak;
    };
    std::vector<std::vector<PearlChain>> chains;
    for (const auto& [d2, g] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {3, 2}})
        chains.push_back(enumerate_pearl_chains(d2, g));
    std::vector<Task> tasks;
    for (const auto& list : chains)
        for (const auto& chain : list)
            for (const auto& delta : deltas(chain.d2()))
                for (const auto& leak : leaking_vectors(chain, delta))
                    for (const auto& order : Order::all(chain.vertex_count()))
                        tasks.push_back({&chain, order, leak});
    struct Result {
        std::size_t multidegrees = 0;
        std::size_t mismatches = 0;
    };
    const int D = 3;
    const auto results = parallel_map<Result>(tasks.size(), [&](std::size_t i) {
        const auto& t = tasks[i];
        std::map<std::vector<int>, Rational> refined;
        for (const auto& [key, c] : refined_feynman({*t.chain, t.order, t.leak, D}).terms()) {
            std::vector<int> a(key.begin(), key.end());
            if (std::count(a.begin(), a.end(), 0) != static_cast<long>(a.size()))
                refined.emplace(a, c);
        }
        std::map<std::vector<int>, Rational> counted;
        for (const auto& [a, n] : cover_counts_by_multidegree(*t.chain, t.order, t.leak, D))
            counted.emplace(a, Rational(n));
        Result r;
        std::set<std::vector<int>> keys;
        for (const auto& [a, c] : refined)
            keys.insert(a);
        for (const auto& [a, c] : counted)
            keys.insert(a);
        r.multidegrees = keys.size();
        for (const auto& a : keys) {
            const auto f = refined.contains(a) ? refined.at(a) : Rational(0);
            const auto k = counted.contains(a) ? counted.at(a) : Rational(0);
            r.mismatches += f == k ? 0 : 1;
        }
        return r;
    });
    std::size_t multidegrees = 0, mismatches = 0;
    for (const auto& r : results) {
        multidegrees += r.multidegrees;
        mismatches += r.mismatches;
    }
    return {mismatches == 0 && !tasks.empty(),
            std::to_string(tasks.size()) + " (chain, order, leak) cells over (2,1),(3,1),(2,2),(3,2), "
                + std::to_string(multidegrees) + " nonzero multidegrees with sum <= 3, "
                + std::to_string(mismatches) + " mismatches"};
}

std::pair<bool, std::string> labeled_pin()
{
    const auto chain = cyclic_chain();
    const auto order = Order::identity(4);
    const auto leak = LeakingVector::zero(4);
    const std::vector<int> a{1, 0, 0, 1};
    const auto f = refined_feynman({chain, order, leak, 2}).coefficient(std::vector<int>{}, a);
    const auto covers = enumerate_covers(chain, order, leak, a);
    const bool ok = f == Rational(1) && covers.count == 1 && covers.covers.size() == 1;
    return {ok, "cyclic labeling x1-x2-x3-x4, identity order, a=(1,0,0,1): refined Feynman " + f.to_string()
                    + ", covers " + Rational(covers.count).to_string() + " (no relabeling search needed)"};
}

std::pair<bool, std::string> weight_bounds()
{
    bool ok = true;
    std::string detail;

    // every order-summand at (2,1) with W = 2r = 16
    const auto chain21 = enumerate_pearl_chains(2, 1).at(0);
    const int W16 = 2 * static_cast<int>(chain21.edge_count());
    std::size_t fits = 0;
    for (const auto& s : order_summands(chain21, LeakingVector::zero(4), required_degree(W16))) {
        const auto r = decompose(s, W16);
        fits += r && r.decomposition->weight() <= W16 ? 1 : 0;
    }
    ok = ok && fits == 24;
    detail += "(2,1) summands at W=16: " + std::to_string(fits) + "/24";

    // Omega-sums, locked against the first verified run
    const std::map<std::pair<int, int>, std::vector<std::string>> locked{
        {{2, 1}, {"1/288*E4^2 - 1/108*E2*E6 + 1/144*E2^2*E4 - 1/864*E2^4"}},
        {{3, 1},
         {"0",
          "1/1296*E6^2 + 1/2304*E4^3 - 5/864*E2*E4*E6 + 25/2304*E2^2*E4^2 - 25/2592*E2^3*E6 + 25/6912*E2^4*E4 "
          "- 5/20736*E2^6"}},
        {{2, 2},
         {"5/15552*E6^2 - 5/5184*E2*E4*E6 + 5/6912*E2^2*E4^2 + 5/15552*E2^3*E6 - 5/10368*E2^4*E4 + 5/62208*E2^6"}},
    };
    std::size_t vacuous = 0;
    for (const auto& [type, expected] : locked) {
        const auto [d2, g] = type;
        const int W = 4 * (d2 + g - 1);
        const int D = required_degree(W);
        std::vector<std::string> got;
        bool homogeneous = true;
        for (const auto& chain : enumerate_pearl_chains(d2, g)) {
            const auto s = order_sum(chain, LeakingVector::zero(chain.vertex_count()), D);
            const auto r = decompose(s, W);
            if (!r) {
                homogeneous = false;
                got.push_back("(no fit)");
                continue;
            }
            const auto profile = weight_profile(*r.decomposition);
            if (r.decomposition->coefficients.empty())
                ++vacuous;
            else
                homogeneous = homogeneous && profile.homogeneous && profile.weight == W;
            got.push_back(r.decomposition->to_string());
        }
        auto sorted_expected = expected;
        std::sort(sorted_expected.begin(), sorted_expected.end());
        std::sort(got.begin(), got.end());
        const bool match = homogeneous && got == sorted_expected;
        ok = ok && match;
        detail += "; (" + std::to_string(d2) + "," + std::to_string(g) + ") D=" + std::to_string(D) + " weight "
                  + std::to_string(W) + (match ? " homogeneous, locked values match" : " MISMATCH");
    }
    detail += "; " + std::to_string(vacuous)
              + " chain with an identically zero Omega-sum (a white vertex of valence 1), vacuously homogeneous";
    return {ok, detail};
}

std::pair<bool, std::string> propagator_suite()
{
    const VariableSet vars{{"a", "b"}, {"q"}};
    const auto p = propagator(vars, {20, 20}, 0, 1, 0);
    std::size_t checked = 0, bad = 0;
    auto coef = [&](int d, int n) { return p.coefficient(std::vector<int>{d, -d}, std::vector<int>{n}); };
    auto expect = [&](bool cond) {
        ++checked;
        bad += cond ? 0 : 1;
    };
    for (int n = 0; n <= 20; ++n) {
        expect(coef(0, n) == Rational(0));
        for (int d = 1; d <= 20; ++d) {
            if (n == 0) {
                expect(coef(d, 0) == Rational(-d));
                expect(coef(-d, 0) == Rational(0));
            } else {
                expect(coef(d, n) == (n % d == 0 ? Rational(-d) : Rational(0)));
                expect(coef(-d, n) == coef(d, n));
            }
        }
    }
    for (const auto& [key, c] : p.terms())
        expect(key[0] == -key[1]);
    return {bad == 0, std::to_string(checked) + " coefficient checks for 1 <= d <= 20, 0 <= n <= 20, "
                          + std::to_string(bad) + " failures"};
}

std::pair<bool, std::string> counting_convention()
{
    const auto chain = enumerate_pearl_chains(2, 1).at(0);
    const auto r = count_covers_by_degree(chain, LeakyDegree::zero(2), 2, false, true);
    const auto labeled = r.labeled.series.coefficient(2);
    const auto plain = r.orbit_count.at(2);
    const auto weighted = r.weighted_orbit_count.at(2);
    const auto per_aut = labeled / Rational(static_cast<long>(r.automorphisms));
    const bool ok = labeled == Rational(192);
    std::string detail = "(2,1) d1=2: labeled " + labeled.to_string() + ", plain orbits " + Rational(plain).to_string()
                         + ", Aut-weighted orbits " + weighted.to_string() + ", 192/|Aut| = " + per_aut.to_string()
                         + " with |Aut| = " + std::to_string(r.automorphisms) + ". ";
    detail += Rational(plain) == Rational(60) || weighted == Rational(60)
                  ? "one of the unlabeled counts equals 60"
                  : "neither unlabeled count equals 60: Aut(P) acts freely on labeled covers, so both equal 192/|Aut|";
    return {ok, detail};
}

std::pair<bool, std::string> metadata()
{
    bool ok = true;
    for (const char* command : {"series", "covers"}) {
        cli::RunConfig c;
        c.command = command;
        c.d2 = 2;
        c.g = 1;
        c.max_degree = 3;
        const auto out = cli::run(c);
        const auto j = json::parse(out.output);
        const auto note = j.at("metadata").at("gromov_witten").get<std::string>();
        ok = ok && out.exit_code == 0 && note.find("correspondence theorem") != std::string::npos
             && note.find("Gromov-Witten") != std::string::npos;
    }
    return {ok, "series and covers output carry metadata.gromov_witten citing the correspondence theorem; "
                "the algebraic side is not computed"};
}

} // namespace

int main()
{
    criterion(1, order_multiset);
    criterion(2, eisenstein_decompositions);
    criterion(3, cross_oracle);
    criterion(4, labeled_pin);
    criterion(5, weight_bounds);
    criterion(6, propagator_suite);
    criterion(7, counting_convention);
    criterion(8, metadata);
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
