#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "pearl/covers.hpp"
#include "pearl/parallel.hpp"

using namespace pearl;

namespace {

PearlChain cyclic_chain()
{
    Multigraph g;
    g.vertices = {{"x1", Color::white}, {"x2", Color::black}, {"x3", Color::white}, {"x4", Color::black}};
    g.edges = {{"q1", 0, 1}, {"q2", 1, 2}, {"q3", 2, 3}, {"q4", 3, 0}};
    return PearlChain::from_graph(g);
}

std::map<std::vector<int>, mpz_class> refined_counts(const PearlChain& chain, const Order& order,
                                                     const LeakingVector& leak, int D)
{
    std::map<std::vector<int>, mpz_class> out;
    for (const auto& [key, c] : refined_feynman({chain, order, leak, D}).terms()) {
        std::vector<int> a(key.begin(), key.end());
        if (std::any_of(a.begin(), a.end(), [](int x) { return x != 0; }))
            out[a] = c.numerator();
    }
    return out;
}

std::vector<LeakyDegree> deltas(int d2)
{
    auto leaky = LeakyDegree::zero(d2);
    leaky.values[0] = -1;
    leaky.values[1] = 1;
    return {LeakyDegree::zero(d2), leaky};
}

// Σ over the flags at vertex i of ±w, + for flags pointing in +.
int leaking_at(const CoverDatum& c, const PearlChain& chain, const Order& order, std::size_t i)
{
    int total = 0;
    for (std::size_t k : chain.incident_edges(i)) {
        const int d = c.edges[k].direction == Direction::plus ? 1 : -1;
        const int flag = edge_start(chain, order, k) == i ? d : -d;
        total += flag * c.edges[k].weight;
    }
    return total;
}

} // namespace

TEST_CASE("the labeled cover of the cyclic chain")
{
    const auto chain = cyclic_chain();
    const auto order = Order::identity(4);
    const auto leak = LeakingVector::zero(4);
    const std::vector<int> a{1, 0, 0, 1};
    const auto result = enumerate_covers(chain, order, leak, a);
    CHECK(result.count == 1);
    REQUIRE(result.covers.size() == 1);
    const auto diagram = export_floor_diagram(result.covers.front(), chain, order, leak);
    CHECK(diagram.floors.size() == 2);
    CHECK(diagram.elevators.size() == 4);
    std::set<int> markings;
    for (const auto& e : diagram.elevators) {
        markings.insert(e.marked_point);
        CHECK(e.crossings <= 1);
    }
    CHECK(markings.size() == 2);
    CHECK(diagram.multiplicity == 1);
}

TEST_CASE("zero multidegree has no covers")
{
    for (const auto& chain : enumerate_pearl_chains(2, 2)) {
        const std::vector<int> a(chain.edge_count(), 0);
        for (const auto& order : Order::all(chain.vertex_count()))
            CHECK(enumerate_covers(chain, order, LeakingVector::zero(chain.vertex_count()), a).count == 0);
    }
}

TEST_CASE("cover counts equal refined Feynman coefficients")
{
    // every type with d2 + g <= 4, both leaky degrees, multidegree total <= 3
    for (const auto& [d2, g] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}}) {
        for (const auto& chain : enumerate_pearl_chains(d2, g))
            for (const auto& delta : deltas(d2))
                for (const auto& leak : leaking_vectors(chain, delta))
                    for (const auto& order : Order::all(chain.vertex_count())) {
                        const auto counted = cover_counts_by_multidegree(chain, order, leak, 3);
                        CHECK(counted == refined_counts(chain, order, leak, 3));
                    }
    }
}

TEST_CASE("single-multidegree enumeration agrees with the sweep")
{
    const auto chain = enumerate_pearl_chains(2, 2).front();
    const auto leak = leaking_vectors(chain, LeakyDegree::parse("-1,1")).back();
    for (const auto& order : Order::all(chain.vertex_count())) {
        for (const auto& [a, count] : cover_counts_by_multidegree(chain, order, leak, 3)) {
            const auto listed = enumerate_covers(chain, order, leak, a);
            CHECK(listed.count == count);
            for (const auto& c : listed.covers)
                CHECK(c.multidegree() == a);
        }
    }
}

TEST_CASE("raising the weight cap adds no covers")
{
    for (const auto& [d2, g] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}}) {
        for (const auto& chain : enumerate_pearl_chains(d2, g))
            for (const auto& delta : deltas(d2))
                for (const auto& leak : leaking_vectors(chain, delta))
                    for (const auto& order : Order::all(chain.vertex_count()))
                        CHECK(cover_counts_by_multidegree(chain, order, leak, 3, 2)
                              == cover_counts_by_multidegree(chain, order, leak, 3));
    }
}

TEST_CASE("every cover balances, leaks as prescribed and has consistent data")
{
    for (const auto& [d2, g] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}}) {
        for (const auto& chain : enumerate_pearl_chains(d2, g))
            for (const auto& delta : deltas(d2))
                for (const auto& leak : leaking_vectors(chain, delta))
                    for (const auto& order : Order::all(chain.vertex_count()))
                        for_each_cover(chain, order, leak, 3, [&](const CoverDatum& c) {
                            int total = 0;
                            for (std::size_t k = 0; k < chain.edge_count(); ++k) {
                                const auto& e = c.edges[k];
                                CHECK(e.weight >= 1);
                                CHECK(e.windings >= 0);
                                const int s = order.place(edge_start(chain, order, k));
                                const int t = order.place(edge_end(chain, order, k));
                                CHECK(s < t);
                                CHECK(e.crossings == baseline_crossings(s, t, e.direction) + e.windings);
                                CHECK(c.multidegree()[k] == e.crossings * e.weight);
                                total += c.multidegree()[k];
                            }
                            CHECK(total == c.degree());
                            CHECK(c.degree() >= 1);
                            for (std::size_t b : chain.black_vertices()) {
                                const auto& inc = chain.incident_edges(b);
                                REQUIRE(inc.size() == 2);
                                CHECK(c.edges[inc[0]].weight == c.edges[inc[1]].weight);
                                CHECK(leaking_at(c, chain, order, b) == 0);
                            }
                            for (std::size_t i = 0; i < chain.vertex_count(); ++i)
                                CHECK(leaking_at(c, chain, order, i) == leak.values[i]);
                        });
    }
}

TEST_CASE("arc degree profiles")
{
    for (const auto& chain : enumerate_pearl_chains(2, 2))
        for (const auto& delta : {LeakyDegree::zero(2), LeakyDegree::parse("-1,1"), LeakyDegree::parse("2,-2")})
            for (const auto& leak : leaking_vectors(chain, delta))
                for (const auto& order : Order::all(chain.vertex_count()))
                    for_each_cover(chain, order, leak, 3, [&](const CoverDatum& c) {
                        const auto profile = arc_degree_profile(c, chain, order);
                        const auto by_place = order.vertices_by_place();
                        REQUIRE(profile.degrees.size() == chain.vertex_count() + 1);
                        // the base point sits between the last arc and arc 0
                        CHECK(profile.degrees.front() == c.degree());
                        CHECK(profile.degrees.back() == c.degree());
                        for (std::size_t p = 1; p < profile.degrees.size(); ++p)
                            CHECK(profile.degrees[p] - profile.degrees[p - 1] == leak.values[by_place[p - 1]]);
                        for (int d : profile.degrees)
                            CHECK(d >= 0);
                        if (leak.is_zero())
                            CHECK(profile.min_degree == c.degree());
                        CHECK(profile.min_degree <= c.degree());
                        CHECK(c.degree() <= profile.min_degree + leak.abs_sum());
                    });
}

TEST_CASE("floor diagrams contract back to the cover")
{
    for (const auto& chain : enumerate_pearl_chains(2, 2))
        for (const auto& leak : leaking_vectors(chain, LeakyDegree::parse("-1,1")))
            for (const auto& order : Order::all(chain.vertex_count()))
                for_each_cover(chain, order, leak, 2, [&](const CoverDatum& c) {
                    const auto diagram = export_floor_diagram(c, chain, order, leak);
                    CHECK(diagram.multiplicity == c.multiplicity());
                    const auto back = contract_floor_diagram(floor_diagram_from_json(to_json(diagram)));
                    std::map<std::string, std::size_t> index;
                    for (std::size_t i = 0; i < back.chain.vertex_count(); ++i)
                        index[back.chain.vertices()[i].label] = i;
                    REQUIRE(index.size() == chain.vertex_count());
                    for (std::size_t i = 0; i < chain.vertex_count(); ++i) {
                        const std::size_t j = index.at(chain.vertices()[i].label);
                        CHECK(back.chain.vertices()[j].color == chain.vertices()[i].color);
                        CHECK(back.order.place(j) == order.place(i));
                        CHECK(back.leak.values[j] == leak.values[i]);
                    }
                    REQUIRE(back.chain.edge_count() == chain.edge_count());
                    for (std::size_t k = 0; k < chain.edge_count(); ++k) {
                        const auto& e = chain.edges()[k];
                        const auto& f = back.chain.edges()[k];
                        CHECK(f.label == e.label);
                        CHECK(std::minmax(f.u, f.v)
                              == std::minmax(index.at(chain.vertices()[e.u].label),
                                             index.at(chain.vertices()[e.v].label)));
                        CHECK(back.cover.edges[k] == c.edges[k]);
                    }
                });
}

TEST_CASE("counts by degree at (2,1)")
{
    const auto chain = enumerate_pearl_chains(2, 1).front();
    const auto report = count_covers_by_degree(chain, LeakyDegree::zero(2), 3, false, true);
    CHECK(report.labeled.series.coefficient(0) == Rational(0));
    CHECK(report.labeled.series.coefficient(1) == Rational(8));
    CHECK(report.labeled.series.coefficient(2) == Rational(192));
    CHECK(report.automorphisms == 4);
    // Aut(P) moves every vertex of the 4-cycle except under the identity, so
    // no labeled cover has a nontrivial stabilizer.
    CHECK(report.orbit_count[2] == 48);
    CHECK(report.weighted_orbit_count[2] == Rational(48));
    CHECK(report.degree_mismatch.empty());

    const auto normalized = count_covers_by_degree(chain, LeakyDegree::zero(2), 3, true, false);
    CHECK(normalized.labeled.series.coefficient(2) == Rational(48));
    CHECK(normalized.orbit_count.empty());
}

TEST_CASE("cover counts by degree match the Feynman series")
{
    for (const auto& [d2, g] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}})
        for (const auto& chain : enumerate_pearl_chains(d2, g))
            for (const auto& delta : deltas(d2)) {
                const auto covers = count_covers_by_degree(chain, delta, 3, true, false);
                const auto series = pearl_chain_series(chain, delta, 3, true);
                CHECK(covers.labeled.series == series.series);
            }
}

TEST_CASE("parallel and serial cover counts agree")
{
    const auto chain = enumerate_pearl_chains(2, 2).front();
    for (int jobs : {1, 3}) {
        set_jobs(jobs);
        const auto a = count_covers_by_degree(chain, LeakyDegree::parse("-1,1"), 3, false, true);
        const auto b = count_covers_by_degree_serial(chain, LeakyDegree::parse("-1,1"), 3, false, true);
        CHECK(a.labeled.series == b.labeled.series);
        CHECK(a.orbit_count == b.orbit_count);
        CHECK(a.weighted_orbit_count == b.weighted_orbit_count);
    }
    set_jobs(0);
}
