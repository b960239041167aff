#include "pearl/covers.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>

#include "pearl/parallel.hpp"

namespace pearl {

std::vector<int> CoverDatum::multidegree() const
{
    std::vector<int> a;
    a.reserve(edges.size());
    for (const auto& e : edges)
        a.push_back(e.crossings * e.weight);
    return a;
}

int CoverDatum::degree() const
{
    int d = 0;
    for (const auto& e : edges)
        d += e.crossings * e.weight;
    return d;
}

std::uint64_t CoverDatum::multiplicity() const
{
    std::uint64_t m = 1;
    for (const auto& e : edges)
        m *= static_cast<std::uint64_t>(e.weight);
    return m;
}

int baseline_crossings(int start_place, int end_place, Direction d)
{
    const bool forward = start_place < end_place;
    if (d == Direction::plus)
        return forward ? 0 : 1;
    return forward ? 1 : 0;
}

std::size_t edge_start(const PearlChain& chain, const Order& order, std::size_t k)
{
    const auto& e = chain.edges()[k];
    return order.place(e.u) < order.place(e.v) ? e.u : e.v;
}

std::size_t edge_end(const PearlChain& chain, const Order& order, std::size_t k)
{
    const auto& e = chain.edges()[k];
    return order.place(e.u) < order.place(e.v) ? e.v : e.u;
}

namespace {

constexpr int sign(Direction d) { return static_cast<int>(d); }

/// Depth-first search over per-edge choices (w, d, m), edges grouped by black
/// vertex; a vertex's leaking equation is checked as soon as all its flags
/// are fixed.
class CoverSearch {
public:
    CoverSearch(const PearlChain& chain, const Order& order, const LeakingVector& leak, int max_degree,
                std::span<const int> target, int extra_weight_cap)
        : chain_(chain), order_(order), leak_(leak), max_degree_(max_degree), target_(target),
          extra_cap_(extra_weight_cap)
    {
        const std::size_t n = chain.vertex_count();
        if (order.size() != n || leak.values.size() != n)
            throw std::invalid_argument("order or leaking vector does not match the pearl chain");
        if (!target.empty() && target.size() != chain.edge_count())
            throw std::invalid_argument("multidegree length does not match the edge count");
        for (std::size_t b : chain.black_vertices())
            for (std::size_t k : chain.incident_edges(b))
                steps_.push_back(k);
        flags_left_.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            flags_left_[i] = static_cast<int>(chain.incident_edges(i).size());
        balance_.assign(n, 0);
        cover_.edges.resize(chain.edge_count());
        if (!target.empty()) {
            max_degree_ = std::accumulate(target.begin(), target.end(), 0);
            for (int a : target)
                if (a < 0)
                    throw std::invalid_argument("multidegree entries must be nonnegative");
        }
        search_cap_ = max_degree_ + leak.abs_sum() + extra_cap_;
    }

    [[nodiscard]] int weight_cap_for(int degree) const { return degree + leak_.abs_sum() + extra_cap_; }

    template <class Visit>
    void run(Visit&& visit)
    {
        descend(0, 0, visit);
    }

private:
    template <class Visit>
    void descend(std::size_t step, int used, Visit& visit)
    {
        if (step == steps_.size()) {
            if (used < 1)
                return; // the cover must reach p_0
            const int cap = weight_cap_for(used);
            for (const auto& e : cover_.edges)
                if (e.crossings == 0 && e.weight > cap)
                    return;
            visit(cover_);
            return;
        }
        const std::size_t k = steps_[step];
        const std::size_t s = edge_start(chain_, order_, k);
        const std::size_t t = edge_end(chain_, order_, k);
        const int ps = order_.place(s);
        const int pt = order_.place(t);

        auto attempt = [&](int w, Direction d, int c) {
            const int m = c - baseline_crossings(ps, pt, d);
            if (m < 0)
                return;
            cover_.edges[k] = EdgeCover{w, d, m, c};
            balance_[s] += sign(d) * w;
            balance_[t] -= sign(d) * w;
            --flags_left_[s];
            --flags_left_[t];
            const bool ok = (flags_left_[s] > 0 || balance_[s] == leak_.values[s])
                            && (flags_left_[t] > 0 || balance_[t] == leak_.values[t]);
            if (ok)
                descend(step + 1, used + c * w, visit);
            ++flags_left_[s];
            ++flags_left_[t];
            balance_[s] -= sign(d) * w;
            balance_[t] += sign(d) * w;
        };

        auto expand = [&](int a) {
            if (a == 0) {
                for (int w = 1; w <= search_cap_; ++w)
                    for (Direction d : {Direction::plus, Direction::minus})
                        attempt(w, d, 0);
                return;
            }
            for (int c = 1; c <= a; ++c) {
                if (a % c != 0)
                    continue;
                for (Direction d : {Direction::plus, Direction::minus})
                    attempt(a / c, d, c);
            }
        };

        if (!target_.empty()) {
            expand(target_[k]);
        } else {
            for (int a = 0; used + a <= max_degree_; ++a)
                expand(a);
        }
    }

    const PearlChain& chain_;
    const Order& order_;
    const LeakingVector& leak_;
    int max_degree_;
    std::span<const int> target_;
    int extra_cap_;
    int search_cap_ = 0;
    std::vector<std::size_t> steps_;
    std::vector<int> flags_left_;
    std::vector<int> balance_;
    CoverDatum cover_;
};

} // namespace

CoverEnumeration enumerate_covers(const PearlChain& chain, const Order& order, const LeakingVector& leak,
                                  std::span<const int> multidegree, int extra_weight_cap)
{
    if (multidegree.size() != chain.edge_count())
        throw std::invalid_argument("multidegree length does not match the edge count");
    CoverEnumeration out;
    out.count = 0;
    const int total = std::accumulate(multidegree.begin(), multidegree.end(), 0);
    if (total == 0) // no cover misses p_0
        return out;
    CoverSearch search(chain, order, leak, total, multidegree, extra_weight_cap);
    out.weight_cap = search.weight_cap_for(total);
    search.run([&](const CoverDatum& c) {
        out.covers.push_back(c);
        out.count += static_cast<unsigned long>(c.multiplicity());
    });
    return out;
}

void for_each_cover(const PearlChain& chain, const Order& order, const LeakingVector& leak, int max_degree,
                    const std::function<void(const CoverDatum&)>& visit, int extra_weight_cap)
{
    CoverSearch search(chain, order, leak, max_degree, {}, extra_weight_cap);
    search.run(visit);
}

std::map<std::vector<int>, mpz_class> cover_counts_by_multidegree(const PearlChain& chain, const Order& order,
                                                                  const LeakingVector& leak, int max_degree,
                                                                  int extra_weight_cap)
{
    std::map<std::vector<int>, mpz_class> out;
    CoverSearch search(chain, order, leak, max_degree, {}, extra_weight_cap);
    search.run([&](const CoverDatum& c) { out[c.multidegree()] += static_cast<unsigned long>(c.multiplicity()); });
    return out;
}

ArcDegreeProfile arc_degree_profile(const CoverDatum& cover, const PearlChain& chain, const Order& order)
{
    const int n = static_cast<int>(chain.vertex_count());
    const int points = n + 1;
    ArcDegreeProfile profile;
    profile.degrees.assign(static_cast<std::size_t>(points), 0);
    for (std::size_t k = 0; k < chain.edge_count(); ++k) {
        const auto& ec = cover.edges[k];
        const int ps = order.place(edge_start(chain, order, k)) + 1;
        const int pt = order.place(edge_end(chain, order, k)) + 1;
        int pos = ps;
        if (ec.direction == Direction::plus) {
            const int steps = ((pt - ps) % points + points) % points + points * ec.windings;
            for (int i = 0; i < steps; ++i) {
                profile.degrees[static_cast<std::size_t>(pos)] += ec.weight;
                pos = (pos + 1) % points;
            }
        } else {
            const int steps = ((ps - pt) % points + points) % points + points * ec.windings;
            for (int i = 0; i < steps; ++i) {
                pos = (pos - 1 + points) % points;
                profile.degrees[static_cast<std::size_t>(pos)] += ec.weight;
            }
        }
    }
    profile.min_degree = *std::min_element(profile.degrees.begin(), profile.degrees.end());
    return profile;
}

namespace {

/// Label-free description of a labeled cover: who sits at each place and
/// how the edges run between places. Two labeled covers share a key iff an
/// automorphism of the chain carries one to the other.
using OrbitKey = std::vector<int>;

OrbitKey orbit_key(const CoverDatum& cover, const PearlChain& chain, const Order& order, const LeakingVector& leak)
{
    const std::size_t n = chain.vertex_count();
    OrbitKey key;
    const auto by_place = order.vertices_by_place();
    for (std::size_t p = 0; p < n; ++p) {
        key.push_back(chain.is_white(by_place[p]) ? 1 : 0);
        key.push_back(leak.values[by_place[p]]);
    }
    std::vector<std::array<int, 5>> edges;
    for (std::size_t k = 0; k < chain.edge_count(); ++k) {
        const auto& ec = cover.edges[k];
        edges.push_back({order.place(edge_start(chain, order, k)), order.place(edge_end(chain, order, k)), ec.weight,
                         sign(ec.direction), ec.windings});
    }
    std::sort(edges.begin(), edges.end());
    for (const auto& e : edges)
        key.insert(key.end(), e.begin(), e.end());
    return key;
}

struct TaskTally {
    std::vector<mpz_class> by_degree;
    std::vector<std::pair<int, OrbitKey>> orbit_members; ///< (degree, key) per labeled cover
    std::vector<std::uint64_t> member_multiplicity;
    std::set<int> mismatch;
};

TaskTally tally(const PearlChain& chain, const Order& order, const LeakingVector& leak, int max_degree,
                bool want_orbits)
{
    TaskTally t;
    t.by_degree.assign(static_cast<std::size_t>(max_degree) + 1, 0);
    for_each_cover(chain, order, leak, max_degree, [&](const CoverDatum& c) {
        const int d = c.degree();
        t.by_degree[static_cast<std::size_t>(d)] += static_cast<unsigned long>(c.multiplicity());
        if (!leak.is_zero() && arc_degree_profile(c, chain, order).min_degree != d)
            t.mismatch.insert(d);
        if (want_orbits) {
            t.orbit_members.emplace_back(d, orbit_key(c, chain, order, leak));
            t.member_multiplicity.push_back(c.multiplicity());
        }
    });
    return t;
}

CoverCountReport assemble(const PearlChain& chain, const LeakyDegree& delta, int max_degree, bool normalize,
                          bool want_orbits, const std::vector<TaskTally>& parts)
{
    CoverCountReport report;
    report.automorphisms = automorphism_count(chain);
    report.orbit_counts = want_orbits;
    auto& s = report.labeled;
    s.d2 = chain.d2();
    s.g = chain.genus();
    s.delta = delta;
    s.max_degree = max_degree;
    s.normalized = normalize;
    s.series = QSeries(max_degree);

    std::set<int> mismatch;
    std::map<OrbitKey, std::pair<int, std::uint64_t>> orbits; // key -> (degree, ∏w)
    std::map<OrbitKey, std::uint64_t> orbit_size;
    for (const auto& p : parts) {
        for (int d = 0; d <= max_degree; ++d)
            s.series[d] += Rational(mpq_class(p.by_degree[static_cast<std::size_t>(d)]));
        mismatch.insert(p.mismatch.begin(), p.mismatch.end());
        for (std::size_t i = 0; i < p.orbit_members.size(); ++i) {
            const auto& [d, key] = p.orbit_members[i];
            orbits.emplace(key, std::make_pair(d, p.member_multiplicity[i]));
            ++orbit_size[key];
        }
    }
    if (normalize)
        s.series *= Rational(1) / Rational(static_cast<long>(report.automorphisms));
    report.degree_mismatch.assign(mismatch.begin(), mismatch.end());

    if (want_orbits) {
        report.orbit_count.assign(static_cast<std::size_t>(max_degree) + 1, 0);
        report.weighted_orbit_count.assign(static_cast<std::size_t>(max_degree) + 1, Rational(0));
        const Rational aut(static_cast<long>(report.automorphisms));
        for (const auto& [key, info] : orbits) {
            const auto [d, mult] = info;
            report.orbit_count[static_cast<std::size_t>(d)] += static_cast<unsigned long>(mult);
            // |orbit| / |Aut| = 1 / |Stab|
            report.weighted_orbit_count[static_cast<std::size_t>(d)] +=
                Rational(static_cast<long>(mult)) * Rational(static_cast<long>(orbit_size[key])) / aut;
        }
    }
    return report;
}

} // namespace

CoverCountReport count_covers_by_degree(const PearlChain& chain, const LeakyDegree& delta, int max_degree,
                                        bool normalize, bool orbit_counts)
{
    check_leaky_degree(chain.d2(), delta);
    const auto vectors = leaking_vectors(chain, delta);
    const auto orders = Order::all(chain.vertex_count());
    auto parts = parallel_map<TaskTally>(vectors.size() * orders.size(), [&](std::size_t i) {
        return tally(chain, orders[i % orders.size()], vectors[i / orders.size()], max_degree, orbit_counts);
    });
    return assemble(chain, delta, max_degree, normalize, orbit_counts, parts);
}

CoverCountReport count_covers_by_degree_serial(const PearlChain& chain, const LeakyDegree& delta, int max_degree,
                                               bool normalize, bool orbit_counts)
{
    check_leaky_degree(chain.d2(), delta);
    std::vector<TaskTally> parts;
    for (const auto& v : leaking_vectors(chain, delta))
        for (const auto& order : Order::all(chain.vertex_count()))
            parts.push_back(tally(chain, order, v, max_degree, orbit_counts));
    return assemble(chain, delta, max_degree, normalize, orbit_counts, parts);
}

FloorDiagram export_floor_diagram(const CoverDatum& cover, const PearlChain& chain, const Order& order,
                                  const LeakingVector& leak)
{
    if (cover.edges.size() != chain.edge_count())
        throw std::invalid_argument("cover does not match the pearl chain");
    FloorDiagram diagram;
    diagram.multiplicity = cover.multiplicity();
    std::vector<int> floor_of(chain.vertex_count(), -1);
    for (std::size_t w : chain.white_vertices()) {
        floor_of[w] = static_cast<int>(diagram.floors.size());
        diagram.floors.push_back({order.place(w) + 1, chain.vertices()[w].label, leak.values[w], {}, {}});
    }
    for (std::size_t k = 0; k < chain.edge_count(); ++k) {
        const auto& e = chain.edges()[k];
        const auto& ec = cover.edges[k];
        const std::size_t white = chain.is_white(e.u) ? e.u : e.v;
        const std::size_t black = white == e.u ? e.v : e.u;
        const bool floor_is_start = edge_start(chain, order, k) == white;
        const Direction orientation =
            floor_is_start ? ec.direction : (ec.direction == Direction::plus ? Direction::minus : Direction::plus);
        auto& floor = diagram.floors[static_cast<std::size_t>(floor_of[white])];
        (orientation == Direction::plus ? floor.elevators_out : floor.elevators_in).push_back(e.label);
        diagram.elevators.push_back({e.label, ec.weight, ec.crossings, order.place(black) + 1,
                                     chain.vertices()[black].label, order.place(white) + 1, orientation});
    }
    return diagram;
}

ContractedCover contract_floor_diagram(const FloorDiagram& diagram)
{
    Multigraph graph;
    std::map<int, std::size_t> vertex_at; // 1-based point -> vertex index
    std::vector<int> leak;
    for (const auto& f : diagram.floors) {
        if (!vertex_at.emplace(f.point, graph.vertices.size()).second)
            throw std::invalid_argument("two floors share a point");
        graph.vertices.push_back({f.vertex, Color::white});
        leak.push_back(f.leak);
    }
    std::map<int, std::string> markings;
    for (const auto& el : diagram.elevators) {
        auto [it, inserted] = markings.emplace(el.marked_point, el.marked_vertex);
        if (!inserted && it->second != el.marked_vertex)
            throw std::invalid_argument("two marked vertices share a point");
    }
    for (const auto& [point, label] : markings) {
        if (!vertex_at.emplace(point, graph.vertices.size()).second)
            throw std::invalid_argument("marked point coincides with a floor");
        graph.vertices.push_back({label, Color::black});
        leak.push_back(0);
    }
    const std::size_t n = graph.vertices.size();
    std::vector<int> places(n);
    for (const auto& [point, v] : vertex_at) {
        if (point < 1 || point > static_cast<int>(n))
            throw std::invalid_argument("point index out of range");
        places[v] = point - 1;
    }
    CoverDatum cover;
    for (const auto& el : diagram.elevators) {
        const auto f = vertex_at.find(el.floor_point);
        if (f == vertex_at.end() || f->second >= diagram.floors.size())
            throw std::invalid_argument("elevator '" + el.edge + "' does not start at a floor");
        const std::size_t white = f->second;
        const std::size_t black = vertex_at.at(el.marked_point);
        graph.edges.push_back({el.edge, white, black});
        const bool floor_is_start = el.floor_point < el.marked_point;
        const Direction d = floor_is_start ? el.orientation
                                           : (el.orientation == Direction::plus ? Direction::minus : Direction::plus);
        const int start = floor_is_start ? el.floor_point : el.marked_point;
        const int end = floor_is_start ? el.marked_point : el.floor_point;
        const int windings = el.crossings - baseline_crossings(start, end, d);
        if (windings < 0)
            throw std::invalid_argument("elevator '" + el.edge + "' has too few crossings for its orientation");
        cover.edges.push_back({el.weight, d, windings, el.crossings});
    }
    return {PearlChain::from_graph(std::move(graph)), Order(std::move(places)), LeakingVector{std::move(leak)},
            std::move(cover)};
}

nlohmann::json to_json(const FloorDiagram& diagram)
{
    nlohmann::json floors = nlohmann::json::array();
    for (const auto& f : diagram.floors)
        floors.push_back({{"point", f.point},
                          {"vertex", f.vertex},
                          {"leak", f.leak},
                          {"ends", {{0, -1}, {f.leak, 1}}},
                          {"elevators_in", f.elevators_in},
                          {"elevators_out", f.elevators_out}});
    nlohmann::json elevators = nlohmann::json::array();
    for (const auto& e : diagram.elevators)
        elevators.push_back({{"edge", e.edge},
                             {"weight", e.weight},
                             {"crossings", e.crossings},
                             {"marked_point", e.marked_point},
                             {"marked_vertex", e.marked_vertex},
                             {"floor_point", e.floor_point},
                             {"orientation", e.orientation == Direction::plus ? "+" : "-"}});
    return {{"floors", floors}, {"elevators", elevators}, {"multiplicity", diagram.multiplicity}};
}

FloorDiagram floor_diagram_from_json(const nlohmann::json& j)
{
    FloorDiagram diagram;
    for (const auto& f : j.at("floors"))
        diagram.floors.push_back({f.at("point").get<int>(), f.at("vertex").get<std::string>(), f.at("leak").get<int>(),
                                  f.at("elevators_in").get<std::vector<std::string>>(),
                                  f.at("elevators_out").get<std::vector<std::string>>()});
    for (const auto& e : j.at("elevators")) {
        const auto o = e.at("orientation").get<std::string>();
        if (o != "+" && o != "-")
            throw std::invalid_argument("elevator orientation must be '+' or '-'");
        diagram.elevators.push_back({e.at("edge").get<std::string>(), e.at("weight").get<int>(),
                                     e.at("crossings").get<int>(), e.at("marked_point").get<int>(),
                                     e.at("marked_vertex").get<std::string>(), e.at("floor_point").get<int>(),
                                     o == "+" ? Direction::plus : Direction::minus});
    }
    diagram.multiplicity = j.value("multiplicity", std::uint64_t{1});
    return diagram;
}

} // namespace pearl
