#include "pearl/pearls.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace pearl {

std::string to_string(Violation v)
{
    switch (v) {
    case Violation::bad_endpoint: return "bad_endpoint";
    case Violation::duplicate_label: return "duplicate_label";
    case Violation::not_bipartite: return "not_bipartite";
    case Violation::black_valence: return "black_valence";
    case Violation::parallel_edges: return "parallel_edges";
    case Violation::disconnected: return "disconnected";
    case Violation::genus_not_positive: return "genus_not_positive";
    case Violation::color_count: return "color_count";
    case Violation::type_mismatch: return "type_mismatch";
    }
    return "unknown";
}

ValidationReport validate_pearl_chain(const Multigraph& candidate, std::pair<int, int> const* expected)
{
    ValidationReport report;
    auto fail = [&](Violation v, std::string what) { report.violations.emplace_back(v, std::move(what)); };

    const std::size_t nv = candidate.vertices.size();
    const std::size_t ne = candidate.edges.size();

    {
        std::set<std::string> seen;
        for (const auto& v : candidate.vertices)
            if (!seen.insert(v.label).second)
                fail(Violation::duplicate_label, "vertex label '" + v.label + "' repeated");
        for (const auto& e : candidate.edges)
            if (!seen.insert(e.label).second)
                fail(Violation::duplicate_label, "label '" + e.label + "' repeated");
    }

    std::vector<std::size_t> valence(nv, 0);
    std::set<std::pair<std::size_t, std::size_t>> endpoint_pairs;
    bool endpoints_ok = true;
    for (const auto& e : candidate.edges) {
        if (e.u >= nv || e.v >= nv) {
            fail(Violation::bad_endpoint, "edge '" + e.label + "' has an endpoint out of range");
            endpoints_ok = false;
            continue;
        }
        ++valence[e.u];
        ++valence[e.v];
        if (candidate.vertices[e.u].color == candidate.vertices[e.v].color)
            fail(Violation::not_bipartite, "edge '" + e.label + "' joins two vertices of one color");
        const auto key = std::minmax(e.u, e.v);
        if (!endpoint_pairs.insert(key).second)
            fail(Violation::parallel_edges, "edge '" + e.label + "' is parallel to an earlier edge");
    }

    int whites = 0;
    int blacks = 0;
    for (std::size_t i = 0; i < nv; ++i) {
        if (candidate.vertices[i].color == Color::white) {
            ++whites;
        } else {
            ++blacks;
            if (valence[i] != 2)
                fail(Violation::black_valence, "black vertex '" + candidate.vertices[i].label + "' has valence "
                                                   + std::to_string(valence[i]));
        }
    }

    if (nv == 0) {
        fail(Violation::disconnected, "empty graph");
    } else if (endpoints_ok) {
        std::vector<std::size_t> parent(nv);
        std::iota(parent.begin(), parent.end(), std::size_t{0});
        auto find = [&](std::size_t x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        std::size_t components = nv;
        for (const auto& e : candidate.edges) {
            const auto a = find(e.u);
            const auto b = find(e.v);
            if (a != b) {
                parent[a] = b;
                --components;
            }
        }
        if (components != 1)
            fail(Violation::disconnected, std::to_string(components) + " connected components");
    }

    const long betti = static_cast<long>(ne) - static_cast<long>(nv) + 1;
    if (betti < 1)
        fail(Violation::genus_not_positive, "first Betti number is " + std::to_string(betti));
    else if (blacks != whites + betti - 1)
        fail(Violation::color_count, std::to_string(blacks) + " black vertices, expected "
                                         + std::to_string(whites + betti - 1));

    report.d2 = whites;
    report.g = static_cast<int>(betti);
    if (expected != nullptr && (expected->first != report.d2 || expected->second != report.g))
        fail(Violation::type_mismatch, "type (" + std::to_string(report.d2) + "," + std::to_string(report.g)
                                           + ") requested (" + std::to_string(expected->first) + ","
                                           + std::to_string(expected->second) + ")");
    report.valid = report.violations.empty();
    return report;
}

PearlChain PearlChain::from_graph(Multigraph graph)
{
    const auto report = validate_pearl_chain(graph);
    if (!report.valid) {
        std::string msg = "not a pearl chain:";
        for (const auto& [kind, what] : report.violations)
            msg += " [" + to_string(kind) + "] " + what + ";";
        throw std::invalid_argument(msg);
    }
    PearlChain chain;
    chain.graph_ = std::move(graph);
    chain.d2_ = report.d2;
    chain.g_ = report.g;
    chain.build_incidence();
    return chain;
}

PearlChain PearlChain::from_black_pairs(int d2, std::span<const std::pair<int, int>> pairs)
{
    Multigraph graph;
    const auto nw = static_cast<std::size_t>(d2);
    for (std::size_t i = 0; i < nw; ++i)
        graph.vertices.push_back({"x" + std::to_string(i + 1), Color::white});
    for (std::size_t j = 0; j < pairs.size(); ++j)
        graph.vertices.push_back({"x" + std::to_string(nw + j + 1), Color::black});
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        auto [lo, hi] = std::minmax(pairs[j].first, pairs[j].second);
        if (lo < 0 || hi >= d2)
            throw std::invalid_argument("black pair refers to a white index out of range");
        const std::size_t b = nw + j;
        graph.edges.push_back({"q" + std::to_string(graph.edges.size() + 1), static_cast<std::size_t>(lo), b});
        graph.edges.push_back({"q" + std::to_string(graph.edges.size() + 1), b, static_cast<std::size_t>(hi)});
    }
    return from_graph(std::move(graph));
}

void PearlChain::build_incidence()
{
    incidence_.assign(graph_.vertices.size(), {});
    for (std::size_t k = 0; k < graph_.edges.size(); ++k) {
        incidence_[graph_.edges[k].u].push_back(k);
        incidence_[graph_.edges[k].v].push_back(k);
    }
}

std::vector<std::size_t> PearlChain::white_vertices() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < vertex_count(); ++i)
        if (is_white(i))
            out.push_back(i);
    return out;
}

std::vector<std::size_t> PearlChain::black_vertices() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < vertex_count(); ++i)
        if (!is_white(i))
            out.push_back(i);
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> PearlChain::black_pairs() const
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t b : black_vertices()) {
        const auto& inc = incidence_[b];
        auto other = [&](std::size_t k) {
            const auto& e = graph_.edges[k];
            return e.u == b ? e.v : e.u;
        };
        out.push_back(std::minmax(other(inc[0]), other(inc[1])));
    }
    return out;
}

namespace {

using Code = std::vector<std::pair<int, int>>;

/// Sorted black pairs after mapping white i to rank[i].
Code encode(const std::vector<std::pair<int, int>>& pairs, const std::vector<int>& rank)
{
    Code code;
    code.reserve(pairs.size());
    for (auto [a, b] : pairs)
        code.push_back(std::minmax(rank[static_cast<std::size_t>(a)], rank[static_cast<std::size_t>(b)]));
    std::sort(code.begin(), code.end());
    return code;
}

/// Pairs in terms of white ordinals 0..d2-1.
std::vector<std::pair<int, int>> white_ordinal_pairs(const PearlChain& chain)
{
    std::vector<int> ordinal(chain.vertex_count(), -1);
    int next = 0;
    for (std::size_t w : chain.white_vertices())
        ordinal[w] = next++;
    std::vector<std::pair<int, int>> out;
    for (auto [a, b] : chain.black_pairs())
        out.emplace_back(ordinal[a], ordinal[b]);
    return out;
}

} // namespace

std::vector<std::pair<int, int>> PearlChain::canonical_code() const
{
    const auto pairs = white_ordinal_pairs(*this);
    std::vector<int> rank(static_cast<std::size_t>(d2_));
    std::iota(rank.begin(), rank.end(), 0);
    Code best;
    bool first = true;
    // Code depends only on the white relabeling; black order is fixed by
    // sorting, so minimizing over white permutations suffices.
    do {
        auto code = encode(pairs, rank);
        if (first || code < best) {
            best = std::move(code);
            first = false;
        }
    } while (std::next_permutation(rank.begin(), rank.end()));
    return best;
}

PearlChain PearlChain::canonical_form() const
{
    const auto code = canonical_code();
    return from_black_pairs(d2_, code);
}

PearlChain PearlChain::relabeled(std::span<const std::size_t> perm) const
{
    const std::size_t n = vertex_count();
    if (perm.size() != n)
        throw std::invalid_argument("relabeling has wrong size");
    Multigraph graph;
    graph.vertices.resize(n);
    std::vector<bool> hit(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (perm[i] >= n || hit[perm[i]])
            throw std::invalid_argument("relabeling is not a permutation");
        hit[perm[i]] = true;
        graph.vertices[perm[i]] = graph_.vertices[i];
    }
    for (const auto& e : graph_.edges)
        graph.edges.push_back({e.label, perm[e.u], perm[e.v]});
    return from_graph(std::move(graph));
}

bool operator==(const PearlChain& a, const PearlChain& b)
{
    if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count())
        return false;
    for (std::size_t i = 0; i < a.vertex_count(); ++i)
        if (a.graph_.vertices[i].label != b.graph_.vertices[i].label
            || a.graph_.vertices[i].color != b.graph_.vertices[i].color)
            return false;
    for (std::size_t k = 0; k < a.edge_count(); ++k) {
        const auto& x = a.graph_.edges[k];
        const auto& y = b.graph_.edges[k];
        if (x.label != y.label || std::minmax(x.u, x.v) != std::minmax(y.u, y.v))
            return false;
    }
    return true;
}

Order::Order(std::vector<int> places) : places_(std::move(places))
{
    std::vector<bool> hit(places_.size(), false);
    for (int p : places_) {
        if (p < 0 || static_cast<std::size_t>(p) >= places_.size() || hit[static_cast<std::size_t>(p)])
            throw std::invalid_argument("order is not a permutation");
        hit[static_cast<std::size_t>(p)] = true;
    }
}

Order Order::identity(std::size_t n)
{
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    return Order(std::move(p));
}

Order Order::parse(std::string_view text)
{
    std::vector<int> places;
    std::string token;
    std::istringstream in{std::string(text)};
    while (std::getline(in, token, ',')) {
        try {
            places.push_back(std::stoi(token) - 1);
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed order '" + std::string(text) + "'");
        }
    }
    return Order(std::move(places));
}

std::vector<std::size_t> Order::vertices_by_place() const
{
    std::vector<std::size_t> out(places_.size());
    for (std::size_t i = 0; i < places_.size(); ++i)
        out[static_cast<std::size_t>(places_[i])] = i;
    return out;
}

std::string Order::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < places_.size(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(places_[i] + 1);
    }
    return out;
}

std::vector<Order> Order::all(std::size_t n)
{
    if (n > max_order_size)
        throw ResourceLimitError(std::to_string(n) + " vertices: more than " + std::to_string(max_order_size)
                                 + "! orders");
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<Order> out;
    do {
        out.emplace_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

LeakyDegree LeakyDegree::parse(std::string_view text)
{
    LeakyDegree delta;
    std::string token;
    std::istringstream in{std::string(text)};
    while (std::getline(in, token, ',')) {
        try {
            std::size_t used = 0;
            delta.values.push_back(std::stoi(token, &used));
            if (token.find_first_not_of(" \t", used) != std::string::npos)
                throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed leaky degree '" + std::string(text) + "'");
        }
    }
    return delta;
}

int LeakyDegree::sum() const { return std::accumulate(values.begin(), values.end(), 0); }

int LeakyDegree::abs_sum() const
{
    int s = 0;
    for (int v : values)
        s += std::abs(v);
    return s;
}

std::string LeakyDegree::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

int LeakingVector::abs_sum() const
{
    int s = 0;
    for (int v : values)
        s += std::abs(v);
    return s;
}

bool LeakingVector::is_zero() const
{
    return std::all_of(values.begin(), values.end(), [](int v) { return v == 0; });
}

namespace {

/// Visits every multiset of `k` items out of `m`, as a nondecreasing index
/// sequence.
template <class Visit>
void for_each_multiset(int m, int k, std::vector<int>& current, int start, Visit&& visit)
{
    if (static_cast<int>(current.size()) == k) {
        visit(current);
        return;
    }
    for (int i = start; i < m; ++i) {
        current.push_back(i);
        for_each_multiset(m, k, current, i, visit);
        current.pop_back();
    }
}

bool connected_on_whites(int d2, const std::vector<std::pair<int, int>>& pairs)
{
    std::vector<int> parent(static_cast<std::size_t>(d2));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x)
            x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        return x;
    };
    int components = d2;
    for (auto [a, b] : pairs) {
        const int ra = find(a);
        const int rb = find(b);
        if (ra != rb) {
            parent[static_cast<std::size_t>(ra)] = rb;
            --components;
        }
    }
    return components == 1;
}

double binomial(double n, double k)
{
    double r = 1.0;
    for (int i = 1; i <= static_cast<int>(k); ++i)
        r = r * (n - k + i) / i;
    return r;
}

} // namespace

std::vector<PearlChain> enumerate_pearl_chains(int d2, int g, std::size_t max_candidates)
{
    if (d2 < 1 || g < 1)
        throw std::invalid_argument("pearl chains need d2 >= 1 and g >= 1");
    const int blacks = d2 + g - 1;
    std::vector<std::pair<int, int>> white_pairs;
    for (int a = 0; a < d2; ++a)
        for (int b = a + 1; b < d2; ++b)
            white_pairs.emplace_back(a, b);
    if (white_pairs.empty())
        return {};

    const auto m = static_cast<int>(white_pairs.size());
    const double candidates = binomial(m + blacks - 1, blacks);
    if (d2 > 9 || candidates > static_cast<double>(max_candidates))
        throw ResourceLimitError("pearl chain enumeration for (" + std::to_string(d2) + "," + std::to_string(g)
                                 + ") needs " + std::to_string(static_cast<long long>(candidates)) + " candidates, limit "
                                 + std::to_string(max_candidates));

    std::map<Code, bool> classes;
    std::vector<int> current;
    for_each_multiset(m, blacks, current, 0, [&](const std::vector<int>& choice) {
        std::vector<std::pair<int, int>> pairs;
        pairs.reserve(choice.size());
        for (int c : choice)
            pairs.push_back(white_pairs[static_cast<std::size_t>(c)]);
        if (!connected_on_whites(d2, pairs))
            return;
        std::vector<int> rank(static_cast<std::size_t>(d2));
        std::iota(rank.begin(), rank.end(), 0);
        Code best = encode(pairs, rank);
        while (std::next_permutation(rank.begin(), rank.end()))
            best = std::min(best, encode(pairs, rank));
        classes.emplace(std::move(best), true);
    });

    std::vector<PearlChain> out;
    out.reserve(classes.size());
    for (const auto& [code, unused] : classes)
        out.push_back(PearlChain::from_black_pairs(d2, code));
    return out;
}

std::vector<std::vector<std::size_t>> automorphisms(const PearlChain& chain)
{
    const auto whites = chain.white_vertices();
    const auto blacks = chain.black_vertices();
    const auto pairs = chain.black_pairs();
    const std::size_t n = chain.vertex_count();

    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> wperm = whites;
    std::sort(wperm.begin(), wperm.end());
    do {
        std::vector<std::size_t> image(n);
        for (std::size_t i = 0; i < whites.size(); ++i)
            image[whites[i]] = wperm[i];
        // Group blacks by their image pair and by their own pair; a white
        // permutation extends iff the two pair multisets agree.
        std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> by_pair;
        for (std::size_t j = 0; j < blacks.size(); ++j)
            by_pair[pairs[j]].push_back(blacks[j]);
        std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> sources;
        for (std::size_t j = 0; j < blacks.size(); ++j)
            sources[std::minmax(image[pairs[j].first], image[pairs[j].second])].push_back(blacks[j]);
        bool ok = sources.size() == by_pair.size();
        for (const auto& [key, from] : sources) {
            auto it = by_pair.find(key);
            if (it == by_pair.end() || it->second.size() != from.size()) {
                ok = false;
                break;
            }
        }
        if (!ok)
            continue;

        // Every bijection between blacks sharing a pair extends the map.
        std::vector<std::vector<std::size_t>> partial{image};
        for (const auto& [key, from] : sources) {
            std::vector<std::size_t> targets = by_pair[key];
            std::sort(targets.begin(), targets.end());
            std::vector<std::vector<std::size_t>> next;
            do {
                for (const auto& p : partial) {
                    auto q = p;
                    for (std::size_t j = 0; j < from.size(); ++j)
                        q[from[j]] = targets[j];
                    next.push_back(std::move(q));
                }
            } while (std::next_permutation(targets.begin(), targets.end()));
            partial = std::move(next);
        }
        for (auto& p : partial)
            out.push_back(std::move(p));
    } while (std::next_permutation(wperm.begin(), wperm.end()));
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t automorphism_count(const PearlChain& chain)
{
    const auto pairs = white_ordinal_pairs(chain);
    std::map<std::pair<int, int>, int> multiplicity;
    for (auto p : pairs)
        ++multiplicity[p];
    std::uint64_t black_factor = 1;
    for (const auto& [p, m] : multiplicity)
        for (int i = 2; i <= m; ++i)
            black_factor *= static_cast<std::uint64_t>(i);

    const auto reference = encode(pairs, [&] {
        std::vector<int> r(static_cast<std::size_t>(chain.d2()));
        std::iota(r.begin(), r.end(), 0);
        return r;
    }());
    std::vector<int> rank(static_cast<std::size_t>(chain.d2()));
    std::iota(rank.begin(), rank.end(), 0);
    std::uint64_t white_symmetries = 0;
    do {
        if (encode(pairs, rank) == reference)
            ++white_symmetries;
    } while (std::next_permutation(rank.begin(), rank.end()));
    return white_symmetries * black_factor;
}

std::vector<LeakingVector> leaking_vectors(const PearlChain& chain, const LeakyDegree& delta)
{
    const auto whites = chain.white_vertices();
    if (delta.values.size() != whites.size())
        throw std::invalid_argument("leaky degree has " + std::to_string(delta.values.size())
                                    + " entries, chain has " + std::to_string(whites.size()) + " white vertices");
    std::vector<int> values = delta.values;
    std::sort(values.begin(), values.end());
    std::vector<LeakingVector> out;
    do {
        LeakingVector v = LeakingVector::zero(chain.vertex_count());
        for (std::size_t i = 0; i < whites.size(); ++i)
            v.values[whites[i]] = values[i];
        out.push_back(std::move(v));
    } while (std::next_permutation(values.begin(), values.end()));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace pearl
