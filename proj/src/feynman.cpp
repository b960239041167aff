#include "pearl/feynman.hpp"

#include <map>
#include <numeric>

#include "pearl/parallel.hpp"

namespace pearl {

// x-bound. Weight each x-exponent by the Ω-place of its variable and call
// the weighted sum the potential; it starts at 0 and must end at
// Σ place(i)·l_i. A q^0 propagator term x^d (d >= 1) lowers the potential by
// at least d, a term x^{±d} q^m raises it by at most d(n-1) <= m(n-1). So the
// q^0 weights of a contributing monomial sum to at most D(n-1) + Σ|l_i|(n-1),
// its q-term weights to at most D, and every partial exponent of one variable
// is bounded by their total.
int feynman_x_bound(std::size_t vertex_count, int max_degree, const LeakingVector& leak)
{
    const int n = static_cast<int>(vertex_count);
    return std::max(1, max_degree * n + leak.abs_sum() * n);
}

void check_leaky_degree(int d2, const LeakyDegree& delta)
{
    if (static_cast<int>(delta.values.size()) != d2)
        throw std::invalid_argument("leaky degree must have d2 = " + std::to_string(d2) + " entries");
    if (delta.sum() != 0)
        throw std::invalid_argument("leaky degree must sum to zero");
}

namespace {

void check_request(const FeynmanRequest& req)
{
    const std::size_t n = req.chain.vertex_count();
    if (req.order.size() != n)
        throw std::invalid_argument("order size does not match the vertex count");
    if (req.leak.values.size() != n)
        throw std::invalid_argument("leaking vector size does not match the vertex count");
    if (req.max_degree < 0)
        throw std::invalid_argument("negative q-degree bound");
}

/// Edges grouped by black vertex so that every black variable is finished
/// two steps after it first appears. Black vertices are taken greedily:
/// most white vertices finished first, then fewest white vertices opened.
std::vector<std::size_t> elimination_order(const PearlChain& chain)
{
    const std::size_t n = chain.vertex_count();
    std::vector<std::size_t> remaining(n, 0);
    std::vector<bool> opened(n, false);
    for (std::size_t v = 0; v < n; ++v)
        remaining[v] = chain.incident_edges(v).size();
    auto blacks = chain.black_vertices();
    std::vector<std::size_t> order;
    order.reserve(chain.edge_count());
    while (!blacks.empty()) {
        std::size_t best = 0;
        std::pair<int, int> best_score{-1, 0};
        for (std::size_t i = 0; i < blacks.size(); ++i) {
            std::map<std::size_t, std::size_t> uses;
            for (std::size_t k : chain.incident_edges(blacks[i])) {
                const auto& e = chain.edges()[k];
                ++uses[e.u == blacks[i] ? e.v : e.u];
            }
            int finished = 0;
            int fresh = 0;
            for (const auto& [w, c] : uses) {
                finished += remaining[w] == c ? 1 : 0;
                fresh += opened[w] ? 0 : 1;
            }
            const std::pair<int, int> score{finished, -fresh};
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }
        for (std::size_t k : chain.incident_edges(blacks[best])) {
            const auto& e = chain.edges()[k];
            const std::size_t w = e.u == blacks[best] ? e.v : e.u;
            --remaining[w];
            opened[w] = true;
            order.push_back(k);
        }
        blacks.erase(blacks.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return order;
}

/// ∏ propagator slices, pruned to the terms that can still reach x^l.
/// With `refined` every edge gets its own q-variable, otherwise all share
/// one.
TruncatedSeries propagator_product(const FeynmanRequest& req, bool refined)
{
    check_request(req);
    const PearlChain& chain = req.chain;
    const std::size_t n = chain.vertex_count();
    const int D = req.max_degree;
    const int B = feynman_x_bound(n, D, req.leak);

    VariableSet vars;
    for (const auto& v : chain.vertices())
        vars.x.push_back(v.label);
    if (refined)
        for (const auto& e : chain.edges())
            vars.q.push_back(e.label);
    else
        vars.q.push_back("q");
    const Truncation trunc{D, B};

    const auto steps = elimination_order(chain);
    std::vector<std::size_t> finished_at(n, 0);
    for (std::size_t s = 0; s < steps.size(); ++s) {
        const auto& e = chain.edges()[steps[s]];
        finished_at[e.u] = s;
        finished_at[e.v] = s;
    }

    const auto& place = req.order.places();
    const auto& l = req.leak.values;
    long target_potential = 0;
    for (std::size_t i = 0; i < n; ++i)
        target_potential += static_cast<long>(place[i]) * l[i];
    const long rise = static_cast<long>(n) - 1;

    TruncatedSeries acc = TruncatedSeries::one(vars, trunc);
    for (std::size_t s = 0; s < steps.size(); ++s) {
        const std::size_t k = steps[s];
        const auto& e = chain.edges()[k];
        const bool u_first = place[e.u] < place[e.v];
        const std::size_t num = u_first ? e.u : e.v;
        const std::size_t den = u_first ? e.v : e.u;
        const auto slice = propagator(vars, trunc, num, den, refined ? k : 0);

        std::vector<std::size_t> done;
        for (std::size_t v : {e.u, e.v})
            if (finished_at[v] == s)
                done.push_back(v);

        acc = multiply_filtered(acc, slice, [&](const TruncatedSeries::Key& key) {
            for (std::size_t v : done)
                if (key[v] != l[v])
                    return false;
            long potential = 0;
            int qdeg = 0;
            for (std::size_t i = 0; i < n; ++i)
                potential += static_cast<long>(place[i]) * key[i];
            for (std::size_t i = n; i < key.size(); ++i)
                qdeg += key[i];
            return potential + (D - qdeg) * rise >= target_potential;
        });
        if (acc.is_zero())
            break;
    }
    return acc;
}

} // namespace

TruncatedSeries refined_feynman(const FeynmanRequest& req)
{
    return propagator_product(req, true).extract_x(req.leak.values);
}

QSeries feynman(const FeynmanRequest& req)
{
    const auto in_q = propagator_product(req, false).extract_x(req.leak.values);
    QSeries out(req.max_degree);
    for (const auto& [key, c] : in_q.terms())
        out[key[0]] += c;
    return out;
}

std::vector<QSeries> order_summands(const PearlChain& chain, const LeakingVector& leak, int max_degree)
{
    const auto orders = Order::all(chain.vertex_count());
    return parallel_map<QSeries>(orders.size(), [&](std::size_t i) {
        return feynman({chain, orders[i], leak, max_degree});
    });
}

QSeries order_sum(const PearlChain& chain, const LeakingVector& leak, int max_degree)
{
    QSeries total(max_degree);
    for (const auto& s : order_summands(chain, leak, max_degree))
        total += s;
    return total;
}

QSeries order_sum_serial(const PearlChain& chain, const LeakingVector& leak, int max_degree)
{
    QSeries total(max_degree);
    for (const auto& order : Order::all(chain.vertex_count()))
        total += feynman({chain, order, leak, max_degree});
    return total;
}

namespace {

GeneratingSeries finish_series(const PearlChain& chain, const LeakyDegree& delta, int max_degree, bool normalize,
                               QSeries raw)
{
    GeneratingSeries out;
    out.d2 = chain.d2();
    out.g = chain.genus();
    out.delta = delta;
    out.max_degree = max_degree;
    out.normalized = normalize;
    if (normalize)
        raw *= Rational(1) / Rational(static_cast<long>(automorphism_count(chain)));
    out.discarded_constant_term = raw[0];
    raw[0] = Rational(0);
    out.series = std::move(raw);
    return out;
}

} // namespace

GeneratingSeries pearl_chain_series(const PearlChain& chain, const LeakyDegree& delta, int max_degree, bool normalize)
{
    const auto vectors = leaking_vectors(chain, delta);
    const auto orders = Order::all(chain.vertex_count());
    const std::size_t tasks = vectors.size() * orders.size();
    const auto parts = parallel_map<QSeries>(tasks, [&](std::size_t t) {
        return feynman({chain, orders[t % orders.size()], vectors[t / orders.size()], max_degree});
    });
    QSeries raw(max_degree);
    for (const auto& p : parts)
        raw += p;
    return finish_series(chain, delta, max_degree, normalize, std::move(raw));
}

GeneratingSeries pearl_chain_series_serial(const PearlChain& chain, const LeakyDegree& delta, int max_degree,
                                           bool normalize)
{
    QSeries raw(max_degree);
    for (const auto& v : leaking_vectors(chain, delta))
        for (const auto& order : Order::all(chain.vertex_count()))
            raw += feynman({chain, order, v, max_degree});
    return finish_series(chain, delta, max_degree, normalize, std::move(raw));
}

GeneratingReport generating_series(int d2, int g, const LeakyDegree& delta, int max_degree, bool normalize)
{
    check_leaky_degree(d2, delta);
    if (max_degree < 0)
        throw std::invalid_argument("negative q-degree bound");
    GeneratingReport report;
    report.total.d2 = d2;
    report.total.g = g;
    report.total.delta = delta;
    report.total.max_degree = max_degree;
    report.total.normalized = normalize;
    report.total.series = QSeries(max_degree);
    for (auto& chain : enumerate_pearl_chains(d2, g)) {
        auto series = pearl_chain_series(chain, delta, max_degree, normalize);
        report.total.series += series.series;
        report.total.discarded_constant_term += series.discarded_constant_term;
        const auto aut = automorphism_count(chain);
        report.breakdown.push_back({std::move(chain), aut, std::move(series)});
    }
    return report;
}

} // namespace pearl
