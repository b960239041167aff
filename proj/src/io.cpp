#include "pearl/io.hpp"

#include <map>

namespace pearl {

namespace {

json rationals(const std::vector<Rational>& values)
{
    json out = json::array();
    for (const auto& c : values)
        out.push_back(c.to_string());
    return out;
}

Rational rational_from(const json& j)
{
    if (j.is_number_integer())
        return Rational(j.get<long>());
    if (!j.is_string())
        throw FormatError("coefficient must be a \"num/den\" string");
    return Rational::parse(j.get<std::string>());
}

const json& field(const json& j, const char* name)
{
    if (!j.is_object() || !j.contains(name))
        throw FormatError(std::string("missing field \"") + name + "\"");
    return j.at(name);
}

} // namespace

json to_json(const PearlChain& chain)
{
    json white = json::array();
    json black = json::array();
    for (const auto& v : chain.vertices())
        (v.color == Color::white ? white : black).push_back(v.label);
    json edges = json::array();
    for (const auto& e : chain.edges())
        edges.push_back({e.label, chain.vertices()[e.u].label, chain.vertices()[e.v].label});
    return {{"d2", chain.d2()}, {"g", chain.genus()}, {"white", white}, {"black", black}, {"edges", edges}};
}

PearlChain pearl_chain_from_json(const json& j)
{
    Multigraph graph;
    std::map<std::string, std::size_t> index;
    auto add = [&](const json& labels, Color color) {
        for (const auto& l : labels) {
            index.emplace(l.get<std::string>(), graph.vertices.size());
            graph.vertices.push_back({l.get<std::string>(), color});
        }
    };
    try {
        add(field(j, "white"), Color::white);
        add(field(j, "black"), Color::black);
        for (const auto& e : field(j, "edges")) {
            if (!e.is_array() || e.size() != 3)
                throw FormatError("edge must be [label, vertex, vertex]");
            auto lookup = [&](const json& v) {
                const auto it = index.find(v.get<std::string>());
                if (it == index.end())
                    throw FormatError("edge refers to unknown vertex " + v.get<std::string>());
                return it->second;
            };
            graph.edges.push_back({e[0].get<std::string>(), lookup(e[1]), lookup(e[2])});
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed pearl chain: ") + e.what());
    }
    std::pair<int, int> type;
    const bool typed = j.contains("d2") && j.contains("g");
    if (typed)
        type = {j.at("d2").get<int>(), j.at("g").get<int>()};
    const auto report = validate_pearl_chain(graph, typed ? &type : nullptr);
    if (!report.valid) {
        std::string msg = "not a pearl chain:";
        for (const auto& [v, detail] : report.violations)
            msg += " " + to_string(v) + " (" + detail + ")";
        throw FormatError(msg);
    }
    return PearlChain::from_graph(std::move(graph));
}

json to_json(const TruncatedSeries& s)
{
    json terms = json::array();
    const std::size_t nx = s.nx();
    for (const auto& [key, c] : s.terms()) {
        std::vector<int> x(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(nx));
        std::vector<int> q(key.begin() + static_cast<std::ptrdiff_t>(nx), key.end());
        terms.push_back({{"x", x}, {"q", q}, {"c", c.to_string()}});
    }
    return {{"xvars", s.variables().x},
            {"qvars", s.variables().q},
            {"D", s.truncation().max_q_degree},
            {"B", s.truncation().max_x_abs},
            {"terms", terms}};
}

TruncatedSeries truncated_series_from_json(const json& j)
{
    try {
        VariableSet vars{field(j, "xvars").get<std::vector<std::string>>(),
                         field(j, "qvars").get<std::vector<std::string>>()};
        TruncatedSeries s(std::move(vars), Truncation{field(j, "D").get<int>(), field(j, "B").get<int>()});
        for (const auto& t : field(j, "terms")) {
            const auto x = field(t, "x").get<std::vector<int>>();
            const auto q = field(t, "q").get<std::vector<int>>();
            if (x.size() != s.nx() || q.size() != s.nq())
                throw FormatError("term exponent vector has the wrong length");
            s.add_term(x, q, rational_from(field(t, "c")));
        }
        return s;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed series: ") + e.what());
    } catch (const TruncationError& e) {
        throw FormatError(std::string("series term outside its own bounds: ") + e.what());
    }
}

json coefficients_json(const QSeries& s)
{
    return rationals(s.coefficients());
}

json series_metadata(bool normalized)
{
    return {{"exponent", "q^d1 where d1 is the degree of the cover over the base point p0"},
            {"normalization", normalized ? "each pearl chain weighted by 1/|Aut(P)|"
                                         : "labeled count, no 1/|Aut(P)| factor"},
            {"gromov_witten",
             "by the correspondence theorem for E x P1 these tropical counts are the Gromov-Witten invariants "
             "N_(d1,d2,g) (normalized convention); the algebraic side is not computed here"}};
}

json to_json(const GeneratingSeries& s)
{
    return {{"d2", s.d2},
            {"g", s.g},
            {"delta", s.delta.values},
            {"D", s.max_degree},
            {"normalized", s.normalized},
            {"coeffs", coefficients_json(s.series)},
            {"discarded_constant_term", s.discarded_constant_term.to_string()}};
}

json to_json(const GeneratingReport& r)
{
    json out = to_json(r.total);
    json breakdown = json::array();
    for (const auto& part : r.breakdown)
        breakdown.push_back({{"chain", to_json(part.chain)},
                             {"automorphisms", part.automorphisms},
                             {"coeffs", coefficients_json(part.series.series)},
                             {"discarded_constant_term", part.series.discarded_constant_term.to_string()}});
    out["breakdown"] = breakdown;
    out["metadata"] = series_metadata(r.total.normalized);
    return out;
}

json to_json(const CoverCountReport& r)
{
    json out = to_json(r.labeled);
    out["automorphisms"] = r.automorphisms;
    if (r.orbit_counts) {
        json orbits = json::array();
        for (const auto& c : r.orbit_count)
            orbits.push_back(Rational(c).to_string());
        out["orbit_count"] = orbits;
        out["weighted_orbit_count"] = rationals(r.weighted_orbit_count);
    }
    out["degree_mismatch"] = r.degree_mismatch;
    return out;
}

json to_json(const CoverDatum& c)
{
    json edges = json::array();
    for (const auto& e : c.edges)
        edges.push_back({{"weight", e.weight},
                         {"direction", e.direction == Direction::plus ? "+" : "-"},
                         {"windings", e.windings},
                         {"crossings", e.crossings}});
    return {{"edges", edges}, {"multidegree", c.multidegree()}, {"multiplicity", c.multiplicity()}};
}

json to_json(const ValidationReport& r)
{
    json violations = json::array();
    for (const auto& [v, detail] : r.violations)
        violations.push_back({{"violation", to_string(v)}, {"detail", detail}});
    json out = {{"valid", r.valid}, {"violations", violations}};
    if (r.valid) {
        out["d2"] = r.d2;
        out["g"] = r.g;
    }
    return out;
}

QSeries qseries_from_json(const json& j)
{
    auto from_list = [](const json& list) {
        if (!list.is_array() || list.empty())
            throw FormatError("coefficient list must be a nonempty array");
        QSeries s(static_cast<int>(list.size()) - 1);
        for (std::size_t i = 0; i < list.size(); ++i)
            s[static_cast<int>(i)] = rational_from(list[i]);
        return s;
    };
    if (j.is_array())
        return from_list(j);
    if (j.is_object() && j.contains("coeffs"))
        return from_list(j.at("coeffs"));
    if (j.is_object() && j.contains("terms")) {
        const auto s = truncated_series_from_json(j);
        if (s.nx() != 0 || s.nq() != 1)
            throw FormatError("series must have no x-variables and exactly one q-variable");
        return s.specialize_q();
    }
    throw FormatError("input is not a q-series");
}

std::string dump_canonical(const json& j)
{
    return j.dump(2) + "\n";
}

} // namespace pearl
