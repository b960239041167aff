#include "pearl/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <unistd.h>

#include "pearl/covers.hpp"
#include "pearl/feynman.hpp"
#include "pearl/io.hpp"
#include "pearl/parallel.hpp"
#include "pearl/pearls.hpp"
#include "pearl/quasimod.hpp"

namespace pearl::cli {

namespace fs = std::filesystem;

namespace {

std::vector<int> parse_ints(const std::string& text)
{
    return LeakyDegree::parse(text).values;
}

int require(const std::optional<int>& v, const char* flag)
{
    if (!v)
        throw std::invalid_argument(std::string("missing ") + flag);
    return *v;
}

LeakyDegree delta_of(const RunConfig& c)
{
    const int d2 = require(c.d2, "--d2");
    auto delta = c.delta ? LeakyDegree::parse(*c.delta) : LeakyDegree::zero(d2);
    check_leaky_degree(d2, delta);
    return delta;
}

void check_type(const RunConfig& c)
{
    if (require(c.d2, "--d2") < 1 || require(c.g, "--genus") < 1)
        throw std::invalid_argument("--d2 and --genus must be positive");
    if (c.max_degree < 0)
        throw std::invalid_argument("--max-degree must be nonnegative");
}

json read_json_input(const std::string& path)
{
    std::stringstream text;
    if (path.empty() || path == "-") {
        text << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in)
            throw std::invalid_argument("cannot read " + path);
        text << in.rdbuf();
    }
    try {
        return json::parse(text.str());
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("input is not JSON: ") + e.what());
    }
}

/// The chain from --input, or entry --chain of the enumeration for (d2, g).
PearlChain select_chain(const RunConfig& c)
{
    if (!c.input.empty())
        return pearl_chain_from_json(read_json_input(c.input));
    check_type(c);
    auto chains = enumerate_pearl_chains(*c.d2, *c.g);
    if (c.chain_index < 0 || static_cast<std::size_t>(c.chain_index) >= chains.size())
        throw std::invalid_argument("no pearl chain with index " + std::to_string(c.chain_index) + " of type ("
                                    + std::to_string(*c.d2) + "," + std::to_string(*c.g) + "); there are "
                                    + std::to_string(chains.size()));
    return std::move(chains[static_cast<std::size_t>(c.chain_index)]);
}

LeakingVector leak_of(const RunConfig& c, const PearlChain& chain)
{
    if (!c.leak)
        return LeakingVector::zero(chain.vertex_count());
    LeakingVector v{parse_ints(*c.leak)};
    if (v.values.size() != chain.vertex_count())
        throw std::invalid_argument("--leak needs one entry per vertex");
    return v;
}

Order order_of(const RunConfig& c, const PearlChain& chain)
{
    if (!c.order)
        throw std::invalid_argument("missing --order");
    auto order = Order::parse(*c.order);
    if (order.size() != chain.vertex_count())
        throw std::invalid_argument("--order needs one entry per vertex");
    return order;
}

std::vector<int> multidegree_of(const RunConfig& c, const PearlChain& chain)
{
    if (!c.multidegree)
        throw std::invalid_argument("missing --multidegree");
    auto a = parse_ints(*c.multidegree);
    if (a.size() != chain.edge_count())
        throw std::invalid_argument("--multidegree needs one entry per edge");
    for (int x : a)
        if (x < 0)
            throw std::invalid_argument("--multidegree entries must be nonnegative");
    return a;
}

json cmd_pearls(const RunConfig& c)
{
    check_type(c);
    json chains = json::array();
    for (const auto& chain : enumerate_pearl_chains(*c.d2, *c.g)) {
        json j = to_json(chain);
        j["automorphisms"] = automorphism_count(chain);
        chains.push_back(j);
    }
    return {{"d2", *c.d2}, {"g", *c.g}, {"count", chains.size()}, {"chains", chains}};
}

json cmd_series(const RunConfig& c)
{
    check_type(c);
    return to_json(generating_series(*c.d2, *c.g, delta_of(c), c.max_degree, c.normalized));
}

json cmd_feynman(const RunConfig& c)
{
    if (c.max_degree < 0)
        throw std::invalid_argument("--max-degree must be nonnegative");
    const auto chain = select_chain(c);
    const auto leak = leak_of(c, chain);
    json out = {{"chain", to_json(chain)}, {"leak", leak.values}, {"D", c.max_degree}};
    if (c.order) {
        const auto order = order_of(c, chain);
        out["order"] = order.to_string();
        out["coeffs"] = coefficients_json(feynman({chain, order, leak, c.max_degree}));
        if (c.refined)
            out["refined"] = to_json(refined_feynman({chain, order, leak, c.max_degree}));
        return out;
    }
    const auto orders = Order::all(chain.vertex_count());
    const auto summands = order_summands(chain, leak, c.max_degree);
    json list = json::array();
    QSeries total(c.max_degree);
    for (std::size_t i = 0; i < orders.size(); ++i) {
        list.push_back({{"order", orders[i].to_string()}, {"coeffs", coefficients_json(summands[i])}});
        total += summands[i];
    }
    out["summands"] = list;
    out["coeffs"] = coefficients_json(total);
    return out;
}

json cmd_covers(const RunConfig& c)
{
    if (c.multidegree) {
        const auto chain = select_chain(c);
        const auto order = order_of(c, chain);
        const auto leak = leak_of(c, chain);
        const auto a = multidegree_of(c, chain);
        const auto result = enumerate_covers(chain, order, leak, a);
        json covers = json::array();
        for (const auto& cover : result.covers)
            covers.push_back(to_json(cover));
        return {{"chain", to_json(chain)},   {"order", order.to_string()},
                {"leak", leak.values},       {"multidegree", a},
                {"count", Rational(result.count).to_string()},
                {"weight_cap", result.weight_cap}, {"covers", covers}};
    }
    check_type(c);
    const auto delta = delta_of(c);
    const auto D = static_cast<std::size_t>(c.max_degree);
    QSeries total(c.max_degree);
    std::vector<mpz_class> orbit_total(D + 1, 0);
    std::vector<Rational> weighted_total(D + 1);
    json chains = json::array();
    for (const auto& chain : enumerate_pearl_chains(*c.d2, *c.g)) {
        const auto report = count_covers_by_degree(chain, delta, c.max_degree, c.normalized, c.orbits);
        total += report.labeled.series;
        if (c.orbits)
            for (std::size_t d = 0; d <= D; ++d) {
                orbit_total[d] += report.orbit_count[d];
                weighted_total[d] += report.weighted_orbit_count[d];
            }
        json j = to_json(report);
        j["chain"] = to_json(chain);
        chains.push_back(j);
    }
    json out = {{"d2", *c.d2},       {"g", *c.g},         {"delta", delta.values}, {"D", c.max_degree},
                {"normalized", c.normalized}, {"coeffs", coefficients_json(total)}, {"chains", chains}};
    if (c.orbits) {
        json orbits = json::array();
        json weighted = json::array();
        for (std::size_t d = 0; d <= D; ++d) {
            orbits.push_back(Rational(orbit_total[d]).to_string());
            weighted.push_back(weighted_total[d].to_string());
        }
        out["orbit_count"] = orbits;
        out["weighted_orbit_count"] = weighted;
    }
    out["metadata"] = series_metadata(c.normalized);
    return out;
}

struct Cell {
    std::size_t chain = 0;
    Order order;
    LeakingVector leak;
    bool pass = true;
    std::size_t nonzero = 0; ///< multidegrees with a nonzero count
    std::vector<int> mismatch;
    std::string feynman_value;
    std::string cover_value;
};

Cell check_cell(const PearlChain& chain, std::size_t index, const Order& order, const LeakingVector& leak, int D)
{
    Cell cell;
    cell.chain = index;
    cell.order = order;
    cell.leak = leak;
    std::map<std::vector<int>, Rational> refined;
    const auto series = refined_feynman({chain, order, leak, D});
    for (const auto& [key, value] : series.terms())
        refined.emplace(std::vector<int>(key.begin(), key.end()), value);
    std::map<std::vector<int>, Rational> counted;
    for (const auto& [a, count] : cover_counts_by_multidegree(chain, order, leak, D))
        counted.emplace(a, Rational(count));
    // q^0 of the product never counts covers.
    refined.erase(std::vector<int>(chain.edge_count(), 0));
    std::set<std::vector<int>> keys;
    for (const auto& [a, v] : refined)
        keys.insert(a);
    for (const auto& [a, v] : counted)
        keys.insert(a);
    cell.nonzero = keys.size();
    for (const auto& a : keys) {
        const auto f = refined.contains(a) ? refined.at(a) : Rational(0);
        const auto k = counted.contains(a) ? counted.at(a) : Rational(0);
        if (!(f == k)) {
            cell.pass = false;
            cell.mismatch = a;
            cell.feynman_value = f.to_string();
            cell.cover_value = k.to_string();
            break;
        }
    }
    return cell;
}

json cmd_verify(const RunConfig& c, std::string& counterexample)
{
    check_type(c);
    const auto delta = delta_of(c);
    struct Task {
        std::size_t chain;
        std::size_t order;
        LeakingVector leak;
    };
    const auto chains = enumerate_pearl_chains(*c.d2, *c.g);
    std::vector<std::vector<Order>> orders;
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < chains.size(); ++i) {
        orders.push_back(Order::all(chains[i].vertex_count()));
        for (const auto& v : leaking_vectors(chains[i], delta))
            for (std::size_t o = 0; o < orders[i].size(); ++o)
                tasks.push_back({i, o, v});
    }
    const auto cells = parallel_map<Cell>(tasks.size(), [&](std::size_t t) {
        const auto& task = tasks[t];
        return check_cell(chains[task.chain], task.chain, orders[task.chain][task.order], task.leak, c.max_degree);
    });

    std::size_t passed = 0;
    json per_cell = json::array();
    json first = nullptr;
    for (const auto& cell : cells) {
        passed += cell.pass ? 1 : 0;
        if (!c.summary)
            per_cell.push_back({{"chain", cell.chain},
                                {"order", cell.order.to_string()},
                                {"leak", cell.leak.values},
                                {"nonzero_multidegrees", cell.nonzero},
                                {"pass", cell.pass}});
        if (!cell.pass && first.is_null()) {
            first = {{"chain", cell.chain},          {"order", cell.order.to_string()},
                     {"leak", cell.leak.values},    {"multidegree", cell.mismatch},
                     {"refined_feynman", cell.feynman_value}, {"covers", cell.cover_value}};
            counterexample = "counterexample: chain " + std::to_string(cell.chain) + ", order "
                             + cell.order.to_string() + ", multidegree " + json(cell.mismatch).dump()
                             + ": refined Feynman " + cell.feynman_value + ", covers " + cell.cover_value;
        }
    }
    json out = {{"d2", *c.d2},
                {"g", *c.g},
                {"delta", delta.values},
                {"D", c.max_degree},
                {"chains", chains.size()},
                {"cells", cells.size()},
                {"passed", passed},
                {"failed", cells.size() - passed},
                {"pass", passed == cells.size()},
                {"first_counterexample", first}};
    if (!c.summary)
        out["per_cell"] = per_cell;
    return out;
}

std::optional<int> type_weight(const json& j)
{
    const json* src = &j;
    if (j.is_object() && j.contains("chain"))
        src = &j.at("chain");
    if (src->is_object() && src->contains("d2") && src->contains("g"))
        return 4 * (src->at("d2").get<int>() + src->at("g").get<int>() - 1);
    return std::nullopt;
}

json decomposition_json(const QSeries& s, int W, int guard, int& exit_code, std::string& error)
{
    const auto result = decompose(s, W, guard);
    if (!result) {
        const auto& f = *result.failure;
        const bool short_series = f.kind == DecompositionFailure::Kind::insufficient_degree;
        if (exit_code == success)
            exit_code = short_series ? invalid_input : verification_failure;
        if (error.empty())
            error = f.message;
        return {{"max_weight", W},
                {"error", short_series ? "insufficient_degree" : "inconsistent"},
                {"first_mismatch", f.first_mismatch},
                {"message", f.message}};
    }
    json out = to_json(*result.decomposition);
    json by_weight = json::object();
    for (const auto& [w, part] : weight_profile(*result.decomposition).by_weight)
        by_weight[std::to_string(w)] = to_json(part)["monomials"];
    out["by_weight"] = by_weight;
    out["D"] = s.max_degree();
    out["solve_rows"] = result.solve_rows;
    out["verified_rows"] = result.verified_rows;
    return out;
}

json cmd_quasimod(const RunConfig& c, int& exit_code, std::string& error)
{
    if (c.guard < 1)
        throw std::invalid_argument("--guard must be positive");
    const json in = read_json_input(c.input);
    std::optional<int> W = c.max_weight ? c.max_weight : type_weight(in);
    if (!W)
        throw std::invalid_argument("--max-weight is required when the input carries no (d2, g)");
    if (in.is_object() && in.contains("summands")) {
        json list = json::array();
        for (const auto& s : in.at("summands")) {
            json d = decomposition_json(qseries_from_json(s), *W, c.guard, exit_code, error);
            if (s.contains("order"))
                d["order"] = s.at("order");
            list.push_back(d);
        }
        return {{"max_weight", *W}, {"summands", list}};
    }
    return decomposition_json(qseries_from_json(in), *W, c.guard, exit_code, error);
}

json cmd_export(const RunConfig& c)
{
    const auto chain = select_chain(c);
    const auto order = order_of(c, chain);
    const auto leak = leak_of(c, chain);
    const auto a = multidegree_of(c, chain);
    json diagrams = json::array();
    for (const auto& cover : enumerate_covers(chain, order, leak, a).covers)
        diagrams.push_back(to_json(export_floor_diagram(cover, chain, order, leak)));
    return {{"chain", to_json(chain)}, {"order", order.to_string()}, {"leak", leak.values},
            {"multidegree", a},        {"diagrams", diagrams}};
}

void write_atomically(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string cache_dir_of(const RunConfig& c)
{
    if (!c.cache_dir.empty())
        return c.cache_dir;
    if (const char* env = std::getenv("PEARL_CACHE_DIR"))
        return env;
    return {};
}

/// Cached series lookup; a missing or unusable entry is recomputed.
std::string cached_series(const RunConfig& c, Outcome& outcome)
{
    const std::string dir = cache_dir_of(c);
    if (dir.empty())
        return dump_canonical(cmd_series(c));
    const json config = canonical(c);
    const fs::path path = fs::path(dir) / (cache_key(c) + ".json");
    if (fs::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream text;
        text << in.rdbuf();
        try {
            const json entry = json::parse(text.str());
            if (entry.at("config") == config && entry.at("result").is_object())
                return dump_canonical(entry.at("result"));
            outcome.warnings.push_back("cache entry " + path.string() + " belongs to another configuration; recomputing");
        } catch (const std::exception&) {
            outcome.warnings.push_back("cache entry " + path.string() + " is corrupt; recomputing");
        }
    }
    const json result = cmd_series(c);
    try {
        write_atomically(path, dump_canonical({{"config", config}, {"result", result}}));
    } catch (const std::exception& e) {
        outcome.warnings.push_back(std::string("could not write cache entry: ") + e.what());
    }
    return dump_canonical(result);
}

} // namespace

json canonical(const RunConfig& c)
{
    auto opt = [](const auto& v) -> json { return v ? json(*v) : json(nullptr); };
    json delta = nullptr;
    if (c.delta)
        delta = LeakyDegree::parse(*c.delta).values;
    auto ints = [](const std::optional<std::string>& s) -> json {
        return s ? json(LeakyDegree::parse(*s).values) : json(nullptr);
    };
    return {{"command", c.command},
            {"d2", opt(c.d2)},
            {"g", opt(c.g)},
            {"delta", delta},
            {"D", c.max_degree},
            {"W", opt(c.max_weight)},
            {"order", ints(c.order)},
            {"leak", ints(c.leak)},
            {"multidegree", ints(c.multidegree)},
            {"chain", c.chain_index},
            {"normalized", c.normalized},
            {"orbits", c.orbits},
            {"refined", c.refined},
            {"summary", c.summary},
            {"guard", c.guard},
            {"input", c.input}};
}

std::string cache_key(const RunConfig& c)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : canonical(c).dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Outcome run(const RunConfig& c)
{
    Outcome outcome;
    try {
        if (c.jobs < 0)
            throw std::invalid_argument("--jobs must be nonnegative");
        set_jobs(c.jobs);
        if (c.command == "pearls") {
            outcome.output = dump_canonical(cmd_pearls(c));
        } else if (c.command == "series") {
            outcome.output = cached_series(c, outcome);
        } else if (c.command == "feynman") {
            outcome.output = dump_canonical(cmd_feynman(c));
        } else if (c.command == "covers") {
            outcome.output = dump_canonical(cmd_covers(c));
        } else if (c.command == "verify") {
            std::string counterexample;
            const json report = cmd_verify(c, counterexample);
            outcome.output = dump_canonical(report);
            if (!report.at("pass").get<bool>()) {
                outcome.exit_code = verification_failure;
                outcome.error = counterexample;
            }
        } else if (c.command == "quasimod") {
            outcome.output = dump_canonical(cmd_quasimod(c, outcome.exit_code, outcome.error));
        } else if (c.command == "export-floor-diagram") {
            outcome.output = dump_canonical(cmd_export(c));
        } else {
            throw std::invalid_argument("unknown command '" + c.command + "'");
        }
    } catch (const ResourceLimitError& e) {
        outcome = {resource_exceeded, {}, outcome.warnings, e.what()};
    } catch (const TruncationError& e) {
        outcome = {resource_exceeded, {}, outcome.warnings, e.what()};
    } catch (const std::invalid_argument& e) {
        outcome = {invalid_input, {}, outcome.warnings, e.what()};
    } catch (const std::domain_error& e) {
        outcome = {invalid_input, {}, outcome.warnings, e.what()};
    } catch (const std::exception& e) {
        outcome = {invalid_input, {}, outcome.warnings, e.what()};
    }
    return outcome;
}

int main(int argc, char** argv)
{
    CLI::App app{"Tropical curve counts in E x P1 via pearl chains"};
    app.require_subcommand(1);
    RunConfig c;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--jobs", c.jobs, "worker threads (0: OpenMP default)");
        sub->add_option("--out", c.out, "write the JSON result to this file");
    };
    auto type = [&](CLI::App* sub) {
        sub->add_option("--d2", c.d2, "number of white vertices");
        sub->add_option("--genus", c.g, "first Betti number");
    };
    auto series_opts = [&](CLI::App* sub) {
        sub->add_option("--delta", c.delta, "leaky degree, e.g. \"-1,1,0\"");
        sub->add_option("--max-degree", c.max_degree, "q-degree bound D");
    };
    auto chain_opts = [&](CLI::App* sub) {
        type(sub);
        sub->add_option("--chain", c.chain_index, "index into the enumeration of (d2, g)");
        sub->add_option("--input", c.input, "pearl chain JSON instead of --d2/--genus");
        sub->add_option("--order", c.order, "order as 1-based places \"Ω(1),...,Ω(n)\"");
        sub->add_option("--leak", c.leak, "leaking vector, one entry per vertex");
    };
    auto norm = [&](CLI::App* sub) {
        sub->add_flag("--normalized,!--unnormalized", c.normalized, "divide by |Aut(P)| (default)");
    };

    auto* pearls = app.add_subcommand("pearls", "pearl chains of type (d2, g) with |Aut|");
    type(pearls);
    common(pearls);

    auto* series = app.add_subcommand("series", "generating series via Feynman integrals");
    type(series);
    series_opts(series);
    norm(series);
    series->add_option("--cache-dir", c.cache_dir, "result cache (default $PEARL_CACHE_DIR)");
    common(series);

    auto* feyn = app.add_subcommand("feynman", "Feynman integrals of one pearl chain");
    chain_opts(feyn);
    feyn->add_option("--max-degree", c.max_degree, "q-degree bound D");
    feyn->add_flag("--refined", c.refined, "also emit the refined integral (needs --order)");
    common(feyn);

    auto* covers = app.add_subcommand("covers", "cover counts by degree, or the covers of one multidegree");
    chain_opts(covers);
    series_opts(covers);
    norm(covers);
    covers->add_option("--multidegree", c.multidegree, "list the covers with this multidegree");
    covers->add_flag("--orbits,!--no-orbits", c.orbits, "report Aut(P)-orbit counts (default)");
    common(covers);

    auto* verify = app.add_subcommand("verify", "compare cover counts with refined Feynman coefficients");
    type(verify);
    series_opts(verify);
    verify->add_flag("--summary", c.summary, "omit the per-cell list");
    common(verify);
    verify->callback([&] {
        if (verify->count("--max-degree") == 0)
            c.max_degree = 3;
    });

    auto* quasimod = app.add_subcommand("quasimod", "decompose a q-series in E2, E4, E6");
    quasimod->add_option("--input", c.input, "series JSON (default stdin)");
    quasimod->add_option("--max-weight", c.max_weight, "weight bound W (default 4(d2+g-1))");
    quasimod->add_option("--guard", c.guard, "coefficients that must be checked after the solve");
    common(quasimod);

    auto* floor = app.add_subcommand("export-floor-diagram", "floor diagrams of the covers of one multidegree");
    chain_opts(floor);
    floor->add_option("--multidegree", c.multidegree, "multidegree a");
    common(floor);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return invalid_input;
    }
    c.command = app.get_subcommands().front()->get_name();

    const Outcome outcome = run(c);
    for (const auto& w : outcome.warnings)
        std::cerr << "warning: " << w << "\n";
    if (!outcome.error.empty())
        std::cerr << "error: " << outcome.error << "\n";
    if (!outcome.output.empty()) {
        if (c.out.empty()) {
            std::cout << outcome.output;
        } else {
            try {
                write_atomically(c.out, outcome.output);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return invalid_input;
            }
        }
    }
    return outcome.exit_code;
}

} // namespace pearl::cli
