#include "ivcut/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ivcut/flowgraph.hpp"
#include "ivcut/numeric.hpp"
#include "ivcut/satgadget.hpp"

namespace ivcut {

namespace {

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream o(path, std::ios::binary);
    if (!o) throw InputError("cannot write " + path);
    o << text;
}

nlohmann::ordered_json edge_json(const MixedGraph& g, DirectedEdge e) {
    return {{"from", g.name(e.from)}, {"to", g.name(e.to)}};
}

std::string plural(std::size_t n, const char* word) {
    return std::to_string(n) + " " + word + (n == 1 ? "" : "s");
}

struct Options {
    std::string input;
    std::string method = "icid";
    std::string known;
    std::uint64_t seed = 1;
    int trials = 3;
    double tol = 1e-6;
    bool json = false;
    std::string dot;
    int max_k = 0;
    bool check = false;
    bool chained = false;
    bool inject_fault = false;
    std::string output;
    std::uint64_t budget = 50'000'000;
    std::size_t n = 50;
    int seeds = 1;
    double edge_density = 0.2;
    double confounder_density = 0.1;
};

IdentificationResult run_method(const MixedGraph& g, const std::string& method, const KnownEdges& known) {
    if (method == "icid") return icid(g, known);
    if (method == "avsid") return avsid(g, known);
    if (method == "is") return is_all(g);
    IdentificationResult r;
    r.iterations = 1;
    r.known_after = known;
    for (Vertex y = 0; y < g.size(); ++y) {
        CriterionResult c = method == "ic" ? ic(g, y, known) : avs(g, y, known);
        for (auto& cert : c.certificates) {
            r.known_after.insert(cert.target);
            r.identified.push_back(std::move(cert));
        }
    }
    return r;
}

int cmd_identify(const Options& o, std::ostream& out) {
    const MixedGraph g = parse_graph(read_file(o.input));
    const KnownEdges known = parse_known_edges(g, o.known);
    const IdentificationResult r = run_method(g, o.method, known);
    if (!o.dot.empty()) {
        const WeightedFlowGraph fg = o.method == "is" ? build_flow_graph(g) : build_aux_flow_graph(g, known);
        write_file(o.dot, fg.to_dot());
    }
    if (o.json) {
        nlohmann::ordered_json j;
        j["method"] = o.method;
        j["iterations"] = r.iterations;
        j["known"] = nlohmann::ordered_json::array();
        for (const auto& e : known) j["known"].push_back(edge_json(g, e));
        j["identified"] = nlohmann::ordered_json::array();
        for (const auto& c : r.identified) j["identified"].push_back(certificate_to_json(g, c));
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    out << plural(r.identified.size(), "edge") << " identified\n";
    for (const auto& c : r.identified)
        out << "  " << format_edge(g, c.target) << "  " << method_name(c.method) << "  " << c.formula(g) << '\n';
    return kExitOk;
}

int cmd_verify(const Options& o, bool tol_given, std::ostream& out) {
    const MixedGraph g = parse_graph(read_file(o.input));
    const KnownEdges known = parse_known_edges(g, o.known);
    IdentificationResult r = icid(g, known);
    if (o.inject_fault && !r.identified.empty()) {
        // Negative control: replace the first row of the first certificate with y itself.
        Certificate& c = r.identified.front();
        c.sources.front() = SourceRef{c.target.to, false};
    }
    const double tol = (o.chained && !tol_given) ? 1e-4 : o.tol;
    std::vector<Verdict> verdicts;
    if (o.chained) {
        verdicts = verify_chained(g, r, known, o.trials, tol, o.seed);
    } else {
        for (const auto& c : r.identified) verdicts.push_back(verify_certificate(g, c, o.trials, tol, o.seed));
    }
    std::size_t failed = 0;
    for (const auto& v : verdicts) failed += !v.ok();

    if (o.json) {
        nlohmann::ordered_json j;
        j["mode"] = o.chained ? "chained" : "exact";
        j["trials"] = o.trials;
        j["tol"] = tol;
        j["results"] = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < verdicts.size(); ++i) {
            nlohmann::ordered_json e;
            e["target"] = edge_json(g, r.identified[i].target);
            e["status"] = status_name(verdicts[i].status);
            e["max_rel_error"] = verdicts[i].max_rel_error;
            e["seed"] = verdicts[i].worst_seed;
            j["results"].push_back(e);
        }
        j["failed"] = failed;
        out << j.dump(2) << '\n';
    } else {
        for (std::size_t i = 0; i < verdicts.size(); ++i) {
            const Verdict& v = verdicts[i];
            out << status_name(v.status) << "  " << format_edge(g, r.identified[i].target) << "  rel err "
                << std::setprecision(3) << v.max_rel_error;
            if (!v.ok()) out << " (seed " << v.worst_seed << ")  " << r.identified[i].formula(g);
            out << '\n';
        }
        if (failed == 0)
            out << plural(verdicts.size(), "certificate") << " verified\n";
        else
            out << failed << " of " << plural(verdicts.size(), "certificate") << " failed\n";
    }
    return failed == 0 ? kExitOk : kExitVerifyFailed;
}

std::string vertex_set(const MixedGraph& g, const std::vector<Vertex>& vs) {
    std::string s = "{";
    for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? ", " : "") + g.name(vs[i]);
    return s + "}";
}

int cmd_gensat(const Options& o, std::ostream& out) {
    const CnfFormula f = parse_cnf(read_file(o.input));
    if (f.clauses.empty()) throw InputError("empty formula");
    const Preprocessed pp = preprocess(f);
    if (pp.unsatisfiable) {
        out << "# preprocessing leaves no exactly-one assignment; no gadget generated\n";
        return kExitOk;
    }
    if (pp.formula.clauses.empty()) {
        out << "# preprocessing satisfies every clause; no gadget generated\n";
        return kExitOk;
    }
    const MixedGraph g = build_sat_graph(pp.formula);
    std::string text = "# gadget for:";
    for (const auto& c : pp.formula.clauses) {
        text += " (";
        for (std::size_t i = 0; i < c.size(); ++i) text += (i ? " " : "") + format_literal(c[i]);
        text += ")";
    }
    text += "\n" + serialize_graph(g);
    if (o.output.empty()) out << text;
    else write_file(o.output, text);
    if (!o.check) return kExitOk;

    const std::string prefix = o.output.empty() ? "# " : "";
    const int max_k = o.max_k > 0 ? o.max_k : 2 * static_cast<int>(pp.formula.clauses.size()) + 2;
    const DirectedEdge target{g.vertex("x1"), g.vertex("y")};
    const TsivSearch search = brute_force_tsiv(g, target, {}, max_k, o.budget);
    const auto sat = brute_force_1in3sat(pp.formula);
    if (search.budget_exhausted) {
        out << prefix << "tsIV search budget exceeded after " << search.examined << " candidates\n";
        return kExitVerifyFailed;
    }
    if (search.witness)
        out << prefix << "tsIV found: k=" << search.witness->k << " S=" << vertex_set(g, search.witness->S)
            << " T=" << vertex_set(g, search.witness->T) << '\n';
    else if (!sat)
        out << prefix << "no tsIV found (budget exhausted consistent with UNSAT)\n";
    else
        out << prefix << "no tsIV found up to k=" << max_k << '\n';
    out << prefix << "1-in-3SAT: " << (sat ? "satisfiable" : "unsatisfiable");
    if (sat) {
        for (const auto& [v, val] : *sat) out << ' ' << v << '=' << (val ? 'T' : 'F');
    }
    out << '\n';
    const bool agree = search.witness.has_value() == sat.has_value();
    out << prefix << "agreement: " << (agree ? "yes" : "no") << '\n';
    return agree ? kExitOk : kExitVerifyFailed;
}

int cmd_bench(const Options& o, std::ostream& out) {
    out << "seed,n,directed,bidirected,is,avsid,icid,subsumed,is_ms,avsid_ms,icid_ms\n";
    if (o.n == 0) return kExitOk;
    bool all_subsumed = true;
    using clock = std::chrono::steady_clock;
    auto ms = [](clock::duration d) { return std::chrono::duration<double, std::milli>(d).count(); };
    for (int s = 0; s < o.seeds; ++s) {
        const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(s);
        const MixedGraph g = random_mixed_graph(o.n, o.edge_density, o.confounder_density, seed);
        auto t0 = clock::now();
        const auto is = identified_edges(is_all(g));
        auto t1 = clock::now();
        const auto av = identified_edges(avsid(g));
        auto t2 = clock::now();
        const auto icr = identified_edges(icid(g));
        auto t3 = clock::now();
        const bool subsumed = std::includes(icr.begin(), icr.end(), av.begin(), av.end());
        all_subsumed = all_subsumed && subsumed;
        out << seed << ',' << o.n << ',' << g.directed_edges().size() << ',' << g.bidirected_edges().size() << ','
            << is.size() << ',' << av.size() << ',' << icr.size() << ',' << (subsumed ? 1 : 0) << ','
            << std::fixed << std::setprecision(3) << ms(t1 - t0) << ',' << ms(t2 - t1) << ',' << ms(t3 - t2)
            << std::defaultfloat << '\n';
    }
    return all_subsumed ? kExitOk : kExitVerifyFailed;
}

}  // namespace

nlohmann::ordered_json certificate_to_json(const MixedGraph& g, const Certificate& cert) {
    nlohmann::ordered_json j;
    j["target"] = edge_json(g, cert.target);
    j["method"] = method_name(cert.method);
    j["S"] = nlohmann::ordered_json::array();
    for (const auto& s : cert.sources) {
        nlohmann::ordered_json e{{"vertex", g.name(s.vertex)}, {"role", s.star ? "star" : "plain"}};
        if (s.star) {
            e["subtracts"] = nlohmann::ordered_json::array();
            for (Vertex j2 : cert.subtracted(g, s)) e["subtracts"].push_back(g.name(j2));
        }
        j["S"].push_back(std::move(e));
    }
    j["T"] = nlohmann::ordered_json::array();
    for (Vertex t : cert.sinks) j["T"].push_back(g.name(t));
    j["corrections"] = nlohmann::ordered_json::array();
    for (auto e : cert.corrections) j["corrections"].push_back(edge_json(g, e));
    j["formula"] = cert.formula(g);
    return j;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generic identification of linear SCM coefficients via instrumental cutsets", "ivcut"};
    app.require_subcommand(1);
    Options o;

    auto* identify = app.add_subcommand("identify", "List identified edges with certificates");
    identify->add_option("graph", o.input, "Graph file")->required();
    identify->add_option("--method", o.method, "is, avs, ic, avsid or icid")
        ->check(CLI::IsMember({"is", "avs", "ic", "avsid", "icid"}))
        ->capture_default_str();
    identify->add_option("--known", o.known, "Already identified edges, e.g. a->b,c->d");
    identify->add_flag("--json", o.json, "Emit certificates as JSON");
    identify->add_option("--dot", o.dot, "Write the flow graph in DOT format");

    auto* verify = app.add_subcommand("verify", "Run ICID and check every certificate numerically");
    verify->add_option("graph", o.input, "Graph file")->required();
    verify->add_option("--known", o.known, "Already identified edges, e.g. a->b,c->d");
    verify->add_option("--seed", o.seed, "First trial seed")->capture_default_str();
    verify->add_option("--trials", o.trials, "Random parameterizations per certificate")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    auto* tol_opt = verify->add_option("--tol", o.tol, "Relative tolerance (chained default 1e-4)")
                        ->check(CLI::PositiveNumber)
                        ->capture_default_str();
    verify->add_flag("--chained", o.chained, "Feed recovered values into later certificates");
    verify->add_flag("--inject-fault", o.inject_fault, "Corrupt the first certificate (negative control)");
    verify->add_flag("--json", o.json, "Emit results as JSON");

    auto* gensat = app.add_subcommand("gensat", "Build the 1-in-3SAT reduction graph");
    gensat->add_option("cnf", o.input, "CNF file")->required();
    gensat->add_option("-o,--output", o.output, "Write the graph here instead of stdout");
    gensat->add_flag("--check", o.check, "Compare tsIV existence with exactly-one satisfiability");
    gensat->add_option("--max-k", o.max_k, "Largest |S| tried (default 2*clauses+2)");
    gensat->add_option("--budget", o.budget, "Cap on (S, T) pairs examined")->capture_default_str();

    auto* bench = app.add_subcommand("bench", "Compare IS, AVSID and ICID on random graphs (CSV)");
    bench->add_option("--n", o.n, "Vertices per graph")->capture_default_str();
    bench->add_option("--seeds", o.seeds, "Number of graphs")->capture_default_str();
    bench->add_option("--seed", o.seed, "First seed")->capture_default_str();
    bench->add_option("--edge-density", o.edge_density)->check(CLI::Range(0.0, 1.0))->capture_default_str();
    bench->add_option("--confounder-density", o.confounder_density)
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (identify->parsed()) return cmd_identify(o, out);
        if (verify->parsed()) return cmd_verify(o, tol_opt->count() > 0, out);
        if (gensat->parsed()) return cmd_gensat(o, out);
        if (bench->parsed()) return cmd_bench(o, out);
    } catch (const ParseError& e) {
        err << "error: " << o.input << ": " << e.what() << '\n';
        return kExitInputError;
    } catch (const GraphError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}

}  // namespace ivcut
