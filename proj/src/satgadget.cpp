#include "ivcut/satgadget.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "ivcut/flowgraph.hpp"
#include "ivcut/maxflow.hpp"

namespace ivcut {

std::vector<std::string> CnfFormula::variables() const {
    std::set<std::string> vars;
    for (const auto& c : clauses)
        for (const auto& l : c) vars.insert(l.var);
    return {vars.begin(), vars.end()};
}

CnfFormula parse_cnf(std::string_view text) {
    CnfFormula f;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream in(line);
        Clause c;
        std::string tok;
        while (in >> tok) {
            Literal l;
            if (tok[0] == '!' || tok[0] == '~' || tok[0] == '-') {
                l.positive = false;
                tok.erase(0, 1);
            }
            if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char ch) {
                    return std::isalnum(ch) || ch == '_';
                }))
                throw ParseError(line_no, "bad literal '" + tok + "'");
            l.var = tok;
            c.push_back(std::move(l));
        }
        if (c.empty()) continue;
        if (c.size() > 3) throw ParseError(line_no, "clause has more than 3 literals");
        f.clauses.push_back(std::move(c));
    }
    return f;
}

std::string format_literal(const Literal& l) { return (l.positive ? "" : "!") + l.var; }

std::string format_cnf(const CnfFormula& f) {
    std::string out;
    for (const auto& c : f.clauses) {
        for (std::size_t i = 0; i < c.size(); ++i) out += (i ? " " : "") + format_literal(c[i]);
        out += '\n';
    }
    return out;
}

bool exactly_one_true(const CnfFormula& f, const Assignment& a) {
    for (const auto& c : f.clauses) {
        int trues = 0;
        for (const auto& l : c) {
            auto it = a.find(l.var);
            if (it == a.end()) return false;
            if (it->second == l.positive) ++trues;
        }
        if (trues != 1) return false;
    }
    return true;
}

Preprocessed preprocess(const CnfFormula& f) {
    Preprocessed p;
    std::vector<Clause> clauses = f.clauses;
    auto assign = [&](const Literal& l, bool value) {
        bool v = l.positive ? value : !value;
        auto [it, fresh] = p.forced.emplace(l.var, v);
        if (!fresh && it->second != v) p.unsatisfiable = true;
        return fresh;
    };
    auto value_of = [&](const Literal& l) -> std::optional<bool> {
        auto it = p.forced.find(l.var);
        if (it == p.forced.end()) return std::nullopt;
        return it->second == l.positive;
    };

    bool changed = true;
    while (changed && !p.unsatisfiable) {
        changed = false;
        std::vector<Clause> next;
        for (Clause c : clauses) {
            int trues = 0;
            Clause open;
            for (const auto& l : c) {
                auto v = value_of(l);
                if (!v) open.push_back(l);
                else if (*v) ++trues;
            }
            if (open.size() != c.size()) changed = true;
            if (trues > 1) {
                p.unsatisfiable = true;
                break;
            }
            if (trues == 1) {
                for (const auto& l : open) assign(l, false);
                continue;
            }
            if (open.empty()) {
                p.unsatisfiable = true;
                break;
            }
            if (open.size() == 1) {
                assign(open[0], true);
                changed = true;
                continue;
            }
            std::optional<Literal> repeated, paired;
            for (std::size_t i = 0; i < open.size(); ++i)
                for (std::size_t j = i + 1; j < open.size(); ++j) {
                    if (open[i] == open[j]) repeated = open[i];
                    else if (open[i] == open[j].negated()) paired = open[i];
                }
            if (repeated) {
                assign(*repeated, false);
                changed = true;
                next.push_back(std::move(open));
                continue;
            }
            if (paired) {
                // Exactly one of l, !l holds, so every other literal is false.
                for (const auto& l : open)
                    if (l.var != paired->var) assign(l, false);
                changed = true;
                continue;
            }
            next.push_back(std::move(open));
        }
        clauses = std::move(next);
    }
    if (!p.unsatisfiable) p.formula.clauses = std::move(clauses);
    return p;
}

MixedGraph build_sat_graph(const CnfFormula& f) {
    if (f.clauses.empty()) throw GraphError("empty formula");
    const std::size_t k = f.clauses.size();
    std::vector<std::pair<std::size_t, Literal>> lits;  // (clause, literal) in global order
    for (std::size_t i = 0; i < k; ++i) {
        const Clause& c = f.clauses[i];
        if (c.empty()) throw GraphError("empty clause " + std::to_string(i + 1));
        for (std::size_t a = 0; a < c.size(); ++a)
            for (std::size_t b = a + 1; b < c.size(); ++b)
                if (c[a].var == c[b].var)
                    throw GraphError("clause " + std::to_string(i + 1) + " repeats variable " + c[a].var +
                                     "; preprocess first");
        for (const auto& l : c) lits.push_back({i, l});
    }
    const std::size_t m = lits.size();

    std::vector<std::string> names{"y"};
    for (std::size_t i = 0; i < k; ++i) names.push_back("x" + std::to_string(i + 1));
    for (std::size_t n = 0; n < m; ++n) names.push_back("z" + std::to_string(n + 1));
    for (std::size_t n = 0; n < m; ++n) names.push_back("w" + std::to_string(n + 1));
    const Vertex y = 0;
    auto x = [&](std::size_t i) { return static_cast<Vertex>(1 + i); };
    auto z = [&](std::size_t n) { return static_cast<Vertex>(1 + k + n); };
    auto w = [&](std::size_t n) { return static_cast<Vertex>(1 + k + m + n); };

    std::vector<DirectedEdge> directed;
    std::set<BidirectedEdge> bidirected;
    for (std::size_t i = 0; i < k; ++i) {
        directed.push_back({x(i), y});
        bidirected.insert({x(i), y});
    }
    for (std::size_t n = 0; n < m; ++n) {
        directed.push_back({w(n), z(n)});
        bidirected.insert({w(n), y});
        for (std::size_t i = 0; i < k; ++i) directed.push_back({z(n), x(i)});
    }
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t n = 0; n < m; ++n) {
            if (j == n) continue;
            const auto& [ci, lj] = lits[j];
            const auto& [cm, ln] = lits[n];
            if (ci == cm) {
                bidirected.insert({z(j), w(n)});
                continue;
            }
            bool link = lj == ln.negated();
            for (std::size_t q = 0; q < m && !link; ++q)
                if (q != n && lits[q].first == cm && lits[q].second == lj) link = true;
            for (std::size_t pp = 0; pp < m && !link; ++pp) {
                if (pp == j || lits[pp].first != ci) continue;
                for (std::size_t q = 0; q < m && !link; ++q)
                    if (q != n && lits[q].first == cm && lits[pp].second == lits[q].second.negated()) link = true;
            }
            if (link) bidirected.insert({z(j), w(n)});
        }
    }
    return MixedGraph(std::move(names), std::move(directed), {bidirected.begin(), bidirected.end()});
}

namespace {

struct TsivContext {
    TsivContext(const MixedGraph& g, DirectedEdge target, const KnownEdges& known)
        : fg(build_flow_graph(g)), full(fg.dag()), cut(cut_graph(g, target, known)), x(target.from),
          y(target.to) {}

    Dag cut_graph(const MixedGraph& g, DirectedEdge target, const KnownEdges& known) const {
        Dag d = fg.dag().without_edge(fg.node(target.from, Role::sink), fg.node(target.to, Role::sink));
        for (Vertex p : known.known_parents(g, target.to))
            d = d.without_edge(fg.node(p, Role::sink), fg.node(target.to, Role::sink));
        return d;
    }

    std::vector<NodeId> tops(const std::vector<Vertex>& S) const {
        std::vector<NodeId> out;
        for (Vertex s : S) out.push_back(fg.node(s, Role::plain));
        return out;
    }
    std::vector<NodeId> bottoms(const std::vector<Vertex>& T, Vertex extra) const {
        std::vector<NodeId> out;
        for (Vertex t : T) out.push_back(fg.node(t, Role::sink));
        out.push_back(fg.node(extra, Role::sink));
        return out;
    }

    WeightedFlowGraph fg;
    VertexFlowNetwork full;
    VertexFlowNetwork cut;
    Vertex x, y;
};

bool conditions_hold(TsivContext& ctx, const std::vector<Vertex>& S, const std::vector<Vertex>& T) {
    const int k = static_cast<int>(S.size());
    if (ctx.full.max_flow_value(ctx.tops(S), ctx.bottoms(T, ctx.x)) != k) return false;
    return ctx.cut.max_flow_value(ctx.tops(S), ctx.bottoms(T, ctx.y), k) < k;
}

}  // namespace

bool is_tsiv(const MixedGraph& g, DirectedEdge target, const KnownEdges& known, const std::vector<Vertex>& S,
             const std::vector<Vertex>& T) {
    if (!g.has_directed(target.from, target.to)) return false;
    if (S.size() != T.size() + 1) return false;
    std::vector<bool> de_y = descendants_of(g, std::vector<Vertex>{target.to});
    for (Vertex t : T)
        if (t == target.from || de_y[t]) return false;
    TsivContext ctx(g, target, known);
    return conditions_hold(ctx, S, T);
}

TsivSearch brute_force_tsiv(const MixedGraph& g, DirectedEdge target, const KnownEdges& known, int max_k,
                            std::uint64_t budget) {
    TsivSearch result;
    if (!g.has_directed(target.from, target.to)) return result;
    TsivContext ctx(g, target, known);
    std::vector<bool> de_y = descendants_of(g, std::vector<Vertex>{target.to});
    std::vector<Vertex> t_pool;
    for (Vertex v = 0; v < g.size(); ++v)
        if (v != target.from && !de_y[v]) t_pool.push_back(v);
    std::vector<Vertex> all(g.size());
    std::iota(all.begin(), all.end(), 0);
    const std::vector<NodeId> all_tops = ctx.tops(all);

    std::vector<Vertex> T, S;
    bool stop = false;

    // S grows lexicographically; a prefix that cannot be linked into T ∪ {x} never extends
    // to one that can. Both flows are kept incrementally along the search path.
    std::function<void(std::size_t, std::size_t)> choose_s = [&](std::size_t from, std::size_t need) {
        if (stop) return;
        if (need == 0) {
            if (++result.examined > budget) {
                result.budget_exhausted = true;
                stop = true;
                return;
            }
            if (ctx.cut.value() < static_cast<int>(S.size())) {
                result.witness = TsivWitness{S, T, static_cast<int>(S.size())};
                stop = true;
            }
            return;
        }
        for (std::size_t i = from; i + need <= all.size() && !stop; ++i) {
            const std::size_t m1 = ctx.full.checkpoint(), m2 = ctx.cut.checkpoint();
            const NodeId top = ctx.fg.node(all[i], Role::plain);
            if (ctx.full.add_source(top)) {
                ctx.cut.add_source(top);
                S.push_back(all[i]);
                choose_s(i + 1, need - 1);
                S.pop_back();
            }
            ctx.full.rollback(m1);
            ctx.cut.rollback(m2);
        }
    };
    // T grows lexicographically; T ∪ {x} must stay linkable from the whole vertex set.
    std::function<void(std::size_t, std::size_t)> choose_t = [&](std::size_t from, std::size_t need) {
        if (stop) return;
        if (need == 0) {
            const auto to_x = ctx.bottoms(T, ctx.x), to_y = ctx.bottoms(T, ctx.y);
            ctx.full.begin(to_x);
            ctx.cut.begin(to_y);
            choose_s(0, T.size() + 1);
            return;
        }
        for (std::size_t i = from; i + need <= t_pool.size() && !stop; ++i) {
            T.push_back(t_pool[i]);
            if (ctx.full.max_flow_value(all_tops, ctx.bottoms(T, ctx.x)) == static_cast<int>(T.size() + 1))
                choose_t(i + 1, need - 1);
            T.pop_back();
        }
    };
    for (int k = 1; k <= max_k && !stop; ++k) {
        if (ctx.full.max_flow_value(all_tops, ctx.bottoms({}, ctx.x)) != 1) break;
        choose_t(0, static_cast<std::size_t>(k - 1));
    }
    return result;
}

std::optional<Assignment> brute_force_1in3sat(const CnfFormula& f) {
    const std::vector<std::string> vars = f.variables();
    if (vars.size() > 20) throw BudgetExceeded("1-in-3SAT brute force limited to 20 variables");
    const std::uint64_t total = std::uint64_t{1} << vars.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        Assignment a;
        for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = (mask >> i) & 1u;
        if (exactly_one_true(f, a)) return a;
    }
    return std::nullopt;
}

std::string reduction_class_key(const CnfFormula& f) {
    const std::size_t k = f.clauses.size();
    // All orderings of each clause's literal positions.
    std::vector<std::vector<std::vector<std::size_t>>> orders(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<std::size_t> idx(f.clauses[i].size());
        std::iota(idx.begin(), idx.end(), 0);
        do orders[i].push_back(idx);
        while (std::next_permutation(idx.begin(), idx.end()));
    }
    auto relation = [](const Literal& a, const Literal& b) {
        if (a == b) return '=';
        if (a == b.negated()) return '!';
        return '.';
    };
    std::string best;
    std::vector<std::size_t> choice(k, 0);
    std::function<void(std::size_t)> visit = [&](std::size_t i) {
        if (i == k) {
            std::string key;
            for (std::size_t a = 0; a < k; ++a) key += std::to_string(f.clauses[a].size());
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = a + 1; b < k; ++b) {
                    key += '|';
                    for (std::size_t p : orders[a][choice[a]])
                        for (std::size_t q : orders[b][choice[b]]) key += relation(f.clauses[a][p], f.clauses[b][q]);
                }
            if (best.empty() || key < best) best = key;
            return;
        }
        for (std::size_t c = 0; c < orders[i].size(); ++c) {
            choice[i] = c;
            visit(i + 1);
        }
    };
    visit(0);
    return best;
}

}  // namespace ivcut
