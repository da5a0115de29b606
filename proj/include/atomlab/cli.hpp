#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <set>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "atomlab/cyl.hpp"
#include "atomlab/finco.hpp"
#include "atomlab/games.hpp"
#include "atomlab/graph.hpp"
#include "atomlab/graph_alg.hpp"
#include "atomlab/hyper.hpp"
#include "atomlab/io.hpp"
#include "atomlab/monk.hpp"
#include "atomlab/network.hpp"
#include "atomlab/repr.hpp"
#include "atomlab/term.hpp"

namespace atomlab {

struct CommandResult {
    std::string report;
    int exit_code = 0;
};

namespace cli_detail {

/// Line-oriented report accumulator. Verdicts never appear without their
/// witnesses and budget disclosures; wall time is the last line so that
/// everything above it is reproducible byte for byte.
struct ReportBuilder {
    std::string body;
    int exit_code = 0;

    explicit ReportBuilder(const std::vector<std::string>& argv, std::uint64_t seed) {
        body = "atomlab-report v1\ncommand:";
        for (const auto& a : argv) body += " " + a;
        body += "\nseed: " + std::to_string(seed) + "\n";
    }
    void line(const std::string& key, const std::string& val) {
        body += key + ": " + val + "\n";
    }
    void raw(const std::string& text) { body += text; }
    void validation(const ValidationReport& rep) {
        for (const auto& v : rep.violations)
            line("witness", v.clause + " at " + v.witness);
        for (const auto& n : rep.notes) line("note", n);
    }
    CommandResult finish(std::chrono::steady_clock::time_point start) {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        body += "exit: " + std::to_string(exit_code) + "\n";
        body += "wall_ms: " + std::to_string(ms) + "\n";
        return {body, exit_code};
    }
};

struct Args {
    std::vector<std::string> pos;
    std::map<std::string, std::string> opt;
    std::set<std::string> flags;

    static Args parse(const std::vector<std::string>& argv, std::size_t from) {
        Args a;
        for (std::size_t i = from; i < argv.size(); ++i) {
            const std::string& t = argv[i];
            if (t.rfind("--", 0) == 0) {
                std::string key = t.substr(2);
                auto eq = key.find('=');
                if (eq != std::string::npos) {
                    a.opt[key.substr(0, eq)] = key.substr(eq + 1);
                } else if (i + 1 < argv.size() && argv[i + 1].rfind("--", 0) != 0) {
                    a.opt[key] = argv[++i];
                } else {
                    a.flags.insert(key);
                }
            } else {
                a.pos.push_back(t);
            }
        }
        return a;
    }
    std::string get(const std::string& key, const std::string& dflt = "") const {
        auto it = opt.find(key);
        return it == opt.end() ? dflt : it->second;
    }
    int get_int(const std::string& key, int dflt) const {
        auto it = opt.find(key);
        return it == opt.end() ? dflt : std::stoi(it->second);
    }
    bool has(const std::string& key) const {
        return flags.count(key) || opt.count(key);
    }
};

inline Graph graph_from_args(const Args& a, std::uint64_t seed) {
    if (a.has("file")) return load_graph(a.get("file"));
    if (a.has("random")) {
        auto spec = a.get("random");
        auto comma = spec.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("--random expects v,p");
        return random_graph(std::stoi(spec.substr(0, comma)),
                            std::stod(spec.substr(comma + 1)), seed);
    }
    if (a.has("distance")) {
        auto spec = a.get("distance");
        auto comma = spec.find(',');
        return distance_graph(std::stoi(spec.substr(0, comma)),
                              std::stoi(spec.substr(comma + 1)));
    }
    if (a.has("cliques")) {
        auto spec = a.get("cliques");
        auto comma = spec.find(',');
        return cliques_graph(std::stoi(spec.substr(0, comma)),
                             std::stoi(spec.substr(comma + 1)));
    }
    if (a.has("cycle")) return cycle_graph(a.get_int("cycle", 5));
    if (a.has("complete")) return complete_graph(a.get_int("complete", 3));
    if (a.has("grotzsch")) return grotzsch_graph();
    throw std::invalid_argument("no graph source given");
}

inline std::string winner_str(Winner w) {
    switch (w) {
        case Winner::Exists: return "exists";
        case Winner::Forall: return "forall";
        default: return "inconclusive";
    }
}

inline std::string cert_to_text(const GameCert& cert) {
    std::string out;
    for (std::size_t i = 0; i < cert.nodes.size(); ++i) {
        const auto& n = cert.nodes[i];
        const char* kind = n.kind == GameCert::Node::Kind::ExistsTurn  ? "exists"
                           : n.kind == GameCert::Node::Kind::ForallTurn ? "forall"
                           : n.kind == GameCert::Node::Kind::Survived   ? "survived"
                                                                        : "stuck";
        out += "node " + std::to_string(i) + " " + kind +
               " rounds=" + std::to_string(n.rounds_left) + "\n";
        for (const auto& e : n.edges) {
            std::string delta = "none";
            if (e.response) {
                delta = "nodes=";
                for (std::size_t v = 0; v < e.response->nodes.size(); ++v) {
                    if (v) delta += ',';
                    delta += std::to_string(e.response->nodes[v]);
                }
                delta += " set";
                for (std::size_t t = 0; t < e.response->tuple_count(); ++t) {
                    std::vector<int> tup = e.response->tuple_at(t);
                    // initial responses list everything, later responses
                    // only the tuples the new node touches
                    if (!e.move.initial &&
                        std::find(tup.begin(), tup.end(), e.move.k) == tup.end())
                        continue;
                    delta += " (";
                    for (std::size_t p = 0; p < tup.size(); ++p) {
                        if (p) delta += ',';
                        delta += std::to_string(tup[p]);
                    }
                    delta += ")=" + std::to_string(e.response->labels[t]);
                }
            }
            out += "edge " + std::to_string(i) + " " +
                   (e.child >= 0 ? std::to_string(e.child) : std::string("leaf")) +
                   " move " + e.move.to_string() + " -> response " + delta + "\n";
        }
    }
    return out;
}

}  // namespace cli_detail

/// Dispatch a parsed command line; returns the full report text and the
/// exit status (0 conclusive, 1 error, 2 inconclusive).
inline CommandResult run_command(const std::vector<std::string>& argv) {
    using namespace cli_detail;
    auto start = std::chrono::steady_clock::now();
    std::uint64_t seed = 0;
    {
        Args probe = Args::parse(argv, 0);
        seed = static_cast<std::uint64_t>(probe.get_int("seed", 0));
    }
    ReportBuilder rb(argv, seed);
    const char* wall_env = std::getenv("ATOMLAB_BUDGET_MS");
    if (wall_env) rb.line("budget", std::string("wall_ms_cap=") + wall_env);

    try {
        if (argv.empty()) throw std::invalid_argument(
            "usage: atomlab <validate|compose|matrices|basis|game-f|game-h|graph|monk|eta|alpha|repr|ramsey|finco|term> ...");
        const std::string& cmd = argv[0];
        Args args = Args::parse(argv, 1);

        if (cmd == "validate") {
            if (args.pos.empty()) throw std::invalid_argument("validate: missing file");
            ParsedStructure ps = load_structure(args.pos[0]);
            rb.line("structure", ps.name + " fingerprint=" + std::to_string(ps.fingerprint()));
            ValidationReport rep;
            if (ps.rel) {
                rep = validate_rel_structure(*ps.rel);
            } else if (ps.cyl) {
                rep = validate_cyl_structure(*ps.cyl);
            } else {
                rep = finco_closure_check(ps.finco_n, 50, seed);
            }
            rb.validation(rep);
            rb.line("verdict", rep.ok() ? "valid" : "invalid");
        } else if (cmd == "compose") {
            if (args.pos.empty()) throw std::invalid_argument("compose: missing file");
            ParsedStructure ps = load_structure(args.pos[0]);
            rb.line("structure", ps.name + " fingerprint=" + std::to_string(ps.fingerprint()));
            bool symbolic = args.has("symbolic");
            if (symbolic) {
                if (!ps.monk_fam)
                    throw std::invalid_argument(
                        "symbolic composition needs a block-closed rule family (monk)");
                MonkElement x = parse_monk_element_spec(ps.monk_fam, args.get("x"));
                MonkElement y = parse_monk_element_spec(ps.monk_fam, args.get("y"));
                rb.line("mode", "symbolic (exact on the full structure)");
                rb.line("result", monk_compose(x, y).to_string());
            } else {
                if (!ps.rel) throw std::invalid_argument("compose: relation structure required");
                AtomSet x = parse_element_spec(*ps.rel, args.get("x"));
                AtomSet y = parse_element_spec(*ps.rel, args.get("y"));
                rb.line("mode", ps.rel->rule_desc.empty()
                                    ? "explicit"
                                    : "explicit (exact on the truncation)");
                rb.line("result", ra_compose(*ps.rel, x, y).to_string());
            }
        } else if (cmd == "matrices") {
            ParsedStructure ps = load_structure(args.pos.at(0));
            if (!ps.rel) throw std::invalid_argument("matrices: relation structure required");
            rb.line("structure", ps.name + " fingerprint=" + std::to_string(ps.fingerprint()));
            int n = args.get_int("n", 3);
            auto mats = basic_matrices(*ps.rel, n);
            rb.line("budget", "n=" + std::to_string(n));
            rb.line("verdict", "count=" + std::to_string(mats.size()));
        } else if (cmd == "basis") {
            ParsedStructure ps = load_structure(args.pos.at(0));
            if (!ps.rel) throw std::invalid_argument("basis: relation structure required");
            rb.line("structure", ps.name + " fingerprint=" + std::to_string(ps.fingerprint()));
            int n = args.get_int("n", 3);
            auto mats = basic_matrices(*ps.rel, n);
            ValidationReport rep = cylindric_basis_check(*ps.rel, mats, n);
            rb.line("budget", "n=" + std::to_string(n) +
                                  " matrices=" + std::to_string(mats.size()));
            rb.validation(rep);
            rb.line("verdict", rep.ok() ? "basis" : "not-a-basis");
        } else if (cmd == "game-f") {
            ParsedStructure ps = load_structure(args.pos.at(0));
            rb.line("structure", ps.name + " fingerprint=" + std::to_string(ps.fingerprint()));
            FGameConfig cfg;
            cfg.m = args.get_int("m", 4);
            cfg.rounds = args.get_int("rounds", 3);
            cfg.memo = !args.has("no-memo");
            cfg.jobs = args.get_int("jobs", 1);
            if (wall_env)
                cfg.budget.deadline = std::chrono::steady_clock::now() +
                                      std::chrono::milliseconds(std::atoi(wall_env));
            CylAtomStructure cs;
            if (ps.cyl) {
                cs = *ps.cyl;
            } else if (ps.rel) {
                int n = args.get_int("n", 3);
                cs = cyl_of_matrices(*ps.rel, basic_matrices(*ps.rel, n), n);
                rb.line("note", "relation structure lifted to its basic matrices, n=" +
                                    std::to_string(n));
            } else {
                throw std::invalid_argument("game-f: needs a rel or cyl structure");
            }
            GameResult res = solve_F(cs, cfg);
            rb.line("budget", res.budget_echo + " positions_used=" +
                                  std::to_string(res.positions));
            rb.line("verdict", "winner=" + winner_str(res.winner) +
                                   " rounds=" + std::to_string(res.rounds));
            if (res.winner == Winner::Inconclusive) rb.exit_code = 2;
            if (args.has("cert") && res.certificate) {
                std::ofstream out(args.get("cert"));
                out << cert_to_text(*res.certificate);
                rb.line("note", "certificate written to " + args.get("cert"));
            }
        } else if (cmd == "game-h") {
            ParsedStructure ps = load_structure(args.pos.at(0));
            rb.line("structure", ps.name + " fingerprint=" + std::to_string(ps.fingerprint()));
            HGameConfig cfg;
            cfg.rounds = args.get_int("rounds", 2);
            cfg.node_budget = args.get_int("nodes", 4);
            cfg.hyperlabel_budget = args.get_int("hyperlabels", 1);
            if (wall_env)
                cfg.budget.deadline = std::chrono::steady_clock::now() +
                                      std::chrono::milliseconds(std::atoi(wall_env));
            CylAtomStructure cs;
            if (ps.cyl) {
                cs = *ps.cyl;
            } else if (ps.rel) {
                int n = args.get_int("n", 3);
                cs = cyl_of_matrices(*ps.rel, basic_matrices(*ps.rel, n), n);
                rb.line("note", "relation structure lifted to its basic matrices, n=" +
                                    std::to_string(n));
            } else {
                throw std::invalid_argument("game-h: needs a rel or cyl structure");
            }
            HGameResult res = solve_H(cs, cfg);
            rb.line("budget", res.budget_echo + " positions_used=" +
                                  std::to_string(res.positions));
            rb.line("verdict", "winner=" + winner_str(res.winner) +
                                   " rounds=" + std::to_string(res.rounds));
            if (res.winner == Winner::Inconclusive) rb.exit_code = 2;
        } else if (cmd == "graph") {
            if (args.has("erdos")) {
                int k = args.get_int("erdos", 2);
                int trials = args.get_int("trials", 50);
                ErdosResult er = erdos_search(k, trials, seed);
                rb.line("budget", "k=" + std::to_string(k) +
                                      " trials=" + std::to_string(trials) +
                                      " used=" + std::to_string(er.trials_used));
                if (er.graph) {
                    rb.line("verdict", "found chromatic=" + std::to_string(er.chromatic) +
                                           " girth=" +
                                           (er.girth_found
                                                ? std::to_string(*er.girth_found)
                                                : std::string("infinite")));
                    if (args.has("out")) {
                        std::ofstream out(args.get("out"));
                        out << serialize_graph(*er.graph);
                    }
                } else {
                    rb.line("verdict", "exhausted");
                    rb.exit_code = 2;
                }
            } else {
                Graph g = graph_from_args(args, seed);
                rb.line("graph", "v=" + std::to_string(g.v) +
                                     " edges=" + std::to_string(g.edge_count()));
                if (args.has("chromatic")) {
                    Colouring col = chromatic_number(g, args.get_int("cap", 40));
                    std::string cert;
                    for (std::size_t i = 0; i < col.assignment.size(); ++i) {
                        if (i) cert += ',';
                        cert += std::to_string(col.assignment[i]);
                    }
                    rb.line("verdict", "chromatic=" + std::to_string(col.colours));
                    rb.line("witness", "colouring " + cert);
                }
                if (args.has("girth")) {
                    auto gi = girth(g);
                    rb.line("verdict", "girth=" + (gi ? std::to_string(*gi)
                                                      : std::string("infinite")));
                }
                if (args.has("out")) {
                    std::ofstream out(args.get("out"));
                    out << serialize_graph(g);
                    rb.line("note", "graph written to " + args.get("out"));
                }
            }
        } else if (cmd == "monk") {
            MonkParams p;
            p.i_size = args.get_int("I", 6);
            p.l = args.get_int("l", 2);
            p.mu = args.get_int("mu", 1);
            p.index_bound = args.get_int("bound", 4);
            p.n = args.get_int("n", 0);
            std::shared_ptr<const MonkFamily> fam;
            RelAtomStructure s = build_monk(p, &fam);
            rb.line("structure", s.rule_desc + " atoms=" + std::to_string(s.atom_count()) +
                                     " fingerprint=" + std::to_string(fnv1a(s.rule_desc)));
            if (args.has("validate")) {
                ValidationReport rep = validate_rel_structure(s);
                rb.validation(rep);
                rb.line("verdict", rep.ok() ? "valid" : "invalid");
            }
            if (args.has("maddux")) {
                ValidationReport rep = maddux_embedding_check(p);
                rb.validation(rep);
                rb.line("verdict", rep.ok() ? "maddux-pattern-confirmed"
                                            : "maddux-pattern-failed");
            }
            if (args.has("hn-witness")) {
                if (p.n < 3)
                    throw std::invalid_argument("--hn-witness needs --n >= 3");
                std::string witness;
                bool ok = hn_witness_condition(p, &witness);
                if (!ok) rb.line("witness", witness);
                rb.line("verdict", ok ? "hn-witness-condition-holds"
                                      : "hn-witness-condition-fails");
            }
            if (args.has("term-member")) {
                MonkElement x = parse_monk_element_spec(fam, args.get("term-member"));
                std::string witness;
                bool member = term_algebra_member(x, &witness);
                if (!member) rb.line("witness", witness);
                rb.line("verdict", member ? "term-algebra-member" : "not-a-member");
            }
            if (args.has("out")) {
                std::ofstream out(args.get("out"));
                out << "kind rel\nname monk\nrule: monk I=" << p.i_size << " l=" << p.l
                    << " mu=" << p.mu << " bound=" << p.index_bound;
                if (p.n) out << " n=" << p.n;
                out << "\n";
                rb.line("note", "structure written to " + args.get("out"));
            }
        } else if (cmd == "eta" || cmd == "alpha") {
            Graph g = graph_from_args(args, seed);
            int n = args.get_int("n", 3);
            if (cmd == "eta") {
                CylAtomStructure s = eta_of_graph(g, n);
                rb.line("structure", s.rule_desc + " atoms=" + std::to_string(s.atom_count()) +
                                         " fingerprint=" + std::to_string(fnv1a(s.rule_desc)));
                if (args.has("check-axioms")) {
                    CaAxiomBudget budget;
                    budget.seed = seed;
                    budget.samples =
                        static_cast<std::uint64_t>(args.get_int("samples", 2000));
                    ValidationReport rep = check_ca_axioms(s, budget);
                    rb.validation(rep);
                    rb.line("verdict", rep.ok() ? "axioms-pass" : "axioms-fail");
                }
            } else {
                RelAtomStructure s = alpha_of_graph(g, n);
                rb.line("structure", s.rule_desc + " atoms=" + std::to_string(s.atom_count()) +
                                         " fingerprint=" + std::to_string(fnv1a(s.rule_desc)));
                if (args.has("validate")) {
                    ValidationReport rep = validate_rel_structure(s);
                    rb.validation(rep);
                    rb.line("verdict", rep.ok() ? "valid" : "invalid");
                }
            }
            if (args.has("out")) {
                if (!args.has("file"))
                    throw std::invalid_argument(
                        "--out needs --file so the rule can reference the graph");
                std::ofstream out(args.get("out"));
                out << "kind " << (cmd == "eta" ? "cyl" : "rel") << "\nname " << cmd
                    << "\nrule: " << cmd << " graph=" << args.get("file")
                    << " n=" << n << "\n";
                rb.line("note", "structure written to " + args.get("out"));
            }
        } else if (cmd == "repr") {
            if (args.has("square")) {
                ParsedStructure ps = load_structure(args.get("square"));
                if (!ps.rel) throw std::invalid_argument("repr --square: rel structure");
                rb.line("structure",
                        ps.name + " fingerprint=" + std::to_string(ps.fingerprint()));
                int max_base = args.get_int("max-base", 5);
                SquareRepResult res = find_square_rep(*ps.rel, max_base);
                rb.line("budget", "max_base=" + std::to_string(max_base) + " nodes=" +
                                      std::to_string(res.nodes_explored));
                if (res.rep) {
                    rb.line("verdict", "representation base=" + std::to_string(res.rep->base));
                    rb.raw(res.rep->to_string(*ps.rel));
                } else {
                    rb.line("verdict", "exhausted bases <= " +
                                           std::to_string(res.max_base_searched));
                }
            } else {
                MonkParams p;
                p.i_size = args.get_int("I", 6);
                p.l = args.get_int("l", 2);
                p.mu = args.get_int("mu", 1);
                p.index_bound = args.get_int("bound", 4);
                int size = args.get_int("size", 10);
                std::string fam_desc = "monk I=" + std::to_string(p.i_size) + " l=" +
                                       std::to_string(p.l) + " mu=" + std::to_string(p.mu) +
                                       " bound=" + std::to_string(p.index_bound);
                rb.line("structure", fam_desc + " fingerprint=" +
                                         std::to_string(fnv1a(fam_desc)));
                BuildGraphResult bg = build_complete_graph(p, size);
                rb.line("budget", "size=" + std::to_string(size) + " discharged=" +
                                      std::to_string(bg.obligations_discharged) +
                                      " pending=" + std::to_string(bg.obligations_pending));
                ValidationReport rep =
                    rep_check(p, bg.graph, args.get_int("samples", 20), seed);
                rb.validation(rep);
                rb.line("verdict", rep.ok() ? "rep-checks-pass" : "rep-checks-fail");
            }
        } else if (cmd == "ramsey") {
            int colours = args.get_int("colours", 2);
            int clique = args.get_int("clique", 6);
            RamseyResult res = ramsey_check(colours, clique);
            rb.line("budget", "colours=" + std::to_string(colours) +
                                  " clique=" + std::to_string(clique) + " nodes=" +
                                  std::to_string(res.nodes_explored));
            if (res.verdict == RamseyVerdict::Forced) {
                rb.line("verdict", "monochromatic-triangle-forced");
            } else if (res.verdict == RamseyVerdict::Avoidable) {
                std::string w;
                for (std::size_t i = 0; i < res.witness.size(); ++i) {
                    if (i) w += ',';
                    w += std::to_string(res.witness[i]);
                }
                rb.line("witness", "edge colouring " + w);
                rb.line("verdict", "avoidable");
            } else {
                rb.line("verdict", "inconclusive");
                rb.exit_code = 2;
            }
        } else if (cmd == "finco") {
            int n = args.get_int("n", 3);
            if (args.has("s01")) {
                std::string spec = args.get("s01");
                IndexSet x;
                if (spec.rfind("cofinite:", 0) == 0) {
                    std::vector<std::uint32_t> exc{0};
                    std::istringstream ts(spec.substr(9));
                    std::string tok;
                    while (std::getline(ts, tok, ','))
                        if (!tok.empty()) exc.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
                    x = IndexSet::cofinite(exc);
                } else {
                    std::vector<std::uint32_t> mem;
                    std::istringstream ts(spec.rfind("finite:", 0) == 0 ? spec.substr(7)
                                                                        : spec);
                    std::string tok;
                    while (std::getline(ts, tok, ','))
                        if (!tok.empty()) mem.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
                    x = IndexSet::finite(mem);
                }
                rb.line("result", FinCoAlgebra::to_string(FinCoAlgebra::s01(x)));
            }
            ValidationReport rep = finco_nonadditivity_witness(n, 50, seed);
            ValidationReport clo = finco_closure_check(n, 50, seed);
            for (auto& v : clo.violations) rep.violations.push_back(v);
            rb.validation(rep);
            rb.line("verdict", rep.ok() ? "nonadditivity-witnessed" : "witness-failed");
        } else if (cmd == "term") {
            ParsedStructure ps = load_structure(args.pos.at(0));
            if (!ps.cyl) throw std::invalid_argument("term: cylindric structure required");
            rb.line("structure", ps.name + " fingerprint=" + std::to_string(ps.fingerprint()));
            Term::Ptr t = parse_term(args.get("term", "tau"));
            std::vector<AtomSet> env;
            auto parse_cyl_elem = [&](const std::string& spec) {
                AtomSet out(static_cast<std::size_t>(ps.cyl->atom_count()));
                if (spec == "all") return AtomSet::all(static_cast<std::size_t>(
                                       ps.cyl->atom_count()));
                if (spec == "none") return out;
                std::string body = spec.rfind("atoms:", 0) == 0 ? spec.substr(6) : spec;
                std::istringstream ts(body);
                std::string idx;
                while (std::getline(ts, idx, ','))
                    if (!idx.empty()) out.set(static_cast<std::size_t>(std::stoi(idx)));
                return out;
            };
            if (args.has("x")) env.push_back(parse_cyl_elem(args.get("x")));
            if (args.has("y")) env.push_back(parse_cyl_elem(args.get("y")));
            AtomSet val = eval_term(*ps.cyl, *t, env);
            rb.line("term", t->to_string());
            rb.line("result", val.to_string());
        } else {
            throw std::invalid_argument("unknown subcommand '" + cmd + "'");
        }
    } catch (const ParseError& e) {
        rb.line("error", e.what());
        rb.exit_code = 1;
    } catch (const BudgetExceeded& e) {
        rb.line("note", e.what());
        rb.line("verdict", "inconclusive");
        rb.exit_code = 2;
    } catch (const std::exception& e) {
        rb.line("error", e.what());
        rb.exit_code = 1;
    }
    return rb.finish(start);
}

}  // namespace atomlab
