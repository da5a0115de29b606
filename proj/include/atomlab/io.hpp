#pragma once

#include <array>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "atomlab/cyl.hpp"
#include "atomlab/finco.hpp"
#include "atomlab/graph.hpp"
#include "atomlab/graph_alg.hpp"
#include "atomlab/monk.hpp"
#include "atomlab/rel.hpp"

namespace atomlab {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int ln, const std::string& msg)
        : std::runtime_error("line " + std::to_string(ln) + ": " + msg), line(ln) {}
};

namespace detail {

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

inline std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

/// key=value parser for rule parameter lists.
inline std::string rule_param(const std::vector<std::string>& toks, const std::string& key,
                              int line, bool required = true) {
    for (const auto& t : toks) {
        auto eq = t.find('=');
        if (eq != std::string::npos && t.substr(0, eq) == key) return t.substr(eq + 1);
    }
    if (required) throw ParseError(line, "rule parameter '" + key + "' missing");
    return "";
}

}  // namespace detail

/// Text graph format: `graph <v>` header, one `edge i j` per edge,
/// `#` comments.
inline Graph parse_graph(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int ln = 0, v = -1;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(is, line)) {
        ++ln;
        auto toks = detail::split_ws(detail::strip_comment(line));
        if (toks.empty()) continue;
        if (toks[0] == "graph") {
            if (toks.size() != 2) throw ParseError(ln, "expected: graph <v>");
            v = std::stoi(toks[1]);
        } else if (toks[0] == "edge") {
            if (toks.size() != 3) throw ParseError(ln, "expected: edge <i> <j>");
            if (v < 0) throw ParseError(ln, "edge before graph header");
            edges.push_back({std::stoi(toks[1]), std::stoi(toks[2])});
        } else {
            throw ParseError(ln, "unknown directive '" + toks[0] + "'");
        }
    }
    if (v < 0) throw ParseError(ln, "missing graph header");
    try {
        return Graph::make(v, std::move(edges));
    } catch (const std::exception& e) {
        throw ParseError(ln, e.what());
    }
}

inline std::string serialize_graph(const Graph& g) {
    std::string out = "graph " + std::to_string(g.v) + "\n";
    for (auto [a, b] : g.edges)
        out += "edge " + std::to_string(a) + " " + std::to_string(b) + "\n";
    return out;
}

inline Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str());
}

/// A parsed structure file: explicit or rule-backed relation / cylindric
/// structure, or the finco fragment marker.
struct ParsedStructure {
    enum class Kind { Rel, Cyl, FinCo };
    Kind kind = Kind::Rel;
    std::string name = "unnamed";
    std::optional<RelAtomStructure> rel;
    std::optional<CylAtomStructure> cyl;
    std::shared_ptr<const MonkFamily> monk_fam;  // set for monk rule files
    std::optional<MonkParams> monk_params;
    int finco_n = 0;
    std::string canonical;  // canonical serialization for fingerprints

    std::uint64_t fingerprint() const { return fnv1a(canonical); }
};

/// Structure file: `kind rel|cyl`, optional `name`, `dim` for cyl, then an
/// explicit body (atom/identity/converse/triple or diag/equiv/swap lines)
/// or a single `rule:` line. Graph paths in rules resolve relative to the
/// current directory.
inline ParsedStructure parse_structure(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int ln = 0;
    ParsedStructure out;
    std::string kind;
    int dim = -1;
    std::vector<std::string> atoms;
    std::vector<int> identity;
    std::vector<std::pair<int, int>> conv_pairs;
    std::vector<std::array<int, 3>> triples;
    std::vector<std::array<int, 3>> diags;           // i j atom
    std::vector<std::array<int, 3>> equivs;          // i a b
    std::vector<std::array<int, 4>> swaps;           // i j a b
    bool explicit_body = false;
    std::string canon;

    auto atom_id = [&](const std::string& name, int at_line) {
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (atoms[i] == name) return static_cast<int>(i);
        throw ParseError(at_line, "unknown atom '" + name + "'");
    };

    while (std::getline(is, line)) {
        ++ln;
        auto toks = detail::split_ws(detail::strip_comment(line));
        if (toks.empty()) continue;
        const std::string& t0 = toks[0];
        try {
        if (t0 == "kind") {
            if (toks.size() != 2 || (toks[1] != "rel" && toks[1] != "cyl"))
                throw ParseError(ln, "expected: kind rel|cyl");
            kind = toks[1];
        } else if (t0 == "name") {
            if (toks.size() < 2) throw ParseError(ln, "expected: name <name>");
            out.name = toks[1];
        } else if (t0 == "dim") {
            dim = std::stoi(toks.at(1));
        } else if (t0 == "atom") {
            explicit_body = true;
            atoms.push_back(toks.at(1));
        } else if (t0 == "identity") {
            identity.push_back(atom_id(toks.at(1), ln));
        } else if (t0 == "converse") {
            conv_pairs.push_back({atom_id(toks.at(1), ln), atom_id(toks.at(2), ln)});
        } else if (t0 == "triple") {
            triples.push_back(
                {atom_id(toks.at(1), ln), atom_id(toks.at(2), ln), atom_id(toks.at(3), ln)});
        } else if (t0 == "diag") {
            diags.push_back(
                {std::stoi(toks.at(1)), std::stoi(toks.at(2)), atom_id(toks.at(3), ln)});
        } else if (t0 == "equiv") {
            equivs.push_back(
                {std::stoi(toks.at(1)), atom_id(toks.at(2), ln), atom_id(toks.at(3), ln)});
        } else if (t0 == "swap") {
            swaps.push_back({std::stoi(toks.at(1)), std::stoi(toks.at(2)),
                             atom_id(toks.at(3), ln), atom_id(toks.at(4), ln)});
        } else if (t0 == "rule:" || t0 == "rule") {
            std::vector<std::string> rt(toks.begin() + 1, toks.end());
            if (rt.empty()) throw ParseError(ln, "empty rule");
            const std::string& rname = rt[0];
            if (rname == "monk") {
                MonkParams p;
                p.i_size = std::stoi(detail::rule_param(rt, "I", ln));
                p.l = std::stoi(detail::rule_param(rt, "l", ln));
                p.mu = std::stoi(detail::rule_param(rt, "mu", ln));
                p.index_bound = std::stoi(detail::rule_param(rt, "bound", ln));
                std::string nn = detail::rule_param(rt, "n", ln, false);
                if (!nn.empty()) p.n = std::stoi(nn);
                out.kind = ParsedStructure::Kind::Rel;
                out.monk_params = p;
                out.rel = build_monk(p, &out.monk_fam);
            } else if (rname == "maddux") {
                out.kind = ParsedStructure::Kind::Rel;
                out.rel = maddux_structure(std::stoi(detail::rule_param(rt, "I", ln)));
            } else if (rname == "alpha") {
                Graph g = load_graph(detail::rule_param(rt, "graph", ln));
                out.kind = ParsedStructure::Kind::Rel;
                out.rel = alpha_of_graph(g, std::stoi(detail::rule_param(rt, "n", ln)));
            } else if (rname == "eta") {
                Graph g = load_graph(detail::rule_param(rt, "graph", ln));
                out.kind = ParsedStructure::Kind::Cyl;
                out.cyl = eta_of_graph(g, std::stoi(detail::rule_param(rt, "n", ln)));
            } else if (rname == "finco") {
                out.kind = ParsedStructure::Kind::FinCo;
                out.finco_n = std::stoi(detail::rule_param(rt, "n", ln));
            } else {
                throw ParseError(ln, "unknown rule '" + rname + "'");
            }
        } else {
            throw ParseError(ln, "unknown directive '" + t0 + "'");
        }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(ln, std::string("malformed directive: ") + e.what());
        }
    }

    if (explicit_body) {
        if (kind == "rel" || kind.empty()) {
            std::vector<int> converse(atoms.size());
            for (std::size_t i = 0; i < atoms.size(); ++i)
                converse[i] = static_cast<int>(i);
            for (auto [a, b] : conv_pairs) {
                converse[static_cast<std::size_t>(a)] = b;
                converse[static_cast<std::size_t>(b)] = a;
            }
            out.kind = ParsedStructure::Kind::Rel;
            out.rel = make_rel_structure(atoms, identity, converse, triples);
        } else {
            if (dim < 2) throw ParseError(ln, "cyl structure needs dim >= 2");
            CylAtomStructure s;
            s.n = dim;
            s.atom_names = atoms;
            const int count = static_cast<int>(atoms.size());
            s.diag.assign(static_cast<std::size_t>(dim) * dim,
                          AtomSet(static_cast<std::size_t>(count)));
            for (int i = 0; i < dim; ++i)
                s.diag[static_cast<std::size_t>(i) * dim + i] =
                    AtomSet::all(static_cast<std::size_t>(count));
            for (auto [i, j, a] : diags) {
                if (i >= dim || j >= dim) throw ParseError(ln, "diag index out of range");
                s.diag[static_cast<std::size_t>(i) * dim + j].set(static_cast<std::size_t>(a));
                s.diag[static_cast<std::size_t>(j) * dim + i].set(static_cast<std::size_t>(a));
            }
            std::vector<std::vector<std::vector<int>>> adj(
                static_cast<std::size_t>(dim),
                std::vector<std::vector<int>>(static_cast<std::size_t>(count)));
            for (auto [i, a, b] : equivs) {
                if (i >= dim) throw ParseError(ln, "equiv index out of range");
                adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)].push_back(b);
                if (a != b)
                    adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)].push_back(a);
            }
            for (int i = 0; i < dim; ++i) {
                for (int a = 0; a < count; ++a)
                    adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)].push_back(a);
                s.equiv.push_back(AtomRel::adjacency(adj[static_cast<std::size_t>(i)]));
            }
            if (!swaps.empty()) {
                s.has_swap = true;
                std::vector<std::vector<std::vector<int>>> sadj(
                    static_cast<std::size_t>(dim) * dim,
                    std::vector<std::vector<int>>(static_cast<std::size_t>(count)));
                for (auto [i, j, a, b] : swaps) {
                    int lo = std::min(i, j), hi = std::max(i, j);
                    sadj[static_cast<std::size_t>(lo) * dim + hi]
                        [static_cast<std::size_t>(a)]
                            .push_back(b);
                }
                s.swap.assign(static_cast<std::size_t>(dim) * dim, AtomRel());
                for (int i = 0; i < dim; ++i)
                    for (int j = i + 1; j < dim; ++j)
                        s.swap[static_cast<std::size_t>(i) * dim + j] = AtomRel::adjacency(
                            sadj[static_cast<std::size_t>(i) * dim + j]);
            }
            out.kind = ParsedStructure::Kind::Cyl;
            out.cyl = std::move(s);
        }
    }

    if (!out.rel && !out.cyl && out.kind != ParsedStructure::Kind::FinCo)
        throw ParseError(ln, "file defines no structure");

    // canonical serialization for the fingerprint
    std::string c = "name " + out.name + "\n";
    if (out.rel) {
        const RelAtomStructure& s = *out.rel;
        c += "kind rel\n";
        if (!s.rule_desc.empty()) c += "rule: " + s.rule_desc + "\n";
        for (const auto& a : s.atom_names) c += "atom " + a + "\n";
        if (s.rule_desc.empty() && !s.comp_table.empty()) {
            for (int a = 0; a < s.atom_count(); ++a)
                if (s.is_identity(a)) c += "identity " + std::to_string(a) + "\n";
            for (int a = 0; a < s.atom_count(); ++a)
                c += "converse " + std::to_string(a) + " " +
                     std::to_string(s.converse[static_cast<std::size_t>(a)]) + "\n";
            for (int a = 0; a < s.atom_count(); ++a)
                for (int b = 0; b < s.atom_count(); ++b)
                    for (int d = 0; d < s.atom_count(); ++d)
                        if (s.consistent(a, b, d))
                            c += "triple " + std::to_string(a) + " " + std::to_string(b) +
                                 " " + std::to_string(d) + "\n";
        }
    } else if (out.cyl) {
        c += "kind cyl\ndim " + std::to_string(out.cyl->n) + "\n";
        if (!out.cyl->rule_desc.empty()) c += "rule: " + out.cyl->rule_desc + "\n";
        for (const auto& a : out.cyl->atom_names) c += "atom " + a + "\n";
    } else {
        c += "kind finco\ndim " + std::to_string(out.finco_n) + "\n";
    }
    out.canonical = std::move(c);
    return out;
}

inline ParsedStructure load_structure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open structure file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_structure(ss.str());
}

/// Canonical structure-file serialization of an explicit relation
/// structure; parse . serialize is the identity on these.
inline std::string serialize_rel_structure(const RelAtomStructure& s,
                                           const std::string& name) {
    std::string out = "kind rel\nname " + name + "\n";
    if (!s.rule_desc.empty()) {
        out += "rule: " + s.rule_desc + "\n";
        return out;
    }
    for (const auto& a : s.atom_names) out += "atom " + a + "\n";
    for (int a = 0; a < s.atom_count(); ++a)
        if (s.is_identity(a))
            out += "identity " + s.atom_names[static_cast<std::size_t>(a)] + "\n";
    for (int a = 0; a < s.atom_count(); ++a)
        if (s.converse[static_cast<std::size_t>(a)] > a)
            out += "converse " + s.atom_names[static_cast<std::size_t>(a)] + " " +
                   s.atom_names[static_cast<std::size_t>(s.converse[static_cast<std::size_t>(a)])] +
                   "\n";
    for (int a = 0; a < s.atom_count(); ++a)
        for (int b = 0; b < s.atom_count(); ++b)
            for (int c = 0; c < s.atom_count(); ++c)
                if (s.consistent(a, b, c))
                    out += "triple " + s.atom_names[static_cast<std::size_t>(a)] + " " +
                           s.atom_names[static_cast<std::size_t>(b)] + " " +
                           s.atom_names[static_cast<std::size_t>(c)] + "\n";
    return out;
}

/// Canonical structure-file serialization of an explicit cylindric
/// structure: diagonal memberships for i < j, related atom pairs per index
/// and swap images per index pair.
inline std::string serialize_cyl_structure(const CylAtomStructure& s,
                                           const std::string& name) {
    std::string out = "kind cyl\nname " + name + "\ndim " + std::to_string(s.n) + "\n";
    if (!s.rule_desc.empty()) {
        out += "rule: " + s.rule_desc + "\n";
        return out;
    }
    for (const auto& a : s.atom_names) out += "atom " + a + "\n";
    for (int i = 0; i < s.n; ++i)
        for (int j = i + 1; j < s.n; ++j)
            s.d(i, j).for_each([&](std::size_t a) {
                out += "diag " + std::to_string(i) + " " + std::to_string(j) + " " +
                       s.atom_names[a] + "\n";
            });
    for (int i = 0; i < s.n; ++i)
        for (int a = 0; a < s.atom_count(); ++a)
            for (int b : s.equiv[static_cast<std::size_t>(i)].neighbours(a))
                if (b > a)
                    out += "equiv " + std::to_string(i) + " " +
                           s.atom_names[static_cast<std::size_t>(a)] + " " +
                           s.atom_names[static_cast<std::size_t>(b)] + "\n";
    if (s.has_swap)
        for (int i = 0; i < s.n; ++i)
            for (int j = i + 1; j < s.n; ++j)
                for (int a = 0; a < s.atom_count(); ++a)
                    for (int b : s.swap_rel(i, j).neighbours(a))
                        out += "swap " + std::to_string(i) + " " + std::to_string(j) +
                               " " + s.atom_names[static_cast<std::size_t>(a)] + " " +
                               s.atom_names[static_cast<std::size_t>(b)] + "\n";
    return out;
}

/// Element specification mini-language for the CLI: terms joined by '+',
/// each `all`, `none`, `id`, `atoms:<i,...>` (explicit ids); for monk
/// structures additionally `H^<colour>`, `E^<block>`, `atom:<coset>:<idx>`.
/// A leading `~` complements the whole element.
inline AtomSet parse_element_spec(const RelAtomStructure& s, const std::string& spec_in) {
    std::string spec = spec_in;
    bool comp = !spec.empty() && spec[0] == '~';
    if (comp) spec = spec.substr(1);
    AtomSet out(static_cast<std::size_t>(s.atom_count()));
    std::istringstream is(spec);
    std::string term;
    while (std::getline(is, term, '+')) {
        if (term == "all")
            out |= AtomSet::all(static_cast<std::size_t>(s.atom_count()));
        else if (term == "none")
            continue;
        else if (term == "id")
            out |= s.identity;
        else if (term.rfind("atoms:", 0) == 0) {
            std::istringstream ts(term.substr(6));
            std::string idx;
            while (std::getline(ts, idx, ','))
                out.set(static_cast<std::size_t>(std::stoi(idx)));
        } else {
            throw std::invalid_argument("bad element term '" + term + "'");
        }
    }
    return comp ? out.complement() : out;
}

inline MonkElement parse_monk_element_spec(std::shared_ptr<const MonkFamily> fam,
                                           const std::string& spec_in) {
    std::string spec = spec_in;
    bool comp = !spec.empty() && spec[0] == '~';
    if (comp) spec = spec.substr(1);
    MonkElement out = MonkElement::zero(fam);
    std::istringstream is(spec);
    std::string term;
    while (std::getline(is, term, '+')) {
        if (term == "all")
            out = out | MonkElement::unit(fam);
        else if (term == "none")
            continue;
        else if (term == "id")
            out = out | MonkElement::identity_elem(fam);
        else if (term == "H" || term == "Hall")
            out = out | MonkElement::h_all(fam);
        else if (term.rfind("H^", 0) == 0)
            out = out | MonkElement::h_colour(fam, std::stoi(term.substr(2)));
        else if (term.rfind("E^", 0) == 0)
            out = out | MonkElement::e_block(fam, std::stoi(term.substr(2)));
        else if (term.rfind("atom:", 0) == 0) {
            auto rest = term.substr(5);
            auto colon = rest.find(':');
            if (colon == std::string::npos)
                throw std::invalid_argument("bad atom term '" + term + "'");
            out = out | MonkElement::atom(
                            fam, std::stoi(rest.substr(0, colon)),
                            static_cast<std::uint32_t>(std::stoul(rest.substr(colon + 1))));
        } else {
            throw std::invalid_argument("bad element term '" + term + "'");
        }
    }
    return comp ? out.complement() : out;
}

}  // namespace atomlab
