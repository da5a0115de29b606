#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "atomlab/cyl.hpp"

namespace atomlab {

/// Abstract term over {0, 1, -, ., +, d(i,j), c(i), s(i,j), p(i,j), var}.
struct Term {
    enum class Op { Zero, One, Var, Not, Meet, Join, Diag, Cyl, Subst, Swap };
    Op op;
    int i = 0, j = 0;      // indices for d/c/s/p, variable number for Var
    std::shared_ptr<const Term> a, b;

    using Ptr = std::shared_ptr<const Term>;

    static Ptr zero() { return node(Op::Zero); }
    static Ptr one() { return node(Op::One); }
    static Ptr var(int k) { return node(Op::Var, k); }
    static Ptr cmpl(Ptr t) { return node(Op::Not, 0, 0, std::move(t)); }
    static Ptr meet(Ptr x, Ptr y) { return node(Op::Meet, 0, 0, std::move(x), std::move(y)); }
    static Ptr join(Ptr x, Ptr y) { return node(Op::Join, 0, 0, std::move(x), std::move(y)); }
    static Ptr diag(int i, int j) { return node(Op::Diag, i, j); }
    static Ptr cyl(int i, Ptr t) { return node(Op::Cyl, i, 0, std::move(t)); }
    static Ptr subst(int i, int j, Ptr t) { return node(Op::Subst, i, j, std::move(t)); }
    static Ptr swap(int i, int j, Ptr t) { return node(Op::Swap, i, j, std::move(t)); }

    int max_index() const {
        int m = -1;
        if (op == Op::Diag || op == Op::Cyl || op == Op::Subst || op == Op::Swap)
            m = std::max(i, op == Op::Cyl ? 0 : j);
        if (a) m = std::max(m, a->max_index());
        if (b) m = std::max(m, b->max_index());
        return m;
    }
    int max_var() const {
        int m = op == Op::Var ? i : -1;
        if (a) m = std::max(m, a->max_var());
        if (b) m = std::max(m, b->max_var());
        return m;
    }

    std::string to_string() const {
        switch (op) {
            case Op::Zero: return "0";
            case Op::One: return "1";
            case Op::Var: return "x" + std::to_string(i);
            case Op::Not: return "(not " + a->to_string() + ")";
            case Op::Meet: return "(and " + a->to_string() + " " + b->to_string() + ")";
            case Op::Join: return "(or " + a->to_string() + " " + b->to_string() + ")";
            case Op::Diag: return "(d " + std::to_string(i) + " " + std::to_string(j) + ")";
            case Op::Cyl: return "(c " + std::to_string(i) + " " + a->to_string() + ")";
            case Op::Subst:
                return "(s " + std::to_string(i) + " " + std::to_string(j) + " " +
                       a->to_string() + ")";
            case Op::Swap:
                return "(p " + std::to_string(i) + " " + std::to_string(j) + " " +
                       a->to_string() + ")";
        }
        return "?";
    }

private:
    static Ptr node(Op o, int i = 0, int j = 0, Ptr a = nullptr, Ptr b = nullptr) {
        auto t = std::make_shared<Term>();
        t->op = o;
        t->i = i;
        t->j = j;
        t->a = std::move(a);
        t->b = std::move(b);
        return t;
    }
};

/// Bottom-up evaluation through the ca_* operations.
inline AtomSet eval_term(const CylAtomStructure& s, const Term& t,
                         const std::vector<AtomSet>& env) {
    switch (t.op) {
        case Term::Op::Zero: return s.zero();
        case Term::Op::One: return s.unit();
        case Term::Op::Var:
            if (t.i < 0 || static_cast<std::size_t>(t.i) >= env.size())
                throw std::invalid_argument("unbound variable x" + std::to_string(t.i));
            return env[static_cast<std::size_t>(t.i)];
        case Term::Op::Not: return eval_term(s, *t.a, env).complement();
        case Term::Op::Meet: return eval_term(s, *t.a, env) & eval_term(s, *t.b, env);
        case Term::Op::Join: return eval_term(s, *t.a, env) | eval_term(s, *t.b, env);
        case Term::Op::Diag: return ca_diagonal(s, t.i, t.j);
        case Term::Op::Cyl: return ca_cylindrify(s, t.i, eval_term(s, *t.a, env));
        case Term::Op::Subst: return ca_substitute(s, t.i, t.j, eval_term(s, *t.a, env));
        case Term::Op::Swap: return ca_swap(s, t.i, t.j, eval_term(s, *t.a, env));
    }
    throw std::logic_error("bad term");
}

/// tau(x) = s_1^0 c_1 x . s_0^1 c_0 x, with s_i^j z = c_j(z . d_ij).
inline Term::Ptr term_tau() {
    auto x = Term::var(0);
    return Term::meet(Term::subst(1, 0, Term::cyl(1, x)),
                      Term::subst(0, 1, Term::cyl(0, x)));
}

/// tau(x,y) = c_1(c_0 x . s_1^0 c_1 y) . c_1 x . c_0 y
inline Term::Ptr term_tau_pair() {
    auto x = Term::var(0), y = Term::var(1);
    return Term::meet(
        Term::meet(Term::cyl(1, Term::meet(Term::cyl(0, x),
                                           Term::subst(1, 0, Term::cyl(1, y)))),
                   Term::cyl(1, x)),
        Term::cyl(0, y));
}

/// tau4(x,y) = c_3(s_3^1 c_3 x . s_3^0 c_3 y), needs dimension >= 4
inline Term::Ptr term_tau4_pair() {
    auto x = Term::var(0), y = Term::var(1);
    return Term::cyl(3, Term::meet(Term::subst(3, 1, Term::cyl(3, x)),
                                   Term::subst(3, 0, Term::cyl(3, y))));
}

namespace detail {

struct TermTokens {
    std::vector<std::string> toks;
    std::size_t pos = 0;
    const std::string& peek() {
        if (pos >= toks.size()) throw std::invalid_argument("term: unexpected end");
        return toks[pos];
    }
    std::string next() {
        const std::string& t = peek();
        ++pos;
        return t;
    }
    int next_int() {
        std::string t = next();
        try {
            return std::stoi(t);
        } catch (...) {
            throw std::invalid_argument("term: expected index, got '" + t + "'");
        }
    }
};

inline Term::Ptr parse_term_rec(TermTokens& tk) {
    std::string t = tk.next();
    if (t == "0") return Term::zero();
    if (t == "1") return Term::one();
    if (t.size() >= 2 && t[0] == 'x')
        return Term::var(std::stoi(t.substr(1)));
    if (t != "(") throw std::invalid_argument("term: expected '(' or literal, got '" + t + "'");
    std::string op = tk.next();
    Term::Ptr out;
    if (op == "not")
        out = Term::cmpl(parse_term_rec(tk));
    else if (op == "and" || op == "or") {
        Term::Ptr lhs = parse_term_rec(tk);
        Term::Ptr rhs = parse_term_rec(tk);
        out = op == "and" ? Term::meet(std::move(lhs), std::move(rhs))
                          : Term::join(std::move(lhs), std::move(rhs));
    } else if (op == "d") {
        int i = tk.next_int(), j = tk.next_int();
        out = Term::diag(i, j);
    } else if (op == "c") {
        int i = tk.next_int();
        out = Term::cyl(i, parse_term_rec(tk));
    } else if (op == "s") {
        int i = tk.next_int(), j = tk.next_int();
        out = Term::subst(i, j, parse_term_rec(tk));
    } else if (op == "p") {
        int i = tk.next_int(), j = tk.next_int();
        out = Term::swap(i, j, parse_term_rec(tk));
    } else {
        throw std::invalid_argument("term: unknown operator '" + op + "'");
    }
    if (tk.next() != ")") throw std::invalid_argument("term: expected ')'");
    return out;
}

}  // namespace detail

/// Prefix syntax: (and (s 1 0 (c 1 x0)) (s 0 1 (c 0 x0))). Named terms
/// tau, tau-pair, tau4-pair are accepted as shorthand.
inline Term::Ptr parse_term(const std::string& text) {
    if (text == "tau") return term_tau();
    if (text == "tau-pair") return term_tau_pair();
    if (text == "tau4-pair") return term_tau4_pair();
    detail::TermTokens tk;
    std::string cur;
    for (char c : text) {
        if (c == '(' || c == ')') {
            if (!cur.empty()) tk.toks.push_back(cur), cur.clear();
            tk.toks.push_back(std::string(1, c));
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) tk.toks.push_back(cur), cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) tk.toks.push_back(cur);
    Term::Ptr t = detail::parse_term_rec(tk);
    if (tk.pos != tk.toks.size()) throw std::invalid_argument("term: trailing tokens");
    return t;
}

}  // namespace atomlab
