#include "homsa/formula.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "homsa/errors.hpp"

namespace homsa {

const char* relation_text(Relation rel) {
    switch (rel) {
    case Relation::LE: return "<=";
    case Relation::EQ: return "=";
    case Relation::GE: return ">=";
    }
    return "?";
}

LaxFormula LaxFormula::atom(Atom a) {
    auto node = std::make_shared<Node>();
    node->kind = Kind::ATOM;
    node->leaf = a;
    return LaxFormula(std::move(node));
}

LaxFormula LaxFormula::conjunction(std::vector<LaxFormula> children) {
    if (children.empty()) throw input_error("And node needs at least one child");
    if (children.size() == 1) return children.front();
    auto node = std::make_shared<Node>();
    node->kind = Kind::AND;
    node->kids = std::move(children);
    return LaxFormula(std::move(node));
}

LaxFormula LaxFormula::disjunction(std::vector<LaxFormula> children) {
    if (children.empty()) throw input_error("Or node needs at least one child");
    if (children.size() == 1) return children.front();
    auto node = std::make_shared<Node>();
    node->kind = Kind::OR;
    node->kids = std::move(children);
    return LaxFormula(std::move(node));
}

const Atom& LaxFormula::as_atom() const {
    if (node_->kind != Kind::ATOM) throw input_error("formula node is not an atom");
    return node_->leaf;
}

const std::vector<LaxFormula>& LaxFormula::children() const { return node_->kids; }

std::size_t LaxFormula::size() const {
    if (kind() == Kind::ATOM) return 0;
    std::size_t s = children().size() - 1;
    for (const auto& child : children()) s += child.size();
    return s;
}

std::size_t LaxFormula::atom_count() const { return atoms().size(); }

namespace {

void collect_atoms(const LaxFormula& phi, std::set<Atom>& out) {
    if (phi.kind() == LaxFormula::Kind::ATOM) {
        out.insert(phi.as_atom());
        return;
    }
    for (const auto& child : phi.children()) collect_atoms(child, out);
}

} // namespace

std::vector<Atom> LaxFormula::atoms() const {
    std::set<Atom> set;
    collect_atoms(*this, set);
    return {set.begin(), set.end()};
}

std::vector<std::size_t> LaxFormula::used_polys() const {
    std::set<std::size_t> set;
    for (const Atom& a : atoms()) set.insert(a.poly);
    return {set.begin(), set.end()};
}

bool relation_holds(Relation rel, double v) {
    switch (rel) {
    case Relation::LE: return v <= 0.0;
    case Relation::EQ: return v == 0.0;
    case Relation::GE: return v >= 0.0;
    }
    return false;
}

bool satisfies(const LaxFormula& phi, const std::vector<double>& values) {
    return eval_lattice<bool>(
        phi,
        [&](const Atom& a) {
            if (a.poly >= values.size()) throw input_error("atom references missing component");
            return relation_holds(a.rel, values[a.poly]);
        },
        [](bool a, bool b) { return a && b; }, [](bool a, bool b) { return a || b; });
}

LaxFormula to_dnf(const LaxFormula& phi, std::size_t clause_cap) {
    using Clause = std::set<Atom>;
    auto clauses = eval_lattice<std::vector<Clause>>(
        phi,
        [](const Atom& a) { return std::vector<Clause>{Clause{a}}; },
        [&](std::vector<Clause> a, std::vector<Clause> b) {
            if (a.size() * b.size() > clause_cap)
                throw resource_error("DNF clause count exceeds cap of " +
                                     std::to_string(clause_cap));
            std::vector<Clause> out;
            out.reserve(a.size() * b.size());
            for (const auto& ca : a)
                for (const auto& cb : b) {
                    Clause merged = ca;
                    merged.insert(cb.begin(), cb.end());
                    out.push_back(std::move(merged));
                }
            return out;
        },
        [&](std::vector<Clause> a, std::vector<Clause> b) {
            if (a.size() + b.size() > clause_cap)
                throw resource_error("DNF clause count exceeds cap of " +
                                     std::to_string(clause_cap));
            a.insert(a.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
            return a;
        });
    std::vector<LaxFormula> parts;
    parts.reserve(clauses.size());
    for (const auto& clause : clauses) {
        std::vector<LaxFormula> lits;
        lits.reserve(clause.size());
        for (const Atom& a : clause) lits.push_back(LaxFormula::atom(a));
        parts.push_back(LaxFormula::conjunction(std::move(lits)));
    }
    return LaxFormula::disjunction(std::move(parts));
}

namespace {

LaxFormula shift_atoms(const LaxFormula& phi) {
    if (phi.kind() == LaxFormula::Kind::ATOM) {
        const Atom& a = phi.as_atom();
        return LaxFormula::atom(Atom{a.poly + 1, a.rel});
    }
    std::vector<LaxFormula> kids;
    kids.reserve(phi.children().size());
    for (const auto& child : phi.children()) kids.push_back(shift_atoms(child));
    return phi.kind() == LaxFormula::Kind::AND ? LaxFormula::conjunction(std::move(kids))
                                               : LaxFormula::disjunction(std::move(kids));
}

} // namespace

LaxFormula homogenized_formula(const LaxFormula& phi) {
    return LaxFormula::conjunction({shift_atoms(phi), LaxFormula::atom(Atom{0, Relation::GE})});
}

namespace {

void print_formula(const LaxFormula& phi, const std::vector<std::string>& names,
                   std::ostringstream& out, bool parent_is_and) {
    switch (phi.kind()) {
    case LaxFormula::Kind::ATOM: {
        const Atom& a = phi.as_atom();
        if (a.poly >= names.size()) throw input_error("atom references missing polynomial name");
        out << "(" << names[a.poly] << " " << relation_text(a.rel) << " 0)";
        return;
    }
    case LaxFormula::Kind::AND: {
        bool first = true;
        for (const auto& child : phi.children()) {
            if (!first) out << " & ";
            first = false;
            print_formula(child, names, out, true);
        }
        return;
    }
    case LaxFormula::Kind::OR: {
        // Or under And needs parentheses since & binds tighter than |.
        if (parent_is_and) out << "(";
        bool first = true;
        for (const auto& child : phi.children()) {
            if (!first) out << " | ";
            first = false;
            print_formula(child, names, out, false);
        }
        if (parent_is_and) out << ")";
        return;
    }
    }
}

} // namespace

std::string to_string(const LaxFormula& phi, const std::vector<std::string>& poly_names) {
    std::ostringstream out;
    print_formula(phi, poly_names, out, false);
    return out.str();
}

} // namespace homsa
