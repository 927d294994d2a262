#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace homsa {

enum class Relation { LE = 0, EQ = 1, GE = 2 };

const char* relation_text(Relation rel);

// Sign condition on one tuple component: p_{poly} rel 0.
struct Atom {
    std::size_t poly;
    Relation rel;

    bool operator==(const Atom& other) const { return poly == other.poly && rel == other.rel; }
    bool operator<(const Atom& other) const {
        return poly != other.poly ? poly < other.poly : rel < other.rel;
    }
};

// Negation-free Boolean tree over atoms. And/Or nodes are n-ary with at
// least one child; size() counts binary connectives, i.e. (arity - 1)
// summed over internal nodes.
class LaxFormula {
public:
    enum class Kind { ATOM, AND, OR };

    static LaxFormula atom(Atom a);
    static LaxFormula conjunction(std::vector<LaxFormula> children);
    static LaxFormula disjunction(std::vector<LaxFormula> children);

    Kind kind() const { return node_->kind; }
    const Atom& as_atom() const;
    const std::vector<LaxFormula>& children() const;

    std::size_t size() const;
    std::size_t atom_count() const;
    // Sorted, duplicate-free list of atoms occurring in the tree.
    std::vector<Atom> atoms() const;
    // Sorted, duplicate-free list of referenced polynomial indices.
    std::vector<std::size_t> used_polys() const;

private:
    struct Node {
        Kind kind;
        Atom leaf{};
        std::vector<LaxFormula> kids;
    };
    explicit LaxFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

// Structural fold: atoms map through atom_value, And through meet, Or
// through join (applied left to right over n-ary children). This single
// fold drives point membership, cloud combination, and the lattice of
// simplicial complexes.
template <typename V, typename AtomFn, typename Meet, typename Join>
V eval_lattice(const LaxFormula& phi, AtomFn&& atom_value, Meet&& meet, Join&& join) {
    switch (phi.kind()) {
    case LaxFormula::Kind::ATOM:
        return atom_value(phi.as_atom());
    case LaxFormula::Kind::AND:
    case LaxFormula::Kind::OR: {
        const auto& kids = phi.children();
        V acc = eval_lattice<V>(kids[0], atom_value, meet, join);
        for (std::size_t i = 1; i < kids.size(); ++i) {
            V next = eval_lattice<V>(kids[i], atom_value, meet, join);
            acc = phi.kind() == LaxFormula::Kind::AND ? meet(std::move(acc), std::move(next))
                                                      : join(std::move(acc), std::move(next));
        }
        return acc;
    }
    }
    __builtin_unreachable();
}

// True iff the relation holds for the value v of the atom's polynomial.
bool relation_holds(Relation rel, double v);

// Membership of a point with component values `values` in the set cut out
// by phi (plain sign comparisons).
bool satisfies(const LaxFormula& phi, const std::vector<double>& values);

// Equivalent Or-of-And-of-atoms form. Duplicate atoms inside a clause are
// dropped; exceeding clause_cap raises resource_error. Exists for testing;
// the pipeline folds formulas directly.
LaxFormula to_dnf(const LaxFormula& phi, std::size_t clause_cap = 1000000);

// Formula over H(p): atoms shifted by one (component 0 of H(p) is ||p|| X_0)
// and conjoined with the halfspace atom (0, GE). Grows size by exactly 1.
LaxFormula homogenized_formula(const LaxFormula& phi);

std::string to_string(const LaxFormula& phi, const std::vector<std::string>& poly_names);

} // namespace homsa
