#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "homsa/cech.hpp"

namespace homsa {

using BigInt = boost::multiprecision::cpp_int;

// Integer matrix stored as a map from (row, col) to nonzero entries.
struct SparseIntMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::map<std::pair<std::size_t, std::size_t>, BigInt> entries;

    void set(std::size_t r, std::size_t c, BigInt v);
    BigInt get(std::size_t r, std::size_t c) const;
};

// Diagonal of the Smith normal form: positive invariant factors with
// d_1 | d_2 | ... | d_r, r the rank.
struct SmithForm {
    std::vector<BigInt> diagonal;
    std::size_t rank = 0;
};

struct HomologyGroup {
    std::size_t betti = 0;
    std::vector<BigInt> torsion; // entries > 1, each dividing the next
};

struct HomologyGroups {
    std::vector<HomologyGroup> groups; // index k = H_k
};

// Boundary maps M_1..M_kmax of the complex; faces of each dimension are
// indexed in ascending vertex-tuple order (the dump order). Column j of M_k
// has entry (-1)^m at the face obtained by dropping vertex m of face j.
std::vector<SparseIntMatrix> boundary_matrices(const SimplicialComplex& c);

// Integer elimination on a minimal-absolute-value pivot (ties by lowest
// (row, col)), followed by gcd/lcm sweeps that enforce the divisibility
// chain. Exact in arbitrary precision.
SmithForm smith_normal_form(const SparseIntMatrix& m);

// Unreduced integer homology: beta_k = #k-faces - rank M_k - rank M_(k+1)
// and torsion of H_k from the invariant factors of M_(k+1) that exceed 1.
HomologyGroups homology(const SimplicialComplex& c, std::size_t top_dim, unsigned threads = 0);

} // namespace homsa
