#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "homsa/errors.hpp"
#include "homsa/homology.hpp"

using namespace homsa;

namespace {

// The 6-vertex triangulation of the real projective plane: every edge lies
// in exactly two of the ten triangles; Euler characteristic 1.
const std::vector<Face> kProjectivePlane = {
    {1, 2, 3}, {1, 2, 4}, {1, 3, 5}, {1, 4, 6}, {1, 5, 6},
    {2, 3, 6}, {2, 4, 5}, {2, 5, 6}, {3, 4, 5}, {3, 4, 6}};

SparseIntMatrix dense_to_sparse(const std::vector<std::vector<int>>& rows) {
    SparseIntMatrix m;
    m.rows = rows.size();
    m.cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c)
            if (rows[r][c] != 0) m.set(r, c, rows[r][c]);
    return m;
}

long euler_from_faces(const SimplicialComplex& c) {
    long chi = 0;
    for (std::size_t dim = 0; dim <= c.kmax(); ++dim)
        chi += (dim % 2 == 0 ? 1 : -1) * static_cast<long>(c.face_count(dim));
    return chi;
}

long euler_from_betti(const HomologyGroups& groups, const SimplicialComplex& c) {
    long chi = 0;
    for (std::size_t k = 0; k < groups.groups.size(); ++k)
        chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(groups.groups[k].betti);
    // top dimension is not reported; add it back from the complex
    return chi;
}

} // namespace

TEST_CASE("boundary matrices carry alternating signs") {
    // single edge {3, 7}: column (-1, +1) against the sorted vertex order
    SimplicialComplex edge = SimplicialComplex::from_faces(1, {{3, 7}});
    auto ms = boundary_matrices(edge);
    REQUIRE(ms.size() == 1);
    CHECK(ms[0].rows == 2);
    CHECK(ms[0].cols == 1);
    CHECK(ms[0].get(0, 0) == -1); // vertex 3 row
    CHECK(ms[0].get(1, 0) == 1);  // vertex 7 row

    // hollow triangle: M_1 is 3x3 with zero column sums
    SimplicialComplex hollow(1);
    for (std::uint32_t v : {0u, 1u, 2u}) hollow.insert(Face{v});
    hollow.insert(Face{0, 1});
    hollow.insert(Face{0, 2});
    hollow.insert(Face{1, 2});
    auto hm = boundary_matrices(hollow);
    for (std::size_t c = 0; c < 3; ++c)
        CHECK(hm[0].get(0, c) + hm[0].get(1, c) + hm[0].get(2, c) == 0);

    // filled triangle: M_2 column is (+1, -1, +1) on lexicographic edges
    SimplicialComplex filled = SimplicialComplex::from_faces(2, {{0, 1, 2}});
    auto fm = boundary_matrices(filled);
    REQUIRE(fm.size() == 2);
    CHECK(fm[1].get(0, 0) == 1);  // drop vertex 2 -> edge {0,1}, sign (-1)^2
    CHECK(fm[1].get(1, 0) == -1); // drop vertex 1 -> edge {0,2}
    CHECK(fm[1].get(2, 0) == 1);  // drop vertex 0 -> edge {1,2}

    // boundary of boundary vanishes
    SimplicialComplex rp2 = SimplicialComplex::from_faces(2, kProjectivePlane);
    auto rm = boundary_matrices(rp2);
    for (std::size_t r = 0; r < rm[0].rows; ++r)
        for (std::size_t c = 0; c < rm[1].cols; ++c) {
            BigInt sum = 0;
            for (std::size_t mid = 0; mid < rm[0].cols; ++mid)
                sum += rm[0].get(r, mid) * rm[1].get(mid, c);
            CHECK(sum == 0);
        }
}

TEST_CASE("smith normal form basics") {
    SmithForm id2 = smith_normal_form(dense_to_sparse({{1, 0}, {0, 1}}));
    CHECK(id2.rank == 2);
    CHECK(id2.diagonal == std::vector<BigInt>{1, 1});

    SmithForm s = smith_normal_form(dense_to_sparse({{2, 4}, {6, 8}}));
    CHECK(s.diagonal == std::vector<BigInt>{2, 4});

    SmithForm z = smith_normal_form(dense_to_sparse({{0, 0}, {0, 0}, {0, 0}}));
    CHECK(z.rank == 0);
    CHECK(z.diagonal.empty());

    // divisibility chain is enforced
    SmithForm d = smith_normal_form(dense_to_sparse({{2, 0}, {0, 3}}));
    CHECK(d.diagonal == std::vector<BigInt>{1, 6});
}

TEST_CASE("homology of standard complexes") {
    // cycle graph C_6
    SimplicialComplex c6(1);
    for (std::uint32_t v = 0; v < 6; ++v) c6.insert(Face{v});
    for (std::uint32_t v = 0; v < 6; ++v) {
        Face e{v, static_cast<std::uint32_t>((v + 1) % 6)};
        std::sort(e.begin(), e.end());
        c6.insert(e);
    }
    HomologyGroups hc6 = homology(c6, 1);
    CHECK(hc6.groups[0].betti == 1);
    CHECK(hc6.groups[1].betti == 1);
    CHECK(hc6.groups[0].torsion.empty());
    CHECK(hc6.groups[1].torsion.empty());

    // two isolated vertices
    SimplicialComplex pts(1);
    pts.insert(Face{0});
    pts.insert(Face{5});
    CHECK(homology(pts, 1).groups[0].betti == 2);

    // tetrahedron boundary is a 2-sphere
    SimplicialComplex sphere = SimplicialComplex::from_faces(
        2, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
    HomologyGroups hs = homology(sphere, 2);
    CHECK(hs.groups[0].betti == 1);
    CHECK(hs.groups[1].betti == 0);
    CHECK(hs.groups[2].betti == 1);

    // empty complex
    SimplicialComplex empty(2);
    HomologyGroups he = homology(empty, 1);
    CHECK(he.groups[0].betti == 0);
    CHECK(he.groups[1].betti == 0);
}

TEST_CASE("projective plane carries 2-torsion") {
    SimplicialComplex rp2 = SimplicialComplex::from_faces(2, kProjectivePlane);
    // closed-surface oracle: 6 vertices, 15 edges, 10 triangles, chi = 1,
    // every edge in exactly two triangles
    CHECK(rp2.face_count(0) == 6);
    CHECK(rp2.face_count(1) == 15);
    CHECK(rp2.face_count(2) == 10);
    CHECK(euler_from_faces(rp2) == 1);
    for (const Face& e : rp2.sorted_faces(1)) {
        int count = 0;
        for (const Face& t : rp2.sorted_faces(2))
            if (std::includes(t.begin(), t.end(), e.begin(), e.end())) ++count;
        CHECK(count == 2);
    }

    HomologyGroups h = homology(rp2, 1);
    CHECK(h.groups[0].betti == 1);
    CHECK(h.groups[0].torsion.empty());
    CHECK(h.groups[1].betti == 0);
    REQUIRE(h.groups[1].torsion.size() == 1);
    CHECK(h.groups[1].torsion[0] == 2);
}

TEST_CASE("homology is invariant under vertex relabeling") {
    std::mt19937_64 rng(11);
    std::vector<std::uint32_t> labels{1, 2, 3, 4, 5, 6};
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(labels.begin(), labels.end(), rng);
        std::vector<Face> renamed;
        for (const Face& t : kProjectivePlane) {
            Face f;
            for (std::uint32_t v : t) f.push_back(labels[v - 1] * 10 + 3);
            std::sort(f.begin(), f.end());
            renamed.push_back(f);
        }
        HomologyGroups h = homology(SimplicialComplex::from_faces(2, renamed), 1);
        CHECK(h.groups[0].betti == 1);
        CHECK(h.groups[1].betti == 0);
        REQUIRE(h.groups[1].torsion.size() == 1);
        CHECK(h.groups[1].torsion[0] == 2);
    }
}

TEST_CASE("euler characteristic consistency") {
    // chi from faces equals chi from betti numbers through the top dimension
    SimplicialComplex sphere = SimplicialComplex::from_faces(
        2, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
    HomologyGroups h = homology(sphere, 2);
    CHECK(euler_from_faces(sphere) == euler_from_betti(h, sphere));

    SimplicialComplex rp2 = SimplicialComplex::from_faces(2, kProjectivePlane);
    HomologyGroups hr = homology(rp2, 2);
    CHECK(euler_from_faces(rp2) == euler_from_betti(hr, rp2));
}
