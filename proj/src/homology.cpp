#include "homsa/homology.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "homsa/errors.hpp"
#include "homsa/parallel.hpp"

namespace homsa {

void SparseIntMatrix::set(std::size_t r, std::size_t c, BigInt v) {
    if (r >= rows || c >= cols) throw input_error("matrix index out of range");
    if (v == 0)
        entries.erase({r, c});
    else
        entries[{r, c}] = std::move(v);
}

BigInt SparseIntMatrix::get(std::size_t r, std::size_t c) const {
    auto it = entries.find({r, c});
    return it == entries.end() ? BigInt(0) : it->second;
}

std::vector<SparseIntMatrix> boundary_matrices(const SimplicialComplex& c) {
    std::vector<SparseIntMatrix> out;
    if (c.kmax() == 0) return out;
    std::vector<std::vector<Face>> faces(c.kmax() + 1);
    for (std::size_t dim = 0; dim <= c.kmax(); ++dim) faces[dim] = c.sorted_faces(dim);

    for (std::size_t k = 1; k <= c.kmax(); ++k) {
        SparseIntMatrix m;
        m.rows = faces[k - 1].size();
        m.cols = faces[k].size();
        // row lookup by face
        std::map<Face, std::size_t> row_of;
        for (std::size_t i = 0; i < faces[k - 1].size(); ++i) row_of[faces[k - 1][i]] = i;
        for (std::size_t j = 0; j < faces[k].size(); ++j) {
            const Face& face = faces[k][j];
            Face sub(face.size() - 1);
            for (std::size_t drop = 0; drop < face.size(); ++drop) {
                std::size_t t = 0;
                for (std::size_t v = 0; v < face.size(); ++v)
                    if (v != drop) sub[t++] = face[v];
                auto it = row_of.find(sub);
                if (it == row_of.end())
                    throw input_error("complex is not downward closed");
                m.set(it->second, j, drop % 2 == 0 ? 1 : -1);
            }
        }
        out.push_back(std::move(m));
    }
    return out;
}

namespace {

// Sparse working copy: rows as ordered maps col -> value plus a per-column
// set of occupied rows, so row operations and pivot scans stay proportional
// to the nonzeros involved. Pivot columns are chosen by minimal column
// degree (then lowest index), which keeps elimination fill-in low on
// boundary matrices; the Smith form is independent of the pivot order.
class Eliminator {
public:
    explicit Eliminator(const SparseIntMatrix& m)
        : rows_(m.rows), cols_(m.cols), row_data_(m.rows), col_rows_(m.cols),
          row_done_(m.rows, false), col_done_(m.cols, false) {
        for (const auto& [rc, v] : m.entries) {
            row_data_[rc.first][rc.second] = v;
            col_rows_[rc.second].insert(rc.first);
        }
        for (std::size_t c = 0; c < cols_; ++c)
            if (!col_rows_[c].empty()) bucket_of_[col_rows_[c].size()].insert(c);
    }

    std::vector<BigInt> run() {
        std::vector<BigInt> diagonal;
        while (true) {
            auto pivot = find_pivot();
            if (!pivot) break;
            auto [pr, pc] = *pivot;
            reduce_to_lone_pivot(pr, pc); // may move the pivot position
            BigInt d = row_data_[pr].at(pc);
            if (d < 0) d = -d;
            diagonal.push_back(d);
            row_done_[pr] = true;
            retire_col(pc);
        }
        return diagonal;
    }

private:
    void bucket_erase(std::size_t c) {
        auto it = bucket_of_.find(col_rows_[c].size());
        if (it != bucket_of_.end()) {
            it->second.erase(c);
            if (it->second.empty()) bucket_of_.erase(it);
        }
    }

    void col_insert(std::size_t r, std::size_t c) {
        if (!col_done_[c]) bucket_erase(c);
        col_rows_[c].insert(r);
        if (!col_done_[c]) bucket_of_[col_rows_[c].size()].insert(c);
    }

    void col_remove(std::size_t r, std::size_t c) {
        if (!col_done_[c]) bucket_erase(c);
        col_rows_[c].erase(r);
        if (!col_done_[c] && !col_rows_[c].empty())
            bucket_of_[col_rows_[c].size()].insert(c);
    }

    void retire_col(std::size_t c) {
        bucket_erase(c);
        col_done_[c] = true;
    }

    // Lowest-degree active column, then its smallest entry (units first,
    // breaking ties toward the sparser row).
    std::optional<std::pair<std::size_t, std::size_t>> find_pivot() {
        while (!bucket_of_.empty()) {
            auto it = bucket_of_.begin();
            if (it->second.empty()) {
                bucket_of_.erase(it);
                continue;
            }
            std::size_t c = *it->second.begin();
            std::size_t best_r = rows_;
            bool best_unit = false;
            std::size_t best_len = 0;
            BigInt best_abs;
            for (std::size_t r : col_rows_[c]) {
                if (row_done_[r]) continue;
                const BigInt& v = row_data_[r].at(c);
                BigInt a = v < 0 ? BigInt(-v) : v;
                bool unit = a == 1;
                std::size_t len = row_data_[r].size();
                bool better;
                if (best_r == rows_)
                    better = true;
                else if (unit != best_unit)
                    better = unit;
                else if (unit)
                    better = len < best_len;
                else
                    better = a < best_abs;
                if (better) {
                    best_r = r;
                    best_unit = unit;
                    best_len = len;
                    best_abs = a;
                }
            }
            if (best_r == rows_) { // bucket entry with no live rows left
                it->second.erase(c);
                continue;
            }
            return std::make_pair(best_r, c);
        }
        return std::nullopt;
    }

    void add_multiple_of_row(std::size_t src, std::size_t dst, const BigInt& factor) {
        if (factor == 0) return;
        for (const auto& [c, v] : row_data_[src]) {
            auto it = row_data_[dst].find(c);
            if (it == row_data_[dst].end()) {
                row_data_[dst].emplace(c, factor * v);
                col_insert(dst, c);
            } else {
                it->second += factor * v;
                if (it->second == 0) {
                    row_data_[dst].erase(it);
                    col_remove(dst, c);
                }
            }
        }
    }

    // Clears the pivot column with row operations, then the pivot row; when
    // a remainder survives it is strictly smaller than the pivot, so the
    // inner loop terminates. The pivot may migrate to a smaller entry; the
    // final position is written back through pr/pc.
    void reduce_to_lone_pivot(std::size_t& pr, std::size_t& pc) {
        while (true) {
            bool clean = true;
            // column first
            std::vector<std::size_t> col_rows(col_rows_[pc].begin(), col_rows_[pc].end());
            for (std::size_t r : col_rows) {
                if (r == pr || row_done_[r]) continue;
                BigInt q = row_data_[r].at(pc) / row_data_[pr].at(pc);
                add_multiple_of_row(pr, r, -q);
                if (row_data_[r].count(pc)) clean = false;
            }
            if (!clean) {
                // a smaller entry appeared in the pivot column; adopt it
                std::size_t best_r = pr;
                BigInt best_abs = row_data_[pr].at(pc) < 0 ? BigInt(-row_data_[pr].at(pc))
                                                           : row_data_[pr].at(pc);
                for (std::size_t r : col_rows_[pc]) {
                    if (row_done_[r]) continue;
                    const BigInt& v = row_data_[r].at(pc);
                    BigInt a = v < 0 ? BigInt(-v) : v;
                    if (a != 0 && a < best_abs) {
                        best_abs = a;
                        best_r = r;
                    }
                }
                pr = best_r;
                continue;
            }
            // pivot column is lone; clear the pivot row. Entries of other
            // rows in those columns are zero, so these column operations
            // only touch the pivot row itself.
            std::vector<std::pair<std::size_t, BigInt>> row_copy(row_data_[pr].begin(),
                                                                 row_data_[pr].end());
            const BigInt& pivot = row_data_[pr].at(pc);
            bool row_clean = true;
            for (const auto& [c, v] : row_copy) {
                if (c == pc || col_done_[c]) continue;
                BigInt rem = v % pivot;
                if (rem == 0) {
                    row_data_[pr].erase(c);
                    col_remove(pr, c);
                } else {
                    row_data_[pr][c] = rem;
                    row_clean = false;
                }
            }
            if (row_clean) return;
            // a remainder below the pivot survives in the row; pick it up
            std::size_t best_c = pc;
            BigInt best_abs = pivot < 0 ? BigInt(-pivot) : pivot;
            for (const auto& [c, v] : row_data_[pr]) {
                if (col_done_[c]) continue;
                BigInt a = v < 0 ? BigInt(-v) : v;
                if (a < best_abs) {
                    best_abs = a;
                    best_c = c;
                }
            }
            pc = best_c;
        }
    }

    std::size_t rows_, cols_;
    std::vector<std::map<std::size_t, BigInt>> row_data_;
    std::vector<std::set<std::size_t>> col_rows_;
    std::map<std::size_t, std::set<std::size_t>> bucket_of_; // col degree -> active cols
    std::vector<bool> row_done_, col_done_;
};

BigInt big_gcd(BigInt a, BigInt b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        BigInt t = a % b;
        a = std::move(b);
        b = std::move(t);
    }
    return a;
}

} // namespace

SmithForm smith_normal_form(const SparseIntMatrix& m) {
    Eliminator elim(m);
    std::vector<BigInt> diagonal = elim.run();
    // Enforce d_1 | d_2 | ... via gcd/lcm passes (diag(a, b) is unimodularly
    // equivalent to diag(gcd, lcm)).
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < diagonal.size(); ++i) {
            if (diagonal[i + 1] % diagonal[i] == 0) continue;
            BigInt g = big_gcd(diagonal[i], diagonal[i + 1]);
            BigInt l = diagonal[i] / g * diagonal[i + 1];
            diagonal[i] = g;
            diagonal[i + 1] = l;
            changed = true;
        }
    }
    SmithForm out;
    out.rank = diagonal.size();
    out.diagonal = std::move(diagonal);
    return out;
}

HomologyGroups homology(const SimplicialComplex& c, std::size_t top_dim, unsigned threads) {
    if (top_dim > c.kmax()) throw input_error("homology dimension exceeds complex kmax");
    std::vector<SparseIntMatrix> boundaries = boundary_matrices(c);

    // Smith forms of M_1..M_kmax; independent matrices are processed
    // concurrently.
    std::vector<SmithForm> smith(boundaries.size());
    unsigned workers = resolve_threads(threads);
    parallel_chunks(boundaries.size(), workers,
                    [&](unsigned, std::uint64_t begin, std::uint64_t end) {
                        for (std::uint64_t i = begin; i < end; ++i)
                            smith[i] = smith_normal_form(boundaries[i]);
                    });

    auto rank_of = [&](std::size_t k) -> std::size_t {
        if (k == 0 || k > smith.size()) return 0;
        return smith[k - 1].rank;
    };

    HomologyGroups out;
    out.groups.resize(top_dim + 1);
    for (std::size_t k = 0; k <= top_dim; ++k) {
        std::size_t n_k = c.face_count(k);
        std::size_t used = rank_of(k) + rank_of(k + 1);
        out.groups[k].betti = n_k >= used ? n_k - used : 0;
        // torsion of H_k from the invariant factors of M_(k+1)
        if (k + 1 <= smith.size()) {
            for (const BigInt& d : smith[k].diagonal)
                if (d > 1) out.groups[k].torsion.push_back(d);
        }
    }
    return out;
}

} // namespace homsa
