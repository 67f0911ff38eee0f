#pragma once

#include <cstdlib>
#include <vector>

#include "toricount/errors.hpp"
#include "toricount/linalg.hpp"

namespace toricount {

/* Smith normal form over Z with full transform tracking:
 *   U * A * V = S,  U in GL_m(Z), V in GL_n(Z), S diagonal with
 *   S[0][0] | S[1][1] | ... and nonnegative diagonal.
 * Pivot selection is smallest-absolute-value-first with (row, col) index as
 * the tie break, so the output is deterministic for a given input layout.
 */
struct SmithResult {
    IntMat S, U, Uinv, V, Vinv;
    std::size_t rank = 0;
};

namespace detail {

struct SnfOps {
    IntMat& A;
    IntMat& U;
    IntMat& Uinv;
    IntMat& V;
    IntMat& Vinv;

    void row_swap(std::size_t i, std::size_t j) {
        if (i == j) return;
        std::swap(A[i], A[j]);
        std::swap(U[i], U[j]);
        for (auto& row : Uinv) std::swap(row[i], row[j]);
    }
    // row_j += k * row_i
    void row_add(std::size_t j, std::size_t i, const Int& k) {
        if (k == 0) return;
        for (std::size_t t = 0; t < A[0].size(); ++t) A[j][t] += k * A[i][t];
        for (std::size_t t = 0; t < U[0].size(); ++t) U[j][t] += k * U[i][t];
        for (auto& row : Uinv) row[i] -= k * row[j];
    }
    void row_negate(std::size_t i) {
        for (auto& x : A[i]) x = -x;
        for (auto& x : U[i]) x = -x;
        for (auto& row : Uinv) row[i] = -row[i];
    }
    void col_swap(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (auto& row : A) std::swap(row[i], row[j]);
        for (auto& row : V) std::swap(row[i], row[j]);
        std::swap(Vinv[i], Vinv[j]);
    }
    // col_j += k * col_i
    void col_add(std::size_t j, std::size_t i, const Int& k) {
        if (k == 0) return;
        for (auto& row : A) row[j] += k * row[i];
        for (auto& row : V) row[j] += k * row[i];
        for (std::size_t t = 0; t < Vinv[0].size(); ++t) Vinv[i][t] -= k * Vinv[j][t];
    }
};

} // namespace detail

inline SmithResult smith_normal_form(IntMat A) {
    std::size_t m = A.size();
    std::size_t n = m == 0 ? 0 : A[0].size();
    SmithResult res;
    res.U = int_identity(m);
    res.Uinv = int_identity(m);
    res.V = int_identity(n);
    res.Vinv = int_identity(n);
    detail::SnfOps ops{A, res.U, res.Uinv, res.V, res.Vinv};

    std::size_t t = 0;
    while (t < m && t < n) {
        // smallest nonzero |entry| in the trailing block, ties by (row, col)
        std::size_t pi = m, pj = n;
        Int best = 0;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j) {
                if (A[i][j] == 0) continue;
                Int v = abs(A[i][j]);
                if (pi == m || v < best) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (pi == m) break; // trailing block is zero
        ops.row_swap(t, pi);
        ops.col_swap(t, pj);

        bool dirty = true;
        while (dirty) {
            dirty = false;
            // clear the column under the pivot
            for (std::size_t i = t + 1; i < m; ++i) {
                if (A[i][t] == 0) continue;
                Int q = floor_div(A[i][t], A[t][t]);
                ops.row_add(i, t, -q);
                if (A[i][t] != 0) { // remainder is a strictly smaller pivot
                    ops.row_swap(t, i);
                    dirty = true;
                }
            }
            // clear the row right of the pivot
            for (std::size_t j = t + 1; j < n; ++j) {
                if (A[t][j] == 0) continue;
                Int q = floor_div(A[t][j], A[t][t]);
                ops.col_add(j, t, -q);
                if (A[t][j] != 0) {
                    ops.col_swap(t, j);
                    dirty = true;
                }
            }
            if (dirty) continue;
            // enforce divisibility of the trailing block by the pivot
            for (std::size_t i = t + 1; i < m && !dirty; ++i)
                for (std::size_t j = t + 1; j < n && !dirty; ++j)
                    if (!divides(A[t][t], A[i][j])) {
                        ops.row_add(t, i, 1);
                        dirty = true;
                    }
        }
        if (A[t][t] < 0) ops.row_negate(t);
        ++t;
    }
    res.rank = t;
    res.S = A;
    return res;
}

} // namespace toricount
