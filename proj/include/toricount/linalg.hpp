#pragma once

#include <optional>
#include <vector>

#include "toricount/numeric.hpp"

namespace toricount {

using IntMat = std::vector<std::vector<Int>>;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

inline IntMat int_identity(std::size_t n) {
    IntMat m(n, std::vector<Int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline IntMat int_mat_mul(const IntMat& a, const IntMat& b) {
    std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    IntMat c(n, std::vector<Int>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
        }
    return c;
}

// Bareiss fraction-free determinant; exact for any size we care about.
inline Int int_det(IntMat a) {
    std::size_t n = a.size();
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a[i][j] = exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev);
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

// Gaussian elimination over Q.  Returns nullopt for singular systems.
inline std::optional<RatVec> solve_linear(RatMat a, RatVec b) {
    std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        Rat inv = 1 / a[col][col];
        for (std::size_t j = col; j < n; ++j) a[col][j] *= inv;
        b[col] *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a[i][col] == 0) continue;
            Rat f = a[i][col];
            for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
            b[i] -= f * b[col];
        }
    }
    return b;
}

inline Rat rat_det(const RatMat& a) {
    // clear denominators row by row, then the fraction-free integer routine
    IntMat m;
    Rat scale = 1;
    for (const auto& row : a) {
        Int l = 1;
        for (const auto& x : row) l = lcm_int(l, x.get_den());
        std::vector<Int> irow;
        for (const auto& x : row) irow.push_back(x.get_num() * (l / x.get_den()));
        m.push_back(std::move(irow));
        scale /= Rat(l);
    }
    Rat out = scale * Rat(int_det(std::move(m)));
    out.canonicalize();
    return out;
}

inline std::size_t rat_rank(RatMat rows) {
    std::size_t rank = 0;
    std::size_t ncols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t col = 0; col < ncols && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        for (std::size_t i = rank + 1; i < rows.size(); ++i) {
            if (rows[i][col] == 0) continue;
            Rat f = rows[i][col] / rows[rank][col];
            for (std::size_t j = col; j < ncols; ++j) rows[i][j] -= f * rows[rank][j];
        }
        ++rank;
    }
    return rank;
}

} // namespace toricount
