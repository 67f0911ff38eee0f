#pragma once

#include <optional>
#include <set>
#include <vector>

#include "toricount/errors.hpp"
#include "toricount/linalg.hpp"
#include "toricount/numeric.hpp"

namespace toricount {

struct HalfSpace {
    RatVec normal;
    Rat offset; // constraint <normal, y> >= offset
};

struct Polytope {
    int dim = 0;
    std::vector<HalfSpace> ineqs;
    std::vector<RatVec> vertices;          // deduplicated, lexicographically sorted
    std::vector<std::vector<int>> tight;   // per vertex: tight inequality indices
};

namespace detail {

inline Rat dot_rv(const RatVec& a, const RatVec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// one-dimensional kernel of a (dim-1) x dim rational matrix, if the rank is
// exactly dim-1; returns an integer-scaled direction
inline std::optional<RatVec> kernel_direction(RatMat rows, int dim) {
    std::size_t rank = 0;
    std::vector<int> pivot_col;
    for (int col = 0; col < dim && rank < rows.size(); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == rank || rows[i][col] == 0) continue;
            Rat f = rows[i][col] / rows[rank][col];
            for (int j = 0; j < dim; ++j) rows[i][j] -= f * rows[rank][j];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    if (rank != (std::size_t)dim - 1) return std::nullopt;
    std::vector<char> is_pivot(dim, 0);
    for (int c : pivot_col) is_pivot[c] = 1;
    int free_col = 0;
    while (is_pivot[free_col]) ++free_col;
    RatVec g(dim, Rat(0));
    g[free_col] = 1;
    for (std::size_t i = 0; i < rank; ++i)
        g[pivot_col[i]] = -rows[i][free_col] / rows[i][pivot_col[i]];
    return g;
}

} // namespace detail

/* Exact vertex enumeration from a halfspace description: intersect every
 * dim-subset of constraint boundaries, keep the feasible solutions, and
 * deduplicate.  Throws when the feasible region is unbounded, detected on the
 * recession cone (rank defect or a feasible extreme-ray direction). */
inline Polytope polytope_from_halfspaces(int dim, std::vector<HalfSpace> ineqs) {
    if (dim < 1) throw ConfigError("polytope dimension must be positive");
    for (const auto& h : ineqs)
        if ((int)h.normal.size() != dim)
            throw ConfigError("halfspace normal has wrong dimension");
    const std::size_t m = ineqs.size();

    RatMat normals;
    for (const auto& h : ineqs) normals.push_back(h.normal);
    if (rat_rank(normals) < (std::size_t)dim)
        throw HypothesisError("feasible region is unbounded (normals do not span)");
    if (dim == 1) {
        // recession directions are just signs
        for (int s : {1, -1}) {
            bool ok = true;
            for (const auto& h : ineqs)
                if (h.normal[0] * s < 0) ok = false;
            if (ok) throw HypothesisError("feasible region is unbounded");
        }
    } else {
        std::vector<int> pick(m, 0);
        std::fill(pick.end() - (dim - 1), pick.end(), 1);
        if (m >= (std::size_t)dim - 1) do {
                RatMat rows;
                for (std::size_t i = 0; i < m; ++i)
                    if (pick[i]) rows.push_back(ineqs[i].normal);
                auto g = detail::kernel_direction(rows, dim);
                if (!g) continue;
                for (int s : {1, -1}) {
                    bool ok = true;
                    for (const auto& h : ineqs) {
                        Rat v = detail::dot_rv(h.normal, *g) * s;
                        if (v < 0) {
                            ok = false;
                            break;
                        }
                    }
                    if (ok) throw HypothesisError("feasible region is unbounded");
                }
            } while (std::next_permutation(pick.begin(), pick.end()));
    }

    Polytope P;
    P.dim = dim;
    P.ineqs = ineqs;
    if (m < (std::size_t)dim) return P;

    std::vector<int> pick(m, 0);
    std::fill(pick.end() - dim, pick.end(), 1);
    std::set<RatVec> seen;
    do {
        RatMat a;
        RatVec b;
        for (std::size_t i = 0; i < m; ++i)
            if (pick[i]) {
                a.push_back(ineqs[i].normal);
                b.push_back(ineqs[i].offset);
            }
        auto y = solve_linear(a, b);
        if (!y) continue;
        bool feasible = true;
        for (const auto& h : ineqs)
            if (detail::dot_rv(h.normal, *y) < h.offset) {
                feasible = false;
                break;
            }
        if (feasible) seen.insert(*y);
    } while (std::next_permutation(pick.begin(), pick.end()));

    for (const auto& v : seen) {
        std::vector<int> t;
        for (std::size_t i = 0; i < m; ++i)
            if (detail::dot_rv(ineqs[i].normal, v) == ineqs[i].offset) t.push_back((int)i);
        P.vertices.push_back(v);
        P.tight.push_back(t);
    }
    return P;
}

namespace detail {

inline std::size_t affine_rank(const Polytope& P, const std::vector<int>& verts) {
    if (verts.size() <= 1) return 0;
    RatMat rows;
    for (std::size_t i = 1; i < verts.size(); ++i) {
        RatVec d(P.dim);
        for (int j = 0; j < P.dim; ++j)
            d[j] = P.vertices[verts[i]][j] - P.vertices[verts[0]][j];
        rows.push_back(std::move(d));
    }
    return rat_rank(rows);
}

// star triangulation from the lexicographically least vertex, recursing into
// the facets that do not contain it
inline void triangulate(const Polytope& P, const std::vector<int>& verts, int k,
                        std::vector<std::vector<int>>& out) {
    if (k == 0) {
        out.push_back({verts[0]});
        return;
    }
    int v0 = verts[0]; // verts stay sorted, so this is the lex-least vertex
    std::set<std::vector<int>> facets;
    for (std::size_t i = 0; i < P.ineqs.size(); ++i) {
        if (dot_rv(P.ineqs[i].normal, P.vertices[v0]) == P.ineqs[i].offset) continue;
        std::vector<int> w;
        for (int v : verts)
            if (dot_rv(P.ineqs[i].normal, P.vertices[v]) == P.ineqs[i].offset)
                w.push_back(v);
        if (w.size() < (std::size_t)k) continue;
        if (affine_rank(P, w) != (std::size_t)k - 1) continue;
        facets.insert(w);
    }
    for (const auto& w : facets) {
        std::vector<std::vector<int>> sub;
        triangulate(P, w, k - 1, sub);
        for (auto& s : sub) {
            s.push_back(v0);
            out.push_back(std::move(s));
        }
    }
}

} // namespace detail

// exact Euclidean volume via the star triangulation
inline Rat polytope_volume(const Polytope& P) {
    std::vector<int> all(P.vertices.size());
    std::iota(all.begin(), all.end(), 0);
    if (P.vertices.size() < (std::size_t)P.dim + 1) return 0;
    if (detail::affine_rank(P, all) < (std::size_t)P.dim) return 0;
    std::vector<std::vector<int>> simplices;
    detail::triangulate(P, all, P.dim, simplices);
    Rat vol = 0;
    Int fact = 1;
    for (int i = 2; i <= P.dim; ++i) fact *= i;
    for (const auto& s : simplices) {
        RatMat rows;
        for (int i = 0; i < P.dim; ++i) {
            RatVec d(P.dim);
            for (int j = 0; j < P.dim; ++j)
                d[j] = P.vertices[s[i]][j] - P.vertices[s[P.dim]][j];
            rows.push_back(std::move(d));
        }
        Rat dt = rat_det(rows);
        if (dt < 0) dt = -dt;
        vol += dt / Rat(fact);
    }
    vol.canonicalize();
    return vol;
}

} // namespace toricount
