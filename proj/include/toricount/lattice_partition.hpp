#pragma once

#include <array>
#include <cstddef>

#include "toricount/errors.hpp"
#include "toricount/quadfield.hpp"

namespace toricount {

/* Partition of the plane into six closed lattice cones spanned by consecutive
 * vectors of the cycle
 *
 *     w1, w1 + w2, w2, -w1, -(w1 + w2), -w2
 *
 * where (w1, w2) is a reduced basis of the ideal, oriented so the cycle runs
 * counterclockwise.  Every consecutive pair is again a basis of the ideal
 * lattice, and each angular gap lies in (0, pi/2], which is what the
 * fundamental-domain walks downstream rely on. */
struct SixConePartition {
    Ideal source;
    std::array<FieldElem, 6> v; // counterclockwise, starting at least polar angle
};

namespace detail {

// strict polar-angle order on nonzero plane vectors, angles taken in [0, 2pi)
inline bool angle_less(const QuadField& K, const FieldElem& x, const FieldElem& y) {
    auto half = [&](const FieldElem& z) {
        // 0 for angle in [0, pi), 1 for [pi, 2pi)
        if (z.v != 0) return z.v > 0 ? 0 : 1;
        return K.real_sign(z) > 0 ? 0 : 1;
    };
    int hx = half(x), hy = half(y);
    if (hx != hy) return hx < hy;
    return cross_sign(x, y) > 0;
}

} // namespace detail

inline SixConePartition six_cone_partition(const QuadField& K, const Ideal& I) {
    auto [w1, w2] = reduce_basis(K, I);
    // obtuse configuration keeps the gap w1 -> w2 within [pi/2, pi)
    if (K.dot(w1, w2) > 0) w2 = elem_neg(w2);
    if (cross_sign(w1, w2) < 0) std::swap(w1, w2);
    if (cross_sign(w1, w2) == 0) throw InternalError("degenerate reduced basis");
    FieldElem w3 = elem_add(w1, w2);
    std::array<FieldElem, 6> cyc = {w1,          w3,          w2,
                                    elem_neg(w1), elem_neg(w3), elem_neg(w2)};
    std::size_t start = 0;
    for (std::size_t i = 1; i < 6; ++i)
        if (detail::angle_less(K, cyc[i], cyc[start])) start = i;
    SixConePartition out;
    out.source = I;
    for (std::size_t i = 0; i < 6; ++i) out.v[i] = cyc[(start + i) % 6];
    return out;
}

// membership of x in the closed cone spanned by the pair (v[i], v[i+1])
inline bool in_cone_pair(const FieldElem& lo, const FieldElem& hi, const FieldElem& x) {
    return cross_sign(lo, x) >= 0 && cross_sign(x, hi) >= 0;
}

} // namespace toricount
