#pragma once

#include <vector>

#include "toricount/errors.hpp"
#include "toricount/numeric.hpp"
#include "toricount/quadfield.hpp"

namespace toricount {

/* Torus points of P^n(K) of anticanonical height <= B, counted directly from
 * the classical parameterization: a point with homogeneous coordinates of
 * content ideal c has height (max_i N(x_i) / N(c))^{n+1}, and for each ideal
 * class the representatives with content exactly the chosen class ideal are
 * unique up to the unit group.  Completely independent of the torsor
 * machinery; used as an oracle against it on projective spaces. */
inline std::vector<Int> projective_torus_counts(const QuadField& K, int n,
                                                const std::vector<Int>& Bs) {
    if (n < 1) throw ConfigError("projective dimension must be at least 1");
    if (Bs.empty()) throw ConfigError("need at least one height bound");
    for (std::size_t i = 0; i < Bs.size(); ++i) {
        if (Bs[i] < 1) throw ConfigError("height bounds must be positive");
        if (i && Bs[i] <= Bs[i - 1])
            throw ConfigError("height bounds must be strictly increasing");
    }
    const std::size_t nb = Bs.size();
    const Int& Bmax = Bs.back();
    std::vector<Int> totals(nb, Int(0));

    for (const auto& c : K.class_reps) {
        Rat Nc = ideal_norm(c);
        // N(x_i) <= (B * N(c)^{n+1})^{1/(n+1)}
        Rat capn = Rat(Bmax) * pow_rat(Nc, n + 1);
        Int U = iroot(floor_rat(capn), (unsigned long)(n + 1)) + 1;
        auto elems = enumerate_disc(K, c, Rat(U));

        std::vector<Int> diff(nb + 1, Int(0));
        std::vector<const DiscPoint*> chosen(n + 1, nullptr);

        auto leaf = [&]() {
            Rat mx = chosen[0]->absn;
            Ideal content = principal_ideal(K, chosen[0]->x);
            for (int i = 1; i <= n; ++i) {
                if (chosen[i]->absn > mx) mx = chosen[i]->absn;
                content = ideal_sum(content, principal_ideal(K, chosen[i]->x));
            }
            if (!(content == c)) return;
            Rat h = pow_rat(mx / Nc, n + 1);
            h.canonicalize();
            auto it = std::lower_bound(Bs.begin(), Bs.end(), h,
                                       [](const Int& b, const Rat& hh) { return Rat(b) < hh; });
            std::size_t idx = (std::size_t)(it - Bs.begin());
            if (idx < nb) diff[idx] += 1;
        };

        auto rec = [&](auto&& self, int slot) -> void {
            for (const auto& el : elems) {
                if (pow_rat(el.absn, n + 1) > capn) break; // ascending norms
                chosen[slot] = &el;
                if (slot == n)
                    leaf();
                else
                    self(self, slot + 1);
            }
        };
        if (!elems.empty()) rec(rec, 0);

        Int acc = 0;
        for (std::size_t i = 0; i < nb; ++i) {
            acc += diff[i];
            if (!divides(Int(K.unit_count), acc))
                throw InternalError("projective census not divisible by the unit count");
            totals[i] += acc / K.unit_count;
        }
    }
    return totals;
}

} // namespace toricount
