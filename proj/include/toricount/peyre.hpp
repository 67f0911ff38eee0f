#pragma once

#include <array>
#include <string>
#include <vector>

#include "toricount/errors.hpp"
#include "toricount/fan.hpp"
#include "toricount/moebius.hpp"
#include "toricount/numeric.hpp"
#include "toricount/polytope.hpp"
#include "toricount/quadfield.hpp"
#include "toricount/real.hpp"

namespace toricount {

/* alpha: the volume of the polytope cut out in the dual of the effective cone
 * by the anticanonical degree-one condition,
 *     { y : <ray class, y> >= 0 for all rays, <-K, y> <= 1 }.
 * Exact rational; throws if the region is unbounded (degenerate geometry). */
inline Rat alpha_volume(const PicardData& pic) {
    std::vector<HalfSpace> hs;
    for (const auto& cls : pic.ray_classes) {
        HalfSpace h;
        for (const auto& e : cls) h.normal.push_back(Rat(e));
        h.offset = 0;
        hs.push_back(h);
    }
    HalfSpace top;
    for (const auto& e : pic.anticanonical_class) top.normal.push_back(Rat(-e));
    top.offset = -1;
    hs.push_back(top);
    Polytope P = polytope_from_halfspaces((int)pic.rank, hs);
    return polytope_volume(P);
}

/* Constants of the shape  q * pi^a * disc^(-b/2)  with q rational; keeping
 * the factorization symbolic makes the assembly identities exactly
 * checkable before any rounding happens. */
struct SymbolicConstant {
    Rat q = Rat(1);
    long pi_pow = 0;
    long disc_half_pow = 0;

    SymbolicConstant mul(const SymbolicConstant& o) const {
        SymbolicConstant out;
        out.q = q * o.q;
        out.q.canonicalize();
        out.pi_pow = pi_pow + o.pi_pow;
        out.disc_half_pow = disc_half_pow + o.disc_half_pow;
        return out;
    }
    bool operator==(const SymbolicConstant& o) const {
        return q == o.q && pi_pow == o.pi_pow && disc_half_pow == o.disc_half_pow;
    }
    std::string str() const {
        return "(" + rat_str(q) + ") * pi^" + std::to_string(pi_pow) + " * disc^(-" +
               std::to_string(disc_half_pow) + "/2)";
    }
    Real render(const QuadField& K) const {
        Real v(q);
        if (pi_pow) v *= Real::pi().pow_si(pi_pow);
        if (disc_half_pow) v *= Real(K.disc).sqrt().pow_si(-disc_half_pow);
        return v;
    }
};

struct LeadingConstant {
    std::string fan_name;
    long D = 0;
    Int disc; // |d_K|
    std::size_t rank = 0, n_rays = 0, n_cones = 0;
    int class_number = 1, unit_count = 2;
    Rat alpha;                 // r * polytope volume (see leading_constant)
    SymbolicConstant symbolic; // everything except the Euler product
    KappaEstimate kappa;
    Real value;         // symbolic rendered * kappa.value
    Real lower, upper;  // the kappa tail bound transported to the constant
};

/* The three structural factors of the constant: the class-group/unit factor
 * (2 pi h / omega)^r, the residue factor (2 pi)^{N - r} * #maxcones, and the
 * discriminant normalization disc^(-N/2).  Their product times alpha is the
 * full non-Euler part. */
inline std::array<SymbolicConstant, 3> constant_components(const Fan& fan,
                                                           const QuadField& K,
                                                           const PicardData& pic) {
    const long N = (long)fan.num_rays(), r = (long)pic.rank;
    SymbolicConstant cls;
    cls.q = pow_rat(Rat(2 * K.class_number, K.unit_count), r);
    cls.pi_pow = r;
    SymbolicConstant res;
    res.q = Rat(pow_int(Int(2), (unsigned long)(N - r))) * Rat((long)fan.num_cones());
    res.pi_pow = N - r;
    SymbolicConstant nrm;
    nrm.disc_half_pow = N;
    for (auto& c : {&cls, &res, &nrm}) c->q.canonicalize();
    return {cls, res, nrm};
}

inline LeadingConstant leading_constant(const Fan& fan, const QuadField& K,
                                        long prime_bound = 10000) {
    FanCheckReport chk = validate_fan(fan);
    if (!chk.ok())
        throw HypothesisError("fan '" + fan.name + "' rejected: " + chk.reason_summary());
    PicardData pic = picard_basis(fan);
    auto verdict = check_globally_generated(fan);
    if (!verdict.generated)
        throw HypothesisError("anticanonical divisor of '" + fan.name +
                              "' is not globally generated (cone " +
                              std::to_string(verdict.cone) + ", ray " +
                              std::to_string(verdict.ray) + ")");
    MoebiusTable table = build_moebius_table(fan);

    LeadingConstant C;
    C.fan_name = fan.name;
    C.D = K.D;
    C.disc = K.disc;
    C.rank = pic.rank;
    C.n_rays = fan.num_rays();
    C.n_cones = fan.num_cones();
    C.class_number = K.class_number;
    C.unit_count = K.unit_count;
    // alpha enters the constant in the normalization
    //   alpha = (1/(r-1)!) * integral over Eff^dual of exp(-<-K, y>) dy
    //         = r * vol{ y in Eff^dual : <-K, y> <= 1 },
    // which the rank-1 cases cannot distinguish from the bare volume; the
    // rank-2 regression against actual counts fixes the factor r
    C.alpha = Rat((long)pic.rank) * alpha_volume(pic);
    C.alpha.canonicalize();
    if (C.alpha <= 0) throw InternalError("degenerate effective-cone volume");
    C.kappa = kappa_truncated(table, K, prime_bound);

    auto parts = constant_components(fan, K, pic);
    SymbolicConstant al;
    al.q = C.alpha;
    C.symbolic = al.mul(parts[0]).mul(parts[1]).mul(parts[2]);

    C.value = C.symbolic.render(K);
    C.value *= C.kappa.value;
    Real spread = Real(C.kappa.tail_bound).exp();
    C.upper = C.value * spread;
    C.lower = C.value / spread;
    return C;
}

// the expected main term  C * B * (log B)^{r-1}
inline Real predicted_count(const LeadingConstant& C, const Int& B) {
    if (B <= 1) throw ConfigError("the main term needs a height bound above 1");
    Real out = C.value;
    out *= Real(B);
    if (C.rank >= 2) out *= Real(B).log().pow_si((long)C.rank - 1);
    return out;
}

} // namespace toricount
