#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "toricount/errors.hpp"
#include "toricount/numeric.hpp"

namespace toricount {

/* Imaginary quadratic field K = Q(sqrt(-D)), D > 0 squarefree.  We keep the
 * absolute value of the field discriminant in `disc` and its signed value in
 * `dprime` (= -disc).  All elements are written over the single generator
 *
 *     w = (dprime + sqrt(dprime)) / 2,
 *
 * which is an algebraic integer for every discriminant class, so {1, w} is
 * always a Z-basis of the maximal order.  Minimal polynomial:
 *     w^2 - dprime * w + dprime*(dprime-1)/4 = 0,
 * i.e. trace(w) = dprime and norm(w) = dprime*(dprime-1)/4 = n0.
 */
struct FieldElem {
    Int u{0}, v{0}; // x = (u + v*w) / den
    Int den{1};
};

struct Ideal {
    // lattice ( a*Z + (b + c*w)*Z ) / den with a,c > 0, c | a, c | b,
    // 0 <= b < a, gcd(c, den) = 1; norm = a*c / den^2
    Int a{0}, b{0}, c{0}, den{1};

    bool operator==(const Ideal& o) const {
        return a == o.a && b == o.b && c == o.c && den == o.den;
    }
    bool operator<(const Ideal& o) const { // lexicographic; used for canonical orderings
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        if (c != o.c) return c < o.c;
        return den < o.den;
    }
};

struct QuadField; // fwd

inline FieldElem make_elem(Int u, Int v, Int den = 1) {
    if (den == 0) throw ConfigError("element denominator must be nonzero");
    if (den < 0) {
        den = -den;
        u = -u;
        v = -v;
    }
    if (u == 0 && v == 0) return FieldElem{0, 0, 1};
    Int g = gcd_int(gcd_int(u, v), den);
    return FieldElem{u / g, v / g, den / g};
}

inline bool elem_is_zero(const FieldElem& x) { return x.u == 0 && x.v == 0; }

inline FieldElem elem_neg(const FieldElem& x) { return FieldElem{-x.u, -x.v, x.den}; }

inline bool elem_equal(const FieldElem& x, const FieldElem& y) {
    return x.u == y.u && x.v == y.v && x.den == y.den;
}

inline FieldElem elem_add(const FieldElem& x, const FieldElem& y) {
    Int l = lcm_int(x.den, y.den);
    return make_elem(x.u * (l / x.den) + y.u * (l / y.den),
                     x.v * (l / x.den) + y.v * (l / y.den), l);
}

inline FieldElem elem_sub(const FieldElem& x, const FieldElem& y) {
    return elem_add(x, elem_neg(y));
}

inline FieldElem elem_scale(const FieldElem& x, const Rat& q) {
    return make_elem(x.u * q.get_num(), x.v * q.get_num(), x.den * q.get_den());
}

// sign of the imaginary-axis cross product Im(conj(x) * y); independent of
// the field since the sqrt(dprime)/2 scale factor is positive
inline int cross_sign(const FieldElem& x, const FieldElem& y) {
    Int c = x.u * y.v - y.u * x.v;
    return sign_of(c);
}

struct QuadField {
    long D = 0;      // radicand of Q(sqrt(-D))
    Int disc;        // |field discriminant|
    Int dprime;      // signed discriminant, = -disc
    Int n0;          // norm(w)
    int unit_count = 2;
    int class_number = 1;
    std::vector<Ideal> class_reps;    // canonical: least norm, then least (a,b,c)
    std::vector<FieldElem> units;

    FieldElem mul(const FieldElem& x, const FieldElem& y) const {
        // (u1 + v1 w)(u2 + v2 w) with w^2 = dprime*w - n0
        Int u = x.u * y.u - n0 * x.v * y.v;
        Int v = x.u * y.v + y.u * x.v + dprime * x.v * y.v;
        return make_elem(std::move(u), std::move(v), x.den * y.den);
    }

    FieldElem conj(const FieldElem& x) const {
        // w_bar = trace(w) - w = dprime - w
        return make_elem(x.u + dprime * x.v, -x.v, x.den);
    }

    // |x|_inf: the normalized absolute value at the complex place equals the
    // rational norm N(x) = x * conj(x); always >= 0, exact
    Rat abs_inf(const FieldElem& x) const {
        Rat r(x.u * x.u + dprime * x.u * x.v + n0 * x.v * x.v, x.den * x.den);
        r.canonicalize();
        return r;
    }

    // Euclidean inner product of the plane embeddings, = Tr(x * conj(y)) / 2
    Rat dot(const FieldElem& x, const FieldElem& y) const {
        FieldElem z = mul(x, conj(y));
        Rat r(2 * z.u + dprime * z.v, 2 * z.den);
        r.canonicalize();
        return r;
    }

    // sign of the real part of the plane embedding
    int real_sign(const FieldElem& x) const { return sign_of(Int(2 * x.u + dprime * x.v)); }

    std::string elem_str(const FieldElem& x) const {
        std::string s = "(" + x.u.get_str() + (x.v >= 0 ? "+" : "") + x.v.get_str() + "w)";
        if (x.den != 1) s += "/" + x.den.get_str();
        return s;
    }
};

// --- ideal arithmetic ------------------------------------------------------

inline Ideal ring_of_integers() { return Ideal{1, 0, 1, 1}; }

inline Rat ideal_norm(const Ideal& I) {
    Rat r(I.a * I.c, I.den * I.den);
    r.canonicalize();
    return r;
}

inline bool ideal_is_integral(const Ideal& I) { return I.den == 1; }

namespace detail {

// Column HNF of a rank-2 Z-module given by (u, v) coordinate pairs over the
// {1, w} basis.  Every module we feed in is a (scaled) ideal, so the result
// satisfies the c | a, c | b divisibility automatically; we check it anyway.
inline Ideal hnf_from_pairs(const std::vector<std::pair<Int, Int>>& gens, Int den) {
    Int c = 0, bu = 0;
    for (const auto& [u, v] : gens) {
        if (v == 0) continue;
        if (c == 0) {
            c = v;
            bu = u;
        } else {
            Int g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), c.get_mpz_t(),
                       v.get_mpz_t());
            bu = s * bu + t * u;
            c = g;
        }
    }
    if (c < 0) {
        c = -c;
        bu = -bu;
    }
    Int a = 0;
    for (const auto& [u, v] : gens) {
        Int residue = (c == 0) ? u : u - (v / c) * bu;
        a = gcd_int(a, residue);
    }
    if (a == 0 || c == 0) throw InternalError("degenerate module in ideal HNF");
    Int b = bu % a;
    if (b < 0) b += a;
    if (!divides(c, a) || !divides(c, b))
        throw InternalError("module is not an ideal (c does not divide a, b)");
    // lattice content is c (it divides a and b); cancel it against den
    Int g = gcd_int(c, den);
    return Ideal{a / g, b / g, c / g, den / g};
}

} // namespace detail

inline Ideal ideal_mul(const QuadField& K, const Ideal& I, const Ideal& J) {
    // pairwise products of the Z-bases; (b1 + c1 w)(b2 + c2 w) expanded via
    // w^2 = dprime*w - n0
    std::vector<std::pair<Int, Int>> gens;
    gens.emplace_back(I.a * J.a, Int(0));
    gens.emplace_back(I.a * J.b, I.a * J.c);
    gens.emplace_back(J.a * I.b, J.a * I.c);
    gens.emplace_back(I.b * J.b - K.n0 * I.c * J.c,
                      I.b * J.c + J.b * I.c + K.dprime * I.c * J.c);
    return detail::hnf_from_pairs(gens, I.den * J.den);
}

inline Ideal ideal_sum(const Ideal& I, const Ideal& J) {
    Int l = lcm_int(I.den, J.den);
    Int si = l / I.den, sj = l / J.den;
    std::vector<std::pair<Int, Int>> gens = {
        {I.a * si, Int(0)}, {I.b * si, I.c * si}, {J.a * sj, Int(0)}, {J.b * sj, J.c * sj}};
    return detail::hnf_from_pairs(gens, l);
}

inline Ideal ideal_conj(const QuadField& K, const Ideal& I) {
    std::vector<std::pair<Int, Int>> gens = {{I.a, Int(0)},
                                             {I.b + I.c * K.dprime, -I.c}};
    return detail::hnf_from_pairs(gens, I.den);
}

inline Ideal ideal_inverse(const QuadField& K, const Ideal& I) {
    // I = L/den with L*conj(L) = (a c), so I^{-1} = den * conj(L) / (a c)
    std::vector<std::pair<Int, Int>> gens = {
        {I.a * I.den, Int(0)}, {(I.b + I.c * K.dprime) * I.den, -I.c * I.den}};
    return detail::hnf_from_pairs(gens, I.a * I.c);
}

inline Ideal principal_ideal(const QuadField& K, const FieldElem& x) {
    if (elem_is_zero(x)) throw ConfigError("zero element does not generate an ideal");
    // generators x*1 and x*w; x*w = -n0*v + (u + dprime*v) w
    std::vector<std::pair<Int, Int>> gens = {
        {x.u, x.v}, {-K.n0 * x.v, x.u + K.dprime * x.v}};
    return detail::hnf_from_pairs(gens, x.den);
}

inline Ideal ideal_pow(const QuadField& K, const Ideal& I, long e) {
    Ideal base = e < 0 ? ideal_inverse(K, I) : I;
    unsigned long k = e < 0 ? -(unsigned long)e : (unsigned long)e;
    Ideal acc = ring_of_integers();
    while (k) {
        if (k & 1) acc = ideal_mul(K, acc, base);
        base = ideal_mul(K, base, base);
        k >>= 1;
    }
    return acc;
}

inline Ideal power_product(const QuadField& K, const std::vector<Ideal>& ideals,
                           const std::vector<long>& exps) {
    if (ideals.size() != exps.size())
        throw ConfigError("power product needs one exponent per ideal");
    Ideal acc = ring_of_integers();
    for (std::size_t i = 0; i < ideals.size(); ++i)
        if (exps[i] != 0) acc = ideal_mul(K, acc, ideal_pow(K, ideals[i], exps[i]));
    return acc;
}

inline bool ideal_contains(const Ideal& I, const FieldElem& x) {
    if (elem_is_zero(x)) return true;
    // need den*x/xden in a*Z + (b + c*w)*Z
    Int nu = I.den * x.u, nv = I.den * x.v, q = x.den;
    if (!divides(q * I.c, nv)) return false;
    Int t = nv / (q * I.c);
    Int rem = nu - t * I.b * q; // still over denominator q
    if (!divides(q, rem)) return false;
    return divides(I.a, rem / q);
}

// d | I in the sense I * d^{-1} integral; for integral ideals this is I <= d
inline bool ideal_divides(const QuadField& K, const Ideal& d, const Ideal& I) {
    return ideal_is_integral(ideal_mul(K, I, ideal_inverse(K, d)));
}

inline int ideal_valuation(const QuadField& K, const Ideal& P, const Ideal& I) {
    Ideal inv = ideal_inverse(K, P);
    int v = 0;
    Ideal J = ideal_mul(K, I, inv);
    while (ideal_is_integral(J)) {
        ++v;
        J = ideal_mul(K, J, inv);
    }
    return v;
}

inline Ideal ideal_from_generators(const QuadField& K, const std::vector<FieldElem>& gens) {
    Ideal acc;
    bool first = true;
    for (const auto& g : gens) {
        if (elem_is_zero(g)) continue;
        Ideal p = principal_ideal(K, g);
        acc = first ? p : ideal_sum(acc, p);
        first = false;
    }
    if (first) throw ConfigError("no nonzero generators given");
    return acc;
}

// --- prime splitting -------------------------------------------------------

namespace detail {

inline Int mod_pos(Int x, const Int& m) {
    x %= m;
    if (x < 0) x += m;
    return x;
}

// Tonelli-Shanks; requires p an odd prime and a a quadratic residue mod p
inline Int sqrt_mod(const Int& a_in, const Int& p) {
    Int a = mod_pos(a_in, p);
    if (a == 0) return 0;
    if (mod_pos(p, 4) == 3) {
        Int e = (p + 1) / 4, r;
        mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        return r;
    }
    Int q = p - 1;
    unsigned long s = 0;
    while (divides(2, q)) {
        q /= 2;
        ++s;
    }
    Int z = 2;
    while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
    Int m{(long)s}, c, t, r, e2 = (q + 1) / 2;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e2.get_mpz_t(), p.get_mpz_t());
    while (t != 1) {
        Int tt = t;
        long i = 0;
        while (tt != 1) {
            tt = tt * tt % p;
            ++i;
        }
        Int bexp = 1;
        mpz_mul_2exp(bexp.get_mpz_t(), bexp.get_mpz_t(),
                     (unsigned long)(m.get_si() - i - 1));
        Int bb;
        mpz_powm(bb.get_mpz_t(), c.get_mpz_t(), bexp.get_mpz_t(), p.get_mpz_t());
        m = i;
        c = bb * bb % p;
        t = t * c % p;
        r = r * bb % p;
    }
    return r;
}

} // namespace detail

enum class SplitType { split, inert, ramified };

struct PrimeSplit {
    SplitType type;
    std::vector<Ideal> primes; // split: two (ordered by HNF b); else one
    Int residue_norm;          // norm of each prime above p
};

inline PrimeSplit split_prime(const QuadField& K, const Int& p) {
    if (mpz_probab_prime_p(p.get_mpz_t(), 30) == 0)
        throw ConfigError("split_prime expects a rational prime, got " + p.get_str());
    // roots of x^2 - dprime x + n0 mod p classify the splitting
    std::vector<Int> roots;
    if (p == 2) {
        for (long t = 0; t < 2; ++t) {
            Int val = Int(t) * t - K.dprime * t + K.n0;
            if (divides(2, val)) roots.push_back(t);
        }
        if (roots.size() == 2 && divides(p, K.disc))
            throw InternalError("inconsistent splitting at 2");
    } else if (divides(p, K.disc)) {
        Int half = (p + 1) / 2; // inverse of 2 mod p
        roots.push_back(detail::mod_pos(K.dprime * half, p));
    } else {
        int leg = mpz_legendre(K.dprime.get_mpz_t(), p.get_mpz_t());
        if (leg == 1) {
            Int s = detail::sqrt_mod(K.dprime, p);
            Int half = (p + 1) / 2;
            roots.push_back(detail::mod_pos((K.dprime + s) * half, p));
            roots.push_back(detail::mod_pos((K.dprime - s) * half, p));
            std::sort(roots.begin(), roots.end());
            if (roots[0] == roots[1]) throw InternalError("split prime with equal roots");
        }
    }

    PrimeSplit out;
    if (roots.empty()) {
        out.type = SplitType::inert;
        out.primes = {Ideal{p, 0, p, 1}};
        out.residue_norm = p * p;
        return out;
    }
    out.type = (roots.size() == 2) ? SplitType::split
                                   : (divides(p, K.disc) ? SplitType::ramified
                                                         : SplitType::split);
    if (roots.size() == 1 && !divides(p, K.disc)) {
        // p = 2 with a double root but unramified cannot happen
        throw InternalError("single root at unramified prime");
    }
    if (roots.size() == 1) out.type = SplitType::ramified;
    for (const auto& t : roots) {
        Int b = detail::mod_pos(-t, p);
        out.primes.push_back(Ideal{p, b, 1, 1});
    }
    std::sort(out.primes.begin(), out.primes.end());
    out.residue_norm = p;
    return out;
}

inline std::vector<std::pair<Int, int>> factor_int(Int n) {
    if (n <= 0) throw ConfigError("can only factor positive integers");
    std::vector<std::pair<Int, int>> out;
    for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        int e = 0;
        while (divides(p, n)) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline std::vector<std::pair<Ideal, int>> factor_ideal(const QuadField& K, const Ideal& I) {
    if (!ideal_is_integral(I)) throw ConfigError("can only factor integral ideals");
    std::vector<std::pair<Ideal, int>> out;
    Int n = I.a * I.c;
    for (const auto& [p, e] : factor_int(n)) {
        (void)e;
        for (const auto& P : split_prime(K, p).primes) {
            int v = ideal_valuation(K, P, I);
            if (v > 0) out.emplace_back(P, v);
        }
    }
    return out;
}

// all integral ideals of the exact norm n, sorted by HNF triple
inline std::vector<Ideal> ideals_of_norm(const QuadField& K, const Int& n) {
    if (n <= 0) return {};
    std::vector<Ideal> acc = {ring_of_integers()};
    for (const auto& [p, e] : factor_int(n)) {
        PrimeSplit sp = split_prime(K, p);
        std::vector<Ideal> local;
        if (sp.type == SplitType::split) {
            for (int i = 0; i <= e; ++i)
                local.push_back(ideal_mul(K, ideal_pow(K, sp.primes[0], i),
                                          ideal_pow(K, sp.primes[1], e - i)));
        } else if (sp.type == SplitType::ramified) {
            local.push_back(ideal_pow(K, sp.primes[0], e));
        } else {
            if (e % 2) return {}; // no ideal has odd inert-prime valuation in its norm
            local.push_back(ideal_pow(K, sp.primes[0], e / 2));
        }
        std::vector<Ideal> next;
        for (const auto& A : acc)
            for (const auto& L : local) next.push_back(ideal_mul(K, A, L));
        acc = std::move(next);
    }
    std::sort(acc.begin(), acc.end());
    return acc;
}

// --- lattice reduction and class group -------------------------------------

// Lagrange-Gauss reduction of the rank-2 lattice underlying an ideal; returns
// successive minima (w1, w2) with |w1| <= |w2| and 2|<w1,w2>| <= |w1|^2
inline std::pair<FieldElem, FieldElem> reduce_basis(const QuadField& K, const Ideal& I) {
    FieldElem w1 = make_elem(I.a, 0, I.den);
    FieldElem w2 = make_elem(I.b, I.c, I.den);
    if (K.abs_inf(w1) > K.abs_inf(w2)) std::swap(w1, w2);
    while (true) {
        Rat mu = K.dot(w1, w2) / K.abs_inf(w1);
        Int q = round_rat(mu);
        if (q != 0) w2 = elem_sub(w2, elem_scale(w1, Rat(q)));
        if (K.abs_inf(w2) >= K.abs_inf(w1)) break;
        std::swap(w1, w2);
    }
    return {w1, w2};
}

/* alpha generates the ideal iff the shortest nonzero vector has |alpha|_inf
 * equal to the ideal norm: (alpha) is contained in the ideal and has the same
 * covolume, hence they coincide. */
inline bool is_principal(const QuadField& K, const Ideal& I) {
    auto [w1, w2] = reduce_basis(K, I);
    (void)w2;
    return K.abs_inf(w1) == ideal_norm(I);
}

inline bool ideals_equivalent(const QuadField& K, const Ideal& I, const Ideal& J) {
    return is_principal(K, ideal_mul(K, I, ideal_inverse(K, J)));
}

// --- element enumeration ----------------------------------------------------

struct DiscPoint {
    FieldElem x;
    Rat absn;
};

/* All nonzero x in the ideal lattice with |x|_inf <= bound, sorted by
 * (|x|_inf, u, v).  Row-by-row scan of the positive definite norm form in
 * the (s, t) basis coordinates, with exact integer root isolation. */
inline std::vector<DiscPoint> enumerate_disc(const QuadField& K, const Ideal& I,
                                             const Rat& bound) {
    std::vector<DiscPoint> out;
    if (bound <= 0) return out;
    const Int &a = I.a, &b = I.b, &c = I.c, &den = I.den;
    // norm(x)*den^2 >= v^2 * disc / 4 gives the t-range, v = t*c
    Rat tcap = Rat(4 * den * den, c * c * K.disc) * bound;
    Int tmax = isqrt(floor_rat(tcap));
    Int nb = b * b + K.dprime * b * c + K.n0 * c * c; // norm of b + c*w
    Int Ed = bound.get_den(), En = bound.get_num();
    for (Int t = -tmax; t <= tmax; ++t) {
        // Ed*(a^2 s^2 + a t (2b + dprime c) s + t^2 nb) <= En * den^2
        Int A2 = Ed * a * a;
        Int B2 = Ed * a * t * (2 * b + K.dprime * c);
        Int C2 = Ed * t * t * nb - En * den * den;
        Int disc2 = B2 * B2 - 4 * A2 * C2;
        if (disc2 < 0) continue;
        Int r = isqrt(disc2);
        Int slo = floor_div(-B2 - r, 2 * A2) - 1;
        Int shi = floor_div(-B2 + r, 2 * A2) + 1;
        for (Int s = slo; s <= shi; ++s) {
            if (s == 0 && t == 0) continue;
            Int u = s * a + t * b, v = t * c;
            Int q = u * u + K.dprime * u * v + K.n0 * v * v;
            Rat norm(q, den * den);
            norm.canonicalize();
            if (norm <= bound) out.push_back({make_elem(u, v, den), norm});
        }
    }
    std::sort(out.begin(), out.end(), [](const DiscPoint& lhs, const DiscPoint& rhs) {
        if (lhs.absn != rhs.absn) return lhs.absn < rhs.absn;
        if (lhs.x.u != rhs.x.u) return lhs.x.u < rhs.x.u;
        return lhs.x.v < rhs.x.v;
    });
    return out;
}

// --- field construction -----------------------------------------------------

inline QuadField make_field(long D) {
    if (D <= 0) throw ConfigError("field parameter D must be positive");
    for (const auto& [p, e] : factor_int(Int(D)))
        if (e >= 2)
            throw ConfigError("field parameter D = " + std::to_string(D) +
                              " is not squarefree (divisible by " + p.get_str() +
                              "^2)");
    QuadField K;
    K.D = D;
    K.disc = (D % 4 == 3) ? Int(D) : Int(4) * D;
    K.dprime = -K.disc;
    K.n0 = K.dprime * (K.dprime - 1) / 4;
    K.unit_count = (D == 1) ? 4 : (D == 3) ? 6 : 2;

    for (const auto& pt : enumerate_disc(K, ring_of_integers(), Rat(1)))
        K.units.push_back(pt.x);
    if ((int)K.units.size() != K.unit_count)
        throw InternalError("unit count mismatch for D = " + std::to_string(D));

    // class group: every class contains a primitive ideal of norm below the
    // Minkowski bound 2*sqrt(disc)/pi; scan them in (norm, b) order so the
    // first representative seen in each class is the canonical one
    long bound = (long)(2.0 * std::sqrt(K.disc.get_d()) / 3.14159265358979) + 2;
    for (long av = 1; av <= bound; ++av) {
        for (long bv = 0; bv < av; ++bv) {
            Int nb = Int(bv) * bv + K.dprime * bv + K.n0;
            if (!divides(Int(av), nb)) continue;
            Ideal I{av, bv, 1, 1};
            bool fresh = true;
            for (const auto& rep : K.class_reps)
                if (ideals_equivalent(K, I, rep)) {
                    fresh = false;
                    break;
                }
            if (fresh) K.class_reps.push_back(I);
        }
    }
    K.class_number = (int)K.class_reps.size();
    return K;
}

} // namespace toricount
