#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace toricount {

using Int = mpz_class;
using Rat = mpq_class;

inline int sign_of(const Int& x) { return mpz_sgn(x.get_mpz_t()); }
inline int sign_of(const Rat& x) { return mpq_sgn(x.get_mpq_t()); }

inline Int gcd_int(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm_int(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

// floor(sqrt(n)), n >= 0
inline Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

// floor(n^(1/k)), n >= 0, k >= 1
inline Int iroot(const Int& n, unsigned long k) {
    Int r;
    mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
    return r;
}

inline Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int ceil_div(const Int& a, const Int& b) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int floor_rat(const Rat& q) { return floor_div(q.get_num(), q.get_den()); }
inline Int ceil_rat(const Rat& q) { return ceil_div(q.get_num(), q.get_den()); }

// nearest integer to q, half rounded toward +infinity (any fixed tie rule
// works for Lagrange reduction; this one keeps runs reproducible)
inline Int round_rat(const Rat& q) {
    return floor_div(2 * q.get_num() + q.get_den(), 2 * q.get_den());
}

inline bool divides(const Int& d, const Int& n) {
    return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline Int exact_div(const Int& n, const Int& d) {
    Int q;
    mpz_divexact(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    return q;
}

inline Rat pow_rat(const Rat& base, unsigned long e) {
    Rat r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
    // base canonical => base^e canonical
    return r;
}

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline bool fits_long(const Int& x) { return x.fits_slong_p() != 0; }

} // namespace toricount
