#pragma once

#include <mpfr.h>

#include <cstdio>
#include <string>
#include <utility>

#include "toricount/numeric.hpp"

namespace toricount {

// Thin RAII wrapper over mpfr_t.  256 bits (~77 decimal digits) everywhere;
// enough headroom for the 30-digit rendering contracts and the 50-digit pi
// comparisons, with no per-call precision plumbing.
class Real {
  public:
    static constexpr mpfr_prec_t kPrec = 256;

    Real() { mpfr_init2(x_, kPrec); mpfr_set_ui(x_, 0, MPFR_RNDN); }
    explicit Real(long v) { mpfr_init2(x_, kPrec); mpfr_set_si(x_, v, MPFR_RNDN); }
    explicit Real(double v) { mpfr_init2(x_, kPrec); mpfr_set_d(x_, v, MPFR_RNDN); }
    explicit Real(const Int& v) { mpfr_init2(x_, kPrec); mpfr_set_z(x_, v.get_mpz_t(), MPFR_RNDN); }
    explicit Real(const Rat& v) { mpfr_init2(x_, kPrec); mpfr_set_q(x_, v.get_mpq_t(), MPFR_RNDN); }

    Real(const Real& o) { mpfr_init2(x_, kPrec); mpfr_set(x_, o.x_, MPFR_RNDN); }
    Real(Real&& o) noexcept { mpfr_init2(x_, kPrec); mpfr_swap(x_, o.x_); }
    Real& operator=(const Real& o) {
        if (this != &o) mpfr_set(x_, o.x_, MPFR_RNDN);
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        if (this != &o) mpfr_swap(x_, o.x_);
        return *this;
    }
    ~Real() { mpfr_clear(x_); }

    static Real pi() { Real r; mpfr_const_pi(r.x_, MPFR_RNDN); return r; }
    static Real catalan() { Real r; mpfr_const_catalan(r.x_, MPFR_RNDN); return r; }
    static Real zeta_ui(unsigned long s) { Real r; mpfr_zeta_ui(r.x_, s, MPFR_RNDN); return r; }

    Real& operator+=(const Real& o) { mpfr_add(x_, x_, o.x_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { mpfr_sub(x_, x_, o.x_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { mpfr_mul(x_, x_, o.x_, MPFR_RNDN); return *this; }
    Real& operator/=(const Real& o) { mpfr_div(x_, x_, o.x_, MPFR_RNDN); return *this; }
    Real& operator*=(const Rat& q) { mpfr_mul_q(x_, x_, q.get_mpq_t(), MPFR_RNDN); return *this; }
    Real& operator/=(const Rat& q) { mpfr_div_q(x_, x_, q.get_mpq_t(), MPFR_RNDN); return *this; }

    friend Real operator+(Real a, const Real& b) { a += b; return a; }
    friend Real operator-(Real a, const Real& b) { a -= b; return a; }
    friend Real operator*(Real a, const Real& b) { a *= b; return a; }
    friend Real operator/(Real a, const Real& b) { a /= b; return a; }

    Real neg() const { Real r(*this); mpfr_neg(r.x_, r.x_, MPFR_RNDN); return r; }
    Real abs() const { Real r(*this); mpfr_abs(r.x_, r.x_, MPFR_RNDN); return r; }

    Real pow_si(long e) const { Real r; mpfr_pow_si(r.x_, x_, e, MPFR_RNDN); return r; }
    Real exp() const { Real r; mpfr_exp(r.x_, x_, MPFR_RNDN); return r; }
    Real log() const { Real r; mpfr_log(r.x_, x_, MPFR_RNDN); return r; }
    Real sqrt() const { Real r; mpfr_sqrt(r.x_, x_, MPFR_RNDN); return r; }

    // directed-rounding product with an exact rational, for one-sided bound
    // checks (result >= / <= the true product)
    Real mul_q_up(const Rat& q) const {
        Real r(*this);
        mpfr_mul_q(r.x_, r.x_, q.get_mpq_t(), MPFR_RNDU);
        return r;
    }
    Real mul_q_down(const Rat& q) const {
        Real r(*this);
        mpfr_mul_q(r.x_, r.x_, q.get_mpq_t(), MPFR_RNDD);
        return r;
    }

    int cmp(const Real& o) const { return mpfr_cmp(x_, o.x_); }
    int cmp(const Rat& q) const { return mpfr_cmp_q(x_, q.get_mpq_t()); }
    bool operator<(const Real& o) const { return cmp(o) < 0; }
    bool operator<=(const Real& o) const { return cmp(o) <= 0; }
    bool operator>(const Real& o) const { return cmp(o) > 0; }
    bool operator>=(const Real& o) const { return cmp(o) >= 0; }

    double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }

    // scientific notation with `digits` significant decimal digits;
    // deterministic byte output for a given value
    std::string str(int digits = 30) const {
        char buf[160];
        mpfr_snprintf(buf, sizeof buf, "%.*Re", digits - 1, x_);
        return std::string(buf);
    }

    mpfr_ptr raw() { return x_; }
    mpfr_srcptr raw() const { return x_; }

  private:
    mpfr_t x_;
};

} // namespace toricount
