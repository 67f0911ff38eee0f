#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "toricount/errors.hpp"
#include "toricount/fan.hpp"
#include "toricount/numeric.hpp"
#include "toricount/quadfield.hpp"
#include "toricount/real.hpp"

namespace toricount {

/* Inclusion-exclusion data attached to the ray set of a fan.  For a subset S
 * of rays, chi(S) = 1 iff S spans a cone of the fan (equivalently, S is
 * contained in the ray set of some maximal cone), and mu is the Moebius
 * transform of chi on the subset lattice:
 *
 *     mu(S) = sum_{T <= S} (-1)^{|S - T|} chi(T),   chi(S) = sum_{T <= S} mu(T).
 *
 * mu vanishes on nonempty sets that span cones, so its support starts at the
 * covering invariant f = min { |S| : S spans no cone }. */
struct MoebiusTable {
    std::size_t n = 0;                 // number of rays
    int f = 0;                         // smallest non-spanning subset size
    std::vector<std::uint8_t> chi;     // indexed by bitmask, size 2^n
    std::vector<std::int32_t> mu;
    Int q1;                            // sum over nonempty S of |mu(S)|
    std::vector<Int> size_sums;        // size_sums[k] = sum_{|S| = k} mu(S)
    std::vector<std::pair<std::uint32_t, std::int32_t>> support; // nonempty S with mu != 0,
                                                                 // sorted by (|S|, mask)
    std::vector<std::uint32_t> cone_masks;
};

inline MoebiusTable build_moebius_table(const Fan& fan) {
    const std::size_t n = fan.num_rays();
    if (n > 20)
        throw BudgetError("moebius table limited to 20 rays, fan has " +
                          std::to_string(n));
    MoebiusTable T;
    T.n = n;
    const std::size_t full = std::size_t(1) << n;
    for (const auto& cone : fan.max_cones) {
        std::uint32_t m = 0;
        for (int r : cone) m |= std::uint32_t(1) << r;
        T.cone_masks.push_back(m);
    }
    T.chi.assign(full, 0);
    for (std::size_t S = 0; S < full; ++S)
        for (auto m : T.cone_masks)
            if ((S & ~std::size_t(m)) == 0) {
                T.chi[S] = 1;
                break;
            }
    T.mu.assign(T.chi.begin(), T.chi.end());
    for (std::size_t bit = 0; bit < n; ++bit)
        for (std::size_t S = 0; S < full; ++S)
            if (S >> bit & 1) T.mu[S] -= T.mu[S ^ (std::size_t(1) << bit)];

    T.f = 0;
    for (std::size_t k = 1; k <= n && T.f == 0; ++k)
        for (std::size_t S = 1; S < full; ++S)
            if (std::size_t(__builtin_popcountll(S)) == k && !T.chi[S]) {
                T.f = (int)k;
                break;
            }
    if (T.f == 0) throw InternalError("every ray subset spans a cone");

    T.q1 = 0;
    T.size_sums.assign(n + 1, Int(0));
    for (std::size_t S = 0; S < full; ++S) {
        int k = __builtin_popcountll(S);
        T.size_sums[k] += T.mu[S];
        if (S) {
            T.q1 += T.mu[S] < 0 ? -T.mu[S] : T.mu[S];
            if (T.mu[S] != 0) T.support.emplace_back((std::uint32_t)S, T.mu[S]);
        }
    }
    std::sort(T.support.begin(), T.support.end(),
              [](const auto& x, const auto& y) {
                  int px = __builtin_popcount(x.first), py = __builtin_popcount(y.first);
                  if (px != py) return px < py;
                  return x.first < y.first;
              });
    return T;
}

/* mu of a tuple of integral ideals (one per ray): zero unless every component
 * is squarefree and, for each prime, the set of components it divides has
 * nonzero table-mu; the value is the product of those mu values. */
inline int mu_of_tuple(const QuadField& K, const MoebiusTable& T,
                       const std::vector<Ideal>& tuple) {
    if (tuple.size() != T.n)
        throw ConfigError("tuple length does not match the ray count");
    for (const auto& d : tuple)
        if (!ideal_is_integral(d)) throw ConfigError("tuple entries must be integral");
    std::map<Ideal, std::uint32_t> masks;
    for (std::size_t r = 0; r < tuple.size(); ++r) {
        for (const auto& [P, e] : factor_ideal(K, tuple[r])) {
            if (e >= 2) return 0;
            masks[P] |= std::uint32_t(1) << r;
        }
    }
    int out = 1;
    for (const auto& [P, mask] : masks) {
        out *= T.mu[mask];
        if (out == 0) return 0;
    }
    return out;
}

// sum_S mu(S) q^{-|S|} as an exact rational; equals the density of tuples in
// F_q^n whose zero pattern spans a cone
inline Rat local_density_factor(const MoebiusTable& T, const Int& q) {
    if (q < 2) throw ConfigError("local factor needs a prime power q >= 2");
    Int num = 0;
    for (std::size_t k = 0; k <= T.n; ++k) num = num * q + T.size_sums[k];
    Rat out(num, pow_int(q, (unsigned long)T.n));
    out.canonicalize();
    return out;
}

// independent brute-force census: tuples in F_q^n whose zero pattern is
// contained in the ray set of some maximal cone (only zero patterns matter,
// so any prime power q works combinatorially)
inline Int count_torus_points_mod_q(const Fan& fan, long q) {
    if (q < 2) throw ConfigError("modulus q must be at least 2");
    const std::size_t n = fan.num_rays();
    if (n > 31) throw BudgetError("census limited to 31 rays");
    Int total = pow_int(Int(q), (unsigned long)n);
    if (total > 100000000) throw BudgetError("census budget exceeded: q^n = " + total.get_str());
    std::vector<std::uint32_t> cone_masks;
    for (const auto& cone : fan.max_cones) {
        std::uint32_t m = 0;
        for (int r : cone) m |= std::uint32_t(1) << r;
        cone_masks.push_back(m);
    }
    const unsigned long count = total.get_ui();
    std::vector<long> digits(n, 0);
    std::uint32_t zero = (std::uint32_t(1) << n) - 1; // all digits zero initially
    Int hits = 0;
    for (unsigned long it = 0;; ++it) {
        bool ok = false;
        for (auto m : cone_masks)
            if ((zero & ~m) == 0) {
                ok = true;
                break;
            }
        if (ok) ++hits;
        if (it + 1 == count) break;
        std::size_t k = 0;
        while (digits[k] == q - 1) {
            digits[k] = 0;
            zero |= std::uint32_t(1) << k;
            ++k;
        }
        if (digits[k] == 0) zero &= ~(std::uint32_t(1) << k);
        ++digits[k];
    }
    return hits;
}

// --- prime ideals and the truncated Euler product ---------------------------

struct PrimeIdealEntry {
    Ideal P;
    Int norm;
};

// all prime ideals of norm <= X, sorted by (norm, HNF triple)
inline std::vector<PrimeIdealEntry> prime_ideals_up_to(const QuadField& K, const Int& X) {
    if (X > 100000000) throw BudgetError("prime ideal bound too large: " + X.get_str());
    std::vector<PrimeIdealEntry> out;
    if (X < 2) return out;
    const unsigned long lim = X.get_ui();
    std::vector<char> sieve(lim + 1, 1);
    for (unsigned long p = 2; p * p <= lim; ++p)
        if (sieve[p])
            for (unsigned long m = p * p; m <= lim; m += p) sieve[m] = 0;
    for (unsigned long p = 2; p <= lim; ++p) {
        if (!sieve[p]) continue;
        PrimeSplit sp = split_prime(K, Int(p));
        if (sp.type == SplitType::inert) {
            if (Int(p) * p <= X) out.push_back({sp.primes[0], Int(p) * p});
        } else {
            for (const auto& P : sp.primes) out.push_back({P, Int(p)});
        }
    }
    std::sort(out.begin(), out.end(), [](const PrimeIdealEntry& x, const PrimeIdealEntry& y) {
        if (x.norm != y.norm) return x.norm < y.norm;
        return x.P < y.P;
    });
    return out;
}

struct KappaEstimate {
    Real value;     // product of local densities over prime ideals of norm <= prime_bound
    Rat tail_bound; // |log value - log(full product)| <= tail_bound, exact rational
    long prime_bound = 0;
    int f = 0;
    Int q1;
};

/* Truncated Euler product of local densities.  Factors are accumulated in
 * 256-bit arithmetic in a fixed order (rational primes ascending; at a split
 * prime the factor enters squared, an inert prime enters once as q = p^2 when
 * p^2 <= bound), so the result is bit-for-bit reproducible.  The tail bound
 * uses |mu(S)| summing to q1 and mu supported in sizes >= f:
 * each omitted factor is 1 + eps with |eps| <= q1 N(p)^{-f}. */
inline KappaEstimate kappa_truncated(const MoebiusTable& T, const QuadField& K,
                                     long prime_bound) {
    if (prime_bound < 2) throw ConfigError("prime bound must be at least 2");
    if (T.f < 2) throw InternalError("covering invariant below 2");
    Rat eps_max = T.q1 / pow_rat(Rat(prime_bound + 1), T.f);
    if (eps_max >= Rat(1, 2))
        throw ConfigError("prime bound " + std::to_string(prime_bound) +
                          " too small for a finite tail bound");
    KappaEstimate est;
    est.prime_bound = prime_bound;
    est.f = T.f;
    est.q1 = T.q1;
    est.value = Real(1L);
    const unsigned long lim = (unsigned long)prime_bound;
    std::vector<char> sieve(lim + 1, 1);
    for (unsigned long p = 2; p * p <= lim; ++p)
        if (sieve[p])
            for (unsigned long m = p * p; m <= lim; m += p) sieve[m] = 0;
    for (unsigned long p = 2; p <= lim; ++p) {
        if (!sieve[p]) continue;
        Int pz{(long)p};
        if (divides(pz, K.disc)) {
            est.value *= local_density_factor(T, pz);
        } else {
            bool split;
            if (p == 2)
                split = detail::mod_pos(K.dprime, Int(8)) == 1;
            else
                split = mpz_legendre(K.dprime.get_mpz_t(), pz.get_mpz_t()) == 1;
            if (split) {
                Rat f = local_density_factor(T, pz);
                est.value *= f;
                est.value *= f;
            } else if (pz * pz <= prime_bound) {
                est.value *= local_density_factor(T, pz * pz);
            }
        }
    }
    // sum_{N(p) > P} N(p)^{-f} <= 2 * P^{1-f} / (f - 1), then the log expansion
    Rat tail = Rat(2) * T.q1 / (Rat(T.f - 1) * pow_rat(Rat(prime_bound), T.f - 1));
    est.tail_bound = tail / (Rat(1) - eps_max);
    est.tail_bound.canonicalize();
    return est;
}

/* Depth-first stream of tuples (d_rho) of squarefree, pairwise "aligned"
 * ideals with nonzero tuple-mu and total norm prod N(d_rho) <= budget.
 * Primes are introduced in (norm, HNF) order and each prime is assigned one
 * support set of the table, so every admissible tuple appears exactly once;
 * the trivial tuple is emitted first. */
template <typename F>
void stream_squarefree_tuples(const QuadField& K, const MoebiusTable& T,
                              const Int& budget, F&& emit) {
    if (budget < 1) return;
    std::vector<PrimeIdealEntry> primes =
        prime_ideals_up_to(K, iroot(budget, (unsigned long)T.f));
    std::vector<Ideal> tuple(T.n, ring_of_integers());
    std::vector<Int> norm_pows; // scratch for per-prime powers

    auto rec = [&](auto&& self, std::size_t start, const Int& norm_acc,
                   int mu_acc) -> void {
        emit(static_cast<const std::vector<Ideal>&>(tuple), mu_acc, norm_acc);
        for (std::size_t j = start; j < primes.size(); ++j) {
            Int min_cost = pow_int(primes[j].norm, (unsigned long)T.f);
            if (norm_acc * min_cost > budget) break;
            for (const auto& [mask, mu] : T.support) {
                int sz = __builtin_popcount(mask);
                Int cost = pow_int(primes[j].norm, (unsigned long)sz);
                if (norm_acc * cost > budget) break; // sizes ascend, so cost does
                std::vector<std::pair<std::size_t, Ideal>> saved;
                for (std::size_t r = 0; r < T.n; ++r)
                    if (mask >> r & 1) {
                        saved.emplace_back(r, tuple[r]);
                        tuple[r] = ideal_mul(K, tuple[r], primes[j].P);
                    }
                self(self, j + 1, norm_acc * cost, mu_acc * mu);
                for (auto& [r, old] : saved) tuple[r] = old;
            }
        }
    };
    rec(rec, 0, Int(1), 1);
}

} // namespace toricount
