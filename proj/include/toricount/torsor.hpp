#pragma once

#include <algorithm>
#include <chrono>
#include <exception>
#include <functional>
#include <numeric>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "toricount/errors.hpp"
#include "toricount/fan.hpp"
#include "toricount/moebius.hpp"
#include "toricount/numeric.hpp"
#include "toricount/quadfield.hpp"

namespace toricount {

/* Twisted cell data for one class tuple.  Rays carry the lattices
 * abar^{D_rho} determined by pushing the tuple of class representatives
 * through the ray classes; the anticanonical height of a coordinate vector is
 *
 *   h(x) = max_cones prod_{rho not in cone} N(x_rho)^{e(cone,rho)} / norm_twist
 *
 * with e the nonnegative exponents of the per-cone anticanonical divisor and
 * norm_twist = prod_rho N(abar^{D_rho}). */
struct TwistContext {
    const Fan* fan = nullptr;
    const QuadField* field = nullptr;
    PicardData pic;
    std::vector<int> class_tuple;                  // indices into field->class_reps
    std::vector<Ideal> ray_twist;                  // abar^{D_rho}, possibly fractional
    std::vector<Ideal> ray_twist_inv;
    std::vector<Rat> ray_twist_norm;
    Rat norm_twist;
    std::vector<std::vector<int>> cone_exps;       // [cone][ray], -1 for rays of the cone
    std::vector<std::vector<int>> cone_complement; // rays outside the cone
    std::vector<int> max_exp;                      // per ray
};

inline TwistContext make_twist_context(const Fan& fan, const QuadField& K,
                                       const PicardData& pic,
                                       const std::vector<int>& class_tuple) {
    auto verdict = check_globally_generated(fan);
    if (!verdict.generated)
        throw HypothesisError(
            "anticanonical divisor of '" + fan.name +
            "' is not globally generated (cone " + std::to_string(verdict.cone) +
            ", ray " + std::to_string(verdict.ray) + " has exponent " +
            verdict.min_exponent.get_str() + "); the height pruning would be unsound");
    if (class_tuple.size() != pic.rank)
        throw ConfigError("class tuple length must equal the Picard rank");
    for (int t : class_tuple)
        if (t < 0 || t >= K.class_number)
            throw ConfigError("class index out of range: " + std::to_string(t));

    TwistContext ctx;
    ctx.fan = &fan;
    ctx.field = &K;
    ctx.pic = pic;
    ctx.class_tuple = class_tuple;
    const std::size_t N = fan.num_rays(), C = fan.num_cones();

    std::vector<Ideal> reps;
    for (int t : class_tuple) reps.push_back(K.class_reps[t]);
    ctx.norm_twist = 1;
    for (std::size_t r = 0; r < N; ++r) {
        std::vector<long> exps;
        for (const auto& e : pic.ray_classes[r]) {
            if (!fits_long(e)) throw InternalError("ray class exponent overflow");
            exps.push_back(e.get_si());
        }
        Ideal tw = power_product(K, reps, exps);
        ctx.ray_twist.push_back(tw);
        ctx.ray_twist_inv.push_back(ideal_inverse(K, tw));
        ctx.ray_twist_norm.push_back(ideal_norm(tw));
        ctx.norm_twist *= ctx.ray_twist_norm.back();
    }
    ctx.norm_twist.canonicalize();

    for (std::size_t c = 0; c < C; ++c) {
        auto av = anticanonical_exponents(fan, c);
        std::vector<int> row(N, -1);
        std::vector<int> comp;
        for (std::size_t r = 0; r < N; ++r) {
            if (std::find(fan.max_cones[c].begin(), fan.max_cones[c].end(), (int)r) !=
                fan.max_cones[c].end())
                continue;
            if (!fits_long(av[r]) || av[r] < 0)
                throw InternalError("bad anticanonical exponent");
            row[r] = (int)av[r].get_si();
            comp.push_back((int)r);
        }
        ctx.cone_exps.push_back(row);
        ctx.cone_complement.push_back(comp);
    }
    ctx.max_exp.assign(N, 0);
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < C; ++c)
            ctx.max_exp[r] = std::max(ctx.max_exp[r], ctx.cone_exps[c][r]);
    return ctx;
}

// exact anticanonical height of a full coordinate vector
inline Rat height_sup(const TwistContext& ctx, const std::vector<FieldElem>& coords) {
    const std::size_t N = ctx.fan->num_rays();
    if (coords.size() != N) throw ConfigError("coordinate vector has wrong length");
    for (std::size_t r = 0; r < N; ++r)
        if (elem_is_zero(coords[r]))
            throw ConfigError("coordinate on ray " + std::to_string(r) + " is zero");
    Rat best = 0;
    for (std::size_t c = 0; c < ctx.cone_exps.size(); ++c) {
        Rat prod = 1;
        for (int r : ctx.cone_complement[c]) {
            int e = ctx.cone_exps[c][r];
            if (e > 0) prod *= pow_rat(ctx.field->abs_inf(coords[r]), e);
        }
        if (c == 0 || prod > best) best = prod;
    }
    Rat h = best / ctx.norm_twist;
    h.canonicalize();
    return h;
}

struct TorsorPoint {
    std::vector<FieldElem> coords;
    std::vector<Ideal> ideal_coords; // (x_rho) * abar^{-D_rho}, integral
    Rat height;
    bool coprime = false;
};

struct CellOptions {
    int shards = 1;
    bool prune = true;        // false: visit everything, filter exactly (for audits)
    bool want_coprime = true; // skip the coprimality work when only lattice counts matter
    unsigned long long node_budget = 0; // 0 = unlimited
    const std::function<void(const TorsorPoint&)>* visitor = nullptr;
};

struct CellCounts {
    std::vector<Int> lattice; // per height bound: all admissible lattice points
    std::vector<Int> coprime; // per height bound: points with coprime supports
    unsigned long long nodes = 0, leaves = 0;
};

namespace detail {

struct CellElem {
    FieldElem x;
    Rat absn;
    std::vector<Rat> pows; // absn^1 .. absn^{max_exp}
    Ideal coord;           // (x) * abar^{-D_rho}
};

struct CellWorker {
    std::vector<Int> lat_diff, cop_diff;
    unsigned long long nodes = 0, leaves = 0;
    std::exception_ptr err;
};

} // namespace detail

inline CellCounts enumerate_cell(const TwistContext& ctx,
                                 const std::vector<Ideal>& d_tuple,
                                 const std::vector<Int>& Bs,
                                 const CellOptions& opts = {}) {
    const Fan& fan = *ctx.fan;
    const QuadField& K = *ctx.field;
    const std::size_t N = fan.num_rays(), C = fan.num_cones();
    if (Bs.empty()) throw ConfigError("need at least one height bound");
    for (std::size_t i = 0; i < Bs.size(); ++i) {
        // B = 0 is legal and counts nothing: integral points have height >= 1
        if (Bs[i] < 0) throw ConfigError("height bounds must be nonnegative");
        if (i && Bs[i] <= Bs[i - 1])
            throw ConfigError("height bounds must be strictly increasing");
    }
    if (d_tuple.size() != N) throw ConfigError("divisor tuple has wrong length");
    for (const auto& d : d_tuple)
        if (!ideal_is_integral(d))
            throw ConfigError("divisor tuple entries must be integral ideals");
    if (opts.shards < 1) throw ConfigError("shard count must be positive");

    const Int& Bmax = Bs.back();
    Rat cap = Rat(Bmax) * ctx.norm_twist;
    cap.canonicalize();

    Rat Nd = 1;
    std::vector<Ideal> lat(N);
    std::vector<Rat> NL(N);
    for (std::size_t r = 0; r < N; ++r) {
        lat[r] = ideal_mul(K, d_tuple[r], ctx.ray_twist[r]);
        NL[r] = ideal_norm(lat[r]);
        Nd *= ideal_norm(d_tuple[r]);
    }
    Nd.canonicalize();

    // per-ray norm bound: the static one from the divisibility structure,
    // tightened by each cone inequality with all other factors at their minima
    std::vector<Rat> bound(N);
    for (std::size_t r = 0; r < N; ++r) {
        bound[r] = NL[r] * Rat(Bmax) / Nd;
        for (std::size_t c = 0; c < C; ++c) {
            int e = ctx.cone_exps[c][r];
            if (e < 1) continue;
            Rat others = 1;
            for (int r2 : ctx.cone_complement[c])
                if (r2 != (int)r) others *= pow_rat(NL[r2], ctx.cone_exps[c][r2]);
            Rat X = cap / others;
            if (X <= 0) continue;
            Int U = iroot(ceil_rat(X), (unsigned long)e) + 1;
            if (Rat(U) < bound[r]) bound[r] = Rat(U);
        }
        bound[r].canonicalize();
    }

    // element lists, ascending by norm, with power and ideal caches
    std::vector<std::vector<detail::CellElem>> lists(N);
    for (std::size_t r = 0; r < N; ++r) {
        for (const auto& pt : enumerate_disc(K, lat[r], bound[r])) {
            detail::CellElem e;
            e.x = pt.x;
            e.absn = pt.absn;
            Rat p = 1;
            for (int k = 0; k < ctx.max_exp[r]; ++k) {
                p *= pt.absn;
                e.pows.push_back(p);
            }
            if (opts.want_coprime || opts.visitor)
                e.coord = ideal_mul(K, principal_ideal(K, pt.x), ctx.ray_twist_inv[r]);
            lists[r].push_back(std::move(e));
        }
    }

    // process rays in order of increasing expected list density
    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return bound[i] / NL[i] < bound[j] / NL[j];
    });

    // remmin[c][k]: product over still-unassigned complement rays of the
    // minimum possible contribution N(lattice)^e
    std::vector<std::vector<Rat>> remmin(C, std::vector<Rat>(N + 1, Rat(1)));
    for (std::size_t c = 0; c < C; ++c)
        for (std::size_t k = N; k-- > 0;) {
            Rat m = remmin[c][k + 1];
            int e = ctx.cone_exps[c][order[k]];
            if (e > 0) m *= pow_rat(NL[order[k]], e);
            remmin[c][k] = m;
        }

    const std::size_t nb = Bs.size();
    auto run_worker = [&](int wid, int nshards, detail::CellWorker& out) {
        try {
            out.lat_diff.assign(nb + 1, Int(0));
            out.cop_diff.assign(nb + 1, Int(0));
            std::vector<std::vector<Rat>> partial(N + 1, std::vector<Rat>(C, Rat(1)));
            std::vector<const detail::CellElem*> chosen(N, nullptr);

            auto coprime_here = [&]() {
                Ideal acc;
                bool first = true;
                for (std::size_t c = 0; c < C; ++c) {
                    Ideal prod = chosen[ctx.cone_complement[c][0]]->coord;
                    for (std::size_t k = 1; k < ctx.cone_complement[c].size(); ++k)
                        prod = ideal_mul(K, prod, chosen[ctx.cone_complement[c][k]]->coord);
                    acc = first ? prod : ideal_sum(acc, prod);
                    first = false;
                    if (acc == ring_of_integers()) return true;
                }
                return acc == ring_of_integers();
            };

            auto leaf = [&]() {
                ++out.leaves;
                Rat hsup = partial[N][0];
                for (std::size_t c = 1; c < C; ++c)
                    if (partial[N][c] > hsup) hsup = partial[N][c];
                Rat h = hsup / ctx.norm_twist;
                h.canonicalize();
                auto it = std::lower_bound(
                    Bs.begin(), Bs.end(), h,
                    [](const Int& b, const Rat& hh) { return Rat(b) < hh; });
                std::size_t idx = (std::size_t)(it - Bs.begin());
                if (idx == nb) return; // only reachable without pruning
                out.lat_diff[idx] += 1;
                bool cop = false;
                if (opts.want_coprime || opts.visitor) {
                    cop = coprime_here();
                    if (cop) out.cop_diff[idx] += 1;
                }
                if (opts.visitor) {
                    TorsorPoint pt;
                    for (std::size_t r = 0; r < N; ++r) {
                        pt.coords.push_back(chosen[r]->x);
                        pt.ideal_coords.push_back(chosen[r]->coord);
                    }
                    pt.height = h;
                    pt.coprime = cop;
                    (*opts.visitor)(pt);
                }
            };

            auto rec = [&](auto&& self, std::size_t k) -> void {
                const std::size_t ray = order[k];
                const auto& list = lists[ray];
                std::size_t i0 = (k == 0) ? (std::size_t)wid : 0;
                std::size_t step = (k == 0) ? (std::size_t)nshards : 1;
                for (std::size_t i = i0; i < list.size(); i += step) {
                    const auto& el = list[i];
                    ++out.nodes;
                    if (opts.node_budget && out.nodes > opts.node_budget)
                        throw BudgetError("enumeration node budget exceeded");
                    bool violated = false;
                    for (std::size_t c = 0; c < C; ++c) {
                        int e = ctx.cone_exps[c][ray];
                        Rat& dst = partial[k + 1][c];
                        dst = partial[k][c];
                        if (e > 0) dst *= el.pows[e - 1];
                        if (opts.prune && !violated && dst * remmin[c][k + 1] > cap)
                            violated = true;
                    }
                    if (violated) break; // lists ascend by norm; later elements fail too
                    chosen[ray] = &el;
                    if (k + 1 == N)
                        leaf();
                    else
                        self(self, k + 1);
                }
            };

            bool empty = false;
            for (const auto& l : lists)
                if (l.empty()) empty = true;
            if (!empty) rec(rec, 0);
        } catch (...) {
            out.err = std::current_exception();
        }
    };

    int nshards = opts.shards;
    if (opts.visitor) nshards = 1; // keep callback order deterministic
    std::vector<detail::CellWorker> workers(nshards);
    if (nshards == 1) {
        run_worker(0, 1, workers[0]);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < nshards; ++w)
            threads.emplace_back([&, w]() { run_worker(w, nshards, workers[w]); });
        for (auto& t : threads) t.join();
    }
    for (auto& w : workers)
        if (w.err) std::rethrow_exception(w.err);

    CellCounts out;
    out.lattice.assign(nb, Int(0));
    out.coprime.assign(nb, Int(0));
    Int lat_acc = 0, cop_acc = 0;
    for (std::size_t i = 0; i < nb; ++i) {
        for (const auto& w : workers) {
            lat_acc += w.lat_diff[i];
            cop_acc += w.cop_diff[i];
        }
        out.lattice[i] = lat_acc;
        out.coprime[i] = cop_acc;
    }
    for (const auto& w : workers) {
        out.nodes += w.nodes;
        out.leaves += w.leaves;
    }
    return out;
}

// --- the two counting routes -------------------------------------------------

struct CountOptions {
    int shards = 1;
    bool moebius = false; // additionally run the inclusion-exclusion route
    bool timings = false;
    unsigned long long node_budget = 0;
};

struct CountReport {
    std::string fan_name;
    long D = 0;
    std::size_t rank = 0;
    int class_number = 1;
    int unit_count = 2;
    std::vector<Int> Bs;
    std::vector<std::vector<int>> tuples;      // class tuples in lexicographic order
    std::vector<std::vector<Int>> cell_counts; // [tuple][bound], coprime counts
    std::vector<Int> totals_direct;            // per bound
    std::vector<Int> totals_moebius;           // per bound; empty if the route didn't run
    double elapsed_seconds = 0.0;              // 0 unless timings were requested
    bool timings = false;
    unsigned long long nodes = 0, leaves = 0;
};

namespace detail {

inline std::vector<std::vector<int>> class_tuples(std::size_t rank, int h) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(rank, 0);
    while (true) {
        out.push_back(cur);
        std::size_t k = rank;
        while (k > 0 && cur[k - 1] == h - 1) cur[--k] = 0;
        if (k == 0) break;
        ++cur[k - 1];
    }
    if (rank == 0) out.assign(1, {});
    return out;
}

} // namespace detail

inline CountReport count_points(const Fan& fan, const QuadField& K,
                                const std::vector<Int>& Bs,
                                const CountOptions& opts = {}) {
    auto t0 = std::chrono::steady_clock::now();
    FanCheckReport chk = validate_fan(fan);
    if (!chk.ok())
        throw HypothesisError("fan '" + fan.name + "' rejected: " + chk.reason_summary());
    PicardData pic = picard_basis(fan);

    CountReport rep;
    rep.fan_name = fan.name;
    rep.D = K.D;
    rep.rank = pic.rank;
    rep.class_number = K.class_number;
    rep.unit_count = K.unit_count;
    rep.Bs = Bs;
    rep.timings = opts.timings;
    rep.tuples = detail::class_tuples(pic.rank, K.class_number);

    const std::size_t nb = Bs.size();
    std::vector<Int> sum_direct(nb, Int(0)), sum_moebius(nb, Int(0));
    MoebiusTable table;
    if (opts.moebius) table = build_moebius_table(fan);

    for (const auto& tuple : rep.tuples) {
        TwistContext ctx = make_twist_context(fan, K, pic, tuple);
        CellOptions copts;
        copts.shards = opts.shards;
        copts.node_budget = opts.node_budget;
        CellCounts cell = enumerate_cell(ctx, std::vector<Ideal>(fan.num_rays(), ring_of_integers()),
                                         Bs, copts);
        rep.cell_counts.push_back(cell.coprime);
        rep.nodes += cell.nodes;
        rep.leaves += cell.leaves;
        for (std::size_t i = 0; i < nb; ++i) sum_direct[i] += cell.coprime[i];

        if (opts.moebius) {
            CellOptions mopts;
            mopts.shards = opts.shards;
            mopts.want_coprime = false;
            mopts.node_budget = opts.node_budget;
            stream_squarefree_tuples(
                K, table, Bs.back(),
                [&](const std::vector<Ideal>& d, int mu, const Int& norm) {
                    (void)norm;
                    CellCounts sub = enumerate_cell(ctx, d, Bs, mopts);
                    rep.nodes += sub.nodes;
                    rep.leaves += sub.leaves;
                    for (std::size_t i = 0; i < nb; ++i)
                        sum_moebius[i] += Int(mu) * sub.lattice[i];
                });
        }
    }

    Int omega_pow = pow_int(Int(K.unit_count), (unsigned long)pic.rank);
    rep.totals_direct.resize(nb);
    for (std::size_t i = 0; i < nb; ++i) {
        if (!divides(omega_pow, sum_direct[i]))
            throw InternalError("cell total not divisible by the unit orbit size");
        rep.totals_direct[i] = sum_direct[i] / omega_pow;
    }
    if (opts.moebius) {
        rep.totals_moebius.resize(nb);
        for (std::size_t i = 0; i < nb; ++i) {
            if (!divides(omega_pow, sum_moebius[i]))
                throw InternalError("sieved total not divisible by the unit orbit size");
            rep.totals_moebius[i] = sum_moebius[i] / omega_pow;
        }
    }
    if (opts.timings) {
        auto t1 = std::chrono::steady_clock::now();
        rep.elapsed_seconds = std::chrono::duration<double>(t1 - t0).count();
    }
    return rep;
}

inline CountReport count_points_moebius(const Fan& fan, const QuadField& K,
                                        const std::vector<Int>& Bs,
                                        CountOptions opts = {}) {
    opts.moebius = true;
    return count_points(fan, K, Bs, opts);
}

} // namespace toricount
