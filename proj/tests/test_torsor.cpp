#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "toricount/library.hpp"
#include "toricount/projective.hpp"
#include "toricount/torsor.hpp"

using namespace toricount;

namespace {

Fan hirzebruch(long a) {
    Fan f;
    f.name = "H" + std::to_string(a);
    f.dim = 2;
    f.rays = {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-1), Int(a)}, {Int(0), Int(-1)}};
    f.max_cones = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    return f;
}

TwistContext trivial_ctx(const Fan& fan, const QuadField& K) {
    PicardData pic = picard_basis(fan);
    return make_twist_context(fan, K, pic, std::vector<int>(pic.rank, 0));
}

std::vector<Ideal> unit_tuple(std::size_t n) {
    return std::vector<Ideal>(n, ring_of_integers());
}

} // namespace

TEST_CASE("twist context for the trivial class tuple") {
    QuadField K = make_field(1);
    const Fan& P1 = fan_by_name("P1");
    TwistContext ctx = trivial_ctx(P1, K);
    CHECK(ctx.norm_twist == 1);
    for (const auto& tw : ctx.ray_twist) CHECK(tw == ring_of_integers());
    REQUIRE(ctx.cone_exps.size() == 2);
    CHECK(ctx.cone_exps[0] == std::vector<int>{-1, 2});
    CHECK(ctx.cone_exps[1] == std::vector<int>{2, -1});
    CHECK(ctx.max_exp == std::vector<int>{2, 2});
    CHECK(ctx.cone_complement[0] == std::vector<int>{1});
    CHECK(ctx.cone_complement[1] == std::vector<int>{0});
}

TEST_CASE("twist context rejects bad input") {
    QuadField K = make_field(1);
    const Fan& P1 = fan_by_name("P1");
    PicardData pic = picard_basis(P1);
    CHECK_THROWS_AS(make_twist_context(P1, K, pic, {}), ConfigError);       // wrong length
    CHECK_THROWS_AS(make_twist_context(P1, K, pic, {1}), ConfigError);      // h(Q(i)) = 1
    Fan H3 = hirzebruch(3);
    REQUIRE(validate_fan(H3).ok());
    PicardData ph = picard_basis(H3);
    // non-globally-generated anticanonical class: pruning would be unsound
    CHECK_THROWS_AS(make_twist_context(H3, K, ph, {0, 0}), HypothesisError);
}

TEST_CASE("height of explicit coordinate vectors") {
    QuadField K = make_field(1);
    TwistContext ctx = trivial_ctx(fan_by_name("P1"), K);
    FieldElem one = make_elem(1, 0);
    FieldElem opi = make_elem(3, 1); // 1 + i
    CHECK(height_sup(ctx, {one, one}) == 1);
    CHECK(height_sup(ctx, {one, opi}) == 4);  // N(1+i)^2
    CHECK(height_sup(ctx, {opi, one}) == 4);
    CHECK(height_sup(ctx, {opi, opi}) == 4);  // both cones agree
    CHECK_THROWS_AS(height_sup(ctx, {one, make_elem(0, 0)}), ConfigError);
    CHECK_THROWS_AS(height_sup(ctx, {one}), ConfigError);

    TwistContext c2 = trivial_ctx(fan_by_name("P2"), K);
    CHECK(height_sup(c2, {one, one, opi}) == 8); // max norm cubed
    CHECK(height_sup(c2, {opi, opi, opi}) == 8);
}

TEST_CASE("height is invariant under coordinatewise unit scaling") {
    std::mt19937_64 rng(7);
    for (long D : {1L, 3L, 5L}) {
        QuadField K = make_field(D);
        for (const char* name : {"P1", "P2", "P1xP1"}) {
            TwistContext ctx = trivial_ctx(fan_by_name(name), K);
            std::size_t N = ctx.fan->num_rays();
            for (int trial = 0; trial < 50; ++trial) {
                std::vector<FieldElem> coords, scaled;
                for (std::size_t r = 0; r < N; ++r) {
                    FieldElem x = oracles::random_element(rng, 9);
                    if (elem_is_zero(x)) x = make_elem(1, 0);
                    coords.push_back(x);
                    long e = (long)(rng() % K.units.size());
                    scaled.push_back(K.mul(x, K.units[e]));
                }
                CHECK(height_sup(ctx, coords) == height_sup(ctx, scaled));
            }
        }
    }
}

TEST_CASE("tiny cells by hand") {
    QuadField K = make_field(1);
    TwistContext ctx = trivial_ctx(fan_by_name("P1"), K);
    auto cell = enumerate_cell(ctx, unit_tuple(2), {Int(0), Int(1), Int(4)});
    // B = 0: heights of integral points are >= 1
    CHECK(cell.lattice[0] == 0);
    CHECK(cell.coprime[0] == 0);
    // B = 1: both coordinates units, 4 x 4 pairs
    CHECK(cell.lattice[1] == 16);
    CHECK(cell.coprime[1] == 16);
    // B = 4: norms <= 2, i.e. 8 elements per slot; coprime drops the 16
    // pairs where both coordinates generate the ramified prime above 2
    CHECK(cell.lattice[2] == 64);
    CHECK(cell.coprime[2] == 48);
    CHECK(cell.leaves >= 64);
}

TEST_CASE("cell argument validation") {
    QuadField K = make_field(1);
    TwistContext ctx = trivial_ctx(fan_by_name("P1"), K);
    CHECK_THROWS_AS(enumerate_cell(ctx, unit_tuple(2), {}), ConfigError);
    CHECK_THROWS_AS(enumerate_cell(ctx, unit_tuple(2), {Int(-1)}), ConfigError);
    CHECK_THROWS_AS(enumerate_cell(ctx, unit_tuple(2), {Int(4), Int(4)}), ConfigError);
    CHECK_THROWS_AS(enumerate_cell(ctx, unit_tuple(3), {Int(4)}), ConfigError);
    Ideal half{Int(1), Int(0), Int(1), Int(2)}; // (1/2), not integral
    CHECK_THROWS_AS(enumerate_cell(ctx, {half, ring_of_integers()}, {Int(4)}), ConfigError);
    CellOptions bad;
    bad.shards = 0;
    CHECK_THROWS_AS(enumerate_cell(ctx, unit_tuple(2), {Int(4)}, bad), ConfigError);
    CellOptions tiny;
    tiny.node_budget = 3;
    CHECK_THROWS_AS(enumerate_cell(ctx, unit_tuple(2), {Int(100)}, tiny), BudgetError);
}

TEST_CASE("visited points satisfy the one-cone domination bound") {
    // for every admissible x there is a cone whose complement product already
    // dominates: prod_rho N(x_rho) <= height * norm_twist
    struct Setup {
        const char* fan;
        long D;
        std::vector<int> tuple;
        long B;
    } setups[] = {
        {"P1", 1, {0}, 1000},
        {"P1xP1", 5, {1, 1}, 50},
        {"P2", 5, {1}, 40},
    };
    for (const auto& s : setups) {
        QuadField K = make_field(s.D);
        const Fan& fan = fan_by_name(s.fan);
        TwistContext ctx = make_twist_context(fan, K, picard_basis(fan), s.tuple);
        long seen = 0;
        std::function<void(const TorsorPoint&)> fn = [&](const TorsorPoint& pt) {
            ++seen;
            Rat prod = 1;
            for (const auto& x : pt.coords) prod *= K.abs_inf(x);
            REQUIRE(prod <= pt.height * ctx.norm_twist);
            REQUIRE(pt.height <= s.B);
            for (const auto& ic : pt.ideal_coords) REQUIRE(ideal_is_integral(ic));
        };
        CellOptions opts;
        opts.visitor = &fn;
        auto cell = enumerate_cell(ctx, unit_tuple(fan.num_rays()), {Int(s.B)}, opts);
        CHECK(Int(seen) == cell.lattice[0]);
    }
}

TEST_CASE("cell counts are unit-orbit multiples") {
    for (long D : {1L, 3L, 5L}) {
        QuadField K = make_field(D);
        for (const char* name : {"P1", "P1xP1"}) {
            const Fan& fan = fan_by_name(name);
            TwistContext ctx = trivial_ctx(fan, K);
            auto cell = enumerate_cell(ctx, unit_tuple(fan.num_rays()), {Int(10)});
            Int orbit = pow_int(Int(K.unit_count), (unsigned long)fan.num_rays());
            CHECK(divides(orbit, cell.lattice[0]));
            CHECK(divides(orbit, cell.coprime[0]));
        }
    }
}

TEST_CASE("pruned enumeration equals the exhaustive audit") {
    QuadField K = make_field(1);
    for (const char* name : {"P1", "P2", "P1xP1"}) {
        TwistContext ctx = trivial_ctx(fan_by_name(name), K);
        std::vector<Int> Bs{Int(5), Int(20)};
        auto fast = enumerate_cell(ctx, unit_tuple(ctx.fan->num_rays()), Bs);
        CellOptions audit;
        audit.prune = false;
        auto slow = enumerate_cell(ctx, unit_tuple(ctx.fan->num_rays()), Bs, audit);
        CHECK(fast.lattice == slow.lattice);
        CHECK(fast.coprime == slow.coprime);
        CHECK(fast.nodes <= slow.nodes);
    }
}

TEST_CASE("cell enumeration is deterministic and shard-independent") {
    QuadField K = make_field(5);
    TwistContext ctx = make_twist_context(fan_by_name("P1xP1"), K,
                                          picard_basis(fan_by_name("P1xP1")), {0, 1});
    std::vector<Int> Bs{Int(10), Int(50)};
    auto a = enumerate_cell(ctx, unit_tuple(4), Bs);
    auto b = enumerate_cell(ctx, unit_tuple(4), Bs);
    CHECK(a.lattice == b.lattice);
    CHECK(a.coprime == b.coprime);
    CHECK(a.nodes == b.nodes);
    CHECK(a.leaves == b.leaves);
    CellOptions sharded;
    sharded.shards = 3;
    auto c = enumerate_cell(ctx, unit_tuple(4), Bs, sharded);
    CHECK(c.lattice == a.lattice);
    CHECK(c.coprime == a.coprime);
    CHECK(c.leaves == a.leaves);
}

TEST_CASE("direct route equals the sieved route") {
    std::vector<Int> Bs{Int(10), Int(50), Int(100)};
    for (long D : {1L, 2L, 5L}) {
        QuadField K = make_field(D);
        for (const char* name : {"P1", "P2", "P1xP1"}) {
            CountReport rep = count_points_moebius(fan_by_name(name), K, Bs);
            INFO(name << " D=" << D);
            REQUIRE(rep.totals_moebius.size() == Bs.size());
            CHECK(rep.totals_direct == rep.totals_moebius);
        }
    }
}

TEST_CASE("torsor counts match the classical projective census") {
    for (long D : {1L, 5L}) {
        QuadField K = make_field(D);
        std::vector<Int> B1{Int(10), Int(100), Int(200)};
        CHECK(count_points(fan_by_name("P1"), K, B1).totals_direct ==
              projective_torus_counts(K, 1, B1));
        std::vector<Int> B2{Int(10), Int(50)};
        CHECK(count_points(fan_by_name("P2"), K, B2).totals_direct ==
              projective_torus_counts(K, 2, B2));
    }
}

TEST_CASE("report bookkeeping over a nontrivial class group") {
    QuadField K = make_field(5);
    std::vector<Int> Bs{Int(20), Int(60)};
    CountReport rep = count_points(fan_by_name("P1"), K, Bs);
    CHECK(rep.fan_name == "P1");
    CHECK(rep.D == 5);
    CHECK(rep.rank == 1);
    CHECK(rep.class_number == 2);
    CHECK(rep.unit_count == 2);
    REQUIRE(rep.tuples.size() == 2);
    CHECK(rep.tuples[0] == std::vector<int>{0});
    CHECK(rep.tuples[1] == std::vector<int>{1});
    REQUIRE(rep.cell_counts.size() == 2);
    for (std::size_t i = 0; i < Bs.size(); ++i) {
        Int sum = rep.cell_counts[0][i] + rep.cell_counts[1][i];
        CHECK(sum == rep.totals_direct[i] * 2); // omega^rank = 2
    }
    CHECK(rep.totals_moebius.empty());
    CHECK(rep.elapsed_seconds == 0.0);

    CountReport twod = count_points(fan_by_name("P1xP1"), K, {Int(20)});
    CHECK(twod.tuples.size() == 4); // h^rank
}

TEST_CASE("count options propagate") {
    QuadField K = make_field(1);
    CountOptions opts;
    opts.node_budget = 5;
    CHECK_THROWS_AS(count_points(fan_by_name("P1"), K, {Int(1000)}, opts), BudgetError);
    CountOptions timed;
    timed.timings = true;
    CountReport rep = count_points(fan_by_name("P1"), K, {Int(10)}, timed);
    CHECK(rep.timings);
    CHECK(rep.elapsed_seconds > 0.0);
    Fan bad = hirzebruch(3);
    bad.rays[0] = {Int(2), Int(0)}; // imprimitive: structural rejection
    CHECK_THROWS_AS(count_points(bad, K, {Int(10)}), HypothesisError);
}
