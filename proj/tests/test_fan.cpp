#include <catch2/catch_amalgamated.hpp>

#include "toricount/fan.hpp"
#include "toricount/fan_json.hpp"
#include "toricount/library.hpp"

using namespace toricount;

namespace {

Fan make_fan(std::string name, int dim, std::vector<std::vector<Int>> rays,
             std::vector<std::vector<int>> cones) {
    Fan f;
    f.name = std::move(name);
    f.dim = dim;
    f.rays = std::move(rays);
    f.max_cones = std::move(cones);
    return f;
}

Fan hirzebruch(int a) {
    return make_fan("H" + std::to_string(a), 2,
                    {{1, 0}, {0, 1}, {-1, a}, {0, -1}},
                    {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

} // namespace

TEST_CASE("library fans all validate") {
    REQUIRE(fan_library().size() == 7);
    for (const auto& e : fan_library()) {
        auto rep = validate_fan(e.fan);
        INFO(e.fan.name << ": " << rep.reason_summary());
        CHECK(rep.simplicial);
        CHECK(rep.smooth);
        CHECK(rep.complete);
        CHECK(e.rank == e.fan.num_rays() - (std::size_t)e.fan.dim);
        CHECK(e.globally_generated);
        CHECK(e.min_exponent == 0); // attained on every cone's own rays
    }
}

TEST_CASE("fan lookup by name") {
    CHECK(fan_by_name("P1xP1").num_rays() == 4);
    CHECK_THROWS_AS(fan_by_name("P9"), ConfigError);
}

TEST_CASE("structural screening rejects malformed input") {
    CHECK_THROWS_AS(validate_fan(make_fan("x", 2, {{2, 0}, {0, 1}}, {{0, 1}})),
                    HypothesisError); // non-primitive ray
    CHECK_THROWS_AS(validate_fan(make_fan("x", 2, {{1, 0}, {1, 0}}, {{0, 1}})),
                    HypothesisError); // duplicate ray
    CHECK_THROWS_AS(validate_fan(make_fan("x", 2, {{1, 0}, {0, 1}}, {{0, 2}})),
                    HypothesisError); // bad index
    CHECK_THROWS_AS(validate_fan(make_fan("x", 2, {{1, 0}, {0, 1}}, {{0, 0}})),
                    HypothesisError); // repeated index
    CHECK_THROWS_AS(validate_fan(make_fan("x", 2, {{1, 0}, {0, 1}}, {{0, 1}, {0}})),
                    HypothesisError); // non-maximal cone listed
}

TEST_CASE("smoothness failure is reported with the determinant") {
    Fan f = make_fan("P112", 2, {{1, 0}, {0, 1}, {-1, -2}},
                     {{0, 1}, {1, 2}, {2, 0}});
    auto rep = validate_fan(f);
    CHECK(rep.simplicial);
    CHECK_FALSE(rep.smooth);
    CHECK(rep.complete);
    REQUIRE_FALSE(rep.reasons.empty());
    CHECK(rep.reasons[0].find("|det| = 2") != std::string::npos);
}

TEST_CASE("incomplete fan fails the wall condition") {
    Fan f = make_fan("half", 2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}});
    auto rep = validate_fan(f);
    CHECK(rep.smooth);
    CHECK_FALSE(rep.complete);
    bool mentions_wall = false;
    for (const auto& r : rep.reasons)
        if (r.find("wall") != std::string::npos) mentions_wall = true;
    CHECK(mentions_wall);
}

TEST_CASE("validation verdicts are deterministic") {
    Fan f = make_fan("half", 2, {{1, 0}, {0, 1}, {-1, -1}}, {{0, 1}, {1, 2}});
    auto a = validate_fan(f, 777), b = validate_fan(f, 777);
    CHECK(a.reasons == b.reasons);
    CHECK(a.complete == b.complete);
}

TEST_CASE("picard basis of P2") {
    PicardData pic = picard_basis(fan_by_name("P2"));
    REQUIRE(pic.rank == 1);
    // class_matrix * section = identity
    Int prod = 0;
    for (std::size_t j = 0; j < pic.num_rays; ++j)
        prod += pic.class_matrix[0][j] * pic.section[j][0];
    CHECK(prod == 1);
    CHECK(pic.ray_classes[0] == pic.ray_classes[1]);
    CHECK(pic.ray_classes[1] == pic.ray_classes[2]);
    CHECK(abs(pic.anticanonical_class[0]) == 3);
    CHECK(divisor_class(pic, {1, 1, 1}) == pic.anticanonical_class);
}

TEST_CASE("picard basis of P1xP1 is rank two with paired rays") {
    PicardData pic = picard_basis(fan_by_name("P1xP1"));
    REQUIRE(pic.rank == 2);
    CHECK(pic.ray_classes[0] == pic.ray_classes[2]); // opposite rays are linearly equivalent
    CHECK(pic.ray_classes[1] == pic.ray_classes[3]);
    // the two factor classes are a basis: |det| = 1
    const auto& a = pic.ray_classes[0];
    const auto& b = pic.ray_classes[1];
    CHECK(abs(a[0] * b[1] - a[1] * b[0]) == 1);
}

TEST_CASE("anticanonical exponents vanish on the cone and sum against rays") {
    for (const auto& e : fan_library()) {
        const Fan& fan = e.fan;
        for (std::size_t k = 0; k < fan.num_cones(); ++k) {
            auto exps = anticanonical_exponents(fan, k);
            for (int idx : fan.max_cones[k]) CHECK(exps[idx] == 0);
            for (const auto& a : exps) CHECK(a >= 0);
        }
    }
    // P2, cone {0,1}: the remaining exponent is the anticanonical degree 3
    auto exps = anticanonical_exponents(fan_by_name("P2"), 0);
    CHECK(exps == std::vector<Int>{0, 0, 3});
    // P1xP1: complement rays both carry exponent 2
    auto e2 = anticanonical_exponents(fan_by_name("P1xP1"), 0);
    CHECK(e2 == std::vector<Int>{0, 0, 2, 2});
}

TEST_CASE("twisted divisor reproduces the character pairing") {
    const Fan& fan = fan_by_name("F1");
    std::vector<Int> coeffs{2, -1, 0, 5};
    for (std::size_t k = 0; k < fan.num_cones(); ++k) {
        TwistedDivisor td = twisted_divisor(fan, k, coeffs);
        for (int idx : fan.max_cones[k]) CHECK(td.coeffs[idx] == 0);
        for (std::size_t j = 0; j < fan.num_rays(); ++j) {
            Int pairing = 0;
            for (int i = 0; i < fan.dim; ++i) pairing += td.character[i] * fan.rays[j][i];
            CHECK(td.coeffs[j] == coeffs[j] - pairing);
        }
    }
}

TEST_CASE("global generation thresholds across the Hirzebruch family") {
    auto v1 = check_globally_generated(hirzebruch(1));
    CHECK(v1.generated);
    auto v2 = check_globally_generated(hirzebruch(2));
    CHECK(v2.generated);
    CHECK(v2.min_exponent == 0);
    auto v3 = check_globally_generated(hirzebruch(3));
    CHECK_FALSE(v3.generated);
    CHECK(v3.min_exponent == -1);
}

TEST_CASE("f invariant values") {
    CHECK(f_invariant(fan_by_name("P1")) == 2);
    CHECK(f_invariant(fan_by_name("P2")) == 3);
    CHECK(f_invariant(fan_by_name("P3")) == 4);
    CHECK(f_invariant(fan_by_name("P1xP1")) == 2);
    CHECK(f_invariant(fan_by_name("P1xP1xP1")) == 2);
    CHECK(f_invariant(fan_by_name("F1")) == 2);
    CHECK(f_invariant(fan_by_name("F2")) == 2);
}

TEST_CASE("fan json round trip") {
    for (const auto& e : fan_library()) {
        Fan back = fan_from_json(fan_to_json(e.fan));
        CHECK(back.name == e.fan.name);
        CHECK(back.dim == e.fan.dim);
        CHECK(back.rays == e.fan.rays);
        CHECK(back.max_cones == e.fan.max_cones);
    }
}

TEST_CASE("fan json rejects malformed documents") {
    using nlohmann::json;
    CHECK_THROWS_AS(fan_from_json(json::parse(R"({"dim":1,"rays":[[1],[-1]],"max_cones":[[0],[1]],"extra":3})")),
                    ConfigError);
    CHECK_THROWS_AS(fan_from_json(json::parse(R"({"rays":[[1],[-1]],"max_cones":[[0],[1]]})")),
                    ConfigError);
    CHECK_THROWS_AS(fan_from_json(json::parse(R"({"dim":1,"rays":[[1.5],[-1]],"max_cones":[[0],[1]]})")),
                    ConfigError);
    CHECK_THROWS_AS(fan_from_json(json::parse(R"([1,2,3])")), ConfigError);
}
