#include "fixtures.hpp"
#include "g2patch/vertex.hpp"

#include <doctest.h>

using namespace g2patch;

TEST_CASE("admissible classes and closed forms") {
    CHECK(fan_admissible(5, 1, false));
    CHECK_FALSE(fan_admissible(3, 1, false));
    CHECK(closed_form_vertex_dim(5, 1, false) == 14);
    CHECK(closed_form_vertex_dim(6, 1, false) == 16);
    CHECK_THROWS(closed_form_vertex_dim(3, 3, false));
}

TEST_CASE("random fans reproduce the closed forms") {
    std::mt19937_64 rng(7);
    for (FanSpec s : {FanSpec{3, 0, false}, FanSpec{5, 0, false}, FanSpec{5, 1, false}, FanSpec{4, 2, false},
                      FanSpec{6, 2, false}, FanSpec{4, 4, false}, FanSpec{3, 0, true}, FanSpec{4, 1, true}}) {
        if (!fan_admissible(s.nu, s.rho, s.boundary)) continue;
        for (int i = 0; i < 3; ++i) {
            auto f = random_fan(s, rng);
            CAPTURE(s.nu);
            CAPTURE(s.rho);
            CAPTURE(s.boundary);
            CHECK(fan_type(f) == s.rho);
            const int cf = closed_form_vertex_dim(s.nu, s.rho, s.boundary);
            CHECK(numeric_vertex_dim(f, 5, 3) == cf);
            CHECK(equation_vertex_dim(build_vertex_equations(f)) == cf);
        }
    }
}

TEST_CASE("fan sampling is reproducible") {
    std::mt19937_64 a(3), b(3);
    auto fa = random_fan({6, 2, false}, a), fb = random_fan({6, 2, false}, b);
    REQUIRE(fa.nu() == fb.nu());
    for (int j = 0; j < fa.nu(); ++j) {
        CHECK(fa.v[j].x == fb.v[j].x);
        CHECK(fa.v[j].y == fb.v[j].y);
    }
}

TEST_CASE("determinant closed forms") {
    std::mt19937_64 rng(11);
    for (int nu = 4; nu <= 7; ++nu) {
        auto f = random_fan({nu, 0, false}, rng);
        CHECK(det_A0(f) == det_A0_closed(f));
        for (int j = 1; j <= nu; ++j) CHECK(det_Dj(f, j) == det_Dj_closed(f, j));
    }
}

TEST_CASE("fixture vertices") {
    auto dom = fixture("fivepatch_fig9");
    for (const auto& vf : dom.fans) {
        auto f = fan_from_vertex(vf);
        if (!fan_admissible(vf.valency, vf.type, vf.boundary)) continue;
        CHECK(numeric_vertex_dim(f, 5, 3) == closed_form_vertex_dim(vf.valency, vf.type, vf.boundary));
    }
}
