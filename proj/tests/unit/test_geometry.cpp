#include "fixtures.hpp"

#include <doctest.h>

using namespace g2patch;

TEST_CASE("three-patch fixture topology") {
    auto dom = fixture("threepatch_fig9");
    CHECK(dom.num_patches() == 3);
    CHECK(dom.interfaces.size() == 3);
    CHECK(dom.boundary.size() == 6);
    CHECK(dom.valency[0] == 3);
    CHECK_FALSE(dom.on_boundary[0]);
    REQUIRE(dom.fan_of[0] >= 0);
    const auto& f = dom.fans[dom.fan_of[0]];
    CHECK(f.valency == 3);
    CHECK(f.type == 0);
    for (int l = 0; l < 3; ++l) {
        auto s = patch_sides(dom, l);
        CHECK(s.r_gamma == 2);
        CHECK(s.r_v == 1);
    }
}

TEST_CASE("JSON round trip keeps exact coordinates") {
    auto dom = fixture("fivepatch_fig9");
    auto again = load_domain(domain_to_json(dom));
    REQUIRE(again.vq.size() == dom.vq.size());
    for (std::size_t i = 0; i < dom.vq.size(); ++i) {
        CHECK(again.vq[i].x == dom.vq[i].x);
        CHECK(again.vq[i].y == dom.vq[i].y);
    }
    CHECK(again.patches == dom.patches);
}

TEST_CASE("invalid input is rejected") {
    CHECK_THROWS(load_domain(R"({"vertices": [[0,0],[1,0],[1,1]], "patches": [[0,1,2,3]]})"));
    // clockwise patch
    CHECK_THROWS(load_domain(R"({"vertices": [[0,0],[0,1],[1,1],[1,0]], "patches": [[0,1,2,3]]})"));
    CHECK_THROWS(load_domain("not json"));
}

TEST_CASE("gluing data of two aligned squares") {
    auto dom = fixture("twopatch_squares");
    REQUIRE(dom.interfaces.size() == 1);
    const auto& e = dom.interfaces[0];
    auto abg = alpha_beta_gamma(dom, e);
    // transversal derivatives are parallel: alpha vanishes identically
    for (int i = 0; i < 3; ++i) CHECK(abg.alpha[i] == 0);
    CHECK(abg.gamma[0] != 0);
    CHECK(abg.gamma[1] == 0);
    CHECK(abg.gamma[2] == 0);
    CHECK(edge_mu(dom, e, 3) == 3 + 2);
}

TEST_CASE("patch map of a bilinear patch") {
    auto dom = fixture("threepatch_fig9");
    auto g = patch_map(dom, 1, 0.3, 0.6);
    const double h = 1e-6;
    auto gx = patch_map(dom, 1, 0.3 + h, 0.6), gy = patch_map(dom, 1, 0.3, 0.6 + h);
    for (int r = 0; r < 2; ++r) {
        CHECK(g.J(r, 0) == doctest::Approx((gx.x[r] - g.x[r]) / h).epsilon(1e-5));
        CHECK(g.J(r, 1) == doctest::Approx((gy.x[r] - g.x[r]) / h).epsilon(1e-5));
        CHECK(g.Gxy[r] == doctest::Approx((gy.J(r, 0) - g.J(r, 0)) / h).epsilon(1e-5));
    }
    CHECK(g.J.determinant() > 0);
}
