#include "fixtures.hpp"
#include "g2patch/space.hpp"

#include <doctest.h>

using namespace g2patch;

TEST_CASE("patch closed forms") {
    // interior patch: (n-6)^2 with n = d+1 + k(d-2)
    CHECK(patch_space_dim(0, 0, 5, 3) == 81);
    // two boundary sides at one corner: (n-3)^2
    CHECK(patch_space_dim(2, 1, 5, 3) == 144);
    // three boundary sides: n(n-3)
    CHECK(patch_space_dim(3, 2, 5, 3) == 180);
    CHECK(patch_space_dim_bc(5, 3) == 81);
}

TEST_CASE("split matches the full nullity") {
    for (const char* name : {"threepatch_fig9", "fivepatch_fig9"})
        for (int d : {5, 6})
            for (auto bc : {BoundaryCondition::none, BoundaryCondition::order2}) {
                auto dom = fixture(name);
                SplineSpace sp(d, 3);
                AnalysisOptions ao;
                ao.bc = bc;
                auto an = analyze_space(dom, sp, ao);
                CAPTURE(name);
                CAPTURE(d);
                CHECK(an.total == nullity_exact<Fp1>(dom, sp, bc));
                CHECK(an.total == an.patch_dim + an.edge_dim + an.vertex_dim);
                if (an.closed_available) CHECK(an.closed_total == an.total);
            }
}

TEST_CASE("three-patch counts at level 2") {
    auto dom = fixture("threepatch_fig9");
    auto an = analyze_space(dom, SplineSpace(5, 3));
    CHECK(an.total == 493);
    CHECK(an.patch_dim == 432);
    CHECK(an.edge_dim == 15);
    CHECK(an.vertex_dim == 46);
}

TEST_CASE("small k merges edge and vertex parts") {
    auto dom = fixture("threepatch_fig9");
    SplineSpace sp(5, 1);
    auto an = analyze_space(dom, sp);
    CHECK(an.merged);
    CHECK(an.total == nullity_exact<Fp1>(dom, sp, BoundaryCondition::none));
}

TEST_CASE("basis spans the kernel") {
    auto dom = fixture("fivepatch_fig9");
    for (auto bc : {BoundaryCondition::none, BoundaryCondition::order2}) {
        SplineSpace sp(5, 3);
        auto B = build_basis(dom, 5, 2, {bc, 1});
        AnalysisOptions ao;
        ao.bc = bc;
        CHECK(B.size() == analyze_space(dom, sp, ao).total);
        CHECK(B.count(Tag::patch) + B.count(Tag::edge) + B.count(Tag::vertex) + B.count(Tag::merged) == B.size());
        CHECK(basis_residual(B, assemble_T(dom, sp, bc)) < 1e-12);
        // full column rank
        Eigen::MatrixXd D = Eigen::MatrixXd(B.B);
        CHECK(D.colPivHouseholderQr().rank() == B.size());
    }
}

TEST_CASE("member evaluation matches the coefficients") {
    auto dom = fixture("threepatch_fig9");
    SplineSpace sp(5, 3);
    auto B = build_basis(dom, 5, 2);
    const int f = B.size() / 2;
    Eigen::VectorXd c = B.B.col(f);
    for (int l = 0; l < 3; ++l) {
        auto a = evaluate_member(B, sp, f, l, 0.3, 0.8, 2);
        auto b = eval_field(sp, c.data() + static_cast<long>(l) * sp.n * sp.n, 0.3, 0.8, 2);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }
}
