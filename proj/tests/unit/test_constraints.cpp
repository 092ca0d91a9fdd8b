#include "fixtures.hpp"
#include "g2patch/constraints.hpp"
#include "g2patch/space.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

using namespace g2patch;

TEST_CASE("global ids") {
    auto g = global_id(2, 3, 4, 11);
    auto s = split_id(g, 11);
    CHECK(s.patch == 2);
    CHECK(s.i1 == 3);
    CHECK(s.i2 == 4);
}

TEST_CASE("two squares: C2 gluing is the C2 spline space on the union") {
    auto dom = fixture("twopatch_squares");
    for (int d : {5, 6})
        for (int k : {1, 3}) {
            SplineSpace sp(d, k);
            const long long n = sp.n;
            CHECK(nullity_exact<Fp1>(dom, sp, BoundaryCondition::none) == (2 * n - 3) * n);
        }
}

TEST_CASE("nullity agrees over two primes") {
    auto dom = fixture("threepatch_fig9");
    SplineSpace sp(5, 1);
    for (auto bc : {BoundaryCondition::none, BoundaryCondition::order2})
        CHECK(nullity_exact<Fp1>(dom, sp, bc) == nullity_exact<Fp2>(dom, sp, bc));
}

TEST_CASE("denser collocation does not change the nullity") {
    auto dom = fixture("fivepatch_fig9");
    SplineSpace sp(6, 1);
    CHECK(nullity_exact<Fp1>(dom, sp, BoundaryCondition::none) ==
          nullity_exact<Fp1>(dom, sp, BoundaryCondition::none, Sampling{2}));
}

TEST_CASE("edge rows cover orders 0 to 2") {
    auto dom = fixture("twopatch_squares");
    SplineSpace sp(5, 1);
    const auto& e = dom.interfaces[0];
    auto rows = edge_rows<Rational>(dom, e, sp);
    REQUIRE(!rows.rows.empty());
    CHECK(rows.ncols == 6 * sp.n);
    int seen[3] = {0, 0, 0};
    for (const auto& t : rows.tags) {
        REQUIRE(t.order >= 0);
        REQUIRE(t.order <= 2);
        ++seen[t.order];
    }
    for (int c : seen) CHECK(c > 0);
}

TEST_CASE("pinned mask and Matrix Market output") {
    auto dom = fixture("threepatch_fig9");
    SplineSpace sp(5, 3);
    auto pinned = pinned_mask(dom, sp, BoundaryCondition::order2);
    long long count = 0;
    for (bool p : pinned) count += p;
    // each patch has two boundary sides meeting at one corner: 3n + 3n - 9 per patch
    CHECK(count == 3 * (6LL * sp.n - 9));
    auto sys = assemble_T(dom, sp, BoundaryCondition::order2);
    CHECK(sys.ncols == 3 * sp.n * sp.n);
    std::string path = "unit_T.mtx";
    write_matrix_market(sys, path);
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    CHECK(header.rfind("%%MatrixMarket matrix coordinate real general", 0) == 0);
    std::remove(path.c_str());
}
