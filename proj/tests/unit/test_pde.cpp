#include "fixtures.hpp"
#include "g2patch/pde.hpp"

#include <doctest.h>

#include <cmath>

using namespace g2patch;

TEST_CASE("Gauss-Legendre exactness") {
    for (int q : {3, 8, 12}) {
        auto g = gauss_legendre(q);
        double wsum = 0;
        for (double w : g.w) wsum += w;
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
        const int p = 2 * q - 1;
        double s = 0;
        for (int i = 0; i < q; ++i) s += g.w[i] * std::pow(g.x[i], p);
        CHECK(s == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
    }
}

TEST_CASE("push-forward of derivatives") {
    auto dom = fixture("fivepatch_fig9");
    Poly2 p = Poly2::monomial(3, 1) + Poly2::monomial(0, 2, Rational(-2)) + Poly2::monomial(1, 2, Rational(1, 3));
    PolyField u(p);
    const int l = 2;
    const double x = 0.4, y = 0.7, h = 1e-4;
    auto val = [&](double a, double b) {
        auto g = patch_map(dom, l, a, b);
        return u.eval(g.x[0], g.x[1], 0)[0];
    };
    // parametric partials by central differences
    Jet3 q{};
    q[0] = val(x, y);
    q[1] = (val(x + h, y) - val(x - h, y)) / (2 * h);
    q[2] = (val(x, y + h) - val(x, y - h)) / (2 * h);
    q[3] = (val(x + h, y) - 2 * q[0] + val(x - h, y)) / (h * h);
    q[4] = (val(x + h, y + h) - val(x + h, y - h) - val(x - h, y + h) + val(x - h, y - h)) / (4 * h * h);
    q[5] = (val(x, y + h) - 2 * q[0] + val(x, y - h)) / (h * h);
    auto g = patch_map(dom, l, x, y);
    auto A = pushforward_matrix(g);
    auto exact = u.eval(g.x[0], g.x[1], 2);
    Eigen::Matrix<double, 10, 1> qv = Eigen::Matrix<double, 10, 1>::Zero();
    for (int i = 0; i < 6; ++i) qv[i] = q[i];
    Eigen::Matrix<double, 10, 1> phys = A * qv;
    for (int i = 0; i < 6; ++i) CHECK(phys[i] == doctest::Approx(exact[i]).epsilon(1e-5));
}

TEST_CASE("manufactured solution vanishes to second order on the boundary") {
    for (const char* name : {"threepatch_fig9", "fivepatch_fig9"}) {
        auto dom = fixture(name);
        auto m = manufactured_solution(dom, Rational(1));
        Poly2 up = m.u_poly();
        // exact check at rational boundary points
        for (const auto& s : dom.boundary) {
            const auto &a = dom.vq[s.a], &b = dom.vq[s.b];
            Rational x = (3 * a.x + 7 * b.x) / 10, y = (3 * a.y + 7 * b.y) / 10;
            for (const Poly2& q : {up, up.dx(), up.dy(), up.dx().dx(), up.dx().dy(), up.dy().dy()})
                CHECK(q.eval(x, y) == 0);
            CHECK(up.dx().dx().dx().eval(x, y) + up.dy().dy().dy().eval(x, y) != 0);
        }
        // product-form jets against the expanded polynomial
        ManufacturedField u(m);
        Poly2 fp = m.f_poly();
        for (int l = 0; l < dom.num_patches(); ++l) {
            auto g = patch_map(dom, l, 0.4, 0.45);
            const double x = g.x[0], y = g.x[1];
            CHECK(u.eval(x, y, 0)[0] == doctest::Approx(up.eval(x, y)).epsilon(1e-9));
            CHECK(u.eval(x, y, 1)[1] == doctest::Approx(up.dx().eval(x, y)).epsilon(1e-9));
            CHECK(u.laplacian3(x, y)[0] == doctest::Approx(fp.eval(x, y)).epsilon(1e-7));
        }
    }
}

TEST_CASE("L2 projection reproduces cubic polynomials") {
    auto dom = fixture("fivepatch_fig9");
    Poly2 p = Poly2::monomial(2, 1) + Poly2::monomial(0, 3, Rational(1, 2)) - Poly2::monomial(1, 0);
    PolyField u(p);
    auto r = solve_l2(dom, 5, 2, u);
    CHECK(r.err[0] < 1e-11);
    CHECK(r.err[2] < 1e-8);
    CHECK(r.galerkin_residual < 1e-10);
    CHECK(r.total == r.patch + r.edge + r.vertex);
}

TEST_CASE("triharmonic errors decrease") {
    auto dom = fixture("threepatch_fig9");
    auto m = manufactured_solution(dom, Rational(1));
    ManufacturedField u(m);
    ManufacturedRhs f(m);
    PdeOptions opt;
    opt.condition = false;
    auto a = solve_triharmonic(dom, 5, 1, u, f, opt);
    auto b = solve_triharmonic(dom, 5, 2, u, f, opt);
    for (int i = 0; i < 4; ++i) CHECK(b.err[i] < a.err[i]);
}

TEST_CASE("CSV rows") {
    RunReport r;
    r.level = 2;
    r.d = 6;
    r.total = 10;
    r.patch = 4;
    r.edge = 3;
    r.vertex = 3;
    r.err = {0.5, 0.25, 0.125, 1};
    r.cond = 12;
    std::vector<RunReport> rows{r, r};
    rows[1].level = 3;
    rows[1].err[0] = 0.125;
    fill_rates(rows);
    CHECK(std::isnan(rows[0].rate0));
    CHECK(rows[1].rate0 == doctest::Approx(2.0));
    CHECK(csv_row(rows[0]) == "2,6,10,4,3,3,0.5,0.25,0.125,1,nan,12,0");
}
