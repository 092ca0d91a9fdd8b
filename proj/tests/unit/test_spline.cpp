#include "g2patch/spline.hpp"

#include <doctest.h>

#include <cmath>

using namespace g2patch;

TEST_CASE("knot vector layout") {
    auto t = make_knot_vector(5, 3);
    // 2(d+1) end knots plus k inner knots of multiplicity d-2
    CHECK(t.size() == 12 + 3 * 3);
    CHECK(t.front() == 0);
    CHECK(t.back() == 1);
    CHECK(t[6] == Rational(1, 4));
    CHECK(t[8] == Rational(1, 4));
    CHECK(t[9] == Rational(1, 2));

    SplineSpace sp(6, 1);
    CHECK(sp.n == 7 + 4);
    CHECK(sp.standard());
    CHECK_FALSE(SplineSpace(5, 1).standard());
    CHECK_THROWS(make_knot_vector(5, 1));
}

TEST_CASE("partition of unity and derivative sums") {
    for (int d : {5, 6}) {
        SplineSpace sp(d, 3);
        for (double x : {0.0, 0.13, 0.25, 0.49, 0.5, 0.77, 1.0}) {
            auto e = eval_univariate(sp, x, 3);
            CHECK(e.values.row(0).sum() == doctest::Approx(1.0).epsilon(1e-14));
            for (int r = 1; r <= 3; ++r) CHECK(std::abs(e.values.row(r).sum()) < 1e-9);
        }
    }
}

TEST_CASE("exact rational derivatives") {
    auto t = make_knot_vector(5, 1, true);
    auto D = bspline_ders<Rational>(t, 5, 5, Rational(1, 3), 3);
    Rational s0(0), s1(0);
    for (const auto& v : D[0]) s0 += v;
    for (const auto& v : D[1]) s1 += v;
    CHECK(s0 == 1);
    CHECK(s1 == 0);
}

TEST_CASE("derivatives against finite differences") {
    SplineSpace sp(5, 3);
    const double x = 0.37, h = 1e-6;
    auto e = eval_univariate(sp, x, 2);
    auto ep = eval_univariate(sp, x + h, 0), em = eval_univariate(sp, x - h, 0);
    REQUIRE(ep.first_active == e.first_active);
    for (int j = 0; j <= sp.d; ++j) {
        CHECK(e.values(1, j) == doctest::Approx((ep.values(0, j) - em.values(0, j)) / (2 * h)).epsilon(1e-6));
        double fd2 = (ep.values(0, j) - 2 * e.values(0, j) + em.values(0, j)) / (h * h);
        CHECK(e.values(2, j) == doctest::Approx(fd2).epsilon(1e-3));
    }
}

TEST_CASE("tensor evaluation and refinement") {
    SplineSpace coarse(5, 1), fine(5, 3);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(coarse.tensor_size());
    for (int i = 0; i < c.size(); ++i) c[i] = std::sin(0.7 * i) + 0.1 * i;
    Eigen::MatrixXd R = refinement_matrix(coarse, fine);
    REQUIRE(R.rows() == fine.n);
    REQUIRE(R.cols() == coarse.n);
    Eigen::MatrixXd C = Eigen::Map<Eigen::MatrixXd>(c.data(), coarse.n, coarse.n);
    // c is row-major in (i1, i2); as a column-major map it is C^T
    Eigen::MatrixXd F = R * C * R.transpose();
    for (auto [x, y] : {std::pair{0.1, 0.9}, {0.5, 0.5}, {0.83, 0.27}}) {
        auto a = eval_field(coarse, c.data(), x, y, 3);
        auto b = eval_field(fine, F.data(), x, y, 3);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-10));
    }
}
