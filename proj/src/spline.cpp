#include "g2patch/spline.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace g2patch {

std::vector<Rational> make_knot_vector(int d, int k, bool allow_small_k) {
    if (d != 5 && d != 6) throw std::invalid_argument("degree must be 5 or 6, got " + std::to_string(d));
    if (k < 0) throw std::invalid_argument("negative inner knot count");
    if (!allow_small_k && k < 7 - d)
        throw std::invalid_argument("inner knot count k=" + std::to_string(k) + " below 7-d");
    std::vector<Rational> t(d + 1, Rational(0));
    for (int i = 1; i <= k; ++i)
        for (int m = 0; m < d - 2; ++m) t.emplace_back(i, k + 1);
    for (int m = 0; m <= d; ++m) t.emplace_back(1);
    return t;
}

SplineSpace::SplineSpace(int degree, int inner_knots, bool allow_small_k)
    : d(degree), k(inner_knots), knots_q(make_knot_vector(degree, inner_knots, allow_small_k)) {
    n = d + k * (d - 2) + 1;
    knots.reserve(knots_q.size());
    for (const auto& q : knots_q) knots.push_back(to_double(q));
}

int SplineSpace::span_of(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("parameter outside [0,1]");
    int s = static_cast<int>(std::floor(t * (k + 1)));
    if (s > k) s = k;
    // guard the floor against rounding right below a knot
    while (s < k && knots[knot_index(s + 1)] <= t) ++s;
    while (s > 0 && knots[knot_index(s)] > t) --s;
    return s;
}

BasisEval eval_univariate(const SplineSpace& sp, double t, int max_deriv) {
    if (max_deriv < 0 || max_deriv > 3) throw std::invalid_argument("max_deriv must be in 0..3");
    int s = sp.span_of(t);
    auto D = bspline_ders<double>(sp.knots, sp.d, sp.knot_index(s), t, max_deriv);
    BasisEval out;
    out.first_active = sp.first_active(s);
    out.values.resize(max_deriv + 1, sp.d + 1);
    for (int r = 0; r <= max_deriv; ++r)
        for (int j = 0; j <= sp.d; ++j) out.values(r, j) = D[r][j];
    return out;
}

TensorEval eval_tensor(const SplineSpace& sp, double x, double y, int max_deriv) {
    auto bx = eval_univariate(sp, x, max_deriv);
    auto by = eval_univariate(sp, y, max_deriv);
    TensorEval te;
    te.first1 = bx.first_active;
    te.first2 = by.first_active;
    for (int a = 0; a <= max_deriv; ++a)
        for (int b = 0; a + b <= max_deriv; ++b)
            te.partial[a][b] = bx.values.row(a).transpose() * by.values.row(b);
    return te;
}

std::vector<double> eval_field(const SplineSpace& sp, const double* c, double x, double y, int max_deriv) {
    auto te = eval_tensor(sp, x, y, max_deriv);
    std::vector<double> out;
    for (int m = 0; m <= max_deriv; ++m)
        for (int a = m; a >= 0; --a) {
            const auto& P = te.partial[a][m - a];
            double v = 0;
            for (int p = 0; p <= sp.d; ++p)
                for (int q = 0; q <= sp.d; ++q) v += P(p, q) * c[(te.first1 + p) * sp.n + te.first2 + q];
            out.push_back(v);
        }
    return out;
}

Eigen::MatrixXd refinement_matrix(const SplineSpace& coarse, const SplineSpace& fine) {
    if (coarse.d != fine.d) throw std::invalid_argument("refinement needs equal degrees");
    const int d = coarse.d;
    std::vector<Rational> t = coarse.knots_q;
    // knots of fine missing from coarse, by multiset difference
    std::vector<Rational> extra;
    {
        std::size_t i = 0;
        for (const auto& u : fine.knots_q) {
            if (i < t.size() && t[i] == u) ++i;
            else extra.push_back(u);
        }
        if (i != t.size()) throw std::invalid_argument("fine knot vector does not contain the coarse one");
    }
    std::vector<std::vector<Rational>> P(coarse.n, std::vector<Rational>(coarse.n, Rational(0)));
    for (int i = 0; i < coarse.n; ++i) P[i][i] = 1;
    for (const auto& u : extra) {
        int idx = d;
        while (idx + 1 < static_cast<int>(t.size()) - d - 1 && t[idx + 1] <= u) ++idx;
        std::vector<std::vector<Rational>> Q(P.size() + 1);
        for (int i = 0; i <= static_cast<int>(P.size()); ++i) {
            if (i <= idx - d) Q[i] = P[i];
            else if (i > idx) Q[i] = P[i - 1];
            else {
                Rational al = (u - t[i]) / (t[i + d] - t[i]);
                Q[i].resize(coarse.n);
                for (int c = 0; c < coarse.n; ++c) Q[i][c] = al * P[i][c] + (1 - al) * P[i - 1][c];
            }
        }
        t.insert(t.begin() + idx + 1, u);
        P = std::move(Q);
    }
    Eigen::MatrixXd R(fine.n, coarse.n);
    for (int i = 0; i < fine.n; ++i)
        for (int c = 0; c < coarse.n; ++c) R(i, c) = to_double(P[i][c]);
    return R;
}

} // namespace g2patch
