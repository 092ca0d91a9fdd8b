#pragma once

#include "g2patch/field.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace g2patch {

// Knots 0 and 1 with multiplicity d+1, inner knots i/(k+1) with multiplicity d-2.
// k < 7-d is only accepted with allow_small_k (the merged edge+vertex regime).
std::vector<Rational> make_knot_vector(int d, int k, bool allow_small_k = false);

struct SplineSpace {
    int d = 5;
    int k = 0;
    int n = 0; // univariate functions per direction
    std::vector<Rational> knots_q;
    std::vector<double> knots;

    SplineSpace() = default;
    SplineSpace(int degree, int inner_knots, bool allow_small_k = true);

    int span_of(double t) const; // span s in [0, k]
    int knot_index(int s) const { return d + s * (d - 2); }
    int first_active(int s) const { return s * (d - 2); }
    int tensor_size() const { return n * n; }
    bool standard() const { return k >= 7 - d; }
};

struct BasisEval {
    int first_active = 0;
    Eigen::MatrixXd values; // (max_deriv+1) x (d+1)
};

// NURBS-book style derivatives of the d+1 nonzero B-splines on the span with
// knot index i (t_i <= x < t_{i+1}). Field generic: no comparisons on x.
template <class T>
std::vector<std::vector<T>> bspline_ders(const std::vector<T>& t, int d, int i, const T& x, int nd) {
    std::vector<std::vector<T>> ndu(d + 1, std::vector<T>(d + 1, T(0)));
    std::vector<T> left(d + 1, T(0)), right(d + 1, T(0));
    ndu[0][0] = T(1);
    for (int j = 1; j <= d; ++j) {
        left[j] = x - t[i + 1 - j];
        right[j] = t[i + j] - x;
        T saved(0);
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            T temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }
    std::vector<std::vector<T>> D(nd + 1, std::vector<T>(d + 1, T(0)));
    for (int j = 0; j <= d; ++j) D[0][j] = ndu[j][d];
    std::vector<std::vector<T>> a(2, std::vector<T>(d + 1, T(0)));
    for (int r = 0; r <= d; ++r) {
        int s1 = 0, s2 = 1;
        a[0][0] = T(1);
        for (int k = 1; k <= nd; ++k) {
            T dd(0);
            int rk = r - k, pk = d - k;
            if (r >= k) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                dd = a[s2][0] * ndu[rk][pk];
            }
            int j1 = rk >= -1 ? 1 : -rk;
            int j2 = (r - 1 <= pk) ? k - 1 : d - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                dd += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                dd += a[s2][k] * ndu[r][pk];
            }
            D[k][r] = dd;
            std::swap(s1, s2);
        }
    }
    long long fac = d;
    for (int k = 1; k <= nd; ++k) {
        for (int j = 0; j <= d; ++j) D[k][j] *= T(static_cast<std::int64_t>(fac));
        fac *= (d - k);
    }
    return D;
}

BasisEval eval_univariate(const SplineSpace& sp, double t, int max_deriv);

struct TensorEval {
    int first1 = 0, first2 = 0;
    // partial[a][b] is (d+1)x(d+1): entry (p,q) = N^{(a)}_{first1+p}(x) N^{(b)}_{first2+q}(y)
    std::array<std::array<Eigen::MatrixXd, 4>, 4> partial;
};

TensorEval eval_tensor(const SplineSpace& sp, double x, double y, int max_deriv);

// Value and partials up to max_deriv of a tensor spline with coefficients c (n*n, index i1*n+i2).
// Output ordered (a,b) with a+b = m, m = 0..max_deriv, a descending.
std::vector<double> eval_field(const SplineSpace& sp, const double* c, double x, double y, int max_deriv);

// Knot insertion from sp to the space with 2(k+1)-1 inner knots.
Eigen::MatrixXd refinement_matrix(const SplineSpace& coarse, const SplineSpace& fine);

} // namespace g2patch
