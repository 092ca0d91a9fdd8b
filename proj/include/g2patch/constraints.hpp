#pragma once

#include "g2patch/echelon.hpp"
#include "g2patch/geometry.hpp"
#include "g2patch/spline.hpp"

#include <Eigen/Sparse>

#include <cstdint>
#include <string>
#include <vector>

namespace g2patch {

using GlobalId = std::int64_t;

inline GlobalId global_id(int patch, int i1, int i2, int n) {
    return (static_cast<GlobalId>(patch) * n + i1) * n + i2;
}
struct GlobalIndex {
    int patch, i1, i2;
};
inline GlobalIndex split_id(GlobalId g, int n) {
    int i2 = static_cast<int>(g % n);
    GlobalId r = g / n;
    return {static_cast<int>(r / n), static_cast<int>(r % n), i2};
}

enum class BoundaryCondition { none, order2 };

// Column of an edge-local system: patch copy (0 = l, 1 = lp), layer from the interface, index along.
struct LocalColumn {
    int side = 0, layer = 0, s = 0;
    int patch = 0, i1 = 0, i2 = 0;
    GlobalId gid = 0;
    int vertex = -1; // endpoint owning the corner block, -1 for interface columns
};

struct EdgeLayout {
    int n = 0;
    std::vector<LocalColumn> cols; // 6n, index side*3n + layer*n + s
    int local(int side, int layer, int s) const { return (side * 3 + layer) * n + s; }
};
EdgeLayout edge_layout(const MultiPatchDomain& dom, const Interface& e, const SplineSpace& sp);

// Pinned coefficients: first three layers along every boundary side.
std::vector<bool> pinned_mask(const MultiPatchDomain& dom, const SplineSpace& sp, BoundaryCondition bc);

struct RowTag {
    int edge = -1;
    int order = 0; // 0, 1, 2 for G0/G1/G2, 3 for a boundary pin
    int span = 0, point = 0;
};

struct Sampling {
    int factor = 1; // multiplies the per-span collocation counts d+3 and d+5
};

template <class T> struct EdgeRows {
    int ncols = 0;
    std::vector<std::vector<T>> rows;
    std::vector<RowTag> tags;
};

namespace detail {

// Own-direction span of a view coordinate: along (positive or reversed) or fixed at 0 / 1.
struct AxisMap {
    bool along = false;
    int sign = 1;
    int fixed = 0;
};

inline AxisMap axis_map(const View& V, int r, int u0) {
    AxisMap m;
    if (V.M[r][1] != 0) {
        m.along = true;
        m.sign = V.M[r][1];
    } else {
        m.fixed = V.c[r] + V.M[r][0] * u0;
    }
    return m;
}

// View partials d^a/du0^a d^b/du1^b, a + b <= 2, of all active tensor B-splines at (u0, t)
// with t in span s; calls emit(layer, along_index, a, b, value).
template <class T, class Emit>
void view_partials(const SplineSpace& sp, const std::vector<T>& knots, const View& V, int u0, int s,
                   const T& t, bool left, Emit&& emit) {
    const int n = sp.n, d = sp.d, k = sp.k;
    std::array<std::vector<std::vector<T>>, 2> D;
    std::array<int, 2> first{};
    for (int r = 0; r < 2; ++r) {
        AxisMap m = axis_map(V, r, u0);
        int span;
        T x;
        if (m.along) {
            span = m.sign > 0 ? s : k - s;
            x = m.sign > 0 ? t : T(1) - t;
        } else {
            span = m.fixed == 1 ? k : 0;
            x = T(m.fixed);
        }
        D[r] = bspline_ders<T>(knots, d, sp.knot_index(span), x, 2);
        first[r] = sp.first_active(span);
    }
    const bool sw = V.swapped();
    for (int p = 0; p <= d; ++p)
        for (int q = 0; q <= d; ++q) {
            int i1 = first[0] + p, i2 = first[1] + q;
            int a1 = i1 - V.c[0] * (n - 1), a2 = i2 - V.c[1] * (n - 1);
            int j0 = V.M[0][0] * a1 + V.M[1][0] * a2;
            int j1 = V.M[0][1] * a1 + V.M[1][1] * a2;
            int layer = left ? n - 1 - j0 : j0;
            if (layer < 0 || layer > 2) continue;
            for (int a = 0; a <= 2; ++a)
                for (int b = 0; a + b <= 2; ++b) {
                    T v;
                    int sg;
                    if (!sw) {
                        v = D[0][a][p] * D[1][b][q];
                        sg = (a % 2 ? V.M[0][0] : 1) * (b % 2 ? V.M[1][1] : 1);
                    } else {
                        v = D[0][b][p] * D[1][a][q];
                        sg = (a % 2 ? V.M[1][0] : 1) * (b % 2 ? V.M[0][1] : 1);
                    }
                    if (is_zero(v)) continue;
                    emit(layer, j1, a, b, sg > 0 ? v : -v);
                }
        }
}

} // namespace detail

// Smoothness conditions of one interface over its 6n local columns (no pinning applied).
template <class T>
EdgeRows<T> edge_rows(const MultiPatchDomain& dom, const Interface& e, const SplineSpace& sp, Sampling smp = {}) {
    const int n = sp.n, d = sp.d, k = sp.k;
    EdgeRows<T> out;
    out.ncols = 6 * n;
    auto Pl = patch_corners<T>(dom, e.l), Pr = patch_corners<T>(dom, e.lp);
    std::vector<T> knots;
    for (const auto& q : sp.knots_q) knots.push_back(from_rational<T>(q));
    auto col = [n](int side, int layer, int s) { return (side * 3 + layer) * n + s; };

    for (int s = 0; s < n; ++s) {
        std::vector<T> row(out.ncols, T(0));
        row[col(0, 0, s)] = T(1);
        row[col(1, 0, s)] = T(-1);
        out.rows.push_back(std::move(row));
        out.tags.push_back({e.id, 0, s, 0});
    }
    for (int order = 1; order <= 2; ++order) {
        const int m = (order == 1 ? d + 3 : d + 5) * smp.factor;
        for (int s = 0; s <= k; ++s)
            for (int i = 0; i < m; ++i) {
                Rational tq = Rational(s, k + 1) + Rational(i + 1, (m + 1) * (k + 1));
                T t = from_rational<T>(tq);
                // [side][a][b] partial -> sparse list (layer, along, value)
                std::array<std::array<std::array<std::vector<std::pair<int, T>>, 3>, 3>, 2> W;
                detail::view_partials<T>(sp, knots, e.vl, 1, s, t, true, [&](int layer, int j, int a, int b, T v) {
                    W[0][a][b].push_back({col(0, layer, j), v});
                });
                detail::view_partials<T>(sp, knots, e.vr, 0, s, t, false, [&](int layer, int j, int a, int b, T v) {
                    W[1][a][b].push_back({col(1, layer, j), v});
                });
                auto g = alpha_beta_gamma_at<T>(Pl, Pr, e, t);
                std::vector<T> row(out.ncols, T(0));
                auto add = [&](int side, int a, int b, const T& f) {
                    for (const auto& [c, v] : W[side][a][b]) row[c] += f * v;
                };
                if (order == 1) {
                    add(0, 0, 1, g.alpha);
                    add(0, 1, 0, g.beta);
                    add(1, 1, 0, -g.gamma);
                } else {
                    const T& al = g.alpha;
                    const T& be = g.beta;
                    const T& ga = g.gamma;
                    T Z1 = T(-2) * al * be * g.gl.Gmix[0], Z2 = T(-2) * al * be * g.gl.Gmix[1];
                    const auto& A = g.gl.J1;
                    const auto& B = g.gl.J2;
                    add(0, 2, 0, -(be * be * ga));
                    add(0, 1, 1, T(-2) * al * be * ga);
                    add(0, 0, 2, -(al * al * ga));
                    add(0, 0, 1, Z1 * A[1] - Z2 * A[0]);
                    add(0, 1, 0, Z2 * B[0] - Z1 * B[1]);
                    add(1, 2, 0, ga * ga * ga);
                }
                out.rows.push_back(std::move(row));
                out.tags.push_back({e.id, order, s, i});
            }
    }
    return out;
}

// Global sparse system over P*n^2 columns, rows scaled to unit max-norm; pinned columns
// get unit rows when bc = order2.
struct ConstraintSystem {
    int ncols = 0;
    Eigen::SparseMatrix<double, Eigen::RowMajor> T;
    std::vector<RowTag> tags;
};
ConstraintSystem assemble_T(const MultiPatchDomain& dom, const SplineSpace& sp, BoundaryCondition bc,
                            Sampling smp = {});

void write_matrix_market(const ConstraintSystem& sys, const std::string& path);

// Nullity of the full system by plain elimination over the field F; independent of the
// interface/vertex block structure.
template <class F>
long long nullity_exact(const MultiPatchDomain& dom, const SplineSpace& sp, BoundaryCondition bc, Sampling smp = {}) {
    const int n = sp.n;
    const long long total = static_cast<long long>(dom.num_patches()) * n * n;
    auto pinned = pinned_mask(dom, sp, bc);
    long long free_cols = 0;
    for (bool p : pinned) free_cols += !p;
    std::vector<GlobalId> order;
    std::vector<int> pos(total, -1);
    std::vector<EdgeRows<F>> all;
    std::vector<EdgeLayout> lays;
    for (const auto& e : dom.interfaces) {
        lays.push_back(edge_layout(dom, e, sp));
        for (const auto& c : lays.back().cols)
            if (!pinned[c.gid] && pos[c.gid] < 0) {
                pos[c.gid] = static_cast<int>(order.size());
                order.push_back(c.gid);
            }
        all.push_back(edge_rows<F>(dom, e, sp, smp));
    }
    int m = 0;
    for (const auto& er : all) m += static_cast<int>(er.rows.size());
    DenseRows<F> M(m, static_cast<int>(order.size()));
    int r = 0;
    for (std::size_t ei = 0; ei < all.size(); ++ei)
        for (const auto& row : all[ei].rows) {
            for (int c = 0; c < all[ei].ncols; ++c) {
                const auto& lc = lays[ei].cols[c];
                if (!pinned[lc.gid] && !is_zero(row[c])) M(r, pos[lc.gid]) += row[c];
            }
            ++r;
        }
    return free_cols - echelon(M).rank;
}

} // namespace g2patch
