#pragma once

#include "g2patch/field.hpp"

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace g2patch {

struct Vec2q {
    Rational x, y;
};

inline Rational cross(const Vec2q& a, const Vec2q& b) { return a.x * b.y - a.y * b.x; }
inline Vec2q operator-(const Vec2q& a, const Vec2q& b) { return {a.x - b.x, a.y - b.y}; }

// Parameter corners of G(0,0), G(1,0), G(1,1), G(0,1).
inline constexpr std::array<std::array<int, 2>, 4> kCornerParam{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};

// Signed-permutation reparameterization xi = c + M u of a patch; M[r][col].
struct View {
    std::array<int, 2> c{0, 0};
    std::array<std::array<int, 2>, 2> M{{{1, 0}, {0, 1}}};

    bool swapped() const { return M[0][0] == 0; }
    // own tensor index of view index (j0, j1) for n functions per direction
    std::array<int, 2> own_index(int j0, int j1, int n) const {
        return {c[0] * (n - 1) + M[0][0] * j0 + M[0][1] * j1, c[1] * (n - 1) + M[1][0] * j0 + M[1][1] * j1};
    }
    std::array<double, 2> own_point(double u0, double u1) const {
        return {c[0] + M[0][0] * u0 + M[0][1] * u1, c[1] + M[1][0] * u0 + M[1][1] * u1};
    }
};

// Patch l sees the interface at u0 = 1, patch lp at u0 = 0; u1 runs from vertex a to vertex b.
struct Interface {
    int id = -1;
    int l = -1, lp = -1;
    int a = -1, b = -1;
    View vl, vr;
};

struct BoundarySide {
    int patch = -1;
    int side = -1; // corners side, side+1
    int a = -1, b = -1;
};

struct VertexFan {
    int center = -1;
    bool boundary = false;
    int valency = 0;     // nu
    int valency_eff = 0; // nu' (nu for inner, nu-1 for boundary)
    std::vector<int> nbr;        // v^(1..nu) as global vertex ids
    std::vector<int> opposite;   // tilde v^(j), one per patch
    std::vector<int> patches;    // Omega^(j)
    std::vector<int> edges;      // interface id of edge (v0, v^(j)) or -1 on the boundary
    std::vector<Vec2q> p;        // v^(j) - v0
    std::vector<Vec2q> pt;       // tilde v^(j) - v0
    int type = 0;                // rho
    bool consistent = true;
    std::string note;
};

struct DomainOptions {
    bool require_ccw = true;
};

struct MultiPatchDomain {
    std::vector<Vec2q> vq;
    std::vector<Eigen::Vector2d> v;
    std::vector<std::array<int, 4>> patches;
    bool rational_input = true;

    std::vector<Interface> interfaces;
    std::vector<BoundarySide> boundary;
    std::vector<int> valency;
    std::vector<bool> on_boundary;
    std::vector<VertexFan> fans; // counted vertices (valency >= 3)
    std::vector<int> fan_of;     // vertex -> fan index or -1
    std::vector<std::string> warnings;

    int num_patches() const { return static_cast<int>(patches.size()); }
    double scale() const;

    static MultiPatchDomain build(std::vector<Vec2q> vertices, std::vector<std::array<int, 4>> patches,
                                  DomainOptions opt = {});
};

MultiPatchDomain load_domain(const std::string& json_text, DomainOptions opt = {});
MultiPatchDomain load_domain_file(const std::string& path, DomainOptions opt = {});
std::string domain_to_json(const MultiPatchDomain& dom);

// Corner points of patch l in field T.
template <class T> std::array<std::array<T, 2>, 4> patch_corners(const MultiPatchDomain& dom, int l) {
    std::array<std::array<T, 2>, 4> P;
    for (int i = 0; i < 4; ++i) {
        const auto& q = dom.vq[dom.patches[l][i]];
        P[i] = {from_rational<T>(q.x), from_rational<T>(q.y)};
    }
    return P;
}

template <class T> struct ViewGeometry {
    std::array<T, 2> J1, J2, Gmix; // d/du0, d/du1, d2/du0du1
};

// Derivatives of G o (c + M u) at own point (x, y).
template <class T>
ViewGeometry<T> view_geometry(const std::array<std::array<T, 2>, 4>& P, const View& V, const T& x, const T& y) {
    ViewGeometry<T> g;
    for (int m = 0; m < 2; ++m) {
        T gx = (T(1) - y) * (P[1][m] - P[0][m]) + y * (P[2][m] - P[3][m]);
        T gy = (T(1) - x) * (P[3][m] - P[0][m]) + x * (P[2][m] - P[1][m]);
        T gxy = P[0][m] - P[1][m] + P[2][m] - P[3][m];
        g.J1[m] = T(V.M[0][0]) * gx + T(V.M[1][0]) * gy;
        g.J2[m] = T(V.M[0][1]) * gx + T(V.M[1][1]) * gy;
        g.Gmix[m] = T(V.M[0][0] * V.M[1][1] + V.M[1][0] * V.M[0][1]) * gxy;
    }
    return g;
}

template <class T> inline T det2(const std::array<T, 2>& a, const std::array<T, 2>& b) {
    return a[0] * b[1] - a[1] * b[0];
}

template <class T> struct ABG {
    T alpha, beta, gamma;
    ViewGeometry<T> gl, gr;
};

// alpha, beta, gamma at position t along the interface.
template <class T>
ABG<T> alpha_beta_gamma_at(const std::array<std::array<T, 2>, 4>& Pl, const std::array<std::array<T, 2>, 4>& Pr,
                           const Interface& e, const T& t) {
    auto at = [&](const View& V, int u0) {
        return std::array<T, 2>{T(V.c[0]) + T(V.M[0][0] * u0) + T(V.M[0][1]) * t,
                                T(V.c[1]) + T(V.M[1][0] * u0) + T(V.M[1][1]) * t};
    };
    auto xl = at(e.vl, 1), xr = at(e.vr, 0);
    ABG<T> r;
    r.gl = view_geometry(Pl, e.vl, xl[0], xl[1]);
    r.gr = view_geometry(Pr, e.vr, xr[0], xr[1]);
    r.alpha = det2(r.gl.J1, r.gr.J1);
    r.beta = det2(r.gr.J1, r.gl.J2);
    r.gamma = det2(r.gl.J1, r.gl.J2);
    return r;
}

// Quadratic coefficients (c0 + c1 t + c2 t^2) of alpha, beta, gamma along an interface.
struct EdgePolys {
    std::array<Rational, 3> alpha, beta, gamma;
};
EdgePolys alpha_beta_gamma(const MultiPatchDomain& dom, const Interface& e);

// Six shape points of the two-patch subdomain: a, b, then the far corners of l (at a, at b),
// then of lp (at a, at b).
std::array<Vec2q, 6> shape_points(const MultiPatchDomain& dom, const Interface& e);

// Number of i in 0..k+1 with alpha(i/(k+1)) = 0.
int edge_mu(const MultiPatchDomain& dom, const Interface& e, int k);

struct PatchMap {
    Eigen::Vector2d x;
    Eigen::Matrix2d J;   // columns d/dxi1, d/dxi2
    Eigen::Vector2d Gxy; // mixed second derivative (pure ones vanish)
};
PatchMap patch_map(const MultiPatchDomain& dom, int l, double x, double y);

VertexFan classify_vertex(const MultiPatchDomain& dom, int r);

// Boundary sides of a patch: r_gamma of them, sharing r_v vertices.
struct PatchSides {
    std::array<bool, 4> boundary{}; // side s between corners s and s+1
    int r_gamma = 0;
    int r_v = 0;
};
PatchSides patch_sides(const MultiPatchDomain& dom, int l);

} // namespace g2patch
