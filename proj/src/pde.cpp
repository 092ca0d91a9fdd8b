#include "g2patch/pde.hpp"
#include "g2patch/parallel.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace g2patch {

namespace {

// position of the partial with a first- and b second-direction derivatives in a Jet3
inline int jet_index(int a, int b) { return (a + b) * (a + b + 1) / 2 + b; }

double factorial(int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double binom(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

} // namespace

// ---- fields ----

Jet3 TrigField::eval(double x, double y, int order) const {
    Jet3 out{};
    const double h = std::numbers::pi / 2;
    for (int m = 0; m <= order; ++m)
        for (int b = 0; b <= m; ++b) {
            int a = m - b;
            out[jet_index(a, b)] = 2 * std::pow(2.0, m) * std::cos(2 * x + a * h) * std::sin(2 * y + b * h);
        }
    return out;
}

PolyField::PolyField(Poly2 p) {
    d_.resize(10);
    for (int m = 0; m <= 3; ++m)
        for (int b = 0; b <= m; ++b) {
            Poly2 q = p;
            for (int i = 0; i < m - b; ++i) q = q.dx();
            for (int i = 0; i < b; ++i) q = q.dy();
            d_[jet_index(m - b, b)] = q;
        }
}

Jet3 PolyField::eval(double x, double y, int order) const {
    Jet3 out{};
    for (int i = 0; i < num_partials(order); ++i) out[i] = d_[i].eval(x, y);
    return out;
}

Poly2 Manufactured::u_poly() const {
    Poly2 p = Poly2::constant(amplitude);
    for (const auto& l : lines) p = p * Poly2::linear(l.a, l.b, l.c);
    return p.pow(power);
}

Poly2 Manufactured::f_poly() const { return u_poly().laplacian().laplacian().laplacian(); }

Manufactured manufactured_solution(const MultiPatchDomain& dom, const Rational& amplitude) {
    Manufactured m;
    m.amplitude = amplitude;
    for (const auto& s : dom.boundary) {
        const auto &A = dom.vq[s.a], &B = dom.vq[s.b];
        Line l{A.y - B.y, B.x - A.x, Rational(0)};
        l.c = -(l.a * A.x + l.b * A.y);
        Rational scale = l.b != 0 ? abs(l.b) : abs(l.a);
        l.a /= scale, l.b /= scale, l.c /= scale;
        // patch corners average to an interior point of a convex patch
        Rational cx(0), cy(0);
        for (int c : dom.patches[s.patch]) cx += dom.vq[c].x / 4, cy += dom.vq[c].y / 4;
        if (l.a * cx + l.b * cy + l.c < 0) l.a = -l.a, l.b = -l.b, l.c = -l.c;
        bool seen = false;
        for (const auto& o : m.lines) seen = seen || (o.a == l.a && o.b == l.b && o.c == l.c);
        if (!seen) m.lines.push_back(l);
    }
    return m;
}

ManufacturedField::ManufacturedField(const Manufactured& m)
    : amplitude_(to_double(m.amplitude)), power_(m.power) {
    for (const auto& l : m.lines) lines_.push_back({to_double(l.a), to_double(l.b), to_double(l.c)});
}

std::vector<std::vector<double>> ManufacturedField::jet(double x, double y, int K) const {
    using J = std::vector<std::vector<double>>;
    auto mul = [K](const J& p, const J& q) {
        J r(K + 1, std::vector<double>(K + 1, 0.0));
        for (int i = 0; i <= K; ++i)
            for (int j = 0; i + j <= K; ++j) {
                if (p[i][j] == 0) continue;
                for (int a = 0; i + a <= K; ++a)
                    for (int b = 0; i + j + a + b <= K; ++b) r[i + a][j + b] += p[i][j] * q[a][b];
            }
        return r;
    };
    J P(K + 1, std::vector<double>(K + 1, 0.0));
    P[0][0] = amplitude_;
    for (const auto& l : lines_) {
        J f(K + 1, std::vector<double>(K + 1, 0.0));
        f[0][0] = l[0] * x + l[1] * y + l[2];
        if (K >= 1) f[1][0] = l[0], f[0][1] = l[1];
        P = mul(P, f);
    }
    J U = P;
    for (int i = 1; i < power_; ++i) U = mul(U, P);
    return U;
}

Jet3 ManufacturedField::eval(double x, double y, int order) const {
    auto c = jet(x, y, order);
    Jet3 out{};
    for (int m = 0; m <= order; ++m)
        for (int b = 0; b <= m; ++b) out[jet_index(m - b, b)] = c[m - b][b] * factorial(m - b) * factorial(b);
    return out;
}

Jet3 ManufacturedField::laplacian3(double x, double y, int order) const {
    auto c = jet(x, y, order + 6);
    auto D = [&](int a, int b) { return c[a][b] * factorial(a) * factorial(b); };
    Jet3 out{};
    for (int m = 0; m <= order; ++m)
        for (int b = 0; b <= m; ++b) {
            int a = m - b;
            out[jet_index(a, b)] = D(a + 6, b) + 3 * D(a + 4, b + 2) + 3 * D(a + 2, b + 4) + D(a, b + 6);
        }
    return out;
}

Jet3 ManufacturedRhs::eval(double x, double y, int order) const { return u_.laplacian3(x, y, order); }

// ---- geometry push-forward ----

Eigen::Matrix<double, 10, 10> pushforward_matrix(const PatchMap& g) {
    const Eigen::Matrix2d& J = g.J;
    auto G2 = [&](int i, int a, int b) { return a != b ? g.Gxy(i) : 0.0; };
    static const int R2[3][2] = {{0, 0}, {0, 1}, {1, 1}};
    static const int R3[4][3] = {{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 1, 1}};
    Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
    for (int r = 0; r < 3; ++r)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) H(r, i + j) += J(i, R2[r][0]) * J(j, R2[r][1]);
    Eigen::Matrix4d T = Eigen::Matrix4d::Zero();
    for (int r = 0; r < 4; ++r)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) T(r, i + j + k) += J(i, R3[r][0]) * J(j, R3[r][1]) * J(k, R3[r][2]);
    Eigen::Matrix2d J1 = J.transpose().inverse();
    Eigen::Matrix3d Hi = H.inverse();
    Eigen::Matrix4d Ti = T.inverse();

    Eigen::Matrix<double, 10, 10> A;
    for (int col = 0; col < 10; ++col) {
        Eigen::Matrix<double, 10, 1> w = Eigen::Matrix<double, 10, 1>::Unit(col);
        Eigen::Matrix<double, 10, 1> u;
        u(0) = w(0);
        Eigen::Vector2d u1 = J1 * w.segment<2>(1);
        u.segment<2>(1) = u1;
        Eigen::Vector3d r2;
        for (int r = 0; r < 3; ++r) {
            double s = w(3 + r);
            for (int i = 0; i < 2; ++i) s -= u1(i) * G2(i, R2[r][0], R2[r][1]);
            r2(r) = s;
        }
        Eigen::Vector3d u2 = Hi * r2;
        u.segment<3>(3) = u2;
        Eigen::Vector4d r3;
        for (int r = 0; r < 4; ++r) {
            const int a = R3[r][0], b = R3[r][1], c = R3[r][2];
            double s = w(6 + r);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    s -= u2(i + j) * (G2(i, a, b) * J(j, c) + G2(i, a, c) * J(j, b) + J(i, a) * G2(j, b, c));
            r3(r) = s;
        }
        u.segment<4>(6) = Ti * r3;
        A.col(col) = u;
    }
    return A;
}

Jet3 pushforward_derivatives(const MultiPatchDomain& dom, int l, double xi1, double xi2, const Jet3& parametric) {
    auto A = pushforward_matrix(patch_map(dom, l, xi1, xi2));
    Eigen::Map<const Eigen::Matrix<double, 10, 1>> w(parametric.data());
    Eigen::Matrix<double, 10, 1> u = A * w;
    Jet3 out;
    for (int i = 0; i < 10; ++i) out[i] = u(i);
    return out;
}

Gauss gauss_legendre(int q) {
    if (q < 1) throw std::invalid_argument("quadrature needs at least one point");
    auto zeros = boost::math::legendre_p_zeros<double>(q);
    std::vector<double> x;
    for (double z : zeros) {
        x.push_back(z);
        if (z != 0) x.push_back(-z);
    }
    std::sort(x.begin(), x.end());
    Gauss g;
    for (double z : x) {
        double dp = boost::math::legendre_p_prime(q, z);
        g.x.push_back((z + 1) / 2);
        g.w.push_back(1 / ((1 - z * z) * dp * dp));
    }
    return g;
}

int quadrature_points(int d, const PdeOptions& opt) { return opt.quad > 0 ? opt.quad : d + 6; }

// ---- element loops ----

namespace {

// Univariate values and derivatives at the Gauss nodes of every span.
struct NodeTable {
    Gauss g;
    std::vector<std::vector<Eigen::MatrixXd>> U; // [span][node] -> 4 x (d+1)
    std::vector<int> first;

    NodeTable(const SplineSpace& sp, int q) : g(gauss_legendre(q)) {
        const int S = sp.k + 1;
        U.resize(S);
        first.resize(S);
        for (int s = 0; s < S; ++s) {
            first[s] = sp.first_active(s);
            for (double t : g.x) {
                double x = (s + t) / S;
                auto e = eval_univariate(sp, x, 3);
                if (e.first_active != first[s]) throw std::logic_error("span lookup disagrees with node table");
                U[s].push_back(e.values);
            }
        }
    }
};

struct QuadPoint {
    double weight = 0;           // Gauss weight times |det J|
    Eigen::Vector2d x;           // physical point
    Eigen::Matrix<double, 10, 10> A;
    Eigen::MatrixXd param;       // 10 x (d+1)^2 parametric partials of the local B-splines
};

// Calls f(l, s1, s2, points) for every element; elements of one patch are visited in order.
template <class F>
void for_each_element(const MultiPatchDomain& dom, const SplineSpace& sp, const NodeTable& nt, int threads, F&& f) {
    const int S = sp.k + 1, d = sp.d, nl = (d + 1) * (d + 1);
    const int q = static_cast<int>(nt.g.x.size());
    parallel_for(dom.num_patches(), threads, [&](int l) {
        std::vector<QuadPoint> pts(q * q);
        for (int s1 = 0; s1 < S; ++s1)
            for (int s2 = 0; s2 < S; ++s2) {
                for (int g1 = 0; g1 < q; ++g1)
                    for (int g2 = 0; g2 < q; ++g2) {
                        auto& P = pts[g1 * q + g2];
                        double x = (s1 + nt.g.x[g1]) / S, y = (s2 + nt.g.x[g2]) / S;
                        auto pm = patch_map(dom, l, x, y);
                        P.weight = nt.g.w[g1] * nt.g.w[g2] / (S * S) * std::abs(pm.J.determinant());
                        P.x = pm.x;
                        P.A = pushforward_matrix(pm);
                        const auto &Ux = nt.U[s1][g1], &Uy = nt.U[s2][g2];
                        P.param.resize(10, nl);
                        for (int m = 0; m <= 3; ++m)
                            for (int b = 0; b <= m; ++b) {
                                int a = m - b, row = jet_index(a, b);
                                for (int p = 0; p <= d; ++p)
                                    for (int r = 0; r <= d; ++r) P.param(row, p * (d + 1) + r) = Ux(a, p) * Uy(b, r);
                            }
                    }
                f(l, s1, s2, pts);
            }
    });
}

GlobalId local_gid(const SplineSpace& sp, const NodeTable& nt, int l, int s1, int s2, int loc) {
    const int d = sp.d;
    return global_id(l, nt.first[s1] + loc / (d + 1), nt.first[s2] + loc % (d + 1), sp.n);
}

using Triplets = std::vector<Eigen::Triplet<double>>;

Eigen::SparseMatrix<double> project(const IsogeometricBasis& basis, const std::vector<Triplets>& per_patch,
                                    long long N) {
    Triplets all;
    std::size_t total = 0;
    for (const auto& t : per_patch) total += t.size();
    all.reserve(total);
    for (const auto& t : per_patch) all.insert(all.end(), t.begin(), t.end());
    Eigen::SparseMatrix<double> raw(N, N);
    raw.setFromTriplets(all.begin(), all.end());
    Eigen::SparseMatrix<double> BT = basis.B.transpose();
    Eigen::SparseMatrix<double> RB = raw * basis.B;
    Eigen::SparseMatrix<double> K = BT * RB;
    K.prune(0.0);
    return K;
}

template <class LocalFn>
Eigen::SparseMatrix<double> assemble_bilinear(const MultiPatchDomain& dom, const SplineSpace& sp,
                                              const IsogeometricBasis& basis, const PdeOptions& opt, LocalFn&& local) {
    NodeTable nt(sp, quadrature_points(sp.d, opt));
    const int nl = (sp.d + 1) * (sp.d + 1);
    std::vector<Triplets> trip(dom.num_patches());
    for_each_element(dom, sp, nt, opt.threads, [&](int l, int s1, int s2, const std::vector<QuadPoint>& pts) {
        Eigen::MatrixXd Ke = Eigen::MatrixXd::Zero(nl, nl);
        for (const auto& P : pts) local(P, Ke);
        for (int i = 0; i < nl; ++i)
            for (int j = 0; j < nl; ++j)
                if (Ke(i, j) != 0)
                    trip[l].emplace_back(local_gid(sp, nt, l, s1, s2, i), local_gid(sp, nt, l, s1, s2, j), Ke(i, j));
    });
    const long long N = static_cast<long long>(dom.num_patches()) * sp.n * sp.n;
    return project(basis, trip, N);
}

} // namespace

Eigen::SparseMatrix<double> assemble_mass(const MultiPatchDomain& dom, const SplineSpace& sp,
                                          const IsogeometricBasis& basis, const PdeOptions& opt) {
    return assemble_bilinear(dom, sp, basis, opt, [](const QuadPoint& P, Eigen::MatrixXd& Ke) {
        auto v = P.param.row(0);
        Ke.noalias() += P.weight * v.transpose() * v;
    });
}

Eigen::SparseMatrix<double> assemble_triharmonic(const MultiPatchDomain& dom, const SplineSpace& sp,
                                                 const IsogeometricBasis& basis, const PdeOptions& opt) {
    return assemble_bilinear(dom, sp, basis, opt, [](const QuadPoint& P, Eigen::MatrixXd& Ke) {
        // grad Laplacian: (u111 + u122, u112 + u222)
        Eigen::MatrixXd third = P.A.bottomRows<4>() * P.param;
        Eigen::RowVectorXd gx = third.row(0) + third.row(2), gy = third.row(1) + third.row(3);
        Ke.noalias() += P.weight * (gx.transpose() * gx + gy.transpose() * gy);
    });
}

Eigen::VectorXd assemble_load(const MultiPatchDomain& dom, const SplineSpace& sp, const IsogeometricBasis& basis,
                              const ScalarField& f, const PdeOptions& opt) {
    NodeTable nt(sp, quadrature_points(sp.d, opt));
    const int nl = (sp.d + 1) * (sp.d + 1);
    const long long N = static_cast<long long>(dom.num_patches()) * sp.n * sp.n;
    std::vector<Eigen::VectorXd> per(dom.num_patches(), Eigen::VectorXd::Zero(N));
    for_each_element(dom, sp, nt, opt.threads, [&](int l, int s1, int s2, const std::vector<QuadPoint>& pts) {
        Eigen::VectorXd be = Eigen::VectorXd::Zero(nl);
        for (const auto& P : pts) be += P.weight * f.eval(P.x(0), P.x(1), 0)[0] * P.param.row(0).transpose();
        for (int i = 0; i < nl; ++i) per[l](local_gid(sp, nt, l, s1, s2, i)) += be(i);
    });
    Eigen::VectorXd raw = Eigen::VectorXd::Zero(N);
    for (const auto& v : per) raw += v;
    return basis.B.transpose() * raw;
}

ErrorNorms error_norms(const MultiPatchDomain& dom, const SplineSpace& sp, const IsogeometricBasis& basis,
                       const Eigen::VectorXd& coeffs, const ScalarField& exact, const PdeOptions& opt) {
    NodeTable nt(sp, quadrature_points(sp.d, opt));
    const int nl = (sp.d + 1) * (sp.d + 1);
    Eigen::VectorXd raw = basis.B * coeffs;
    // per patch sums of squared seminorms of error and exact solution
    std::vector<std::array<double, 8>> acc(dom.num_patches(), std::array<double, 8>{});
    for_each_element(dom, sp, nt, opt.threads, [&](int l, int s1, int s2, const std::vector<QuadPoint>& pts) {
        Eigen::VectorXd c(nl);
        for (int i = 0; i < nl; ++i) c(i) = raw(local_gid(sp, nt, l, s1, s2, i));
        for (const auto& P : pts) {
            Eigen::Matrix<double, 10, 1> uh = P.A * (P.param * c);
            Jet3 u = exact.eval(P.x(0), P.x(1), 3);
            for (int m = 0; m <= 3; ++m)
                for (int b = 0; b <= m; ++b) {
                    int i = jet_index(m - b, b);
                    double w = P.weight * binom(m, b);
                    acc[l][m] += w * (u[i] - uh(i)) * (u[i] - uh(i));
                    acc[l][4 + m] += w * u[i] * u[i];
                }
        }
    });
    std::array<double, 8> tot{};
    for (const auto& a : acc)
        for (int i = 0; i < 8; ++i) tot[i] += a[i];
    ErrorNorms out;
    double e = 0, n = 0;
    for (int i = 0; i < 4; ++i) {
        e += tot[i];
        n += tot[4 + i];
        out.abs[i] = std::sqrt(e);
        out.norm[i] = std::sqrt(n);
        if (n > 0)
            out.rel[i] = out.abs[i] / out.norm[i];
        else
            out.rel[i] = out.abs[i], out.zero_exact = true;
    }
    return out;
}

namespace {

Eigen::SparseMatrix<double> diag_scaled(const Eigen::SparseMatrix<double>& M, Eigen::VectorXd& s) {
    s = M.diagonal();
    for (int i = 0; i < s.size(); ++i) {
        if (!(s(i) > 0)) throw NumericalError("matrix has a non-positive diagonal entry");
        s(i) = 1 / std::sqrt(s(i));
    }
    Eigen::SparseMatrix<double> S = s.asDiagonal() * M * s.asDiagonal();
    return S;
}

} // namespace

double scaled_condition(const Eigen::SparseMatrix<double>& M) {
    Eigen::VectorXd s;
    auto S = diag_scaled(M, s);
    const int n = static_cast<int>(S.rows());
    if (n == 0) return std::numeric_limits<double>::quiet_NaN();
    if (n <= 2000) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(S), Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        return ev(n - 1) / ev(0);
    }
    const double tol = 1e-6;
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> U(-1, 1);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = U(rng);
    x.normalize();
    double lmax = 0;
    for (int it = 0; it < 5000; ++it) {
        Eigen::VectorXd y = S * x;
        double l = x.dot(y);
        x = y.normalized();
        if (it > 0 && std::abs(l - lmax) <= tol * std::abs(l)) {
            lmax = l;
            break;
        }
        lmax = l;
    }
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(S);
    if (ldlt.info() != Eigen::Success) throw NumericalError("factorization failed in condition estimate");
    for (int i = 0; i < n; ++i) x(i) = U(rng);
    x.normalize();
    double mu = 0;
    for (int it = 0; it < 5000; ++it) {
        Eigen::VectorXd y = ldlt.solve(x);
        double m = x.dot(y); // Rayleigh quotient of the inverse
        x = y.normalized();
        if (it > 0 && std::abs(m - mu) <= tol * std::abs(m)) {
            mu = m;
            break;
        }
        mu = m;
    }
    return lmax * mu;
}

Eigen::VectorXd solve_spd(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b) {
    Eigen::VectorXd s;
    auto S = diag_scaled(A, s);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(S);
    if (ldlt.info() != Eigen::Success) throw NumericalError("LDLT factorization failed on the scaled system");
    Eigen::VectorXd D = ldlt.vectorD();
    if (D.size() > 0 && D.minCoeff() <= 0)
        throw NumericalError("scaled system is not positive definite (min pivot " + std::to_string(D.minCoeff()) +
                                 ")");
    Eigen::VectorXd y = ldlt.solve(s.asDiagonal() * b);
    return s.asDiagonal() * y;
}

namespace {

void fill_counts(RunReport& r, const IsogeometricBasis& B) {
    r.total = B.size();
    r.patch = B.count(Tag::patch);
    r.edge = B.count(Tag::edge);
    r.vertex = B.count(Tag::vertex) + B.count(Tag::merged);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

RunReport solve_l2(const MultiPatchDomain& dom, int d, int L, const ScalarField& target, const PdeOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    SplineSpace sp(d, (1 << L) - 1);
    auto basis = build_basis(dom, d, L, {BoundaryCondition::none, opt.threads});
    RunReport r;
    r.level = L;
    r.d = d;
    fill_counts(r, basis);
    auto M = assemble_mass(dom, sp, basis, opt);
    auto b = assemble_load(dom, sp, basis, target, opt);
    auto c = solve_spd(M, b);
    double bmax = b.cwiseAbs().maxCoeff();
    r.galerkin_residual = bmax > 0 ? (b - M * c).cwiseAbs().maxCoeff() / bmax : 0;
    auto e = error_norms(dom, sp, basis, c, target, opt);
    r.err = e.rel;
    if (opt.condition) r.cond = scaled_condition(M);
    r.seconds = seconds_since(t0);
    return r;
}

RunReport solve_triharmonic(const MultiPatchDomain& dom, int d, int L, const ScalarField& exact,
                            const ScalarField& rhs, const PdeOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    SplineSpace sp(d, (1 << L) - 1);
    auto basis = build_basis(dom, d, L, {BoundaryCondition::order2, opt.threads});
    RunReport r;
    r.level = L;
    r.d = d;
    fill_counts(r, basis);
    auto A = assemble_triharmonic(dom, sp, basis, opt);
    // Delta^3 u = f  <=>  -(grad Delta u, grad Delta v) = (f, v) for v with order-2 boundary conditions
    Eigen::VectorXd b = -assemble_load(dom, sp, basis, rhs, opt);
    auto c = solve_spd(A, b);
    double bmax = b.cwiseAbs().maxCoeff();
    r.galerkin_residual = bmax > 0 ? (b - A * c).cwiseAbs().maxCoeff() / bmax : 0;
    auto e = error_norms(dom, sp, basis, c, exact, opt);
    r.err = e.rel;
    if (opt.condition) r.cond = scaled_condition(assemble_mass(dom, sp, basis, opt));
    r.seconds = seconds_since(t0);
    return r;
}

void fill_rates(std::vector<RunReport>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto &a = rows[i - 1], &b = rows[i];
        if (a.err[0] > 0 && b.err[0] > 0 && b.level > a.level)
            rows[i].rate0 = std::log2(a.err[0] / b.err[0]) / (b.level - a.level);
    }
}

std::string csv_header() { return "level,d,total,patch,edge,vertex,e0,e1,e2,e3,rate0,cond,seconds"; }

std::string csv_row(const RunReport& r) {
    auto num = [](double x) {
        if (std::isnan(x)) return std::string("nan");
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.16g", x);
        return std::string(buf);
    };
    std::ostringstream os;
    os << r.level << ',' << r.d << ',' << r.total << ',' << r.patch << ',' << r.edge << ',' << r.vertex;
    for (double e : r.err) os << ',' << num(e);
    os << ',' << num(r.rate0) << ',' << num(r.cond) << ',' << num(r.seconds);
    return os.str();
}

} // namespace g2patch
