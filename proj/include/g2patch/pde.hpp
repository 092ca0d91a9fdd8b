#pragma once

#include "g2patch/poly2.hpp"
#include "g2patch/space.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace g2patch {

// Derivatives up to order 3 in the order of eval_field: v; d1, d2; d11, d12, d22; d111, d112, d122, d222.
using Jet3 = std::array<double, 10>;
inline int num_partials(int order) { return (order + 1) * (order + 2) / 2; }

class ScalarField {
public:
    virtual ~ScalarField() = default;
    // value and physical partials up to `order` (<= 3) at (x, y)
    virtual Jet3 eval(double x, double y, int order) const = 0;
};

// 2 cos(2 x1) sin(2 x2)
class TrigField : public ScalarField {
public:
    Jet3 eval(double x, double y, int order) const override;
};

class PolyField : public ScalarField {
public:
    explicit PolyField(Poly2 p);
    Jet3 eval(double x, double y, int order) const override;

private:
    std::vector<Poly2> d_; // the ten partials
};

// a x1 + b x2 + c, scaled so that |b| = 1 (|a| = 1 for vertical lines) and positive inside
struct Line {
    Rational a, b, c;
};

// u = (amplitude * prod lines)^power
struct Manufactured {
    std::vector<Line> lines;
    Rational amplitude{1};
    int power = 3;
    Poly2 u_poly() const;
    Poly2 f_poly() const; // Laplacian cubed
};

// Distinct boundary lines of the domain (collinear boundary sides share one factor).
Manufactured manufactured_solution(const MultiPatchDomain& dom, const Rational& amplitude);

// Product-form evaluation by truncated Taylor jets: stable for high degrees.
class ManufacturedField : public ScalarField {
public:
    explicit ManufacturedField(const Manufactured& m);
    Jet3 eval(double x, double y, int order) const override;
    // physical partials of Laplacian cubed, up to `order`
    Jet3 laplacian3(double x, double y, int order = 0) const;

private:
    std::vector<std::array<double, 3>> lines_;
    double amplitude_ = 1;
    int power_ = 3;
    // Taylor coefficients c[i][j] of u at (x, y), i + j <= K
    std::vector<std::vector<double>> jet(double x, double y, int K) const;
};

class ManufacturedRhs : public ScalarField {
public:
    explicit ManufacturedRhs(const Manufactured& m) : u_(m) {}
    Jet3 eval(double x, double y, int order) const override;

private:
    ManufacturedField u_;
};

// Physical partials = A * parametric partials (both ordered as Jet3) for a bilinear map.
Eigen::Matrix<double, 10, 10> pushforward_matrix(const PatchMap& g);
Jet3 pushforward_derivatives(const MultiPatchDomain& dom, int l, double xi1, double xi2, const Jet3& parametric);

struct Gauss {
    std::vector<double> x, w; // on [0, 1]
};
Gauss gauss_legendre(int q);

struct PdeOptions {
    int quad = -1; // Gauss points per direction; -1 for d + 6
    int threads = 1;
    bool condition = true;
};

int quadrature_points(int d, const PdeOptions& opt);

// Galerkin matrices in the basis, assembled element-wise on tensor B-splines and projected.
Eigen::SparseMatrix<double> assemble_mass(const MultiPatchDomain& dom, const SplineSpace& sp,
                                          const IsogeometricBasis& basis, const PdeOptions& opt = {});
Eigen::SparseMatrix<double> assemble_triharmonic(const MultiPatchDomain& dom, const SplineSpace& sp,
                                                 const IsogeometricBasis& basis, const PdeOptions& opt = {});
// int f phi_a over the domain
Eigen::VectorXd assemble_load(const MultiPatchDomain& dom, const SplineSpace& sp, const IsogeometricBasis& basis,
                              const ScalarField& f, const PdeOptions& opt = {});

struct ErrorNorms {
    std::array<double, 4> abs{}, norm{}, rel{}; // full H^i norms, i = 0..3
    bool zero_exact = false;                    // relative values are absolute when |u|_i = 0
};

// Errors of u_h = sum c_a phi_a against the exact field (full derivative tensors in the seminorms).
ErrorNorms error_norms(const MultiPatchDomain& dom, const SplineSpace& sp, const IsogeometricBasis& basis,
                       const Eigen::VectorXd& coeffs, const ScalarField& exact, const PdeOptions& opt = {});

// Factorization or eigenvalue failure on a system that should be SPD.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// kappa_2 of D^{-1/2} M D^{-1/2}; dense for n <= 2000, else power / inverse iteration.
double scaled_condition(const Eigen::SparseMatrix<double>& M);

// Solve an SPD system after diagonal scaling; throws on factorization failure.
Eigen::VectorXd solve_spd(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b);

struct RunReport {
    int level = 0, d = 0;
    long long total = 0, patch = 0, edge = 0, vertex = 0;
    std::array<double, 4> err{};
    double rate0 = std::numeric_limits<double>::quiet_NaN();
    double cond = std::numeric_limits<double>::quiet_NaN();
    double seconds = 0;
    double galerkin_residual = 0; // L2 fit only: max |load - M c| after scaling
};

RunReport solve_l2(const MultiPatchDomain& dom, int d, int L, const ScalarField& target, const PdeOptions& opt = {});
RunReport solve_triharmonic(const MultiPatchDomain& dom, int d, int L, const ScalarField& exact,
                            const ScalarField& rhs, const PdeOptions& opt = {});

// rate0 of each row from its predecessor
void fill_rates(std::vector<RunReport>& rows);
std::string csv_header();
std::string csv_row(const RunReport& r);

} // namespace g2patch
