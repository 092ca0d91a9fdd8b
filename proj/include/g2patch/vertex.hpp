#pragma once

#include "g2patch/geometry.hpp"

#include <map>
#include <random>
#include <string>
#include <vector>

namespace g2patch {

// A vertex fan translated to the origin: neighbours v^(1..nu) and opposite corners, one per patch.
// Patch j (1-based) is spanned by v^(j), its opposite corner and v^(j+1).
struct Fan {
    bool boundary = false;
    std::vector<Vec2q> v;  // nu neighbours
    std::vector<Vec2q> vt; // nu (inner) or nu-1 (boundary) opposite corners
    int nu() const { return static_cast<int>(v.size()); }
    int patches() const { return static_cast<int>(vt.size()); }
};

Fan fan_from_vertex(const VertexFan& f);
// Fan as a standalone domain; the centre is vertex 0.
MultiPatchDomain fan_domain(const Fan& f);

// psi_{i,j} = p_i q_j - p_j q_i, indices 1-based and cyclic (0 -> nu, nu+1 -> 1).
Rational psi(const Fan& f, int i, int j);
// Number of collinear windows psi_{j+1,j-1} = 0 (j over interior edges).
int fan_type(const Fan& f);
bool fan_admissible(int nu, int rho, bool boundary);

// N or tilde N; throws for inadmissible classes.
int closed_form_vertex_dim(int nu, int rho, bool boundary);

enum class EqKind { e, tilde, bar, hat };
const char* eq_kind_name(EqKind k);

struct VertexEquation {
    EqKind kind = EqKind::e;
    int j = 0;
    std::map<int, Rational> coef; // ring label -> coefficient
};

struct VertexEquationSet {
    int nu = 0;
    bool boundary = false;
    int num_labels = 0; // 3 nu', the second ring
    std::vector<VertexEquation> eqs;
    std::vector<std::string> notes;
    const VertexEquation* find(EqKind k, int j) const;
};

// Ring label of b_i after the inner-vertex wrap-around.
int ring_label(int i, int nu, bool boundary);

// e, tilde e, bar e from psi values; hat e harvested from the two-patch constraints of degree d and
// k inner knots.
VertexEquationSet build_vertex_equations(const Fan& f, int d = 5, int k = 2);
int equation_rank(const VertexEquationSet& s);
// 6 + 3 nu' - rank
int equation_vertex_dim(const VertexEquationSet& s);

// Corner-block dimension at the centre from the full constraint system on the fan domain.
// With d = 5, k = 2 a rare fan moves one function into an edge band; k >= 3 is stable.
int numeric_vertex_dim(const Fan& f, int d, int k);

// e^(j) coefficients (m4, m2, p0, p2) from psi values, for any window.
std::array<Rational, 4> e_coefficients(const Fan& f, int j);
Rational det_Dj(const Fan& f, int j);
Rational det_Dj_closed(const Fan& f, int j);
Rational det_A0(const Fan& f);
Rational det_A0_closed(const Fan& f);

struct IdentityCheck {
    std::string name;
    double residual = 0; // max |lhs - combination| / max |lhs|
    bool pass = false;
    std::string detail;
};

// Dependency identities among the vertex equations for the special fans of valency 4 and 5.
// Each identity is evaluated as stated; a corrected variant is added where the stated one fails.
std::vector<IdentityCheck> check_appendix_identities(const Fan& f, int d = 5, int k = 2, double tol = 1e-9);

// Random fans with prescribed valency and type: gaps between consecutive neighbours in
// (0.25, pi - 0.2), coordinates with denominators 64..256, collinear windows exact.
struct FanSpec {
    int nu = 4;
    int rho = 0;
    bool boundary = false;
};
Fan random_fan(const FanSpec& s, std::mt19937_64& rng);
// Type 2 valency 4 fan with q2 = q4 = 0 (both p2 branches), or type 4 normalised with q2 = q4 = 0,
// p4 = 1 (p1 = 0 when zero_p).
Fan random_special_fan(int nu, int rho, bool zero_p, std::mt19937_64& rng);

// Random domain with at most six patches. Templates are cycled by `variant`: fan domains of every
// admissible class that fits, then jittered 2x2, 2x3, 1x3 and L-shaped grids.
int num_random_domain_templates();
MultiPatchDomain random_domain(int variant, std::mt19937_64& rng);

} // namespace g2patch
