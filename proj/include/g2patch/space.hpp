#pragma once

#include "g2patch/constraints.hpp"

#include <Eigen/Sparse>

#include <map>
#include <string>
#include <vector>

namespace g2patch {

struct EdgeInfo {
    int edge = -1;
    int a = -1, b = -1;
    std::vector<GlobalId> gamma;      // unpinned interface columns, increasing
    std::vector<GlobalId> determined; // pivots among gamma
    std::vector<GlobalId> mds;        // free among gamma
    std::vector<GlobalId> xi;         // unpinned corner-block columns touched by this edge
    int dim = 0;
    int mu = 0;
    int dim_v0 = -1;      // two-patch k=0 band nullity, -1 if not computed
    int closed_form = -1; // (k+1) dim_v0 - 9 mu - 11 (k+2-mu)
};

struct VertexInfo {
    int vertex = -1;
    int fan = -1;
    std::vector<GlobalId> xi;
    std::vector<GlobalId> determined, free;
    int dim = 0;
    int closed_form = -1;
};

struct PatchInfo {
    int patch = -1;
    std::vector<GlobalId> cols; // columns in no band and not pinned
    int closed_form = -1;
    int r_gamma = 0, r_v = 0;
};

struct SpaceAnalysis {
    int d = 5, k = 0, n = 0;
    BoundaryCondition bc = BoundaryCondition::none;
    bool merged = false;      // edge and vertex parts reported together
    bool split_valid = true;  // vertex parts add up to the corner-block nullity
    std::vector<PatchInfo> patches;
    std::vector<EdgeInfo> edges;
    std::vector<VertexInfo> vertices;
    std::vector<GlobalId> xi_all, xi_determined, xi_free; // all corner-block columns
    long long patch_dim = 0, edge_dim = 0, vertex_dim = 0, xi_dim = 0, total = 0;
    long long closed_patch = 0, closed_edge = 0, closed_vertex = 0, closed_total = 0;
    bool closed_available = true;
    std::vector<std::string> notes;
};

struct AnalysisOptions {
    BoundaryCondition bc = BoundaryCondition::none;
    Sampling sampling{};
    bool closed_forms = true;
    int threads = 1;
};

// Interface-wise exact elimination over F: rank per band, leftover corner-block rows, and the
// patch / edge / vertex split of the nullity.
template <class F>
SpaceAnalysis analyze_space_with(const MultiPatchDomain& dom, const SplineSpace& sp, const AnalysisOptions& opt);

SpaceAnalysis analyze_space(const MultiPatchDomain& dom, const SplineSpace& sp, const AnalysisOptions& opt = {});

// Closed forms.
int patch_space_dim(int r_gamma, int r_v, int d, int k);
int patch_space_dim_bc(int d, int k);
int edge_space_dim(int dim_v0, int mu, int k);
// k = 0 nullity of one interface restricted to its band (2 x 3 x (d+1) columns).
int two_patch_dim_v0(const MultiPatchDomain& dom, const Interface& e, int d);

// Basis.
enum class Tag { patch, edge, vertex, merged };
const char* tag_name(Tag t);

struct IsogeometricBasis {
    int d = 5, k = 0, L = 0, n = 0, num_patches = 0;
    BoundaryCondition bc = BoundaryCondition::none;
    Eigen::SparseMatrix<double> B; // coefficients x functions
    std::vector<Tag> tags;
    std::vector<int> owner; // patch, edge or vertex id; -1 for merged
    long long count(Tag t) const;
    int size() const { return static_cast<int>(tags.size()); }
};

struct BasisOptions {
    BoundaryCondition bc = BoundaryCondition::none;
    int threads = 1;
};

IsogeometricBasis build_basis(const MultiPatchDomain& dom, int d, int L, const BasisOptions& opt = {});
IsogeometricBasis build_basis(const MultiPatchDomain& dom, const SplineSpace& sp, const SpaceAnalysis& an,
                              const BasisOptions& opt = {});

// Value and parametric partials (ordering as eval_field) of one member on patch l.
std::vector<double> evaluate_member(const IsogeometricBasis& basis, const SplineSpace& sp, int f, int l, double x,
                                    double y, int max_deriv);

// Max over functions of |T b| with unit max-norm rows.
double basis_residual(const IsogeometricBasis& basis, const ConstraintSystem& sys);

void export_basis_csv(const IsogeometricBasis& basis, const std::string& path);
std::string basis_header_json(const IsogeometricBasis& basis);

} // namespace g2patch
