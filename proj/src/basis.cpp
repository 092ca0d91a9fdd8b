#include "g2patch/parallel.hpp"
#include "g2patch/quad.hpp"
#include "g2patch/space.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace g2patch {

// Factorizations run in long double; residuals are evaluated in quadruple precision and the
// determined values refined until the columns are null vectors to quad accuracy. Near-parallel
// transversal directions along an edge make the constraint rows nearly dependent, so plain
// double or long double elimination tilts the computed space.
using Ld = long double;
using MatD = Eigen::Matrix<Ld, Eigen::Dynamic, Eigen::Dynamic>;
using VecD = Eigen::Matrix<Ld, Eigen::Dynamic, 1>;
using MatQ = Eigen::Matrix<Quad, Eigen::Dynamic, Eigen::Dynamic>;
using VecQ = Eigen::Matrix<Quad, Eigen::Dynamic, 1>;

const char* tag_name(Tag t) {
    switch (t) {
    case Tag::patch: return "patch";
    case Tag::edge: return "edge";
    case Tag::vertex: return "vertex";
    case Tag::merged: return "merged";
    }
    return "?";
}

long long IsogeometricBasis::count(Tag t) const {
    long long c = 0;
    for (Tag x : tags) c += x == t;
    return c;
}

namespace {

constexpr int kMaxRefine = 8;

using Column = std::map<GlobalId, Quad>;

struct EdgeFactor {
    std::unordered_map<GlobalId, int> local;           // gid -> column of M
    std::vector<std::vector<std::pair<int, Quad>>> Mq; // sparse columns, rows scaled to unit max-norm
    MatD M;                                            // the same in long double
    std::vector<int> det;                              // columns of M solved for
    std::vector<GlobalId> det_gid, mds;
    Eigen::HouseholderQR<MatD> qr; // of M(:, det)
    MatD left_null;                // orthonormal complement of range M(:, det), m x (m - |det|)

    int rows() const { return static_cast<int>(M.rows()); }

    VecQ residual(const Column& c) const {
        VecQ r = VecQ::Zero(rows());
        for (const auto& [g, v] : c) {
            auto it = local.find(g);
            if (it == local.end()) continue;
            for (const auto& [i, m] : Mq[it->second]) r(i) += m * v;
        }
        return r;
    }
};

VecD to_ld(const VecQ& v) {
    VecD out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = static_cast<Ld>(v(i));
    return out;
}

Quad max_abs(const VecQ& v) {
    Quad m = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, Quad(abs(v(i))));
    return m;
}

Quad max_abs(const Column& c) {
    Quad m = 0;
    for (const auto& [g, v] : c) m = std::max(m, Quad(abs(v)));
    return m;
}

// First r pivots of a column-pivoted QR; only the choice is used, so long double suffices.
template <class Mat> std::vector<int> strong_columns(const Mat& A, int r) {
    std::vector<int> out;
    if (r == 0 || A.size() == 0) return out;
    MatD Al(A.rows(), A.cols());
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i) Al(i, j) = static_cast<Ld>(A(i, j));
    Eigen::ColPivHouseholderQR<MatD> cp(Al);
    for (int i = 0; i < r; ++i) out.push_back(cp.colsPermutation().indices()(i));
    return out;
}

EdgeFactor factor_edge(const MultiPatchDomain& dom, const SplineSpace& sp, const EdgeInfo& info,
                       const std::vector<bool>& pinned) {
    EdgeFactor f;
    const auto& e = dom.interfaces[info.edge];
    auto L = edge_layout(dom, e, sp);
    auto er = edge_rows<Quad>(dom, e, sp);
    std::vector<int> keep;
    for (int c = 0; c < er.ncols; ++c)
        if (!pinned[L.cols[c].gid]) {
            f.local[L.cols[c].gid] = static_cast<int>(keep.size());
            keep.push_back(c);
        }
    const int m = static_cast<int>(er.rows.size());
    f.M = MatD::Zero(m, static_cast<int>(keep.size()));
    f.Mq.resize(keep.size());
    for (int i = 0; i < m; ++i) {
        Quad mx = 0;
        for (int c : keep) mx = std::max(mx, Quad(abs(er.rows[i][c])));
        if (mx == 0) mx = 1;
        for (std::size_t j = 0; j < keep.size(); ++j) {
            Quad v = er.rows[i][keep[j]] / mx;
            if (v == 0) continue;
            f.Mq[j].push_back({i, v});
            f.M(i, static_cast<int>(j)) = static_cast<Ld>(v);
        }
    }
    // the exact rank fixes how many interface columns are determined; which ones is chosen numerically
    const int r = static_cast<int>(info.determined.size());
    MatD Mg(m, static_cast<int>(info.gamma.size()));
    for (std::size_t j = 0; j < info.gamma.size(); ++j) Mg.col(static_cast<int>(j)) = f.M.col(f.local.at(info.gamma[j]));
    std::vector<bool> is_det(info.gamma.size(), false);
    for (int j : strong_columns(Mg, r)) is_det[j] = true;
    for (std::size_t j = 0; j < info.gamma.size(); ++j) {
        if (is_det[j]) {
            f.det.push_back(f.local.at(info.gamma[j]));
            f.det_gid.push_back(info.gamma[j]);
        } else {
            f.mds.push_back(info.gamma[j]);
        }
    }
    MatD Md(m, r);
    for (int j = 0; j < r; ++j) Md.col(j) = f.M.col(f.det[j]);
    f.qr.compute(Md);
    MatD tail = MatD::Zero(m, m - r);
    for (int i = 0; i < m - r; ++i) tail(r + i, i) = 1;
    f.left_null = f.qr.householderQ() * tail;
    return f;
}

// Edge function: the given mds column set to 1, the determined interface columns solved.
Column edge_function(const EdgeFactor& f, GlobalId g) {
    Column c{{g, Quad(1)}};
    if (f.det.empty()) return c;
    for (int it = 0; it < kMaxRefine; ++it) {
        VecQ r = f.residual(c);
        if (max_abs(r) <= Quad(1e-30) * max_abs(c)) break;
        VecD dx = f.qr.solve(to_ld(-r));
        for (int j = 0; j < dx.size(); ++j) c[f.det_gid[j]] += Quad(dx(j));
    }
    return c;
}

// Corner-block columns of one vertex (or all of them, merged) with the incident edges.
struct XiGroup {
    std::vector<GlobalId> cols, det, free;
    std::vector<int> edges;
    MatD C;
    Eigen::HouseholderQR<MatD> qr;
};

void factor_group(XiGroup& G, const std::vector<EdgeFactor>& F) {
    std::unordered_map<GlobalId, int> pos;
    for (std::size_t j = 0; j < G.cols.size(); ++j) pos[G.cols[j]] = static_cast<int>(j);
    int m = 0;
    for (int e : G.edges) m += static_cast<int>(F[e].left_null.cols());
    G.C = MatD::Zero(m, static_cast<int>(G.cols.size()));
    int row = 0;
    for (int e : G.edges) {
        const auto& f = F[e];
        // only the group's columns; on interface columns the product vanishes up to rounding
        for (const auto& [g, c] : f.local) {
            auto it = pos.find(g);
            if (it != pos.end())
                G.C.block(row, it->second, f.left_null.cols(), 1) = f.left_null.transpose() * f.M.col(c);
        }
        row += static_cast<int>(f.left_null.cols());
    }
    const int r = static_cast<int>(G.det.size());
    std::vector<bool> is_det(G.cols.size(), false);
    for (int j : strong_columns(G.C, r)) is_det[j] = true;
    G.det.clear();
    G.free.clear();
    for (std::size_t j = 0; j < G.cols.size(); ++j) (is_det[j] ? G.det : G.free).push_back(G.cols[j]);
    MatD Cd(m, r);
    for (int j = 0; j < r; ++j) Cd.col(j) = G.C.col(pos.at(G.det[j]));
    G.qr.compute(Cd);
}

// One free corner-block column set to 1; determined corner-block columns from the stacked
// compatibility conditions, then the determined interface columns edge by edge.
Column group_function(const XiGroup& G, const std::vector<EdgeFactor>& F, GlobalId free) {
    Column c{{free, Quad(1)}};
    for (int it = 0; it < kMaxRefine; ++it) {
        std::vector<VecQ> r;
        Quad rmax = 0;
        for (int e : G.edges) {
            r.push_back(F[e].residual(c));
            rmax = std::max(rmax, max_abs(r.back()));
        }
        if (rmax <= Quad(1e-30) * max_abs(c)) break;
        VecD y(G.C.rows());
        int row = 0;
        for (std::size_t i = 0; i < G.edges.size(); ++i) {
            const auto& f = F[G.edges[i]];
            y.segment(row, f.left_null.cols()) = f.left_null.transpose() * to_ld(r[i]);
            row += static_cast<int>(f.left_null.cols());
        }
        VecD dxi = G.det.empty() ? VecD() : VecD(G.qr.solve(-y));
        for (std::size_t i = 0; i < G.edges.size(); ++i) {
            const auto& f = F[G.edges[i]];
            if (f.det.empty()) continue;
            VecD rhs = to_ld(r[i]);
            for (std::size_t j = 0; j < G.det.size(); ++j) {
                auto lc = f.local.find(G.det[j]);
                if (lc != f.local.end()) rhs += dxi(static_cast<int>(j)) * f.M.col(lc->second);
            }
            VecD dg = f.qr.solve(-rhs);
            for (int j = 0; j < dg.size(); ++j) c[f.det_gid[j]] += Quad(dg(j));
        }
        for (std::size_t j = 0; j < G.det.size(); ++j) c[G.det[j]] += Quad(dxi(static_cast<int>(j)));
    }
    return c;
}

// Same span, new determining set: the rows of largest volume over all touched coefficients
// (corner block and determined interface columns), so that every other entry stays O(1).
void reselect_free(std::vector<Column>& fv) {
    if (fv.empty()) return;
    std::map<GlobalId, int> row;
    for (const auto& c : fv)
        for (const auto& [g, v] : c) row.emplace(g, 0);
    int r = 0;
    std::vector<GlobalId> gids;
    for (auto& [g, i] : row) i = r++, gids.push_back(g);
    const int nf = static_cast<int>(fv.size());
    MatQ V = MatQ::Zero(r, nf);
    for (int j = 0; j < nf; ++j)
        for (const auto& [g, v] : fv[j]) V(row.at(g), j) += v;
    auto piv = strong_columns(MatQ(V.transpose()), nf);
    MatQ S(nf, nf);
    for (int i = 0; i < nf; ++i) S.row(i) = V.row(piv[i]);
    MatQ W = S.transpose().partialPivLu().solve(MatQ(V.transpose())).transpose(); // V S^{-1}
    for (int j = 0; j < nf; ++j) {
        fv[j].clear();
        fv[j][gids[piv[j]]] = Quad(1);
        for (int i = 0; i < r; ++i)
            if (i != piv[j] && W(i, j) != 0) fv[j][gids[i]] = W(i, j);
    }
}

} // namespace

IsogeometricBasis build_basis(const MultiPatchDomain& dom, int d, int L, const BasisOptions& opt) {
    SplineSpace sp(d, (1 << L) - 1);
    AnalysisOptions ao;
    ao.bc = opt.bc;
    ao.closed_forms = false;
    ao.threads = opt.threads;
    auto an = analyze_space(dom, sp, ao);
    auto B = build_basis(dom, sp, an, opt);
    B.L = L;
    return B;
}

IsogeometricBasis build_basis(const MultiPatchDomain& dom, const SplineSpace& sp, const SpaceAnalysis& an,
                              const BasisOptions& opt) {
    IsogeometricBasis out;
    out.d = sp.d;
    out.k = sp.k;
    out.n = sp.n;
    out.num_patches = dom.num_patches();
    out.bc = opt.bc;
    int kk = sp.k + 1, L = 0;
    while (kk > 1) kk >>= 1, ++L;
    out.L = L;
    const long long N = static_cast<long long>(dom.num_patches()) * sp.n * sp.n;
    auto pinned = pinned_mask(dom, sp, opt.bc);

    const int E = static_cast<int>(an.edges.size());
    std::vector<EdgeFactor> F(E);
    parallel_for(E, opt.threads, [&](int i) { F[i] = factor_edge(dom, sp, an.edges[i], pinned); });

    std::vector<Column> cols;
    auto push = [&](Column c, Tag t, int owner) {
        cols.push_back(std::move(c));
        out.tags.push_back(t);
        out.owner.push_back(owner);
    };

    for (const auto& p : an.patches)
        for (GlobalId g : p.cols) push({{g, Quad(1)}}, Tag::patch, p.patch);

    for (int e = 0; e < E; ++e) {
        const auto& mds = F[e].mds;
        std::vector<Column> fe(mds.size());
        parallel_for(static_cast<int>(mds.size()), opt.threads, [&](int i) { fe[i] = edge_function(F[e], mds[i]); });
        for (auto& c : fe) push(std::move(c), Tag::edge, an.edges[e].edge);
    }

    std::vector<XiGroup> groups;
    std::vector<int> group_owner;
    if (an.merged || !an.split_valid) {
        XiGroup G;
        G.cols = an.xi_all;
        G.det = an.xi_determined;
        G.free = an.xi_free;
        for (int e = 0; e < E; ++e) G.edges.push_back(e);
        groups.push_back(std::move(G));
        group_owner.push_back(-1);
    } else {
        for (const auto& v : an.vertices) {
            XiGroup G;
            G.cols = v.xi;
            G.det = v.determined;
            G.free = v.free;
            for (int e = 0; e < E; ++e)
                if (an.edges[e].a == v.vertex || an.edges[e].b == v.vertex) G.edges.push_back(e);
            groups.push_back(std::move(G));
            group_owner.push_back(v.vertex);
        }
    }
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        auto& G = groups[gi];
        factor_group(G, F);
        std::vector<Column> fv(G.free.size());
        parallel_for(static_cast<int>(G.free.size()), opt.threads,
                     [&](int i) { fv[i] = group_function(G, F, G.free[i]); });
        reselect_free(fv);
        Tag t = group_owner[gi] < 0 ? Tag::merged : Tag::vertex;
        for (auto& c : fv) push(std::move(c), t, group_owner[gi]);
    }

    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        Quad mx = max_abs(cols[j]);
        for (const auto& [g, v] : cols[j])
            if (abs(v) > Quad(1e-17) * mx)
                trip.emplace_back(static_cast<int>(g), static_cast<int>(j), static_cast<double>(v / mx));
    }
    out.B.resize(static_cast<int>(N), static_cast<int>(cols.size()));
    out.B.setFromTriplets(trip.begin(), trip.end());
    return out;
}

std::vector<double> evaluate_member(const IsogeometricBasis& basis, const SplineSpace& sp, int f, int l, double x,
                                    double y, int max_deriv) {
    const int nn = sp.n * sp.n;
    std::vector<double> c(nn, 0.0);
    for (Eigen::SparseMatrix<double>::InnerIterator it(basis.B, f); it; ++it) {
        const auto r = it.row();
        if (r / nn == l) c[r % nn] = it.value();
    }
    return eval_field(sp, c.data(), x, y, max_deriv);
}

double basis_residual(const IsogeometricBasis& basis, const ConstraintSystem& sys) {
    Eigen::SparseMatrix<double> R = sys.T * basis.B;
    double mx = 0;
    for (int k = 0; k < R.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(R, k); it; ++it) mx = std::max(mx, std::abs(it.value()));
    return mx;
}

void export_basis_csv(const IsogeometricBasis& basis, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "function,tag,owner,patch,i1,i2,value\n" << std::setprecision(16);
    for (int f = 0; f < basis.B.cols(); ++f)
        for (Eigen::SparseMatrix<double>::InnerIterator it(basis.B, f); it; ++it) {
            auto gi = split_id(it.row(), basis.n);
            out << f << ',' << tag_name(basis.tags[f]) << ',' << basis.owner[f] << ',' << gi.patch << ',' << gi.i1
                << ',' << gi.i2 << ',' << it.value() << '\n';
        }
}

std::string basis_header_json(const IsogeometricBasis& basis) {
    nlohmann::json j;
    j["d"] = basis.d;
    j["k"] = basis.k;
    j["L"] = basis.L;
    j["n"] = basis.n;
    j["patches"] = basis.num_patches;
    j["bc"] = basis.bc == BoundaryCondition::order2 ? "order2" : "none";
    j["functions"] = basis.size();
    j["patch"] = basis.count(Tag::patch);
    j["edge"] = basis.count(Tag::edge);
    j["vertex"] = basis.count(Tag::vertex);
    j["merged"] = basis.count(Tag::merged);
    return j.dump(2);
}

} // namespace g2patch
