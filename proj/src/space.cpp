#include "g2patch/space.hpp"

#include "g2patch/parallel.hpp"
#include "g2patch/vertex.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace g2patch {

int patch_space_dim(int r_gamma, int r_v, int d, int k) {
    const int m = (d - 2) * (k + 1); // n - 3
    switch (r_gamma) {
    case 0: return (m - 3) * (m - 3);
    case 1: return (m - 3) * m;
    case 2: return r_v == 1 ? m * m : m * m - 9;
    case 3: return m * (m + 3);
    case 4: return (m + 3) * (m + 3);
    default: throw std::invalid_argument("patch with more than four boundary sides");
    }
}

int patch_space_dim_bc(int d, int k) {
    const int m = (d - 2) * (k + 1);
    return (m - 3) * (m - 3);
}

int edge_space_dim(int dim_v0, int mu, int k) { return (k + 1) * dim_v0 - 9 * mu - 11 * (k + 2 - mu); }

int two_patch_dim_v0(const MultiPatchDomain& dom, const Interface& e, int d) {
    SplineSpace sp0(d, 0, true);
    auto er = edge_rows<Fp1>(dom, e, sp0);
    DenseRows<Fp1> M(static_cast<int>(er.rows.size()), er.ncols);
    for (int i = 0; i < M.rows; ++i)
        for (int c = 0; c < er.ncols; ++c) M(i, c) = er.rows[i][c];
    return er.ncols - echelon(M).rank;
}

namespace {

template <class F> struct EdgeWork {
    EdgeInfo info;
    std::vector<GlobalId> xi;   // columns of C
    std::vector<int> xi_vertex; // owning vertex per xi column
    DenseRows<F> C;             // independent leftover rows on xi
    std::vector<GlobalId> touched;
};

template <class F>
EdgeWork<F> eliminate_edge(const MultiPatchDomain& dom, const Interface& e, const SplineSpace& sp,
                           const std::vector<bool>& pinned, Sampling smp) {
    EdgeWork<F> w;
    w.info.edge = e.id;
    w.info.a = e.a;
    w.info.b = e.b;
    auto L = edge_layout(dom, e, sp);
    auto er = edge_rows<F>(dom, e, sp, smp);
    std::vector<int> gam, xi;
    for (int c = 0; c < er.ncols; ++c) {
        w.touched.push_back(L.cols[c].gid);
        if (pinned[L.cols[c].gid]) continue;
        (L.cols[c].vertex < 0 ? gam : xi).push_back(c);
    }
    auto by_gid = [&](int a, int b) { return L.cols[a].gid < L.cols[b].gid; };
    std::sort(gam.begin(), gam.end(), by_gid);
    std::sort(xi.begin(), xi.end(), by_gid);
    const int ng = static_cast<int>(gam.size()), nx = static_cast<int>(xi.size());
    DenseRows<F> M(static_cast<int>(er.rows.size()), ng + nx);
    for (int i = 0; i < M.rows; ++i) {
        for (int j = 0; j < ng; ++j) M(i, j) = er.rows[i][gam[j]];
        for (int j = 0; j < nx; ++j) M(i, ng + j) = er.rows[i][xi[j]];
    }
    auto ech = echelon(M, ng);
    std::vector<bool> is_piv(ng, false);
    for (int p : ech.pivots) is_piv[p] = true;
    for (int j = 0; j < ng; ++j) {
        GlobalId g = L.cols[gam[j]].gid;
        w.info.gamma.push_back(g);
        (is_piv[j] ? w.info.determined : w.info.mds).push_back(g);
    }
    w.info.dim = ng - ech.rank;
    for (int c : xi) {
        w.xi.push_back(L.cols[c].gid);
        w.xi_vertex.push_back(L.cols[c].vertex);
    }
    w.info.xi = w.xi;
    DenseRows<F> rest(M.rows - ech.rank, nx);
    for (int i = ech.rank; i < M.rows; ++i)
        for (int j = 0; j < nx; ++j) rest(i - ech.rank, j) = M(i, ng + j);
    auto er2 = echelon(rest);
    w.C = DenseRows<F>(er2.rank, nx);
    for (int i = 0; i < er2.rank; ++i)
        for (int j = 0; j < nx; ++j) w.C(i, j) = rest(i, j);
    return w;
}

// Rank structure of stacked rows restricted to the given sorted column set.
template <class F>
EchelonResult stacked(const std::vector<const EdgeWork<F>*>& parts, const std::vector<GlobalId>& cols) {
    int m = 0;
    for (auto* p : parts) m += p->C.rows;
    DenseRows<F> S(m, static_cast<int>(cols.size()));
    int r = 0;
    for (auto* p : parts) {
        std::vector<int> map(p->xi.size(), -1);
        for (std::size_t j = 0; j < p->xi.size(); ++j) {
            auto it = std::lower_bound(cols.begin(), cols.end(), p->xi[j]);
            if (it != cols.end() && *it == p->xi[j]) map[j] = static_cast<int>(it - cols.begin());
        }
        for (int i = 0; i < p->C.rows; ++i, ++r)
            for (std::size_t j = 0; j < p->xi.size(); ++j)
                if (map[j] >= 0) S(r, map[j]) = p->C(i, static_cast<int>(j));
    }
    return echelon(S);
}

} // namespace

template <class F>
SpaceAnalysis analyze_space_with(const MultiPatchDomain& dom, const SplineSpace& sp, const AnalysisOptions& opt) {
    SpaceAnalysis an;
    an.d = sp.d;
    an.k = sp.k;
    an.n = sp.n;
    an.bc = opt.bc;
    an.merged = !sp.standard();
    const int n = sp.n;
    if (n < 6) throw std::invalid_argument("space too small for corner blocks");
    auto pinned = pinned_mask(dom, sp, opt.bc);

    const int E = static_cast<int>(dom.interfaces.size());
    std::vector<EdgeWork<F>> work(E);
    parallel_for(E, opt.threads, [&](int i) {
        work[i] = eliminate_edge<F>(dom, dom.interfaces[i], sp, pinned, opt.sampling);
    });

    std::vector<bool> touched(pinned.size(), false);
    std::map<GlobalId, int> xi_vertex;
    for (const auto& w : work) {
        for (GlobalId g : w.touched) touched[g] = true;
        for (std::size_t j = 0; j < w.xi.size(); ++j) xi_vertex[w.xi[j]] = w.xi_vertex[j];
        an.edges.push_back(w.info);
        an.edge_dim += w.info.dim;
    }
    for (int l = 0; l < dom.num_patches(); ++l) {
        PatchInfo pi;
        pi.patch = l;
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2) {
                GlobalId g = global_id(l, i1, i2, n);
                if (!touched[g] && !pinned[g]) pi.cols.push_back(g);
            }
        auto ps = patch_sides(dom, l);
        pi.r_gamma = ps.r_gamma;
        pi.r_v = ps.r_v;
        an.patch_dim += static_cast<long long>(pi.cols.size());
        an.patches.push_back(std::move(pi));
    }

    for (const auto& [g, v] : xi_vertex) an.xi_all.push_back(g);
    std::vector<const EdgeWork<F>*> all;
    for (const auto& w : work) all.push_back(&w);
    {
        auto ech = stacked<F>(all, an.xi_all);
        std::vector<bool> piv(an.xi_all.size(), false);
        for (int p : ech.pivots) piv[p] = true;
        for (std::size_t j = 0; j < an.xi_all.size(); ++j)
            (piv[j] ? an.xi_determined : an.xi_free).push_back(an.xi_all[j]);
        an.xi_dim = static_cast<long long>(an.xi_free.size());
    }

    std::set<int> verts;
    for (const auto& [g, v] : xi_vertex) verts.insert(v);
    long long vsum = 0;
    for (int v : verts) {
        VertexInfo vi;
        vi.vertex = v;
        vi.fan = dom.fan_of[v];
        for (const auto& [g, owner] : xi_vertex)
            if (owner == v) vi.xi.push_back(g);
        std::vector<const EdgeWork<F>*> inc;
        for (const auto& w : work)
            if (w.info.a == v || w.info.b == v) inc.push_back(&w);
        auto ech = stacked<F>(inc, vi.xi);
        std::vector<bool> piv(vi.xi.size(), false);
        for (int p : ech.pivots) piv[p] = true;
        for (std::size_t j = 0; j < vi.xi.size(); ++j) (piv[j] ? vi.determined : vi.free).push_back(vi.xi[j]);
        vi.dim = static_cast<int>(vi.free.size());
        vsum += vi.dim;
        an.vertices.push_back(std::move(vi));
    }
    an.vertex_dim = vsum;
    an.split_valid = vsum == an.xi_dim;
    an.total = an.patch_dim + an.edge_dim + an.xi_dim;
    if (!an.merged && !an.split_valid)
        an.notes.push_back("vertex parts sum to " + std::to_string(vsum) + " but the corner-block nullity is " +
                           std::to_string(an.xi_dim));

    if (!opt.closed_forms) {
        an.closed_available = false;
        return an;
    }
    for (auto& pi : an.patches) {
        pi.closed_form = opt.bc == BoundaryCondition::none ? patch_space_dim(pi.r_gamma, pi.r_v, sp.d, sp.k)
                                                           : patch_space_dim_bc(sp.d, sp.k);
        an.closed_patch += pi.closed_form;
        if (pi.closed_form != static_cast<int>(pi.cols.size()))
            an.notes.push_back("patch " + std::to_string(pi.patch) + ": formula " + std::to_string(pi.closed_form) +
                               " vs index count " + std::to_string(pi.cols.size()));
    }
    if (an.merged) {
        an.closed_available = false;
        an.notes.push_back("k < 7-d: edge and vertex parts are reported merged, no closed form");
        return an;
    }
    for (auto& ei : an.edges) {
        const auto& e = dom.interfaces[ei.edge];
        ei.dim_v0 = two_patch_dim_v0(dom, e, sp.d);
        ei.mu = edge_mu(dom, e, sp.k);
        ei.closed_form = edge_space_dim(ei.dim_v0, ei.mu, sp.k);
        an.closed_edge += ei.closed_form;
        int d = sp.d;
        if (ei.dim_v0 != 3 * d && ei.dim_v0 != 3 * d + 2 && ei.dim_v0 != 3 * d + 3)
            an.notes.push_back("edge " + std::to_string(ei.edge) + ": two-patch dimension " +
                               std::to_string(ei.dim_v0) + " outside {3d, 3d+2, 3d+3}");
    }
    for (auto& vi : an.vertices) {
        if (vi.fan < 0) {
            vi.closed_form = vi.dim; // uncounted corner: no formula
            an.closed_available = false;
            continue;
        }
        const auto& f = dom.fans[vi.fan];
        if (opt.bc == BoundaryCondition::order2 && f.boundary) {
            vi.closed_form = 0;
            continue;
        }
        try {
            vi.closed_form = closed_form_vertex_dim(f.valency, f.type, f.boundary);
        } catch (const std::exception& ex) {
            an.closed_available = false;
            an.notes.push_back(ex.what());
            vi.closed_form = -1;
            continue;
        }
        an.closed_vertex += vi.closed_form;
    }
    an.closed_total = an.closed_patch + an.closed_edge + an.closed_vertex;
    return an;
}

template SpaceAnalysis analyze_space_with<Fp1>(const MultiPatchDomain&, const SplineSpace&, const AnalysisOptions&);
template SpaceAnalysis analyze_space_with<Fp2>(const MultiPatchDomain&, const SplineSpace&, const AnalysisOptions&);
template SpaceAnalysis analyze_space_with<Rational>(const MultiPatchDomain&, const SplineSpace&,
                                                    const AnalysisOptions&);

SpaceAnalysis analyze_space(const MultiPatchDomain& dom, const SplineSpace& sp, const AnalysisOptions& opt) {
    return analyze_space_with<Fp1>(dom, sp, opt);
}

} // namespace g2patch
