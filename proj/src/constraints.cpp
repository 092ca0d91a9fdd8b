#include "g2patch/constraints.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace g2patch {

EdgeLayout edge_layout(const MultiPatchDomain& /*dom*/, const Interface& e, const SplineSpace& sp) {
    EdgeLayout L;
    const int n = sp.n;
    L.n = n;
    L.cols.resize(6 * n);
    for (int side = 0; side < 2; ++side) {
        const View& V = side == 0 ? e.vl : e.vr;
        const int patch = side == 0 ? e.l : e.lp;
        for (int layer = 0; layer < 3; ++layer)
            for (int s = 0; s < n; ++s) {
                int j0 = side == 0 ? n - 1 - layer : layer;
                auto own = V.own_index(j0, s, n);
                LocalColumn c;
                c.side = side;
                c.layer = layer;
                c.s = s;
                c.patch = patch;
                c.i1 = own[0];
                c.i2 = own[1];
                c.gid = global_id(patch, own[0], own[1], n);
                c.vertex = s <= 2 ? e.a : (s >= n - 3 ? e.b : -1);
                L.cols[L.local(side, layer, s)] = c;
            }
    }
    return L;
}

std::vector<bool> pinned_mask(const MultiPatchDomain& dom, const SplineSpace& sp, BoundaryCondition bc) {
    const int n = sp.n;
    std::vector<bool> pin(static_cast<std::size_t>(dom.num_patches()) * n * n, false);
    if (bc == BoundaryCondition::none) return pin;
    for (const auto& b : dom.boundary)
        for (int i = 0; i < n; ++i)
            for (int t = 0; t < 3; ++t) {
                int i1 = 0, i2 = 0;
                switch (b.side) {
                case 0: i1 = i, i2 = t; break;
                case 1: i1 = n - 1 - t, i2 = i; break;
                case 2: i1 = i, i2 = n - 1 - t; break;
                default: i1 = t, i2 = i; break;
                }
                pin[global_id(b.patch, i1, i2, n)] = true;
            }
    return pin;
}

ConstraintSystem assemble_T(const MultiPatchDomain& dom, const SplineSpace& sp, BoundaryCondition bc,
                            Sampling smp) {
    ConstraintSystem sys;
    const int n = sp.n;
    sys.ncols = dom.num_patches() * n * n;
    std::vector<Eigen::Triplet<double>> trip;
    int r = 0;
    for (const auto& e : dom.interfaces) {
        auto L = edge_layout(dom, e, sp);
        auto er = edge_rows<long double>(dom, e, sp, smp);
        for (std::size_t i = 0; i < er.rows.size(); ++i) {
            long double mx = 0;
            for (auto v : er.rows[i]) mx = std::max(mx, std::abs(v));
            if (mx == 0) continue;
            for (int c = 0; c < er.ncols; ++c)
                if (er.rows[i][c] != 0)
                    trip.emplace_back(r, static_cast<int>(L.cols[c].gid), static_cast<double>(er.rows[i][c] / mx));
            sys.tags.push_back(er.tags[i]);
            ++r;
        }
    }
    auto pin = pinned_mask(dom, sp, bc);
    for (int c = 0; c < sys.ncols; ++c)
        if (pin[c]) {
            trip.emplace_back(r++, c, 1.0);
            sys.tags.push_back({-1, 3, 0, 0});
        }
    sys.T.resize(r, sys.ncols);
    sys.T.setFromTriplets(trip.begin(), trip.end());
    return sys;
}

void write_matrix_market(const ConstraintSystem& sys, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << sys.T.rows() << ' ' << sys.T.cols() << ' ' << sys.T.nonZeros() << '\n';
    out << std::setprecision(16);
    for (int i = 0; i < sys.T.outerSize(); ++i)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(sys.T, i); it; ++it)
            out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

} // namespace g2patch
