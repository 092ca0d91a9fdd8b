#pragma once

#include "g2patch/field.hpp"

#include <algorithm>
#include <vector>

namespace g2patch {

// Dense row-major matrix over an exact field.
template <class F> struct DenseRows {
    int rows = 0, cols = 0;
    std::vector<F> a;

    DenseRows() = default;
    DenseRows(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, F(0)) {}
    F& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const F& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
    F* row(int i) { return a.data() + static_cast<std::size_t>(i) * cols; }
    const F* row(int i) const { return a.data() + static_cast<std::size_t>(i) * cols; }
};

struct EchelonResult {
    std::vector<int> pivots; // pivot columns, increasing
    int rank = 0;
};

// Forward elimination with pivots searched in columns [0, pivot_limit), in column order.
// Afterwards rows [0, rank) carry the pivots and rows [rank, rows) vanish on [0, pivot_limit).
template <class F> EchelonResult echelon(DenseRows<F>& M, int pivot_limit = -1) {
    if (pivot_limit < 0) pivot_limit = M.cols;
    EchelonResult res;
    std::vector<int> last(M.rows, -1);
    for (int i = 0; i < M.rows; ++i)
        for (int j = M.cols - 1; j >= 0; --j)
            if (!is_zero(M(i, j))) {
                last[i] = j;
                break;
            }
    int r = 0;
    for (int c = 0; c < pivot_limit && r < M.rows; ++c) {
        int p = -1;
        for (int i = r; i < M.rows; ++i)
            if (last[i] >= c && !is_zero(M(i, c))) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != r) {
            std::swap_ranges(M.row(p), M.row(p) + M.cols, M.row(r));
            std::swap(last[p], last[r]);
        }
        const F inv = F(1) / M(r, c);
        const F* pr = M.row(r);
        const int lr = last[r];
        for (int i = r + 1; i < M.rows; ++i) {
            if (last[i] < c || is_zero(M(i, c))) continue;
            F f = M(i, c) * inv;
            F* ri = M.row(i);
            for (int j = c; j <= lr; ++j)
                if (!is_zero(pr[j])) ri[j] -= f * pr[j];
            last[i] = std::max(last[i], lr);
            while (last[i] >= 0 && is_zero(ri[last[i]])) --last[i];
        }
        res.pivots.push_back(c);
        ++r;
    }
    res.rank = r;
    return res;
}

template <class F> int rank_of(DenseRows<F> M) { return echelon(M).rank; }

} // namespace g2patch
