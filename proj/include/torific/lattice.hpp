#pragma once

#include <torific/numeric.hpp>

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace torific {

struct lattice_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using IVec = std::vector<Int>;
using IMat = std::vector<IVec>;

inline size_t mat_cols(const IMat& a)
{
    if (a.empty()) return 0;
    size_t c = a.front().size();
    for (const auto& row : a)
        if (row.size() != c) throw lattice_error("ragged matrix");
    return c;
}

inline IMat identity_mat(size_t n)
{
    IMat u(n, IVec(n, 0));
    for (size_t i = 0; i < n; ++i) u[i][i] = 1;
    return u;
}

inline IMat mat_mul(const IMat& a, const IMat& b)
{
    size_t n = a.size(), k = mat_cols(a), m = mat_cols(b);
    if (b.size() != k) throw lattice_error("mat_mul: dimension mismatch");
    IMat r(n, IVec(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
        }
    return r;
}

inline IMat mat_transpose(const IMat& a)
{
    size_t n = a.size(), m = mat_cols(a);
    IMat r(m, IVec(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < m; ++j) r[j][i] = a[i][j];
    return r;
}

struct HnfResult {
    IMat h; // row Hermite normal form
    IMat u; // unimodular, u * a == h
    size_t rank = 0;
};

/// Row-style Hermite normal form: pivots positive, entries above a pivot
/// reduced to [0, pivot), zero rows at the bottom.
inline HnfResult hnf_rows(const IMat& a)
{
    HnfResult res;
    res.h = a;
    size_t n = a.size(), m = mat_cols(a);
    res.u = identity_mat(n);
    IMat& h = res.h;
    IMat& u = res.u;
    size_t row = 0;
    for (size_t col = 0; col < m && row < n; ++col) {
        // clear the column below `row` by gcd steps
        while (true) {
            size_t piv = n;
            for (size_t i = row; i < n; ++i)
                if (h[i][col] != 0 && (piv == n || abs(h[i][col]) < abs(h[piv][col]))) piv = i;
            if (piv == n) break;
            std::swap(h[piv], h[row]);
            std::swap(u[piv], u[row]);
            bool cleared = true;
            for (size_t i = row + 1; i < n; ++i) {
                if (h[i][col] == 0) continue;
                Int q = h[i][col] / h[row][col];
                for (size_t j = 0; j < m; ++j) h[i][j] -= q * h[row][j];
                for (size_t j = 0; j < n; ++j) u[i][j] -= q * u[row][j];
                if (h[i][col] != 0) cleared = false;
            }
            if (cleared) break;
        }
        if (h[row][col] == 0) continue;
        if (h[row][col] < 0) {
            for (auto& x : h[row]) x = -x;
            for (auto& x : u[row]) x = -x;
        }
        // reduce entries above the pivot into [0, pivot)
        for (size_t i = 0; i < row; ++i) {
            Int q = h[i][col] / h[row][col];
            if (h[i][col] - q * h[row][col] < 0) q -= 1;
            if (q == 0) continue;
            for (size_t j = 0; j < m; ++j) h[i][j] -= q * h[row][j];
            for (size_t j = 0; j < n; ++j) u[i][j] -= q * u[row][j];
        }
        ++row;
    }
    res.rank = row;
    return res;
}

struct SnfResult {
    IMat d; // diagonal, d_i | d_{i+1}
    IMat u; // unimodular, u * a * v == d
    IMat v;
    std::vector<Int> divisors; // nonzero diagonal entries
};

inline SnfResult snf(const IMat& a)
{
    SnfResult res;
    res.d = a;
    size_t n = a.size(), m = mat_cols(a);
    res.u = identity_mat(n);
    res.v = identity_mat(m);
    IMat& d = res.d;
    IMat& u = res.u;
    IMat& v = res.v;

    auto col_op = [&](size_t dst, size_t src, const Int& q) {
        for (size_t i = 0; i < n; ++i) d[i][dst] -= q * d[i][src];
        for (size_t i = 0; i < m; ++i) v[i][dst] -= q * v[i][src];
    };
    auto row_op = [&](size_t dst, size_t src, const Int& q) {
        for (size_t j = 0; j < m; ++j) d[dst][j] -= q * d[src][j];
        for (size_t j = 0; j < n; ++j) u[dst][j] -= q * u[src][j];
    };

    size_t t = 0;
    while (t < n && t < m) {
        // find a nonzero pivot with minimal absolute value in the trailing block
        size_t pi = n, pj = m;
        for (size_t i = t; i < n; ++i)
            for (size_t j = t; j < m; ++j)
                if (d[i][j] != 0 && (pi == n || abs(d[i][j]) < abs(d[pi][pj]))) {
                    pi = i;
                    pj = j;
                }
        if (pi == n) break;
        std::swap(d[pi], d[t]);
        std::swap(u[pi], u[t]);
        if (pj != t) {
            for (size_t i = 0; i < n; ++i) std::swap(d[i][pj], d[i][t]);
            for (size_t i = 0; i < m; ++i) std::swap(v[i][pj], v[i][t]);
        }
        bool dirty = false;
        for (size_t i = t + 1; i < n; ++i) {
            if (d[i][t] == 0) continue;
            Int q = d[i][t] / d[t][t];
            row_op(i, t, q);
            if (d[i][t] != 0) dirty = true;
        }
        for (size_t j = t + 1; j < m; ++j) {
            if (d[t][j] == 0) continue;
            Int q = d[t][j] / d[t][t];
            col_op(j, t, q);
            if (d[t][j] != 0) dirty = true;
        }
        if (dirty) continue; // pivot shrank; repeat at the same t
        // enforce divisibility d[t][t] | d[i][j]
        bool fixed = false;
        for (size_t i = t + 1; i < n && !fixed; ++i)
            for (size_t j = t + 1; j < m && !fixed; ++j)
                if (d[i][j] % d[t][t] != 0) {
                    // add row i to row t, then restart elimination at t
                    row_op(t, i, Int(-1));
                    fixed = true;
                }
        if (fixed) continue;
        if (d[t][t] < 0) {
            for (size_t j = 0; j < m; ++j) d[t][j] = -d[t][j];
            for (size_t j = 0; j < n; ++j) u[t][j] = -u[t][j];
        }
        ++t;
    }
    for (size_t i = 0; i < std::min(n, m); ++i)
        if (d[i][i] != 0) res.divisors.push_back(d[i][i]);
    return res;
}

/// Determinant by fraction-free (Bareiss) elimination.
inline Int mat_det(IMat a)
{
    size_t n = a.size();
    if (n == 0) return 1;
    if (mat_cols(a) != n) throw lattice_error("mat_det: not square");
    Int prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            size_t s = k + 1;
            while (s < n && a[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(a[k], a[s]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

/// Basis (as rows) of the left kernel { x : x * a == 0 } over Z.
inline IMat left_kernel(const IMat& a)
{
    HnfResult r = hnf_rows(a);
    IMat ker;
    for (size_t i = r.rank; i < a.size(); ++i) ker.push_back(r.u[i]);
    // canonical form for reproducibility
    if (!ker.empty()) ker = hnf_rows(ker).h;
    while (!ker.empty() &&
           std::all_of(ker.back().begin(), ker.back().end(), [](const Int& x) { return x == 0; }))
        ker.pop_back();
    return ker;
}

/// Canonical basis of the row span: HNF with zero rows removed.
inline IMat row_span_basis(const IMat& a)
{
    if (a.empty()) return {};
    HnfResult r = hnf_rows(a);
    IMat b(r.h.begin(), r.h.begin() + r.rank);
    return b;
}

inline bool span_equal(const IMat& a, const IMat& b)
{
    return row_span_basis(a) == row_span_basis(b);
}

inline bool in_row_span(const IVec& x, const IMat& a)
{
    IMat ext = a;
    ext.push_back(x);
    return row_span_basis(ext) == row_span_basis(a);
}

/// Inverse of a unimodular integer matrix (|det| == 1).
inline IMat unimodular_inverse(const IMat& a)
{
    size_t n = a.size();
    if (mat_cols(a) != n) throw lattice_error("unimodular_inverse: not square");
    HnfResult r = hnf_rows(a);
    if (r.rank != n) throw lattice_error("unimodular_inverse: singular");
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (r.h[i][j] != Int(i == j ? 1 : 0))
                throw lattice_error("unimodular_inverse: matrix is not unimodular");
    return r.u;
}

/// Basis of L cap { x : x_j == 0 for j not in keep }, where L is the row span
/// of `basis`. Combinations killing the dropped coordinates come from the
/// left kernel of the dropped-column submatrix.
inline IMat intersect_coordinate_sublattice(const IMat& basis, const std::vector<size_t>& keep)
{
    size_t m = mat_cols(basis);
    std::vector<bool> kept(m, false);
    for (size_t j : keep) {
        if (j >= m) throw lattice_error("intersect_coordinate_sublattice: index out of range");
        kept[j] = true;
    }
    IMat dropped;
    for (const auto& row : basis) {
        IVec r;
        for (size_t j = 0; j < m; ++j)
            if (!kept[j]) r.push_back(row[j]);
        dropped.push_back(std::move(r));
    }
    IMat combos = dropped.empty() || dropped.front().empty()
                      ? identity_mat(basis.size())
                      : left_kernel(dropped);
    if (combos.empty()) return {};
    return row_span_basis(mat_mul(combos, basis));
}

} // namespace torific
