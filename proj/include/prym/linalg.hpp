#pragma once
#include <vector>
#include "prym/domain.hpp"

namespace prym {

// Dense matrix over a field domain; row-major.
template <class T>
struct matrix {
    size_t nr = 0, nc = 0;
    std::vector<T> a;
    T zr;

    matrix(size_t r, size_t c, const T& sample)
        : nr(r), nc(c), a(r * c, dom<T>::zero(sample)), zr(dom<T>::zero(sample)) {}
    T& at(size_t i, size_t j) { return a[i * nc + j]; }
    const T& at(size_t i, size_t j) const { return a[i * nc + j]; }
};

// In-place reduced row echelon form; returns pivot columns.
template <class T>
std::vector<size_t> rref(matrix<T>& m) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < m.nc && row < m.nr; ++col) {
        size_t sel = row;
        while (sel < m.nr && dom<T>::is_zero(m.at(sel, col))) ++sel;
        if (sel == m.nr) continue;
        for (size_t j = 0; j < m.nc; ++j) std::swap(m.a[sel * m.nc + j], m.a[row * m.nc + j]);
        T iv = dom<T>::inv(m.at(row, col));
        for (size_t j = col; j < m.nc; ++j) m.at(row, j) = m.at(row, j) * iv;
        for (size_t i = 0; i < m.nr; ++i) {
            if (i == row || dom<T>::is_zero(m.at(i, col))) continue;
            T f = m.at(i, col);
            for (size_t j = col; j < m.nc; ++j) m.at(i, j) = m.at(i, j) - f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class T>
size_t rank(matrix<T> m) {
    return rref(m).size();
}

// Basis of the right kernel {x : M x = 0}.
template <class T>
std::vector<std::vector<T>> kernel_basis(matrix<T> m) {
    auto piv = rref(m);
    std::vector<bool> is_piv(m.nc, false);
    for (size_t c : piv) is_piv[c] = true;
    std::vector<std::vector<T>> basis;
    T one = dom<T>::one(m.zr);
    for (size_t freec = 0; freec < m.nc; ++freec) {
        if (is_piv[freec]) continue;
        std::vector<T> v(m.nc, m.zr);
        v[freec] = one;
        for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m.at(r, freec);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solve M x = b; empty optional when inconsistent.  Free variables get zero.
template <class T>
std::optional<std::vector<T>> solve_linear(matrix<T> m, const std::vector<T>& b) {
    PRYM_CHECK(b.size() == m.nr, "solve_linear: size mismatch");
    matrix<T> aug(m.nr, m.nc + 1, m.zr);
    for (size_t i = 0; i < m.nr; ++i) {
        for (size_t j = 0; j < m.nc; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.nc) = b[i];
    }
    auto piv = rref(aug);
    for (size_t c : piv)
        if (c == m.nc) return std::nullopt;
    std::vector<T> x(m.nc, m.zr);
    for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug.at(r, m.nc);
    return x;
}

template <class T>
T det(matrix<T> m) {
    PRYM_CHECK(m.nr == m.nc, "det of non-square matrix");
    T d = dom<T>::one(m.zr);
    for (size_t col = 0; col < m.nc; ++col) {
        size_t sel = col;
        while (sel < m.nr && dom<T>::is_zero(m.at(sel, col))) ++sel;
        if (sel == m.nr) return m.zr;
        if (sel != col) {
            for (size_t j = 0; j < m.nc; ++j) std::swap(m.a[sel * m.nc + j], m.a[col * m.nc + j]);
            d = -d;
        }
        d = d * m.at(col, col);
        T iv = dom<T>::inv(m.at(col, col));
        for (size_t i = col + 1; i < m.nr; ++i) {
            if (dom<T>::is_zero(m.at(i, col))) continue;
            T f = m.at(i, col) * iv;
            for (size_t j = col; j < m.nc; ++j) m.at(i, j) = m.at(i, j) - f * m.at(col, j);
        }
    }
    return d;
}

}  // namespace prym
