#pragma once

#include <optional>
#include <vector>

#include "qes/fraction.hpp"

namespace qes {

template <class F> using Vec = std::vector<F>;
template <class F> using Matrix = std::vector<std::vector<F>>;

template <class F> struct Echelon {
    Matrix<F> rows;                 // reduced row echelon form, zero rows dropped
    std::vector<std::size_t> pivots; // pivot column of each row
};

namespace detail {
inline bool cheap_pivot(const Rational &) { return true; }
inline bool cheap_pivot(const ParamScalar &v) { return v.is_constant(); }
} // namespace detail

/// Exact Gauss-Jordan elimination. Pivots are searched left to right, so the
/// rightmost columns become free variables first.
template <class F> Echelon<F> rref(Matrix<F> m, std::size_t ncols) {
    Echelon<F> out;
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
        std::optional<std::size_t> pick;
        for (std::size_t r = row; r < m.size(); ++r) {
            if (is_zero(m[r][col])) continue;
            if (!pick) pick = r;
            if (detail::cheap_pivot(m[r][col])) {
                pick = r;
                break;
            }
        }
        if (!pick) continue;
        std::swap(m[row], m[*pick]);
        const F inv = F(1) / m[row][col];
        for (std::size_t c = col; c < ncols; ++c)
            if (!is_zero(m[row][c])) m[row][c] *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || is_zero(m[r][col])) continue;
            const F factor = m[r][col];
            for (std::size_t c = col; c < ncols; ++c)
                if (!is_zero(m[row][c])) m[r][c] -= factor * m[row][c];
        }
        out.pivots.push_back(col);
        ++row;
    }
    m.resize(row);
    out.rows = std::move(m);
    return out;
}

template <class F> std::size_t rank(const Matrix<F> &m, std::size_t ncols) { return rref(m, ncols).pivots.size(); }

/// Basis of {v : m v = 0}, one vector per free column in increasing order.
template <class F> std::vector<Vec<F>> nullspace(const Matrix<F> &m, std::size_t ncols) {
    Echelon<F> e = rref(m, ncols);
    std::vector<bool> is_pivot(ncols, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<Vec<F>> basis;
    for (std::size_t free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        Vec<F> v(ncols, F(0));
        v[free] = F(1);
        for (std::size_t r = 0; r < e.rows.size(); ++r) v[e.pivots[r]] = -e.rows[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Solves m x = b exactly; free variables are set to zero. nullopt if inconsistent.
template <class F> std::optional<Vec<F>> solve(const Matrix<F> &m, const Vec<F> &b, std::size_t ncols) {
    Matrix<F> aug = m;
    for (std::size_t r = 0; r < aug.size(); ++r) aug[r].push_back(b[r]);
    Echelon<F> e = rref(std::move(aug), ncols + 1);
    Vec<F> x(ncols, F(0));
    for (std::size_t r = 0; r < e.rows.size(); ++r) {
        if (e.pivots[r] == ncols) return std::nullopt;
        x[e.pivots[r]] = e.rows[r][ncols];
    }
    return x;
}

template <class F> Matrix<F> multiply(const Matrix<F> &a, const Matrix<F> &b) {
    const std::size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
    Matrix<F> r(n, Vec<F>(m, F(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (is_zero(a[i][t])) continue;
            for (std::size_t j = 0; j < m; ++j)
                if (!is_zero(b[t][j])) r[i][j] += a[i][t] * b[t][j];
        }
    return r;
}

template <class F> F trace(const Matrix<F> &a) {
    F t(0);
    for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
    return t;
}

/// Coefficients c_0..c_n of det(E*I - A) by Faddeev-LeVerrier (characteristic zero).
template <class F> Vec<F> characteristic_coefficients(const Matrix<F> &a) {
    const std::size_t n = a.size();
    Vec<F> c(n + 1, F(0));
    c[n] = F(1);
    Matrix<F> m(n, Vec<F>(n, F(0)));
    for (std::size_t k = 1; k <= n; ++k) {
        Matrix<F> next = multiply(a, m);
        for (std::size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
        m = std::move(next);
        F t = trace(multiply(a, m));
        c[n - k] = -t / F(static_cast<int>(k));
    }
    return c;
}

} // namespace qes
