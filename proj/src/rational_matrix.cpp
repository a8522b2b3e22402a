#include "rational_matrix.hpp"

#include <utility>

namespace rholattice::detail {

RowEchelon row_reduce(RationalMatrix a) {
    RowEchelon out;
    const std::size_t rows = a.size();
    const std::size_t cols = rows == 0 ? 0 : a[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        const Rational inv = 1 / a[r][c];
        for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            const Rational factor = a[i][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= factor * a[r][j];
        }
        out.pivot_cols.push_back(static_cast<int>(c));
        ++r;
    }
    a.resize(r);
    out.rows = std::move(a);
    return out;
}

int rank(const RationalMatrix& a) { return static_cast<int>(row_reduce(a).pivot_cols.size()); }

std::optional<std::vector<Rational>> solve(const RationalMatrix& a, const std::vector<Rational>& b) {
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    RationalMatrix augmented = a;
    for (std::size_t i = 0; i < augmented.size(); ++i) augmented[i].push_back(b[i]);
    RowEchelon ech = row_reduce(std::move(augmented));
    std::vector<Rational> x(cols, 0);
    for (std::size_t i = 0; i < ech.pivot_cols.size(); ++i) {
        const int pc = ech.pivot_cols[i];
        if (static_cast<std::size_t>(pc) == cols) return std::nullopt;
        x[pc] = ech.rows[i][cols];
    }
    return x;
}

std::vector<std::vector<Rational>> null_space(const RationalMatrix& a) {
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    RowEchelon ech = row_reduce(a);
    std::vector<bool> is_pivot(cols, false);
    for (int pc : ech.pivot_cols) is_pivot[pc] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(cols, 0);
        v[free] = 1;
        for (std::size_t i = 0; i < ech.pivot_cols.size(); ++i) v[ech.pivot_cols[i]] = -ech.rows[i][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace rholattice::detail
