#include "sewprop/linalg.hpp"

namespace sewprop {

LinearSolution solve_linear(Matrix a, std::vector<Scalar> b)
{
    const std::size_t rows = a.size();
    if (b.size() != rows) throw MathError("right-hand side has the wrong length");
    const std::size_t cols = rows ? a.front().size() : 0;
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        std::swap(b[p], b[r]);
        const Scalar inv = a[r][c].inverse();
        for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
        b[r] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            const Scalar f = a[i][c];
            for (std::size_t j = c; j < cols; ++j)
                if (!a[r][j].is_zero()) a[i][j] -= f * a[r][j];
            b[i] -= f * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (!b[i].is_zero()) return {LinearSolution::Status::inconsistent, {}};
    std::vector<Scalar> x(cols, Scalar(0));
    for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
    return {r == cols ? LinearSolution::Status::unique : LinearSolution::Status::underdetermined, x};
}

Matrix invert(const Matrix& a)
{
    const std::size_t n = a.size();
    Matrix out(n, std::vector<Scalar>(n));
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<Scalar> e(n, Scalar(0));
        e[c] = Scalar(1);
        LinearSolution s = solve_linear(a, e);
        if (s.status != LinearSolution::Status::unique) throw MathError("matrix is singular");
        for (std::size_t r = 0; r < n; ++r) out[r][c] = s.x[r];
    }
    return out;
}

Matrix multiply(const Matrix& a, const Matrix& b)
{
    const std::size_t n = a.size(), inner = b.size(), m = inner ? b.front().size() : 0;
    Matrix out(n, std::vector<Scalar>(m, Scalar(0)));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != inner) throw MathError("matrix shapes do not match");
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    }
    return out;
}

}  // namespace sewprop
