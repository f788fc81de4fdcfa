#include "gptk/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace gptk {

Vec Mat::row(std::size_t i) const
{
    return Vec(data.begin() + static_cast<std::ptrdiff_t>(i * cols),
               data.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
}

void Mat::set_row(std::size_t i, const Vec& v)
{
    if (v.size() != cols)
        throw std::invalid_argument("set_row: length mismatch");
    std::copy(v.begin(), v.end(), data.begin() + static_cast<std::ptrdiff_t>(i * cols));
}

Mat Mat::identity(std::size_t n)
{
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.at(i, i) = 1;
    return m;
}

Mat Mat::from_rows(const std::vector<Vec>& rows_in)
{
    if (rows_in.empty())
        return Mat(0, 0);
    Mat m(rows_in.size(), rows_in.front().size());
    for (std::size_t i = 0; i < rows_in.size(); ++i)
        m.set_row(i, rows_in[i]);
    return m;
}

Mat Mat::from_cols(const std::vector<Vec>& cols_in)
{
    if (cols_in.empty())
        return Mat(0, 0);
    Mat m(cols_in.front().size(), cols_in.size());
    for (std::size_t j = 0; j < cols_in.size(); ++j) {
        if (cols_in[j].size() != m.rows)
            throw std::invalid_argument("from_cols: ragged input");
        for (std::size_t i = 0; i < m.rows; ++i)
            m.at(i, j) = cols_in[j][i];
    }
    return m;
}

Mat transpose(const Mat& m)
{
    Mat t(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j)
            t.at(j, i) = m.at(i, j);
    return t;
}

Mat mat_mul(const Mat& a, const Mat& b)
{
    if (a.cols != b.rows)
        throw std::invalid_argument("mat_mul: dimension mismatch");
    Mat c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const Rational& aik = a.at(i, k);
            if (aik == 0)
                continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

Vec mat_vec(const Mat& m, const Vec& x)
{
    if (m.cols != x.size())
        throw std::invalid_argument("mat_vec: dimension mismatch");
    Vec y(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        Rational acc = 0;
        for (std::size_t j = 0; j < m.cols; ++j)
            if (m.at(i, j) != 0)
                acc += m.at(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

Mat mat_add(const Mat& a, const Mat& b)
{
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("mat_add: dimension mismatch");
    Mat c(a.rows, a.cols);
    for (std::size_t i = 0; i < a.data.size(); ++i)
        c.data[i] = a.data[i] + b.data[i];
    return c;
}

Mat mat_scale(const Rational& c, const Mat& m)
{
    Mat r(m.rows, m.cols);
    for (std::size_t i = 0; i < m.data.size(); ++i)
        r.data[i] = c * m.data[i];
    return r;
}

Mat kronecker(const Mat& a, const Mat& b)
{
    Mat k(a.rows * b.rows, a.cols * b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) {
            if (a.at(i, j) == 0)
                continue;
            for (std::size_t p = 0; p < b.rows; ++p)
                for (std::size_t q = 0; q < b.cols; ++q)
                    k.at(i * b.rows + p, j * b.cols + q) = a.at(i, j) * b.at(p, q);
        }
    return k;
}

Vec vec_add(const Vec& a, const Vec& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("vec_add: length mismatch");
    Vec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        c[i] = a[i] + b[i];
    return c;
}

Vec vec_sub(const Vec& a, const Vec& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("vec_sub: length mismatch");
    Vec c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        c[i] = a[i] - b[i];
    return c;
}

Vec vec_scale(const Rational& c, const Vec& v)
{
    Vec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        r[i] = c * v[i];
    return r;
}

Rational dot(const Vec& a, const Vec& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("dot: length mismatch");
    Rational acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0)
            acc += a[i] * b[i];
    return acc;
}

bool is_zero_vec(const Vec& v)
{
    return std::all_of(v.begin(), v.end(), [](const Rational& r) { return r == 0; });
}

int lex_compare(const Vec& a, const Vec& b)
{
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] < b[i]) return -1;
        if (a[i] > b[i]) return 1;
    }
    if (a.size() < b.size()) return -1;
    if (a.size() > b.size()) return 1;
    return 0;
}

Rref rref(const Mat& m)
{
    Rref out;
    out.mat = m;
    Mat& a = out.mat;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < a.cols && pivot_row < a.rows; ++col) {
        std::size_t sel = pivot_row;
        while (sel < a.rows && a.at(sel, col) == 0)
            ++sel;
        if (sel == a.rows)
            continue;
        if (sel != pivot_row)
            for (std::size_t j = 0; j < a.cols; ++j)
                std::swap(a.at(sel, j), a.at(pivot_row, j));
        const Rational inv = Rational(1) / a.at(pivot_row, col);
        for (std::size_t j = col; j < a.cols; ++j)
            a.at(pivot_row, j) *= inv;
        for (std::size_t i = 0; i < a.rows; ++i) {
            if (i == pivot_row || a.at(i, col) == 0)
                continue;
            const Rational f = a.at(i, col);
            for (std::size_t j = col; j < a.cols; ++j)
                a.at(i, j) -= f * a.at(pivot_row, j);
        }
        out.pivot_cols.push_back(col);
        ++pivot_row;
    }
    return out;
}

std::size_t rank(const Mat& m)
{
    return rref(m).rank();
}

Mat inverse(const Mat& m)
{
    if (m.rows != m.cols)
        throw std::domain_error("inverse: not square");
    const std::size_t n = m.rows;
    Mat aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = 1;
    }
    Rref r = rref(aug);
    if (r.rank() < n || r.pivot_cols.back() >= n)
        throw std::domain_error("inverse: singular matrix");
    Mat inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            inv.at(i, j) = r.mat.at(i, n + j);
    return inv;
}

std::vector<Vec> nullspace_basis(const Mat& m)
{
    if (m.cols == 0)
        return {};
    Rref r = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (std::size_t p : r.pivot_cols)
        is_pivot[p] = true;

    std::vector<Vec> basis;
    for (std::size_t f = 0; f < m.cols; ++f) {
        if (is_pivot[f])
            continue;
        Vec v(m.cols, Rational(0));
        v[f] = 1;
        for (std::size_t k = 0; k < r.pivot_cols.size(); ++k)
            v[r.pivot_cols[k]] = -r.mat.at(k, f);
        basis.push_back(canonicalize(v));
    }
    std::sort(basis.begin(), basis.end(),
              [](const Vec& a, const Vec& b) { return lex_compare(a, b) < 0; });
    return basis;
}

AffineSolution solve_affine(const Mat& m, const Vec& b)
{
    if (b.size() != m.rows)
        throw std::invalid_argument("solve_affine: rhs length mismatch");
    Mat aug(m.rows, m.cols + 1);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j)
            aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols) = b[i];
    }
    Rref r = rref(aug);
    AffineSolution sol;
    // A pivot in the augmented column means 0 = 1 somewhere.
    if (!r.pivot_cols.empty() && r.pivot_cols.back() == m.cols)
        return sol;
    sol.consistent = true;
    sol.particular.assign(m.cols, Rational(0));
    for (std::size_t k = 0; k < r.pivot_cols.size(); ++k)
        sol.particular[r.pivot_cols[k]] = r.mat.at(k, m.cols);
    sol.nullspace = nullspace_basis(m);
    return sol;
}

Vec canonicalize(const Vec& v)
{
    for (const Rational& x : v)
        if (x != 0)
            return vec_scale(Rational(1) / x, v);
    throw std::invalid_argument("canonicalize: zero vector");
}

Vec canonicalize_ray(const Vec& v)
{
    for (const Rational& x : v) {
        if (x != 0) {
            Rational s = x < 0 ? -x : x;
            return vec_scale(Rational(1) / s, v);
        }
    }
    throw std::invalid_argument("canonicalize_ray: zero vector");
}

}  // namespace gptk
