/**
 * Dense exact linear algebra: vectors and matrices of rationals, Gaussian
 * elimination, canonical nullspaces and affine solving.
 *
 * Conventions used throughout the library:
 *   - nullspace bases follow the reduced row-echelon pivot convention (one
 *     basis vector per free column, free columns in increasing order);
 *   - canonicalize() scales a vector so its first nonzero entry is 1, which
 *     is how lines and directions are deduplicated deterministically.
 */

#pragma once

#include "gptk/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace gptk {

using Vec = std::vector<Rational>;

struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Rational> data;  // row-major

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    Rational& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    Vec row(std::size_t i) const;
    void set_row(std::size_t i, const Vec& v);

    static Mat identity(std::size_t n);
    static Mat from_rows(const std::vector<Vec>& rows_in);
    static Mat from_cols(const std::vector<Vec>& cols_in);

    bool operator==(const Mat& o) const = default;
};

Mat transpose(const Mat& m);
Mat mat_mul(const Mat& a, const Mat& b);
Vec mat_vec(const Mat& m, const Vec& x);
Mat mat_add(const Mat& a, const Mat& b);
Mat mat_scale(const Rational& c, const Mat& m);

/** Kronecker product; row-major pairing with `a` as the outer index. */
Mat kronecker(const Mat& a, const Mat& b);

Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_scale(const Rational& c, const Vec& v);
Rational dot(const Vec& a, const Vec& b);
bool is_zero_vec(const Vec& v);

/** Lexicographic comparison; total order used for all canonical sorts. */
int lex_compare(const Vec& a, const Vec& b);

/**
 * Result of in-place Gauss-Jordan elimination: the reduced row echelon form
 * together with its pivot columns.
 */
struct Rref {
    Mat mat;
    std::vector<std::size_t> pivot_cols;
    std::size_t rank() const { return pivot_cols.size(); }
};

Rref rref(const Mat& m);

std::size_t rank(const Mat& m);

/** Inverse of a square nonsingular matrix; throws std::domain_error if singular. */
Mat inverse(const Mat& m);

/**
 * Canonical basis of {x : m x = 0}.
 *
 * One vector per free column of rref(m), free columns ascending; the vector
 * for free column f has x_f = 1.  Empty exactly when m is injective.
 */
std::vector<Vec> nullspace_basis(const Mat& m);

struct AffineSolution {
    bool consistent = false;
    Vec particular;               // a solution with all free variables set to 0
    std::vector<Vec> nullspace;   // canonical basis of the homogeneous system
};

/** Solves m x = b exactly, reporting inconsistency or the full solution set. */
AffineSolution solve_affine(const Mat& m, const Vec& b);

/**
 * Scales v so its first nonzero entry is 1.  Idempotent and invariant under
 * scaling by positive rationals (and, up to sign conventions, negative ones).
 * Throws std::invalid_argument on the zero vector.
 */
Vec canonicalize(const Vec& v);

/**
 * Scales v by a positive rational so its first nonzero entry is 1 or -1.
 * This is the deduplication map for rays, where orientation matters.
 */
Vec canonicalize_ray(const Vec& v);

}  // namespace gptk
