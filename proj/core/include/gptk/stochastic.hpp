/**
 * Fixed-point structure of column-stochastic matrices: communicating
 * classes, closed classes and their stationary vectors, disjointly supported
 * fixed-point bases, and the intersection of two fixed-point spaces via
 * zero-propagation and ratio constraints.
 *
 * Directionality convention: the transition graph has an edge i -> j exactly
 * when M[i][j] != 0, and "i has access to j" means a directed path from i to
 * j; probability flows from j to i along such an edge.
 */

#pragma once

#include "gptk/model.hpp"

#include <vector>

namespace gptk {

struct StochasticMatrix {
    Mat m;  // n x n, columns sum to 1, entries >= 0

    std::size_t size() const { return m.rows; }
    /** Validates nonnegativity and exact unit column sums. */
    static StochasticMatrix make(Mat m);
};

struct ClassStructure {
    /** Communicating classes: sorted index sets, ordered by smallest member. */
    std::vector<std::vector<std::size_t>> classes;
    std::vector<bool> closed;
    /** access[a][b]: class a has access to class b (reflexive). */
    std::vector<std::vector<bool>> access;
};

ClassStructure communicating_classes(const StochasticMatrix& M);

/**
 * The unique normalized strictly positive fixed vector of M restricted to a
 * closed irreducible class, embedded into the full index space.
 * Throws invalid_model if the class is not closed or not irreducible.
 */
Vec stationary_distribution(const StochasticMatrix& M, const std::vector<std::size_t>& cls);

struct FixedBasis {
    std::vector<Vec> vectors;  // normalized, disjointly supported, M v = v
    std::vector<std::vector<std::size_t>> supports;
};

/** One stationary vector per closed class; spans ker(M - id) exactly. */
FixedBasis fixed_point_basis(const StochasticMatrix& M);

struct IntersectionResult {
    std::vector<Vec> basis;  // normalized, disjointly supported, fixed by both
    std::vector<std::vector<std::size_t>> supports;

    struct BetaEntry {
        std::size_t class_1 = 0;  // index into fixed1.vectors
        std::size_t class_2 = 0;  // index into fixed2.vectors
        Rational value;           // v / w ratio on the overlap
    };
    struct GammaEntry {
        std::size_t from = 0, to = 0;  // lambda_to / lambda_from, classes of matrix 1
        Rational value;
    };
    std::vector<BetaEntry> beta;
    std::vector<GammaEntry> gamma;
    std::vector<std::size_t> zeroed;  // indices carrying no common fixed point

    FixedBasis fixed1, fixed2;
};

/**
 * Basis of ker(M1 - id) /\ ker(M2 - id) made of disjointly supported
 * normalized nonnegative vectors; the simplex they generate is exactly the
 * set of common fixed states.  Verified internally against the direct
 * nullspace of the stacked system.
 */
IntersectionResult intersect_fixed_spaces(const StochasticMatrix& M1, const StochasticMatrix& M2);

}  // namespace gptk
