/**
 * The set of states broadcast by an affine map into a tensor square.
 *
 * A state is broadcast by B when both marginals of B(rho) equal rho, i.e.
 * rho is a common fixed point of the two marginal maps.  The analysis
 * pipeline symmetrizes B, computes the fixed-point polytope Gamma' of the
 * symmetrized marginal map, finds a distinguishing observable for its
 * vertices, reduces the marginal dynamics to column-stochastic matrices on
 * the simplex Gamma', intersects their fixed-point spaces, and finally cuts
 * the resulting candidate simplex with the fixed-point conditions of the
 * original marginal maps.  The last cut matters: the stochastic reduction
 * sees the dynamics only through the distinguishing effects, which can be
 * blind to a displacement of the marginal images (a constant map onto a
 * product of two distinct states already shows this on a one-dimensional
 * state space), so candidates are re-checked against the defining fixed
 * point equations themselves.
 */

#pragma once

#include "gptk/distinguish.hpp"
#include "gptk/stochastic.hpp"

namespace gptk {

/** The two compositions of B with marginalization; affine self-maps of the factor. */
std::pair<AffineMap, AffineMap> marginal_maps(const AffineMap& B, const TensorSpace& t);

/** B' = (B + swap . B)/2. */
AffineMap symmetrize(const AffineMap& B, const TensorSpace& t);

/** {x in s : A x = x}, with its vertex description completed. */
Polytope fixed_point_polytope(const AffineMap& A, const StateSpace& s);

/**
 * The idempotent compression of s onto the fixed points of A: the projection
 * onto ker(id - A) along range(id - A) within the span of the state space
 * (the algebraic Cesaro limit of the iterate averages).
 */
AffineMap cesaro_compression(const AffineMap& A, const StateSpace& s);

struct BroadcastAnalysis {
    AffineMap input_map;     // B
    AffineMap marginal_1;    // B1
    AffineMap marginal_2;    // B2
    AffineMap symmetrized;   // B'
    AffineMap sym_marginal;  // B'1 = (B1 + B2)/2

    Polytope gamma_prime;                  // fixed points of B'1, a simplex
    DistinguishingObservable distinguishing;  // for Gamma''s vertices
    Observable merged_observable;          // slack effect folded into the first
    AffineMap restriction;                 // r(omega) = sum omega(a_i) alpha_i
    AffineMap compression;                 // Cesaro compression onto Gamma'

    StochasticMatrix m1, m2;               // marginal dynamics on Gamma'
    IntersectionResult intersection;       // common fixed vectors of m1, m2
    Polytope candidate;                    // intersection simplex inside Gamma'
    Polytope gamma;                        // the states actually broadcast by B

    bool embedding_ok = false;  // (P x P) . B maps Gamma' into Gamma' x Gamma'
};

/**
 * Full analysis of the broadcast set of B.  Structural facts that the
 * theory guarantees (Gamma' and Gamma are simplices with jointly
 * distinguishable vertices, the distinguishing system is feasible) are
 * asserted and raise internal_error when violated.
 */
BroadcastAnalysis broadcast_set(const AffineMap& B, const StateSpace& s, const TensorSpace& t);

struct BroadcastFindResult {
    bool feasible = false;
    AffineMap map;
    Vec certificate;
};

/** Searches for one affine map into t that broadcasts every given state. */
BroadcastFindResult find_broadcast_map(const std::vector<Vec>& states, const StateSpace& s,
                                       const TensorSpace& t);

}  // namespace gptk
