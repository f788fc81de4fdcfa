/**
 * Joint distinguishability and co-cloneability as exact feasibility
 * decisions, plus the direct cloning-map construction from a distinguishing
 * observable.  The two decisions must always agree (cloneable iff jointly
 * distinguishable, for any choice of tensor product), and whenever they are
 * feasible the convex hull of the states is a simplex.
 */

#pragma once

#include "gptk/tensor.hpp"

namespace gptk {

struct DistinguishingObservable {
    /** (a_0, a_1, ..., a_n); a_0 absorbs the slack, alpha_i(a_j) = delta_ij for i,j >= 1. */
    Observable observable;
    std::vector<Vec> target_states;
};

struct DistinguishResult {
    bool feasible = false;
    DistinguishingObservable witness;
    Vec certificate;  // Farkas multipliers over the feasibility system
};

/**
 * Searches for an observable (a_0, ..., a_n) with alpha_i(a_j) = delta_ij.
 * The unknowns are the effects a_1..a_n; a_0 is defined as u minus their sum
 * and constrained nonnegative.  Distinct states are required.
 */
DistinguishResult find_distinguishing_observable(const std::vector<Vec>& states,
                                                 const StateSpace& s);

/**
 * The measure-and-prepare cloning map omega -> sum_i a_i(omega) alpha_i x alpha_i,
 * with alpha_0 chosen by the caller.  Clones every target state exactly and
 * lands in the minimal tensor product.
 */
AffineMap cloning_map_from_observable(const DistinguishingObservable& d, const StateSpace& s,
                                      const Vec& alpha0, const TensorSpace& t);

struct CloneResult {
    bool feasible = false;
    AffineMap map;
    Vec certificate;
};

/**
 * Decides whether one affine map into the tensor square clones all the given
 * states, by exact feasibility over the unknown map.
 */
CloneResult find_cloning_map(const std::vector<Vec>& states, const StateSpace& s,
                             const TensorSpace& t);

struct TheoremOneReport {
    bool distinguishable = false;
    bool cloneable = false;
    bool decisions_agree = false;
    bool hull_is_simplex = false;  // checked only when feasible
    DistinguishResult distinguish;
    CloneResult clone;
};

/**
 * Runs both decisions and checks their agreement; on the feasible side also
 * checks that the hull of the states is a simplex.  Disagreement raises
 * internal_error.
 */
TheoremOneReport verify_cocloneable_iff_distinguishable(const std::vector<Vec>& states,
                                                        const StateSpace& s,
                                                        const TensorSpace& t);

}  // namespace gptk
