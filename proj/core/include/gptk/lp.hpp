/**
 * Exact rational linear feasibility.
 *
 * This is the decision kernel behind distinguishability, cloneability and
 * broadcastability: everything reduces to "does this finite system of
 * rational linear constraints have a solution?".  The solver is a phase-1
 * simplex with Bland's rule, so it is deterministic, cycle-free and exact.
 * There is no objective support on purpose; nothing here needs one.
 */

#pragma once

#include "gptk/linalg.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace gptk {

enum class Rel { Eq, Ge, Le };

struct LinearConstraint {
    Vec coeffs;
    Rel rel = Rel::Ge;
    Rational rhs;
};

/**
 * Outcome of a feasibility decision.
 *
 * Feasible: `witness` satisfies every constraint exactly.
 *
 * Infeasible: `certificate` holds one multiplier per input constraint with
 *   m_i >= 0 on Ge rows, m_i <= 0 on Le rows, m_i free on Eq rows, such that
 *   sum_i m_i * coeffs_i = 0 and sum_i m_i * rhs_i > 0.  Any point satisfying
 *   the system would give 0 >= that positive number, a contradiction.
 * Both facts are re-verified exactly before the result is returned.
 */
struct LpResult {
    bool feasible = false;
    Vec witness;
    Vec certificate;
};

/**
 * Decides feasibility.  Variables listed in `nonneg` are implicitly
 * constrained to be >= 0 (kept native in the simplex, which is much cheaper
 * than explicit sign rows); with implicit bounds, an infeasibility
 * certificate satisfies sum_i m_i coeffs_ij <= 0 on those variables instead
 * of = 0.
 */
LpResult lp_feasible(const std::vector<LinearConstraint>& constraints, std::size_t num_vars,
                     const std::vector<char>& nonneg = {});

/** Builder so call sites read like the systems they encode. */
class ConstraintSystem {
public:
    explicit ConstraintSystem(std::size_t num_vars) : num_vars_(num_vars) {}

    void add(Vec coeffs, Rel rel, Rational rhs);
    void add_eq(Vec coeffs, Rational rhs) { add(std::move(coeffs), Rel::Eq, std::move(rhs)); }
    void add_ge(Vec coeffs, Rational rhs) { add(std::move(coeffs), Rel::Ge, std::move(rhs)); }
    void add_le(Vec coeffs, Rational rhs) { add(std::move(coeffs), Rel::Le, std::move(rhs)); }

    /** Declares x_j >= 0 implicitly. */
    void mark_nonnegative(std::size_t j);

    std::size_t num_vars() const { return num_vars_; }
    const std::vector<LinearConstraint>& constraints() const { return constraints_; }

    LpResult solve() const { return lp_feasible(constraints_, num_vars_, nonneg_); }

private:
    std::size_t num_vars_;
    std::vector<LinearConstraint> constraints_;
    std::vector<char> nonneg_;
};

}  // namespace gptk
