/**
 * Maximal and minimal tensor products of polytopal state spaces.
 *
 * A composite state is a multilinear functional on the factors' effect
 * spaces.  Its coordinates form a grid indexed by one homogeneous slot per
 * factor (coordinate functionals plus the unit), flattened row-major, with
 * the all-units slot pinned to 1 and dropped.  Under this convention a
 * product state is literally the flattened outer product of the factors'
 * homogeneous coordinates, marginalization is a coordinate projection, and
 * the swap is a coordinate permutation.
 *
 * The maximal product is cut out by one inequality per pair of extreme
 * effect-cone rays (bilinearity makes positivity on extreme pairs equivalent
 * to positivity on all positive pairs) plus the equalities saying the grid
 * kills each factor's annihilator.  The minimal product is the hull of the
 * product vertices.  Multipartite products iterate the binary construction
 * left-associatively; for the maximal product this equals imposing
 * positivity on tuples of extreme rays, because the composite effect cone is
 * generated by the products of the factors' rays.
 */

#pragma once

#include "gptk/model.hpp"

#include <vector>

namespace gptk {

enum class TensorKind { Maximal, Minimal, Intermediate };

class undefined_conditional : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TensorSpace {
public:
    TensorSpace() = default;

    static TensorSpace max_tensor(const StateSpace& a, const StateSpace& b);
    static TensorSpace min_tensor(const StateSpace& a, const StateSpace& b);
    static TensorSpace max_tensor(std::vector<StateSpace> factors);
    static TensorSpace min_tensor(std::vector<StateSpace> factors);

    /**
     * A user-supplied tensor product: any polytope sandwiched between the
     * minimal and maximal products (validated exactly).
     */
    static TensorSpace intermediate(const StateSpace& a, const StateSpace& b, Polytope geometry);

    TensorKind kind() const { return kind_; }
    const std::vector<StateSpace>& factors() const { return factors_; }
    const Polytope& geometry() const { return geometry_; }
    std::size_t dim() const { return geometry_.ambient_dim(); }
    AffineFunctional unit() const { return AffineFunctional::constant_one(dim()); }

    /** Index of grid slot (I_0, ..., I_{n-1}), I_k in 0..dim_k (last = unit). */
    std::size_t slot(const std::vector<std::size_t>& multi) const;

    /** The full homogeneous grid vector of a state (appends the unit slot). */
    Vec full_grid(const Vec& state) const;

private:
    TensorKind kind_ = TensorKind::Maximal;
    std::vector<StateSpace> factors_;
    Polytope geometry_;
    std::vector<std::size_t> hom_dims_;  // dim_k + 1 per factor
};

/** Outer product of factor states, flattened into grid coordinates. */
Vec product_state(const TensorSpace& t, const std::vector<Vec>& factor_states);
Vec product_state(const TensorSpace& t, const Vec& alpha, const Vec& beta);

/** Both marginals of a bipartite state. */
std::pair<Vec, Vec> marginals(const TensorSpace& t, const Vec& omega);

/** Marginal grid vector onto a subset of factors (indices ascending). */
Vec marginal_onto(const TensorSpace& t, const Vec& omega, const std::vector<std::size_t>& keep);

/** mu(a, b) for a bipartite state. */
Rational evaluate_bilinear(const TensorSpace& t, const Vec& omega,
                           const AffineFunctional& a, const AffineFunctional& b);

/**
 * The conditional state of factor 2 given effect a on factor 1.
 * Throws undefined_conditional when the conditioning probability is 0.
 */
Vec conditional(const TensorSpace& t, const Vec& omega, const AffineFunctional& a);

/** The factor-interchange isomorphism of a tensor square. */
AffineMap swap_map(const TensorSpace& t);
Vec swap_state(const TensorSpace& t, const Vec& omega);

struct SeparabilityResult {
    bool entangled = false;
    /** Convex weights over t_min's canonical vertex list when separable. */
    Vec decomposition;
    /** A functional <= 0 on every separable state but positive at omega. */
    AffineFunctional separating;
};

/** Decides separability with an exact certificate either way. */
SeparabilityResult is_entangled(const TensorSpace& t_min, const Vec& omega);

struct PureMarginalReport {
    struct Entry {
        std::size_t vertex_index = 0;
        bool marginal1_pure = false;
        bool marginal2_pure = false;
        bool applicable = false;   // some marginal is pure
        bool product_equal = false;
    };
    std::vector<Entry> entries;
    std::size_t violations = 0;
    std::size_t applicable_count = 0;
};

/**
 * Sweeps every vertex of a bipartite product: a vertex with a pure marginal
 * must equal the product of its marginals.
 */
PureMarginalReport check_pure_marginal_lemma(const TensorSpace& t);

bool state_spaces_identical(const StateSpace& a, const StateSpace& b);

}  // namespace gptk
