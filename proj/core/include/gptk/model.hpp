/**
 * States, effects, observables and operations over polytopal state spaces.
 *
 * A state space is a polytope of coordinate vectors together with its order
 * unit, the affine functional that evaluates to 1 on every state.  Affine
 * functionals are represented homogeneously as (linear part, constant); two
 * functionals are the same effect when they agree on the state space, i.e.
 * when they are congruent modulo the annihilator of its affine hull.  The
 * canonical representative of an effect reduces the homogeneous vector
 * against the annihilator's reduced row echelon basis.
 */

#pragma once

#include "gptk/polytope.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gptk {

/** Raised when a theorem-backed internal assertion fails; CLI exit code 3. */
class internal_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/** Raised when an input object violates a model invariant; CLI exit code 2. */
class invalid_model : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AffineFunctional {
    Vec coeffs;
    Rational constant;

    AffineFunctional() = default;
    AffineFunctional(Vec c, Rational k) : coeffs(std::move(c)), constant(std::move(k)) {}

    std::size_t dim() const { return coeffs.size(); }
    Rational operator()(const Vec& x) const { return dot(coeffs, x) + constant; }

    /** (coeffs..., constant), acting on (x, 1). */
    Vec homogeneous() const;
    static AffineFunctional from_homogeneous(const Vec& h);
    static AffineFunctional constant_one(std::size_t dim);
    static AffineFunctional coordinate(std::size_t dim, std::size_t i);
};

AffineFunctional operator+(const AffineFunctional& a, const AffineFunctional& b);
AffineFunctional operator-(const AffineFunctional& a, const AffineFunctional& b);
AffineFunctional operator*(const Rational& c, const AffineFunctional& a);

struct Observable {
    std::vector<AffineFunctional> effects;
};

/**
 * A normalization-preserving affine map between coordinate spaces, stored as
 * the (target_dim+1) x (source_dim+1) matrix acting on homogeneous points.
 * The last output coordinate must equal 1 on every point the map is applied
 * to; apply() checks this exactly.
 */
struct AffineMap {
    std::size_t source_dim = 0;
    std::size_t target_dim = 0;
    Mat hom;

    Vec apply(const Vec& x) const;
    AffineFunctional pull_back_functional(const AffineFunctional& g) const;

    static AffineMap identity(std::size_t d);
    static AffineMap constant(std::size_t source_dim, const Vec& target_point);
    static AffineMap from_hom(std::size_t source_dim, std::size_t target_dim, Mat hom);
};

AffineMap compose(const AffineMap& f, const AffineMap& g);  // f after g
AffineMap average(const AffineMap& f, const AffineMap& g);  // (f + g)/2

struct TestSpace {
    std::vector<std::string> outcomes;
    std::vector<std::vector<std::size_t>> tests;  // indices into outcomes

    void validate() const;
};

class StateSpace {
public:
    StateSpace() = default;

    /**
     * Builds and fully validates a state space: both polytope descriptions
     * are completed, the geometry must be nonempty and the unit must equal 1
     * on every vertex.
     */
    static StateSpace make(Polytope geometry, AffineFunctional unit,
                           std::vector<std::string> coordinate_labels = {},
                           std::optional<TestSpace> provenance = std::nullopt);

    std::size_t dim() const { return geometry_.ambient_dim(); }
    const Polytope& geometry() const { return geometry_; }
    const AffineFunctional& unit() const { return unit_; }
    const std::vector<std::string>& coordinate_labels() const { return labels_; }
    const std::optional<TestSpace>& provenance() const { return provenance_; }

    long affine_dim() const { return affine_dim_; }
    /** Dimension of the space of affine functionals on the state space. */
    std::size_t functional_dim() const { return static_cast<std::size_t>(affine_dim_ + 1); }

    /** Canonical RREF basis of {f : f . (v,1) = 0 on the affine hull}. */
    const std::vector<Vec>& annihilator() const { return annihilator_; }

    /** Canonical representative of a functional's class on this space. */
    Vec reduce_homogeneous(Vec homog) const;
    AffineFunctional canonical_functional(const AffineFunctional& f) const;

    bool functionals_equal(const AffineFunctional& a, const AffineFunctional& b) const;
    bool states_equal(const Vec& a, const Vec& b) const { return a == b; }

    bool is_valid_effect(const AffineFunctional& f) const;
    void require_effect(const AffineFunctional& f, const std::string& what) const;
    void require_observable(const Observable& o, const std::string& what) const;
    void require_state(const Vec& x, const std::string& what) const;

    /** Values of f on the canonical vertex list. */
    Vec vertex_values(const AffineFunctional& f) const;

private:
    Polytope geometry_;
    AffineFunctional unit_;
    std::vector<std::string> labels_;
    std::optional<TestSpace> provenance_;
    long affine_dim_ = -1;
    std::vector<Vec> annihilator_;       // canonical basis
    std::vector<Vec> annihilator_rref_;  // reduced rows, for representative reduction
    std::vector<std::size_t> annihilator_pivots_;
};

/** States assign probabilities summing to 1 over every test. */
StateSpace state_space_from_test_space(const TestSpace& t);

/** Extreme rays of the cone of affine functionals nonnegative on s. */
ConeDesc effect_cone_extreme_rays(const StateSpace& s);

/**
 * A minimal informationally complete observable: exactly dim A(Omega)
 * effects, each in [0, u], summing to u and forming a basis.
 */
Observable minimal_ic_observable(const StateSpace& s);

bool is_informationally_complete(const StateSpace& s, const Observable& f);

/** The map omega -> (F_x(omega))_x into the outcome simplex. */
AffineMap dual_map(const StateSpace& s, const Observable& f);

/** Measure f, then prepare the indicated state: omega -> sum_i f_i(omega) prepared_i. */
AffineMap measure_and_prepare(const StateSpace& source, const Observable& f,
                              const std::vector<Vec>& prepared, const StateSpace& target);

/** Pulls an observable on the target of m back along m. */
Observable pull_back(const AffineMap& m, const Observable& f);

/** Checks that m maps every vertex of source into target and preserves the unit. */
void require_state_preserving(const AffineMap& m, const StateSpace& source,
                              const Polytope& target, const std::string& what);

bool maps_equal_on(const AffineMap& a, const AffineMap& b, const StateSpace& source);

}  // namespace gptk
