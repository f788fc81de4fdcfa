/**
 * Dual-description polytope engine.
 *
 * Everything geometric in the library flows through one primitive: the
 * double description method for polyhedral cones, run exactly over the
 * rationals.  Vertex enumeration homogenizes the H-description and reads
 * extreme rays; facet enumeration computes the extreme rays of the cone of
 * affine functionals nonnegative on the vertex set (whose lineality space
 * is the affine hull's annihilator, i.e. the equality constraints).
 *
 * All outputs are canonical: rays are scaled so the first nonzero entry is
 * +-1 and sorted lexicographically, so identical inputs give byte-identical
 * descriptions on every run and platform.
 */

#pragma once

#include "gptk/linalg.hpp"
#include "gptk/lp.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gptk {

/** normal . x >= offset */
struct HalfSpace {
    Vec normal;
    Rational offset;
    bool operator==(const HalfSpace&) const = default;
};

/** normal . x == offset */
struct Hyperplane {
    Vec normal;
    Rational offset;
    bool operator==(const Hyperplane&) const = default;
};

struct HRep {
    std::vector<HalfSpace> inequalities;
    std::vector<Hyperplane> equalities;
    bool operator==(const HRep&) const = default;
};

/** Extreme rays and lineality of {x : A x >= 0, E x = 0}, both canonical. */
struct DdCone {
    std::vector<Vec> rays;
    std::vector<Vec> lineality;
};

DdCone double_description(const std::vector<Vec>& inequality_normals,
                          const std::vector<Vec>& equality_normals,
                          std::size_t dim);

/** Thrown by vertex enumeration when the described set is unbounded. */
class unbounded_error : public std::runtime_error {
public:
    explicit unbounded_error(Vec witness_ray)
        : std::runtime_error("H-description describes an unbounded set"),
          witness(std::move(witness_ray)) {}
    Vec witness;
};

/**
 * A compact convex polytope with lazily completed V- and H-descriptions.
 *
 * The empty polytope is a first-class value (empty vertex list, no
 * inequalities).  Completion is cached; a constructed Polytope is logically
 * immutable and safe to share across threads.
 */
class Polytope {
public:
    Polytope() = default;

    static Polytope from_vertices(std::size_t ambient, std::vector<Vec> vertices);
    static Polytope from_hrep(std::size_t ambient, HRep hrep);
    static Polytope empty(std::size_t ambient);

    std::size_t ambient_dim() const { return ambient_; }
    bool has_vertices() const;
    bool has_hrep() const;

    /** Canonical vertex list; enumerates from the H-description on demand. */
    const std::vector<Vec>& vertices() const;
    /** Canonical irredundant H-description; computed from vertices on demand. */
    const HRep& hrep() const;

    bool is_empty() const;

    /** Dimension of the affine hull; -1 for the empty polytope. */
    long affine_dim() const;

    /** True iff vertex count equals affine dimension + 1 (empty counts). */
    bool is_simplex() const;

    struct ContainsResult {
        bool inside = false;
        std::vector<std::size_t> tight_inequalities;  // indices into hrep().inequalities
        std::optional<HalfSpace> violated;            // separating functional when outside
    };
    ContainsResult contains(const Vec& point) const;

private:
    struct State;
    std::size_t ambient_ = 0;
    std::shared_ptr<State> state_;
};

/** Completes the facet description of a vertex-described polytope. */
Polytope vrep_to_hrep(const Polytope& p);
/** Completes the vertex description of a facet-described polytope. */
Polytope hrep_to_vrep(const Polytope& p);

/**
 * A pointed description of a polyhedral cone by canonical extreme rays,
 * together with the supporting inequalities it satisfies.
 */
struct ConeDesc {
    std::size_t ambient_dim = 0;
    std::vector<Vec> extreme_rays;
    std::vector<Vec> supporting_inequalities;
};

}  // namespace gptk
