#include "gptk/distinguish.hpp"

#include "map_feasibility.hpp"

#include <algorithm>
#include <set>

namespace gptk {

using detail::MapFeasibility;
using detail::homog_point;

namespace {

void require_distinct(const std::vector<Vec>& states)
{
    std::set<Vec> seen;
    for (const Vec& s : states)
        if (!seen.insert(s).second)
            throw invalid_model("duplicate states in the input list");
}

}  // namespace

DistinguishResult find_distinguishing_observable(const std::vector<Vec>& states,
                                                 const StateSpace& s)
{
    require_distinct(states);
    for (const Vec& st : states)
        s.require_state(st, "find_distinguishing_observable");

    const std::size_t n = states.size();
    const std::size_t d = s.dim();
    const std::size_t nvars = n * (d + 1);
    auto var = [&](std::size_t j, std::size_t c) { return j * (d + 1) + c; };

    ConstraintSystem sys(nvars);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec ah = homog_point(states[i]);
        for (std::size_t j = 0; j < n; ++j) {
            Vec row(nvars, Rational(0));
            for (std::size_t c = 0; c <= d; ++c)
                row[var(j, c)] = ah[c];
            sys.add_eq(std::move(row), Rational(i == j ? 1 : 0));
        }
    }
    for (const Vec& v : s.geometry().vertices()) {
        const Vec vh = homog_point(v);
        for (std::size_t j = 0; j < n; ++j) {
            Vec row(nvars, Rational(0));
            for (std::size_t c = 0; c <= d; ++c)
                row[var(j, c)] = vh[c];
            sys.add_ge(std::move(row), Rational(0));
        }
        Vec slack(nvars, Rational(0));  // (u - sum_j a_j)(v) >= 0
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t c = 0; c <= d; ++c)
                slack[var(j, c)] -= vh[c];
        sys.add_ge(std::move(slack), Rational(-1));
    }

    LpResult lp = sys.solve();
    DistinguishResult res;
    if (!lp.feasible) {
        res.certificate = lp.certificate;
        return res;
    }

    res.feasible = true;
    res.witness.target_states = states;
    AffineFunctional a0 = AffineFunctional::constant_one(d);
    std::vector<AffineFunctional> rest;
    for (std::size_t j = 0; j < n; ++j) {
        Vec h(d + 1);
        for (std::size_t c = 0; c <= d; ++c)
            h[c] = lp.witness[var(j, c)];
        AffineFunctional aj = AffineFunctional::from_homogeneous(h);
        a0 = a0 - aj;
        rest.push_back(s.canonical_functional(aj));
    }
    res.witness.observable.effects.push_back(s.canonical_functional(a0));
    for (auto& aj : rest)
        res.witness.observable.effects.push_back(std::move(aj));

    s.require_observable(res.witness.observable, "find_distinguishing_observable witness");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (res.witness.observable.effects[j + 1](states[i]) != Rational(i == j ? 1 : 0))
                throw internal_error("distinguishing witness fails the delta conditions");
    return res;
}

AffineMap cloning_map_from_observable(const DistinguishingObservable& d, const StateSpace& s,
                                      const Vec& alpha0, const TensorSpace& t)
{
    s.require_state(alpha0, "cloning_map_from_observable");
    if (t.factors().size() != 2 || !state_spaces_identical(t.factors()[0], t.factors()[1]) ||
        !state_spaces_identical(t.factors()[0], s))
        throw invalid_model("cloning_map_from_observable: target must be a tensor square of the space");

    std::vector<Vec> prepared;
    prepared.push_back(product_state(t, alpha0, alpha0));
    for (const Vec& alpha : d.target_states)
        prepared.push_back(product_state(t, alpha, alpha));
    if (prepared.size() != d.observable.effects.size())
        throw invalid_model("cloning_map_from_observable: observable arity mismatch");

    Mat hom(t.dim() + 1, s.dim() + 1);
    for (std::size_t i = 0; i < prepared.size(); ++i) {
        const Vec ah = d.observable.effects[i].homogeneous();
        for (std::size_t r = 0; r < t.dim(); ++r) {
            if (prepared[i][r] == 0)
                continue;
            for (std::size_t c = 0; c <= s.dim(); ++c)
                hom.at(r, c) += prepared[i][r] * ah[c];
        }
        for (std::size_t c = 0; c <= s.dim(); ++c)
            hom.at(t.dim(), c) += ah[c];
    }
    AffineMap kappa = AffineMap::from_hom(s.dim(), t.dim(), std::move(hom));
    for (const Vec& alpha : d.target_states)
        if (kappa.apply(alpha) != product_state(t, alpha, alpha))
            throw internal_error("constructed cloning map fails to clone a target state");
    return kappa;
}

CloneResult find_cloning_map(const std::vector<Vec>& states, const StateSpace& s,
                             const TensorSpace& t)
{
    require_distinct(states);
    for (const Vec& st : states)
        s.require_state(st, "find_cloning_map");

    if (states.size() == 1) {
        // The constant map onto the self-product clones a lone state, mixed
        // or pure; no search needed.  Product states belong to every tensor
        // product, so the range condition is automatic.
        CloneResult res;
        res.feasible = true;
        res.map = AffineMap::constant(s.dim(), product_state(t, states[0], states[0]));
        auto [m1, m2] = marginals(t, res.map.apply(states[0]));
        if (m1 != states[0] || m2 != states[0])
            throw internal_error("constant cloning map fails its marginal check");
        return res;
    }

    MapFeasibility mf(s, t);
    for (const Vec& alpha : states)
        mf.pin_image(alpha, product_state(t, alpha, alpha));

    LpResult lp = mf.sys.solve();
    CloneResult res;
    if (!lp.feasible) {
        res.certificate = lp.certificate;
        return res;
    }
    res.feasible = true;
    res.map = mf.extract(lp.witness);
    require_state_preserving(res.map, s, t.geometry(), "find_cloning_map witness");
    for (const Vec& alpha : states)
        if (res.map.apply(alpha) != product_state(t, alpha, alpha))
            throw internal_error("cloning witness fails to clone a target state");
    return res;
}

TheoremOneReport verify_cocloneable_iff_distinguishable(const std::vector<Vec>& states,
                                                        const StateSpace& s,
                                                        const TensorSpace& t)
{
    TheoremOneReport rep;
    rep.distinguish = find_distinguishing_observable(states, s);
    rep.clone = find_cloning_map(states, s, t);
    rep.distinguishable = rep.distinguish.feasible;
    rep.cloneable = rep.clone.feasible;
    rep.decisions_agree = rep.distinguishable == rep.cloneable;
    if (!rep.decisions_agree)
        throw internal_error("cloneability and joint distinguishability decisions disagree");
    if (rep.distinguishable) {
        Polytope hull = Polytope::from_vertices(s.dim(), states);
        rep.hull_is_simplex = hull.is_simplex();
        if (!rep.hull_is_simplex)
            throw internal_error("hull of jointly distinguishable states is not a simplex");
    }
    return rep;
}

}  // namespace gptk
