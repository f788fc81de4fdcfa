// Test-side oracles and random-instance generators.  Everything here checks
// library results through an independent route: hull membership goes through
// the LP (not the double description code), fixed spaces through plain
// nullspaces, and random instances are seeded deterministically.

#pragma once

#include "gptk/broadcast.hpp"
#include "gptk/stochastic.hpp"
#include "gptk/zoo.hpp"

#include <random>
#include <vector>

namespace oracles {

using namespace gptk;

using Rng = std::mt19937_64;

inline Rational random_rational(Rng& rng, long lo_num = -2, long hi_num = 2, long max_den = 3)
{
    std::uniform_int_distribution<long> num(lo_num, hi_num);
    std::uniform_int_distribution<long> den(1, max_den);
    return Rational(num(rng), den(rng));
}

/** Membership of x in conv(points), decided by feasibility (not by DD). */
inline bool in_hull(const std::vector<Vec>& points, const Vec& x)
{
    if (points.empty())
        return false;
    const std::size_t d = x.size();
    ConstraintSystem sys(points.size());
    for (std::size_t c = 0; c < d; ++c) {
        Vec row(points.size());
        for (std::size_t i = 0; i < points.size(); ++i)
            row[i] = points[i][c];
        sys.add_eq(std::move(row), x[c]);
    }
    sys.add_eq(Vec(points.size(), Rational(1)), Rational(1));
    for (std::size_t i = 0; i < points.size(); ++i)
        sys.mark_nonnegative(i);
    return sys.solve().feasible;
}

/** Extreme points of a finite point set, via hull-membership LPs. */
inline std::vector<Vec> extreme_points(const std::vector<Vec>& points)
{
    std::vector<Vec> out;
    for (std::size_t k = 0; k < points.size(); ++k) {
        std::vector<Vec> others;
        for (std::size_t i = 0; i < points.size(); ++i)
            if (i != k)
                others.push_back(points[i]);
        if (!in_hull(others, points[k]))
            out.push_back(points[k]);
    }
    return out;
}

/**
 * A random full-dimensional state space in R^3 with at most max_verts
 * vertices and the constant-1 unit.
 */
inline StateSpace random_state_space_3d(Rng& rng, std::size_t max_verts = 6)
{
    for (;;) {
        std::uniform_int_distribution<std::size_t> count(4, max_verts);
        const std::size_t k = count(rng);
        std::vector<Vec> pts;
        for (std::size_t i = 0; i < k; ++i) {
            Vec p(3);
            for (auto& c : p)
                c = random_rational(rng, -2, 2, 3);
            pts.push_back(std::move(p));
        }
        std::sort(pts.begin(), pts.end(),
                  [](const Vec& a, const Vec& b) { return lex_compare(a, b) < 0; });
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        std::vector<Vec> ext = extreme_points(pts);
        if (ext.size() < 4 || ext.size() > max_verts)
            continue;
        Polytope p = Polytope::from_vertices(3, ext);
        if (p.affine_dim() != 3)
            continue;
        return StateSpace::make(std::move(p), AffineFunctional::constant_one(3));
    }
}

/** A random state: a convex mixture of the vertices with small rational weights. */
inline Vec random_state(Rng& rng, const StateSpace& s)
{
    const auto& verts = s.geometry().vertices();
    Vec w(verts.size());
    Rational total = 0;
    for (auto& x : w) {
        x = random_rational(rng, 0, 3, 2);
        total += x;
    }
    if (total == 0) {
        w[0] = 1;
        total = 1;
    }
    Vec state(s.dim(), Rational(0));
    for (std::size_t i = 0; i < verts.size(); ++i)
        if (w[i] != 0)
            state = vec_add(state, vec_scale(w[i] / total, verts[i]));
    return state;
}

/** A random observable: a stochastic coarse-graining of the minimal IC one. */
inline Observable random_observable(Rng& rng, const StateSpace& s, std::size_t n_effects)
{
    Observable ic = minimal_ic_observable(s);
    const std::size_t n = ic.effects.size();
    // Random column-stochastic mixing matrix (n_effects x n).
    std::vector<Vec> cols;
    for (std::size_t c = 0; c < n; ++c) {
        Vec col(n_effects);
        Rational total = 0;
        for (auto& x : col) {
            x = random_rational(rng, 0, 3, 2);
            total += x;
        }
        if (total == 0) {
            col[c % n_effects] = 1;
            total = 1;
        }
        for (auto& x : col)
            x /= total;
        cols.push_back(std::move(col));
    }
    Observable out;
    for (std::size_t r = 0; r < n_effects; ++r) {
        AffineFunctional f(Vec(s.dim(), Rational(0)), Rational(0));
        for (std::size_t c = 0; c < n; ++c)
            if (cols[c][r] != 0)
                f = f + cols[c][r] * ic.effects[c];
        out.effects.push_back(s.canonical_functional(f));
    }
    s.require_observable(out, "random_observable");
    return out;
}

/** A random column-stochastic matrix; zero_pct entries per column start at 0. */
inline StochasticMatrix random_stochastic(Rng& rng, std::size_t n, int zero_pct)
{
    std::uniform_int_distribution<int> pct(0, 99);
    Mat m(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        Rational total = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (pct(rng) < zero_pct)
                continue;
            m.at(r, c) = random_rational(rng, 0, 4, 3);
            total += m.at(r, c);
        }
        if (total == 0) {
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            m.at(pick(rng), c) = 1;
            total = 1;
        }
        for (std::size_t r = 0; r < n; ++r)
            m.at(r, c) /= total;
    }
    return StochasticMatrix::make(std::move(m));
}

/** A random state-preserving affine map into the tensor square of s. */
inline AffineMap random_broadcast_candidate(Rng& rng, const StateSpace& s, const TensorSpace& t)
{
    std::uniform_int_distribution<std::size_t> n_eff(1, s.functional_dim() + 1);
    Observable obs = random_observable(rng, s, n_eff(rng));
    // Random prepared bipartite states: mixtures of a few product vertices.
    const auto& verts = s.geometry().vertices();
    std::uniform_int_distribution<std::size_t> pick(0, verts.size() - 1);
    Mat hom(t.dim() + 1, s.dim() + 1);
    for (const auto& eff : obs.effects) {
        Vec rho(t.dim(), Rational(0));
        const std::size_t mixture = 1 + pick(rng) % 3;
        Rational weight(1, static_cast<long>(mixture));
        for (std::size_t m = 0; m < mixture; ++m) {
            Vec prod = product_state(t, verts[pick(rng)], verts[pick(rng)]);
            rho = vec_add(rho, vec_scale(weight, prod));
        }
        const Vec ah = eff.homogeneous();
        for (std::size_t r = 0; r < t.dim(); ++r) {
            if (rho[r] == 0)
                continue;
            for (std::size_t c = 0; c <= s.dim(); ++c)
                hom.at(r, c) += rho[r] * ah[c];
        }
        for (std::size_t c = 0; c <= s.dim(); ++c)
            hom.at(t.dim(), c) += ah[c];
    }
    return AffineMap::from_hom(s.dim(), t.dim(), std::move(hom));
}

/** Fix(B1) /\ Fix(B2) /\ Omega computed directly from the linear systems. */
inline Polytope brute_force_broadcast_set(const AffineMap& B, const StateSpace& s,
                                          const TensorSpace& t)
{
    auto [b1, b2] = marginal_maps(B, t);
    HRep h = s.geometry().hrep();
    for (const AffineMap* bm : {&b1, &b2})
        for (std::size_t i = 0; i < s.dim(); ++i) {
            Vec normal(s.dim());
            for (std::size_t j = 0; j < s.dim(); ++j)
                normal[j] = bm->hom.at(i, j) - Rational(i == j ? 1 : 0);
            h.equalities.push_back({std::move(normal), -bm->hom.at(i, s.dim())});
        }
    return hrep_to_vrep(Polytope::from_hrep(s.dim(), std::move(h)));
}

}  // namespace oracles
