#include "gptk/broadcast.hpp"

#include "map_feasibility.hpp"

#include <algorithm>

namespace gptk {

namespace {

void require_tensor_square(const TensorSpace& t, const StateSpace& s, const std::string& what)
{
    if (t.factors().size() != 2 || !state_spaces_identical(t.factors()[0], t.factors()[1]) ||
        !state_spaces_identical(t.factors()[0], s))
        throw invalid_model(what + ": target must be a tensor square of the state space");
}

AffineMap marginal_projection(const TensorSpace& t, std::size_t which)
{
    const std::size_t d1 = t.factors()[0].dim();
    const std::size_t d2 = t.factors()[1].dim();
    const std::size_t dd = which == 0 ? d1 : d2;
    Mat hom(dd + 1, t.dim() + 1);
    for (std::size_t i = 0; i < dd; ++i) {
        const std::size_t col = which == 0 ? t.slot({i, d2}) : t.slot({d1, i});
        hom.at(i, col) = 1;
    }
    hom.at(dd, t.dim()) = 1;
    return AffineMap::from_hom(t.dim(), dd, std::move(hom));
}

std::vector<Vec> span_rows(const std::vector<Vec>& vectors)
{
    if (vectors.empty())
        return {};
    Rref r = rref(Mat::from_rows(vectors));
    std::vector<Vec> basis;
    for (std::size_t i = 0; i < r.rank(); ++i)
        basis.push_back(r.mat.row(i));
    return basis;
}

}  // namespace

std::pair<AffineMap, AffineMap> marginal_maps(const AffineMap& B, const TensorSpace& t)
{
    if (B.target_dim != t.dim())
        throw invalid_model("marginal_maps: map does not land in the tensor space");
    return {compose(marginal_projection(t, 0), B), compose(marginal_projection(t, 1), B)};
}

AffineMap symmetrize(const AffineMap& B, const TensorSpace& t)
{
    return average(B, compose(swap_map(t), B));
}

Polytope fixed_point_polytope(const AffineMap& A, const StateSpace& s)
{
    if (A.source_dim != s.dim() || A.target_dim != s.dim())
        throw invalid_model("fixed_point_polytope: map is not a self-map of the space");
    HRep h = s.geometry().hrep();
    for (std::size_t i = 0; i < s.dim(); ++i) {
        Vec normal(s.dim());
        for (std::size_t j = 0; j < s.dim(); ++j)
            normal[j] = A.hom.at(i, j) - Rational(i == j ? 1 : 0);
        h.equalities.push_back({std::move(normal), -A.hom.at(i, s.dim())});
    }
    return hrep_to_vrep(Polytope::from_hrep(s.dim(), std::move(h)));
}

AffineMap cesaro_compression(const AffineMap& A, const StateSpace& s)
{
    if (A.source_dim != s.dim() || A.target_dim != s.dim())
        throw invalid_model("cesaro_compression: map is not a self-map of the space");
    const std::size_t hd = s.dim() + 1;

    // Homogeneous span of the state space.
    std::vector<Vec> hull_rows;
    for (const Vec& v : s.geometry().vertices()) {
        Vec r = v;
        r.push_back(Rational(1));
        hull_rows.push_back(std::move(r));
    }
    std::vector<Vec> hull = span_rows(hull_rows);
    const std::size_t nv = hull.size();

    Mat shifted = A.hom;  // T - I
    for (std::size_t i = 0; i < hd; ++i)
        shifted.at(i, i) -= 1;

    // ker(T - I) within the span: solve (T - I) (sum c_i h_i) = 0 for c.
    Mat sys(hd, nv);
    for (std::size_t j = 0; j < nv; ++j) {
        Vec img = mat_vec(shifted, hull[j]);
        for (std::size_t i = 0; i < hd; ++i)
            sys.at(i, j) = img[i];
    }
    std::vector<Vec> kbasis;
    for (const Vec& c : nullspace_basis(sys)) {
        Vec k(hd, Rational(0));
        for (std::size_t j = 0; j < nv; ++j)
            if (c[j] != 0)
                k = vec_add(k, vec_scale(c[j], hull[j]));
        kbasis.push_back(std::move(k));
    }

    // range(T - I) on the span.
    std::vector<Vec> wimg;
    for (const Vec& hvec : hull)
        wimg.push_back(mat_vec(shifted, hvec));
    std::vector<Vec> wbasis = span_rows(wimg);

    if (kbasis.size() + wbasis.size() != nv)
        throw internal_error("cesaro_compression: span does not split into kernel and range");

    // Complete to a basis of the ambient homogeneous space.
    std::vector<Vec> cols = kbasis;
    cols.insert(cols.end(), wbasis.begin(), wbasis.end());
    for (std::size_t i = 0; i < hd && cols.size() < hd; ++i) {
        Vec e(hd, Rational(0));
        e[i] = 1;
        cols.push_back(e);
        if (rank(Mat::from_rows(cols)) != cols.size())
            cols.pop_back();
    }
    if (cols.size() != hd)
        throw internal_error("cesaro_compression: basis completion failed");

    Mat f = Mat::from_cols(cols);
    Mat diag(hd, hd);
    for (std::size_t i = 0; i < kbasis.size(); ++i)
        diag.at(i, i) = 1;
    Mat p = mat_mul(f, mat_mul(diag, inverse(f)));
    AffineMap pm = AffineMap::from_hom(s.dim(), s.dim(), p);

    if (mat_mul(p, p) != p)
        throw internal_error("cesaro_compression: projection is not idempotent");
    for (const Vec& v : s.geometry().vertices()) {
        Vec img = pm.apply(v);
        if (!s.geometry().contains(img).inside)
            throw internal_error("cesaro_compression: image leaves the state space");
        if (A.apply(img) != img)
            throw internal_error("cesaro_compression: image is not a fixed point");
    }
    return pm;
}

BroadcastAnalysis broadcast_set(const AffineMap& B, const StateSpace& s, const TensorSpace& t)
{
    require_tensor_square(t, s, "broadcast_set");
    require_state_preserving(B, s, t.geometry(), "broadcast_set");

    BroadcastAnalysis an;
    an.input_map = B;
    std::tie(an.marginal_1, an.marginal_2) = marginal_maps(B, t);
    an.symmetrized = symmetrize(B, t);
    an.sym_marginal = compose(marginal_projection(t, 0), an.symmetrized);
    if (!maps_equal_on(an.sym_marginal, average(an.marginal_1, an.marginal_2), s))
        throw internal_error("symmetrized marginal disagrees with the average of the marginals");

    an.gamma_prime = fixed_point_polytope(an.sym_marginal, s);
    const std::vector<Vec> alphas = an.gamma_prime.vertices();
    const std::size_t n = alphas.size();

    if (n == 0) {
        // A self-map of a compact convex set always has a fixed point, so
        // this branch is unreachable for valid inputs; keep it total anyway.
        an.gamma = Polytope::empty(s.dim());
        an.candidate = Polytope::empty(s.dim());
        an.embedding_ok = true;
        return an;
    }
    if (!an.gamma_prime.is_simplex())
        throw internal_error("symmetrically broadcast set is not a simplex");

    DistinguishResult dres = find_distinguishing_observable(alphas, s);
    if (!dres.feasible)
        throw internal_error("vertices of the symmetrically broadcast set are not jointly distinguishable");
    an.distinguishing = dres.witness;

    // Fold the slack effect into the first vertex effect; the delta
    // conditions survive because the slack vanishes on the simplex.
    const auto& a_prime = an.distinguishing.observable.effects;  // (a'_0, ..., a'_n)
    std::vector<AffineFunctional> a;
    a.push_back(s.canonical_functional(a_prime[0] + a_prime[1]));
    for (std::size_t j = 2; j <= n; ++j)
        a.push_back(a_prime[j]);
    an.merged_observable.effects = a;
    s.require_observable(an.merged_observable, "broadcast_set merged observable");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (a[j](alphas[i]) != Rational(i == j ? 1 : 0))
                throw internal_error("merged observable lost the delta conditions");

    // Restriction map r(omega) = sum_i omega(a_i) alpha_i.
    {
        Mat hom(s.dim() + 1, s.dim() + 1);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec ah = a[i].homogeneous();
            for (std::size_t r = 0; r < s.dim(); ++r) {
                if (alphas[i][r] == 0)
                    continue;
                for (std::size_t c = 0; c <= s.dim(); ++c)
                    hom.at(r, c) += alphas[i][r] * ah[c];
            }
            for (std::size_t c = 0; c <= s.dim(); ++c)
                hom.at(s.dim(), c) += ah[c];
        }
        an.restriction = AffineMap::from_hom(s.dim(), s.dim(), std::move(hom));
    }

    // Marginal dynamics on the simplex as column-stochastic matrices: column
    // i holds the effect values of B_m(alpha_i).
    auto stochastic_of = [&](const AffineMap& bm) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec img = bm.apply(alphas[i]);
            for (std::size_t j = 0; j < n; ++j)
                m.at(j, i) = a[j](img);
        }
        try {
            return StochasticMatrix::make(std::move(m));
        } catch (const invalid_model& e) {
            throw internal_error(std::string("marginal dynamics is not column-stochastic: ") + e.what());
        }
    };
    an.m1 = stochastic_of(an.marginal_1);
    an.m2 = stochastic_of(an.marginal_2);

    an.intersection = intersect_fixed_spaces(an.m1, an.m2);

    std::vector<Vec> cand_verts;
    for (const Vec& w : an.intersection.basis) {
        Vec st(s.dim(), Rational(0));
        for (std::size_t i = 0; i < n; ++i)
            if (w[i] != 0)
                st = vec_add(st, vec_scale(w[i], alphas[i]));
        cand_verts.push_back(std::move(st));
    }
    an.candidate = Polytope::from_vertices(s.dim(), std::move(cand_verts));

    // The stochastic reduction observes the dynamics only through the
    // distinguishing effects; cut the candidate with the defining fixed-point
    // equations of the original marginals (on Gamma' the two cuts coincide).
    {
        HRep h = an.candidate.hrep();
        for (std::size_t i = 0; i < s.dim(); ++i) {
            Vec normal(s.dim());
            for (std::size_t j = 0; j < s.dim(); ++j)
                normal[j] = an.marginal_1.hom.at(i, j) - Rational(i == j ? 1 : 0);
            h.equalities.push_back({std::move(normal), -an.marginal_1.hom.at(i, s.dim())});
        }
        an.gamma = hrep_to_vrep(Polytope::from_hrep(s.dim(), std::move(h)));
    }

    if (!an.gamma.is_simplex())
        throw internal_error("broadcast set is not a simplex");
    for (const Vec& v : an.gamma.vertices()) {
        if (an.marginal_1.apply(v) != v || an.marginal_2.apply(v) != v)
            throw internal_error("broadcast set vertex is not fixed by both marginal maps");
        if (!an.gamma_prime.contains(v).inside)
            throw internal_error("broadcast set leaves the symmetrically broadcast simplex");
    }
    if (!an.gamma.vertices().empty() &&
        !find_distinguishing_observable(an.gamma.vertices(), s).feasible)
        throw internal_error("broadcast set vertices are not jointly distinguishable");

    // Compression onto Gamma' and the embedding check: (P x P) . B must map
    // Gamma' into Gamma' x Gamma' (maximal product of the restricted space).
    an.compression = cesaro_compression(an.sym_marginal, s);
    {
        StateSpace gp = StateSpace::make(an.gamma_prime, AffineFunctional::constant_one(s.dim()),
                                         s.coordinate_labels());
        TensorSpace gpt = TensorSpace::max_tensor(gp, gp);
        Mat pp = kronecker(an.compression.hom, an.compression.hom);
        AffineMap ppm = AffineMap::from_hom(t.dim(), t.dim(), std::move(pp));
        AffineMap q = compose(ppm, B);
        an.embedding_ok = true;
        for (const Vec& alpha : alphas)
            if (!gpt.geometry().contains(q.apply(alpha)).inside)
                an.embedding_ok = false;
        if (!an.embedding_ok)
            throw internal_error("compressed broadcast map leaves the restricted tensor square");
    }
    return an;
}

BroadcastFindResult find_broadcast_map(const std::vector<Vec>& states, const StateSpace& s,
                                       const TensorSpace& t)
{
    require_tensor_square(t, s, "find_broadcast_map");
    for (const Vec& st : states)
        s.require_state(st, "find_broadcast_map");
    if (states.empty())
        throw invalid_model("find_broadcast_map: no states given");

    if (states.size() == 1) {
        // The constant map onto the self-product broadcasts a lone state.
        BroadcastFindResult res;
        res.feasible = true;
        res.map = AffineMap::constant(s.dim(), product_state(t, states[0], states[0]));
        auto [m1, m2] = marginals(t, res.map.apply(states[0]));
        if (m1 != states[0] || m2 != states[0])
            throw internal_error("constant broadcast map fails its marginal check");
        return res;
    }

    detail::MapFeasibility mf(s, t);
    const std::size_t d1 = t.factors()[0].dim();
    const std::size_t d2 = t.factors()[1].dim();
    for (const Vec& alpha : states) {
        for (std::size_t i = 0; i < d1; ++i)
            mf.pin_coordinate(alpha, t.slot({i, d2}), alpha[i]);
        for (std::size_t j = 0; j < d2; ++j)
            mf.pin_coordinate(alpha, t.slot({d1, j}), alpha[j]);
    }

    LpResult lp = mf.sys.solve();
    BroadcastFindResult res;
    if (!lp.feasible) {
        res.certificate = lp.certificate;
        return res;
    }
    res.feasible = true;
    res.map = mf.extract(lp.witness);
    require_state_preserving(res.map, s, t.geometry(), "find_broadcast_map witness");
    for (const Vec& alpha : states) {
        auto [m1, m2] = marginals(t, res.map.apply(alpha));
        if (m1 != alpha || m2 != alpha)
            throw internal_error("broadcast witness fails to broadcast a target state");
    }
    return res;
}

}  // namespace gptk
