#include "gptk/tensor.hpp"

#include <algorithm>
#include <set>

namespace gptk {

namespace {

struct GridFactor {
    std::size_t hom_dim = 0;           // d + 1
    std::vector<Vec> cone_generators;  // homogeneous, generate the effect cone
    std::vector<Vec> ann_rows;         // homogeneous, span the hull annihilator
};

GridFactor factor_of(const StateSpace& s)
{
    GridFactor f;
    f.hom_dim = s.dim() + 1;
    f.cone_generators = effect_cone_extreme_rays(s).extreme_rays;
    f.ann_rows = s.annihilator();
    return f;
}

Vec kron_vec(const Vec& a, const Vec& b)
{
    Vec out(a.size() * b.size(), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0)
            continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i * b.size() + j] = a[i] * b[j];
    }
    return out;
}

Vec unit_vec(std::size_t n, std::size_t i)
{
    Vec e(n, Rational(0));
    e[i] = 1;
    return e;
}

GridFactor tensor_grid(const GridFactor& a, const GridFactor& b)
{
    GridFactor g;
    g.hom_dim = a.hom_dim * b.hom_dim;
    for (const Vec& r : a.cone_generators)
        for (const Vec& s : b.cone_generators)
            g.cone_generators.push_back(kron_vec(r, s));
    for (const Vec& alpha : a.ann_rows)
        for (std::size_t j = 0; j < b.hom_dim; ++j)
            g.ann_rows.push_back(kron_vec(alpha, unit_vec(b.hom_dim, j)));
    for (std::size_t i = 0; i < a.hom_dim; ++i)
        for (const Vec& beta : b.ann_rows)
            g.ann_rows.push_back(kron_vec(unit_vec(a.hom_dim, i), beta));
    return g;
}

/** Translates a full-grid homogeneous row into (normal over D coords, offset). */
HalfSpace dehom_ineq(const Vec& row)
{
    return {Vec(row.begin(), row.end() - 1), -row.back()};
}

Hyperplane dehom_eq(const Vec& row)
{
    return {Vec(row.begin(), row.end() - 1), -row.back()};
}

Polytope max_geometry(const GridFactor& g)
{
    HRep h;
    std::set<Vec> seen;
    for (const Vec& row : g.cone_generators) {
        Vec key = canonicalize_ray(row);
        if (seen.insert(std::move(key)).second)
            h.inequalities.push_back(dehom_ineq(row));
    }
    for (const Vec& row : g.ann_rows)
        h.equalities.push_back(dehom_eq(row));
    return Polytope::from_hrep(g.hom_dim - 1, std::move(h));
}

Vec flatten_product(const std::vector<Vec>& factor_states)
{
    Vec acc{Rational(1)};
    for (const Vec& s : factor_states) {
        Vec h = s;
        h.push_back(Rational(1));
        acc = kron_vec(acc, h);
    }
    acc.pop_back();  // the all-units slot is pinned to 1
    return acc;
}

}  // namespace

std::size_t TensorSpace::slot(const std::vector<std::size_t>& multi) const
{
    if (multi.size() != hom_dims_.size())
        throw std::invalid_argument("TensorSpace::slot: arity mismatch");
    std::size_t idx = 0;
    for (std::size_t k = 0; k < multi.size(); ++k) {
        if (multi[k] >= hom_dims_[k])
            throw std::invalid_argument("TensorSpace::slot: index out of range");
        idx = idx * hom_dims_[k] + multi[k];
    }
    return idx;
}

Vec TensorSpace::full_grid(const Vec& state) const
{
    if (state.size() != dim())
        throw std::invalid_argument("TensorSpace::full_grid: dimension mismatch");
    Vec g = state;
    g.push_back(Rational(1));
    return g;
}

TensorSpace TensorSpace::max_tensor(const StateSpace& a, const StateSpace& b)
{
    return max_tensor(std::vector<StateSpace>{a, b});
}

TensorSpace TensorSpace::min_tensor(const StateSpace& a, const StateSpace& b)
{
    return min_tensor(std::vector<StateSpace>{a, b});
}

TensorSpace TensorSpace::max_tensor(std::vector<StateSpace> factors)
{
    if (factors.size() < 2)
        throw std::invalid_argument("max_tensor: need at least two factors");
    GridFactor acc = factor_of(factors[0]);
    for (std::size_t k = 1; k < factors.size(); ++k)
        acc = tensor_grid(acc, factor_of(factors[k]));

    TensorSpace t;
    t.kind_ = TensorKind::Maximal;
    t.factors_ = std::move(factors);
    for (const StateSpace& f : t.factors_)
        t.hom_dims_.push_back(f.dim() + 1);
    t.geometry_ = max_geometry(acc);
    return t;
}

TensorSpace TensorSpace::min_tensor(std::vector<StateSpace> factors)
{
    if (factors.size() < 2)
        throw std::invalid_argument("min_tensor: need at least two factors");

    std::vector<Vec> points{Vec{}};
    std::vector<Vec> next;
    for (const StateSpace& f : factors) {
        next.clear();
        for (const Vec& partial : points)
            for (const Vec& v : f.geometry().vertices()) {
                Vec ext = partial;
                ext.insert(ext.end(), v.begin(), v.end());
                next.push_back(std::move(ext));
            }
        points.swap(next);
    }
    // Rebuild each tuple as a flattened outer product.
    std::vector<Vec> prods;
    prods.reserve(points.size());
    {
        std::vector<std::size_t> offs;
        std::size_t off = 0;
        for (const StateSpace& f : factors) {
            offs.push_back(off);
            off += f.dim();
        }
        for (const Vec& tuple : points) {
            std::vector<Vec> parts;
            for (std::size_t k = 0; k < factors.size(); ++k)
                parts.emplace_back(tuple.begin() + static_cast<std::ptrdiff_t>(offs[k]),
                                   tuple.begin() + static_cast<std::ptrdiff_t>(offs[k] + factors[k].dim()));
            prods.push_back(flatten_product(parts));
        }
    }

    std::size_t full = 1;
    for (const StateSpace& f : factors)
        full *= f.dim() + 1;

    TensorSpace t;
    t.kind_ = TensorKind::Minimal;
    t.factors_ = std::move(factors);
    for (const StateSpace& f : t.factors_)
        t.hom_dims_.push_back(f.dim() + 1);
    t.geometry_ = Polytope::from_vertices(full - 1, std::move(prods));
    return t;
}

TensorSpace TensorSpace::intermediate(const StateSpace& a, const StateSpace& b, Polytope geometry)
{
    TensorSpace lo = min_tensor(a, b);
    TensorSpace hi = max_tensor(a, b);
    if (geometry.ambient_dim() != hi.dim())
        throw invalid_model("intermediate tensor product: wrong ambient dimension");
    for (const Vec& v : lo.geometry().vertices())
        if (!geometry.contains(v).inside)
            throw invalid_model("intermediate tensor product: does not contain a product state");
    for (const Vec& v : geometry.vertices())
        if (!hi.geometry().contains(v).inside)
            throw invalid_model("intermediate tensor product: exceeds the maximal product");

    TensorSpace t;
    t.kind_ = TensorKind::Intermediate;
    t.factors_ = {a, b};
    t.hom_dims_ = {a.dim() + 1, b.dim() + 1};
    t.geometry_ = std::move(geometry);
    return t;
}

Vec product_state(const TensorSpace& t, const std::vector<Vec>& factor_states)
{
    if (factor_states.size() != t.factors().size())
        throw std::invalid_argument("product_state: arity mismatch");
    for (std::size_t k = 0; k < factor_states.size(); ++k)
        t.factors()[k].require_state(factor_states[k], "product_state");
    return flatten_product(factor_states);
}

Vec product_state(const TensorSpace& t, const Vec& alpha, const Vec& beta)
{
    return product_state(t, std::vector<Vec>{alpha, beta});
}

std::pair<Vec, Vec> marginals(const TensorSpace& t, const Vec& omega)
{
    if (t.factors().size() != 2)
        throw std::invalid_argument("marginals: bipartite state required");
    const Vec g = t.full_grid(omega);
    const std::size_t d1 = t.factors()[0].dim();
    const std::size_t d2 = t.factors()[1].dim();
    Vec m1(d1), m2(d2);
    for (std::size_t i = 0; i < d1; ++i)
        m1[i] = g[t.slot({i, d2})];
    for (std::size_t j = 0; j < d2; ++j)
        m2[j] = g[t.slot({d1, j})];
    return {std::move(m1), std::move(m2)};
}

Vec marginal_onto(const TensorSpace& t, const Vec& omega, const std::vector<std::size_t>& keep)
{
    const Vec g = t.full_grid(omega);
    const std::size_t n = t.factors().size();
    std::vector<char> kept(n, 0);
    for (std::size_t k : keep) {
        if (k >= n)
            throw std::invalid_argument("marginal_onto: factor index out of range");
        kept[k] = 1;
    }

    std::vector<std::size_t> kept_hom;
    for (std::size_t k = 0; k < n; ++k)
        if (kept[k])
            kept_hom.push_back(t.factors()[k].dim() + 1);
    std::size_t out_full = 1;
    for (std::size_t hd : kept_hom)
        out_full *= hd;

    Vec out(out_full);
    for (std::size_t oi = 0; oi < out_full; ++oi) {
        // Decode the output multi-index, fix dropped factors at their unit slot.
        std::vector<std::size_t> multi(n);
        std::size_t rem = oi;
        for (std::size_t k = n; k-- > 0;) {
            if (kept[k]) {
                const std::size_t hd = t.factors()[k].dim() + 1;
                multi[k] = rem % hd;
                rem /= hd;
            } else {
                multi[k] = t.factors()[k].dim();
            }
        }
        out[oi] = g[t.slot(multi)];
    }
    out.pop_back();
    return out;
}

Rational evaluate_bilinear(const TensorSpace& t, const Vec& omega,
                           const AffineFunctional& a, const AffineFunctional& b)
{
    if (t.factors().size() != 2)
        throw std::invalid_argument("evaluate_bilinear: bipartite state required");
    const Vec g = t.full_grid(omega);
    const Vec ah = a.homogeneous();
    const Vec bh = b.homogeneous();
    if (ah.size() != t.factors()[0].dim() + 1 || bh.size() != t.factors()[1].dim() + 1)
        throw std::invalid_argument("evaluate_bilinear: functional dimension mismatch");
    Rational acc = 0;
    for (std::size_t i = 0; i < ah.size(); ++i) {
        if (ah[i] == 0)
            continue;
        for (std::size_t j = 0; j < bh.size(); ++j)
            if (bh[j] != 0)
                acc += ah[i] * bh[j] * g[t.slot({i, j})];
    }
    return acc;
}

Vec conditional(const TensorSpace& t, const Vec& omega, const AffineFunctional& a)
{
    const AffineFunctional u2 = AffineFunctional::constant_one(t.factors()[1].dim());
    const Rational p = evaluate_bilinear(t, omega, a, u2);
    if (p == 0)
        throw undefined_conditional("conditional state undefined: conditioning effect has probability 0");
    const std::size_t d2 = t.factors()[1].dim();
    Vec out(d2);
    for (std::size_t j = 0; j < d2; ++j) {
        AffineFunctional xj = AffineFunctional::coordinate(d2, j);
        out[j] = evaluate_bilinear(t, omega, a, xj) / p;
    }
    return out;
}

AffineMap swap_map(const TensorSpace& t)
{
    if (t.factors().size() != 2 || !state_spaces_identical(t.factors()[0], t.factors()[1]))
        throw invalid_model("swap: the two factors must be the same state space");
    const std::size_t hd = t.factors()[0].dim() + 1;
    Mat hom(hd * hd, hd * hd);
    for (std::size_t i = 0; i < hd; ++i)
        for (std::size_t j = 0; j < hd; ++j)
            hom.at(j * hd + i, i * hd + j) = 1;
    return AffineMap::from_hom(hd * hd - 1, hd * hd - 1, std::move(hom));
}

Vec swap_state(const TensorSpace& t, const Vec& omega)
{
    return swap_map(t).apply(omega);
}

SeparabilityResult is_entangled(const TensorSpace& t_min, const Vec& omega)
{
    if (t_min.kind() != TensorKind::Minimal)
        throw std::invalid_argument("is_entangled: pass the minimal tensor product");
    const auto& prods = t_min.geometry().vertices();
    const std::size_t d = t_min.dim();
    const std::size_t p = prods.size();

    ConstraintSystem sys(p);
    for (std::size_t c = 0; c < d; ++c) {
        Vec row(p);
        for (std::size_t k = 0; k < p; ++k)
            row[k] = prods[k][c];
        sys.add_eq(std::move(row), omega.at(c));
    }
    sys.add_eq(Vec(p, Rational(1)), Rational(1));
    for (std::size_t k = 0; k < p; ++k)
        sys.mark_nonnegative(k);
    LpResult lp = sys.solve();

    SeparabilityResult res;
    if (lp.feasible) {
        res.entangled = false;
        res.decomposition = lp.witness;
        return res;
    }
    res.entangled = true;
    Vec fn(d + 1);
    for (std::size_t c = 0; c < d; ++c)
        fn[c] = lp.certificate[c];
    fn[d] = lp.certificate[d];  // multiplier of the normalization row
    res.separating = AffineFunctional::from_homogeneous(fn);
    return res;
}

PureMarginalReport check_pure_marginal_lemma(const TensorSpace& t)
{
    if (t.factors().size() != 2)
        throw std::invalid_argument("check_pure_marginal_lemma: bipartite product required");
    const auto& v1 = t.factors()[0].geometry().vertices();
    const auto& v2 = t.factors()[1].geometry().vertices();
    auto is_vertex = [](const std::vector<Vec>& verts, const Vec& x) {
        return std::binary_search(verts.begin(), verts.end(), x,
                                  [](const Vec& a, const Vec& b) { return lex_compare(a, b) < 0; });
    };

    PureMarginalReport rep;
    const auto& verts = t.geometry().vertices();
    for (std::size_t i = 0; i < verts.size(); ++i) {
        auto [m1, m2] = marginals(t, verts[i]);
        PureMarginalReport::Entry e;
        e.vertex_index = i;
        e.marginal1_pure = is_vertex(v1, m1);
        e.marginal2_pure = is_vertex(v2, m2);
        e.applicable = e.marginal1_pure || e.marginal2_pure;
        if (e.applicable) {
            ++rep.applicable_count;
            e.product_equal = verts[i] == product_state(t, m1, m2);
            if (!e.product_equal)
                ++rep.violations;
        }
        rep.entries.push_back(e);
    }
    return rep;
}

bool state_spaces_identical(const StateSpace& a, const StateSpace& b)
{
    return a.dim() == b.dim() && a.geometry().vertices() == b.geometry().vertices() &&
           a.vertex_values(a.unit()) == b.vertex_values(b.unit());
}

}  // namespace gptk
