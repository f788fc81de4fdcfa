#include "gptk/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace gptk {

Vec AffineFunctional::homogeneous() const
{
    Vec h = coeffs;
    h.push_back(constant);
    return h;
}

AffineFunctional AffineFunctional::from_homogeneous(const Vec& h)
{
    if (h.empty())
        throw std::invalid_argument("from_homogeneous: empty vector");
    return AffineFunctional(Vec(h.begin(), h.end() - 1), h.back());
}

AffineFunctional AffineFunctional::constant_one(std::size_t dim)
{
    return AffineFunctional(Vec(dim, Rational(0)), Rational(1));
}

AffineFunctional AffineFunctional::coordinate(std::size_t dim, std::size_t i)
{
    Vec c(dim, Rational(0));
    c.at(i) = 1;
    return AffineFunctional(std::move(c), Rational(0));
}

AffineFunctional operator+(const AffineFunctional& a, const AffineFunctional& b)
{
    return AffineFunctional(vec_add(a.coeffs, b.coeffs), a.constant + b.constant);
}

AffineFunctional operator-(const AffineFunctional& a, const AffineFunctional& b)
{
    return AffineFunctional(vec_sub(a.coeffs, b.coeffs), a.constant - b.constant);
}

AffineFunctional operator*(const Rational& c, const AffineFunctional& a)
{
    return AffineFunctional(vec_scale(c, a.coeffs), c * a.constant);
}

Vec AffineMap::apply(const Vec& x) const
{
    if (x.size() != source_dim)
        throw std::invalid_argument("AffineMap::apply: dimension mismatch");
    Vec xh = x;
    xh.push_back(Rational(1));
    Vec yh = mat_vec(hom, xh);
    if (yh.back() != 1)
        throw std::invalid_argument("AffineMap::apply: point outside the map's affine domain");
    yh.pop_back();
    return yh;
}

AffineFunctional AffineMap::pull_back_functional(const AffineFunctional& g) const
{
    if (g.dim() != target_dim)
        throw std::invalid_argument("pull_back_functional: dimension mismatch");
    Vec gh = g.homogeneous();
    Vec res(source_dim + 1, Rational(0));
    for (std::size_t i = 0; i < hom.rows; ++i) {
        if (gh[i] == 0)
            continue;
        for (std::size_t j = 0; j <= source_dim; ++j)
            res[j] += gh[i] * hom.at(i, j);
    }
    return AffineFunctional::from_homogeneous(res);
}

AffineMap AffineMap::identity(std::size_t d)
{
    return from_hom(d, d, Mat::identity(d + 1));
}

AffineMap AffineMap::constant(std::size_t source_dim, const Vec& target_point)
{
    Mat h(target_point.size() + 1, source_dim + 1);
    for (std::size_t i = 0; i < target_point.size(); ++i)
        h.at(i, source_dim) = target_point[i];
    h.at(target_point.size(), source_dim) = 1;
    return from_hom(source_dim, target_point.size(), std::move(h));
}

AffineMap AffineMap::from_hom(std::size_t source_dim, std::size_t target_dim, Mat hom)
{
    if (hom.rows != target_dim + 1 || hom.cols != source_dim + 1)
        throw std::invalid_argument("AffineMap::from_hom: matrix shape mismatch");
    AffineMap m;
    m.source_dim = source_dim;
    m.target_dim = target_dim;
    m.hom = std::move(hom);
    return m;
}

AffineMap compose(const AffineMap& f, const AffineMap& g)
{
    if (g.target_dim != f.source_dim)
        throw std::invalid_argument("compose: dimension mismatch");
    return AffineMap::from_hom(g.source_dim, f.target_dim, mat_mul(f.hom, g.hom));
}

AffineMap average(const AffineMap& f, const AffineMap& g)
{
    if (f.source_dim != g.source_dim || f.target_dim != g.target_dim)
        throw std::invalid_argument("average: dimension mismatch");
    return AffineMap::from_hom(f.source_dim, f.target_dim,
                               mat_scale(Rational(1, 2), mat_add(f.hom, g.hom)));
}

void TestSpace::validate() const
{
    if (tests.empty())
        throw invalid_model("test space has no tests");
    std::vector<char> used(outcomes.size(), 0);
    for (const auto& test : tests) {
        if (test.empty())
            throw invalid_model("test space contains an empty test");
        for (std::size_t idx : test) {
            if (idx >= outcomes.size())
                throw invalid_model("test refers to an unknown outcome");
            used[idx] = 1;
        }
    }
    for (std::size_t i = 0; i < outcomes.size(); ++i)
        if (!used[i])
            throw invalid_model("outcome '" + outcomes[i] + "' appears in no test");
}

StateSpace StateSpace::make(Polytope geometry, AffineFunctional unit,
                            std::vector<std::string> coordinate_labels,
                            std::optional<TestSpace> provenance)
{
    StateSpace s;
    s.geometry_ = std::move(geometry);
    s.unit_ = std::move(unit);
    s.labels_ = std::move(coordinate_labels);
    s.provenance_ = std::move(provenance);

    const auto& verts = s.geometry_.vertices();
    if (verts.empty())
        throw invalid_model("state space geometry is empty");
    if (s.unit_.dim() != s.geometry_.ambient_dim())
        throw invalid_model("order unit dimension mismatch");
    for (const Vec& v : verts)
        if (s.unit_(v) != 1)
            throw invalid_model("order unit does not evaluate to 1 on every state");
    s.geometry_.hrep();  // complete both descriptions up front

    std::vector<Vec> rows;
    rows.reserve(verts.size());
    for (const Vec& v : verts) {
        Vec r = v;
        r.push_back(Rational(1));
        rows.push_back(std::move(r));
    }
    s.affine_dim_ = static_cast<long>(rank(Mat::from_rows(rows))) - 1;
    s.annihilator_ = nullspace_basis(Mat::from_rows(rows));
    if (!s.annihilator_.empty()) {
        Rref rr = rref(Mat::from_rows(s.annihilator_));
        for (std::size_t i = 0; i < rr.rank(); ++i)
            s.annihilator_rref_.push_back(rr.mat.row(i));
        s.annihilator_pivots_ = rr.pivot_cols;
    }
    return s;
}

Vec StateSpace::reduce_homogeneous(Vec h) const
{
    if (h.size() != dim() + 1)
        throw std::invalid_argument("reduce_homogeneous: dimension mismatch");
    for (std::size_t k = 0; k < annihilator_rref_.size(); ++k) {
        const std::size_t pc = annihilator_pivots_[k];
        if (h[pc] == 0)
            continue;
        const Rational f = h[pc];
        for (std::size_t j = 0; j < h.size(); ++j)
            h[j] -= f * annihilator_rref_[k][j];
    }
    return h;
}

AffineFunctional StateSpace::canonical_functional(const AffineFunctional& f) const
{
    return AffineFunctional::from_homogeneous(reduce_homogeneous(f.homogeneous()));
}

bool StateSpace::functionals_equal(const AffineFunctional& a, const AffineFunctional& b) const
{
    for (const Vec& v : geometry_.vertices())
        if (a(v) != b(v))
            return false;
    return true;
}

bool StateSpace::is_valid_effect(const AffineFunctional& f) const
{
    for (const Vec& v : geometry_.vertices()) {
        const Rational val = f(v);
        if (val < 0 || val > 1)
            return false;
    }
    return true;
}

void StateSpace::require_effect(const AffineFunctional& f, const std::string& what) const
{
    if (f.dim() != dim())
        throw invalid_model(what + ": functional dimension mismatch");
    if (!is_valid_effect(f))
        throw invalid_model(what + ": functional is not in [0, u] on the state space");
}

void StateSpace::require_observable(const Observable& o, const std::string& what) const
{
    if (o.effects.empty())
        throw invalid_model(what + ": observable has no effects");
    for (const auto& e : o.effects)
        require_effect(e, what);
    for (const Vec& v : geometry_.vertices()) {
        Rational sum = 0;
        for (const auto& e : o.effects)
            sum += e(v);
        if (sum != 1)
            throw invalid_model(what + ": effects do not sum to the order unit");
    }
}

void StateSpace::require_state(const Vec& x, const std::string& what) const
{
    if (x.size() != dim())
        throw invalid_model(what + ": state dimension mismatch");
    if (!geometry_.contains(x).inside)
        throw invalid_model(what + ": point is not a state of the space");
}

Vec StateSpace::vertex_values(const AffineFunctional& f) const
{
    const auto& verts = geometry_.vertices();
    Vec vals(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i)
        vals[i] = f(verts[i]);
    return vals;
}

StateSpace state_space_from_test_space(const TestSpace& t)
{
    t.validate();
    const std::size_t d = t.outcomes.size();

    HRep h;
    for (std::size_t i = 0; i < d; ++i) {
        Vec lo(d, Rational(0)), hi(d, Rational(0));
        lo[i] = 1;
        hi[i] = -1;
        h.inequalities.push_back({std::move(lo), Rational(0)});   // x_i >= 0
        h.inequalities.push_back({std::move(hi), Rational(-1)});  // x_i <= 1
    }
    for (const auto& test : t.tests) {
        Vec normal(d, Rational(0));
        for (std::size_t idx : test)
            normal[idx] += 1;
        h.equalities.push_back({std::move(normal), Rational(1)});
    }

    Polytope geom = Polytope::from_hrep(d, h);
    if (geom.vertices().empty()) {
        ConstraintSystem sys(d);
        for (const auto& hs : h.inequalities)
            sys.add_ge(hs.normal, hs.offset);
        for (const auto& hp : h.equalities)
            sys.add_eq(hp.normal, hp.offset);
        LpResult lp = sys.solve();
        std::ostringstream msg;
        msg << "test space admits no states; infeasibility certificate multipliers:";
        for (const Rational& c : lp.certificate)
            msg << " " << format_rational(c);
        throw invalid_model(msg.str());
    }

    Vec unit_coeffs(d, Rational(0));
    for (std::size_t idx : t.tests.front())
        unit_coeffs[idx] += 1;

    return StateSpace::make(std::move(geom),
                            AffineFunctional(std::move(unit_coeffs), Rational(0)),
                            t.outcomes, t);
}

ConeDesc effect_cone_extreme_rays(const StateSpace& s)
{
    const auto& verts = s.geometry().vertices();
    std::vector<Vec> gens;
    gens.reserve(verts.size());
    for (const Vec& v : verts) {
        Vec g = v;
        g.push_back(Rational(1));
        gens.push_back(std::move(g));
    }
    DdCone dd = double_description(gens, {}, s.dim() + 1);

    ConeDesc cone;
    cone.ambient_dim = s.dim() + 1;
    std::set<Vec> seen;
    for (const Vec& ray : dd.rays) {
        Vec rep = s.reduce_homogeneous(ray);
        if (is_zero_vec(rep))
            continue;
        rep = canonicalize_ray(rep);
        if (seen.insert(rep).second)
            cone.extreme_rays.push_back(std::move(rep));
    }
    std::sort(cone.extreme_rays.begin(), cone.extreme_rays.end(),
              [](const Vec& a, const Vec& b) { return lex_compare(a, b) < 0; });
    cone.supporting_inequalities = gens;
    return cone;
}

Observable minimal_ic_observable(const StateSpace& s)
{
    const std::size_t n = s.functional_dim();
    const AffineFunctional u = AffineFunctional::constant_one(s.dim());
    if (n == 1)
        return Observable{{s.canonical_functional(u)}};

    // A basis of A(Omega) containing u, completed greedily from the
    // coordinate functionals (selection by value-vector rank).
    std::vector<AffineFunctional> basis{u};
    std::vector<Vec> value_rows{s.vertex_values(u)};
    for (std::size_t i = 0; i < s.dim() && basis.size() < n; ++i) {
        AffineFunctional c = AffineFunctional::coordinate(s.dim(), i);
        value_rows.push_back(s.vertex_values(c));
        if (rank(Mat::from_rows(value_rows)) == value_rows.size())
            basis.push_back(c);
        else
            value_rows.pop_back();
    }
    if (basis.size() != n)
        throw internal_error("minimal_ic_observable: coordinate functionals do not span");

    // Exchange the u slot for b_n = k u - sum of the others, so the basis
    // sums to k u; k = 1 already keeps it a basis (the change-of-basis
    // determinant equals k), but verify and bump defensively.
    std::vector<AffineFunctional> b(basis.begin() + 1, basis.end());
    AffineFunctional rest_sum(Vec(s.dim(), Rational(0)), Rational(0));
    for (const auto& f : b)
        rest_sum = rest_sum + f;
    Rational k = 0;
    for (int cand = 1; cand <= 2; ++cand) {
        AffineFunctional bn = Rational(cand) * u - rest_sum;
        std::vector<Vec> rows;
        for (const auto& f : b)
            rows.push_back(s.vertex_values(f));
        rows.push_back(s.vertex_values(bn));
        if (rank(Mat::from_rows(rows)) == n) {
            b.push_back(bn);
            k = cand;
            break;
        }
    }
    if (k == 0)
        throw internal_error("minimal_ic_observable: basis exchange failed");

    Rational c;  // min of all basis functionals over the vertex set
    bool first = true;
    for (const auto& f : b)
        for (const Vec& v : s.geometry().vertices()) {
            const Rational val = f(v);
            if (first || val < c) {
                c = val;
                first = false;
            }
        }

    const Rational denom = k - Rational(n) * c;
    if (denom == 0)
        throw internal_error("minimal_ic_observable: degenerate normalization outside the one-point case");

    Observable out;
    for (const auto& f : b) {
        AffineFunctional a = Rational(1) / denom * (f - c * u);
        out.effects.push_back(s.canonical_functional(a));
    }
    s.require_observable(out, "minimal_ic_observable");
    return out;
}

bool is_informationally_complete(const StateSpace& s, const Observable& f)
{
    std::vector<Vec> rows;
    rows.reserve(f.effects.size());
    for (const auto& e : f.effects)
        rows.push_back(s.vertex_values(e));
    return rank(Mat::from_rows(rows)) == s.functional_dim();
}

AffineMap dual_map(const StateSpace& s, const Observable& f)
{
    const std::size_t k = f.effects.size();
    Mat hom(k + 1, s.dim() + 1);
    for (std::size_t i = 0; i < k; ++i)
        hom.set_row(i, f.effects[i].homogeneous());
    hom.at(k, s.dim()) = 1;
    return AffineMap::from_hom(s.dim(), k, std::move(hom));
}

AffineMap measure_and_prepare(const StateSpace& source, const Observable& f,
                              const std::vector<Vec>& prepared, const StateSpace& target)
{
    if (prepared.size() != f.effects.size())
        throw invalid_model("measure_and_prepare: one prepared state per effect required");
    source.require_observable(f, "measure_and_prepare");
    for (const Vec& p : prepared)
        target.require_state(p, "measure_and_prepare");

    Mat hom(target.dim() + 1, source.dim() + 1);
    for (std::size_t i = 0; i < f.effects.size(); ++i) {
        const Vec ah = f.effects[i].homogeneous();
        for (std::size_t r = 0; r < target.dim(); ++r) {
            if (prepared[i][r] == 0)
                continue;
            for (std::size_t cidx = 0; cidx <= source.dim(); ++cidx)
                hom.at(r, cidx) += prepared[i][r] * ah[cidx];
        }
        for (std::size_t cidx = 0; cidx <= source.dim(); ++cidx)
            hom.at(target.dim(), cidx) += ah[cidx];
    }
    return AffineMap::from_hom(source.dim(), target.dim(), std::move(hom));
}

Observable pull_back(const AffineMap& m, const Observable& f)
{
    Observable out;
    out.effects.reserve(f.effects.size());
    for (const auto& e : f.effects)
        out.effects.push_back(m.pull_back_functional(e));
    return out;
}

void require_state_preserving(const AffineMap& m, const StateSpace& source,
                              const Polytope& target, const std::string& what)
{
    if (m.source_dim != source.dim() || m.target_dim != target.ambient_dim())
        throw invalid_model(what + ": map dimensions do not match the spaces");
    for (const Vec& v : source.geometry().vertices()) {
        Vec vh = v;
        vh.push_back(Rational(1));
        Vec yh = mat_vec(m.hom, vh);
        if (yh.back() != 1)
            throw invalid_model(what + ": map does not preserve the order unit");
        yh.pop_back();
        if (!target.contains(yh).inside)
            throw invalid_model(what + ": map sends a state outside the target");
    }
}

bool maps_equal_on(const AffineMap& a, const AffineMap& b, const StateSpace& source)
{
    if (a.source_dim != b.source_dim || a.target_dim != b.target_dim)
        return false;
    for (const Vec& v : source.geometry().vertices())
        if (a.apply(v) != b.apply(v))
            return false;
    return true;
}

}  // namespace gptk
