#include "gptk/polytope.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

namespace gptk {

namespace {

/**
 * Double description for a pointed cone {z : M z >= 0}, M of full column
 * rank.  Starts from a simplicial subcone picked greedily from the rows and
 * inserts the remaining rows one at a time; adjacency of rays is decided by
 * the exact rank test on the rows tight at both.
 */
std::vector<Vec> pointed_dd(const std::vector<Vec>& mrows, std::size_t r)
{
    struct Ray {
        Vec z;
        std::vector<char> tight;  // per row of mrows, valid once processed
    };

    const std::size_t m = mrows.size();

    // Greedy independent row subset forming the initial simplicial cone.
    std::vector<std::size_t> start;
    std::vector<Vec> acc;
    for (std::size_t i = 0; i < m && start.size() < r; ++i) {
        acc.push_back(mrows[i]);
        if (rank(Mat::from_rows(acc)) == acc.size())
            start.push_back(i);
        else
            acc.pop_back();
    }
    if (start.size() != r)
        throw std::logic_error("pointed_dd: row rank deficiency");

    Mat mj(r, r);
    for (std::size_t k = 0; k < r; ++k)
        mj.set_row(k, mrows[start[k]]);
    Mat mj_inv = inverse(mj);

    std::vector<char> processed(m, 0);
    for (std::size_t i : start)
        processed[i] = 1;

    std::vector<Ray> rays;
    for (std::size_t k = 0; k < r; ++k) {
        Ray ray;
        ray.z.resize(r);
        for (std::size_t i = 0; i < r; ++i)
            ray.z[i] = mj_inv.at(i, k);
        ray.z = canonicalize_ray(ray.z);
        ray.tight.assign(m, 0);
        for (std::size_t i : start)
            ray.tight[i] = dot(mrows[i], ray.z) == 0;
        rays.push_back(std::move(ray));
    }

    auto adjacent = [&](const Ray& a, const Ray& b) {
        std::vector<Vec> common;
        for (std::size_t i = 0; i < m; ++i)
            if (processed[i] && a.tight[i] && b.tight[i])
                common.push_back(mrows[i]);
        if (common.size() < r - 2)
            return false;
        return rank(Mat::from_rows(common)) == r - 2;
    };

    for (std::size_t k = 0; k < m; ++k) {
        if (processed[k])
            continue;
        const Vec& a = mrows[k];
        std::vector<Rational> val(rays.size());
        for (std::size_t i = 0; i < rays.size(); ++i)
            val[i] = dot(a, rays[i].z);

        std::vector<Ray> next;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            if (val[i] < 0)
                continue;
            rays[i].tight[k] = val[i] == 0;
            next.push_back(rays[i]);
        }
        std::set<Vec> fresh;
        for (std::size_t ip = 0; ip < rays.size(); ++ip) {
            if (val[ip] <= 0)
                continue;
            for (std::size_t in = 0; in < rays.size(); ++in) {
                if (val[in] >= 0)
                    continue;
                if (r >= 2 && !adjacent(rays[ip], rays[in]))
                    continue;
                Vec z = vec_sub(vec_scale(val[ip], rays[in].z),
                                vec_scale(val[in], rays[ip].z));
                z = canonicalize_ray(z);
                if (!fresh.insert(z).second)
                    continue;
                Ray nray;
                nray.z = std::move(z);
                nray.tight.assign(m, 0);
                for (std::size_t i = 0; i < m; ++i)
                    if (processed[i])
                        nray.tight[i] = rays[ip].tight[i] && rays[in].tight[i];
                nray.tight[k] = 1;
                next.push_back(std::move(nray));
            }
        }
        processed[k] = 1;
        rays = std::move(next);
    }

    std::vector<Vec> out;
    out.reserve(rays.size());
    for (auto& ray : rays)
        out.push_back(std::move(ray.z));
    std::sort(out.begin(), out.end(),
              [](const Vec& a, const Vec& b) { return lex_compare(a, b) < 0; });
    return out;
}

std::vector<Vec> matrix_times_each(const Mat& m, const std::vector<Vec>& xs)
{
    std::vector<Vec> out;
    out.reserve(xs.size());
    for (const Vec& x : xs)
        out.push_back(mat_vec(m, x));
    return out;
}

/** Canonical basis of the span of the given vectors (nonzero RREF rows). */
std::vector<Vec> span_basis(const std::vector<Vec>& vectors)
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

DdCone double_description(const std::vector<Vec>& inequality_normals,
                          const std::vector<Vec>& equality_normals,
                          std::size_t dim)
{
    DdCone out;

    // Subspace cut out by the equalities.
    std::vector<Vec> sub;
    if (equality_normals.empty()) {
        for (std::size_t i = 0; i < dim; ++i) {
            Vec e(dim, Rational(0));
            e[i] = 1;
            sub.push_back(std::move(e));
        }
    } else {
        sub = nullspace_basis(Mat::from_rows(equality_normals));
    }
    if (sub.empty())
        return out;  // the cone is {0}
    const std::size_t k = sub.size();
    Mat sub_cols = Mat::from_cols(sub);

    // Inequality rows restricted to the subspace, deduplicated by direction.
    std::vector<Vec> arows;
    {
        std::set<Vec> seen;
        for (const Vec& normal : inequality_normals) {
            Vec row(k);
            for (std::size_t j = 0; j < k; ++j)
                row[j] = dot(normal, sub[j]);
            if (is_zero_vec(row))
                continue;
            row = canonicalize_ray(row);
            if (seen.insert(row).second)
                arows.push_back(std::move(row));
        }
    }

    if (arows.empty()) {
        out.lineality = sub;  // nullspace_basis output: already canonical
        return out;
    }

    // Lineality inside the subspace, mapped back to ambient coordinates.
    std::vector<Vec> lin = nullspace_basis(Mat::from_rows(arows));
    out.lineality = span_basis(matrix_times_each(sub_cols, lin));

    // Pointed part lives on the row space of the restricted inequalities.
    std::vector<Vec> comp = span_basis(arows);
    const std::size_t r = comp.size();
    Mat comp_cols = Mat::from_cols(comp);

    std::vector<Vec> a2rows;
    a2rows.reserve(arows.size());
    for (const Vec& row : arows) {
        Vec v(r);
        for (std::size_t j = 0; j < r; ++j)
            v[j] = dot(row, comp[j]);
        a2rows.push_back(std::move(v));
    }

    std::vector<Vec> zrays;
    if (r == 1) {
        // One-dimensional pointed cone: a half-line iff all rows agree in sign.
        bool pos = true, neg = true;
        for (const Vec& v : a2rows) {
            if (v[0] > 0) neg = false;
            if (v[0] < 0) pos = false;
        }
        if (pos) zrays.push_back(Vec{Rational(1)});
        else if (neg) zrays.push_back(Vec{Rational(-1)});
    } else {
        zrays = pointed_dd(a2rows, r);
    }

    for (const Vec& z : zrays)
        out.rays.push_back(canonicalize_ray(mat_vec(sub_cols, mat_vec(comp_cols, z))));
    std::sort(out.rays.begin(), out.rays.end(),
              [](const Vec& a, const Vec& b) { return lex_compare(a, b) < 0; });
    return out;
}

// ---------------------------------------------------------------------------

struct Polytope::State {
    mutable std::mutex mu;
    mutable std::optional<std::vector<Vec>> verts;
    mutable std::optional<HRep> hrep;

    void ensure_verts(std::size_t ambient) const;
    void ensure_hrep(std::size_t ambient) const;
};

namespace {

HRep empty_hrep(std::size_t ambient)
{
    // Flag value for the empty polytope: the single unsatisfiable equality 0 = 1.
    HRep h;
    h.equalities.push_back({Vec(ambient, Rational(0)), Rational(1)});
    return h;
}

std::vector<Vec> enumerate_vertices(const HRep& h, std::size_t ambient)
{
    std::vector<Vec> ineq_rows, eq_rows;
    for (const auto& hs : h.inequalities) {
        Vec row = hs.normal;
        row.push_back(-hs.offset);
        ineq_rows.push_back(std::move(row));
    }
    {
        Vec trow(ambient + 1, Rational(0));
        trow[ambient] = 1;
        ineq_rows.push_back(std::move(trow));
    }
    for (const auto& hp : h.equalities) {
        Vec row = hp.normal;
        row.push_back(-hp.offset);
        eq_rows.push_back(std::move(row));
    }

    DdCone dd = double_description(ineq_rows, eq_rows, ambient + 1);

    std::vector<Vec> verts;
    std::optional<Vec> recession;
    for (const Vec& ray : dd.rays) {
        const Rational& t = ray[ambient];
        if (t > 0) {
            Vec x(ambient);
            for (std::size_t i = 0; i < ambient; ++i)
                x[i] = ray[i] / t;
            verts.push_back(std::move(x));
        } else if (!is_zero_vec(ray)) {
            recession = Vec(ray.begin(), ray.end() - 1);
        }
    }
    if (!dd.lineality.empty())
        recession = Vec(dd.lineality.front().begin(), dd.lineality.front().end() - 1);

    if (verts.empty())
        return {};
    if (recession)
        throw unbounded_error(std::move(*recession));
    std::sort(verts.begin(), verts.end(),
              [](const Vec& a, const Vec& b) { return lex_compare(a, b) < 0; });
    return verts;
}

HRep facets_from_vertices(const std::vector<Vec>& verts, std::size_t ambient)
{
    if (verts.empty())
        return empty_hrep(ambient);

    std::vector<Vec> generators;
    generators.reserve(verts.size());
    for (const Vec& v : verts) {
        Vec g = v;
        g.push_back(Rational(1));
        generators.push_back(std::move(g));
    }
    DdCone dd = double_description(generators, {}, ambient + 1);

    HRep h;
    for (const Vec& lin : dd.lineality)
        h.equalities.push_back({Vec(lin.begin(), lin.end() - 1), -lin.back()});

    // Reduce each ray modulo the lineality (the affine hull's annihilator);
    // rays whose residue has no linear part hold trivially on the hull.
    Rref ann = dd.lineality.empty() ? Rref{} : rref(Mat::from_rows(dd.lineality));
    for (const Vec& ray : dd.rays) {
        Vec res = ray;
        for (std::size_t kk = 0; kk < ann.pivot_cols.size(); ++kk) {
            const std::size_t pc = ann.pivot_cols[kk];
            if (res[pc] == 0)
                continue;
            const Rational f = res[pc];
            for (std::size_t j = 0; j < res.size(); ++j)
                res[j] -= f * ann.mat.at(kk, j);
        }
        if (std::all_of(res.begin(), res.end() - 1, [](const Rational& x) { return x == 0; }))
            continue;
        h.inequalities.push_back({Vec(ray.begin(), ray.end() - 1), -ray.back()});
    }
    return h;
}

}  // namespace

void Polytope::State::ensure_verts(std::size_t ambient) const
{
    if (verts)
        return;
    verts = enumerate_vertices(*hrep, ambient);
}

void Polytope::State::ensure_hrep(std::size_t ambient) const
{
    if (hrep)
        return;
    hrep = facets_from_vertices(*verts, ambient);
}

Polytope Polytope::from_vertices(std::size_t ambient, std::vector<Vec> vertices)
{
    for (const Vec& v : vertices)
        if (v.size() != ambient)
            throw std::invalid_argument("Polytope::from_vertices: dimension mismatch");
    std::sort(vertices.begin(), vertices.end(),
              [](const Vec& a, const Vec& b) { return lex_compare(a, b) < 0; });
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());

    Polytope p;
    p.ambient_ = ambient;
    p.state_ = std::make_shared<State>();
    p.state_->verts = std::move(vertices);
    return p;
}

Polytope Polytope::from_hrep(std::size_t ambient, HRep hrep)
{
    for (const auto& hs : hrep.inequalities)
        if (hs.normal.size() != ambient)
            throw std::invalid_argument("Polytope::from_hrep: dimension mismatch");
    for (const auto& hp : hrep.equalities)
        if (hp.normal.size() != ambient)
            throw std::invalid_argument("Polytope::from_hrep: dimension mismatch");
    Polytope p;
    p.ambient_ = ambient;
    p.state_ = std::make_shared<State>();
    p.state_->hrep = std::move(hrep);
    return p;
}

Polytope Polytope::empty(std::size_t ambient)
{
    return from_vertices(ambient, {});
}

bool Polytope::has_vertices() const
{
    if (!state_) return false;
    std::lock_guard g(state_->mu);
    return state_->verts.has_value();
}

bool Polytope::has_hrep() const
{
    if (!state_) return false;
    std::lock_guard g(state_->mu);
    return state_->hrep.has_value();
}

const std::vector<Vec>& Polytope::vertices() const
{
    if (!state_)
        throw std::logic_error("Polytope: uninitialized");
    std::lock_guard g(state_->mu);
    state_->ensure_verts(ambient_);
    return *state_->verts;
}

const HRep& Polytope::hrep() const
{
    if (!state_)
        throw std::logic_error("Polytope: uninitialized");
    std::lock_guard g(state_->mu);
    state_->ensure_hrep(ambient_);
    return *state_->hrep;
}

bool Polytope::is_empty() const
{
    if (!state_)
        throw std::logic_error("Polytope: uninitialized");
    {
        std::lock_guard g(state_->mu);
        if (state_->verts)
            return state_->verts->empty();
    }
    // Decide emptiness of an H-description by linear feasibility.
    const HRep& h = hrep();
    ConstraintSystem sys(ambient_);
    for (const auto& hs : h.inequalities)
        sys.add_ge(hs.normal, hs.offset);
    for (const auto& hp : h.equalities)
        sys.add_eq(hp.normal, hp.offset);
    return !sys.solve().feasible;
}

long Polytope::affine_dim() const
{
    if (!state_)
        throw std::logic_error("Polytope: uninitialized");
    bool have_verts;
    {
        std::lock_guard g(state_->mu);
        have_verts = state_->verts.has_value();
    }
    if (have_verts) {
        const auto& vs = vertices();
        if (vs.empty())
            return -1;
        std::vector<Vec> rows;
        rows.reserve(vs.size());
        for (const Vec& v : vs) {
            Vec r = v;
            r.push_back(Rational(1));
            rows.push_back(std::move(r));
        }
        return static_cast<long>(rank(Mat::from_rows(rows))) - 1;
    }

    // From the H-description alone: detect implied equalities by testing,
    // for each inequality, whether it can hold strictly.  The homogenized
    // system below is feasible exactly when some feasible point (or
    // recession direction, which a nonempty set absorbs) has a.x > b.
    const HRep& h = hrep();
    {
        ConstraintSystem sys(ambient_);
        for (const auto& hs : h.inequalities)
            sys.add_ge(hs.normal, hs.offset);
        for (const auto& hp : h.equalities)
            sys.add_eq(hp.normal, hp.offset);
        if (!sys.solve().feasible)
            return -1;
    }
    std::vector<Vec> eq_rows;
    for (const auto& hp : h.equalities)
        eq_rows.push_back(hp.normal);
    for (std::size_t i = 0; i < h.inequalities.size(); ++i) {
        ConstraintSystem sys(ambient_ + 1);
        auto lift = [&](const Vec& normal, const Rational& offset) {
            Vec row = normal;
            row.push_back(-offset);
            return row;
        };
        for (const auto& hs : h.inequalities)
            sys.add_ge(lift(hs.normal, hs.offset), Rational(0));
        for (const auto& hp : h.equalities)
            sys.add_eq(lift(hp.normal, hp.offset), Rational(0));
        Vec trow(ambient_ + 1, Rational(0));
        trow[ambient_] = 1;
        sys.add_ge(trow, Rational(0));
        Vec strict = lift(h.inequalities[i].normal, h.inequalities[i].offset);
        sys.add_ge(strict, Rational(1));
        if (!sys.solve().feasible)
            eq_rows.push_back(h.inequalities[i].normal);
    }
    if (eq_rows.empty())
        return static_cast<long>(ambient_);
    return static_cast<long>(ambient_) - static_cast<long>(rank(Mat::from_rows(eq_rows)));
}

bool Polytope::is_simplex() const
{
    return static_cast<long>(vertices().size()) == affine_dim() + 1;
}

Polytope::ContainsResult Polytope::contains(const Vec& point) const
{
    if (point.size() != ambient_)
        throw std::invalid_argument("Polytope::contains: dimension mismatch");
    const HRep& h = hrep();
    ContainsResult res;
    for (const auto& hp : h.equalities) {
        const Rational v = dot(hp.normal, point);
        if (v != hp.offset) {
            // Report the violated equality as a halfspace cut the point fails.
            if (v < hp.offset)
                res.violated = HalfSpace{hp.normal, hp.offset};
            else
                res.violated = HalfSpace{vec_scale(Rational(-1), hp.normal), -hp.offset};
            return res;
        }
    }
    for (std::size_t i = 0; i < h.inequalities.size(); ++i) {
        const Rational v = dot(h.inequalities[i].normal, point);
        if (v < h.inequalities[i].offset) {
            res.tight_inequalities.clear();
            res.violated = h.inequalities[i];
            return res;
        }
        if (v == h.inequalities[i].offset)
            res.tight_inequalities.push_back(i);
    }
    res.inside = true;
    return res;
}

Polytope vrep_to_hrep(const Polytope& p)
{
    Polytope q = p;
    q.hrep();
    return q;
}

Polytope hrep_to_vrep(const Polytope& p)
{
    Polytope q = p;
    q.vertices();
    return q;
}

}  // namespace gptk
