// Internal: shared LP skeleton for "does an affine map with these properties
// exist" questions.  Variables are the entries of the unknown homogeneous
// matrix; the skeleton pins unit preservation and keeps every source vertex's
// image inside the target tensor product (by facets for the maximal and
// intermediate kinds, by explicit convex weights over product vertices for
// the minimal kind, which avoids enumerating its facets).

#pragma once

#include "gptk/tensor.hpp"

namespace gptk::detail {

inline Vec homog_point(const Vec& x)
{
    Vec h = x;
    h.push_back(Rational(1));
    return h;
}

struct MapFeasibility {
    const StateSpace& source;
    const TensorSpace& target;
    std::size_t d, dt, hvars, nvars;
    std::vector<Vec> source_verts;
    ConstraintSystem sys;

    MapFeasibility(const StateSpace& s, const TensorSpace& t)
        : source(s),
          target(t),
          d(s.dim()),
          dt(t.dim()),
          hvars((dt + 1) * (d + 1)),
          nvars(hvars + (t.kind() == TensorKind::Minimal
                             ? s.geometry().vertices().size() * t.geometry().vertices().size()
                             : 0)),
          source_verts(s.geometry().vertices()),
          sys(nvars)
    {
        add_unit_rows();
        add_range_rows();
    }

    std::size_t hvar(std::size_t r, std::size_t c) const { return r * (d + 1) + c; }

    void accumulate_output(Vec& row, std::size_t r, const Vec& xh, const Rational& scale) const
    {
        for (std::size_t c = 0; c <= d; ++c)
            if (xh[c] != 0)
                row[hvar(r, c)] += scale * xh[c];
    }

    void add_unit_rows()
    {
        for (const Vec& v : source_verts) {
            Vec row(nvars, Rational(0));
            accumulate_output(row, dt, homog_point(v), Rational(1));
            sys.add_eq(std::move(row), Rational(1));
        }
    }

    void add_range_rows()
    {
        if (target.kind() == TensorKind::Minimal) {
            const auto& prods = target.geometry().vertices();
            const std::size_t np = prods.size();
            for (std::size_t vi = 0; vi < source_verts.size(); ++vi) {
                const Vec xh = homog_point(source_verts[vi]);
                for (std::size_t coord = 0; coord < dt; ++coord) {
                    Vec row(nvars, Rational(0));
                    accumulate_output(row, coord, xh, Rational(1));
                    for (std::size_t p = 0; p < np; ++p)
                        row[hvars + vi * np + p] -= prods[p][coord];
                    sys.add_eq(std::move(row), Rational(0));
                }
                Vec norm(nvars, Rational(0));
                for (std::size_t p = 0; p < np; ++p)
                    norm[hvars + vi * np + p] = 1;
                sys.add_eq(std::move(norm), Rational(1));
                for (std::size_t p = 0; p < np; ++p)
                    sys.mark_nonnegative(hvars + vi * np + p);
            }
        } else {
            const HRep& h = target.geometry().hrep();
            for (const Vec& v : source_verts) {
                const Vec xh = homog_point(v);
                for (const auto& hp : h.equalities) {
                    Vec row(nvars, Rational(0));
                    for (std::size_t coord = 0; coord < dt; ++coord)
                        if (hp.normal[coord] != 0)
                            accumulate_output(row, coord, xh, hp.normal[coord]);
                    sys.add_eq(std::move(row), hp.offset);
                }
                for (const auto& hs : h.inequalities) {
                    Vec row(nvars, Rational(0));
                    for (std::size_t coord = 0; coord < dt; ++coord)
                        if (hs.normal[coord] != 0)
                            accumulate_output(row, coord, xh, hs.normal[coord]);
                    sys.add_ge(std::move(row), hs.offset);
                }
            }
        }
    }

    void pin_image(const Vec& alpha, const Vec& target_point)
    {
        const Vec xh = homog_point(alpha);
        for (std::size_t coord = 0; coord < dt; ++coord) {
            Vec row(nvars, Rational(0));
            accumulate_output(row, coord, xh, Rational(1));
            sys.add_eq(std::move(row), target_point[coord]);
        }
    }

    void pin_coordinate(const Vec& alpha, std::size_t coord, const Rational& value)
    {
        Vec row(nvars, Rational(0));
        accumulate_output(row, coord, homog_point(alpha), Rational(1));
        sys.add_eq(std::move(row), value);
    }

    AffineMap extract(const Vec& witness) const
    {
        Mat hom(dt + 1, d + 1);
        for (std::size_t r = 0; r <= dt; ++r)
            for (std::size_t c = 0; c <= d; ++c)
                hom.at(r, c) = witness[hvar(r, c)];
        return AffineMap::from_hom(d, dt, std::move(hom));
    }
};

}  // namespace gptk::detail
