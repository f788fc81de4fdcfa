#include "gptk/model.hpp"

#include "doctest.h"
#include "gptk/zoo.hpp"
#include "support/oracles.hpp"

#include <set>

using namespace gptk;

namespace {

// Functionals compare as classes through their vertex value vectors.
std::set<Vec> value_set(const StateSpace& s, const std::vector<AffineFunctional>& fs)
{
    std::set<Vec> out;
    for (const auto& f : fs)
        out.insert(s.vertex_values(f));
    return out;
}

std::set<Vec> ray_value_set(const StateSpace& s, const std::vector<Vec>& homog_rays)
{
    std::set<Vec> out;
    for (const Vec& r : homog_rays)
        out.insert(canonicalize_ray(s.vertex_values(AffineFunctional::from_homogeneous(r))));
    return out;
}

Vec support_state(const StateSpace& s, std::initializer_list<const char*> names)
{
    Vec v(s.dim(), Rational(0));
    for (const char* n : names) {
        auto it = std::find(s.coordinate_labels().begin(), s.coordinate_labels().end(), n);
        REQUIRE(it != s.coordinate_labels().end());
        v[static_cast<std::size_t>(it - s.coordinate_labels().begin())] = 1;
    }
    return v;
}

}  // namespace

TEST_CASE("single test gives the classical simplex")
{
    StateSpace d3 = zoo::simplex(3);
    CHECK(d3.geometry().vertices().size() == 3);
    CHECK(d3.affine_dim() == 2);
    CHECK(d3.geometry().is_simplex());
    for (const Vec& v : d3.geometry().vertices())
        CHECK(d3.unit()(v) == 1);
}

TEST_CASE("two disjoint binary tests give the square")
{
    StateSpace sq = zoo::square();
    CHECK(sq.geometry().vertices().size() == 4);
    CHECK(sq.affine_dim() == 2);
    CHECK(sq.functional_dim() == 3);
    CHECK_FALSE(sq.geometry().is_simplex());
}

TEST_CASE("firefly loop has exactly the five known pure states")
{
    StateSpace ff = zoo::firefly();
    REQUIRE(ff.geometry().vertices().size() == 5);
    CHECK(ff.affine_dim() == 3);

    std::set<Vec> expected;
    expected.insert(support_state(ff, {"a", "y"}));
    expected.insert(support_state(ff, {"b", "z"}));
    expected.insert(support_state(ff, {"c", "x"}));
    expected.insert(support_state(ff, {"x", "y", "z"}));
    Vec half(ff.dim(), Rational(0));
    for (const char* n : {"a", "b", "c"}) {
        auto it = std::find(ff.coordinate_labels().begin(), ff.coordinate_labels().end(), n);
        half[static_cast<std::size_t>(it - ff.coordinate_labels().begin())] = Rational(1, 2);
    }
    expected.insert(half);

    std::set<Vec> got(ff.geometry().vertices().begin(), ff.geometry().vertices().end());
    CHECK(got == expected);
}

TEST_CASE("doubly stochastic test space is the Birkhoff polytope")
{
    StateSpace bk = zoo::birkhoff();
    CHECK(bk.geometry().vertices().size() == 6);
    CHECK(bk.affine_dim() == 4);
    CHECK_FALSE(bk.geometry().is_simplex());
    for (const Vec& v : bk.geometry().vertices())
        for (const Rational& x : v)
            CHECK((x == 0 || x == 1));  // permutation matrices
}

TEST_CASE("inconsistent test space reports a certificate")
{
    TestSpace t;
    t.outcomes = {"x", "y"};
    t.tests = {{0, 1}, {0}, {1}};
    try {
        state_space_from_test_space(t);
        FAIL("expected invalid_model");
    } catch (const invalid_model& e) {
        CHECK(std::string(e.what()).find("certificate") != std::string::npos);
    }
}

TEST_CASE("effect cone rays of simplices and the interval")
{
    StateSpace d3 = zoo::simplex(3);
    ConeDesc cone = effect_cone_extreme_rays(d3);
    std::set<Vec> expected;
    for (std::size_t i = 0; i < 3; ++i)
        expected.insert(canonicalize_ray(d3.vertex_values(AffineFunctional::coordinate(3, i))));
    CHECK(ray_value_set(d3, cone.extreme_rays) == expected);

    StateSpace d2 = zoo::simplex(2);
    ConeDesc cone2 = effect_cone_extreme_rays(d2);
    REQUIRE(cone2.extreme_rays.size() == 2);
    AffineFunctional x = AffineFunctional::coordinate(2, 0);
    AffineFunctional one_minus_x = AffineFunctional::constant_one(2) - x;
    std::set<Vec> expected2{canonicalize_ray(d2.vertex_values(x)),
                            canonicalize_ray(d2.vertex_values(one_minus_x))};
    CHECK(ray_value_set(d2, cone2.extreme_rays) == expected2);
}

TEST_CASE("effect cone of the square is generated by the four outcome probabilities")
{
    StateSpace sq = zoo::square();
    ConeDesc cone = effect_cone_extreme_rays(sq);
    REQUIRE(cone.extreme_rays.size() == 4);
    std::set<Vec> expected;
    for (std::size_t i = 0; i < 4; ++i)
        expected.insert(canonicalize_ray(sq.vertex_values(AffineFunctional::coordinate(4, i))));
    CHECK(ray_value_set(sq, cone.extreme_rays) == expected);
}

TEST_CASE("minimal informationally complete observable on the zoo")
{
    for (const StateSpace& s : {zoo::simplex(2), zoo::simplex(3), zoo::simplex(4), zoo::square(),
                                zoo::firefly(), zoo::birkhoff(), zoo::point()}) {
        Observable ic = minimal_ic_observable(s);
        CHECK(ic.effects.size() == s.functional_dim());
        s.require_observable(ic, "test");
        CHECK(is_informationally_complete(s, ic));

        std::vector<Vec> rows;
        for (const auto& e : ic.effects)
            rows.push_back(s.vertex_values(e));
        CHECK(rank(Mat::from_rows(rows)) == s.functional_dim());
    }
}

TEST_CASE("simplex indicators are recovered as the minimal IC observable")
{
    StateSpace d3 = zoo::simplex(3);
    Observable ic = minimal_ic_observable(d3);
    std::set<Vec> expected;
    for (std::size_t i = 0; i < 3; ++i)
        expected.insert(d3.vertex_values(AffineFunctional::coordinate(3, i)));
    std::set<Vec> got = value_set(d3, ic.effects);
    CHECK(got == expected);
}

TEST_CASE("one-point state space gets the unit observable")
{
    StateSpace pt = zoo::point();
    Observable ic = minimal_ic_observable(pt);
    REQUIRE(ic.effects.size() == 1);
    CHECK(ic.effects[0](pt.geometry().vertices()[0]) == 1);
}

TEST_CASE("informational completeness is a rank condition")
{
    StateSpace d3 = zoo::simplex(3);
    Observable indicators;
    for (std::size_t i = 0; i < 3; ++i)
        indicators.effects.push_back(AffineFunctional::coordinate(3, i));
    CHECK(is_informationally_complete(d3, indicators));

    StateSpace d2 = zoo::simplex(2);
    Observable unit_only{{AffineFunctional::constant_one(2)}};
    CHECK_FALSE(is_informationally_complete(d2, unit_only));

    // The two effects of one square test span only two dimensions of three.
    StateSpace sq = zoo::square();
    Observable one_test;
    one_test.effects.push_back(AffineFunctional::coordinate(4, 0));
    one_test.effects.push_back(AffineFunctional::coordinate(4, 1));
    sq.require_observable(one_test, "one test");
    CHECK_FALSE(is_informationally_complete(sq, one_test));
}

TEST_CASE("dual map separates states exactly when informationally complete")
{
    StateSpace sq = zoo::square();
    Observable ic = minimal_ic_observable(sq);
    AffineMap f = dual_map(sq, ic);
    std::set<Vec> images;
    for (const Vec& v : sq.geometry().vertices())
        images.insert(f.apply(v));
    CHECK(images.size() == sq.geometry().vertices().size());

    Observable unit_only{{AffineFunctional::constant_one(4)}};
    AffineMap g = dual_map(sq, unit_only);
    for (const Vec& v : sq.geometry().vertices())
        CHECK(g.apply(v) == Vec{Rational(1)});
}

TEST_CASE("dual map of the simplex indicators is the identity")
{
    StateSpace d3 = zoo::simplex(3);
    Observable indicators;
    for (std::size_t i = 0; i < 3; ++i)
        indicators.effects.push_back(AffineFunctional::coordinate(3, i));
    AffineMap f = dual_map(d3, indicators);
    for (const Vec& v : d3.geometry().vertices())
        CHECK(f.apply(v) == v);
}

TEST_CASE("measure-and-prepare maps")
{
    StateSpace d2 = zoo::simplex(2);
    const auto& verts = d2.geometry().vertices();

    Observable unit_only{{AffineFunctional::constant_one(2)}};
    AffineMap constant = measure_and_prepare(d2, unit_only, {verts[0]}, d2);
    for (const Vec& v : verts)
        CHECK(constant.apply(v) == verts[0]);

    Observable indicators;
    indicators.effects.push_back(AffineFunctional::coordinate(2, 0));
    indicators.effects.push_back(AffineFunctional::coordinate(2, 1));
    // Prepare exactly the state each indicator flags.
    std::vector<Vec> prepared;
    for (const auto& e : indicators.effects)
        for (const Vec& v : verts)
            if (e(v) == 1)
                prepared.push_back(v);
    AffineMap ident = measure_and_prepare(d2, indicators, prepared, d2);
    for (const Vec& v : verts)
        CHECK(ident.apply(v) == v);
}

TEST_CASE("measure-and-prepare is affine on random midpoints")
{
    oracles::Rng rng(5151);
    StateSpace sq = zoo::square();
    Observable obs = oracles::random_observable(rng, sq, 3);
    std::vector<Vec> prepared;
    for (std::size_t i = 0; i < 3; ++i)
        prepared.push_back(oracles::random_state(rng, sq));
    AffineMap phi = measure_and_prepare(sq, obs, prepared, sq);
    for (int trial = 0; trial < 20; ++trial) {
        Vec a = oracles::random_state(rng, sq);
        Vec b = oracles::random_state(rng, sq);
        Vec mid = vec_scale(Rational(1, 2), vec_add(a, b));
        CHECK(phi.apply(mid) ==
              vec_scale(Rational(1, 2), vec_add(phi.apply(a), phi.apply(b))));
    }
}

TEST_CASE("pull-backs preserve observables and informational completeness")
{
    StateSpace sq = zoo::square();
    Observable ic = minimal_ic_observable(sq);

    Observable same = pull_back(AffineMap::identity(4), ic);
    CHECK(value_set(sq, same.effects) == value_set(sq, ic.effects));

    const Vec delta = sq.geometry().vertices()[0];
    Observable consts = pull_back(AffineMap::constant(4, delta), ic);
    for (std::size_t i = 0; i < consts.effects.size(); ++i)
        for (const Vec& v : sq.geometry().vertices())
            CHECK(consts.effects[i](v) == ic.effects[i](delta));

    // Pulling an IC observable back along an injective map stays IC.
    StateSpace d3 = zoo::simplex(3);
    AffineMap inj = dual_map(sq, ic);  // injective into the 3-outcome simplex
    Observable ind;
    for (std::size_t i = 0; i < 3; ++i)
        ind.effects.push_back(AffineFunctional::coordinate(3, i));
    Observable pulled = pull_back(inj, ind);
    sq.require_observable(pulled, "pulled");
    CHECK(is_informationally_complete(sq, pulled));
}

TEST_CASE("every zoo vertex sees effects in the unit interval exactly")
{
    for (const StateSpace& s : {zoo::simplex(3), zoo::square(), zoo::firefly(), zoo::birkhoff()}) {
        Observable ic = minimal_ic_observable(s);
        for (const Vec& v : s.geometry().vertices()) {
            Rational sum = 0;
            for (const auto& e : ic.effects) {
                const Rational val = e(v);
                CHECK(val >= 0);
                CHECK(val <= 1);
                sum += val;
            }
            CHECK(sum == 1);
        }
    }
}
