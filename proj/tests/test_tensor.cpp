#include "gptk/tensor.hpp"

#include "doctest.h"
#include "gptk/zoo.hpp"
#include "support/oracles.hpp"

#include <set>

using namespace gptk;

namespace {

bool is_vertex_of(const Polytope& p, const Vec& x)
{
    const auto& vs = p.vertices();
    return std::binary_search(vs.begin(), vs.end(), x,
                              [](const Vec& a, const Vec& b) { return lex_compare(a, b) < 0; });
}

/**
 * The eight extremal nonsignaling boxes of PR type for two binary-input
 * binary-output systems: output parity j xor k equals i*l xor alpha*i xor
 * beta*l xor gamma, every satisfying outcome weighted 1/2.
 */
std::vector<Vec> pr_boxes(const TensorSpace& t)
{
    std::vector<Vec> out;
    for (int alpha = 0; alpha < 2; ++alpha)
        for (int beta = 0; beta < 2; ++beta)
            for (int gamma = 0; gamma < 2; ++gamma) {
                Vec g(t.dim(), Rational(0));
                for (std::size_t i = 0; i < 2; ++i)
                    for (std::size_t j = 0; j < 2; ++j)
                        for (std::size_t l = 0; l < 2; ++l)
                            for (std::size_t k = 0; k < 2; ++k)
                                if ((j ^ k) == ((i & l) ^ (alpha * i) ^ (beta * l) ^ gamma))
                                    g[t.slot({2 * i + j, 2 * l + k})] = Rational(1, 2);
                for (std::size_t c = 0; c < 4; ++c) {
                    g[t.slot({c, 4})] = Rational(1, 2);
                    g[t.slot({4, c})] = Rational(1, 2);
                }
                out.push_back(std::move(g));
            }
    return out;
}

}  // namespace

TEST_CASE("classical tensor products collapse to the product simplex")
{
    StateSpace d2 = zoo::simplex(2);
    TensorSpace mx = TensorSpace::max_tensor(d2, d2);
    TensorSpace mn = TensorSpace::min_tensor(d2, d2);
    CHECK(mx.geometry().vertices().size() == 4);
    CHECK(mn.geometry().vertices().size() == 4);
    CHECK(mx.geometry().vertices() == mn.geometry().vertices());
    CHECK(mx.geometry().is_simplex());
    CHECK(mx.geometry().affine_dim() == 3);
}

TEST_CASE("square tensor square: 24 extremal boxes, 16 local and 8 PR type")
{
    StateSpace sq = zoo::square();
    TensorSpace mx = TensorSpace::max_tensor(sq, sq);
    TensorSpace mn = TensorSpace::min_tensor(sq, sq);

    REQUIRE(mx.geometry().vertices().size() == 24);
    REQUIRE(mn.geometry().vertices().size() == 16);
    CHECK(mx.geometry().affine_dim() == 8);
    CHECK(mn.geometry().affine_dim() == 8);

    // Every minimal vertex is a product of factor vertices and passes the
    // maximal facet description.
    for (const Vec& v : mn.geometry().vertices())
        CHECK(mx.geometry().contains(v).inside);

    std::set<Vec> entangled, separable;
    Vec center(4, Rational(1, 2));
    for (const Vec& v : mx.geometry().vertices()) {
        auto r = is_entangled(mn, v);
        if (r.entangled) {
            entangled.insert(v);
            // The separating functional verifies exactly.
            Vec vh = v;
            vh.push_back(Rational(1));
            CHECK(dot(r.separating.homogeneous(), vh) > 0);
            for (const Vec& p : mn.geometry().vertices()) {
                Vec ph = p;
                ph.push_back(Rational(1));
                CHECK(dot(r.separating.homogeneous(), ph) <= 0);
            }
            // PR-type vertices have uniform marginals.
            auto [m1, m2] = marginals(mx, v);
            CHECK(m1 == center);
            CHECK(m2 == center);
        } else {
            separable.insert(v);
            // The decomposition weights verify exactly.
            Vec mix(mx.dim(), Rational(0));
            const auto& prods = mn.geometry().vertices();
            for (std::size_t p = 0; p < prods.size(); ++p)
                if (r.decomposition[p] != 0)
                    mix = vec_add(mix, vec_scale(r.decomposition[p], prods[p]));
            CHECK(mix == v);
        }
    }
    CHECK(separable.size() == 16);
    CHECK(entangled.size() == 8);

    // The entangled ones are exactly the eight PR-type boxes.
    std::vector<Vec> prs = pr_boxes(mx);
    CHECK(entangled == std::set<Vec>(prs.begin(), prs.end()));
}

TEST_CASE("tensoring with the one-point space changes nothing")
{
    StateSpace sq = zoo::square();
    StateSpace pt = zoo::point();
    TensorSpace mx = TensorSpace::max_tensor(sq, pt);
    TensorSpace mn = TensorSpace::min_tensor(pt, sq);
    CHECK(mx.geometry().vertices().size() == 4);
    CHECK(mn.geometry().vertices().size() == 4);
    CHECK(mx.geometry().affine_dim() == 2);
    CHECK(mn.geometry().affine_dim() == 2);
}

TEST_CASE("marginals of product states recover the factors")
{
    StateSpace sq = zoo::square();
    StateSpace ff = zoo::firefly();
    TensorSpace t = TensorSpace::max_tensor(sq, ff);
    for (const Vec& a : sq.geometry().vertices())
        for (const Vec& b : ff.geometry().vertices()) {
            Vec p = product_state(t, a, b);
            CHECK(t.geometry().contains(p).inside);
            auto [m1, m2] = marginals(t, p);
            CHECK(m1 == a);
            CHECK(m2 == b);
        }

    // A mixture of products has the mixed marginals.
    const Vec a0 = sq.geometry().vertices()[0];
    const Vec a1 = sq.geometry().vertices()[1];
    const Vec b0 = ff.geometry().vertices()[0];
    Vec mix = vec_scale(Rational(1, 2), vec_add(product_state(t, a0, b0), product_state(t, a1, b0)));
    auto [m1, m2] = marginals(t, mix);
    CHECK(m1 == vec_scale(Rational(1, 2), vec_add(a0, a1)));
    CHECK(m2 == b0);
}

TEST_CASE("conditional states obey the product identity exactly")
{
    StateSpace sq = zoo::square();
    TensorSpace t = TensorSpace::max_tensor(sq, sq);
    ConeDesc rays = effect_cone_extreme_rays(sq);

    for (const Vec& omega : t.geometry().vertices()) {
        auto [m1, m2] = marginals(t, omega);
        for (const Vec& rayh : rays.extreme_rays) {
            AffineFunctional a = AffineFunctional::from_homogeneous(rayh);
            const Rational pa = a(m1);
            if (pa == 0) {
                CHECK_THROWS_AS(conditional(t, omega, a), undefined_conditional);
                continue;
            }
            Vec cond = conditional(t, omega, a);
            CHECK(sq.geometry().contains(cond).inside);
            // omega(a, b) = omega_1(a) * omega_{2,a}(b) for the coordinate effects.
            for (std::size_t j = 0; j < 4; ++j) {
                AffineFunctional b = AffineFunctional::coordinate(4, j);
                CHECK(evaluate_bilinear(t, omega, a, b) == pa * b(cond));
            }
        }
    }
}

TEST_CASE("conditioning a product state yields the other factor")
{
    StateSpace sq = zoo::square();
    TensorSpace t = TensorSpace::max_tensor(sq, sq);
    oracles::Rng rng(2525);
    for (int trial = 0; trial < 10; ++trial) {
        Vec alpha = oracles::random_state(rng, sq);
        Vec beta = oracles::random_state(rng, sq);
        Vec p = product_state(t, alpha, beta);
        AffineFunctional a = AffineFunctional::coordinate(4, 0);
        if (a(alpha) == 0)
            continue;
        CHECK(conditional(t, p, a) == beta);
    }
}

TEST_CASE("the PR box conditions to deterministic partner states")
{
    StateSpace sq = zoo::square();
    TensorSpace t = TensorSpace::max_tensor(sq, sq);
    Vec pr = pr_boxes(t)[0];  // parity rule j xor k = i and l
    // Condition on "first system: input 0 gave output 0".
    Vec cond = conditional(t, pr, AffineFunctional::coordinate(4, 0));
    // Partner: input 0 must give output 0, input 1 must give output 0.
    Vec expected{Rational(1), Rational(0), Rational(1), Rational(0)};
    CHECK(cond == expected);
}

TEST_CASE("swap is the factor-interchange involution")
{
    StateSpace sq = zoo::square();
    TensorSpace t = TensorSpace::max_tensor(sq, sq);
    for (const Vec& a : sq.geometry().vertices())
        for (const Vec& b : sq.geometry().vertices())
            CHECK(swap_state(t, product_state(t, a, b)) == product_state(t, b, a));
    for (const Vec& v : t.geometry().vertices())
        CHECK(swap_state(t, swap_state(t, v)) == v);

    StateSpace ff = zoo::firefly();
    TensorSpace mixed = TensorSpace::max_tensor(sq, ff);
    CHECK_THROWS_AS(swap_map(mixed), invalid_model);
}

TEST_CASE("pure-marginal sweep finds only product behaviour")
{
    StateSpace d2 = zoo::simplex(2);
    StateSpace sq = zoo::square();
    StateSpace ff = zoo::firefly();

    auto r1 = check_pure_marginal_lemma(TensorSpace::max_tensor(d2, d2));
    CHECK(r1.violations == 0);
    CHECK(r1.applicable_count == 4);

    auto r2 = check_pure_marginal_lemma(TensorSpace::max_tensor(sq, sq));
    CHECK(r2.violations == 0);
    CHECK(r2.applicable_count == 16);  // the 8 PR-type vertices have mixed marginals

    auto r3 = check_pure_marginal_lemma(TensorSpace::max_tensor(ff, d2));
    CHECK(r3.violations == 0);
    CHECK(r3.applicable_count == r3.entries.size());
}

TEST_CASE("maximal and minimal products share their affine dimension on zoo pairs")
{
    std::vector<StateSpace> zoo_small{zoo::simplex(2), zoo::simplex(3), zoo::square(),
                                      zoo::firefly()};
    for (const StateSpace& a : zoo_small)
        for (const StateSpace& b : zoo_small) {
            TensorSpace mx = TensorSpace::max_tensor(a, b);
            TensorSpace mn = TensorSpace::min_tensor(a, b);
            const long expected = static_cast<long>(a.functional_dim() * b.functional_dim()) - 1;
            CHECK(mx.geometry().affine_dim() == expected);
            CHECK(mn.geometry().affine_dim() == expected);
        }
}

TEST_CASE("monogamy: extreme points over a fixed PR marginal are products")
{
    StateSpace sq = zoo::square();
    TensorSpace t2 = TensorSpace::max_tensor(sq, sq);
    TensorSpace t3 = TensorSpace::max_tensor({sq, sq, sq});
    Vec pr = pr_boxes(t2)[0];
    Vec prfull = pr;
    prfull.push_back(Rational(1));

    HRep h = t3.geometry().hrep();
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            if (i == 4 && j == 4)
                continue;
            Vec normal(t3.dim(), Rational(0));
            normal[t3.slot({i, j, 4})] = 1;
            h.equalities.push_back({std::move(normal), prfull[t2.slot({i, j})]});
        }
    Polytope slice = Polytope::from_hrep(t3.dim(), std::move(h));
    REQUIRE(slice.vertices().size() == 4);

    std::set<Vec> expected;
    for (const Vec& v3 : sq.geometry().vertices()) {
        Vec v3h = v3;
        v3h.push_back(Rational(1));
        Vec g(t3.dim(), Rational(0));
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j)
                for (std::size_t k = 0; k < 5; ++k) {
                    if (i == 4 && j == 4 && k == 4)
                        continue;
                    const Rational& m12 = (i == 4 && j == 4) ? prfull.back() : prfull[t2.slot({i, j})];
                    g[t3.slot({i, j, k})] = m12 * v3h[k];
                }
        expected.insert(std::move(g));
    }
    std::set<Vec> got(slice.vertices().begin(), slice.vertices().end());
    CHECK(got == expected);

    // Its 1-2 marginal really is the PR box we fixed.
    for (const Vec& v : slice.vertices())
        CHECK(marginal_onto(t3, v, {0, 1}) == pr);
}

TEST_CASE("intermediate tensor products validate their sandwich")
{
    StateSpace sq = zoo::square();
    TensorSpace mn = TensorSpace::min_tensor(sq, sq);
    TensorSpace mx = TensorSpace::max_tensor(sq, sq);

    // The hull of the products plus one PR box sits strictly between.
    std::vector<Vec> verts = mn.geometry().vertices();
    verts.push_back(pr_boxes(mx)[0]);
    Polytope middle = Polytope::from_vertices(mx.dim(), verts);
    TensorSpace mid = TensorSpace::intermediate(sq, sq, middle);
    CHECK(mid.kind() == TensorKind::Intermediate);
    CHECK(mid.geometry().vertices().size() == 17);

    // A polytope escaping the maximal product is rejected.
    std::vector<Vec> bad = mn.geometry().vertices();
    Vec outside = bad[0];
    outside[0] += 2;
    bad.push_back(outside);
    CHECK_THROWS_AS(TensorSpace::intermediate(sq, sq, Polytope::from_vertices(mx.dim(), bad)),
                    invalid_model);
}

TEST_CASE("tensor products of positive maps stay positive at desk scale")
{
    oracles::Rng rng(8787);
    StateSpace sq = zoo::square();
    TensorSpace t = TensorSpace::max_tensor(sq, sq);
    for (int trial = 0; trial < 5; ++trial) {
        Observable o1 = oracles::random_observable(rng, sq, 2);
        Observable o2 = oracles::random_observable(rng, sq, 3);
        std::vector<Vec> p1, p2;
        for (std::size_t i = 0; i < 2; ++i)
            p1.push_back(oracles::random_state(rng, sq));
        for (std::size_t i = 0; i < 3; ++i)
            p2.push_back(oracles::random_state(rng, sq));
        AffineMap f = measure_and_prepare(sq, o1, p1, sq);
        AffineMap g = measure_and_prepare(sq, o2, p2, sq);
        AffineMap fg = AffineMap::from_hom(t.dim(), t.dim(), kronecker(f.hom, g.hom));
        for (const Vec& v : t.geometry().vertices())
            CHECK(t.geometry().contains(fg.apply(v)).inside);
    }
}
