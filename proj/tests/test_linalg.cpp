#include "gptk/linalg.hpp"

#include "doctest.h"
#include "support/oracles.hpp"

using namespace gptk;

namespace {

Vec rv(std::initializer_list<const char*> xs)
{
    Vec v;
    for (const char* x : xs)
        v.push_back(parse_rational(x));
    return v;
}

Mat rm(std::initializer_list<std::initializer_list<const char*>> rows)
{
    std::vector<Vec> rs;
    for (const auto& r : rows)
        rs.push_back(rv(r));
    return Mat::from_rows(rs);
}

}  // namespace

TEST_CASE("rationals parse and print in lowest terms")
{
    CHECK(format_rational(parse_rational("2/4")) == "1/2");
    CHECK(format_rational(parse_rational("-6/4")) == "-3/2");
    CHECK(format_rational(parse_rational("7")) == "7");
    CHECK(format_rational(parse_rational("0/5")) == "0");
    CHECK(format_rational(parse_rational("2/4") + parse_rational("-3/6")) == "0");
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("nullspace basis follows the reduced echelon convention")
{
    CHECK(nullspace_basis(Mat::identity(2)).empty());

    auto zero = nullspace_basis(Mat(2, 2));
    REQUIRE(zero.size() == 2);
    CHECK(zero[0] == rv({"0", "1"}));
    CHECK(zero[1] == rv({"1", "0"}));

    auto line = nullspace_basis(rm({{"1", "-1"}, {"0", "0"}}));
    REQUIRE(line.size() == 1);
    CHECK(line[0] == rv({"1", "1"}));
}

TEST_CASE("nullspace vectors satisfy m x = 0 exactly on random matrices")
{
    oracles::Rng rng(7001);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<std::size_t> dim(1, 6);
        Mat m(dim(rng), dim(rng));
        for (auto& x : m.data)
            x = oracles::random_rational(rng);
        for (const Vec& v : nullspace_basis(m))
            CHECK(is_zero_vec(mat_vec(m, v)));
    }
}

TEST_CASE("solve_affine returns particular solutions and detects inconsistency")
{
    auto s1 = solve_affine(Mat::identity(2), rv({"3/2", "-1"}));
    REQUIRE(s1.consistent);
    CHECK(s1.particular == rv({"3/2", "-1"}));
    CHECK(s1.nullspace.empty());

    auto s2 = solve_affine(rm({{"1", "1"}}), rv({"1"}));
    REQUIRE(s2.consistent);
    CHECK(s2.particular == rv({"1", "0"}));
    REQUIRE(s2.nullspace.size() == 1);
    CHECK(s2.nullspace[0] == rv({"1", "-1"}));

    auto s3 = solve_affine(rm({{"1"}, {"1"}}), rv({"0", "1"}));
    CHECK_FALSE(s3.consistent);
}

TEST_CASE("solve_affine particular solution verifies exactly on random systems")
{
    oracles::Rng rng(7002);
    for (int trial = 0; trial < 50; ++trial) {
        std::uniform_int_distribution<std::size_t> dim(1, 5);
        const std::size_t rows = dim(rng), cols = dim(rng);
        Mat m(rows, cols);
        for (auto& x : m.data)
            x = oracles::random_rational(rng);
        Vec x0(cols);
        for (auto& x : x0)
            x = oracles::random_rational(rng);
        const Vec b = mat_vec(m, x0);  // guaranteed consistent
        auto sol = solve_affine(m, b);
        REQUIRE(sol.consistent);
        CHECK(mat_vec(m, sol.particular) == b);
    }
}

TEST_CASE("canonicalize scales the first nonzero entry to 1")
{
    CHECK(canonicalize(rv({"2", "4"})) == rv({"1", "2"}));
    CHECK(canonicalize(rv({"0", "-3", "6"})) == rv({"0", "1", "-2"}));
    CHECK(canonicalize(rv({"1/3", "1/3"})) == rv({"1", "1"}));
    CHECK_THROWS_AS(canonicalize(rv({"0", "0"})), std::invalid_argument);
}

TEST_CASE("canonicalize is idempotent and positive-scale invariant")
{
    oracles::Rng rng(7003);
    for (int trial = 0; trial < 100; ++trial) {
        Vec v(4);
        for (auto& x : v)
            x = oracles::random_rational(rng);
        if (is_zero_vec(v))
            continue;
        const Vec c = canonicalize(v);
        CHECK(canonicalize(c) == c);
        std::uniform_int_distribution<long> num(1, 5), den(1, 5);
        const Rational scale(num(rng), den(rng));
        CHECK(canonicalize(vec_scale(scale, v)) == c);
        CHECK(canonicalize_ray(vec_scale(scale, v)) == canonicalize_ray(v));
    }
}

TEST_CASE("inverse and kronecker behave on small exact examples")
{
    Mat m = rm({{"1", "2"}, {"3", "5"}});
    CHECK(mat_mul(m, inverse(m)) == Mat::identity(2));
    CHECK_THROWS_AS(inverse(rm({{"1", "2"}, {"2", "4"}})), std::domain_error);

    Mat a = rm({{"1", "2"}});
    Mat b = rm({{"0", "3"}});
    Mat k = kronecker(a, b);
    REQUIRE(k.rows == 1);
    REQUIRE(k.cols == 4);
    CHECK(k.row(0) == rv({"0", "3", "0", "6"}));
}
