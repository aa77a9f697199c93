#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hypermatch/affinity.hpp"
#include "oracles.hpp"

using namespace hypermatch;

namespace {

PointSet random_points(std::size_t n, std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    PointSet ps(n);
    for (auto& p : ps)
        p = {g(rng), g(rng)};
    return ps;
}

}  // namespace

TEST_CASE("triangle features")
{
    const PointSet eq{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}};
    const auto f = triangle_feature(eq, {0, 1, 2});
    REQUIRE(f);
    for (double v : *f)
        CHECK(v == doctest::Approx(std::sqrt(3.0) / 2));

    const PointSet rt{{0, 0}, {1, 0}, {0, 1}};
    const auto g = triangle_feature(rt, {0, 1, 2});
    REQUIRE(g);
    CHECK((*g)[0] == doctest::Approx(1.0));
    CHECK((*g)[1] == doctest::Approx(std::sqrt(2.0) / 2));
    CHECK((*g)[2] == doctest::Approx(std::sqrt(2.0) / 2));

    const PointSet big{{0, 0}, {2, 0}, {0, 2}};
    const auto h = triangle_feature(big, {0, 1, 2});
    REQUIRE(h);
    for (int i = 0; i < 3; ++i)
        CHECK((*h)[i] == doctest::Approx((*g)[i]).epsilon(1e-14));

    const PointSet line{{0, 0}, {1, 0}, {2, 0}};
    CHECK_FALSE(triangle_feature(line, {0, 1, 2}));
    const PointSet dup{{0, 0}, {0, 0}, {1, 1}};
    CHECK_FALSE(triangle_feature(dup, {0, 1, 2}));
    CHECK_THROWS_AS(triangle_feature(rt, {0, 1, 3}), DimensionError);
    CHECK_THROWS_AS(triangle_feature(rt, {0, 1, 1}), InvalidInput);
}

TEST_CASE("identical point sets give unit identity entries")
{
    const PointSet p{{0, 0}, {1, 0.2}, {0.3, 1.1}, {1.4, 1.3}};
    const AffinityTensor at = build_tensor(p, p, SamplingConfig{});
    const MatchingShape s(4, 4);
    CHECK(at.tensor.shape() == s);
    CHECK(at.p_triples == 4);
    double maxv = 0.0;
    for (const auto& o : at.tensor.orbits())
        maxv = std::max(maxv, o.value);
    CHECK(maxv <= 1.0);
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = a + 1; b < 4; ++b)
            for (std::size_t c = b + 1; c < 4; ++c)
                CHECK(at.tensor.at(s.index(a, a), s.index(b, b), s.index(c, c)) == 1.0);
    const Vector x = Assignment::identity(s).indicator();
    CHECK(eval_s3(at.tensor, x) == doctest::Approx(6.0 * 4));
    CHECK(oracle::s3_best(at.tensor) == doctest::Approx(eval_s3(at.tensor, x)));
}

TEST_CASE("build_tensor validation and determinism")
{
    std::mt19937_64 rng(9);
    const PointSet p = random_points(8, rng), q = random_points(12, rng);
    SamplingConfig sc;
    sc.triples_per_point = 3;
    sc.knn = 20;
    sc.seed = 5;
    const AffinityTensor a = build_tensor(p, q, sc), b = build_tensor(p, q, sc);
    CHECK(a.tensor.orbits().size() == b.tensor.orbits().size());
    CHECK(std::equal(a.tensor.orbits().begin(), a.tensor.orbits().end(), b.tensor.orbits().begin()));
    CHECK(a.p_triples == 24);
    CHECK(a.gamma > 0.0);

    AffinityParams fixed;
    fixed.gamma = 2.0;
    CHECK(build_tensor(p, q, sc, fixed).gamma == 2.0);

    CHECK_THROWS_AS(build_tensor(PointSet(p.begin(), p.begin() + 2), q, sc), InvalidInput);
    CHECK_THROWS_AS(build_tensor(q, p, sc), InvalidInput);
    PointSet bad = p;
    bad[0].x = NAN;
    CHECK_THROWS_AS(build_tensor(bad, q, sc), InvalidInput);
}

TEST_CASE("entries decrease with feature distance")
{
    std::mt19937_64 rng(10);
    const PointSet p = random_points(6, rng), q = random_points(7, rng);
    SamplingConfig sc;
    sc.knn = 5;
    AffinityParams ap;
    ap.gamma = 1.5;
    const AffinityTensor at = build_tensor(p, q, sc, ap);
    const MatchingShape s(6, 7);
    for (const auto& o : at.tensor.orbits()) {
        const std::size_t r[3] = {s.row_of(o.i), s.row_of(o.j), s.row_of(o.k)};
        const std::size_t c[3] = {s.col_of(o.i), s.col_of(o.j), s.col_of(o.k)};
        const auto fp = triangle_feature(p, {r[0], r[1], r[2]});
        const auto fq = triangle_feature(q, {c[0], c[1], c[2]});
        REQUIRE(fp);
        REQUIRE(fq);
        double d2 = 0.0;
        for (int i = 0; i < 3; ++i)
            d2 += ((*fp)[i] - (*fq)[i]) * ((*fp)[i] - (*fq)[i]);
        CHECK(o.value == doctest::Approx(std::exp(-1.5 * d2)).epsilon(1e-12));
    }
}

TEST_CASE("second-order matrix")
{
    const PointSet p{{0, 0}, {1, 0}, {0, 2}};
    const QapMatrix a = build_matrix2(p, p);
    const MatchingShape s(3, 3);
    CHECK(a.matrix()(s.index(0, 0), s.index(1, 1)) == doctest::Approx(1.0));
    // Pair (0->0, 1->2): |d(p0,p1) - d(q0,q2)| = |1 - 2| = sigma_s.
    AffinityParams ap;
    ap.sigma_s = 1.0;
    const QapMatrix b = build_matrix2(p, p, ap);
    CHECK(b.matrix()(s.index(0, 0), s.index(1, 2)) == doctest::Approx(std::exp(-1.0)));
    CHECK(b.matrix()(s.index(0, 0), s.index(1, 0)) == 0.0);
}
