#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hypermatch/selfcheck.hpp"
#include "hypermatch/tensor.hpp"
#include "oracles.hpp"

using namespace hypermatch;

namespace {

Vector basis(std::size_t n, std::initializer_list<std::size_t> one_based)
{
    Vector v = Vector::Zero(static_cast<Eigen::Index>(n));
    for (auto i : one_based)
        v[static_cast<Eigen::Index>(i - 1)] = 1.0;
    return v;
}

SparseTensor3 single(MatchingShape shape, std::size_t a, std::size_t b, std::size_t c, double v = 1.0)
{
    const std::vector<TripleEntry> e{{a - 1, b - 1, c - 1, v}};
    return SparseTensor3::from_entries(shape, e);
}

}  // namespace

TEST_CASE("from_entries canonicalizes and validates")
{
    const MatchingShape s(2, 3);
    const std::vector<TripleEntry> e{{4, 0, 2, 1.0}, {2, 4, 0, 0.5}, {1, 3, 5, 2.0}};
    const auto t = SparseTensor3::from_entries(s, e);
    REQUIRE(t.orbits().size() == 2);
    CHECK(t.orbits()[0] == Orbit{0, 2, 4, 1.5});
    CHECK(t.at(4, 2, 0) == 1.5);
    CHECK(t.at(0, 0, 2) == 0.0);

    const std::vector<TripleEntry> rep{{1, 1, 2, 1.0}};
    CHECK_THROWS_AS(SparseTensor3::from_entries(s, rep), InvalidInput);
    const std::vector<TripleEntry> neg{{0, 1, 2, -1.0}};
    CHECK_THROWS_AS(SparseTensor3::from_entries(s, neg), InvalidInput);
    const std::vector<TripleEntry> nan{{0, 1, 2, std::nan("")}};
    CHECK_THROWS_AS(SparseTensor3::from_entries(s, nan), InvalidInput);
    const std::vector<TripleEntry> out{{0, 1, 6, 1.0}};
    CHECK_THROWS_AS(SparseTensor3::from_entries(s, out), DimensionError);
}

TEST_CASE("eval_s3 examples")
{
    const MatchingShape s(3, 3);
    const auto t = single(s, 1, 2, 3);
    CHECK(eval_s3(t, basis(9, {1, 2, 3})) == 6.0);
    CHECK(eval_s3(t, basis(9, {1})) == 0.0);
    CHECK(eval_s3(SparseTensor3(s), Vector::Ones(9)) == 0.0);
    CHECK_THROWS_AS(eval_s3(t, Vector::Ones(4)), DimensionError);
    Vector bad = Vector::Ones(9);
    bad[0] = INFINITY;
    CHECK_THROWS_AS(eval_s3(t, bad), InvalidInput);
}

TEST_CASE("third-order contractions match the dense oracle")
{
    const MatchingShape s(2, 2);
    const auto t = single(s, 1, 2, 3);
    Vector v = contract3_vec(t, basis(4, {1}), basis(4, {2}));
    CHECK(v.isApprox(basis(4, {3})));
    CHECK(contract3_vec(t, basis(4, {1}), basis(4, {1})).isZero());
    CHECK(contract3_vec(t, Vector::Zero(4), Vector::Zero(4)).isZero());
    Matrix m = contract3_mat(t, basis(4, {1}));
    Matrix want = Matrix::Zero(4, 4);
    want(1, 2) = want(2, 1) = 1.0;
    CHECK(m == want);
    CHECK(contract3_mat(t, Vector::Zero(4)).isZero());

    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        const MatchingShape sh(3, 4);
        const auto rt = random_tensor(sh, 40, rng());
        const auto d = oracle::densify(rt);
        const Vector x = oracle::gaussian(12, rng), y = oracle::gaussian(12, rng), z = oracle::gaussian(12, rng);
        CHECK(oracle::rel_close(eval_f3(rt, x, y, z), oracle::f3(d, x, y, z), 1e-12));
        CHECK(oracle::rel_close(eval_s3(rt, x), oracle::f3(d, x, x, x), 1e-12));
        Vector cv(12);
        for (std::size_t l = 0; l < 12; ++l)
            cv[l] = oracle::f3(d, x, y, basis(12, {l + 1}));
        CHECK(oracle::rel_err(contract3_vec(rt, x, y), cv) < 1e-12);
    }
}

TEST_CASE("G4 examples")
{
    const Vector one = Vector::Ones(2);
    CHECK(eval_g4(one, one, one, one) == doctest::Approx(4.0));
    const Vector a = basis(2, {1}), b = basis(2, {2});
    CHECK(eval_g4(a, b, a, b) == doctest::Approx(1.0 / 3.0));
    CHECK(eval_g4(one, Vector::Zero(2), Vector::Zero(2), Vector::Zero(2)) == 0.0);
    CHECK_THROWS_AS(eval_g4(one, Vector::Ones(3), one, one), DimensionError);
}

TEST_CASE("lifted contractions examples")
{
    const MatchingShape s(2, 2);
    const auto t = single(s, 1, 2, 3);
    const LiftedOperator op(t, 0.0);
    // F4_{123l} = F_123 + F_12l + F_13l + F_23l: 2 for l in {1,2,3}, 1 for l = 4.
    const Vector v = lift_contract_vec(op, basis(4, {1}), basis(4, {2}), basis(4, {3}));
    CHECK(v.isApprox(Vector::Map(std::vector<double>{2, 2, 2, 1}.data(), 4)));
    const auto d = oracle::densify(t);
    CHECK(oracle::rel_err(v, oracle::f4_vec(d, 0.0, basis(4, {1}), basis(4, {2}), basis(4, {3}))) < 1e-14);

    const SparseTensor3 zero(s);
    const LiftedOperator opz(zero, 0.0);
    CHECK(lift_contract_vec(opz, Vector::Ones(4), Vector::Ones(4), Vector::Ones(4)).isZero());
    CHECK(lift_contract_mat(opz, Vector::Ones(4), Vector::Ones(4)).isZero());
    CHECK_THROWS_AS(LiftedOperator(t, -1.0), InvalidInput);
}

TEST_CASE("eval_f4_alpha on an identity-supporting orbit")
{
    const MatchingShape s(3, 3);
    const auto t = single(s, 1, 5, 9);
    const LiftedOperator op(t, 0.0);
    const Vector x = basis(9, {1, 5, 9});
    CHECK(eval_f4_alpha(op, x, x, x, x) == doctest::Approx(72.0));
    CHECK(oracle::f4(oracle::densify(t), 0.0, x, x, x, x) == doctest::Approx(72.0));
    const Vector z = Vector::Zero(9);
    CHECK(eval_f4_alpha(op, z, z, z, z) == 0.0);
}

TEST_CASE("eval_s4_alpha")
{
    const MatchingShape s(2, 3);
    const SparseTensor3 zero(s);
    Vector x = Vector::Zero(6);
    x[0] = x[1] = 1.0;
    CHECK(eval_s4_alpha(LiftedOperator(zero, 1.0), x) == doctest::Approx(4.0));
    CHECK(eval_s4_alpha(LiftedOperator(zero, 1.0), Vector::Zero(6)) == 0.0);

    std::mt19937_64 rng(3);
    const MatchingShape sh(4, 5);
    const auto t = random_tensor(sh, 60, rng());
    const LiftedOperator op(t, 2.5);
    for (const auto& rm : oracle::injections(sh)) {
        const Vector xi = oracle::indicator(sh, rm);
        const double want = 4.0 * 4.0 * eval_s3(t, xi) + 2.5 * 16.0;
        CHECK(oracle::rel_close(eval_s4_alpha(op, xi), want, 1e-12));
    }
}

TEST_CASE("norms")
{
    const MatchingShape s(3, 3);
    CHECK(f3_norm(single(s, 1, 2, 3)) == doctest::Approx(std::sqrt(6.0)));
    CHECK(f3_norm(SparseTensor3(s)) == 0.0);
    const std::vector<TripleEntry> two{{0, 1, 2, 1.0}, {3, 4, 5, 2.0}};
    CHECK(f3_norm(SparseTensor3::from_entries(s, two)) == doctest::Approx(std::sqrt(30.0)));
    CHECK(alpha_bound(single(s, 1, 2, 3)) == doctest::Approx(36.0 * std::sqrt(6.0)));
    CHECK(alpha_bound(SparseTensor3(s)) == 0.0);
    CHECK(f4_norm_exact(SparseTensor3(s)) == 0.0);

    const auto t = single(s, 1, 2, 3);
    CHECK(f4_norm_exact(t) == doctest::Approx(oracle::f4_norm(oracle::densify(t))).epsilon(1e-12));
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 5; ++rep) {
        const auto rt = random_tensor(MatchingShape(3, 4), 50, rng());
        const double exact = f4_norm_exact(rt);
        CHECK(exact == doctest::Approx(oracle::f4_norm(oracle::densify(rt))).epsilon(1e-12));
        CHECK(3.0 * exact <= alpha_bound(rt));
    }
    CHECK_THROWS_AS(f4_norm_exact(random_tensor(MatchingShape(7, 7), 10, 1)), ThresholdError);
}

TEST_CASE("lifted contractions agree with the O(n^4) expansion")
{
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        const MatchingShape sh(3, 3);
        const auto t = random_tensor(sh, 30, rng());
        const auto d = oracle::densify(t);
        const double alpha = 0.7 * rep;
        const LiftedOperator op(t, alpha);
        const Vector x = oracle::gaussian(9, rng), y = oracle::gaussian(9, rng), z = oracle::gaussian(9, rng),
                     w = oracle::gaussian(9, rng);
        CHECK(oracle::rel_close(eval_f4_alpha(op, x, y, z, w), oracle::f4(d, alpha, x, y, z, w), 1e-10));
        CHECK(oracle::rel_err(lift_contract_vec(op, x, y, z), oracle::f4_vec(d, alpha, x, y, z)) < 1e-10);
        CHECK(oracle::rel_err(lift_contract_mat(op, x, y), oracle::f4_mat(d, alpha, x, y)) < 1e-10);
        CHECK(oracle::rel_err(lift_contract_mat(op, x, x), oracle::f4_mat(d, alpha, x, x)) < 1e-10);
        CHECK(oracle::rel_close(eval_s4_alpha(op, x), oracle::f4(d, alpha, x, x, x, x), 1e-10));
    }
}
