#include "oracles/fourier_motzkin.hpp"
#include "snctrop/exact.hpp"
#include "snctrop/lp.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace snctrop;

namespace {

LatticeVector lv(std::initializer_list<long> xs) {
    LatticeVector v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

RatVector rv(std::initializer_list<long> xs) {
    RatVector v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

}  // namespace

TEST(PrimitiveDecompose, Examples) {
    auto d = primitive_decompose(lv({4, 6}));
    EXPECT_EQ(d.primitive, lv({2, 3}));
    EXPECT_EQ(d.weight, 2);
    d = primitive_decompose(lv({0, 0, 5}));
    EXPECT_EQ(d.primitive, lv({0, 0, 1}));
    EXPECT_EQ(d.weight, 5);
    d = primitive_decompose(lv({1, 0}));
    EXPECT_EQ(d.primitive, lv({1, 0}));
    EXPECT_EQ(d.weight, 1);
    EXPECT_THROW(primitive_decompose(lv({0, 0})), Error);
}

TEST(PrimitiveDecompose, RandomProperty) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> dist(-50, 50);
    for (int it = 0; it < 500; ++it) {
        LatticeVector v = lv({dist(rng), dist(rng), dist(rng)});
        if (is_zero(v)) continue;
        auto d = primitive_decompose(v);
        EXPECT_EQ(gcd_of(d.primitive), 1);
        EXPECT_GT(d.weight, 0);
        EXPECT_EQ(scale(d.weight, d.primitive), v);
    }
}

TEST(NormalizedVolume, Examples) {
    EXPECT_EQ(normalized_volume({lv({0, 0}), lv({1, 0}), lv({0, 1})}), 1);
    EXPECT_EQ(normalized_volume({lv({0, 0, 0}), lv({1, 0, 0}), lv({0, 1, 0}), lv({1, 1, 2})}), 2);
    EXPECT_EQ(normalized_volume({lv({0, 0}), lv({1, 1}), lv({2, 2})}), 0);
    // Lower-dimensional simplex measured in its own lattice.
    EXPECT_EQ(normalized_volume({lv({0, 0, 0}), lv({2, 2, 0})}), 2);
    EXPECT_EQ(normalized_volume({lv({0, 0, 0}), lv({1, 0, 0}), lv({0, 1, 0})}), 1);
}

TEST(NormalizedVolume, UnimodularInvariance) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<long> dist(-4, 4);
    for (int it = 0; it < 200; ++it) {
        std::vector<LatticeVector> s;
        for (int i = 0; i < 4; ++i) s.push_back(lv({dist(rng), dist(rng), dist(rng)}));
        // Random unimodular matrix as a product of elementary operations.
        IntMatrix u = {lv({1, 0, 0}), lv({0, 1, 0}), lv({0, 0, 1})};
        for (int k = 0; k < 6; ++k) {
            std::size_t i = rng() % 3, j = rng() % 3;
            if (i == j) continue;
            long f = dist(rng);
            for (std::size_t c = 0; c < 3; ++c) u[i][c] += f * u[j][c];
        }
        ASSERT_EQ(abs_int(determinant(u)), 1);
        LatticeVector t = lv({dist(rng), dist(rng), dist(rng)});
        std::vector<LatticeVector> image;
        for (auto& p : s) image.push_back(add(mat_vec(u, p), t));
        EXPECT_EQ(normalized_volume(s), normalized_volume(image));
    }
}

TEST(Determinant, AgreesWithRationalElimination) {
    std::mt19937 rng(3);
    std::uniform_int_distribution<long> dist(-9, 9);
    for (int it = 0; it < 100; ++it) {
        IntMatrix m(4, LatticeVector(4));
        for (auto& r : m)
            for (auto& x : r) x = dist(rng);
        EXPECT_EQ(Rat(determinant(m)), determinant(to_rat(m)));
    }
}

TEST(Lattice, SaturationAndQuotient) {
    IntMatrix gens = {lv({2, 2, 0})};
    auto sat = saturated_basis(gens, 3);
    ASSERT_EQ(sat.size(), 1u);
    EXPECT_EQ(sat[0], lv({1, 1, 0}));
    auto q = quotient_projection(gens, 3);
    ASSERT_EQ(q.size(), 2u);
    EXPECT_TRUE(is_zero(mat_vec(q, lv({1, 1, 0}))));
    // Surjective: the maximal minors have gcd 1.
    EXPECT_EQ(gcd_of_maximal_minors(q), 1);
}

TEST(Lp, StrictFeasibleExamples) {
    auto w = lp_strict_feasible({}, {{rv({1}), 0}}, 1);
    ASSERT_TRUE(w);
    EXPECT_GT((*w)[0], 0);
    EXPECT_FALSE(lp_strict_feasible({}, {{rv({1}), 0}, {rv({-1}), 0}}, 1));
    auto z = lp_strict_feasible({}, {}, 3);
    ASSERT_TRUE(z);
    EXPECT_EQ(*z, rv({0, 0, 0}));
    // Unit square split along the diagonal (0,0)-(1,1): heights h00,h10,h01,h11.
    // The fold across the diagonal: h10 + h01 > h00 + h11.
    auto sq = lp_strict_feasible({}, {{rv({-1, 1, 1, -1}), 0}}, 4);
    ASSERT_TRUE(sq);
    RatVector h = *sq;
    EXPECT_GT(h[1] + h[2], h[0] + h[3]);
}

TEST(Lp, AgreesWithFourierMotzkin) {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<long> dist(-3, 3);
    int feasible = 0, infeasible = 0;
    for (int it = 0; it < 400; ++it) {
        std::size_t dim = 1 + rng() % 4;
        std::size_t nw = rng() % 5, ns = rng() % 4;
        std::vector<LinearConstraint> weak, strict;
        auto make = [&] {
            LinearConstraint c{RatVector(dim), Rat(dist(rng))};
            for (auto& a : c.coeffs) a = dist(rng);
            return c;
        };
        for (std::size_t i = 0; i < nw; ++i) weak.push_back(make());
        for (std::size_t i = 0; i < ns; ++i) strict.push_back(make());
        bool expected = oracle::fm_feasible(weak, strict, dim);
        auto got = lp_strict_feasible(weak, strict, dim);
        ASSERT_EQ(expected, got.has_value()) << "iteration " << it;
        if (got) {
            ++feasible;
            for (auto& c : weak) EXPECT_GE(dot(c.coeffs, *got), c.rhs);
            for (auto& c : strict) EXPECT_GT(dot(c.coeffs, *got), c.rhs);
        } else {
            ++infeasible;
        }
    }
    EXPECT_GT(feasible, 20);
    EXPECT_GT(infeasible, 20);
}

TEST(Lp, MaximizeBoundedAndUnbounded) {
    // max x + y, x + 2y <= 4, 3x + y <= 6.
    auto r = lp_maximize_nonneg({{rv({-1, -2}), -4}, {rv({-3, -1}), -6}}, rv({1, 1}));
    ASSERT_EQ(r.status, LpResult::Status::optimal);
    EXPECT_EQ(r.value, Rat(14, 5));
    auto u = lp_maximize_nonneg({{rv({1, -1}), 0}}, rv({1, 0}));
    EXPECT_EQ(u.status, LpResult::Status::unbounded);
}
