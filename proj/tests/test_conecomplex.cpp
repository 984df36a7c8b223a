#include "snctrop/conecomplex.hpp"
#include "support/random_fans.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace snctrop;
using namespace support;

namespace {

LatticeVector lv(std::initializer_list<long> xs) {
    LatticeVector v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

ConeComplex diagonal_orthant() { return make_cone_complex(2, {lv({1, 0}), lv({0, 1}), lv({1, 1})}, {{0, 2}, {1, 2}}); }

ConeComplex ray_complex() { return make_cone_complex(1, {lv({1})}, {{0}}); }

}  // namespace

TEST(ConeComplex, Validation) {
    EXPECT_THROW(make_cone_complex(2, {lv({1, 0}), lv({0, 1}), lv({1, 1})}, {{0, 1}, {0, 2}}), Error);
    EXPECT_THROW(make_cone_complex(2, {lv({1, 0}), lv({2, 0})}, {{0}}), Error);
    EXPECT_THROW(make_cone_complex(2, {lv({1, 0}), lv({-1, 0})}, {{0, 1}}), Error);
    auto S = make_cone_complex(2, {lv({2, 0}), lv({0, 3})}, {});
    EXPECT_EQ(S.rays[0], lv({1, 0}));
    EXPECT_EQ(S.cones.size(), 2u);
}

TEST(Contact, Disjoint) {
    EXPECT_TRUE(is_disjoint(ContactMatrix{2, {lv({2, 0}), lv({0, 3})}}));
    EXPECT_FALSE(is_disjoint(ContactMatrix{2, {lv({1, 1})}}));
    EXPECT_TRUE(is_disjoint(ContactMatrix{}));
}

TEST(Contact, LatticePoint) {
    auto ray = ray_complex();
    auto p = contact_lattice_point(lv({2}), ray);
    EXPECT_EQ(p.point, lv({2}));
    EXPECT_EQ(p.cone, (IndexSet{0}));
    auto q = contact_lattice_point(lv({1, 1}), orthant(2));
    EXPECT_EQ(q.point, lv({1, 1}));
    EXPECT_EQ(q.cone, (IndexSet{0, 1}));
    auto two_rays = make_cone_complex(2, {lv({1, 0}), lv({0, 1})}, {});
    try {
        contact_lattice_point(lv({1, 1}), two_rays);
        FAIL();
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "contact data not supported on this complex");
    }
}

TEST(Contact, CanonicalLift) {
    auto O = orthant(2);
    ContactMatrix M{2, {lv({1, 1}), lv({2, 0})}};
    EXPECT_EQ(canonical_lift(M, identity_map(O, O)).rows, M.rows);
    auto L = canonical_lift(M, identity_map(diagonal_orthant(), O));
    EXPECT_EQ(L.rows[0], lv({0, 0, 1}));
    EXPECT_EQ(L.rows[1], lv({2, 0, 0}));
    EXPECT_TRUE(is_disjoint(L));
    auto skew = make_cone_complex(2, {lv({1, 0}), lv({1, 2})}, {{0, 1}});
    EXPECT_THROW(canonical_lift(ContactMatrix{1, {lv({1, 1})}}, identity_map(skew, skew)), Error);
}

TEST(Flatness, Examples) {
    auto O = orthant(2);
    EXPECT_TRUE(is_combinatorially_flat(identity_map(O, O)).flat);
    auto v = is_combinatorially_flat(identity_map(diagonal_orthant(), O));
    EXPECT_FALSE(v.flat);
    ASSERT_TRUE(v.offending_cone);
    auto blowup = make_complex_map(diagonal_orthant(), ray_complex(), IntMatrix{lv({1, 1})});
    EXPECT_TRUE(is_combinatorially_flat(blowup).flat);
}

TEST(Fiber, Examples) {
    auto seg = fiber_at_one(make_complex_map(orthant(2), ray_complex(), IntMatrix{lv({1, 1})}));
    ASSERT_EQ(seg.vertices.size(), 2u);
    EXPECT_EQ(seg.vertices[0], (RatVector{Rat(1), Rat(0)}));
    EXPECT_EQ(seg.vertices[1], (RatVector{Rat(0), Rat(1)}));
    EXPECT_EQ(seg.cells.size(), 3u);
    EXPECT_TRUE(seg.compact());

    // Horizontal ray (0,0,1) glued to the first ray: an unbounded cell.
    auto S = make_cone_complex(3, {lv({1, 0, 0}), lv({0, 1, 0}), lv({0, 0, 1})}, {{0, 1}, {0, 2}});
    auto K = fiber_at_one(make_complex_map(S, ray_complex(), IntMatrix{lv({1, 1, 0})}));
    EXPECT_FALSE(K.compact());
    std::size_t unbounded = 0;
    for (auto& c : K.cells) unbounded += !c.bounded();
    EXPECT_EQ(unbounded, 1u);

    // The triangle with corners e1, e2, e3 as the fiber of the orthant.
    auto tri = fiber_at_one(make_complex_map(orthant(3), ray_complex(), IntMatrix{lv({1, 1, 1})}));
    EXPECT_EQ(tri.vertices.size(), 3u);
    EXPECT_EQ(tri.dim(), 2u);
    EXPECT_EQ(tri.cells.size(), 7u);
}

TEST(Fiber, ConeOverRoundTrip) {
    PolyhedralComplex T;
    T.ambient_dim = 2;
    T.vertices = {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(1, 2), Rat(3, 2)}};
    for (IndexSet c : std::vector<IndexSet>{{0}, {1}, {2}, {3}, {0, 1}, {1, 2}, {0, 2}, {1, 3}, {2, 3}, {0, 1, 2}, {1, 2, 3}})
        T.cells.push_back(PolyCell{0, c, {}, {}, {}});
    finalize_complex(T);
    auto f = cone_over(T);
    auto K = fiber_at_one(f);
    ASSERT_EQ(K.vertices.size(), T.vertices.size());
    std::vector<RatVector> dropped;
    for (auto& v : K.vertices) {
        EXPECT_EQ(v.back(), 1);
        dropped.emplace_back(v.begin(), v.end() - 1);
    }
    EXPECT_EQ(dropped, T.vertices);
    ASSERT_EQ(K.cells.size(), T.cells.size());
    for (std::size_t i = 0; i < K.cells.size(); ++i) {
        EXPECT_EQ(K.cells[i].vertices, T.cells[i].vertices);
        EXPECT_EQ(K.cells[i].facets, T.cells[i].facets);
    }
}

TEST(StarAt, Examples) {
    auto O = orthant(2);
    auto origin = star_at(RatVector{Rat(0), Rat(0)}, O);
    EXPECT_TRUE(origin.cone.empty());
    EXPECT_EQ(origin.star.cones, O.cones);
    EXPECT_TRUE(is_tangent(O, {Rat(0), Rat(0)}, lv({1, 2})));
    EXPECT_FALSE(is_tangent(O, {Rat(0), Rat(0)}, lv({-1, 2})));

    auto on_ray = star_at(RatVector{Rat(2), Rat(0)}, O);
    EXPECT_EQ(on_ray.cone, (IndexSet{0}));
    EXPECT_EQ(on_ray.star.rays.size(), 1u);
    EXPECT_TRUE(is_tangent(O, {Rat(2), Rat(0)}, lv({1, 0})));
    EXPECT_TRUE(is_tangent(O, {Rat(2), Rat(0)}, lv({-1, 0})));
    EXPECT_TRUE(is_tangent(O, {Rat(2), Rat(0)}, lv({-1, 3})));
    EXPECT_FALSE(is_tangent(O, {Rat(2), Rat(0)}, lv({0, -1})));

    auto inside = star_at(RatVector{Rat(1), Rat(1)}, O);
    EXPECT_EQ(inside.cone, (IndexSet{0, 1}));
    EXPECT_TRUE(inside.projection.empty());
    EXPECT_TRUE(is_tangent(O, {Rat(1), Rat(1)}, lv({-5, -7})));
}

TEST(Stellar, Subdivide) {
    auto O = orthant(3);
    auto S = stellar_subdivide(O, lv({1, 1, 0}));
    EXPECT_EQ(S.cones.size(), 2u);
    EXPECT_TRUE(is_subdivision_of(S, O));
    auto T = stellar_subdivide(S, lv({1, 1, 1}));
    EXPECT_EQ(T.cones.size(), 4u);
    EXPECT_TRUE(is_subdivision_of(T, O));
    EXPECT_FALSE(is_subdivision_of(make_cone_complex(3, O.rays, {{0, 1}}), O));
}

TEST(Contact, CanonicalLiftRandomized) {
    std::mt19937 rng(20261015);
    int disjoint_cases = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = trial % 2 ? 3 : 2;
        auto coarse = random_blowups(orthant(n), rng, static_cast<int>(rng() % 3));
        auto fine = random_blowups(coarse, rng, 1 + static_cast<int>(rng() % 4));
        ASSERT_TRUE(is_subdivision_of(fine, coarse));
        bool disjoint = trial % 3 == 0;
        ContactMatrix M{coarse.rays.size(), {}};
        for (int j = 0; j < 3; ++j) M.rows.push_back(random_row(coarse, rng, disjoint));
        auto L = canonical_lift(M, identity_map(fine, coarse));
        ASSERT_EQ(L.columns, fine.rays.size());
        for (std::size_t j = 0; j < M.rows.size(); ++j) {
            for (std::size_t i = 0; i < coarse.rays.size(); ++i) {
                Rat total = 0;
                for (std::size_t k = 0; k < fine.rays.size(); ++k) total += Rat(L.rows[j][k]) * pullback(coarse, i, fine.rays[k]);
                EXPECT_EQ(total, Rat(M.rows[j][i])) << "trial " << trial;
            }
        }
        if (disjoint) {
            ++disjoint_cases;
            EXPECT_TRUE(is_disjoint(L)) << "trial " << trial;
        }
    }
    EXPECT_GE(disjoint_cases, 60);
}

namespace {

void expect_flattened(const ComplexMap& f) {
    auto r = flatten(f);
    EXPECT_TRUE(is_combinatorially_flat(r.map).flat);
    EXPECT_LE(r.rounds, 1u);
    EXPECT_TRUE(is_subdivision_of(r.map.source, f.source));
    EXPECT_TRUE(is_subdivision_of(r.map.target, f.target));
}

}  // namespace

TEST(Flatness, FlattenExamples) {
    auto O2 = orthant(2);
    auto r = flatten(identity_map(diagonal_orthant(), O2));
    EXPECT_EQ(r.rounds, 1u);
    EXPECT_EQ(r.map.target.cones.size(), 2u);
    expect_flattened(identity_map(diagonal_orthant(), O2));

    auto squash = make_complex_map(orthant(3), O2, IntMatrix{lv({1, 0, 1}), lv({0, 1, 1})});
    EXPECT_FALSE(is_combinatorially_flat(squash).flat);
    expect_flattened(squash);
}

TEST(Flatness, FlattenRandomSmallComplexes) {
    std::mt19937 rng(7);
    int tested = 0;
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 3, m = trial % 2 ? 2 : 3;
        auto src = random_blowups(orthant(n), rng, static_cast<int>(rng() % 4));
        if (all_cones(src).size() > 20) continue;
        IntMatrix A(m, LatticeVector(n, Int(0)));
        for (auto& row : A)
            for (auto& a : row) a = static_cast<long>(rng() % 3);
        auto f = make_complex_map(src, orthant(m), A);
        expect_flattened(f);
        ++tested;
    }
    EXPECT_GE(tested, 10);
}
