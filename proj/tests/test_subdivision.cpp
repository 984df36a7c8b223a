#include "oracles/global_regularity.hpp"
#include "snctrop/subdivision.hpp"

#include <gtest/gtest.h>

using namespace snctrop;

namespace {

LatticeVector lv(std::initializer_list<long> xs) {
    LatticeVector v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

// 2Δ2 with points (0,0),(0,1),(0,2),(1,0),(1,1),(2,0) in lexicographic order.
Subdivision four_triangles() {
    auto P = dilated_simplex(2, 2);
    auto pts = P.lattice_points();
    // indices: 0=(0,0) 1=(0,1) 2=(0,2) 3=(1,0) 4=(1,1) 5=(2,0)
    return make_subdivision(P, pts, {{0, 1, 3}, {1, 2, 4}, {3, 4, 5}, {1, 3, 4}});
}

Subdivision mother(bool twist_one_way) {
    std::vector<LatticeVector> pts = {lv({0, 0}), lv({4, 0}), lv({0, 4}), lv({1, 1}), lv({2, 1}), lv({1, 2})};
    auto P = convex_hull(pts);
    // 0,1,2 outer; 3,4,5 inner (3 opposite edge 12 ... see coordinates)
    std::vector<IndexSet> cells = {{3, 4, 5}};
    if (twist_one_way)
        for (auto c : std::vector<IndexSet>{{0, 1, 4}, {0, 4, 3}, {1, 2, 5}, {1, 5, 4}, {2, 0, 3}, {2, 3, 5}})
            cells.push_back(c);
    else
        for (auto c : std::vector<IndexSet>{{0, 1, 3}, {1, 4, 3}, {1, 2, 4}, {2, 5, 4}, {2, 0, 5}, {0, 3, 5}})
            cells.push_back(c);
    return make_subdivision(P, pts, cells);
}

Subdivision mother_regular() {
    std::vector<LatticeVector> pts = {lv({0, 0}), lv({4, 0}), lv({0, 4}), lv({1, 1}), lv({2, 1}), lv({1, 2})};
    auto P = convex_hull(pts);
    // Diagonals 0-4, 2-4, 0-5: not a cyclic twist.
    return make_subdivision(P, pts,
                            {{3, 4, 5}, {0, 1, 4}, {0, 4, 3}, {1, 2, 4}, {2, 5, 4}, {2, 0, 5}, {0, 3, 5}});
}

}  // namespace

TEST(Validation, AcceptsAndRejects) {
    EXPECT_TRUE(validate(four_triangles()).ok);
    auto P = dilated_simplex(2, 2);
    auto pts = P.lattice_points();
    // Missing the central triangle.
    EXPECT_FALSE(validate(make_subdivision(P, pts, {{0, 1, 3}, {1, 2, 4}, {3, 4, 5}})).ok);
    // Overlapping: big triangle plus a corner.
    EXPECT_FALSE(validate(make_subdivision(P, pts, {{0, 2, 5}, {0, 1, 3}})).ok);
    // A quadrilateral may leave a boundary point unused.
    EXPECT_TRUE(validate(make_subdivision(P, pts, {{0, 1, 3}, {1, 2, 5, 3}})).ok);
    // Not face-to-face: [0,1]x[0,2] meets the two right squares in half its edge,
    // whether or not it marks (1,1).
    auto sq = product(dilated_simplex(2, 1), dilated_simplex(2, 1));
    auto sp = sq.lattice_points();  // (0,0) (0,1) (0,2) (1,0) (1,1) (1,2) (2,0) (2,1) (2,2)
    EXPECT_FALSE(validate(make_subdivision(sq, sp, {{0, 2, 3, 5}, {3, 4, 6, 7}, {4, 5, 7, 8}})).ok);
    EXPECT_FALSE(validate(make_subdivision(sq, sp, {{0, 2, 3, 4, 5}, {3, 4, 6, 7}, {4, 5, 7, 8}})).ok);
    EXPECT_TRUE(validate(make_subdivision(sq, sp, {{0, 1, 3, 4}, {1, 2, 4, 5}, {3, 4, 6, 7}, {4, 5, 7, 8}})).ok);
}

TEST(Unimodular, Examples) {
    auto d2 = dilated_simplex(1, 2);
    EXPECT_TRUE(is_unimodular(trivial_subdivision(d2)).unimodular);
    auto big = trivial_subdivision(dilated_simplex(2, 2));
    auto v = is_unimodular(big);
    EXPECT_FALSE(v.unimodular);
    EXPECT_EQ(v.offending_cell, 0u);
    EXPECT_EQ(v.offending_volume, 4);
    EXPECT_TRUE(is_unimodular(four_triangles()).unimodular);
    auto sq = product(dilated_simplex(1, 1), dilated_simplex(1, 1));
    EXPECT_THROW(is_unimodular(trivial_subdivision(sq)), Error);
}

TEST(Regular, Examples) {
    auto one = trivial_subdivision(dilated_simplex(2, 2));
    auto h0 = is_regular(one);
    ASSERT_TRUE(h0);
    auto S = four_triangles();
    auto h = is_regular(S);
    ASSERT_TRUE(h);
    EXPECT_TRUE(lifting_induces(S, *h));
    // x^2 + y^2 does not: (0,0),(1,0),(0,1),(1,1) lift to one plane.
    RatVector para, hex;
    for (auto& p : S.points) {
        para.push_back(Rat(p[0] * p[0] + p[1] * p[1]));
        hex.push_back(Rat(p[0] * p[0] + p[0] * p[1] + p[1] * p[1]));
    }
    EXPECT_FALSE(lifting_induces(S, para));
    EXPECT_TRUE(lifting_induces(S, hex));
    EXPECT_FALSE(is_regular(mother(true)));
    EXPECT_FALSE(is_regular(mother(false)));
    EXPECT_TRUE(is_regular(mother_regular()));
    EXPECT_FALSE(oracle::regular_by_elimination(mother(true)));
    EXPECT_FALSE(oracle::regular_by_elimination(mother(false)));
    EXPECT_TRUE(oracle::regular_by_elimination(mother_regular()));
    EXPECT_TRUE(oracle::regular_by_elimination(S));
}

TEST(Regular, UnusedPointsLiftAbove) {
    auto P = dilated_simplex(2, 2);
    auto pts = P.lattice_points();
    // Cells {(0,0),(1,0),(0,2)} and {(1,0),(2,0),(0,2)} leave (0,1) and (1,1) unused.
    auto S = make_subdivision(P, pts, {{0, 2, 3}, {2, 3, 5}});
    ASSERT_TRUE(validate(S).ok);
    auto h = is_regular(S);
    ASSERT_TRUE(h);
    EXPECT_TRUE(lifting_induces(S, *h));
}

TEST(Alcove, SmallCases) {
    auto t1 = alcove_triangulation_dilated_simplex(1, 3);
    EXPECT_EQ(t1.cells.size(), 1u);
    auto t22 = alcove_triangulation_dilated_simplex(2, 2);
    EXPECT_EQ(t22.cells.size(), 4u);
    EXPECT_TRUE(is_unimodular(t22).unimodular);
    EXPECT_EQ(t22.cells, four_triangles().cells);
    auto t33 = alcove_triangulation_dilated_simplex(3, 3);
    EXPECT_EQ(t33.cells.size(), 27u);
    EXPECT_EQ(t33.points.size(), 20u);
    ASSERT_TRUE(t33.lifting);
    EXPECT_TRUE(lifting_induces(t33, *t33.lifting));
    for (unsigned long d = 1; d <= 4; ++d)
        for (unsigned long r = 1; r <= 3; ++r) {
            if (d == 4 && r == 3) continue;
            auto T = alcove_triangulation_dilated_simplex(d, r);
            unsigned long vol = 1;
            for (unsigned long i = 0; i < r; ++i) vol *= d;
            EXPECT_EQ(T.cells.size(), vol);
            EXPECT_TRUE(validate(T).ok);
        }
}

TEST(Staircase, Examples) {
    auto seg = trivial_subdivision(dilated_simplex(1, 1));
    auto sq = staircase_triangulation(seg, seg);
    EXPECT_EQ(sq.cells.size(), 2u);
    auto tri = trivial_subdivision(dilated_simplex(1, 2));
    auto prism = staircase_triangulation(tri, seg);
    EXPECT_EQ(prism.cells.size(), 3u);
    EXPECT_TRUE(is_unimodular(prism).unimodular);
    auto big = staircase_triangulation(alcove_triangulation_dilated_simplex(2, 2), alcove_triangulation_dilated_simplex(2, 1));
    EXPECT_EQ(big.cells.size(), 24u);
    EXPECT_TRUE(is_unimodular(big).unimodular);
    ASSERT_TRUE(big.lifting);
    EXPECT_EQ(big.points, big.ambient.lattice_points());
    Int total = 0;
    for (auto& c : big.cells) total += normalized_volume(gather(big.points, c));
    EXPECT_EQ(total, 24);
    EXPECT_THROW(staircase_triangulation(trivial_subdivision(product(dilated_simplex(1, 1), dilated_simplex(1, 1))), seg),
                 Error);
}

TEST(Stellar, InsertKeepsValidity) {
    auto P = dilated_simplex(2, 2);
    auto pts = P.lattice_points();
    std::vector<IndexSet> cells = {{0, 2, 5}};
    cells = stellar_insert(pts, cells, 4);  // (1,1) on the hypotenuse
    EXPECT_EQ(cells.size(), 2u);
    cells = stellar_insert(pts, cells, 1);
    cells = stellar_insert(pts, cells, 3);
    auto S = make_subdivision(P, pts, cells);
    EXPECT_TRUE(validate(S).ok);
    EXPECT_TRUE(is_unimodular(S).unimodular);
    EXPECT_TRUE(is_regular(S));
}
