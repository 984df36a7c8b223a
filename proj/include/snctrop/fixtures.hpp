#pragma once

// Named example objects: the triangle dual complex with its spider and
// inner-triangle curves, and the plane line and conic stars.

#include "duality2d.hpp"

namespace snctrop::fixtures {

// The triangle with corners e1, e2, e3: the fiber over 1 of the orthant in
// R^3 under the coordinate sum.
inline PolyhedralComplex triangle_complex() {
    ConeComplex ray = make_cone_complex(1, {LatticeVector{Int(1)}}, {{0}});
    return fiber_at_one(make_complex_map(orthant(3), ray, IntMatrix{LatticeVector{Int(1), Int(1), Int(1)}}));
}

// Three corner classes A, B, C; column X holds the intersection numbers of X
// with E_1, E_2, E_3, so a corner vertex balances one edge toward the centre.
inline CurveClassContext triangle_context() {
    return CurveClassContext{3, IntMatrix{LatticeVector{Int(-2), Int(1), Int(1)}, LatticeVector{Int(1), Int(-2), Int(1)},
                                          LatticeVector{Int(1), Int(1), Int(-2)}}};
}

inline LatticeVector unit(std::size_t n, std::size_t i) {
    LatticeVector e(n, Int(0));
    e[i] = 1;
    return e;
}

inline RatVector corner(std::size_t i) { return to_rat(unit(3, i)); }

inline RatVector centroid() { return RatVector{Rat(1, 3), Rat(1, 3), Rat(1, 3)}; }

// Central trivalent vertex joined to the three corners; rigid.
inline TropicalCurve spider() {
    TropicalCurve G;
    G.ambient_dim = 3;
    for (std::size_t i = 0; i < 3; ++i) G.vertices.push_back(CurveVertex{corner(i), std::nullopt, unit(3, i), {}, 0});
    G.vertices.push_back(CurveVertex{centroid(), std::nullopt, {}, {}, 0});
    for (std::size_t i = 0; i < 3; ++i) G.edges.push_back(edge_between(G, 3, i));
    return G;
}

// Inner triangle halfway to the corners, legs out to the corners; its size
// can vary, so it is not rigid.
inline TropicalCurve inner_triangle() {
    TropicalCurve G;
    G.ambient_dim = 3;
    for (std::size_t i = 0; i < 3; ++i) G.vertices.push_back(CurveVertex{corner(i), std::nullopt, unit(3, i), {}, 0});
    for (std::size_t i = 0; i < 3; ++i)
        G.vertices.push_back(CurveVertex{scale(Rat(1, 2), add(corner(i), centroid())), std::nullopt, {}, {}, 0});
    for (std::size_t i = 0; i < 3; ++i) G.edges.push_back(edge_between(G, 3 + i, i));
    G.edges.push_back(edge_between(G, 3, 4));
    G.edges.push_back(edge_between(G, 4, 5));
    G.edges.push_back(edge_between(G, 3, 5));
    return G;
}

inline Star line_star() {
    return make_star(2, {LatticeVector{Int(-1), Int(0)}, LatticeVector{Int(0), Int(-1)}, LatticeVector{Int(1), Int(1)}});
}

inline Star conic_star() {
    return make_star(2, {LatticeVector{Int(-2), Int(0)}, LatticeVector{Int(0), Int(-2)}, LatticeVector{Int(2), Int(2)}});
}

// A tropical line with its vertex at p.
inline TropicalCurve tropical_line(const RatVector& p) {
    TropicalCurve G;
    G.ambient_dim = 2;
    G.vertices.push_back(CurveVertex{p, std::nullopt, {}, {}, 0});
    for (const auto& v : line_star().vectors) G.legs.push_back(CurveLeg{0, v, 1, std::nullopt});
    return G;
}

// The 4-triangle subdivision of 2*Delta_2 with the lifting x^2 + xy + y^2.
inline Subdivision four_triangles() {
    auto P = dilated_simplex(2, 2);
    auto pts = P.lattice_points();
    RatVector h;
    for (const auto& p : pts) h.push_back(Rat(p[0] * p[0] + p[0] * p[1] + p[1] * p[1]));
    return make_subdivision(P, pts, {{0, 1, 3}, {1, 2, 4}, {3, 4, 5}, {1, 3, 4}}, h);
}

}  // namespace snctrop::fixtures
