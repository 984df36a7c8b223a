#pragma once

// Plane tropical curves and regular subdivisions of their Newton polygons.
// Convention: a lifting h gives F(x) = max_p (<p, x> - h(p)); the curve
// vertex of a cell is the gradient of h on it, and each edge of a cell is dual
// to a curve edge (or leg, on the boundary) along the cell's outer normal,
// weighted by the edge's lattice length.

#include "tropical.hpp"

#include <deque>

namespace snctrop {

namespace detail {

inline bool upper_half(const LatticeVector& a) { return a[1] > 0 || (a[1] == 0 && a[0] > 0); }

inline Int cross2(const LatticeVector& a, const LatticeVector& b) { return a[0] * b[1] - a[1] * b[0]; }

inline bool angle_less(const LatticeVector& a, const LatticeVector& b) {
    bool ha = upper_half(a), hb = upper_half(b);
    if (ha != hb) return ha;
    return cross2(a, b) > 0;
}

struct PolygonEdge {
    LatticeVector a, b;  // endpoints, a < b
    LatticeVector outer_normal;
    Int length;
};

inline std::vector<PolygonEdge> polygon_edges(const LatticePolytope& Q) {
    require(Q.ambient_dim() == 2 && Q.full_dimensional(), "expected a two-dimensional polygon");
    std::vector<PolygonEdge> out;
    for (const auto& f : Q.facets()) {
        require(f.points.size() == 2, "internal error: polygon edge without two vertices");
        auto a = Q.vertices()[f.points[0]], b = Q.vertices()[f.points[1]];
        if (b < a) std::swap(a, b);
        out.push_back({a, b, negate(f.normal), gcd_of(sub(b, a))});
    }
    return out;
}

inline const PolygonEdge& edge_with_normal(const std::vector<PolygonEdge>& edges, const LatticeVector& n) {
    for (const auto& e : edges)
        if (e.outer_normal == n) return e;
    throw Error("polygon has no edge with the requested outer normal");
}

}  // namespace detail

// The polygon whose edges have the star's directions as outer normals and its
// weights as lattice lengths, translated so both coordinates have minimum 0.
inline LatticePolytope newton_polygon(const Star& s) {
    require(s.dim() == 2, "Newton polygons need a rank-2 star");
    require(is_traditionally_balanced(s), "star is not traditionally balanced");
    auto rays = merged_rays(s.vectors);
    require(rays.size() >= 3, "degenerate star: its Newton polygon is not two-dimensional");
    std::vector<LatticeVector> steps;
    for (const auto& r : rays) steps.push_back(scale(r.weight, LatticeVector{-r.direction[1], r.direction[0]}));
    std::sort(steps.begin(), steps.end(), detail::angle_less);
    std::vector<LatticeVector> verts;
    LatticeVector cur{Int(0), Int(0)};
    for (const auto& st : steps) {
        verts.push_back(cur);
        cur = add(cur, st);
    }
    require(is_zero(cur), "internal error: edge chain does not close");
    Int mx = verts[0][0], my = verts[0][1];
    for (const auto& v : verts) {
        mx = std::min(mx, v[0]);
        my = std::min(my, v[1]);
    }
    for (auto& v : verts) v = sub(v, LatticeVector{mx, my});
    return LatticePolytope::hull(verts);
}

inline LatticePolytope newton_polygon(const Star& s, const CurveClassContext& ctx) {
    return newton_polygon(append_balancing_ray(s, ctx));
}

// The star dual to a polygon: outer normals weighted by lattice lengths.
inline Star polygon_star(const LatticePolytope& Q) {
    Star s;
    s.base = RatVector(2, Rat(0));
    for (const auto& e : detail::polygon_edges(Q)) s.vectors.push_back(scale(e.length, e.outer_normal));
    return canonical_star(s);
}

inline Rat polygon_area(const LatticePolytope& Q) { return Rat(Q.normalized_volume(), 2); }

// The plane tropical curve of a regular subdivision of a polygon: one vertex
// per cell (at the gradient of the lifting), one edge per interior cell edge,
// one leg per boundary cell edge.
inline TropicalCurve curve_from_subdivision(const Subdivision& S) {
    const auto& P = S.ambient;
    require(P.ambient_dim() == 2 && P.full_dimensional(), "curve_from_subdivision needs a two-dimensional polygon");
    require(S.lifting.has_value(), "curve_from_subdivision needs a lifting");
    require(lifting_induces(S, *S.lifting), "the lifting does not induce the subdivision");
    auto grads = cell_gradients(S, *S.lifting);
    TropicalCurve G;
    G.ambient_dim = 2;
    for (const auto& g : grads) G.vertices.push_back(CurveVertex{g, std::nullopt, {}, {}, 0});
    std::map<std::pair<LatticeVector, LatticeVector>, std::vector<std::size_t>> owners;
    std::vector<std::vector<detail::PolygonEdge>> cell_edges;
    for (std::size_t i = 0; i < S.cells.size(); ++i) {
        cell_edges.push_back(detail::polygon_edges(LatticePolytope::hull(gather(S.points, S.cells[i]))));
        for (const auto& e : cell_edges[i]) owners[{e.a, e.b}].push_back(i);
    }
    auto on_boundary = [&](const detail::PolygonEdge& e) {
        for (const auto& f : P.facets())
            if (dot(f.normal, e.a) == f.offset && dot(f.normal, e.b) == f.offset) return true;
        return false;
    };
    for (std::size_t i = 0; i < S.cells.size(); ++i) {
        for (const auto& e : cell_edges[i]) {
            if (on_boundary(e)) {
                G.legs.push_back(CurveLeg{i, e.outer_normal, e.length, std::nullopt});
                continue;
            }
            const auto& own = owners[{e.a, e.b}];
            require(own.size() == 2, "internal error: interior cell edge is not shared by two cells");
            std::size_t j = own[0] == i ? own[1] : own[0];
            if (j < i) continue;
            auto edge = edge_between(G, i, j, e.length);
            require(edge.direction == e.outer_normal, "internal error: dual edge is not along the outer normal");
            G.edges.push_back(edge);
        }
    }
    std::sort(G.edges.begin(), G.edges.end(),
              [](const CurveEdge& a, const CurveEdge& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
    std::sort(G.legs.begin(), G.legs.end(), [](const CurveLeg& a, const CurveLeg& b) {
        return std::tie(a.vertex, a.direction) < std::tie(b.vertex, b.direction);
    });
    return G;
}

// The regular subdivision dual to a connected plane tropical curve, on the
// Newton polygon of its asymptotic star anchored like newton_polygon. The
// curve is recovered by curve_from_subdivision up to translation.
inline Subdivision dual_subdivision(const TropicalCurve& G) {
    require(G.ambient_dim == 2, "dual_subdivision needs a plane curve");
    require(!G.vertices.empty(), "dual_subdivision needs a vertex");
    for (const auto& V : G.vertices) require(is_zero_class(V.beta), "dual_subdivision needs a traditionally balanced curve");
    auto verdict = check_curve(G, CurveClassContext::traditional(2));
    require(verdict.ok, "curve is not valid: " + verdict.reason);
    std::size_t nv = G.vertices.size();
    std::vector<LatticePolytope> cells;
    std::vector<std::vector<detail::PolygonEdge>> edges;
    for (std::size_t v = 0; v < nv; ++v) {
        cells.push_back(newton_polygon(canonical_star(vertex_star(G, v))));
        edges.push_back(detail::polygon_edges(cells.back()));
    }
    // Place cells by matching dual edges, and the values F(x_V) along the way.
    std::vector<std::optional<LatticeVector>> shift(nv);
    std::vector<Rat> value(nv);
    shift[0] = LatticeVector{Int(0), Int(0)};
    value[0] = 0;
    std::deque<std::size_t> queue = {0};
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        for (const auto& e : G.edges) {
            if (e.from != v && e.to != v) continue;
            std::size_t u = e.from == v ? e.to : e.from;
            LatticeVector out = e.from == v ? e.direction : negate(e.direction);
            const auto& mine = detail::edge_with_normal(edges[v], out);
            const auto& theirs = detail::edge_with_normal(edges[u], negate(out));
            LatticeVector p = add(mine.a, *shift[v]);
            LatticeVector su = sub(p, theirs.a);
            Rat fu = value[v] + dot(p, sub(G.vertices[u].position, G.vertices[v].position));
            if (!shift[u]) {
                shift[u] = su;
                value[u] = fu;
                queue.push_back(u);
            } else {
                require(*shift[u] == su && value[u] == fu, "curve is not dual to a subdivision");
            }
        }
    }
    for (std::size_t v = 0; v < nv; ++v) require(shift[v].has_value(), "dual_subdivision needs a connected curve");
    // Anchor at the origin corner.
    std::vector<std::vector<LatticeVector>> cell_pts(nv);
    std::optional<LatticeVector> lo;
    for (std::size_t v = 0; v < nv; ++v)
        for (const auto& q : cells[v].vertices()) {
            auto p = add(q, *shift[v]);
            cell_pts[v].push_back(p);
            if (!lo) lo = p;
            (*lo)[0] = std::min((*lo)[0], p[0]);
            (*lo)[1] = std::min((*lo)[1], p[1]);
        }
    // Heights at unshifted positions: h(p) = <p, x_V> - F(x_V) on cell V.
    auto envelope = [&](const LatticeVector& p) {
        std::optional<Rat> best;
        for (std::size_t v = 0; v < nv; ++v) {
            Rat val = dot(to_rat(p), G.vertices[v].position) - value[v];
            if (!best || val > *best) best = val;
        }
        return *best;
    };
    std::vector<LatticeVector> all;
    for (auto& pts : cell_pts)
        for (auto& p : pts) all.push_back(sub(p, *lo));
    auto P = LatticePolytope::hull(all);
    auto pts = P.lattice_points();
    std::map<LatticeVector, std::size_t> index;
    for (std::size_t i = 0; i < pts.size(); ++i) index[pts[i]] = i;
    RatVector h(pts.size());
    std::vector<bool> used(pts.size(), false);
    std::vector<IndexSet> cell_sets;
    for (std::size_t v = 0; v < nv; ++v) {
        IndexSet c;
        for (const auto& p : cell_pts[v]) {
            std::size_t i = index.at(sub(p, *lo));
            c.push_back(i);
            Rat hv = dot(to_rat(p), G.vertices[v].position) - value[v];
            require(!used[i] || h[i] == hv, "curve is not dual to a subdivision");
            h[i] = hv;
            used[i] = true;
        }
        std::sort(c.begin(), c.end());
        cell_sets.push_back(c);
    }
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (!used[i]) h[i] = envelope(add(pts[i], *lo)) + 1;
    auto S = make_subdivision(P, pts, cell_sets, h);
    require(validate(S).ok && lifting_induces(S, h), "curve is not dual to a subdivision");
    return S;
}

}  // namespace snctrop
