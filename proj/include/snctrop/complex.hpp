#pragma once

// Rational polyhedral complexes given by generators (vertices and rays), and
// the Legendre-dual decomposition of a regular subdivision.

#include "lp.hpp"
#include "subdivision.hpp"

#include <map>
#include <set>
#include <tuple>

namespace snctrop {

// A cell is conv(vertices) + cone(rays). Faces are listed as cells too; a
// cell's `facets` are the cells one dimension down whose generators it
// contains. `tag` records what the cell is dual to or cut from (point indices
// of a subdivision face, ray indices of a cone), empty when unused.
struct PolyCell {
    std::size_t dim = 0;
    IndexSet vertices;
    IndexSet rays;
    IndexSet facets;
    IndexSet tag;

    bool bounded() const { return rays.empty(); }
};

struct PolyhedralComplex {
    std::size_t ambient_dim = 0;
    std::vector<RatVector> vertices;
    std::vector<LatticeVector> rays;
    std::vector<PolyCell> cells;

    bool compact() const {
        for (const auto& c : cells)
            if (!c.bounded()) return false;
        return true;
    }
    std::size_t dim() const {
        std::size_t d = 0;
        for (const auto& c : cells) d = std::max(d, c.dim);
        return d;
    }
};

// Direction space of a cell: vertex differences and rays.
inline RatMatrix cell_directions(const PolyhedralComplex& K, std::size_t c) {
    const auto& cell = K.cells[c];
    RatMatrix dirs;
    for (std::size_t i = 1; i < cell.vertices.size(); ++i)
        dirs.push_back(sub(K.vertices[cell.vertices[i]], K.vertices[cell.vertices[0]]));
    for (auto r : cell.rays) dirs.push_back(to_rat(K.rays[r]));
    rref(dirs);
    return dirs;
}

// Sorts cells by (dim, vertices, rays) and recomputes dimensions and facets.
inline void finalize_complex(PolyhedralComplex& K) {
    for (std::size_t c = 0; c < K.cells.size(); ++c) {
        auto& cell = K.cells[c];
        require(!cell.vertices.empty(), "a polyhedral cell needs a vertex");
        std::sort(cell.vertices.begin(), cell.vertices.end());
        std::sort(cell.rays.begin(), cell.rays.end());
        for (auto v : cell.vertices) require(v < K.vertices.size(), "cell vertex index out of range");
        for (auto r : cell.rays) require(r < K.rays.size(), "cell ray index out of range");
        cell.dim = cell_directions(K, c).size();
    }
    std::sort(K.cells.begin(), K.cells.end(), [](const PolyCell& a, const PolyCell& b) {
        return std::tie(a.dim, a.vertices, a.rays) < std::tie(b.dim, b.vertices, b.rays);
    });
    for (std::size_t i = 0; i + 1 < K.cells.size(); ++i)
        require(std::tie(K.cells[i].vertices, K.cells[i].rays) != std::tie(K.cells[i + 1].vertices, K.cells[i + 1].rays),
                "duplicate polyhedral cell");
    for (auto& cell : K.cells) {
        cell.facets.clear();
        for (std::size_t f = 0; f < K.cells.size(); ++f) {
            const auto& g = K.cells[f];
            if (g.dim + 1 != cell.dim) continue;
            if (std::includes(cell.vertices.begin(), cell.vertices.end(), g.vertices.begin(), g.vertices.end()) &&
                std::includes(cell.rays.begin(), cell.rays.end(), g.rays.begin(), g.rays.end()))
                cell.facets.push_back(f);
        }
    }
}

// Membership of x in a cell (optionally in its relative interior, where every
// generator can carry a positive coefficient).
inline bool cell_contains(const PolyhedralComplex& K, std::size_t c, const RatVector& x, bool relative_interior = false) {
    const auto& cell = K.cells[c];
    std::size_t nv = cell.vertices.size(), nr = cell.rays.size(), n = K.ambient_dim;
    require(x.size() == n, "dimension mismatch");
    std::vector<LinearConstraint> weak, strict;
    for (std::size_t k = 0; k < n; ++k) {
        RatVector row(nv + nr, Rat(0));
        for (std::size_t i = 0; i < nv; ++i) row[i] = K.vertices[cell.vertices[i]][k];
        for (std::size_t j = 0; j < nr; ++j) row[nv + j] = K.rays[cell.rays[j]][k];
        weak.push_back({row, x[k]});
        weak.push_back({negate(row), -x[k]});
    }
    RatVector sum(nv + nr, Rat(0));
    for (std::size_t i = 0; i < nv; ++i) sum[i] = 1;
    weak.push_back({sum, 1});
    weak.push_back({negate(sum), -1});
    for (std::size_t i = 0; i < nv + nr; ++i) {
        RatVector e(nv + nr, Rat(0));
        e[i] = 1;
        (relative_interior ? strict : weak).push_back({e, 0});
    }
    return lp_strict_feasible(weak, strict, nv + nr, true).has_value();
}

// The cell whose relative interior contains x.
inline std::optional<std::size_t> locate(const PolyhedralComplex& K, const RatVector& x) {
    for (std::size_t c = 0; c < K.cells.size(); ++c)
        if (cell_contains(K, c, x, true)) return c;
    return std::nullopt;
}

// Keeps the bounded cells, renumbering vertices.
inline PolyhedralComplex bounded_part(const PolyhedralComplex& K) {
    PolyhedralComplex out;
    out.ambient_dim = K.ambient_dim;
    std::map<std::size_t, std::size_t> vmap;
    for (const auto& c : K.cells) {
        if (!c.bounded()) continue;
        PolyCell d;
        for (auto v : c.vertices) {
            auto it = vmap.find(v);
            if (it == vmap.end()) {
                it = vmap.emplace(v, out.vertices.size()).first;
                out.vertices.push_back(K.vertices[v]);
            }
            d.vertices.push_back(it->second);
        }
        d.tag = c.tag;
        out.cells.push_back(std::move(d));
    }
    // Vertex order follows first use; make it canonical.
    IndexSet order(out.vertices.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return out.vertices[a] < out.vertices[b]; });
    IndexSet inv(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) inv[order[i]] = i;
    std::vector<RatVector> vs;
    for (auto i : order) vs.push_back(out.vertices[i]);
    out.vertices = std::move(vs);
    for (auto& c : out.cells)
        for (auto& v : c.vertices) v = inv[v];
    finalize_complex(out);
    return out;
}

// A face of a subdivision: the points of a cell lying on one of its faces.
struct SubdivisionFace {
    IndexSet points;
    std::size_t dim = 0;
    IndexSet cells;  // maximal cells containing it
};

inline std::vector<SubdivisionFace> subdivision_faces(const Subdivision& S) {
    std::map<IndexSet, SubdivisionFace> faces;
    for (std::size_t ci = 0; ci < S.cells.size(); ++ci) {
        const auto& cell = S.cells[ci];
        auto pts = gather(S.points, cell);
        auto Q = LatticePolytope::hull(pts);
        for (const auto& f : Q.faces()) {
            std::vector<LatticeVector> fv;
            for (auto i : f.vertices) fv.push_back(Q.vertices()[i]);
            std::size_t r = affine_rank(fv);
            IndexSet on;
            for (auto j : cell) {
                auto t = fv;
                t.push_back(S.points[j]);
                if (affine_rank(t) == r) on.push_back(j);
            }
            auto& entry = faces[on];
            entry.points = on;
            entry.dim = static_cast<std::size_t>(f.dim);
            entry.cells.push_back(ci);
        }
    }
    std::vector<SubdivisionFace> out;
    for (auto& [k, f] : faces) out.push_back(std::move(f));
    std::sort(out.begin(), out.end(), [](const SubdivisionFace& a, const SubdivisionFace& b) {
        return std::tie(a.dim, a.points) < std::tie(b.dim, b.points);
    });
    return out;
}

// Gradient of the lifting on each maximal cell.
inline std::vector<RatVector> cell_gradients(const Subdivision& S, const RatVector& h) {
    std::vector<RatVector> g;
    for (const auto& cell : S.cells) g.push_back(cell_affine_function(S.points, affine_basis_of(S.points, cell), h).first);
    return g;
}

// The decomposition of the cocharacter space into the domains of linearity of
// F(x) = max_p (<p, x> - h(p)) and their faces. The cell dual to a face t of S
// is conv{gradients of the maximal cells containing t} plus the outer normal
// cone of the smallest face of the ambient containing t; its tag is t.
inline PolyhedralComplex legendre_dual(const Subdivision& S) {
    require(S.lifting.has_value(), "legendre dual needs a lifting");
    require(lifting_induces(S, *S.lifting), "the lifting does not induce the subdivision");
    const auto& P = S.ambient;
    require(P.full_dimensional(), "legendre dual needs a full-dimensional ambient polytope");
    std::size_t n = P.ambient_dim();
    PolyhedralComplex K;
    K.ambient_dim = n;
    K.vertices = cell_gradients(S, *S.lifting);
    for (const auto& f : P.facets()) K.rays.push_back(negate(f.normal));
    for (const auto& face : subdivision_faces(S)) {
        PolyCell c;
        c.vertices = face.cells;
        for (std::size_t fi = 0; fi < P.facets().size(); ++fi) {
            const auto& f = P.facets()[fi];
            bool on = true;
            for (auto j : face.points)
                if (dot(f.normal, S.points[j]) != f.offset) on = false;
            if (on) c.rays.push_back(fi);
        }
        c.tag = face.points;
        K.cells.push_back(std::move(c));
    }
    finalize_complex(K);
    for (const auto& c : K.cells) {
        std::size_t tag_dim = affine_rank(gather(S.points, c.tag)) - 1;
        require(c.dim + tag_dim == n, "internal error: dual cell has the wrong dimension");
    }
    return K;
}

// The tag faces of the bounded dual cells, i.e. the interior faces of S.
inline std::vector<IndexSet> interior_faces(const Subdivision& S) {
    const auto& P = S.ambient;
    std::vector<IndexSet> out;
    for (const auto& face : subdivision_faces(S)) {
        bool boundary = false;
        for (const auto& f : P.facets()) {
            bool on = true;
            for (auto j : face.points)
                if (dot(f.normal, S.points[j]) != f.offset) on = false;
            boundary = boundary || on;
        }
        if (!boundary) out.push_back(face.points);
    }
    return out;
}

}  // namespace snctrop
