#pragma once

// Lattice subdivisions: validation, unimodularity and regularity checks, and
// the constructive alcove and staircase triangulations.

#include "lp.hpp"
#include "polytope.hpp"

#include <functional>
#include <tuple>

namespace snctrop {

struct Subdivision {
    LatticePolytope ambient;
    std::vector<LatticeVector> points;  // sorted lexicographically
    std::vector<IndexSet> cells;        // sorted index sets, sorted list
    std::optional<RatVector> lifting;

    std::size_t dim() const { return ambient.dim(); }
};

// Sorts points and cells into canonical order; cell indices are remapped.
inline Subdivision make_subdivision(LatticePolytope ambient, std::vector<LatticeVector> points,
                                    std::vector<IndexSet> cells, std::optional<RatVector> lifting = std::nullopt) {
    IndexSet order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
    IndexSet inv(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) inv[order[i]] = i;
    Subdivision s;
    s.ambient = std::move(ambient);
    for (auto i : order) s.points.push_back(points[i]);
    for (std::size_t i = 1; i < s.points.size(); ++i)
        require(s.points[i] != s.points[i - 1], "subdivision points must be distinct");
    for (auto& c : cells) {
        IndexSet m;
        for (auto i : c) {
            require(i < points.size(), "cell refers to a missing point");
            m.push_back(inv[i]);
        }
        std::sort(m.begin(), m.end());
        m.erase(std::unique(m.begin(), m.end()), m.end());
        s.cells.push_back(std::move(m));
    }
    std::sort(s.cells.begin(), s.cells.end());
    if (lifting) {
        require(lifting->size() == points.size(), "lifting has the wrong length");
        RatVector h(points.size());
        for (std::size_t i = 0; i < order.size(); ++i) h[i] = (*lifting)[order[i]];
        s.lifting = std::move(h);
    }
    return s;
}

struct CellFacet {
    LatticeVector normal;  // inward for the cell
    Int offset;
    IndexSet points;       // global point indices of the cell lying on the facet
    bool on_boundary;      // contained in a facet of the ambient polytope
};

struct Wall {
    std::size_t left, right;
    IndexSet points;
    LatticeVector normal;  // inward for `left`
    Int offset;
};

// Facet data of every cell plus the interior walls; produced by validation.
struct SubdivisionAnalysis {
    std::vector<std::vector<CellFacet>> cell_facets;
    std::vector<Wall> walls;
    std::vector<IndexSet> cell_bases;  // affinely independent subsets spanning each cell
};

inline std::vector<LatticeVector> gather(const std::vector<LatticeVector>& pts, const IndexSet& idx) {
    std::vector<LatticeVector> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(pts[i]);
    return out;
}

inline Int cell_volume(const std::vector<LatticeVector>& pts, const IndexSet& cell) {
    auto local = gather(pts, cell);
    IndexSet order(local.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Int total = 0;
    for (const auto& c : placing_triangulation(local, order)) total += normalized_volume(gather(local, c));
    return total;
}

// Affine coordinates of q with respect to affinely independent points.
inline std::optional<RatVector> barycentric(const std::vector<LatticeVector>& basis, const RatVector& q) {
    std::size_t n = q.size(), k = basis.size();
    RatMatrix m(n + 1, RatVector(k));
    RatVector b(n + 1);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < k; ++j) m[r][j] = basis[j][r];
        b[r] = q[r];
    }
    for (std::size_t j = 0; j < k; ++j) m[n][j] = 1;
    b[n] = 1;
    return solve(m, b, k);
}

inline IndexSet affine_basis_of(const std::vector<LatticeVector>& pts, const IndexSet& cell) {
    IndexSet chosen;
    detail::affine_frame(pts, cell, &chosen);
    return chosen;
}

struct ValidationResult {
    bool ok = true;
    std::string reason;
};

namespace detail {

inline SubdivisionAnalysis analyze_unchecked(const Subdivision& S, ValidationResult& vr) {
    SubdivisionAnalysis a;
    auto fail = [&](std::string why) {
        if (vr.ok) {
            vr.ok = false;
            vr.reason = std::move(why);
        }
    };
    const auto& P = S.ambient;
    std::size_t d = P.dim();
    for (const auto& p : S.points) {
        if (p.size() != P.ambient_dim() || !P.contains(p)) {
            fail("point outside the ambient polytope");
            return a;
        }
    }
    if (S.cells.empty()) {
        fail("no cells");
        return a;
    }
    Int total = 0;
    std::map<IndexSet, std::vector<std::pair<std::size_t, std::size_t>>> by_key;
    for (std::size_t ci = 0; ci < S.cells.size(); ++ci) {
        const auto& cell = S.cells[ci];
        for (auto i : cell)
            if (i >= S.points.size()) {
                fail("cell refers to a missing point");
                return a;
            }
        auto local = gather(S.points, cell);
        if (affine_rank(local) != d + 1) {
            fail("cell " + std::to_string(ci) + " is not full-dimensional");
            return a;
        }
        total += cell_volume(S.points, cell);
        a.cell_bases.push_back(affine_basis_of(S.points, cell));
        std::vector<CellFacet> facets;
        if (d == 0) {
            a.cell_facets.push_back({});
            continue;
        }
        HullData h = convex_hull_data(local);
        for (const auto& f : h.facets) {
            CellFacet cf{f.normal, f.offset, {}, false};
            for (auto q : f.points) cf.points.push_back(cell[q]);
            std::sort(cf.points.begin(), cf.points.end());
            for (const auto& pf : P.facets())
                if (pf.normal == f.normal && pf.offset == f.offset) cf.on_boundary = true;
            if (!cf.on_boundary) by_key[cf.points].push_back({ci, facets.size()});
            facets.push_back(std::move(cf));
        }
        a.cell_facets.push_back(std::move(facets));
    }
    if (total != P.normalized_volume()) {
        fail("cell volumes sum to " + total.get_str() + " instead of " + P.normalized_volume().get_str());
        return a;
    }
    for (const auto& [key, occ] : by_key) {
        if (occ.size() != 2) {
            fail("interior facet of cell " + std::to_string(occ[0].first) + " is not matched by exactly one neighbour");
            return a;
        }
        const auto& f1 = a.cell_facets[occ[0].first][occ[0].second];
        const auto& f2 = a.cell_facets[occ[1].first][occ[1].second];
        if (f1.normal != negate(f2.normal) || f1.offset != -f2.offset) {
            fail("cells " + std::to_string(occ[0].first) + " and " + std::to_string(occ[1].first) + " overlap");
            return a;
        }
        a.walls.push_back(Wall{occ[0].first, occ[1].first, key, f1.normal, f1.offset});
    }
    std::sort(a.walls.begin(), a.walls.end(),
              [](const Wall& x, const Wall& y) { return std::tie(x.left, x.right, x.points) < std::tie(y.left, y.right, y.points); });
    return a;
}

}  // namespace detail

inline ValidationResult validate(const Subdivision& S) {
    ValidationResult vr;
    detail::analyze_unchecked(S, vr);
    return vr;
}

// Throws when S is not a valid subdivision.
inline SubdivisionAnalysis analyze(const Subdivision& S) {
    ValidationResult vr;
    auto a = detail::analyze_unchecked(S, vr);
    require(vr.ok, "invalid subdivision: " + vr.reason);
    return a;
}

struct UnimodularVerdict {
    bool unimodular = true;
    std::optional<std::size_t> offending_cell;
    Int offending_volume = 0;
};

inline bool is_triangulation(const Subdivision& S) {
    for (const auto& c : S.cells)
        if (c.size() != S.dim() + 1) return false;
    return true;
}

inline UnimodularVerdict is_unimodular(const Subdivision& S) {
    require(is_triangulation(S), "unimodularity requires a triangulation");
    UnimodularVerdict v;
    for (std::size_t i = 0; i < S.cells.size(); ++i) {
        Int vol = normalized_volume(gather(S.points, S.cells[i]));
        if (vol != 1) {
            v.unimodular = false;
            v.offending_cell = i;
            v.offending_volume = vol;
            return v;
        }
    }
    return v;
}

// Affine function on a cell: coefficients m and constant c with
// m.x + c = h(x) on the cell's basis points.
inline std::pair<RatVector, Rat> cell_affine_function(const std::vector<LatticeVector>& pts, const IndexSet& basis,
                                                      const RatVector& h) {
    std::size_t n = pts[basis[0]].size();
    RatMatrix m;
    RatVector b;
    for (auto i : basis) {
        RatVector row(n + 1);
        for (std::size_t c = 0; c < n; ++c) row[c] = pts[i][c];
        row[n] = 1;
        m.push_back(std::move(row));
        b.push_back(h[i]);
    }
    auto sol = solve(m, b, n + 1);
    require(sol.has_value(), "internal error: cell basis is degenerate");
    RatVector grad(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(n));
    return {grad, (*sol)[n]};
}

// True iff the lower faces of the lifted points are exactly the cells: every
// cell's points lie on one affine function and all other points lie strictly
// above it.
inline bool lifting_induces(const std::vector<LatticeVector>& pts, const std::vector<IndexSet>& cells,
                            const RatVector& h, std::size_t dim) {
    if (h.size() != pts.size()) return false;
    for (const auto& cell : cells) {
        IndexSet basis = affine_basis_of(pts, cell);
        if (basis.size() != dim + 1) return false;
        auto [g, c] = cell_affine_function(pts, basis, h);
        std::size_t k = 0;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            Rat phi = dot(g, pts[j]) + c;
            bool in = k < cell.size() && cell[k] == j;
            if (in) {
                ++k;
                if (h[j] != phi) return false;
            } else if (!(h[j] > phi)) {
                return false;
            }
        }
    }
    return true;
}

inline bool lifting_induces(const Subdivision& S, const RatVector& h) {
    return lifting_induces(S.points, S.cells, h, S.dim());
}

// Strict-feasibility system for a lifting inducing the cells: planarity of
// each cell, strict folding across each wall, unused points strictly above.
inline std::optional<RatVector> find_lifting(const std::vector<LatticeVector>& pts, const std::vector<IndexSet>& cells,
                                             const SubdivisionAnalysis& a) {
    std::size_t N = pts.size();
    std::vector<LinearConstraint> weak, strict;
    auto phi_row = [&](std::size_t cell, const RatVector& q) {
        // Coefficients of phi_cell(q) in terms of heights of the cell basis.
        const auto& basis = a.cell_bases[cell];
        auto lam = barycentric(gather(pts, basis), q);
        require(lam.has_value(), "internal error: point outside the affine span of a cell");
        RatVector row(N, Rat(0));
        for (std::size_t i = 0; i < basis.size(); ++i) row[basis[i]] += (*lam)[i];
        return row;
    };
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const auto& basis = a.cell_bases[ci];
        for (auto q : cells[ci]) {
            if (std::find(basis.begin(), basis.end(), q) != basis.end()) continue;
            RatVector row = phi_row(ci, to_rat(pts[q]));
            row[q] -= 1;
            weak.push_back({row, 0});
            weak.push_back({negate(row), 0});
        }
    }
    for (const auto& w : a.walls) {
        std::optional<std::size_t> q;
        for (auto j : cells[w.right])
            if (dot(w.normal, pts[j]) != w.offset) {
                q = j;
                break;
            }
        require(q.has_value(), "internal error: flat wall neighbour");
        RatVector row = negate(phi_row(w.left, to_rat(pts[*q])));
        row[*q] += 1;
        strict.push_back({row, 0});
    }
    std::vector<bool> used(N, false);
    for (const auto& c : cells)
        for (auto i : c) used[i] = true;
    for (std::size_t j = 0; j < N; ++j) {
        if (used[j]) continue;
        std::optional<std::size_t> home;
        for (std::size_t ci = 0; ci < cells.size() && !home; ++ci) {
            bool inside = true;
            for (const auto& f : a.cell_facets[ci])
                if (dot(f.normal, pts[j]) < f.offset) inside = false;
            if (inside) home = ci;
        }
        require(home.has_value(), "internal error: point not covered by any cell");
        RatVector row = negate(phi_row(*home, to_rat(pts[j])));
        row[j] += 1;
        strict.push_back({row, 0});
    }
    auto x = lp_strict_feasible(weak, strict, N, true);
    if (!x) return std::nullopt;
    // Scale to integers; positive scaling preserves the induced subdivision.
    Int l = 1;
    for (const auto& v : *x) l = lcm_int(l, v.get_den());
    for (auto& v : *x) v *= l;
    require(lifting_induces(pts, cells, *x, a.cell_bases.empty() ? 0 : a.cell_bases[0].size() - 1),
            "internal error: regularity witness does not induce the subdivision");
    return x;
}

inline std::optional<RatVector> is_regular(const Subdivision& S) {
    auto a = analyze(S);
    if (S.cells.size() == 1 && S.cells[0].size() == S.points.size()) return RatVector(S.points.size(), Rat(0));
    return find_lifting(S.points, S.cells, a);
}

inline Subdivision with_lifting(Subdivision S, const RatVector& h) {
    require(lifting_induces(S, h), "lifting does not induce the subdivision");
    S.lifting = h;
    return S;
}

// Kuhn simplices of the cubes of side 1 in y-coordinates y_i = x_i + ... + x_r,
// kept when they lie in d >= y_1 >= ... >= y_r >= 0, then mapped back.
inline Subdivision alcove_triangulation_dilated_simplex(unsigned long d, unsigned long r) {
    require(d >= 1 && r >= 1, "dilation and dimension must be positive");
    LatticePolytope P = dilated_simplex(d, r);
    auto pts = P.lattice_points();
    std::map<LatticeVector, std::size_t> id;
    for (std::size_t i = 0; i < pts.size(); ++i) id[pts[i]] = i;
    auto to_x = [&](const LatticeVector& y) {
        LatticeVector x(r);
        for (std::size_t i = 0; i < r; ++i) x[i] = y[i] - (i + 1 < r ? y[i + 1] : Int(0));
        return x;
    };
    auto in_region = [&](const LatticeVector& y) {
        if (y[0] > Int(d) || y[r - 1] < 0) return false;
        for (std::size_t i = 0; i + 1 < r; ++i)
            if (y[i] < y[i + 1]) return false;
        return true;
    };
    std::vector<IndexSet> cells;
    std::vector<std::size_t> k(r, 0), perm(r);
    while (true) {
        for (std::size_t i = 0; i < r; ++i) perm[i] = i;
        do {
            LatticeVector y(r);
            for (std::size_t i = 0; i < r; ++i) y[i] = static_cast<unsigned long>(k[i]);
            std::vector<LatticeVector> verts = {y};
            for (std::size_t s = 0; s < r; ++s) {
                y[perm[s]] += 1;
                verts.push_back(y);
            }
            if (std::all_of(verts.begin(), verts.end(), in_region)) {
                IndexSet cell;
                for (auto& v : verts) cell.push_back(id.at(to_x(v)));
                std::sort(cell.begin(), cell.end());
                cells.push_back(std::move(cell));
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        std::size_t i = 0;
        while (i < r && k[i] == d - 1) k[i++] = 0;
        if (i == r) break;
        ++k[i];
    }
    Subdivision S = make_subdivision(P, pts, cells);
    require(is_unimodular(S).unimodular, "internal error: alcove triangulation is not unimodular");
    auto h = is_regular(S);
    require(h.has_value(), "internal error: alcove triangulation is not regular");
    S.lifting = h;
    return S;
}

inline Subdivision trivial_subdivision(const LatticePolytope& P) {
    auto pts = P.vertices();
    IndexSet all(pts.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return make_subdivision(P, pts, {all}, RatVector(pts.size(), Rat(0)));
}

// The one-cell subdivision on all lattice points of P; non-vertices lift to 1.
inline Subdivision one_cell_subdivision(const LatticePolytope& P) {
    auto pts = P.lattice_points();
    IndexSet cell;
    RatVector h(pts.size(), Rat(1));
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (std::binary_search(P.vertices().begin(), P.vertices().end(), pts[i])) {
            cell.push_back(i);
            h[i] = 0;
        }
    return make_subdivision(P, pts, {cell}, h);
}

// Staircase refinement of the product of two triangulations.
inline Subdivision staircase_triangulation(const Subdivision& TP, const Subdivision& TQ) {
    require(is_triangulation(TP) && is_triangulation(TQ), "staircase requires triangulations");
    std::size_t nq = TQ.points.size();
    std::vector<LatticeVector> pts;
    for (const auto& p : TP.points)
        for (const auto& q : TQ.points) {
            LatticeVector v = p;
            v.insert(v.end(), q.begin(), q.end());
            pts.push_back(std::move(v));
        }
    std::vector<IndexSet> cells;
    for (const auto& s : TP.cells) {
        for (const auto& t : TQ.cells) {
            std::size_t m = s.size() - 1, n = t.size() - 1;
            // Each path is a choice of which of the m+n steps advance in P.
            std::vector<bool> steps(m + n, false);
            std::fill(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(m), true);
            std::sort(steps.begin(), steps.end());
            do {
                std::size_t i = 0, j = 0;
                IndexSet cell = {s[0] * nq + t[0]};
                for (bool adv_p : steps) {
                    if (adv_p) ++i;
                    else ++j;
                    cell.push_back(s[i] * nq + t[j]);
                }
                std::sort(cell.begin(), cell.end());
                cells.push_back(std::move(cell));
            } while (std::next_permutation(steps.begin(), steps.end()));
        }
    }
    Subdivision S = make_subdivision(product(TP.ambient, TQ.ambient), pts, cells);
    analyze(S);
    bool uni_in = is_unimodular(TP).unimodular && is_unimodular(TQ).unimodular;
    if (uni_in) require(is_unimodular(S).unimodular, "internal error: staircase lost unimodularity");
    auto h = is_regular(S);
    if (h) S.lifting = h;
    else require(!(is_regular(TP) && is_regular(TQ)), "internal error: staircase of regular triangulations is not regular");
    return S;
}

// Stellar subdivision of a triangulation at a point of its support.
inline std::vector<IndexSet> stellar_insert(const std::vector<LatticeVector>& pts, std::vector<IndexSet> cells,
                                            std::size_t p) {
    for (const auto& c : cells) {
        auto lam = barycentric(gather(pts, c), to_rat(pts[p]));
        if (!lam) continue;
        if (std::any_of(lam->begin(), lam->end(), [](const Rat& x) { return x < 0; })) continue;
        IndexSet face;
        for (std::size_t i = 0; i < c.size(); ++i)
            if ((*lam)[i] > 0) face.push_back(c[i]);
        std::vector<IndexSet> out;
        for (const auto& e : cells) {
            if (!std::includes(e.begin(), e.end(), face.begin(), face.end())) {
                out.push_back(e);
                continue;
            }
            for (auto v : face) {
                IndexSet nc;
                for (auto x : e)
                    if (x != v) nc.push_back(x);
                nc.push_back(p);
                std::sort(nc.begin(), nc.end());
                out.push_back(std::move(nc));
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }
    throw Error("stellar insertion point is outside the triangulation");
}

}  // namespace snctrop
