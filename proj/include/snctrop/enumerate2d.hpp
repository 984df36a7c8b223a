#pragma once

// Exhaustive enumeration of lattice subdivisions of polygons (and segments).
//
// Every polyhedral subdivision refines to a triangulation with the same
// vertex set, and re-merging the triangles of each cell in fan order passes
// only through convex unions. So: enumerate all triangulations of every
// vertex-containing point subset, then close under merging two adjacent cells
// whose union is convex with no vertex lost. For regular_only, the closure
// only expands regular states; the face of a regular subdivision in the
// secondary polytope is the product of its cells' secondary polytopes, so the
// fan-merge chains above stay regular.

#include "parallel.hpp"
#include "subdivision.hpp"

#include <set>

namespace snctrop {

struct EnumerationOptions {
    bool regular_only = false;
    std::optional<std::size_t> max_cells;
    std::size_t point_cap = 12;
    unsigned threads = 1;
};

namespace detail {

class PlanarConfig {
public:
    explicit PlanarConfig(std::vector<LatticeVector> pts) : pts_(std::move(pts)), n_(pts_.size()) {
        orient_.assign(n_ * n_ * n_, 0);
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = 0; b < n_; ++b)
                for (std::size_t c = 0; c < n_; ++c) {
                    Int det = (pts_[b][0] - pts_[a][0]) * (pts_[c][1] - pts_[a][1]) -
                              (pts_[b][1] - pts_[a][1]) * (pts_[c][0] - pts_[a][0]);
                    orient_[(a * n_ + b) * n_ + c] = static_cast<signed char>(sgn(det));
                }
    }

    std::size_t size() const { return n_; }
    const std::vector<LatticeVector>& points() const { return pts_; }
    int orient(std::size_t a, std::size_t b, std::size_t c) const { return orient_[(a * n_ + b) * n_ + c]; }

    Int twice_area(const IndexSet& ccw) const {
        Int s = 0;
        for (std::size_t i = 0; i < ccw.size(); ++i) {
            const auto& p = pts_[ccw[i]];
            const auto& q = pts_[ccw[(i + 1) % ccw.size()]];
            s += p[0] * q[1] - p[1] * q[0];
        }
        return s;
    }

    // Vertices of the convex hull of a point subset, counter-clockwise,
    // starting from the lexicographically smallest point.
    IndexSet hull_ccw(IndexSet idx) const {
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return pts_[a] < pts_[b]; });
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        if (idx.size() < 3) return idx;
        IndexSet h(2 * idx.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            while (k >= 2 && orient(h[k - 2], h[k - 1], idx[i]) <= 0) --k;
            h[k++] = idx[i];
        }
        for (std::size_t i = idx.size() - 1, t = k + 1; i > 0; --i) {
            while (k >= t && orient(h[k - 2], h[k - 1], idx[i - 1]) <= 0) --k;
            h[k++] = idx[i - 1];
        }
        h.resize(k - 1);
        return h;
    }

private:
    std::vector<LatticeVector> pts_;
    std::size_t n_;
    std::vector<signed char> orient_;
};

struct Tri {
    std::size_t a, b, c;  // counter-clockwise
};

class TriangulationEnumerator {
public:
    TriangulationEnumerator(const PlanarConfig& cfg, IndexSet subset) : cfg_(cfg), q_(std::move(subset)) {}

    std::vector<std::vector<Tri>> run() {
        IndexSet hull = cfg_.hull_ccw(q_);
        // Hull edges split at collinear subset points.
        for (std::size_t i = 0; i < hull.size(); ++i) {
            std::size_t u = hull[i], v = hull[(i + 1) % hull.size()];
            IndexSet on;
            for (auto x : q_)
                if (cfg_.orient(u, v, x) == 0) on.push_back(x);
            const auto& P = cfg_.points();
            LatticeVector d = sub(P[v], P[u]);
            std::sort(on.begin(), on.end(), [&](std::size_t x, std::size_t y) { return dot(d, P[x]) < dot(d, P[y]); });
            for (std::size_t j = 0; j + 1 < on.size(); ++j) boundary_.insert({on[j], on[j + 1]});
        }
        auto start = *boundary_.begin();
        for (auto x : q_) {
            if (cfg_.orient(start.first, start.second, x) <= 0) continue;
            Tri t{start.first, start.second, x};
            if (!empty(t)) continue;
            placed_.push_back(t);
            recurse();
            placed_.pop_back();
        }
        return std::move(out_);
    }

private:
    bool empty(const Tri& t) const {
        for (auto x : q_) {
            if (x == t.a || x == t.b || x == t.c) continue;
            if (cfg_.orient(t.a, t.b, x) >= 0 && cfg_.orient(t.b, t.c, x) >= 0 && cfg_.orient(t.c, t.a, x) >= 0)
                return false;
        }
        return true;
    }

    bool separated_by(const Tri& s, const Tri& t) const {
        const std::size_t sv[3] = {s.a, s.b, s.c};
        for (int e = 0; e < 3; ++e) {
            std::size_t u = sv[e], v = sv[(e + 1) % 3];
            if (cfg_.orient(u, v, t.a) <= 0 && cfg_.orient(u, v, t.b) <= 0 && cfg_.orient(u, v, t.c) <= 0) return true;
        }
        return false;
    }

    bool disjoint(const Tri& s, const Tri& t) const { return separated_by(s, t) || separated_by(t, s); }

    void recurse() {
        // Directed edges with a triangle on their left.
        std::set<std::pair<std::size_t, std::size_t>> edges;
        for (const auto& t : placed_) {
            edges.insert({t.a, t.b});
            edges.insert({t.b, t.c});
            edges.insert({t.c, t.a});
        }
        std::optional<std::pair<std::size_t, std::size_t>> open;
        for (const auto& e : edges) {
            if (boundary_.count(e) || edges.count({e.second, e.first})) continue;
            open = e;
            break;
        }
        if (!open) {
            out_.push_back(placed_);
            return;
        }
        // The uncovered side of (p, q) is to the left of (q, p).
        std::size_t u = open->second, v = open->first;
        for (auto x : q_) {
            if (cfg_.orient(u, v, x) <= 0) continue;
            Tri t{u, v, x};
            if (!empty(t)) continue;
            bool ok = true;
            for (const auto& s : placed_)
                if (!disjoint(s, t)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            placed_.push_back(t);
            recurse();
            placed_.pop_back();
        }
    }

    const PlanarConfig& cfg_;
    IndexSet q_;
    std::set<std::pair<std::size_t, std::size_t>> boundary_;
    std::vector<Tri> placed_;
    std::vector<std::vector<Tri>> out_;
};

using CellSet = std::vector<IndexSet>;  // sorted vertex sets, sorted

inline SubdivisionAnalysis planar_analysis(const PlanarConfig& cfg, const CellSet& cells) {
    SubdivisionAnalysis a;
    const auto& P = cfg.points();
    std::vector<IndexSet> ccw;
    for (const auto& c : cells) ccw.push_back(cfg.hull_ccw(c));
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        a.cell_bases.push_back({ccw[ci][0], ccw[ci][1], ccw[ci][2]});
        std::sort(a.cell_bases.back().begin(), a.cell_bases.back().end());
        std::vector<CellFacet> fs;
        for (std::size_t i = 0; i < ccw[ci].size(); ++i) {
            std::size_t u = ccw[ci][i], v = ccw[ci][(i + 1) % ccw[ci].size()];
            LatticeVector d = sub(P[v], P[u]);
            LatticeVector n = primitive_part(LatticeVector{-d[1], d[0]});
            IndexSet on = {std::min(u, v), std::max(u, v)};
            fs.push_back(CellFacet{n, dot(n, P[u]), on, false});
        }
        a.cell_facets.push_back(std::move(fs));
    }
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = i + 1; j < cells.size(); ++j) {
            IndexSet common;
            std::set_intersection(cells[i].begin(), cells[i].end(), cells[j].begin(), cells[j].end(),
                                  std::back_inserter(common));
            if (common.size() != 2) continue;
            for (const auto& f : a.cell_facets[i])
                if (f.points == common) a.walls.push_back(Wall{i, j, common, f.normal, f.offset});
        }
    return a;
}

inline std::optional<RatVector> planar_lifting(const PlanarConfig& cfg, const CellSet& cells) {
    if (cells.size() == 1 && cells[0].size() == cfg.size()) return RatVector(cfg.size(), Rat(0));
    return find_lifting(cfg.points(), cells, planar_analysis(cfg, cells));
}

}  // namespace detail

namespace detail {

inline std::vector<Subdivision> enumerate_segment(const LatticePolytope& P, const EnumerationOptions& opt) {
    auto pts = P.lattice_points();
    require(pts.size() <= opt.point_cap, "lattice point count " + std::to_string(pts.size()) + " exceeds the cap");
    std::size_t m = pts.size();
    LatticeVector dir = sub(P.vertices()[1], P.vertices()[0]);
    IndexSet along(m);
    for (std::size_t i = 0; i < m; ++i) along[i] = i;
    std::sort(along.begin(), along.end(), [&](std::size_t a, std::size_t b) { return dot(dir, pts[a]) < dot(dir, pts[b]); });
    std::vector<Subdivision> out;
    std::size_t inner = m - 2;
    for (unsigned long mask = 0; mask < (1ul << inner); ++mask) {
        IndexSet breaks = {along[0]};
        for (std::size_t k = 0; k < inner; ++k)
            if ((mask >> k) & 1ul) breaks.push_back(along[k + 1]);
        breaks.push_back(along[m - 1]);
        if (opt.max_cells && breaks.size() - 1 > *opt.max_cells) continue;
        std::vector<IndexSet> cells;
        for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
            IndexSet c = {breaks[k], breaks[k + 1]};
            std::sort(c.begin(), c.end());
            cells.push_back(c);
        }
        // Convex piecewise-linear heights bending at the breaks; unused points +1.
        RatVector h(m, Rat(0));
        for (std::size_t i = 0; i < m; ++i) {
            Int t = dot(dir, pts[i]);
            for (std::size_t k = 1; k + 1 < breaks.size(); ++k) {
                Int b = dot(dir, pts[breaks[k]]);
                if (t > b) h[i] += Rat(t - b);
            }
            if (std::find(breaks.begin(), breaks.end(), i) == breaks.end()) h[i] += 1;
        }
        out.push_back(make_subdivision(P, pts, cells, h));
    }
    return out;
}

}  // namespace detail

inline bool canonical_less(const Subdivision& a, const Subdivision& b) {
    if (a.cells.size() != b.cells.size()) return a.cells.size() < b.cells.size();
    return a.cells < b.cells;
}

// All lattice subdivisions of a polygon, cells given by their vertex sets,
// sorted by (number of cells, cells). Regular outputs carry a lifting.
inline std::vector<Subdivision> enumerate_subdivisions_2d(const LatticePolytope& P, const EnumerationOptions& opt = {}) {
    if (P.dim() == 0) {
        auto pts = P.lattice_points();
        return {make_subdivision(P, pts, {{0}}, RatVector{Rat(0)})};
    }
    if (P.dim() == 1) return detail::enumerate_segment(P, opt);
    require(P.ambient_dim() == 2 && P.dim() == 2, "enumeration requires a polygon in the plane");
    auto pts = P.lattice_points();
    require(pts.size() <= opt.point_cap,
            "lattice point count " + std::to_string(pts.size()) + " exceeds the cap of " + std::to_string(opt.point_cap));
    detail::PlanarConfig cfg(pts);
    std::size_t n = pts.size();
    IndexSet vertex_ids, optional_ids;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::binary_search(P.vertices().begin(), P.vertices().end(), pts[i])) vertex_ids.push_back(i);
        else optional_ids.push_back(i);
    }

    // Triangulations of every point subset containing the vertices.
    std::vector<detail::CellSet> triangulations;
    for (unsigned long mask = 0; mask < (1ul << optional_ids.size()); ++mask) {
        IndexSet q = vertex_ids;
        for (std::size_t k = 0; k < optional_ids.size(); ++k)
            if ((mask >> k) & 1ul) q.push_back(optional_ids[k]);
        std::sort(q.begin(), q.end());
        for (auto& tris : detail::TriangulationEnumerator(cfg, q).run()) {
            detail::CellSet cs;
            for (auto& t : tris) {
                IndexSet c = {t.a, t.b, t.c};
                std::sort(c.begin(), c.end());
                cs.push_back(std::move(c));
            }
            std::sort(cs.begin(), cs.end());
            triangulations.push_back(std::move(cs));
        }
    }
    std::sort(triangulations.begin(), triangulations.end());

    std::map<detail::CellSet, std::optional<RatVector>> found;
    std::vector<detail::CellSet> frontier;
    if (opt.regular_only) {
        auto lifts = parallel_map(triangulations, opt.threads,
                                  [&](const detail::CellSet& cs) { return detail::planar_lifting(cfg, cs); });
        for (std::size_t i = 0; i < triangulations.size(); ++i)
            if (lifts[i]) {
                found.emplace(triangulations[i], lifts[i]);
                frontier.push_back(triangulations[i]);
            }
    } else {
        for (auto& t : triangulations) {
            found.emplace(t, std::nullopt);
            frontier.push_back(t);
        }
    }

    while (!frontier.empty()) {
        std::vector<detail::CellSet> candidates;
        std::set<detail::CellSet> fresh;
        for (const auto& cs : frontier) {
            for (std::size_t i = 0; i < cs.size(); ++i)
                for (std::size_t j = i + 1; j < cs.size(); ++j) {
                    IndexSet common;
                    std::set_intersection(cs[i].begin(), cs[i].end(), cs[j].begin(), cs[j].end(),
                                          std::back_inserter(common));
                    if (common.size() != 2) continue;
                    IndexSet uni;
                    std::set_union(cs[i].begin(), cs[i].end(), cs[j].begin(), cs[j].end(), std::back_inserter(uni));
                    IndexSet hull = cfg.hull_ccw(uni);
                    if (hull.size() != uni.size()) continue;  // a vertex would be lost or union not convex
                    if (cfg.twice_area(hull) != cfg.twice_area(cfg.hull_ccw(cs[i])) + cfg.twice_area(cfg.hull_ccw(cs[j])))
                        continue;
                    detail::CellSet next;
                    for (std::size_t k = 0; k < cs.size(); ++k)
                        if (k != i && k != j) next.push_back(cs[k]);
                    next.push_back(uni);
                    std::sort(next.begin(), next.end());
                    if (!found.count(next) && fresh.insert(next).second) candidates.push_back(std::move(next));
                }
        }
        frontier.clear();
        if (opt.regular_only) {
            auto lifts = parallel_map(candidates, opt.threads,
                                      [&](const detail::CellSet& cs) { return detail::planar_lifting(cfg, cs); });
            for (std::size_t i = 0; i < candidates.size(); ++i)
                if (lifts[i]) {
                    found.emplace(candidates[i], lifts[i]);
                    frontier.push_back(candidates[i]);
                }
        } else {
            for (auto& c : candidates) {
                found.emplace(c, std::nullopt);
                frontier.push_back(c);
            }
        }
    }

    std::vector<Subdivision> out;
    for (auto& [cs, h] : found) {
        if (opt.max_cells && cs.size() > *opt.max_cells) continue;
        out.push_back(make_subdivision(P, pts, cs, h));
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

}  // namespace snctrop
