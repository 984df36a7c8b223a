#pragma once

// Exact convex hulls of lattice point sets, placing triangulations, and the
// LatticePolytope value type with its Newton-polytope constructors.

#include "exact.hpp"

#include <map>
#include <set>

namespace snctrop {

constexpr std::size_t kMaxHullDimension = 6;

// normal . x >= offset, normal primitive and lying in the direction space of
// the affine hull.
struct Facet {
    LatticeVector normal;
    Int offset;
    IndexSet points;  // indices of input points lying on the facet
};

struct Face {
    int dim;
    IndexSet vertices;  // indices into LatticePolytope::vertices()
};

namespace detail {

// Affine frame of a point set: a base point and independent direction rows.
struct AffineFrame {
    LatticeVector base;
    IntMatrix directions;
};

template <class Points>
AffineFrame affine_frame(const Points& pts, const IndexSet& order, IndexSet* chosen = nullptr) {
    AffineFrame f;
    if (order.empty()) return f;
    f.base = pts[order[0]];
    if (chosen) chosen->push_back(order[0]);
    for (std::size_t k = 1; k < order.size(); ++k) {
        IntMatrix trial = f.directions;
        trial.push_back(sub(pts[order[k]], f.base));
        if (rank(trial) == trial.size()) {
            f.directions = std::move(trial);
            if (chosen) chosen->push_back(order[k]);
        }
    }
    return f;
}

// Primitive normal a in span(dirs) with a.(s - s0) = 0 for all s in `on`,
// oriented so that a.inside > a.s0. `on` must affinely span a hyperplane of the
// frame.
inline std::optional<std::pair<LatticeVector, Int>> hyperplane_in_frame(const IntMatrix& dirs,
                                                                        const std::vector<LatticeVector>& on,
                                                                        const RatVector& inside) {
    std::size_t k = dirs.size();
    RatMatrix m;
    for (std::size_t i = 1; i < on.size(); ++i) {
        LatticeVector d = sub(on[i], on[0]);
        RatVector row(k);
        for (std::size_t j = 0; j < k; ++j) row[j] = dot(dirs[j], d);
        m.push_back(std::move(row));
    }
    RatMatrix ns = nullspace(m, k);
    if (ns.size() != 1) return std::nullopt;
    RatVector a(dirs.empty() ? 0 : dirs[0].size(), Rat(0));
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t c = 0; c < a.size(); ++c) a[c] += ns[0][j] * dirs[j][c];
    LatticeVector n = primitive_integer_multiple(a);
    Int off = dot(n, on[0]);
    Rat side = dot(n, inside) - off;
    if (side == 0) return std::nullopt;
    if (side < 0) {
        n = negate(n);
        off = -off;
    }
    return std::make_pair(n, off);
}

}  // namespace detail

struct HullData {
    std::size_t ambient_dim = 0;
    std::size_t dim = 0;
    IntMatrix equations;     // rows a with a.x = rhs on the hull
    LatticeVector eq_rhs;
    std::vector<Facet> facets;  // sorted by (normal, offset)
    IndexSet vertices;       // indices of extreme input points, sorted by coordinates
};

// Incremental exact hull. Points may repeat; indices refer to the input.
inline HullData convex_hull_data(const std::vector<LatticeVector>& pts) {
    require(!pts.empty(), "convex hull of an empty set");
    HullData h;
    h.ambient_dim = pts[0].size();
    for (const auto& p : pts) require(p.size() == h.ambient_dim, "points of mixed dimension");

    // Distinct points in lexicographic order; duplicates follow their representative.
    IndexSet order(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
    IndexSet distinct;
    for (auto i : order)
        if (distinct.empty() || pts[distinct.back()] != pts[i]) distinct.push_back(i);

    IndexSet init;
    auto frame = detail::affine_frame(pts, distinct, &init);
    h.dim = frame.directions.size();
    require(h.dim <= kMaxHullDimension, "hull dimension " + std::to_string(h.dim) + " exceeds supported maximum 6");

    RatMatrix perp = nullspace(to_rat(frame.directions.empty() ? IntMatrix{} : frame.directions), h.ambient_dim);
    if (frame.directions.empty()) {
        perp.clear();
        for (std::size_t i = 0; i < h.ambient_dim; ++i) {
            RatVector e(h.ambient_dim, Rat(0));
            e[i] = 1;
            perp.push_back(e);
        }
    }
    rref(perp);
    for (auto& row : perp) {
        LatticeVector a = primitive_integer_multiple(row);
        h.eq_rhs.push_back(dot(a, frame.base));
        h.equations.push_back(std::move(a));
    }

    if (h.dim == 0) {
        h.vertices = {distinct[0]};
        return h;
    }

    RatVector inside(h.ambient_dim, Rat(0));
    for (auto i : init)
        for (std::size_t c = 0; c < h.ambient_dim; ++c) inside[c] += Rat(pts[i][c]) / Rat(static_cast<long>(init.size()));

    std::vector<Facet> facets;
    IndexSet inserted;
    auto collect = [&](Facet& f) {
        f.points.clear();
        for (auto q : inserted)
            if (dot(f.normal, pts[q]) == f.offset) f.points.push_back(q);
    };
    inserted = init;
    std::sort(inserted.begin(), inserted.end());
    for (std::size_t j = 0; j < init.size(); ++j) {
        std::vector<LatticeVector> on;
        for (std::size_t i = 0; i < init.size(); ++i)
            if (i != j) on.push_back(pts[init[i]]);
        auto hp = detail::hyperplane_in_frame(frame.directions, on, inside);
        require(hp.has_value(), "internal hull error: degenerate initial simplex");
        Facet f{hp->first, hp->second, {}};
        collect(f);
        facets.push_back(std::move(f));
    }

    std::set<std::size_t> in_init(init.begin(), init.end());
    for (auto p : distinct) {
        if (in_init.count(p)) continue;
        std::vector<bool> visible(facets.size());
        bool any = false;
        for (std::size_t i = 0; i < facets.size(); ++i) {
            visible[i] = dot(facets[i].normal, pts[p]) < facets[i].offset;
            any = any || visible[i];
        }
        inserted.push_back(p);
        if (!any) {
            for (auto& f : facets)
                if (dot(f.normal, pts[p]) == f.offset) {
                    f.points.push_back(p);
                    std::sort(f.points.begin(), f.points.end());
                }
            continue;
        }
        std::vector<Facet> next;
        for (std::size_t i = 0; i < facets.size(); ++i)
            if (!visible[i]) next.push_back(facets[i]);
        std::vector<Facet> fresh;
        for (std::size_t i = 0; i < facets.size(); ++i) {
            if (!visible[i]) continue;
            for (std::size_t j = 0; j < facets.size(); ++j) {
                if (visible[j]) continue;
                IndexSet ridge;
                std::set_intersection(facets[i].points.begin(), facets[i].points.end(), facets[j].points.begin(),
                                      facets[j].points.end(), std::back_inserter(ridge));
                std::vector<LatticeVector> on;
                for (auto q : ridge) on.push_back(pts[q]);
                if (affine_rank(on) != h.dim - 1) continue;
                on.push_back(pts[p]);
                std::swap(on.front(), on.back());
                auto hp = detail::hyperplane_in_frame(frame.directions, on, inside);
                require(hp.has_value(), "internal hull error: degenerate ridge");
                bool dup = false;
                for (const auto& f : next)
                    if (f.normal == hp->first && f.offset == hp->second) dup = true;
                for (const auto& f : fresh)
                    if (f.normal == hp->first && f.offset == hp->second) dup = true;
                if (!dup) fresh.push_back(Facet{hp->first, hp->second, {}});
            }
        }
        for (auto& f : next)
            if (dot(f.normal, pts[p]) == f.offset) f.points.push_back(p);
        std::sort(inserted.begin(), inserted.end());
        for (auto& f : fresh) {
            collect(f);
            next.push_back(std::move(f));
        }
        facets = std::move(next);
        for (auto& f : facets) std::sort(f.points.begin(), f.points.end());
    }

    // Duplicate input points join their representatives on every facet.
    for (auto& f : facets) {
        f.points.clear();
        for (std::size_t q = 0; q < pts.size(); ++q)
            if (dot(f.normal, pts[q]) == f.offset) f.points.push_back(q);
    }
    std::sort(facets.begin(), facets.end(), [](const Facet& a, const Facet& b) {
        return a.normal != b.normal ? a.normal < b.normal : a.offset < b.offset;
    });

    // A point is a vertex iff the facets through it meet only in it.
    for (auto p : distinct) {
        std::optional<IndexSet> meet;
        for (const auto& f : facets) {
            if (!std::binary_search(f.points.begin(), f.points.end(), p)) continue;
            IndexSet same;
            for (auto q : f.points)
                if (pts[q] != pts[p]) same.push_back(q);
            if (!meet) meet = same;
            else {
                IndexSet t;
                std::set_intersection(meet->begin(), meet->end(), same.begin(), same.end(), std::back_inserter(t));
                meet = std::move(t);
            }
        }
        if (meet && meet->empty()) h.vertices.push_back(p);
    }
    std::sort(h.vertices.begin(), h.vertices.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
    h.facets = std::move(facets);
    return h;
}

// Placing triangulation of pts in the given insertion order. Points that are
// not placed (inside the current hull) are skipped. Cells are sorted index sets.
inline std::vector<IndexSet> placing_triangulation(const std::vector<LatticeVector>& pts, const IndexSet& order) {
    std::vector<IndexSet> cells;
    if (order.empty()) return cells;
    IndexSet frame_pts = {order[0]};
    IntMatrix dirs;
    LatticeVector base = pts[order[0]];
    cells.push_back({order[0]});
    RatVector inside = to_rat(base);
    for (std::size_t k = 1; k < order.size(); ++k) {
        std::size_t p = order[k];
        IntMatrix trial = dirs;
        trial.push_back(sub(pts[p], base));
        if (rank(trial) == trial.size()) {
            dirs = std::move(trial);
            frame_pts.push_back(p);
            for (auto& c : cells) {
                c.push_back(p);
                std::sort(c.begin(), c.end());
            }
            inside.assign(base.size(), Rat(0));
            for (auto q : frame_pts)
                for (std::size_t c = 0; c < base.size(); ++c)
                    inside[c] += Rat(pts[q][c]) / Rat(static_cast<long>(frame_pts.size()));
            continue;
        }
        // Boundary facets of the current triangulation, with their opposite vertex.
        std::map<IndexSet, std::pair<int, std::size_t>> count;
        for (const auto& c : cells) {
            for (std::size_t drop = 0; drop < c.size(); ++drop) {
                IndexSet f;
                for (std::size_t i = 0; i < c.size(); ++i)
                    if (i != drop) f.push_back(c[i]);
                auto& e = count[f];
                e.first += 1;
                e.second = c[drop];
            }
        }
        std::vector<IndexSet> added;
        for (const auto& [f, e] : count) {
            if (e.first != 1) continue;
            std::vector<LatticeVector> on;
            for (auto q : f) on.push_back(pts[q]);
            auto hp = detail::hyperplane_in_frame(dirs, on, to_rat(pts[e.second]));
            require(hp.has_value(), "internal placing error");
            if (dot(hp->first, pts[p]) < hp->second) {
                IndexSet c = f;
                c.push_back(p);
                std::sort(c.begin(), c.end());
                added.push_back(std::move(c));
            }
        }
        for (auto& c : added) cells.push_back(std::move(c));
    }
    std::sort(cells.begin(), cells.end());
    return cells;
}

class LatticePolytope {
public:
    LatticePolytope() = default;

    static LatticePolytope hull(const std::vector<LatticeVector>& points) {
        LatticePolytope P;
        HullData h = convex_hull_data(points);
        P.ambient_dim_ = h.ambient_dim;
        P.dim_ = h.dim;
        for (auto i : h.vertices) P.vertices_.push_back(points[i]);
        std::map<LatticeVector, std::size_t> vid;
        for (std::size_t i = 0; i < P.vertices_.size(); ++i) vid[P.vertices_[i]] = i;
        for (auto& f : h.facets) {
            IndexSet vs;
            for (auto q : f.points) {
                auto it = vid.find(points[q]);
                if (it != vid.end()) vs.push_back(it->second);
            }
            std::sort(vs.begin(), vs.end());
            vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
            P.facets_.push_back(Facet{f.normal, f.offset, vs});
        }
        P.equations_ = h.equations;
        P.eq_rhs_ = h.eq_rhs;
        P.build_faces();
        P.cross_validate();
        return P;
    }

    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t dim() const { return dim_; }
    bool full_dimensional() const { return dim_ == ambient_dim_; }
    const std::vector<LatticeVector>& vertices() const { return vertices_; }
    // Facet::points index into vertices().
    const std::vector<Facet>& facets() const { return facets_; }
    const IntMatrix& equations() const { return equations_; }
    const LatticeVector& equation_rhs() const { return eq_rhs_; }
    const std::vector<Face>& faces() const { return faces_; }

    template <class V>
    bool contains(const V& x) const {
        require(x.size() == ambient_dim_, "dimension mismatch");
        for (std::size_t i = 0; i < equations_.size(); ++i)
            if (dot(equations_[i], x) != eq_rhs_[i]) return false;
        for (const auto& f : facets_)
            if (dot(f.normal, x) < f.offset) return false;
        return true;
    }

    template <class V>
    bool contains_in_relative_interior(const V& x) const {
        if (!contains(x)) return false;
        for (const auto& f : facets_)
            if (dot(f.normal, x) == f.offset) return false;
        return true;
    }

    // Integer points, lexicographically sorted.
    std::vector<LatticeVector> lattice_points() const {
        std::vector<LatticeVector> out;
        LatticeVector lo = vertices_[0], hi = vertices_[0];
        for (const auto& v : vertices_)
            for (std::size_t c = 0; c < ambient_dim_; ++c) {
                if (v[c] < lo[c]) lo[c] = v[c];
                if (v[c] > hi[c]) hi[c] = v[c];
            }
        LatticeVector x = lo;
        while (true) {
            if (contains(x)) out.push_back(x);
            bool advanced = false;
            for (std::size_t c = ambient_dim_; c-- > 0;) {
                if (x[c] < hi[c]) {
                    ++x[c];
                    for (std::size_t j = c + 1; j < ambient_dim_; ++j) x[j] = lo[j];
                    advanced = true;
                    break;
                }
            }
            if (!advanced) return out;
        }
    }

    // Normalized volume relative to the lattice of the affine hull, summed
    // over a placing triangulation of the vertices.
    Int normalized_volume() const {
        IndexSet order(vertices_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        Int total = 0;
        for (const auto& c : placing_triangulation(vertices_, order)) {
            std::vector<LatticeVector> s;
            for (auto i : c) s.push_back(vertices_[i]);
            total += snctrop::normalized_volume(s);
        }
        return total;
    }

    friend bool operator==(const LatticePolytope& a, const LatticePolytope& b) {
        return a.ambient_dim_ == b.ambient_dim_ && a.vertices_ == b.vertices_;
    }

private:
    void build_faces() {
        std::set<IndexSet> seen;
        std::vector<IndexSet> queue;
        IndexSet all(vertices_.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        seen.insert(all);
        queue.push_back(all);
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            IndexSet cur = queue[qi];
            for (const auto& f : facets_) {
                IndexSet t;
                std::set_intersection(cur.begin(), cur.end(), f.points.begin(), f.points.end(), std::back_inserter(t));
                if (t.empty() || seen.count(t)) continue;
                seen.insert(t);
                queue.push_back(std::move(t));
            }
        }
        for (const auto& s : seen) {
            std::vector<LatticeVector> pts;
            for (auto i : s) pts.push_back(vertices_[i]);
            faces_.push_back(Face{static_cast<int>(affine_rank(pts)) - 1, s});
        }
        std::sort(faces_.begin(), faces_.end(), [](const Face& a, const Face& b) {
            return a.dim != b.dim ? a.dim < b.dim : a.vertices < b.vertices;
        });
    }

    void cross_validate() const {
        for (const auto& v : vertices_) {
            std::size_t tight = 0;
            for (const auto& f : facets_) {
                Int s = dot(f.normal, v);
                require(s >= f.offset, "internal hull error: vertex violates a facet");
                if (s == f.offset) ++tight;
            }
            require(dim_ == 0 || tight >= dim_, "internal hull error: vertex on too few facets");
        }
        for (const auto& f : facets_) {
            std::vector<LatticeVector> pts;
            for (auto i : f.points) pts.push_back(vertices_[i]);
            require(f.points.size() >= dim_ && affine_rank(pts) == dim_, "internal hull error: facet not spanned");
        }
    }

    std::size_t ambient_dim_ = 0, dim_ = 0;
    std::vector<LatticeVector> vertices_;
    std::vector<Facet> facets_;
    IntMatrix equations_;
    LatticeVector eq_rhs_;
    std::vector<Face> faces_;
};

inline LatticePolytope convex_hull(const std::vector<LatticeVector>& points) { return LatticePolytope::hull(points); }

inline std::vector<LatticeVector> lattice_points(const LatticePolytope& P) { return P.lattice_points(); }

inline LatticePolytope dilated_simplex(unsigned long d, unsigned long r) {
    require(r >= 1, "simplex dimension must be positive");
    std::vector<LatticeVector> pts;
    pts.emplace_back(r, Int(0));
    for (std::size_t i = 0; i < r; ++i) {
        LatticeVector e(r, Int(0));
        e[i] = d;
        pts.push_back(std::move(e));
    }
    return LatticePolytope::hull(pts);
}

inline LatticePolytope product(const LatticePolytope& P, const LatticePolytope& Q) {
    std::vector<LatticeVector> pts;
    for (const auto& p : P.vertices())
        for (const auto& q : Q.vertices()) {
            LatticeVector v = p;
            v.insert(v.end(), q.begin(), q.end());
            pts.push_back(std::move(v));
        }
    return LatticePolytope::hull(pts);
}

inline LatticePolytope newton_polytope(const std::vector<unsigned long>& factor_dims,
                                       const std::vector<unsigned long>& multidegree) {
    require(!factor_dims.empty(), "newton polytope needs at least one factor");
    require(factor_dims.size() == multidegree.size(), "factor dimensions and multidegree differ in length");
    std::optional<LatticePolytope> acc;
    for (std::size_t j = 0; j < factor_dims.size(); ++j) {
        require(factor_dims[j] >= 1, "factor dimension must be positive");
        LatticePolytope f = dilated_simplex(multidegree[j], factor_dims[j]);
        acc = acc ? product(*acc, f) : f;
    }
    return *acc;
}

inline std::vector<LatticeVector> figure_two_points() {
    auto p = [](long a, long b, long c) { return LatticeVector{Int(a), Int(b), Int(c)}; };
    return {p(0, 0, 0), p(1, 0, 0), p(0, 1, 0), p(1, 1, 2), p(1, 1, 1)};
}

inline LatticePolytope figure_two_polytope() { return LatticePolytope::hull(figure_two_points()); }

}  // namespace snctrop
