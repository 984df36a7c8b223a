#pragma once

// The partial order on stars. In rank 2 it is decided exactly through
// regular subdivisions of Newton polygons; in higher rank through 2D
// projections (refutation) and a small witness search.

#include "duality2d.hpp"
#include "enumerate2d.hpp"

#include <set>

namespace snctrop {

enum class Relation { less, equal, incomparable, unknown };

inline std::string to_string(Relation r) {
    switch (r) {
        case Relation::less: return "less";
        case Relation::equal: return "equal";
        case Relation::incomparable: return "incomparable";
        case Relation::unknown: return "unknown-within-budget";
    }
    return "?";
}

// Evidence against w <= v. Kinds: "volume", "enumeration", "bivalent",
// "cone", "class", "projection".
struct OrderCertificate {
    std::string kind;
    std::string detail;
    Int volume_w = 0, volume_v = 0;  // normalized volumes, for "volume"
    IntMatrix basis;                 // lattice of the star vectors, for "projection"
    IntMatrix projection;            // 2 x rank, in basis coordinates
};

struct OrderVerdict {
    Relation relation = Relation::unknown;
    std::optional<TropicalCurve> witness;     // asymptotic star v, vertex with star w
    std::optional<std::size_t> witness_vertex;
    std::optional<OrderCertificate> certificate;
    std::string reason;
};

struct OrderBudget {
    std::size_t point_cap = 12;  // lattice points of N(v) the enumeration accepts
    std::size_t max_projections = 200;
    unsigned threads = 1;
};

namespace detail {

// The polygon of a traditionally balanced plane star, allowing the degenerate
// cases: a point for the empty star, a segment for a bivalent one.
inline LatticePolytope star_polygon(const Star& s) {
    require(s.dim() == 2 && is_traditionally_balanced(s), "expected a traditionally balanced plane star");
    std::vector<LatticeVector> steps;
    for (const auto& r : merged_rays(s.vectors)) steps.push_back(scale(r.weight, LatticeVector{-r.direction[1], r.direction[0]}));
    std::sort(steps.begin(), steps.end(), angle_less);
    std::vector<LatticeVector> verts = {LatticeVector{Int(0), Int(0)}};
    for (const auto& st : steps) verts.push_back(add(verts.back(), st));
    Int mx = verts[0][0], my = verts[0][1];
    for (const auto& v : verts) {
        mx = std::min(mx, v[0]);
        my = std::min(my, v[1]);
    }
    for (auto& v : verts) v = sub(v, LatticeVector{mx, my});
    return LatticePolytope::hull(verts);
}

inline Int area_of(const LatticePolytope& P) { return P.dim() == 2 ? P.normalized_volume() : Int(0); }

// Some lattice translate of A lies inside B.
inline bool fits_by_translation(const LatticePolytope& A, const LatticePolytope& B) {
    const auto& a0 = A.vertices()[0];
    for (const auto& q : B.lattice_points()) {
        auto t = sub(q, a0);
        bool ok = true;
        for (const auto& a : A.vertices())
            if (!B.contains(add(a, t))) {
                ok = false;
                break;
            }
        if (ok) return true;
    }
    return false;
}

inline TropicalCurve one_vertex_curve(const Star& s) {
    TropicalCurve G;
    G.ambient_dim = s.dim();
    G.vertices.push_back(CurveVertex{RatVector(s.dim(), Rat(0)), std::nullopt, {}, {}, 0});
    for (const auto& r : merged_rays(s.vectors)) G.legs.push_back(CurveLeg{0, r.direction, r.weight, std::nullopt});
    return G;
}

inline OrderVerdict incomparable(OrderCertificate c) {
    OrderVerdict v;
    v.relation = Relation::incomparable;
    v.reason = c.detail;
    v.certificate = std::move(c);
    return v;
}

// Two parallel lines: one of weight m through the origin, the rest shifted.
inline TropicalCurve parallel_lines(const LatticeVector& d, const Int& m, const Int& k) {
    TropicalCurve G;
    G.ambient_dim = 2;
    G.vertices.push_back(CurveVertex{RatVector{Rat(0), Rat(0)}, std::nullopt, {}, {}, 0});
    G.legs.push_back(CurveLeg{0, d, m, std::nullopt});
    G.legs.push_back(CurveLeg{0, negate(d), m, std::nullopt});
    if (k > m) {
        G.vertices.push_back(CurveVertex{RatVector{Rat(-d[1]), Rat(d[0])}, std::nullopt, {}, {}, 0});
        G.legs.push_back(CurveLeg{1, d, k - m, std::nullopt});
        G.legs.push_back(CurveLeg{1, negate(d), k - m, std::nullopt});
    }
    return G;
}

// Empty and bivalent stars: comparable only with their own kind; bivalent
// ones when they lie on the same line and the weight does not exceed.
inline std::optional<OrderVerdict> degenerate_order(const Star& w, const Star& v) {
    auto mw = merged_rays(w.vectors), mv = merged_rays(v.vectors);
    bool ew = mw.empty(), ev = mv.empty();
    bool bw = is_bivalent(w), bv = is_bivalent(v);
    if (!ew && !ev && !bw && !bv) return std::nullopt;
    if (ew && ev) {
        OrderVerdict r;
        r.relation = Relation::equal;
        r.witness = one_vertex_curve(v);
        r.witness_vertex = 0;
        return r;
    }
    if (ew != ev || bw != bv) {
        return incomparable({"bivalent", "empty and bivalent stars compare only with stars of the same kind", 0, 0, {}, {}});
    }
    if (mw[0].direction != mv[0].direction) return incomparable({"bivalent", "bivalent stars on different lines", 0, 0, {}, {}});
    Int m = mw[0].weight, k = mv[0].weight;
    if (m > k) return incomparable({"bivalent", "bivalent star of larger weight", 0, 0, {}, {}});
    OrderVerdict r;
    r.relation = m == k ? Relation::equal : Relation::less;
    r.witness = parallel_lines(mv[1].direction, m, k);
    r.witness_vertex = 0;
    return r;
}

inline Star project_star(const Star& s, const IntMatrix& pi) {
    Star p;
    p.base = RatVector(pi.size(), Rat(0));
    for (const auto& v : s.vectors) {
        auto q = mat_vec(pi, v);
        if (!is_zero(q)) p.vectors.push_back(q);
    }
    return p;
}

// Coordinates of each star vector in a lattice basis of their common span.
struct ReducedPair {
    IntMatrix basis;  // rows
    Star w, v;
};

inline Star reduce_star(const Star& s, const IntMatrix& basis, std::size_t r) {
    Star out;
    out.base = RatVector(r, Rat(0));
    RatMatrix bt = transpose(to_rat(basis));
    for (const auto& x : s.vectors) {
        auto c = solve(bt, to_rat(x), basis.size());
        require(c && is_integral(*c), "internal error: star vector outside its lattice");
        LatticeVector y(r, Int(0));
        for (std::size_t i = 0; i < basis.size(); ++i) y[i] = (*c)[i].get_num();
        out.vectors.push_back(y);
    }
    return out;
}

inline ReducedPair reduce_pair(const Star& w, const Star& v) {
    IntMatrix gens;
    for (const auto& x : w.vectors) gens.push_back(x);
    for (const auto& x : v.vectors) gens.push_back(x);
    ReducedPair p;
    p.basis = gens.empty() ? IntMatrix{} : saturated_basis(gens, w.dim());
    // Complete to rank 2 where possible so plane witnesses stay embedded.
    for (std::size_t k = 0; k < w.dim() && p.basis.size() < 2; ++k) {
        LatticeVector e(w.dim(), Int(0));
        e[k] = 1;
        auto trial = p.basis;
        trial.push_back(e);
        if (rank(trial) == trial.size()) p.basis = trial;
    }
    std::size_t r = std::max<std::size_t>(p.basis.size(), 2);
    p.w = reduce_star(w, p.basis, r);
    p.v = reduce_star(v, p.basis, r);
    return p;
}

// Curve in basis coordinates mapped back to the ambient space at `origin`.
inline TropicalCurve embed_curve(const TropicalCurve& G, const IntMatrix& basis, const RatVector& origin) {
    std::size_t n = origin.size();
    auto lift_vec = [&](const LatticeVector& d) {
        LatticeVector out(n, Int(0));
        for (std::size_t i = 0; i < basis.size(); ++i) out = add(out, scale(d[i], basis[i]));
        return out;
    };
    TropicalCurve H;
    H.ambient_dim = n;
    for (const auto& V : G.vertices) {
        RatVector x = origin;
        for (std::size_t i = 0; i < basis.size(); ++i) x = add(x, scale(V.position[i], to_rat(basis[i])));
        H.vertices.push_back(CurveVertex{x, std::nullopt, {}, V.markings, V.genus});
    }
    for (auto e : G.edges) {
        e.direction = lift_vec(e.direction);
        e.cell.reset();
        H.edges.push_back(e);
    }
    for (auto l : G.legs) {
        l.direction = lift_vec(l.direction);
        l.cell.reset();
        H.legs.push_back(l);
    }
    return H;
}

inline bool merged_leq(const std::vector<WeightedRay>& a, const std::vector<WeightedRay>& b) {
    for (const auto& x : a) {
        auto it = std::find_if(b.begin(), b.end(), [&](const WeightedRay& y) { return y.direction == x.direction; });
        if (it == b.end() || it->weight < x.weight) return false;
    }
    return true;
}

inline std::vector<WeightedRay> merged_minus(const std::vector<WeightedRay>& b, const std::vector<WeightedRay>& a) {
    std::vector<WeightedRay> out;
    for (const auto& y : b) {
        Int k = y.weight;
        for (const auto& x : a)
            if (x.direction == y.direction) k -= x.weight;
        if (k > 0) out.push_back({y.direction, k});
    }
    return out;
}

// Two-vertex witnesses: w = A + e at the origin, where A is part of v's rays
// and e an edge to a second vertex carrying the rest of v.
inline std::optional<TropicalCurve> two_vertex_witness(const Star& w, const Star& v) {
    std::size_t n = w.dim();
    auto mw = merged_rays(w.vectors), mv = merged_rays(v.vectors);
    for (std::size_t i = 0; i < mw.size(); ++i) {
        for (Int m = 1; m <= mw[i].weight; ++m) {
            auto A = mw;
            A[i].weight -= m;
            if (A[i].weight == 0) A.erase(A.begin() + static_cast<std::ptrdiff_t>(i));
            if (!merged_leq(A, mv)) continue;
            auto rest = merged_minus(mv, A);
            if (rest.empty()) continue;
            TropicalCurve G;
            G.ambient_dim = n;
            G.vertices.push_back(CurveVertex{RatVector(n, Rat(0)), std::nullopt, {}, {}, 0});
            G.vertices.push_back(CurveVertex{to_rat(mw[i].direction), std::nullopt, {}, {}, 0});
            G.edges.push_back(CurveEdge{0, 1, mw[i].direction, m, std::nullopt});
            for (const auto& r : A) G.legs.push_back(CurveLeg{0, r.direction, r.weight, std::nullopt});
            for (const auto& r : rest) G.legs.push_back(CurveLeg{1, r.direction, r.weight, std::nullopt});
            if (check_curve(G, CurveClassContext::traditional(n)).ok) return G;
        }
    }
    return std::nullopt;
}

// Candidate 2D projections of Z^r: kernels spanned by r-2 vectors among the
// unit vectors, v's directions and their differences.
inline std::vector<IntMatrix> candidate_projections(const Star& v, std::size_t r, std::size_t cap) {
    std::vector<LatticeVector> pool;
    for (std::size_t k = 0; k < r; ++k) {
        LatticeVector e(r, Int(0));
        e[k] = 1;
        pool.push_back(e);
    }
    auto mv = merged_rays(v.vectors);
    for (const auto& x : mv) pool.push_back(x.direction);
    for (std::size_t i = 0; i < mv.size(); ++i)
        for (std::size_t j = i + 1; j < mv.size(); ++j) {
            auto d = sub(mv[i].direction, mv[j].direction);
            if (!is_zero(d)) pool.push_back(primitive_part(d));
        }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    std::vector<IntMatrix> out;
    std::set<IntMatrix> seen_kernels;
    std::size_t k = r - 2;
    IndexSet pick;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (out.size() >= cap) return;
        if (pick.size() == k) {
            IntMatrix gens;
            for (auto i : pick) gens.push_back(pool[i]);
            if (rank(gens) != k) return;
            auto ker = saturated_basis(gens, r);
            auto key = hermite_rows(ker);
            if (!seen_kernels.insert(key).second) return;
            out.push_back(quotient_projection(gens, r));
            return;
        }
        for (std::size_t i = from; i < pool.size() && out.size() < cap; ++i) {
            pick.push_back(i);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return out;
}

inline bool projection_refutes(const Star& w, const Star& v, const IntMatrix& pi) {
    auto pw = star_polygon(project_star(w, pi)), pv = star_polygon(project_star(v, pi));
    return !fits_by_translation(pw, pv);
}

}  // namespace detail

// Necessary condition for w <= v: vol N(w) < vol N(v), or equal volumes
// and equivalent stars.
struct VolumeVerdict {
    bool passes = false;
    Int volume_w = 0, volume_v = 0;
};

inline VolumeVerdict volume_monovariant(const Star& w, const Star& v) {
    VolumeVerdict r;
    r.volume_w = detail::area_of(detail::star_polygon(w));
    r.volume_v = detail::area_of(detail::star_polygon(v));
    r.passes = r.volume_w < r.volume_v || (r.volume_w == r.volume_v && equivalent(canonical_star(w), canonical_star(v)));
    return r;
}

// Exact decision for traditionally balanced plane stars.
inline OrderVerdict leq_traditional_2d(const Star& w, const Star& v, const OrderBudget& budget = {}) {
    require(w.dim() == 2 && v.dim() == 2, "leq_traditional_2d needs plane stars");
    require(is_traditionally_balanced(w) && is_traditionally_balanced(v), "stars must be traditionally balanced");
    if (auto d = detail::degenerate_order(w, v)) return *d;
    if (merged_rays(w.vectors) == merged_rays(v.vectors)) {
        OrderVerdict r;
        r.relation = Relation::equal;
        r.witness = detail::one_vertex_curve(v);
        r.witness_vertex = 0;
        return r;
    }
    auto vol = volume_monovariant(w, v);
    if (!vol.passes) {
        OrderCertificate c{"volume", "vol N(w) = " + vol.volume_w.get_str() + " is not below vol N(v) = " + vol.volume_v.get_str(), 0, 0, {}, {}};
        c.volume_w = vol.volume_w;
        c.volume_v = vol.volume_v;
        return detail::incomparable(c);
    }
    auto Nv = newton_polygon(v);
    if (Nv.lattice_points().size() > budget.point_cap) {
        OrderVerdict r;
        r.reason = "N(v) has more lattice points than the enumeration cap";
        return r;
    }
    EnumerationOptions opt;
    opt.regular_only = true;
    opt.point_cap = budget.point_cap;
    opt.threads = budget.threads;
    auto target = merged_rays(w.vectors);
    for (const auto& S : enumerate_subdivisions_2d(Nv, opt)) {
        for (std::size_t c = 0; c < S.cells.size(); ++c) {
            auto cell = LatticePolytope::hull(gather(S.points, S.cells[c]));
            if (merged_rays(polygon_star(cell).vectors) != target) continue;
            OrderVerdict r;
            r.relation = Relation::less;
            r.witness = curve_from_subdivision(S);
            r.witness_vertex = c;
            return r;
        }
    }
    return detail::incomparable({"enumeration", "no cell of a regular subdivision of N(v) has the star w", 0, 0, {}, {}});
}

// Re-checks an "incomparable" certificate for traditionally balanced stars.
// With a basis, the stars are first written in its coordinates.
inline bool verify_certificate(const Star& w0, const Star& v0, const OrderCertificate& c, const OrderBudget& budget = {}) {
    Star w = w0, v = v0;
    if (!c.basis.empty()) {
        std::size_t r = std::max<std::size_t>(c.basis.size(), c.kind == "projection" ? 0 : 2);
        w = detail::reduce_star(w0, c.basis, r);
        v = detail::reduce_star(v0, c.basis, r);
    }
    if (c.kind == "volume") {
        auto vol = volume_monovariant(w, v);
        return !vol.passes && vol.volume_w == c.volume_w && vol.volume_v == c.volume_v;
    }
    if (c.kind == "bivalent" || c.kind == "enumeration") {
        auto r = leq_traditional_2d(w, v, budget);
        return r.relation == Relation::incomparable && r.certificate && r.certificate->kind == c.kind;
    }
    if (c.kind == "projection") return detail::projection_refutes(w, v, c.projection);
    return false;
}

namespace detail {

// Traditional order in any rank: reduce to the lattice spanned by the
// vectors, decide exactly in rank <= 2, else refute by projections or find a
// two-vertex witness.
inline OrderVerdict leq_traditional(const Star& w, const Star& v, const OrderBudget& budget) {
    auto red = reduce_pair(w, v);
    std::size_t r = red.basis.size();
    RatVector origin = v.base;
    OrderVerdict out;
    if (r <= 2) {
        out = leq_traditional_2d(red.w, red.v, budget);
        if (out.certificate) out.certificate->basis = red.basis;
    } else if (merged_rays(red.w.vectors) == merged_rays(red.v.vectors)) {
        out.relation = Relation::equal;
        out.witness = one_vertex_curve(red.v);
        out.witness_vertex = 0;
    } else {
        for (const auto& pi : candidate_projections(red.v, r, budget.max_projections)) {
            if (!projection_refutes(red.w, red.v, pi)) continue;
            OrderCertificate c{"projection", "a 2D projection of N(w) does not fit inside that of N(v)", 0, 0, {}, {}};
            c.basis = red.basis;
            c.projection = pi;
            return incomparable(c);
        }
        if (auto G = two_vertex_witness(red.w, red.v)) {
            out.relation = Relation::less;
            out.witness = *G;
            out.witness_vertex = 0;
        } else {
            out.reason = "no projection refutes the order and no two-vertex witness exists";
            return out;
        }
    }
    if (out.witness) {
        // Pad dimensions of a rank < 2 reduction are dropped by the basis.
        TropicalCurve G = *out.witness;
        if (r < 2) {
            for (auto& V : G.vertices) V.position.resize(r);
            for (auto& e : G.edges) e.direction.resize(r);
            for (auto& l : G.legs) l.direction.resize(r);
        }
        out.witness = embed_curve(G, red.basis, origin);
    }
    return out;
}

}  // namespace detail

// Order on stars in a cone complex: deeper cone first, then smaller class,
// then the traditional order after appending the balancing rays.
inline OrderVerdict leq_general(const Star& w, const Star& v, const ConeComplex& sigma, const CurveClassContext& ctx,
                                const OrderBudget& budget = {}) {
    check_context(ctx);
    require(w.dim() == sigma.ambient_dim && v.dim() == sigma.ambient_dim && ctx.ambient_dim() == sigma.ambient_dim,
            "context mismatch: stars, cone complex and curve-class context have different dimensions");
    require(is_valid_star(w, sigma, ctx) && is_valid_star(v, sigma, ctx), "stars must be valid on the cone complex");
    auto cw = locate(sigma, w.base)->cone, cv = locate(sigma, v.base)->cone;
    if (cw != cv) {
        if (std::includes(cw.begin(), cw.end(), cv.begin(), cv.end())) {
            OrderVerdict r;
            r.relation = Relation::less;
            r.reason = "the cone at w has the cone at v as a proper face";
            return r;
        }
        return detail::incomparable({"cone", "the cone at w does not contain the cone at v as a face", 0, 0, {}, {}});
    }
    auto bw = normalize_class(w.beta, ctx), bv = normalize_class(v.beta, ctx);
    if (bw != bv) {
        if (class_leq(bw, bv)) {
            OrderVerdict r;
            r.relation = Relation::less;
            r.reason = "the class of w is smaller";
            return r;
        }
        return detail::incomparable({"class", "the class of w is not below the class of v", 0, 0, {}, {}});
    }
    return detail::leq_traditional(append_balancing_ray(w, ctx), append_balancing_ray(v, ctx), budget);
}

// Every star below v, in canonical form, sorted by polygon area and vectors.
inline std::vector<Star> downset_2d(const Star& v, const OrderBudget& budget = {}) {
    require(v.dim() == 2 && is_traditionally_balanced(v), "downset_2d needs a traditionally balanced plane star");
    require(merged_rays(v.vectors).size() >= 3, "downset_2d needs a star whose polygon is two-dimensional");
    EnumerationOptions opt;
    opt.regular_only = true;
    opt.point_cap = budget.point_cap;
    opt.threads = budget.threads;
    std::map<std::vector<WeightedRay>, Star> found;
    std::vector<Star> queue = {canonical_star(make_star(2, v.vectors))};
    found[merged_rays(v.vectors)] = queue[0];
    while (!queue.empty()) {
        Star s = queue.back();
        queue.pop_back();
        for (const auto& S : enumerate_subdivisions_2d(newton_polygon(s), opt)) {
            for (const auto& c : S.cells) {
                Star t = polygon_star(LatticePolytope::hull(gather(S.points, c)));
                auto key = merged_rays(t.vectors);
                if (found.count(key)) continue;
                found[key] = t;
                queue.push_back(t);
            }
        }
    }
    std::vector<std::pair<Int, Star>> keyed;
    for (auto& [k, s] : found) keyed.push_back({detail::area_of(newton_polygon(s)), s});
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Star> out;
    for (auto& [a, s] : keyed) out.push_back(s);
    return out;
}

// Replaces vertex `vertex` of a plane curve (whose star is the asymptotic
// star of `inner`) by the pattern of `inner`, through the dual subdivisions.
// Empty when the refined cell set is not a regular subdivision.
inline std::optional<TropicalCurve> compose_witnesses(const TropicalCurve& outer, std::size_t vertex, const TropicalCurve& inner) {
    require(vertex < outer.vertices.size(), "vertex out of range");
    auto S = dual_subdivision(outer);
    auto H = curve_from_subdivision(S);
    // H is a translate of outer with vertices in cell order.
    std::optional<std::size_t> cell;
    for (std::size_t j = 0; j < H.vertices.size() && !cell; ++j) {
        auto tau = sub(H.vertices[j].position, outer.vertices[0].position);
        std::set<RatVector> pos;
        for (const auto& V : H.vertices) pos.insert(V.position);
        bool ok = true;
        for (const auto& V : outer.vertices) ok = ok && pos.count(add(V.position, tau));
        if (!ok) continue;
        auto target = add(outer.vertices[vertex].position, tau);
        for (std::size_t k = 0; k < H.vertices.size(); ++k)
            if (H.vertices[k].position == target) cell = k;
    }
    require(cell.has_value(), "internal error: dual curve is not a translate");
    auto T = dual_subdivision(inner);
    auto C = LatticePolytope::hull(gather(S.points, S.cells[*cell]));
    auto shift = sub(C.vertices()[0], T.ambient.vertices()[0]);
    std::vector<LatticeVector> moved;
    for (const auto& q : T.ambient.vertices()) moved.push_back(add(q, shift));
    if (!(LatticePolytope::hull(moved) == C)) return std::nullopt;
    std::map<LatticeVector, std::size_t> index;
    for (std::size_t i = 0; i < S.points.size(); ++i) index[S.points[i]] = i;
    std::vector<IndexSet> cells;
    for (std::size_t j = 0; j < S.cells.size(); ++j)
        if (j != *cell) cells.push_back(S.cells[j]);
    for (const auto& c : T.cells) {
        IndexSet m;
        for (auto i : c) m.push_back(index.at(add(T.points[i], shift)));
        std::sort(m.begin(), m.end());
        cells.push_back(m);
    }
    auto R = make_subdivision(S.ambient, S.points, cells);
    if (!validate(R).ok) return std::nullopt;
    auto h = is_regular(R);
    if (!h) return std::nullopt;
    R.lifting = *h;
    return curve_from_subdivision(R);
}

}  // namespace snctrop
