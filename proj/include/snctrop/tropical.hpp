#pragma once

// Stars and tropical curves (Chow 1-complexes): balancing with curve-class
// correction, embedding checks, asymptotic stars, stability and rigidity.

#include "complex.hpp"
#include "conecomplex.hpp"

namespace snctrop {

// Curve classes live in N^rank; column j of `intersection` holds the
// intersection numbers of generator j with the divisors E_1..E_r.
struct CurveClassContext {
    std::size_t rank = 0;
    IntMatrix intersection;  // r rows, rank columns

    static CurveClassContext traditional(std::size_t r) { return CurveClassContext{0, IntMatrix(r, LatticeVector{})}; }
    std::size_t ambient_dim() const { return intersection.size(); }
};

inline void check_context(const CurveClassContext& ctx) {
    for (const auto& row : ctx.intersection) require(row.size() == ctx.rank, "intersection matrix has the wrong number of columns");
}

inline LatticeVector normalize_class(const LatticeVector& beta, const CurveClassContext& ctx) {
    if (beta.empty()) return LatticeVector(ctx.rank, Int(0));
    require(beta.size() == ctx.rank, "curve class has the wrong rank");
    for (const auto& b : beta) require(b >= 0, "curve classes are non-negative");
    return beta;
}

// v_beta = -(beta . E_1, ..., beta . E_r).
inline LatticeVector balancing_direction(const LatticeVector& beta, const CurveClassContext& ctx) {
    check_context(ctx);
    auto b = normalize_class(beta, ctx);
    LatticeVector v(ctx.ambient_dim(), Int(0));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = -dot(ctx.intersection[i], b);
    return v;
}

inline bool is_zero_class(const LatticeVector& beta) {
    for (const auto& b : beta)
        if (b != 0) return false;
    return true;
}

inline bool class_leq(const LatticeVector& a, const LatticeVector& b) {
    require(a.size() == b.size(), "curve classes of different rank");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Stars.

struct Star {
    RatVector base;
    std::vector<LatticeVector> vectors;  // weight times primitive direction
    LatticeVector beta;                  // empty means zero
    IndexSet markings;

    std::size_t dim() const { return base.size(); }
};

struct WeightedRay {
    LatticeVector direction;  // primitive
    Int weight;

    bool operator==(const WeightedRay& o) const { return direction == o.direction && weight == o.weight; }
    bool operator<(const WeightedRay& o) const { return std::tie(direction, weight) < std::tie(o.direction, o.weight); }
};

// Parallel vectors merged (weights added), sorted by direction.
inline std::vector<WeightedRay> merged_rays(const std::vector<LatticeVector>& vectors) {
    std::map<LatticeVector, Int> acc;
    for (const auto& v : vectors) {
        require(!is_zero(v), "star vectors must be nonzero");
        auto d = primitive_decompose(v);
        acc[d.primitive] += d.weight;
    }
    std::vector<WeightedRay> out;
    for (auto& [d, w] : acc) out.push_back({d, w});
    return out;
}

inline std::vector<LatticeVector> expand(const std::vector<WeightedRay>& rays) {
    std::vector<LatticeVector> out;
    for (const auto& r : rays) out.push_back(scale(r.weight, r.direction));
    return out;
}

inline Star make_star(std::size_t n, std::vector<LatticeVector> vectors, LatticeVector beta = {}, IndexSet markings = {}) {
    for (const auto& v : vectors) require(v.size() == n, "star vector has the wrong dimension");
    return Star{RatVector(n, Rat(0)), std::move(vectors), std::move(beta), std::move(markings)};
}

// Base moved to the origin, parallel vectors merged and sorted.
inline Star canonical_star(const Star& s) {
    Star c;
    c.base = RatVector(s.dim(), Rat(0));
    c.vectors = expand(merged_rays(s.vectors));
    c.beta = s.beta;
    if (is_zero_class(c.beta)) c.beta.clear();
    c.markings = s.markings;
    std::sort(c.markings.begin(), c.markings.end());
    return c;
}

inline bool is_balanced(const Star& s, const CurveClassContext& ctx) {
    require(ctx.ambient_dim() == s.dim(), "context dimension does not match the star");
    LatticeVector sum = balancing_direction(s.beta, ctx);
    for (const auto& v : s.vectors) sum = add(sum, v);
    return is_zero(sum);
}

inline bool is_traditionally_balanced(const Star& s) {
    if (!is_zero_class(s.beta)) return false;
    LatticeVector sum(s.dim(), Int(0));
    for (const auto& v : s.vectors) sum = add(sum, v);
    return is_zero(sum);
}

// The traditionally balanced star obtained by appending v_beta.
inline Star append_balancing_ray(const Star& s, const CurveClassContext& ctx) {
    Star t = s;
    auto vb = balancing_direction(s.beta, ctx);
    if (!is_zero(vb)) t.vectors.push_back(vb);
    t.beta.clear();
    return t;
}

// A star is bivalent when its merged form has two opposite directions.
inline bool is_bivalent(const Star& s) {
    auto m = merged_rays(s.vectors);
    return m.size() == 2 && add(m[0].direction, m[1].direction) == LatticeVector(s.dim(), Int(0));
}

// Equivalence: same merged vectors, class and number of markings; with a
// cone complex, also the same minimal cone at the base.
inline bool equivalent(const Star& a, const Star& b, const ConeComplex* sigma = nullptr) {
    if (a.dim() != b.dim()) return false;
    if (merged_rays(a.vectors) != merged_rays(b.vectors)) return false;
    if (canonical_star(a).beta != canonical_star(b).beta) return false;
    if (a.markings.size() != b.markings.size()) return false;
    if (sigma) {
        auto la = locate(*sigma, a.base), lb = locate(*sigma, b.base);
        require(la && lb, "star base outside the cone complex");
        if (la->cone != lb->cone) return false;
    }
    return true;
}

// Stars on a cone complex: balanced and every vector tangent at the base.
inline bool is_valid_star(const Star& s, const ConeComplex& sigma, const CurveClassContext& ctx) {
    if (!in_support(sigma, s.base) || !is_balanced(s, ctx)) return false;
    for (const auto& v : s.vectors)
        if (!is_tangent(sigma, s.base, v)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Tropical curves.

struct CurveVertex {
    RatVector position;
    std::optional<std::size_t> cell;  // cell of the carrier complex
    LatticeVector beta;               // empty means zero
    IndexSet markings;
    unsigned genus = 0;
};

struct CurveEdge {
    std::size_t from = 0, to = 0;
    LatticeVector direction;  // primitive, pointing from -> to
    Int weight = 1;
    std::optional<std::size_t> cell;
};

struct CurveLeg {
    std::size_t vertex = 0;
    LatticeVector direction;  // primitive
    Int weight = 1;
    std::optional<std::size_t> cell;
};

struct TropicalCurve {
    std::size_t ambient_dim = 0;
    std::vector<CurveVertex> vertices;
    std::vector<CurveEdge> edges;
    std::vector<CurveLeg> legs;
};

// Outgoing weighted vectors at a vertex.
inline std::vector<LatticeVector> vertex_vectors(const TropicalCurve& G, std::size_t v) {
    std::vector<LatticeVector> out;
    for (const auto& e : G.edges) {
        if (e.from == v) out.push_back(scale(e.weight, e.direction));
        if (e.to == v) out.push_back(scale(-e.weight, e.direction));
    }
    for (const auto& l : G.legs)
        if (l.vertex == v) out.push_back(scale(l.weight, l.direction));
    return out;
}

inline std::size_t valency(const TropicalCurve& G, std::size_t v) {
    std::size_t k = 0;
    for (const auto& e : G.edges) k += (e.from == v) + (e.to == v);
    for (const auto& l : G.legs) k += l.vertex == v;
    return k;
}

inline Star vertex_star(const TropicalCurve& G, std::size_t v) {
    const auto& V = G.vertices[v];
    return Star{V.position, vertex_vectors(G, v), V.beta, V.markings};
}

// Edge direction and weight from two positions.
inline CurveEdge edge_between(const TropicalCurve& G, std::size_t from, std::size_t to, Int weight = 1) {
    auto d = sub(G.vertices[to].position, G.vertices[from].position);
    require(!is_zero(d), "edge endpoints coincide");
    return CurveEdge{from, to, primitive_integer_multiple(d), weight, std::nullopt};
}

struct CurveVerdict {
    bool ok = true;
    std::string reason;
    std::optional<std::size_t> vertex;  // first offending vertex, if any
};

namespace detail {

// A closed segment (bounded) or ray in R^n with its endpoint vertices.
struct Piece {
    RatVector p, d;
    bool ray = false;
    std::size_t a = 0, b = 0;  // b unused for rays
};

inline bool shares_vertex(const Piece& x, const Piece& y, std::size_t* common) {
    std::vector<std::size_t> xs = {x.a}, ys = {y.a};
    if (!x.ray) xs.push_back(x.b);
    if (!y.ray) ys.push_back(y.b);
    for (auto i : xs)
        for (auto j : ys)
            if (i == j) {
                *common = i;
                return true;
            }
    return false;
}

// Whether two pieces meet anywhere besides a common endpoint vertex.
inline bool pieces_cross(const Piece& x, const Piece& y, const std::vector<RatVector>& pos) {
    std::size_t n = x.p.size();
    std::size_t common = 0;
    bool share = shares_vertex(x, y, &common);
    auto in_range = [](const Piece& q, const Rat& s) { return s >= 0 && (q.ray || s <= 1); };
    auto allowed_point = [&](const RatVector& pt) { return share && pt == pos[common]; };
    RatMatrix cols(n, RatVector(2));
    for (std::size_t i = 0; i < n; ++i) {
        cols[i][0] = x.d[i];
        cols[i][1] = -y.d[i];
    }
    auto rhs = sub(y.p, x.p);
    if (rank(cols) == 2) {
        auto su = solve(cols, rhs, 2);
        if (!su) return false;
        if (!in_range(x, (*su)[0]) || !in_range(y, (*su)[1])) return false;
        return !allowed_point(add(x.p, scale((*su)[0], x.d)));
    }
    // Parallel: collinear overlap is an interval of parameters along x.
    auto off = coordinates_in(RatMatrix{x.d}, rhs);
    if (!off) return false;
    auto k = coordinates_in(RatMatrix{x.d}, y.d);
    Rat s0 = (*off)[0], kk = (*k)[0];
    // y covers s0 + u*kk for u in [0,1] or [0, inf).
    std::optional<Rat> lo, hi;  // nullopt = infinite
    if (y.ray) {
        if (kk > 0) lo = s0;
        else hi = s0;
    } else {
        lo = std::min(s0, Rat(s0 + kk));
        hi = std::max(s0, Rat(s0 + kk));
    }
    Rat a = lo ? std::max(Rat(0), *lo) : Rat(0);
    std::optional<Rat> b = x.ray ? hi : (hi ? std::optional<Rat>(std::min(Rat(1), *hi)) : std::optional<Rat>(Rat(1)));
    if (b && a > *b) return false;
    if (b && a == *b) return !allowed_point(add(x.p, scale(a, x.d)));
    return true;
}

}  // namespace detail

// Validates positions, directions, weights, embeddedness (no crossings or
// overlaps), per-vertex balancing with respect to beta_V, and, when a
// carrier complex is given, the cell of every vertex, edge and leg.
inline CurveVerdict check_curve(const TropicalCurve& G, const CurveClassContext& ctx,
                                const PolyhedralComplex* carrier = nullptr) {
    CurveVerdict out;
    auto fail = [&](std::string why, std::optional<std::size_t> v = std::nullopt) {
        out.ok = false;
        out.reason = std::move(why);
        out.vertex = v;
        return out;
    };
    std::size_t n = G.ambient_dim;
    if (ctx.ambient_dim() != n) return fail("curve class context has the wrong dimension");
    for (std::size_t v = 0; v < G.vertices.size(); ++v) {
        const auto& V = G.vertices[v];
        if (V.position.size() != n) return fail("vertex position has the wrong dimension", v);
        if (!V.beta.empty() && V.beta.size() != ctx.rank) return fail("vertex class has the wrong rank", v);
        for (const auto& b : V.beta)
            if (b < 0) return fail("vertex class is not effective", v);
        for (std::size_t u = 0; u < v; ++u)
            if (G.vertices[u].position == V.position) return fail("two vertices at the same position", v);
    }
    std::set<std::size_t> marks;
    for (const auto& V : G.vertices)
        for (auto m : V.markings)
            if (!marks.insert(m).second) return fail("a marking is used twice");
    std::vector<detail::Piece> pieces;
    for (const auto& e : G.edges) {
        if (e.from >= G.vertices.size() || e.to >= G.vertices.size()) return fail("edge endpoint out of range");
        if (e.from == e.to) return fail("loop edges cannot be embedded", e.from);
        if (e.weight <= 0) return fail("edge weight must be positive", e.from);
        if (e.direction.size() != n || is_zero(e.direction) || gcd_of(e.direction) != 1)
            return fail("edge direction must be primitive", e.from);
        auto d = sub(G.vertices[e.to].position, G.vertices[e.from].position);
        auto t = coordinates_in(RatMatrix{to_rat(e.direction)}, d);
        if (!t || (*t)[0] <= 0) return fail("edge direction does not match its endpoints", e.from);
        pieces.push_back({G.vertices[e.from].position, d, false, e.from, e.to});
    }
    for (const auto& l : G.legs) {
        if (l.vertex >= G.vertices.size()) return fail("leg vertex out of range");
        if (l.weight <= 0) return fail("leg weight must be positive", l.vertex);
        if (l.direction.size() != n || is_zero(l.direction) || gcd_of(l.direction) != 1)
            return fail("leg direction must be primitive", l.vertex);
        pieces.push_back({G.vertices[l.vertex].position, to_rat(l.direction), true, l.vertex, 0});
    }
    std::vector<RatVector> pos;
    for (const auto& V : G.vertices) pos.push_back(V.position);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j)
            if (detail::pieces_cross(pieces[i], pieces[j], pos)) return fail("curve is not embedded: edges or legs meet away from a common vertex", pieces[i].a);
        for (std::size_t v = 0; v < pos.size(); ++v) {
            const auto& q = pieces[i];
            if (v == q.a || (!q.ray && v == q.b)) continue;
            auto s = coordinates_in(RatMatrix{q.d}, sub(pos[v], q.p));
            if (s && (*s)[0] >= 0 && (q.ray || (*s)[0] <= 1)) return fail("a vertex lies on an edge or leg it does not bound", v);
        }
    }
    for (std::size_t v = 0; v < G.vertices.size(); ++v)
        if (!is_balanced(vertex_star(G, v), ctx)) return fail("vertex is not balanced", v);
    if (carrier) {
        const auto& K = *carrier;
        if (K.ambient_dim != n) return fail("carrier complex has the wrong dimension");
        for (std::size_t v = 0; v < G.vertices.size(); ++v) {
            auto c = G.vertices[v].cell ? G.vertices[v].cell : locate(K, G.vertices[v].position);
            if (!c || *c >= K.cells.size() || !cell_contains(K, *c, G.vertices[v].position, true))
                return fail("vertex is not in the relative interior of its cell", v);
        }
        for (const auto& e : G.edges) {
            auto mid = scale(Rat(1, 2), add(pos[e.from], pos[e.to]));
            auto c = e.cell ? e.cell : locate(K, mid);
            if (!c || *c >= K.cells.size() || !cell_contains(K, *c, mid, true) || !cell_contains(K, *c, pos[e.from]) ||
                !cell_contains(K, *c, pos[e.to]))
                return fail("edge is not in the relative interior of its cell", e.from);
        }
        for (const auto& l : G.legs) {
            // The leg stays in its cell iff one step does and the direction is
            // in the cell's recession cone.
            auto step = add(pos[l.vertex], to_rat(l.direction));
            auto c = l.cell ? l.cell : locate(K, step);
            bool ok = c && *c < K.cells.size() && cell_contains(K, *c, step, true) && cell_contains(K, *c, pos[l.vertex]);
            if (ok) {
                PolyhedralComplex R;
                R.ambient_dim = n;
                R.vertices = {RatVector(n, Rat(0))};
                R.rays = K.rays;
                R.cells = {PolyCell{0, {0}, K.cells[*c].rays, {}, {}}};
                ok = cell_contains(R, 0, to_rat(l.direction));
            }
            if (!ok) return fail("leg is not in the relative interior of its cell", l.vertex);
        }
    }
    return out;
}

// Fills in missing cells by locating positions in the carrier.
inline TropicalCurve assign_cells(TropicalCurve G, const PolyhedralComplex& K) {
    for (auto& V : G.vertices)
        if (!V.cell) V.cell = locate(K, V.position);
    for (auto& e : G.edges)
        if (!e.cell) e.cell = locate(K, scale(Rat(1, 2), add(G.vertices[e.from].position, G.vertices[e.to].position)));
    for (auto& l : G.legs)
        if (!l.cell) l.cell = locate(K, add(G.vertices[l.vertex].position, to_rat(l.direction)));
    return G;
}

// Recession star: legs with parallel directions merged, total class (the
// pushforward is the identity on N^rank) and all markings.
inline Star asymptotic_star(const TropicalCurve& G) {
    Star s;
    s.base = RatVector(G.ambient_dim, Rat(0));
    for (const auto& l : G.legs) s.vectors.push_back(scale(l.weight, l.direction));
    s.vectors = expand(merged_rays(s.vectors));
    for (const auto& V : G.vertices) {
        if (V.beta.empty()) continue;
        if (s.beta.empty()) s.beta = LatticeVector(V.beta.size(), Int(0));
        require(s.beta.size() == V.beta.size(), "vertex classes of different rank");
        s.beta = add(s.beta, V.beta);
    }
    for (const auto& V : G.vertices) s.markings.insert(s.markings.end(), V.markings.begin(), V.markings.end());
    std::sort(s.markings.begin(), s.markings.end());
    return canonical_star(s);
}

inline TropicalCurve translate(TropicalCurve G, const RatVector& t) {
    for (auto& V : G.vertices) V.position = add(V.position, t);
    return G;
}

// ---------------------------------------------------------------------------
// Stability.

namespace detail {

// Free or linear bivalent vertex with zero class.
inline bool unstable_vertex(const TropicalCurve& G, std::size_t v) {
    const auto& V = G.vertices[v];
    if (!is_zero_class(V.beta)) return false;
    std::size_t k = valency(G, v);
    if (2 * V.genus + V.markings.size() + k > 2) return false;
    if (k == 0) return true;
    if (k != 2) return false;
    auto vs = vertex_vectors(G, v);
    auto a = primitive_decompose(vs[0]), b = primitive_decompose(vs[1]);
    if (add(a.primitive, b.primitive) != LatticeVector(G.ambient_dim, Int(0))) return false;
    // Interior to one cell of the carrier when cells are recorded.
    std::vector<std::optional<std::size_t>> cells;
    for (const auto& e : G.edges)
        if (e.from == v || e.to == v) cells.push_back(e.cell);
    for (const auto& l : G.legs)
        if (l.vertex == v) cells.push_back(l.cell);
    for (const auto& c : cells)
        if (c != V.cell) return false;
    return true;
}

}  // namespace detail

struct StabilityVerdict {
    bool stable = true;
    std::vector<std::size_t> unstable_vertices;
};

inline StabilityVerdict is_stable(const TropicalCurve& G) {
    StabilityVerdict out;
    for (std::size_t v = 0; v < G.vertices.size(); ++v)
        if (detail::unstable_vertex(G, v)) out.unstable_vertices.push_back(v);
    out.stable = out.unstable_vertices.empty();
    return out;
}

inline TropicalCurve remove_vertex(const TropicalCurve& G, std::size_t v) {
    TropicalCurve H = G;
    H.vertices.erase(H.vertices.begin() + static_cast<std::ptrdiff_t>(v));
    auto fix = [v](std::size_t i) { return i > v ? i - 1 : i; };
    for (auto& e : H.edges) {
        e.from = fix(e.from);
        e.to = fix(e.to);
    }
    for (auto& l : H.legs) l.vertex = fix(l.vertex);
    return H;
}

// Erases free and linear bivalent vertices of class zero, merging the two
// flags of a bivalent one.
inline TropicalCurve stabilize(TropicalCurve G) {
    while (true) {
        auto verdict = is_stable(G);
        if (verdict.stable) return G;
        std::size_t v = verdict.unstable_vertices.front();
        require(G.vertices[v].markings.empty(), "cannot stabilize: an unstable vertex carries markings");
        if (valency(G, v) == 0) {
            G = remove_vertex(G, v);
            continue;
        }
        std::vector<std::size_t> es, ls;
        for (std::size_t i = 0; i < G.edges.size(); ++i)
            if (G.edges[i].from == v || G.edges[i].to == v) es.push_back(i);
        for (std::size_t i = 0; i < G.legs.size(); ++i)
            if (G.legs[i].vertex == v) ls.push_back(i);
        require(ls.size() < 2, "cannot stabilize: erasing the vertex would leave a line without vertices");
        auto other = [&](const CurveEdge& e) { return e.from == v ? e.to : e.from; };
        if (es.size() == 2) {
            const auto& a = G.edges[es[0]];
            const auto& b = G.edges[es[1]];
            std::size_t u = other(a), w = other(b);
            CurveEdge merged = edge_between(G, u, w, a.weight);
            merged.cell = a.cell;
            G.edges.erase(G.edges.begin() + static_cast<std::ptrdiff_t>(es[1]));
            G.edges.erase(G.edges.begin() + static_cast<std::ptrdiff_t>(es[0]));
            G.edges.push_back(merged);
        } else {
            const auto& a = G.edges[es[0]];
            CurveLeg leg = G.legs[ls[0]];
            leg.vertex = other(a);
            G.edges.erase(G.edges.begin() + static_cast<std::ptrdiff_t>(es[0]));
            G.legs[ls[0]] = leg;
        }
        G = remove_vertex(G, v);
    }
}

// ---------------------------------------------------------------------------
// Rigidity.

struct RigidityVerdict {
    bool rigid = false;
    std::size_t dimension = 0;
};

// Deformations within the combinatorial type: each vertex moves in the affine
// span of its cell, each edge keeps its direction and changes length. The
// dimension is the nullity of the linearized incidence system
// x_to - x_from = t_E d_E.
namespace detail {

// Nullity of x_to - x_from - t_E d_E = 0 with x_V ranging over the linear
// span of its cell (rows of frames[cell of V]).
inline std::size_t deformation_dimension(const TropicalCurve& G, const std::vector<RatMatrix>& frames) {
    std::size_t n = G.ambient_dim;
    std::vector<std::size_t> offset;
    std::size_t unknowns = 0;
    for (const auto& V : G.vertices) {
        offset.push_back(unknowns);
        unknowns += frames[*V.cell].size();
    }
    std::size_t edge_base = unknowns;
    unknowns += G.edges.size();
    RatMatrix sys;
    for (std::size_t ei = 0; ei < G.edges.size(); ++ei) {
        const auto& e = G.edges[ei];
        const auto& ft = frames[*G.vertices[e.to].cell];
        const auto& ff = frames[*G.vertices[e.from].cell];
        for (std::size_t k = 0; k < n; ++k) {
            RatVector row(unknowns, Rat(0));
            for (std::size_t j = 0; j < ft.size(); ++j) row[offset[e.to] + j] += ft[j][k];
            for (std::size_t j = 0; j < ff.size(); ++j) row[offset[e.from] + j] -= ff[j][k];
            row[edge_base + ei] = -Rat(e.direction[k]);
            sys.push_back(row);
        }
    }
    return unknowns - rank(sys);
}

inline std::vector<RatMatrix> cell_frames(const PolyhedralComplex& K) {
    std::vector<RatMatrix> frames;
    for (std::size_t c = 0; c < K.cells.size(); ++c) frames.push_back(cell_directions(K, c));
    return frames;
}

}  // namespace detail

inline RigidityVerdict is_rigid(const TropicalCurve& G0, const PolyhedralComplex& K, const CurveClassContext& ctx) {
    TropicalCurve G = assign_cells(G0, K);
    auto verdict = check_curve(G, ctx, &K);
    require(verdict.ok, "inconsistent combinatorial type: " + verdict.reason);
    RigidityVerdict out;
    out.dimension = detail::deformation_dimension(G, detail::cell_frames(K));
    out.rigid = out.dimension == 0;
    return out;
}

}  // namespace snctrop
