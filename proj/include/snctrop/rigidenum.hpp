#pragma once

// Enumeration of rigid decorated tropical curve types in a compact complex.
// Vertices sit on the grid (1/D) Z^n inside the carrier; edges join vertices
// lying in a common cell, directed by the primitive difference. Completeness
// holds relative to D and the other bounds.

#include "parallel.hpp"
#include "tropical.hpp"

#include <numeric>
#include <sstream>

namespace snctrop {

struct CurveTotals {
    unsigned genus = 0;
    std::size_t markings = 0;
    LatticeVector beta;  // empty means zero
};

struct RigidBounds {
    std::size_t max_vertices = 4;
    Int max_edge_weight = 1;
    std::optional<Int> denominator_bound;  // default: default_denominator_bound
    // Candidate vertex positions replacing the grid, when given.
    std::optional<std::vector<RatVector>> positions;
    unsigned threads = 1;
};

struct RigidType {
    TropicalCurve curve;  // cells assigned, vertices sorted by position
    std::size_t deformation_dimension = 0;
};

// max weight times the lcm, over cells, of (cell dimension + 1) and of the
// denominators of the cell's vertices: barycentres of faces are on the grid.
inline Int default_denominator_bound(const PolyhedralComplex& K, const Int& max_weight) {
    Int d = 1;
    for (const auto& c : K.cells) {
        d = lcm_int(d, Int(static_cast<unsigned long>(c.dim + 1)));
        for (auto v : c.vertices)
            for (const auto& x : K.vertices[v]) d = lcm_int(d, Int(x.get_den()));
    }
    return d * max_weight;
}

// Grid points (1/D) Z^n in the support of a compact complex, sorted.
inline std::vector<RatVector> grid_points(const PolyhedralComplex& K, const Int& D) {
    require(K.compact(), "the carrier must be compact");
    require(D > 0, "denominator bound must be positive");
    std::size_t n = K.ambient_dim;
    require(!K.vertices.empty(), "empty carrier");
    std::vector<Int> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rat a = K.vertices[0][i], b = a;
        for (const auto& v : K.vertices) {
            a = std::min(a, v[i]);
            b = std::max(b, v[i]);
        }
        mpz_fdiv_q(lo[i].get_mpz_t(), Rat(a * D).get_num_mpz_t(), Rat(a * D).get_den_mpz_t());
        mpz_cdiv_q(hi[i].get_mpz_t(), Rat(b * D).get_num_mpz_t(), Rat(b * D).get_den_mpz_t());
    }
    std::vector<RatVector> out;
    std::vector<Int> cur = lo;
    while (true) {
        RatVector x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = Rat(cur[i], D);
        for (auto& q : x) q.canonicalize();
        if (locate(K, x)) out.push_back(x);
        std::size_t i = 0;
        while (i < n && cur[i] == hi[i]) cur[i] = lo[i], ++i;
        if (i == n) break;
        ++cur[i];
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

struct Segment {
    bool ok = false;
    LatticeVector direction;  // primitive, from the smaller index
    std::size_t cell = 0;
};

// A canonical text key for sorting and deduplicating types.
inline std::string type_key(const TropicalCurve& G) {
    std::ostringstream os;
    os << G.vertices.size() << '|';
    for (const auto& V : G.vertices) {
        for (const auto& x : V.position) os << x.get_str() << ',';
        os << 'g' << V.genus << 'b';
        for (const auto& b : V.beta) os << b.get_str() << ',';
        os << 'm';
        for (auto m : V.markings) os << m << ',';
        os << ';';
    }
    os << '|';
    for (const auto& e : G.edges) os << e.from << '-' << e.to << 'w' << e.weight.get_str() << ';';
    return os.str();
}

// All compositions of `total` into k non-negative parts.
inline void compositions(unsigned total, std::size_t k, std::vector<unsigned>& cur, std::vector<std::vector<unsigned>>& out) {
    if (cur.size() + 1 == k) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (unsigned a = 0; a <= total; ++a) {
        cur.push_back(a);
        compositions(total - a, k, cur, out);
        cur.pop_back();
    }
}

struct EnumerationContext {
    const PolyhedralComplex* K;
    const CurveClassContext* ctx;
    CurveTotals totals;
    Int max_weight;
    std::vector<RatVector> grid;
    std::vector<std::size_t> grid_cell;
    std::vector<RatMatrix> frames;
    std::vector<std::vector<Segment>> segments;      // i < j
    std::map<LatticeVector, std::vector<LatticeVector>> classes_by_image;  // M beta -> beta <= total
};

inline void decorate(const EnumerationContext& E, const TropicalCurve& base, const std::vector<std::vector<LatticeVector>>& betas,
                     std::vector<RigidType>& out) {
    std::size_t nv = base.vertices.size();
    std::size_t b1 = base.edges.size() + 1 - nv;
    if (b1 > E.totals.genus) return;
    std::vector<std::vector<unsigned>> genera;
    std::vector<unsigned> tmp;
    compositions(E.totals.genus - static_cast<unsigned>(b1), nv, tmp, genera);
    std::vector<LatticeVector> pick(nv);
    std::function<void(std::size_t, LatticeVector)> rec = [&](std::size_t v, LatticeVector left) {
        if (v == nv) {
            if (!is_zero(left)) return;
            std::size_t assignments = 1;
            for (std::size_t i = 0; i < E.totals.markings; ++i) assignments *= nv;
            for (const auto& g : genera) {
                for (std::size_t a = 0; a < assignments; ++a) {
                    TropicalCurve G = base;
                    std::size_t code = a;
                    for (std::size_t m = 0; m < E.totals.markings; ++m) {
                        G.vertices[code % nv].markings.push_back(m + 1);
                        code /= nv;
                    }
                    for (std::size_t i = 0; i < nv; ++i) {
                        G.vertices[i].beta = is_zero_class(pick[i]) ? LatticeVector{} : pick[i];
                        G.vertices[i].genus = g[i];
                    }
                    if (!is_stable(G).stable) continue;
                    out.push_back(RigidType{G, 0});
                }
            }
            return;
        }
        for (const auto& b : betas[v]) {
            if (!class_leq(b, left)) continue;
            pick[v] = b;
            rec(v + 1, sub(left, b));
        }
    };
    rec(0, normalize_class(E.totals.beta, *E.ctx));
}

// Types on one vertex set: every weighted edge set that is connected and
// balanced, embedded and rigid, with all decorations. Edge weights are chosen
// pair by pair; a vertex is checked for balancing once its last pair is set.
inline std::vector<RigidType> types_on(const EnumerationContext& E, const IndexSet& S) {
    std::size_t k = S.size(), n = E.K->ambient_dim;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            if (E.segments[S[a]][S[b]].ok) pairs.push_back({a, b});
    if (k > 1 && pairs.size() + 1 < k) return {};
    std::vector<std::vector<std::size_t>> closing(pairs.size());
    std::vector<bool> touched(k, false);
    for (std::size_t p = pairs.size(); p-- > 0;)
        for (auto v : {pairs[p].first, pairs[p].second})
            if (!touched[v]) touched[v] = true, closing[p].push_back(v);
    for (std::size_t v = 0; v < k; ++v)
        if (!touched[v] && k > 1) return {};
    const auto& dir = [&](std::size_t p) -> const LatticeVector& { return E.segments[S[pairs[p].first]][S[pairs[p].second]].direction; };

    std::vector<RigidType> out;
    std::vector<unsigned long> w(pairs.size(), 0);
    std::vector<LatticeVector> sum(k, LatticeVector(n, Int(0)));
    auto emit = [&] {
        std::vector<std::size_t> parent(k);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
        std::size_t comps = k;
        for (std::size_t p = 0; p < pairs.size(); ++p)
            if (w[p]) {
                auto a = find(pairs[p].first), b = find(pairs[p].second);
                if (a != b) parent[a] = b, --comps;
            }
        if (comps != 1) return;
        std::vector<std::vector<LatticeVector>> betas(k);
        for (std::size_t v = 0; v < k; ++v) {
            auto it = E.classes_by_image.find(sum[v]);
            if (it == E.classes_by_image.end()) return;
            betas[v] = it->second;
        }
        TropicalCurve G;
        G.ambient_dim = n;
        for (auto i : S) G.vertices.push_back(CurveVertex{E.grid[i], E.grid_cell[i], {}, {}, 0});
        for (std::size_t p = 0; p < pairs.size(); ++p)
            if (w[p]) {
                const auto& seg = E.segments[S[pairs[p].first]][S[pairs[p].second]];
                G.edges.push_back(CurveEdge{pairs[p].first, pairs[p].second, seg.direction, Int(w[p]), seg.cell});
            }
        // Geometry and rigidity do not depend on the decorations; any class
        // choice in the lists balances. The rank test is the cheap one.
        if (deformation_dimension(G, E.frames) != 0) return;
        for (std::size_t v = 0; v < k; ++v) G.vertices[v].beta = betas[v][0];
        if (!check_curve(G, *E.ctx, E.K).ok) return;
        for (auto& V : G.vertices) V.beta.clear();
        decorate(E, G, betas, out);
    };
    unsigned long max_w = E.max_weight.get_ui();
    std::function<void(std::size_t)> assign = [&](std::size_t p) {
        if (p == pairs.size()) return emit();
        auto [a, b] = pairs[p];
        for (unsigned long x = 0; x <= max_w; ++x) {
            w[p] = x;
            LatticeVector v = scale(Int(x), dir(p));
            sum[a] = add(sum[a], v);
            sum[b] = sub(sum[b], v);
            bool ok = true;
            for (auto c : closing[p]) ok = ok && E.classes_by_image.count(sum[c]);
            if (ok) assign(p + 1);
            sum[a] = sub(sum[a], v);
            sum[b] = add(sum[b], v);
        }
        w[p] = 0;
    };
    assign(0);
    return out;
}

}  // namespace detail

// All rigid stable types within the bounds, sorted canonically.
inline std::vector<RigidType> enumerate_rigid(const PolyhedralComplex& K, const CurveTotals& totals, const CurveClassContext& ctx,
                                              const RigidBounds& bounds = {}) {
    check_context(ctx);
    require(ctx.ambient_dim() == K.ambient_dim, "context mismatch: carrier and curve-class context have different dimensions");
    require(K.compact(), "the carrier must be compact");
    require(bounds.max_vertices >= 1 && bounds.max_edge_weight >= 1, "bounds must be positive");
    detail::EnumerationContext E;
    E.K = &K;
    E.ctx = &ctx;
    E.totals = totals;
    E.totals.beta = normalize_class(totals.beta, ctx);
    E.max_weight = bounds.max_edge_weight;
    if (bounds.positions) {
        for (const auto& x : *bounds.positions) {
            require(x.size() == K.ambient_dim && locate(K, x), "candidate position outside the carrier");
            E.grid.push_back(x);
        }
        std::sort(E.grid.begin(), E.grid.end());
        E.grid.erase(std::unique(E.grid.begin(), E.grid.end()), E.grid.end());
    } else {
        E.grid = grid_points(K, bounds.denominator_bound.value_or(default_denominator_bound(K, bounds.max_edge_weight)));
    }
    std::size_t g = E.grid.size();
    for (const auto& x : E.grid) E.grid_cell.push_back(*locate(K, x));
    E.frames = detail::cell_frames(K);
    E.segments.assign(g, std::vector<detail::Segment>(g));
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = i + 1; j < g; ++j) {
            RatVector mid = scale(Rat(1, 2), add(E.grid[i], E.grid[j]));
            auto c = locate(K, mid);
            if (!c || !cell_contains(K, *c, E.grid[i]) || !cell_contains(K, *c, E.grid[j])) continue;
            E.segments[i][j] = {true, primitive_integer_multiple(sub(E.grid[j], E.grid[i])), *c};
        }
    // Classes below the total, keyed by M beta.
    LatticeVector box = E.totals.beta;
    LatticeVector b(ctx.rank, Int(0));
    while (true) {
        LatticeVector img = negate(balancing_direction(b, ctx));
        E.classes_by_image[img].push_back(b);
        std::size_t i = 0;
        while (i < b.size() && b[i] == box[i]) b[i] = 0, ++i;
        if (i == b.size()) break;
        ++b[i];
    }
    // Vertex sets in lexicographic order.
    std::vector<IndexSet> sets;
    IndexSet cur;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (!cur.empty()) sets.push_back(cur);
        if (cur.size() == bounds.max_vertices) return;
        for (std::size_t i = from; i < g; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    auto chunks = parallel_map(sets, bounds.threads, [&](const IndexSet& S) { return detail::types_on(E, S); });
    std::vector<std::pair<std::string, RigidType>> keyed;
    for (auto& ch : chunks)
        for (auto& t : ch) keyed.push_back({detail::type_key(t.curve), std::move(t)});
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& c) { return a.first < c.first; });
    keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& c) { return a.first == c.first; }),
                keyed.end());
    std::vector<RigidType> out;
    for (auto& [key, t] : keyed) out.push_back(std::move(t));
    return out;
}

// The stars at the vertices of a type, in vertex order.
inline std::vector<Star> classify_type(const RigidType& t) {
    std::vector<Star> out;
    for (std::size_t v = 0; v < t.curve.vertices.size(); ++v) out.push_back(vertex_star(t.curve, v));
    return out;
}

}  // namespace snctrop
