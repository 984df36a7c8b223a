#pragma once

// Simplicial rational cone complexes embedded in Z^n, maps between them,
// combinatorial flatness, fibers over a ray and stars of points.

#include "complex.hpp"

#include <functional>

namespace snctrop {

// Maximal cones as sorted ray-index sets; every subset of a maximal cone is a
// face. Rays are primitive.
struct ConeComplex {
    std::size_t ambient_dim = 0;
    std::vector<LatticeVector> rays;
    std::vector<IndexSet> cones;
};

struct ConeLocation {
    IndexSet cone;  // minimal cone, ray indices
    RatVector coords;  // positive coefficients on those rays
};

namespace detail {

inline RatMatrix ray_matrix(const ConeComplex& S, const IndexSet& cone) {
    RatMatrix m;
    for (auto r : cone) m.push_back(to_rat(S.rays[r]));
    return m;
}

// Coordinates of x in a simplicial cone, or nullopt when x is not in its span.
inline std::optional<RatVector> cone_coordinates(const ConeComplex& S, const IndexSet& cone, const RatVector& x) {
    return coordinates_in(ray_matrix(S, cone), x);
}

inline bool nonnegative(const RatVector& v) {
    for (const auto& a : v)
        if (a < 0) return false;
    return true;
}

inline void canonicalize(ConeComplex& S) {
    for (auto& c : S.cones) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    std::sort(S.cones.begin(), S.cones.end());
    S.cones.erase(std::unique(S.cones.begin(), S.cones.end()), S.cones.end());
    std::vector<IndexSet> maximal;
    for (const auto& c : S.cones) {
        bool dominated = false;
        for (const auto& d : S.cones)
            if (d.size() > c.size() && std::includes(d.begin(), d.end(), c.begin(), c.end())) dominated = true;
        if (!dominated) maximal.push_back(c);
    }
    S.cones = std::move(maximal);
}

}  // namespace detail

// Validates and canonicalizes: primitive distinct rays, simplicial cones,
// cones meeting along common faces. Rays used by no cone become 1-cones.
inline ConeComplex make_cone_complex(std::size_t ambient_dim, std::vector<LatticeVector> rays, std::vector<IndexSet> cones) {
    ConeComplex S{ambient_dim, std::move(rays), std::move(cones)};
    for (auto& r : S.rays) {
        require(r.size() == ambient_dim, "ray has the wrong dimension");
        require(!is_zero(r), "a ray generator must be nonzero");
        r = primitive_part(r);
    }
    for (std::size_t i = 0; i < S.rays.size(); ++i)
        for (std::size_t j = i + 1; j < S.rays.size(); ++j) require(S.rays[i] != S.rays[j], "rays must be distinct");
    std::vector<bool> used(S.rays.size(), false);
    for (const auto& c : S.cones)
        for (auto r : c) {
            require(r < S.rays.size(), "cone ray index out of range");
            used[r] = true;
        }
    for (std::size_t r = 0; r < S.rays.size(); ++r)
        if (!used[r]) S.cones.push_back({r});
    detail::canonicalize(S);
    for (const auto& c : S.cones)
        require(rank(detail::ray_matrix(S, c)) == c.size(), "cones must be simplicial");
    // sigma and tau meet in the cone over their common rays: no point of both
    // puts positive weight on a ray outside the common face.
    for (std::size_t a = 0; a < S.cones.size(); ++a)
        for (std::size_t b = a + 1; b < S.cones.size(); ++b) {
            const auto& s = S.cones[a];
            const auto& t = S.cones[b];
            std::size_t ns = s.size(), nt = t.size();
            std::vector<LinearConstraint> weak, strict;
            for (std::size_t k = 0; k < ambient_dim; ++k) {
                RatVector row(ns + nt, Rat(0));
                for (std::size_t i = 0; i < ns; ++i) row[i] = S.rays[s[i]][k];
                for (std::size_t j = 0; j < nt; ++j) row[ns + j] = -S.rays[t[j]][k];
                weak.push_back({row, 0});
                weak.push_back({negate(row), 0});
            }
            RatVector outside(ns + nt, Rat(0));
            bool any = false;
            for (std::size_t i = 0; i < ns; ++i)
                if (!std::binary_search(t.begin(), t.end(), s[i])) outside[i] = 1, any = true;
            for (std::size_t j = 0; j < nt; ++j)
                if (!std::binary_search(s.begin(), s.end(), t[j])) outside[ns + j] = 1, any = true;
            if (!any) continue;
            strict.push_back({outside, 0});
            RatVector cap(ns + nt, Rat(-1));
            weak.push_back({cap, -1});
            require(!lp_strict_feasible(weak, strict, ns + nt, true), "cones overlap outside a common face");
        }
    return S;
}

// All cones (faces of maximal cones, the origin included), sorted by size.
inline std::vector<IndexSet> all_cones(const ConeComplex& S) {
    std::set<IndexSet> out;
    for (const auto& c : S.cones) {
        for (unsigned long m = 0; m < (1ul << c.size()); ++m) {
            IndexSet f;
            for (std::size_t i = 0; i < c.size(); ++i)
                if ((m >> i) & 1ul) f.push_back(c[i]);
            out.insert(f);
        }
    }
    std::vector<IndexSet> v(out.begin(), out.end());
    std::stable_sort(v.begin(), v.end(), [](const IndexSet& a, const IndexSet& b) { return a.size() < b.size(); });
    return v;
}

inline std::optional<ConeLocation> locate(const ConeComplex& S, const RatVector& x) {
    require(x.size() == S.ambient_dim, "dimension mismatch");
    if (is_zero(x)) return ConeLocation{{}, {}};
    for (const auto& c : S.cones) {
        auto a = detail::cone_coordinates(S, c, x);
        if (!a || !detail::nonnegative(*a)) continue;
        ConeLocation loc;
        for (std::size_t i = 0; i < c.size(); ++i)
            if ((*a)[i] != 0) {
                loc.cone.push_back(c[i]);
                loc.coords.push_back((*a)[i]);
            }
        return loc;
    }
    return std::nullopt;
}

inline bool in_support(const ConeComplex& S, const RatVector& x) { return locate(S, x).has_value(); }

// Inserts the ray through v, subdividing every cone that contains v.
inline ConeComplex stellar_subdivide(const ConeComplex& S, const LatticeVector& v) {
    auto loc = locate(S, to_rat(v));
    require(loc.has_value() && !loc->cone.empty(), "stellar subdivision needs a nonzero point of the support");
    LatticeVector p = primitive_part(v);
    for (std::size_t r = 0; r < S.rays.size(); ++r)
        if (S.rays[r] == p) return S;
    ConeComplex out = S;
    std::size_t nv = out.rays.size();
    out.rays.push_back(p);
    out.cones.clear();
    for (const auto& c : S.cones) {
        if (!std::includes(c.begin(), c.end(), loc->cone.begin(), loc->cone.end())) {
            out.cones.push_back(c);
            continue;
        }
        for (auto r : loc->cone) {
            IndexSet d;
            for (auto x : c)
                if (x != r) d.push_back(x);
            d.push_back(nv);
            out.cones.push_back(d);
        }
    }
    detail::canonicalize(out);
    return out;
}

// ---------------------------------------------------------------------------
// Contact orders.

struct ContactMatrix {
    std::size_t columns = 0;
    std::vector<LatticeVector> rows;
};

inline bool is_disjoint(const ContactMatrix& M) {
    for (const auto& row : M.rows) {
        std::size_t nz = 0;
        for (const auto& c : row) nz += c != 0;
        if (nz > 1) return false;
    }
    return true;
}

struct ContactPoint {
    LatticeVector point;
    IndexSet cone;
};

inline ContactPoint contact_lattice_point(const LatticeVector& row, const ConeComplex& S) {
    require(row.size() == S.rays.size(), "contact row length must equal the number of rays");
    LatticeVector x(S.ambient_dim, Int(0));
    for (std::size_t j = 0; j < row.size(); ++j) {
        require(row[j] >= 0, "contact orders must be non-negative");
        x = add(x, scale(row[j], S.rays[j]));
    }
    auto loc = locate(S, to_rat(x));
    require(loc.has_value(), "contact data not supported on this complex");
    return ContactPoint{x, loc->cone};
}

// ---------------------------------------------------------------------------
// Maps.

// A map of cone complexes given by one integer matrix (target x source
// coordinates); every source cone must land in a single target cone.
struct ComplexMap {
    ConeComplex source, target;
    IntMatrix matrix;
};

namespace detail {

inline LatticeVector image(const ComplexMap& f, const LatticeVector& x) { return mat_vec(f.matrix, x); }

// Minimal target cone containing the image of a source cone, or nullopt when
// the image is not inside one target cone.
inline std::optional<IndexSet> image_carrier(const ComplexMap& f, const IndexSet& cone) {
    LatticeVector sum(f.target.ambient_dim, Int(0));
    for (auto r : cone) sum = add(sum, image(f, f.source.rays[r]));
    auto loc = locate(f.target, to_rat(sum));
    if (!loc) return std::nullopt;
    for (auto r : cone) {
        auto a = cone_coordinates(f.target, loc->cone, to_rat(image(f, f.source.rays[r])));
        if (!a || !nonnegative(*a)) return std::nullopt;
    }
    return loc->cone;
}

}  // namespace detail

inline ComplexMap make_complex_map(ConeComplex source, ConeComplex target, IntMatrix matrix) {
    require(matrix.size() == target.ambient_dim, "map matrix has the wrong number of rows");
    for (const auto& row : matrix) require(row.size() == source.ambient_dim, "map matrix has the wrong number of columns");
    ComplexMap f{std::move(source), std::move(target), std::move(matrix)};
    for (const auto& c : f.source.cones)
        require(detail::image_carrier(f, c).has_value(), "a source cone does not map into a single target cone");
    return f;
}

inline ComplexMap identity_map(const ConeComplex& source, const ConeComplex& target) {
    require(source.ambient_dim == target.ambient_dim, "dimension mismatch");
    IntMatrix id(source.ambient_dim, LatticeVector(source.ambient_dim, Int(0)));
    for (std::size_t i = 0; i < id.size(); ++i) id[i][i] = 1;
    return make_complex_map(source, target, id);
}

// True when the source, mapped by the identity, subdivides the target: each
// target cone is tiled by source cones of its dimension, with interior
// facets shared by exactly two of them and boundary facets on its boundary.
inline bool is_subdivision_of(const ConeComplex& fine, const ConeComplex& coarse) {
    if (fine.ambient_dim != coarse.ambient_dim) return false;
    std::map<IndexSet, std::vector<IndexSet>> inside;
    for (const auto& c : fine.cones) {
        LatticeVector sum(fine.ambient_dim, Int(0));
        for (auto r : c) sum = add(sum, fine.rays[r]);
        std::optional<IndexSet> host;
        for (const auto& t : coarse.cones) {
            bool all = true;
            for (auto r : c) {
                auto a = detail::cone_coordinates(coarse, t, to_rat(fine.rays[r]));
                if (!a || !detail::nonnegative(*a)) all = false;
            }
            if (all && t.size() == c.size()) host = t;
        }
        if (!host) return false;
        inside[*host].push_back(c);
    }
    for (const auto& t : coarse.cones) {
        auto it = inside.find(t);
        if (it == inside.end()) return false;
        std::map<IndexSet, std::size_t> facet_count;
        for (const auto& c : it->second)
            for (std::size_t i = 0; i < c.size(); ++i) {
                IndexSet f = c;
                f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
                ++facet_count[f];
            }
        for (const auto& [f, k] : facet_count) {
            // On the boundary of t iff its rays all lie on one facet of t.
            bool boundary = false;
            for (std::size_t drop = 0; drop < t.size() && !boundary; ++drop) {
                bool all = true;
                for (auto r : f) {
                    auto a = detail::cone_coordinates(coarse, t, to_rat(fine.rays[r]));
                    if ((*a)[drop] != 0) all = false;
                }
                boundary = all;
            }
            if (t.size() == 1 ? k != 1 : (boundary ? k != 1 : k != 2)) return false;
        }
    }
    return true;
}

// Re-expresses each contact point in the rays of a subdivision.
inline ContactMatrix canonical_lift(const ContactMatrix& M, const ComplexMap& f) {
    require(is_subdivision_of(f.source, f.target), "canonical lift needs a subdivision");
    for (std::size_t i = 0; i < f.matrix.size(); ++i)
        for (std::size_t j = 0; j < f.matrix[i].size(); ++j)
            require(f.matrix[i][j] == (i == j ? 1 : 0), "canonical lift needs the identity map");
    require(M.columns == f.target.rays.size(), "contact matrix does not match the complex");
    ContactMatrix out;
    out.columns = f.source.rays.size();
    for (const auto& row : M.rows) {
        auto cp = contact_lattice_point(row, f.target);
        auto loc = locate(f.source, to_rat(cp.point));
        require(loc.has_value(), "contact data not supported on the subdivision");
        LatticeVector lifted(out.columns, Int(0));
        for (std::size_t k = 0; k < loc->cone.size(); ++k) {
            require(loc->coords[k].get_den() == 1, "lifted contact order is not integral (cone is not unimodular)");
            lifted[loc->cone[k]] = loc->coords[k].get_num();
        }
        out.rows.push_back(std::move(lifted));
    }
    return out;
}

struct FlatnessVerdict {
    bool flat = true;
    std::optional<IndexSet> offending_cone;  // source rays
    IndexSet image_carrier;                  // target rays
};

// Every source cone must surject onto a target cone. The image sits inside
// its minimal carrier cone; it fills it iff each carrier ray is hit by the
// image of a source ray.
inline FlatnessVerdict is_combinatorially_flat(const ComplexMap& f) {
    FlatnessVerdict v;
    for (const auto& c : all_cones(f.source)) {
        auto carrier = detail::image_carrier(f, c);
        require(carrier.has_value(), "a source cone does not map into a single target cone");
        for (auto t : *carrier) {
            bool hit = false;
            for (auto r : c) {
                auto img = detail::image(f, f.source.rays[r]);
                if (!is_zero(img) && primitive_part(img) == f.target.rays[t]) hit = true;
            }
            if (!hit) {
                v.flat = false;
                v.offending_cone = c;
                v.image_carrier = *carrier;
                return v;
            }
        }
    }
    return v;
}

namespace detail {

// Extreme rays of {a in R^d : rows . a >= 0}, assumed pointed, as coefficient
// vectors: solutions of d-1 independent tight rows satisfying all others.
inline std::vector<RatVector> extreme_rays(const RatMatrix& eqs, const RatMatrix& ineqs, std::size_t d) {
    std::set<RatVector> out;
    std::size_t q = ineqs.size();
    if (d == 0) return {};
    IndexSet pick;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (pick.size() + 1 == d) {
            RatMatrix sys = eqs;
            for (auto i : pick) sys.push_back(ineqs[i]);
            auto ns = nullspace(sys, d);
            if (ns.size() != 1) return;
            for (int sign : {1, -1}) {
                RatVector z = sign > 0 ? ns[0] : negate(ns[0]);
                bool ok = true;
                for (const auto& row : ineqs) ok = ok && dot(row, z) >= 0;
                if (ok) out.insert(to_rat(primitive_integer_multiple(z)));
            }
            return;
        }
        for (std::size_t i = from; i < q; ++i) {
            pick.push_back(i);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return {out.begin(), out.end()};
}

inline RatVector combine(const RatVector& a, const std::vector<RatVector>& gens, std::size_t n) {
    RatVector x(n, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i) x = add(x, scale(a[i], gens[i]));
    return x;
}

// Extreme rays of the piece {x in cone : f(x) in tau} of a source cone over a
// target cone. In coefficients a on the cone's rays it is cut out by a >= 0,
// the image lying in span(tau), and nonnegative tau-coordinates of the image.
inline std::vector<LatticeVector> piece_rays(const ComplexMap& f, const IndexSet& cone, const IndexSet& tau) {
    std::size_t k = cone.size();
    RatMatrix imgs, gens;
    for (auto r : cone) {
        imgs.push_back(to_rat(image(f, f.source.rays[r])));
        gens.push_back(to_rat(f.source.rays[r]));
    }
    RatMatrix T = ray_matrix(f.target, tau);
    RatMatrix eqs, ineqs;
    auto functional = [&](const RatVector& y) {
        RatVector row(k);
        for (std::size_t i = 0; i < k; ++i) row[i] = dot(y, imgs[i]);
        return row;
    };
    for (const auto& y : nullspace(T, f.target.ambient_dim)) eqs.push_back(functional(y));
    if (!tau.empty()) {
        // Dual functionals l_j = sum_l (G^-1)_{jl} t_l, G the Gram matrix.
        std::size_t d = tau.size();
        RatMatrix G(d, RatVector(d));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) G[i][j] = dot(T[i], T[j]);
        for (std::size_t j = 0; j < d; ++j) {
            RatVector e(d, Rat(0));
            e[j] = 1;
            auto c = solve(G, e, d);
            require(c.has_value(), "internal error: target cone is not simplicial");
            ineqs.push_back(functional(combine(*c, T, f.target.ambient_dim)));
        }
    }
    for (std::size_t i = 0; i < k; ++i) {
        RatVector e(k, Rat(0));
        e[i] = 1;
        ineqs.push_back(e);
    }
    std::set<LatticeVector> out;
    for (const auto& z : extreme_rays(eqs, ineqs, k)) {
        auto x = combine(z, gens, f.source.ambient_dim);
        if (!is_zero(x)) out.insert(primitive_integer_multiple(x));
    }
    return {out.begin(), out.end()};
}

// Facets of the cone generated by gens (any generators, not necessarily
// extreme), each as a functional y, nonnegative on the cone, vanishing on the
// listed generators. Also returns equations of the linear span.
struct ConeFacets {
    RatMatrix span_equations;
    std::vector<std::pair<RatVector, IndexSet>> facets;
};

inline ConeFacets cone_facets(const RatMatrix& gens, std::size_t n) {
    ConeFacets out;
    out.span_equations = nullspace(gens, n);
    RatMatrix basis = gens;
    rref(basis);
    std::size_t d = basis.size();
    if (d < 2) return out;
    std::set<IndexSet> seen;
    IndexSet pick;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (pick.size() + 1 == d) {
            RatMatrix M;
            for (auto j : pick) {
                RatVector row(d);
                for (std::size_t i = 0; i < d; ++i) row[i] = dot(gens[j], basis[i]);
                M.push_back(row);
            }
            auto ns = nullspace(M, d);
            if (ns.size() != 1) return;
            RatVector y = combine(ns[0], basis, n);
            bool pos = true, neg = true;
            IndexSet zero;
            for (std::size_t j = 0; j < gens.size(); ++j) {
                Rat v = dot(y, gens[j]);
                pos = pos && v >= 0;
                neg = neg && v <= 0;
                if (v == 0) zero.push_back(j);
            }
            if (!pos && !neg) return;
            if (!seen.insert(zero).second) return;
            out.facets.emplace_back(pos ? y : negate(y), zero);
            return;
        }
        for (std::size_t i = from; i < gens.size(); ++i) {
            pick.push_back(i);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return out;
}

// Pulling triangulation of a pointed cone given by its extreme rays: cone the
// lexicographically smallest ray over the triangulated facets missing it.
// Using one global order keeps triangulations of neighbouring cones
// compatible on common faces.
inline std::vector<std::vector<LatticeVector>> pulling_triangulation(std::vector<LatticeVector> rays) {
    std::sort(rays.begin(), rays.end());
    std::size_t d = rank(rays);
    if (rays.size() == d) return {rays};
    RatMatrix gens = to_rat(rays);
    auto cf = cone_facets(gens, rays[0].size());
    std::vector<std::vector<LatticeVector>> out;
    for (const auto& [y, idx] : cf.facets) {
        if (idx.empty() || idx[0] == 0) continue;
        std::vector<LatticeVector> face;
        for (auto j : idx) face.push_back(rays[j]);
        if (rank(face) + 1 != d) continue;
        for (auto s : pulling_triangulation(face)) {
            s.insert(s.begin(), rays[0]);
            out.push_back(std::move(s));
        }
    }
    return out;
}

inline ConeComplex fan_from_simplices(std::size_t n, const std::vector<std::vector<LatticeVector>>& simplices) {
    std::map<LatticeVector, std::size_t> id;
    for (const auto& s : simplices)
        for (const auto& r : s) id.emplace(r, 0);
    std::vector<LatticeVector> rays;
    for (auto& [r, i] : id) {
        i = rays.size();
        rays.push_back(r);
    }
    std::vector<IndexSet> cones;
    for (const auto& s : simplices) {
        IndexSet c;
        for (const auto& r : s) c.push_back(id[r]);
        cones.push_back(c);
    }
    return make_cone_complex(n, rays, cones);
}

// Refines the target so that the image of every source cone is a union of
// cones: each target cone is cut by the hyperplanes spanned by facets and
// span equations of the image cones, then triangulated.
inline ConeComplex refine_target(const ComplexMap& f) {
    std::size_t m = f.target.ambient_dim;
    std::set<LatticeVector> hyperplanes;
    auto add_hyperplane = [&](const RatVector& y) {
        if (is_zero(y)) return;
        auto p = primitive_integer_multiple(y);
        auto q = negate(p);
        hyperplanes.insert(std::max(p, q));
    };
    for (const auto& c : all_cones(f.source)) {
        RatMatrix gens;
        for (auto r : c) {
            auto img = image(f, f.source.rays[r]);
            if (!is_zero(img)) gens.push_back(to_rat(img));
        }
        if (gens.empty()) continue;
        auto cf = cone_facets(gens, m);
        for (const auto& y : cf.span_equations) add_hyperplane(y);
        for (const auto& fy : cf.facets) add_hyperplane(fy.first);
    }
    std::vector<std::vector<LatticeVector>> simplices;
    for (const auto& tau : f.target.cones) {
        std::size_t d = tau.size();
        RatMatrix T = ray_matrix(f.target, tau);
        RatMatrix phis;
        for (const auto& y : hyperplanes) {
            RatVector phi(d);
            for (std::size_t j = 0; j < d; ++j) phi[j] = dot(to_rat(y), T[j]);
            if (!is_zero(phi)) phis.push_back(phi);
        }
        // Full-dimensional cells of the arrangement inside tau, by sign vector.
        std::vector<std::vector<int>> cells = {{}};
        for (std::size_t h = 0; h < phis.size(); ++h) {
            std::vector<std::vector<int>> next;
            for (const auto& sv : cells)
                for (int sign : {1, -1}) {
                    auto cand = sv;
                    cand.push_back(sign);
                    std::vector<LinearConstraint> strict;
                    for (std::size_t i = 0; i < cand.size(); ++i) strict.push_back({scale(Rat(cand[i]), phis[i]), 0});
                    for (std::size_t j = 0; j < d; ++j) {
                        RatVector e(d, Rat(0));
                        e[j] = 1;
                        strict.push_back({e, 0});
                    }
                    if (lp_strict_feasible({}, strict, d, false)) next.push_back(cand);
                }
            cells = std::move(next);
        }
        for (const auto& sv : cells) {
            RatMatrix ineqs;
            for (std::size_t i = 0; i < sv.size(); ++i) ineqs.push_back(scale(Rat(sv[i]), phis[i]));
            for (std::size_t j = 0; j < d; ++j) {
                RatVector e(d, Rat(0));
                e[j] = 1;
                ineqs.push_back(e);
            }
            std::vector<LatticeVector> rays;
            for (const auto& z : extreme_rays({}, ineqs, d)) rays.push_back(primitive_integer_multiple(combine(z, T, m)));
            for (auto& s : pulling_triangulation(rays)) simplices.push_back(std::move(s));
        }
    }
    return fan_from_simplices(m, simplices);
}

// The common refinement of the source with f^-1 of the target, triangulated.
inline ConeComplex pull_back_source(const ComplexMap& f) {
    std::set<std::vector<LatticeVector>> pieces;
    for (const auto& c : f.source.cones)
        for (const auto& tau : f.target.cones) {
            auto rays = piece_rays(f, c, tau);
            if (rank(rays) == c.size()) pieces.insert(rays);
        }
    std::vector<std::vector<LatticeVector>> simplices;
    for (const auto& p : pieces)
        for (auto& s : pulling_triangulation(p)) simplices.push_back(std::move(s));
    return fan_from_simplices(f.source.ambient_dim, simplices);
}

}  // namespace detail

struct FlatteningResult {
    ComplexMap map;
    std::size_t rounds = 0;
};

// Makes a map flat. Each round cuts the target by the hyperplanes through the
// facets of all image cones and pulls the result back to the source as a
// common refinement; both sides are triangulated by pulling. Gives up after
// max_rounds.
inline FlatteningResult flatten(const ComplexMap& f0, std::size_t max_rounds = 10) {
    ComplexMap f = f0;
    for (std::size_t round = 0; round < max_rounds; ++round) {
        if (is_combinatorially_flat(f).flat) return FlatteningResult{f, round};
        ComplexMap g{f.source, detail::refine_target(f), f.matrix};
        g.source = detail::pull_back_source(g);
        f = make_complex_map(g.source, g.target, g.matrix);
    }
    require(is_combinatorially_flat(f).flat, "flattening did not converge within " + std::to_string(max_rounds) + " rounds");
    return FlatteningResult{f, max_rounds};
}

// ---------------------------------------------------------------------------
// Fibers, cones over complexes, stars.

inline bool is_ray_complex(const ConeComplex& T) {
    return T.ambient_dim == 1 && T.rays.size() == 1 && T.rays[0] == LatticeVector{Int(1)};
}

// {x in |source| : f(x) = 1} with one cell per source cone meeting it; tags
// are the source cones.
inline PolyhedralComplex fiber_at_one(const ComplexMap& f) {
    require(is_ray_complex(f.target), "fiber_at_one needs a map to the ray R>=0");
    const auto& S = f.source;
    std::vector<Int> value(S.rays.size());
    bool surjective = false;
    for (std::size_t r = 0; r < S.rays.size(); ++r) {
        value[r] = detail::image(f, S.rays[r])[0];
        require(value[r] >= 0, "map does not land in the ray");
        surjective = surjective || value[r] > 0;
    }
    require(surjective, "map is not surjective onto the ray");
    PolyhedralComplex K;
    K.ambient_dim = S.ambient_dim;
    std::map<std::size_t, std::size_t> vid, rid;
    for (std::size_t r = 0; r < S.rays.size(); ++r) {
        if (value[r] > 0) {
            vid[r] = K.vertices.size();
            K.vertices.push_back(scale(Rat(1, 1) / Rat(value[r]), to_rat(S.rays[r])));
        } else {
            rid[r] = K.rays.size();
            K.rays.push_back(S.rays[r]);
        }
    }
    for (const auto& c : all_cones(S)) {
        PolyCell cell;
        for (auto r : c) {
            if (value[r] > 0) cell.vertices.push_back(vid[r]);
            else cell.rays.push_back(rid[r]);
        }
        if (cell.vertices.empty()) continue;
        cell.tag = c;
        K.cells.push_back(std::move(cell));
    }
    finalize_complex(K);
    return K;
}

// The cone over a compact simplicial complex placed at height one, with the
// height map to the ray.
inline ComplexMap cone_over(const PolyhedralComplex& K) {
    require(K.compact(), "cone_over needs a compact complex");
    std::size_t n = K.ambient_dim;
    std::vector<LatticeVector> rays;
    for (const auto& v : K.vertices) {
        RatVector w = v;
        w.push_back(1);
        rays.push_back(primitive_integer_multiple(w));
    }
    std::vector<IndexSet> cones;
    for (const auto& c : K.cells) {
        require(c.vertices.size() == c.dim + 1, "cone_over needs simplicial cells");
        cones.push_back(c.vertices);
    }
    ConeComplex src = make_cone_complex(n + 1, rays, cones);
    ConeComplex ray = make_cone_complex(1, {LatticeVector{Int(1)}}, {{0}});
    IntMatrix m(1, LatticeVector(n + 1, Int(0)));
    m[0][n] = 1;
    return make_complex_map(src, ray, m);
}

struct StarAt {
    IndexSet cone;            // minimal cone containing the point
    IntMatrix projection;     // Z^n -> Z^(n - dim cone), kernel = span of the cone
    ConeComplex star;         // projected cones containing the minimal cone
};

inline StarAt star_at(const RatVector& p, const ConeComplex& S) {
    auto loc = locate(S, p);
    require(loc.has_value(), "point outside the support");
    StarAt out;
    out.cone = loc->cone;
    IntMatrix gens;
    for (auto r : out.cone) gens.push_back(S.rays[r]);
    out.projection = quotient_projection(gens, S.ambient_dim);
    std::size_t m = out.projection.size();
    std::vector<LatticeVector> rays;
    std::vector<IndexSet> cones;
    auto ray_id = [&](const LatticeVector& v) {
        auto p = primitive_part(v);
        for (std::size_t i = 0; i < rays.size(); ++i)
            if (rays[i] == p) return i;
        rays.push_back(p);
        return rays.size() - 1;
    };
    for (const auto& c : S.cones) {
        if (!std::includes(c.begin(), c.end(), out.cone.begin(), out.cone.end())) continue;
        IndexSet img;
        for (auto r : c)
            if (!std::binary_search(out.cone.begin(), out.cone.end(), r)) img.push_back(ray_id(mat_vec(out.projection, S.rays[r])));
        if (!img.empty()) cones.push_back(img);
    }
    out.star = make_cone_complex(m, rays, cones);
    return out;
}

// u is tangent at p when p + eps*u stays in the support for small eps > 0:
// inside some cone containing p's cone, with free coefficients on that cone.
inline bool is_tangent(const ConeComplex& S, const RatVector& p, const LatticeVector& u) {
    auto loc = locate(S, p);
    require(loc.has_value(), "point outside the support");
    if (is_zero(u)) return true;
    for (const auto& c : S.cones) {
        if (!std::includes(c.begin(), c.end(), loc->cone.begin(), loc->cone.end())) continue;
        auto a = detail::cone_coordinates(S, c, to_rat(u));
        if (!a) continue;
        bool ok = true;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (!std::binary_search(loc->cone.begin(), loc->cone.end(), c[i]) && (*a)[i] < 0) ok = false;
        if (ok) return true;
    }
    return false;
}

// Standard constructions.
inline ConeComplex orthant(std::size_t n) {
    std::vector<LatticeVector> rays;
    IndexSet all;
    for (std::size_t i = 0; i < n; ++i) {
        LatticeVector e(n, Int(0));
        e[i] = 1;
        rays.push_back(e);
        all.push_back(i);
    }
    return make_cone_complex(n, rays, {all});
}

}  // namespace snctrop
