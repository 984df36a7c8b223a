#pragma once

// Searching for regular unimodular triangulations (breakability witnesses).

#include "subdivision.hpp"

#include <set>

namespace snctrop {

struct WitnessSearch {
    std::optional<Subdivision> witness;
    std::string method;            // "structural", "search", or "exhausted"
    std::size_t orderings_tried = 0;
};

namespace detail {

// Recognizes P as a product of dilated standard simplices (or points) over
// consecutive coordinate blocks; returns the block sizes and dilations.
struct Block {
    std::size_t begin, size;
    unsigned long dilation;  // 0 for a point factor
    LatticeVector point;     // the point, for point factors
};

inline std::optional<std::vector<Block>> recognize_product(const LatticePolytope& P) {
    std::size_t n = P.ambient_dim();
    if (n == 0 || n > 16) return std::nullopt;
    const auto& V = P.vertices();
    std::optional<std::vector<Block>> best;
    // Each bit pattern of n-1 cut positions is a composition of n.
    for (unsigned long mask = 0; mask < (1ul << (n - 1)); ++mask) {
        std::vector<Block> blocks;
        std::size_t start = 0;
        for (std::size_t c = 1; c <= n; ++c) {
            if (c == n || (mask >> (c - 1)) & 1ul) {
                blocks.push_back(Block{start, c - start, 0, {}});
                start = c;
            }
        }
        bool ok = true;
        std::size_t prod = 1;
        for (auto& b : blocks) {
            std::set<LatticeVector> proj;
            for (const auto& v : V) proj.insert(LatticeVector(v.begin() + static_cast<std::ptrdiff_t>(b.begin),
                                                              v.begin() + static_cast<std::ptrdiff_t>(b.begin + b.size)));
            prod *= proj.size();
            if (proj.size() == 1) {
                b.point = *proj.begin();
                continue;
            }
            if (proj.size() != b.size + 1 || !proj.count(LatticeVector(b.size, Int(0)))) {
                ok = false;
                break;
            }
            Int d = 0;
            for (const auto& p : proj) {
                if (is_zero(p)) continue;
                std::size_t nz = 0;
                for (std::size_t i = 0; i < b.size; ++i)
                    if (p[i] != 0) {
                        ++nz;
                        if (d == 0) d = p[i];
                        if (p[i] != d) ok = false;
                    }
                if (nz != 1) ok = false;
            }
            if (!ok || d <= 0 || !d.fits_ulong_p()) {
                ok = false;
                break;
            }
            b.dilation = d.get_ui();
        }
        if (!ok || prod != V.size()) continue;
        if (!best || blocks.size() > best->size()) best = blocks;
    }
    return best;
}

inline Subdivision point_subdivision(const LatticeVector& p) {
    return make_subdivision(LatticePolytope::hull({p}), {p}, {{0}}, RatVector{Rat(0)});
}

}  // namespace detail

// Breakability witness: structural recognition of products of dilated
// simplices first, then placing orders with stellar insertion of the points
// each placing skips, validated one by one.
inline WitnessSearch breakable_witness(const LatticePolytope& P, std::size_t budget = 100000) {
    WitnessSearch out;
    if (auto blocks = detail::recognize_product(P)) {
        std::optional<Subdivision> acc;
        for (const auto& b : *blocks) {
            Subdivision f = b.dilation == 0 ? detail::point_subdivision(b.point)
                                            : alcove_triangulation_dilated_simplex(b.dilation, b.size);
            acc = acc ? staircase_triangulation(*acc, f) : f;
        }
        if (acc && acc->ambient == P && is_unimodular(*acc).unimodular && acc->lifting) {
            out.witness = std::move(acc);
            out.method = "structural";
            return out;
        }
    }
    auto pts = P.lattice_points();
    IndexSet order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::set<std::vector<IndexSet>> seen;
    do {
        if (out.orderings_tried >= budget) break;
        ++out.orderings_tried;
        auto cells = placing_triangulation(pts, order);
        std::vector<bool> used(pts.size(), false);
        for (const auto& c : cells)
            for (auto i : c) used[i] = true;
        for (auto i : order)
            if (!used[i]) cells = stellar_insert(pts, cells, i);
        std::sort(cells.begin(), cells.end());
        if (!seen.insert(cells).second) continue;
        bool uni = std::all_of(cells.begin(), cells.end(),
                               [&](const IndexSet& c) { return normalized_volume(gather(pts, c)) == 1; });
        if (!uni) continue;
        Subdivision S = make_subdivision(P, pts, cells);
        if (!validate(S).ok) continue;
        if (auto h = is_regular(S)) {
            S.lifting = h;
            out.witness = std::move(S);
            out.method = "search";
            return out;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    out.method = "exhausted";
    return out;
}

// All subdivisions of P with at most two maximal cells (cells given by their
// vertex sets). A two-cell subdivision is cut by the hyperplane spanned by
// the common facet, so it suffices to try hyperplanes through lattice points.
inline std::vector<Subdivision> subdivisions_with_at_most_two_cells(const LatticePolytope& P, std::size_t point_cap = 12) {
    auto pts = P.lattice_points();
    require(pts.size() <= point_cap, "lattice point count " + std::to_string(pts.size()) + " exceeds the cap");
    std::size_t d = P.dim();
    std::vector<Subdivision> out;
    out.push_back(one_cell_subdivision(P));
    if (d == 0) return out;
    std::set<std::vector<IndexSet>> seen;
    IndexSet pick(d);
    for (std::size_t i = 0; i < d; ++i) pick[i] = i;
    if (pts.size() < d) return out;
    while (true) {
        auto on = gather(pts, pick);
        if (affine_rank(on) == d) {
            RatVector inside(pts[0].size(), Rat(0));
            // Any point off the hyperplane orients it.
            for (const auto& q : pts) {
                auto test = on;
                test.push_back(q);
                if (affine_rank(test) == d + 1) {
                    inside = to_rat(q);
                    break;
                }
            }
            // Direction frame of P.
            IndexSet all(pts.size());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            auto frame = detail::affine_frame(pts, all);
            auto hp = detail::hyperplane_in_frame(frame.directions, on, inside);
            if (hp) {
                IndexSet plus, minus;
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    Int s = dot(hp->first, pts[i]) - hp->second;
                    if (s >= 0) plus.push_back(i);
                    if (s <= 0) minus.push_back(i);
                }
                auto vertex_set = [&](const IndexSet& idx) {
                    auto local = gather(pts, idx);
                    HullData h = convex_hull_data(local);
                    IndexSet vs;
                    for (auto v : h.vertices) vs.push_back(idx[v]);
                    std::sort(vs.begin(), vs.end());
                    return vs;
                };
                if (affine_rank(gather(pts, plus)) == d + 1 && affine_rank(gather(pts, minus)) == d + 1) {
                    std::vector<IndexSet> cells = {vertex_set(plus), vertex_set(minus)};
                    std::sort(cells.begin(), cells.end());
                    if (seen.insert(cells).second) {
                        Subdivision S = make_subdivision(P, pts, cells);
                        if (validate(S).ok) {
                            if (auto h = is_regular(S)) S.lifting = h;
                            out.push_back(std::move(S));
                        }
                    }
                }
            }
        }
        std::size_t i = d;
        while (i > 0 && pick[i - 1] == pts.size() - d + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < d; ++j) pick[j] = pick[j - 1] + 1;
    }
    std::sort(out.begin() + 1, out.end(), [](const Subdivision& a, const Subdivision& b) { return a.cells < b.cells; });
    return out;
}

}  // namespace snctrop
