#pragma once

// Test-only oracle: a curve type deforms if some nonzero perturbation of its
// vertex positions, with integer coordinates in [-R, R] over a lattice basis
// of each vertex cell, keeps every edge difference parallel to its direction.

#include "snctrop/tropical.hpp"

namespace oracle {

inline bool deforms_by_search(const snctrop::TropicalCurve& G0, const snctrop::PolyhedralComplex& K, long R = 2) {
    using namespace snctrop;
    auto G = assign_cells(G0, K);
    std::vector<IntMatrix> bases;
    for (const auto& V : G.vertices) {
        IntMatrix b;
        const auto& cell = K.cells[*V.cell];
        for (std::size_t i = 1; i < cell.vertices.size(); ++i)
            b.push_back(primitive_integer_multiple(sub(K.vertices[cell.vertices[i]], K.vertices[cell.vertices[0]])));
        for (auto r : cell.rays) b.push_back(K.rays[r]);
        bases.push_back(saturated_basis(b, G.ambient_dim));
    }
    std::vector<long> coeff;
    std::vector<std::pair<std::size_t, std::size_t>> slot;  // (vertex, basis row)
    for (std::size_t v = 0; v < bases.size(); ++v)
        for (std::size_t j = 0; j < bases[v].size(); ++j) slot.emplace_back(v, j);
    coeff.assign(slot.size(), -R);
    if (slot.empty()) return false;
    while (true) {
        bool nonzero = false;
        for (auto c : coeff) nonzero = nonzero || c != 0;
        if (nonzero) {
            std::vector<LatticeVector> delta(G.vertices.size(), LatticeVector(G.ambient_dim, Int(0)));
            for (std::size_t s = 0; s < slot.size(); ++s)
                delta[slot[s].first] = add(delta[slot[s].first], scale(Int(coeff[s]), bases[slot[s].first][slot[s].second]));
            bool ok = true;
            for (const auto& e : G.edges) {
                auto diff = sub(delta[e.to], delta[e.from]);
                if (!is_zero(diff) && rank(IntMatrix{diff, e.direction}) != 1) ok = false;
            }
            if (ok) return true;
        }
        std::size_t i = 0;
        while (i < coeff.size() && coeff[i] == R) coeff[i++] = -R;
        if (i == coeff.size()) return false;
        ++coeff[i];
    }
}

}  // namespace oracle
