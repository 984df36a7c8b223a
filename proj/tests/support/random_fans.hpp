#pragma once

// Random unimodular fans and supported contact rows.

#include "snctrop/conecomplex.hpp"

#include <random>

namespace support {

using namespace snctrop;

// Random blowup-type refinement: stellar subdivision at the sum of the rays
// of a random cone, which keeps every cone unimodular.
inline ConeComplex random_blowups(ConeComplex S, std::mt19937& rng, int steps) {
    for (int s = 0; s < steps; ++s) {
        auto cones = all_cones(S);
        std::vector<IndexSet> big;
        for (auto& c : cones)
            if (c.size() >= 2) big.push_back(c);
        const auto& c = big[rng() % big.size()];
        LatticeVector v(S.ambient_dim, Int(0));
        for (auto r : c) v = add(v, S.rays[r]);
        S = stellar_subdivide(S, v);
    }
    return S;
}

// A supported row: positive entries on the rays of a random cone.
inline LatticeVector random_row(const ConeComplex& S, std::mt19937& rng, bool disjoint) {
    auto cones = all_cones(S);
    IndexSet c;
    do c = cones[rng() % cones.size()];
    while (c.empty() || (disjoint && c.size() != 1));
    LatticeVector row(S.rays.size(), Int(0));
    for (auto r : c) row[r] = 1 + static_cast<long>(rng() % 4);
    return row;
}

// Pullback multiplicity of divisor i at x: the i-th coordinate of x in the
// coarse complex, read off from its containing cone.
inline Rat pullback(const ConeComplex& coarse, std::size_t i, const LatticeVector& x) {
    auto loc = locate(coarse, to_rat(x));
    for (std::size_t k = 0; k < loc->cone.size(); ++k)
        if (loc->cone[k] == i) return loc->coords[k];
    return 0;
}

}  // namespace support
