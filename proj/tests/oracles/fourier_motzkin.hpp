#pragma once

// Test-only oracle: feasibility of mixed weak/strict linear systems by
// Fourier-Motzkin elimination. Exponential; meant for at most 4 variables.

#include "snctrop/lp.hpp"

namespace oracle {

using snctrop::LinearConstraint;
using snctrop::Rat;
using snctrop::RatVector;

struct FmRow {
    RatVector a;
    Rat b;
    bool strict;
};

inline bool fm_feasible(const std::vector<LinearConstraint>& weak, const std::vector<LinearConstraint>& strict,
                        std::size_t dim) {
    std::vector<FmRow> rows;
    for (const auto& c : weak) rows.push_back({c.coeffs, c.rhs, false});
    for (const auto& c : strict) rows.push_back({c.coeffs, c.rhs, true});
    for (std::size_t v = 0; v < dim; ++v) {
        std::vector<FmRow> pos, neg, rest;
        for (auto& r : rows) {
            if (r.a[v] > 0) pos.push_back(r);
            else if (r.a[v] < 0) neg.push_back(r);
            else rest.push_back(r);
        }
        // a.x >= b with a_v > 0 gives a lower bound on x_v, a_v < 0 an upper bound.
        for (const auto& p : pos) {
            for (const auto& n : neg) {
                Rat fp = -n.a[v], fn = p.a[v];
                FmRow c{RatVector(dim), fp * p.b + fn * n.b, p.strict || n.strict};
                for (std::size_t j = 0; j < dim; ++j) c.a[j] = fp * p.a[j] + fn * n.a[j];
                c.a[v] = 0;
                rest.push_back(std::move(c));
            }
        }
        rows = std::move(rest);
    }
    for (const auto& r : rows) {
        if (r.strict && !(0 > r.b)) return false;
        if (!r.strict && !(0 >= r.b)) return false;
    }
    return true;
}

}  // namespace oracle
