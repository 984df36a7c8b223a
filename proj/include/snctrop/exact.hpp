#pragma once

// Exact integer and rational linear algebra on top of GMP.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace snctrop {

using Int = mpz_class;
using Rat = mpq_class;
using LatticeVector = std::vector<Int>;
using RatVector = std::vector<Rat>;
using IntMatrix = std::vector<LatticeVector>;
using RatMatrix = std::vector<RatVector>;
using IndexSet = std::vector<std::size_t>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw Error(what);
}

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

inline Int gcd_int(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm_int(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Int gcd_of(const LatticeVector& v) {
    Int g = 0;
    for (const auto& x : v) g = gcd_int(g, x);
    return g;
}

inline bool is_zero(const LatticeVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

inline bool is_zero(const RatVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

struct PrimitiveDecomposition {
    LatticeVector primitive;
    Int weight;
};

// v = weight * primitive with weight = gcd of the entries.
inline PrimitiveDecomposition primitive_decompose(const LatticeVector& v) {
    Int g = gcd_of(v);
    require(g != 0, "zero vector has no primitive direction");
    LatticeVector p(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) p[i] = v[i] / g;
    return {std::move(p), g};
}

inline LatticeVector primitive_part(const LatticeVector& v) { return primitive_decompose(v).primitive; }

// Rounds nothing: scales a rational vector by the lcm of its denominators and
// divides out the content, keeping the sign of the direction.
inline LatticeVector primitive_integer_multiple(const RatVector& v) {
    Int l = 1;
    for (const auto& x : v) l = lcm_int(l, x.get_den());
    LatticeVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        Rat s = v[i] * l;
        r[i] = s.get_num();
    }
    Int g = gcd_of(r);
    require(g != 0, "zero vector has no primitive direction");
    for (auto& x : r) x /= g;
    return r;
}

inline RatVector to_rat(const LatticeVector& v) { return RatVector(v.begin(), v.end()); }

inline RatMatrix to_rat(const IntMatrix& m) {
    RatMatrix r;
    r.reserve(m.size());
    for (const auto& row : m) r.push_back(to_rat(row));
    return r;
}

inline bool is_integral(const RatVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x.get_den() == 1; });
}

inline LatticeVector to_int(const RatVector& v) {
    LatticeVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        require(v[i].get_den() == 1, "vector is not integral");
        r[i] = v[i].get_num();
    }
    return r;
}

template <class T>
std::vector<T> add(const std::vector<T>& a, const std::vector<T>& b) {
    require(a.size() == b.size(), "dimension mismatch");
    std::vector<T> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

template <class T>
std::vector<T> sub(const std::vector<T>& a, const std::vector<T>& b) {
    require(a.size() == b.size(), "dimension mismatch");
    std::vector<T> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

template <class T, class S>
std::vector<T> scale(const S& s, const std::vector<T>& a) {
    std::vector<T> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
    return r;
}

template <class T>
std::vector<T> negate(const std::vector<T>& a) {
    std::vector<T> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

template <class T, class U>
auto dot(const std::vector<T>& a, const std::vector<U>& b) {
    require(a.size() == b.size(), "dimension mismatch");
    using R = std::conditional_t<std::is_same_v<T, Rat> || std::is_same_v<U, Rat>, Rat, Int>;
    R s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline RatVector mat_vec(const RatMatrix& m, const RatVector& v) {
    RatVector r(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) r[i] = dot(m[i], v);
    return r;
}

inline LatticeVector mat_vec(const IntMatrix& m, const LatticeVector& v) {
    LatticeVector r(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) r[i] = dot(m[i], v);
    return r;
}

template <class T>
std::vector<std::vector<T>> transpose(const std::vector<std::vector<T>>& m, std::size_t cols_if_empty = 0) {
    std::size_t rows = m.size();
    std::size_t cols = rows ? m[0].size() : cols_if_empty;
    std::vector<std::vector<T>> t(cols, std::vector<T>(rows));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) t[j][i] = m[i][j];
    return t;
}

// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(RatMatrix& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    std::size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        Rat inv = 1 / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    m.resize(r);
    return pivots;
}

inline std::size_t rank(RatMatrix m) { return rref(m).size(); }

inline std::size_t rank(const IntMatrix& m) { return rank(to_rat(m)); }

// Basis of {x : m x = 0}; `cols` is needed when m has no rows.
inline RatMatrix nullspace(RatMatrix m, std::size_t cols) {
    auto piv = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : piv) is_pivot[c] = true;
    RatMatrix basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        RatVector v(cols, Rat(0));
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -m[i][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solves m x = b. Returns one solution (free variables zero) or nullopt.
inline std::optional<RatVector> solve(const RatMatrix& m, const RatVector& b, std::size_t cols) {
    require(m.size() == b.size(), "dimension mismatch");
    RatMatrix aug;
    aug.reserve(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        RatVector row = m[i];
        row.push_back(b[i]);
        aug.push_back(std::move(row));
    }
    if (aug.empty()) return RatVector(cols, Rat(0));
    auto piv = rref(aug);
    RatVector x(cols, Rat(0));
    for (std::size_t i = 0; i < piv.size(); ++i) {
        if (piv[i] == cols) return std::nullopt;
        x[piv[i]] = aug[i][cols];
    }
    return x;
}

// Coefficients c with sum_i c_i gens[i] = v, when the gens are linearly independent.
inline std::optional<RatVector> coordinates_in(const RatMatrix& gens, const RatVector& v) {
    if (gens.empty()) {
        if (is_zero(v)) return RatVector{};
        return std::nullopt;
    }
    return solve(transpose(gens), v, gens.size());
}

// Fraction-free Gaussian elimination.
inline Int determinant(IntMatrix m) {
    std::size_t n = m.size();
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[p], m[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]);
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

inline Rat determinant(const RatMatrix& m) {
    RatMatrix a = m;
    std::size_t n = a.size();
    Rat det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a[i][c] == 0) continue;
            Rat f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return det;
}

// Gcd of the maximal minors of an integer k x n matrix (k <= n). This is the
// index of the lattice spanned by the rows inside its saturation.
inline Int gcd_of_maximal_minors(const IntMatrix& rows) {
    std::size_t k = rows.size();
    if (k == 0) return 1;
    std::size_t n = rows[0].size();
    if (k > n) return 0;
    Int g = 0;
    std::vector<std::size_t> cols(k);
    for (std::size_t i = 0; i < k; ++i) cols[i] = i;
    while (true) {
        IntMatrix sq(k, LatticeVector(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) sq[i][j] = rows[i][cols[j]];
        g = gcd_int(g, determinant(std::move(sq)));
        if (g == 1) return g;
        std::size_t i = k;
        while (i > 0 && cols[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++cols[i - 1];
        for (std::size_t j = i; j < k; ++j) cols[j] = cols[j - 1] + 1;
    }
    return g;
}

// Normalized volume of a lattice simplex relative to the lattice of its
// affine span; 0 when the points are affinely dependent.
inline Int normalized_volume(const std::vector<LatticeVector>& simplex) {
    require(!simplex.empty(), "empty simplex");
    IntMatrix edges;
    for (std::size_t i = 1; i < simplex.size(); ++i) edges.push_back(sub(simplex[i], simplex[0]));
    if (edges.empty()) return 1;
    if (rank(edges) < edges.size()) return 0;
    if (edges.size() == edges[0].size()) return abs_int(determinant(edges));
    return gcd_of_maximal_minors(edges);
}

// Affine rank (dimension + 1) of a point set; 0 for the empty set.
template <class V>
std::size_t affine_rank(const std::vector<V>& pts) {
    if (pts.empty()) return 0;
    RatMatrix d;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        RatVector row;
        for (std::size_t j = 0; j < pts[i].size(); ++j) row.push_back(Rat(pts[i][j]) - Rat(pts[0][j]));
        d.push_back(std::move(row));
    }
    return rank(std::move(d)) + 1;
}

// Row-style Hermite normal form over Z via unimodular row operations.
// Returns H (nonzero rows only) with H = U * M for some unimodular U.
inline IntMatrix hermite_rows(IntMatrix m) {
    if (m.empty()) return m;
    std::size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        while (true) {
            std::size_t best = rows;
            for (std::size_t i = r; i < rows; ++i)
                if (m[i][c] != 0 && (best == rows || abs_int(m[i][c]) < abs_int(m[best][c]))) best = i;
            if (best == rows) break;
            std::swap(m[r], m[best]);
            bool done = true;
            for (std::size_t i = r + 1; i < rows; ++i) {
                if (m[i][c] == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), m[i][c].get_mpz_t(), m[r][c].get_mpz_t());
                for (std::size_t j = c; j < cols; ++j) m[i][j] -= q * m[r][j];
                if (m[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (r < rows && m[r][c] != 0) {
            if (m[r][c] < 0)
                for (auto& x : m[r]) x = -x;
            for (std::size_t i = 0; i < r; ++i) {
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), m[i][c].get_mpz_t(), m[r][c].get_mpz_t());
                if (q != 0)
                    for (std::size_t j = c; j < cols; ++j) m[i][j] -= q * m[r][j];
            }
            ++r;
        }
    }
    m.resize(r);
    return m;
}

// Basis of the saturated lattice span(gens) ∩ Z^n, in Hermite form.
inline IntMatrix saturated_basis(const IntMatrix& gens, std::size_t n) {
    RatMatrix m = to_rat(gens);
    if (m.empty()) return {};
    // The orthogonal complement of the complement is the rational span; its
    // integer points are cut out by integer equations.
    RatMatrix perp = nullspace(m, n);
    IntMatrix eq;
    for (auto& row : perp) eq.push_back(primitive_integer_multiple(row));
    if (eq.empty()) {
        IntMatrix id(n, LatticeVector(n, Int(0)));
        for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
        return id;
    }
    // Integer kernel of eq: compute via Hermite form of [eq^T | I].
    IntMatrix aug(n, LatticeVector(eq.size() + n, Int(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < eq.size(); ++j) aug[i][j] = eq[j][i];
        aug[i][eq.size() + i] = 1;
    }
    IntMatrix h = hermite_rows(aug);
    IntMatrix kernel;
    for (auto& row : h) {
        bool zero_left = true;
        for (std::size_t j = 0; j < eq.size(); ++j)
            if (row[j] != 0) zero_left = false;
        if (zero_left) kernel.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(eq.size()), row.end());
    }
    return hermite_rows(kernel);
}

// Integer coordinates of v in a lattice basis, or nullopt when v is not in
// the lattice.
inline std::optional<LatticeVector> lattice_coordinates(const IntMatrix& basis, const LatticeVector& v) {
    auto c = coordinates_in(to_rat(basis), to_rat(v));
    if (!c || !is_integral(*c)) return std::nullopt;
    return to_int(*c);
}

// A surjection Z^n -> Z^(n-k) whose kernel is the saturation of span(gens),
// given as an integer matrix with n-k rows.
inline IntMatrix quotient_projection(const IntMatrix& gens, std::size_t n) {
    IntMatrix eq;
    if (gens.empty() || rank(gens) == 0) {
        for (std::size_t i = 0; i < n; ++i) {
            LatticeVector e(n, Int(0));
            e[i] = 1;
            eq.push_back(std::move(e));
        }
        return eq;
    }
    for (auto& row : nullspace(to_rat(gens), n)) eq.push_back(primitive_integer_multiple(row));
    if (eq.empty()) return eq;
    // x -> eq x has the right kernel; re-express its image in a lattice basis.
    IntMatrix image = hermite_rows(transpose(eq));
    RatMatrix bt = transpose(to_rat(image));
    IntMatrix proj(eq.size(), LatticeVector(n));
    for (std::size_t j = 0; j < n; ++j) {
        RatVector col(eq.size());
        for (std::size_t i = 0; i < eq.size(); ++i) col[i] = eq[i][j];
        auto c = solve(bt, col, eq.size());
        require(c && is_integral(*c), "quotient projection is not integral");
        for (std::size_t i = 0; i < eq.size(); ++i) proj[i][j] = (*c)[i].get_num();
    }
    return proj;
}

inline std::string to_string(const Rat& r) {
    return r.get_den() == 1 ? r.get_num().get_str() : r.get_str();
}

}  // namespace snctrop
