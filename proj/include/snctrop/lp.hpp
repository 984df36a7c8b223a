#pragma once

// Exact rational linear programming: a dense two-phase simplex method with
// Bland's rule, and a strict-feasibility front end.

#include "exact.hpp"

#include <optional>
#include <vector>

namespace snctrop {

// a . x >= rhs (or > rhs when used as a strict constraint).
struct LinearConstraint {
    RatVector coeffs;
    Rat rhs;
};

namespace detail {

// maximize c.z subject to A z <= b, z >= 0.
class Simplex {
public:
    enum class Status { optimal, infeasible, unbounded };

    Simplex(const RatMatrix& a, const RatVector& b, const RatVector& c) : m_(a.size()), n_(c.size()) {
        // Columns: 0..n-1 structural, n..n+m-1 slack, n+m auxiliary, last rhs.
        width_ = n_ + m_ + 2;
        t_.assign(m_ + 1, RatVector(width_, Rat(0)));
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) t_[i][j] = a[i][j];
            t_[i][n_ + i] = 1;
            t_[i][aux()] = -1;
            t_[i][rhs()] = b[i];
        }
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) basis_[i] = n_ + i;
        c_ = c;
    }

    Status run() {
        std::size_t worst = m_;
        for (std::size_t i = 0; i < m_; ++i)
            if (t_[i][rhs()] < 0 && (worst == m_ || t_[i][rhs()] < t_[worst][rhs()])) worst = i;
        if (worst != m_) {
            // Phase one: maximize -aux.
            set_objective_aux();
            pivot(worst, aux());
            if (!optimize()) return Status::infeasible;  // cannot happen: bounded below by 0
            if (objective_value() != 0) return Status::infeasible;
            for (std::size_t i = 0; i < m_; ++i) {
                if (basis_[i] != aux()) continue;
                std::size_t col = width_;
                for (std::size_t j = 0; j < aux(); ++j)
                    if (t_[i][j] != 0) {
                        col = j;
                        break;
                    }
                if (col != width_) pivot(i, col);
            }
        }
        // Disable the auxiliary column.
        for (auto& row : t_) row[aux()] = 0;
        aux_disabled_ = true;
        set_objective(c_);
        if (!optimize()) return Status::unbounded;
        return Status::optimal;
    }

    RatVector solution() const {
        RatVector z(n_, Rat(0));
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) z[basis_[i]] = t_[i][rhs()];
        return z;
    }

    Rat objective_value() const { return -t_[m_][rhs()]; }

private:
    std::size_t aux() const { return n_ + m_; }
    std::size_t rhs() const { return n_ + m_ + 1; }

    void set_objective(const RatVector& c) {
        RatVector& obj = t_[m_];
        std::fill(obj.begin(), obj.end(), Rat(0));
        for (std::size_t j = 0; j < n_; ++j) obj[j] = c[j];
        reduce_objective();
    }

    void set_objective_aux() {
        RatVector& obj = t_[m_];
        std::fill(obj.begin(), obj.end(), Rat(0));
        obj[aux()] = -1;
        reduce_objective();
    }

    // Express the objective row in terms of nonbasic variables.
    void reduce_objective() {
        RatVector& obj = t_[m_];
        for (std::size_t i = 0; i < m_; ++i) {
            Rat f = obj[basis_[i]];
            if (f == 0) continue;
            for (std::size_t j = 0; j < width_; ++j)
                if (t_[i][j] != 0) obj[j] -= f * t_[i][j];
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        Rat inv = 1 / t_[row][col];
        for (auto& x : t_[row])
            if (x != 0) x *= inv;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == row || t_[i][col] == 0) continue;
            Rat f = t_[i][col];
            for (std::size_t j = 0; j < width_; ++j)
                if (t_[row][j] != 0) t_[i][j] -= f * t_[row][j];
        }
        basis_[row] = col;
    }

    // Returns false when unbounded.
    bool optimize() {
        while (true) {
            std::size_t enter = width_;
            for (std::size_t j = 0; j < rhs(); ++j) {
                if (aux_disabled_ && j == aux()) continue;
                if (t_[m_][j] > 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == width_) return true;
            std::size_t leave = m_;
            Rat best;
            for (std::size_t i = 0; i < m_; ++i) {
                if (t_[i][enter] <= 0) continue;
                Rat ratio = t_[i][rhs()] / t_[i][enter];
                if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m_) return false;
            pivot(leave, enter);
        }
    }

    std::size_t m_, n_, width_;
    RatMatrix t_;
    RatVector c_;
    std::vector<std::size_t> basis_;
    bool aux_disabled_ = false;
};

}  // namespace detail

struct LpResult {
    enum class Status { optimal, infeasible, unbounded } status;
    RatVector x;
    Rat value;
};

// maximize c.x subject to rows a.x >= rhs and x >= 0.
inline LpResult lp_maximize_nonneg(const std::vector<LinearConstraint>& ge, const RatVector& c) {
    std::size_t n = c.size();
    RatMatrix a;
    RatVector b;
    for (const auto& con : ge) {
        require(con.coeffs.size() == n, "constraint dimension mismatch");
        a.push_back(negate(con.coeffs));
        b.push_back(-con.rhs);
    }
    detail::Simplex s(a, b, c);
    auto st = s.run();
    if (st == detail::Simplex::Status::infeasible) return {LpResult::Status::infeasible, {}, 0};
    if (st == detail::Simplex::Status::unbounded) return {LpResult::Status::unbounded, {}, 0};
    return {LpResult::Status::optimal, s.solution(), s.objective_value()};
}

// Finds x with weak rows a.x >= rhs and strict rows a.x > rhs, or nullopt
// when none exists. With nonneg set, x >= 0 is imposed as well.
inline std::optional<RatVector> lp_strict_feasible(const std::vector<LinearConstraint>& weak,
                                                   const std::vector<LinearConstraint>& strict, std::size_t dim,
                                                   bool nonneg = false) {
    // Variables: x (split as x+ - x- unless nonneg), then t; maximize t <= 1
    // with a.x - t >= rhs on strict rows.
    std::size_t nx = nonneg ? dim : 2 * dim;
    std::size_t nv = nx + 1;
    auto expand = [&](const LinearConstraint& con, bool with_t) {
        require(con.coeffs.size() == dim, "constraint dimension mismatch");
        LinearConstraint e{RatVector(nv, Rat(0)), con.rhs};
        for (std::size_t j = 0; j < dim; ++j) {
            e.coeffs[j] = con.coeffs[j];
            if (!nonneg) e.coeffs[dim + j] = -con.coeffs[j];
        }
        if (with_t) e.coeffs[nx] = -1;
        return e;
    };
    std::vector<LinearConstraint> rows;
    for (const auto& c : weak) rows.push_back(expand(c, false));
    for (const auto& c : strict) rows.push_back(expand(c, true));
    LinearConstraint cap{RatVector(nv, Rat(0)), Rat(-1)};
    cap.coeffs[nx] = -1;
    rows.push_back(cap);
    RatVector obj(nv, Rat(0));
    obj[nx] = 1;
    auto res = lp_maximize_nonneg(rows, obj);
    if (res.status != LpResult::Status::optimal) return std::nullopt;
    if (!strict.empty() && res.value <= 0) return std::nullopt;
    RatVector x(dim);
    for (std::size_t j = 0; j < dim; ++j) x[j] = nonneg ? res.x[j] : res.x[j] - res.x[dim + j];
    return x;
}

}  // namespace snctrop
