#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "scit/errors.hpp"

namespace scit {

using IntMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Indices into the slack space x = (u, v) are 1-based throughout:
// x_i = u_i for i in 1..m and x_{m+i} = v_i for i in 1..m.
using Index = int;
using IndexSet = std::vector<Index>;  // sorted ascending, no duplicates

// min u^T R u + constant over u in {0,1}^m. R symmetric with integer
// entries; maximization inputs are negated at ingestion so the engine
// always minimizes.
struct QuboInstance {
    int m = 0;
    IntMat R;
    std::int64_t constant = 0;

    void validate() const {
        if (m < 0) throw Error("QuboInstance: negative dimension");
        if (R.rows() != m || R.cols() != m)
            throw Error("QuboInstance: R must be m x m");
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (R(i, j) != R(j, i))
                    throw Error("QuboInstance: R must be symmetric");
    }

    std::int64_t value_of(std::span<const int> u) const {
        std::int64_t acc = constant;
        for (int i = 0; i < m; ++i) {
            if (!u[i]) continue;
            for (int j = 0; j < m; ++j)
                if (u[j]) acc += R(i, j);
        }
        return acc;
    }
};

// The slack reformulation x = (u, v) in {0,1}^{2m} with u + v = e.
// Every feasible x satisfies x_i * x_{m+i} = 0 and sum_i x_i = m.
struct SlackSpace {
    static std::vector<int> extend(std::span<const int> u) {
        std::vector<int> x(2 * u.size());
        for (std::size_t i = 0; i < u.size(); ++i) {
            x[i] = u[i];
            x[u.size() + i] = 1 - u[i];
        }
        return x;
    }

    static bool feasible(std::span<const int> x, int m) {
        if (static_cast<int>(x.size()) != 2 * m) return false;
        for (int i = 0; i < 2 * m; ++i)
            if (x[i] != 0 && x[i] != 1) return false;
        for (int i = 0; i < m; ++i) {
            if (x[i] + x[m + i] != 1) return false;
            if (x[i] * x[m + i] != 0) return false;
        }
        return true;
    }
};

// Fixed values of original u-variables. Fixing u_i = c implicitly fixes
// v_i = 1 - c; conflicting fixes raise Contradiction.
class Assignment {
public:
    void fix_u(Index i, int value) {
        if (value != 0 && value != 1)
            throw Error("Assignment: value must be 0 or 1");
        auto [it, inserted] = values_.try_emplace(i, value);
        if (!inserted && it->second != value)
            throw Contradiction("variable u_" + std::to_string(i) +
                                " fixed to both 0 and 1");
    }

    // Fix x_j = value in the slack space of an m-variable problem.
    void fix_x(Index j, int m, int value) {
        if (j >= 1 && j <= m)
            fix_u(j, value);
        else if (j > m && j <= 2 * m)
            fix_u(j - m, 1 - value);
        else
            throw Error("Assignment: x index out of range");
    }

    std::optional<int> u_value(Index i) const {
        auto it = values_.find(i);
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    // Value of x_j if determined by the fixes, nullopt otherwise.
    std::optional<int> x_value(Index j, int m) const {
        if (j >= 1 && j <= m) return u_value(j);
        if (j > m && j <= 2 * m) {
            auto v = u_value(j - m);
            if (!v) return std::nullopt;
            return 1 - *v;
        }
        throw Error("Assignment: x index out of range");
    }

    bool empty() const { return values_.empty(); }
    std::size_t size() const { return values_.size(); }
    const std::map<Index, int>& values() const { return values_; }

    friend bool operator==(const Assignment&, const Assignment&) = default;

private:
    std::map<Index, int> values_;  // u index -> 0/1, ordered for determinism
};

// Eliminates fixed variables. Fixing u_j = 1 folds 2 R_ij into the diagonal
// of each remaining i (u_i^2 = u_i on binaries) and moves R_jj plus the
// pairwise terms of fixed ones into the constant; fixing u_j = 0 just
// deletes row/column j. Optimal value and optima over the slice are
// preserved exactly.
inline QuboInstance reduce_problem(const QuboInstance& inst,
                                   const Assignment& fixes) {
    for (const auto& [j, v] : fixes.values())
        if (j < 1 || j > inst.m)
            throw Error("reduce_problem: fix index out of range");

    std::vector<int> free_idx;  // 1-based original indices
    free_idx.reserve(inst.m);
    for (int j = 1; j <= inst.m; ++j)
        if (!fixes.u_value(j)) free_idx.push_back(j);

    std::vector<int> ones;
    for (const auto& [j, v] : fixes.values())
        if (v == 1) ones.push_back(j);

    QuboInstance out;
    out.m = static_cast<int>(free_idx.size());
    out.R = IntMat::Zero(out.m, out.m);
    out.constant = inst.constant;

    for (int a = 0; a < out.m; ++a)
        for (int b = 0; b < out.m; ++b)
            out.R(a, b) = inst.R(free_idx[a] - 1, free_idx[b] - 1);
    for (int a = 0; a < out.m; ++a)
        for (int j : ones) out.R(a, a) += 2 * inst.R(free_idx[a] - 1, j - 1);
    for (int j : ones)
        for (int k : ones) out.constant += inst.R(j - 1, k - 1);
    return out;
}

}  // namespace scit
