#pragma once

#include <Eigen/Dense>
#include <bit>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "scit/lift.hpp"
#include "scit/model.hpp"

namespace scit {

// A cut over the slack space: sum_{i in I} x_i {<=|>=} level.
struct LinearCut {
    IndexSet members;
    CutSense sense = CutSense::Ge;
    std::int64_t level = 0;
};

enum class SolveStatus { CertifiedBound, Infeasible, BudgetExhausted };

struct SolveDiagnostics {
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int sweeps = 0;
};

// lower_bound is a certified lower bound on the queried subproblem's optimal
// value; +inf denotes proven infeasibility. The guarantee holds for
// BudgetExhausted results too (the certificate is valid at any budget).
struct RelaxationResult {
    double lower_bound = -std::numeric_limits<double>::infinity();
    std::optional<Eigen::VectorXd> xbar;  // in [0,1]^{2m}
    SolveStatus status = SolveStatus::CertifiedBound;
    SolveDiagnostics diagnostics;
};

// Exact minimum of u^T R u + constant over all binary x = (u, e-u)
// satisfying every cut. Enumerates u in Gray-code order with incremental
// objective and cut counters, so each step costs O(m + #touched cuts).
inline RelaxationResult solve_exact(const QuboInstance& inst,
                                    std::span<const LinearCut> cuts,
                                    int enum_limit = 24) {
    const int m = inst.m;
    if (m > enum_limit)
        throw EnumerationLimitExceeded("solve_exact: m = " + std::to_string(m) +
                                       " exceeds limit " +
                                       std::to_string(enum_limit));

    const int nc = static_cast<int>(cuts.size());
    // cut count at u = 0, i.e. number of v-side members
    std::vector<std::int64_t> count(nc, 0);
    // per u-bit: (cut index, +1 for a u-side member, -1 for v-side)
    std::vector<std::vector<std::pair<int, int>>> touch(m);
    for (int c = 0; c < nc; ++c) {
        for (Index idx : cuts[c].members) {
            if (idx >= 1 && idx <= m) {
                touch[idx - 1].push_back({c, +1});
            } else if (idx > m && idx <= 2 * m) {
                touch[idx - m - 1].push_back({c, -1});
                count[c] += 1;
            } else {
                throw Error("solve_exact: cut index out of range");
            }
        }
    }
    auto cuts_ok = [&]() {
        for (int c = 0; c < nc; ++c) {
            if (cuts[c].sense == CutSense::Ge) {
                if (count[c] < cuts[c].level) return false;
            } else {
                if (count[c] > cuts[c].level) return false;
            }
        }
        return true;
    };

    std::vector<int> u(m, 0);
    // s[j] = sum over set i of R_ij (includes R_jj when u_j = 1)
    std::vector<std::int64_t> s(m, 0);
    std::int64_t obj = 0;

    bool found = false;
    std::int64_t best = 0;
    std::vector<int> best_u;
    auto consider = [&]() {
        if (!cuts_ok()) return;
        if (!found || obj < best) {
            found = true;
            best = obj;
            best_u = u;
        }
    };

    consider();
    const std::uint64_t total = std::uint64_t{1} << m;
    for (std::uint64_t k = 1; k < total; ++k) {
        const int j = std::countr_zero(k);
        if (u[j]) {
            obj -= 2 * s[j] - inst.R(j, j);
            u[j] = 0;
            for (int i = 0; i < m; ++i) s[i] -= inst.R(i, j);
            for (auto [c, w] : touch[j]) count[c] -= w;
        } else {
            obj += 2 * s[j] + inst.R(j, j);
            u[j] = 1;
            for (int i = 0; i < m; ++i) s[i] += inst.R(i, j);
            for (auto [c, w] : touch[j]) count[c] += w;
        }
        consider();
    }

    RelaxationResult res;
    if (!found) {
        res.lower_bound = std::numeric_limits<double>::infinity();
        res.status = SolveStatus::Infeasible;
        return res;
    }
    res.lower_bound = static_cast<double>(best + inst.constant);
    res.status = SolveStatus::CertifiedBound;
    Eigen::VectorXd x(2 * m);
    for (int i = 0; i < m; ++i) {
        x(i) = best_u[i];
        x(m + i) = 1 - best_u[i];
    }
    res.xbar = std::move(x);
    return res;
}

// Certified lower-bound backend contract. Implementations must be pure
// functions of their inputs; many queries may run concurrently.
class Backend {
public:
    virtual ~Backend() = default;
    virtual RelaxationResult solve(const QuboInstance& inst,
                                   std::span<const LinearCut> cuts) const = 0;
};

class ExactBackend final : public Backend {
public:
    explicit ExactBackend(int enum_limit = 24) : enum_limit_(enum_limit) {}

    RelaxationResult solve(const QuboInstance& inst,
                           std::span<const LinearCut> cuts) const override {
        return solve_exact(inst, cuts, enum_limit_);
    }

private:
    int enum_limit_;
};

}  // namespace scit
