#pragma once

#include <cstdint>
#include <vector>

#include "scit/model.hpp"

namespace scit {

struct OracleResult {
    std::int64_t zeta = 0;
    // every minimizer, bit i-1 of the mask = u_i
    std::vector<std::uint32_t> minimizers;
};

// Exhaustive minimum and the complete optimal set in integer arithmetic.
// Intentionally the naive double loop (independent of solve_exact's
// incremental enumeration) so the two implementations cross-check.
inline OracleResult brute_force_optimum(const QuboInstance& inst,
                                        int enum_limit = 24) {
    inst.validate();
    if (inst.m > enum_limit)
        throw EnumerationLimitExceeded("brute_force_optimum: m = " +
                                       std::to_string(inst.m) +
                                       " exceeds limit " +
                                       std::to_string(enum_limit));
    OracleResult out;
    const std::uint64_t total = std::uint64_t{1} << inst.m;
    bool first = true;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        std::int64_t val = inst.constant;
        for (int i = 0; i < inst.m; ++i) {
            if (!(mask >> i & 1)) continue;
            for (int j = 0; j < inst.m; ++j)
                if (mask >> j & 1) val += inst.R(i, j);
        }
        if (first || val < out.zeta) {
            out.zeta = val;
            out.minimizers.clear();
            first = false;
        }
        if (val == out.zeta)
            out.minimizers.push_back(static_cast<std::uint32_t>(mask));
    }
    return out;
}

inline std::vector<int> mask_to_u(std::uint32_t mask, int m) {
    std::vector<int> u(m);
    for (int i = 0; i < m; ++i) u[i] = mask >> i & 1;
    return u;
}

}  // namespace scit
