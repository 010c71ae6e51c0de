#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scit/cuts.hpp"
#include "scit/dnn.hpp"
#include "scit/model.hpp"
#include "scit/parallel.hpp"
#include "scit/relax.hpp"

namespace scit {

enum class BackendKind { Exact, Dnn };

struct EngineConfig {
    std::int64_t eta = 0;  // integer upper bound on the optimal value
    int max_iterations = 10;
    Rational gamma{1, 3};
    int q = 10;  // sampled candidate sets per side per iteration
    SplitRule split_rule = SplitRule::SeededRandom;
    std::uint64_t seed = 0;
    int worker_count = 1;
    BackendKind backend = BackendKind::Exact;
    DnnConfig dnn;
    int enum_limit = 24;
    int retire_stalled_after = 0;  // 0 = never retire stalled triples
    int incumbent_subsets = 0;
    std::optional<std::vector<int>> incumbent;  // u (length m) or x (2m)
    std::string instance_name = "instance";

    void validate() const {
        if (max_iterations < 1) throw Error("max_iterations must be >= 1");
        if (q < 0) throw Error("q must be >= 0");
        if (worker_count < 1) throw Error("worker_count must be >= 1");
        gamma.validate();
    }
};

struct IterationRecord {
    int k = 0;
    int d = 0;                   // free u-variables when the master was solved
    std::int64_t zeta_hat = 0;   // running max of certified bounds, sharpened
    int cuts_validated = 0;
    int vars_fixed_total = 0;
    double wall_seconds = 0.0;   // informational; not serialized

    friend bool operator==(const IterationRecord& a, const IterationRecord& b) {
        return a.k == b.k && a.d == b.d && a.zeta_hat == b.zeta_hat &&
               a.cuts_validated == b.cuts_validated &&
               a.vars_fixed_total == b.vars_fixed_total;
    }
};

enum class RunStatus { Closed, NotClosed, Contradiction };

struct Report {
    std::string instance;
    int m = 0;
    std::int64_t eta = 0;
    std::string backend;
    std::uint64_t seed = 0;
    int max_iterations = 10;
    RunStatus status = RunStatus::NotClosed;
    std::vector<IterationRecord> records;
    Assignment final_fixes;
    std::vector<CutTriple> final_family;
    QuboInstance final_qubo;
    std::string note;

    friend bool operator==(const Report& a, const Report& b) {
        return a.instance == b.instance && a.m == b.m && a.eta == b.eta &&
               a.backend == b.backend && a.seed == b.seed &&
               a.max_iterations == b.max_iterations && a.status == b.status &&
               a.records == b.records && a.final_fixes == b.final_fixes &&
               a.final_family == b.final_family &&
               a.final_qubo.m == b.final_qubo.m &&
               a.final_qubo.constant == b.final_qubo.constant &&
               a.final_qubo.R == b.final_qubo.R && a.note == b.note;
    }
};

// Lemma-1 test: eta < bound_a (strict) certifies that every optimal solution
// violates the probe, i.e. satisfies the opposite >= inequality.
inline bool validate_cut(double bound_a, std::int64_t eta) {
    return static_cast<double>(eta) < bound_a;
}

// Certified bounds are reported as ceil(b - 1e-6): the objective is integer
// on binary points, so the ceiling is still a valid lower bound; the 1e-6
// guards against a bound sitting a hair above an integer.
inline std::int64_t sharpen_bound(double b) {
    return static_cast<std::int64_t>(std::ceil(b - 1e-6));
}

struct EngineState {
    QuboInstance original;
    QuboInstance current;      // reduced instance
    Assignment fixes;          // over original u-indices
    CutFamily family;          // index sets over the original slack space
    std::vector<Index> free_u; // ascending original u-indices still free
    std::int64_t best_bound = std::numeric_limits<std::int64_t>::min();
    bool have_bound = false;
    int k = 0;
    std::vector<IterationRecord> records;
};

namespace detail {

inline std::vector<Index> free_indices(const QuboInstance& inst,
                                       const Assignment& fixes) {
    std::vector<Index> out;
    out.reserve(inst.m);
    for (int j = 1; j <= inst.m; ++j)
        if (!fixes.u_value(j)) out.push_back(j);
    return out;
}

// original slack index -> reduced slack index, for triples whose members
// are all free
inline IndexSet to_current_space(const IndexSet& original_set,
                                 const std::vector<Index>& free_u, int m_orig) {
    std::vector<int> pos(m_orig + 1, 0);
    for (std::size_t p = 0; p < free_u.size(); ++p)
        pos[free_u[p]] = static_cast<int>(p) + 1;
    const int mc = static_cast<int>(free_u.size());
    IndexSet out;
    out.reserve(original_set.size());
    for (Index idx : original_set) {
        if (idx <= m_orig) {
            out.push_back(pos[idx]);
        } else {
            out.push_back(mc + pos[idx - m_orig]);
        }
    }
    return out;
}

inline IndexSet to_original_space(const IndexSet& current_set,
                                  const std::vector<Index>& free_u,
                                  int m_orig) {
    const int mc = static_cast<int>(free_u.size());
    IndexSet out;
    out.reserve(current_set.size());
    for (Index idx : current_set) {
        if (idx <= mc)
            out.push_back(free_u[idx - 1]);
        else
            out.push_back(m_orig + free_u[idx - mc - 1]);
    }
    return out;
}

}  // namespace detail

// One SCIT iteration.
//   Phase 1: solve the master relaxation (all proven >=-cuts with alpha >= 1)
//            for the bound and xbar.
//   Phase 2: for every triple I', solve the probe with the other triples'
//            >=-cuts plus sum_{i in I'} x_i <= alpha + beta, concurrently.
//   Phase 3: single-writer merge in lexicographic order of I: update
//            triples, fix and prune, reduce, then sample new candidates
//            from xbar (and re-offer incumbent sets when configured).
inline void scit_iteration(EngineState& state, const Backend& backend,
                           const EngineConfig& config,
                           std::span<const IndexSet> incumbent_sets = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    const int m_orig = state.original.m;
    const int d_k = static_cast<int>(state.free_u.size());
    const std::vector<Index> free_before = state.free_u;

    auto make_ge_cuts = [&](std::size_t skip) {
        std::vector<LinearCut> cuts;
        for (std::size_t i = 0; i < state.family.entries.size(); ++i) {
            if (i == skip) continue;
            const auto& t = state.family.entries[i];
            if (t.alpha < 1) continue;
            cuts.push_back({detail::to_current_space(t.members, free_before,
                                                     m_orig),
                            CutSense::Ge, t.alpha});
        }
        return cuts;
    };
    const std::size_t no_skip = state.family.entries.size() + 1;

    // Phase 1
    RelaxationResult master;
    if (state.current.m == 0) {
        master.lower_bound = static_cast<double>(state.current.constant);
        master.status = SolveStatus::CertifiedBound;
        master.xbar = Eigen::VectorXd(0);
    } else {
        const auto cuts = make_ge_cuts(no_skip);
        master = backend.solve(state.current, cuts);
    }
    if (master.status == SolveStatus::Infeasible)
        throw Contradiction(
            "master relaxation infeasible: eta was below the optimum or a "
            "certificate was wrong");
    const std::int64_t sharpened = sharpen_bound(master.lower_bound);
    if (!state.have_bound || sharpened > state.best_bound) {
        state.best_bound = sharpened;
        state.have_bound = true;
    }

    // Phase 2
    const int n_probes = static_cast<int>(state.family.entries.size());
    std::vector<char> validated(n_probes, 0);
    parallel_for_index(config.worker_count, n_probes, [&](int i) {
        const auto& t = state.family.entries[i];
        auto cuts = make_ge_cuts(static_cast<std::size_t>(i));
        cuts.push_back({detail::to_current_space(t.members, free_before,
                                                 m_orig),
                        CutSense::Le, t.alpha + t.beta});
        const RelaxationResult res = backend.solve(state.current, cuts);
        validated[i] = validate_cut(res.lower_bound, config.eta) ? 1 : 0;
    });
    const int n_validated =
        static_cast<int>(std::count(validated.begin(), validated.end(), 1));

    // Phase 3
    CutFamily updated;
    updated.iteration = state.family.iteration;
    updated.seed = state.family.seed;
    for (int i = 0; i < n_probes; ++i) {
        auto up = update_triple(state.family.entries[i], validated[i] != 0,
                                config.retire_stalled_after);
        if (up.status == TripleStatus::Retired) continue;
        updated.insert(std::move(up.triple));
    }

    auto fp = fix_and_prune(updated, state.fixes, m_orig);
    state.fixes = std::move(fp.fixes);
    state.family = std::move(fp.family);
    state.current = reduce_problem(state.original, state.fixes);
    state.free_u = detail::free_indices(state.original, state.fixes);

    auto offer_set = [&](IndexSet original_set) {
        CutTriple t{std::move(original_set), 0, 0, 0};
        detail::rewrite_triple(t, state.fixes, m_orig);
        if (t.members.empty()) return;
        t.alpha = 0;
        t.beta = config.gamma.floor_times(t.size());
        state.family.insert(std::move(t));
    };

    if (config.q > 0 && master.xbar && master.xbar->size() == 2 * d_k &&
        d_k > 0) {
        const std::uint64_t seed_k = mix_seed(config.seed, state.k);
        for (auto& s : sample_additional_cuts(*master.xbar, config.q, seed_k))
            offer_set(detail::to_original_space(s, free_before, m_orig));
    }
    for (const auto& s : incumbent_sets) offer_set(s);

    const auto t1 = std::chrono::steady_clock::now();
    state.records.push_back(
        {state.k, d_k, state.best_bound, n_validated,
         static_cast<int>(state.fixes.size()),
         std::chrono::duration<double>(t1 - t0).count()});
    state.k += 1;
    state.family.iteration = state.k;
}

// Full SCIT run: initial family via recursive halving, iterate until the
// sharpened running-max bound reaches eta (Closed: zeta = eta is proven) or
// the iteration cap is hit.
inline Report run(const QuboInstance& inst, const EngineConfig& config) {
    inst.validate();
    config.validate();

    EngineState state;
    state.original = inst;
    state.current = inst;
    state.free_u = detail::free_indices(inst, state.fixes);

    Report report;
    report.instance = config.instance_name;
    report.m = inst.m;
    report.eta = config.eta;
    report.backend = config.backend == BackendKind::Exact ? "exact" : "dnn";
    report.seed = config.seed;
    report.max_iterations = config.max_iterations;

    std::vector<IndexSet> incumbent_sets;
    try {
        const auto sets =
            generate_initial_family(inst.m, config.split_rule, config.seed);
        state.family = init_triples(sets, config.gamma);
        state.family.seed = config.seed;

        if (config.incumbent) {
            std::vector<int> xhat = *config.incumbent;
            if (static_cast<int>(xhat.size()) == inst.m)
                xhat = SlackSpace::extend(xhat);
            incumbent_sets =
                incumbent_cuts(xhat, inst.m, config.incumbent_subsets,
                               mix_seed(config.seed, 0x1e));
            for (const auto& s : incumbent_sets)
                state.family.insert(
                    {s, 0,
                     config.gamma.floor_times(static_cast<std::int64_t>(
                         s.size())),
                     0});
        }

        std::unique_ptr<Backend> backend;
        if (config.backend == BackendKind::Exact)
            backend = std::make_unique<ExactBackend>(config.enum_limit);
        else
            backend = std::make_unique<DnnBackend>(config.dnn);

        report.status = RunStatus::NotClosed;
        for (int k = 0; k < config.max_iterations; ++k) {
            scit_iteration(state, *backend, config, incumbent_sets);
            if (state.have_bound && state.best_bound >= config.eta) {
                report.status = RunStatus::Closed;
                break;
            }
        }
    } catch (const Contradiction& e) {
        report.status = RunStatus::Contradiction;
        report.note = e.what();
    }

    report.records = state.records;
    report.final_fixes = state.fixes;
    report.final_family = state.family.entries;
    report.final_qubo = state.current;
    return report;
}

}  // namespace scit
