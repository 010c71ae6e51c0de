#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "scit/model.hpp"
#include "scit/rng.hpp"

#include <Eigen/Dense>

namespace scit {

// Candidate cut (I, alpha, beta): sum_{i in I} x_i >= alpha is currently
// proven valid for the optimal set; beta is the step size probed next.
// Invariants: 0 <= alpha <= |I| and 0 <= beta <= |I| - alpha - 1 while
// alpha < |I|. stalls counts consecutive failed probes at beta = 0.
struct CutTriple {
    IndexSet members;
    std::int64_t alpha = 0;
    std::int64_t beta = 0;
    int stalls = 0;

    std::int64_t size() const { return static_cast<std::int64_t>(members.size()); }
    bool saturated() const { return alpha == size(); }

    friend bool operator==(const CutTriple&, const CutTriple&) = default;
};

enum class TripleStatus { Updated, Saturated, Retired };

struct TripleUpdate {
    TripleStatus status = TripleStatus::Updated;
    CutTriple triple;
};

// alpha' = alpha + beta + 1 on success (Saturated when alpha' = |I|),
// beta' = floor(beta/2) on failure. A triple that keeps failing at beta = 0
// is retested forever unless retire_stalled_after > 0.
inline TripleUpdate update_triple(const CutTriple& t, bool validated,
                                  int retire_stalled_after = 0) {
    const std::int64_t n = t.size();
    if (validated) {
        CutTriple out{t.members, t.alpha + t.beta + 1, 0, 0};
        if (out.alpha >= n) {
            out.alpha = n;
            return {TripleStatus::Saturated, std::move(out)};
        }
        out.beta = std::min(t.beta, n - out.alpha - 1);
        return {TripleStatus::Updated, std::move(out)};
    }
    CutTriple out{t.members, t.alpha, t.beta / 2,
                  t.beta == 0 ? t.stalls + 1 : 0};
    if (retire_stalled_after > 0 && out.stalls >= retire_stalled_after)
        return {TripleStatus::Retired, std::move(out)};
    return {TripleStatus::Updated, std::move(out)};
}

// The evolving family I^k. Entries are kept sorted lexicographically by
// index set; that order is the deterministic merge order for the engine.
struct CutFamily {
    std::vector<CutTriple> entries;
    int iteration = 0;
    std::uint64_t seed = 0;

    bool contains(const IndexSet& I) const {
        return std::binary_search(
            entries.begin(), entries.end(), I,
            [](const auto& a, const auto& b) { return key(a) < key(b); });
    }

    // Inserts unless the set is already present; a resampled existing set is
    // skipped rather than resetting its proven alpha.
    bool insert(CutTriple t) {
        std::sort(t.members.begin(), t.members.end());
        auto it = std::lower_bound(
            entries.begin(), entries.end(), t.members,
            [](const CutTriple& a, const IndexSet& b) { return a.members < b; });
        if (it != entries.end() && it->members == t.members) return false;
        entries.insert(it, std::move(t));
        return true;
    }

private:
    static const IndexSet& key(const CutTriple& t) { return t.members; }
    static const IndexSet& key(const IndexSet& s) { return s; }
};

enum class SplitRule { Interleave, SeededRandom };

namespace detail {

// Split J into J1, J2 with |J1| = |J2| = ceil(|J|/2) and J1 u J2 = J.
// Interleave: alternating positions, the last element shared when |J| is
// odd. SeededRandom: a shuffled split with one random shared element.
inline std::pair<IndexSet, IndexSet> split_set(const IndexSet& J,
                                               SplitRule rule, Rng& rng) {
    const std::size_t half = (J.size() + 1) / 2;
    IndexSet a, b;
    if (rule == SplitRule::Interleave) {
        for (std::size_t p = 0; p < J.size(); ++p)
            (p % 2 == 0 ? a : b).push_back(J[p]);
        if (J.size() % 2 == 1) b.push_back(J.back());
    } else {
        IndexSet pool = J;
        rng.shuffle(pool);
        a.assign(pool.begin(), pool.begin() + half);
        b.assign(pool.begin() + half, pool.end());
        if (b.size() < half)
            b.push_back(a[static_cast<std::size_t>(rng.below(a.size()))]);
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return {std::move(a), std::move(b)};
}

}  // namespace detail

// Recursive halving of {1,..,m} plus the mirrored slack sets {m+j : j in J},
// deduplicated and in canonical (lexicographic) order.
inline std::vector<IndexSet> generate_initial_family(int m, SplitRule rule,
                                                     std::uint64_t seed) {
    if (m < 1) throw Error("generate_initial_family: m must be >= 1");
    Rng rng(seed);

    IndexSet root(m);
    for (int i = 0; i < m; ++i) root[i] = i + 1;
    std::vector<IndexSet> level{root};
    std::vector<IndexSet> collected{root};
    for (;;) {
        std::vector<IndexSet> next;
        for (const auto& J : level) {
            if (J.size() < 2) continue;
            auto [a, b] = detail::split_set(J, rule, rng);
            next.push_back(std::move(a));
            next.push_back(std::move(b));
        }
        if (next.empty()) break;
        collected.insert(collected.end(), next.begin(), next.end());
        level = std::move(next);
    }

    std::vector<IndexSet> out;
    out.reserve(2 * collected.size());
    for (const auto& J : collected) {
        out.push_back(J);
        IndexSet mirror(J.size());
        for (std::size_t i = 0; i < J.size(); ++i) mirror[i] = J[i] + m;
        out.push_back(std::move(mirror));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// gamma as an exact rational so beta = floor(gamma |I|) has no rounding
// ambiguity.
struct Rational {
    std::int64_t num = 1;
    std::int64_t den = 3;

    std::int64_t floor_times(std::int64_t n) const { return num * n / den; }

    void validate() const {
        if (den <= 0 || num <= 0 || num >= den)
            throw Error("gamma must lie strictly between 0 and 1");
    }
};

// alpha = 0 (trivially valid since x >= 0) and beta = floor(gamma |I|).
inline CutFamily init_triples(std::span<const IndexSet> sets, Rational gamma) {
    gamma.validate();
    CutFamily fam;
    for (const auto& I : sets)
        fam.insert({I, 0, gamma.floor_times(static_cast<std::int64_t>(I.size())),
                    0});
    return fam;
}

// Treats ubar_i as Pr{u*_i = 1} and vbar_i as Pr{v*_i = 1}; draws q
// independent-Bernoulli u-samples then q v-samples, drops empty sets and
// deduplicates (against `existing` too when provided).
inline std::vector<IndexSet> sample_additional_cuts(
    const Eigen::VectorXd& xbar, int q, std::uint64_t seed,
    const CutFamily* existing = nullptr) {
    const int m = static_cast<int>(xbar.size()) / 2;
    Rng rng(seed);
    std::vector<IndexSet> out;
    auto emit = [&](int offset) {
        for (int p = 0; p < q; ++p) {
            IndexSet s;
            for (int i = 0; i < m; ++i) {
                const double pr = std::clamp(xbar(offset + i), 0.0, 1.0);
                if (rng.bernoulli(pr)) s.push_back(offset + i + 1);
            }
            if (s.empty()) continue;
            if (existing && existing->contains(s)) continue;
            if (std::find(out.begin(), out.end(), s) != out.end()) continue;
            out.push_back(std::move(s));
        }
    };
    emit(0);
    emit(m);
    return out;
}

// J-hat = {i : xhat_i = 1} for a feasible incumbent (|J-hat| = m); a later
// validation of sum_{i in J-hat} x_i >= m certifies xhat as the unique
// optimal solution. Optionally adds random subsets of J-hat.
inline std::vector<IndexSet> incumbent_cuts(std::span<const int> xhat, int m,
                                            int random_subsets = 0,
                                            std::uint64_t seed = 0) {
    if (!SlackSpace::feasible(xhat, m))
        throw InfeasibleIncumbent(
            "incumbent violates u + v = e or complementarity");
    IndexSet jhat;
    for (int i = 0; i < 2 * m; ++i)
        if (xhat[i] == 1) jhat.push_back(i + 1);
    std::vector<IndexSet> out{jhat};
    Rng rng(seed);
    for (int r = 0; r < random_subsets; ++r) {
        IndexSet sub;
        for (Index i : jhat)
            if (rng.bernoulli(0.5)) sub.push_back(i);
        if (sub.empty() || sub == jhat) continue;
        if (std::find(out.begin(), out.end(), sub) == out.end())
            out.push_back(std::move(sub));
    }
    return out;
}

namespace detail {

// Rewrites one triple against the assignment: members fixed to 1 leave the
// set and lower alpha by one (floor at 0), members fixed to 0 just leave.
// Returns whether anything changed.
inline bool rewrite_triple(CutTriple& t, const Assignment& fixes, int m) {
    IndexSet kept;
    kept.reserve(t.members.size());
    std::int64_t alpha = t.alpha;
    for (Index idx : t.members) {
        const auto v = fixes.x_value(idx, m);
        if (!v)
            kept.push_back(idx);
        else if (*v == 1)
            alpha = std::max<std::int64_t>(0, alpha - 1);
    }
    const bool changed = kept.size() != t.members.size();
    t.members = std::move(kept);
    t.alpha = alpha;
    return changed;
}

}  // namespace detail

struct FixAndPruneResult {
    Assignment fixes;
    CutFamily family;
};

// Turns saturated cuts into variable fixes and rewrites the family against
// them, cascading until stable:
//   - a singleton ({i}, alpha >= 1) and, generally, any triple with
//     alpha = |I| fixes x_i = 1 for all members (and complements to 0);
//   - rewritten triples that end empty, or with alpha = 0 and beta = 0,
//     are removed as redundant; beta is re-clamped to |I| - alpha - 1;
//   - alpha > |I| after a rewrite means some certificate or eta was wrong:
//     Contradiction.
inline FixAndPruneResult fix_and_prune(const CutFamily& family,
                                       const Assignment& fixes, int m) {
    FixAndPruneResult out{fixes, family};
    auto& fam = out.family;

    for (;;) {
        // rewrite pass against the full current assignment
        std::map<IndexSet, CutTriple> rewritten;
        for (auto& t : fam.entries) {
            CutTriple r = t;
            const bool changed = detail::rewrite_triple(r, out.fixes, m);
            if (r.alpha > r.size())
                throw Contradiction(
                    "cut requires more ones than remaining members");
            if (r.members.empty()) continue;
            if (r.alpha < r.size())
                r.beta = std::min(r.beta,
                                  std::max<std::int64_t>(0, r.size() - r.alpha - 1));
            if (changed && r.alpha == 0 && r.beta == 0) continue;  // redundant
            // two triples may rewrite to the same set: keep the strongest
            auto [it, inserted] = rewritten.try_emplace(r.members, r);
            if (!inserted &&
                std::pair{r.alpha, r.beta} >
                    std::pair{it->second.alpha, it->second.beta})
                it->second = r;
        }
        fam.entries.clear();
        fam.entries.reserve(rewritten.size());
        for (auto& [key, t] : rewritten) fam.entries.push_back(std::move(t));

        // saturated triples force every member to 1
        bool fixed_any = false;
        for (const auto& t : fam.entries) {
            if (!t.saturated()) continue;
            for (Index idx : t.members) out.fixes.fix_x(idx, m, 1);
            fixed_any = true;
        }
        if (!fixed_any) break;
    }
    return out;
}

}  // namespace scit
