#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "scit/lift.hpp"
#include "scit/relax.hpp"

namespace scit {

// Nearest (Frobenius) positive semidefinite matrix: eigendecompose, clamp
// negative eigenvalues to zero, reassemble.
inline Eigen::MatrixXd project_psd(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success)
        throw EigenFailure("project_psd: eigensolver did not converge");
    Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0);
    Eigen::MatrixXd P =
        es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
    return 0.5 * (P + P.transpose());
}

// xbar_i = clamp(X_ii, 0, 1) for i = 1..2m (index 0 is the homogenization
// coordinate).
inline Eigen::VectorXd extract_xbar(const Eigen::MatrixXd& X) {
    const int n = static_cast<int>(X.rows()) - 1;
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i)
        x(i) = std::clamp(X(i + 1, i + 1), 0.0, 1.0);
    return x;
}

// Lemma-2 test: a certified bound of the <=-probe exceeding eta strictly
// certifies the >=(alpha+1) direction for Phi(x*). An infeasible probe
// (bound = +inf) also certifies it.
inline bool validate_matrix_cut(double bound_a, std::int64_t eta) {
    return static_cast<double>(eta) < bound_a;
}

struct DnnConfig {
    int max_sweeps = 2000;
    double primal_tol = 1e-7;
    double eps_eig = 1e-9;  // absolute slack absorbing eigensolver fp error
    int cert_interval = 100;
    double sigma0 = 0.0;  // 0 = scale-based default
    bool adapt_sigma = true;
};

// One relaxation subproblem: the lifted problem, the family's >=-cuts with
// alpha >= 1, and at most one <=-probe cut.
struct RelaxationQuery {
    LiftedProblem lifted;
    std::vector<MatrixCut> active_cuts;
    DnnConfig budget;

    void validate() const {
        int probes = 0;
        for (const auto& c : active_cuts)
            if (c.sense == CutSense::Le) ++probes;
        if (probes > 1)
            throw Error("RelaxationQuery: more than one probe cut");
    }
};

// Safe lower bound from any admissible dual candidate:
//   b^T y + tau * min(0, lambda_min(Q - sum_t y_t A_t) - eps_eig).
// A_t ranges over the equalities followed by the cut matrices; >=-cuts need
// nonnegative multipliers and <=-cuts nonpositive ones. Elementwise
// nonnegativity of the cone is dropped, which weakens but never invalidates
// the bound. tau must be the exact trace of every feasible matrix (1 + m).
inline double safe_lower_bound(const Eigen::VectorXd& dual,
                               const RelaxationQuery& query, double tau,
                               double eps_eig = 1e-9) {
    const auto& lp = query.lifted;
    const int P = static_cast<int>(lp.equalities.size());
    const int C = static_cast<int>(query.active_cuts.size());
    if (dual.size() != P + C)
        throw Error("safe_lower_bound: dual has wrong length");
    for (int j = 0; j < C; ++j) {
        const double z = dual(P + j);
        if (query.active_cuts[j].sense == CutSense::Ge && z < 0.0)
            throw SignViolation("safe_lower_bound: >=-cut multiplier < 0");
        if (query.active_cuts[j].sense == CutSense::Le && z > 0.0)
            throw SignViolation("safe_lower_bound: <=-cut multiplier > 0");
    }

    Eigen::MatrixXd M = lp.Q.cast<double>();
    double dot = 0.0;
    for (int p = 0; p < P; ++p) {
        lp.equalities[p].lhs.add_scaled(M, -dual(p));
        dot += dual(p) * lp.equalities[p].rhs;
    }
    for (int j = 0; j < C; ++j) {
        query.active_cuts[j].G.add_scaled(M, -dual(P + j));
        dot += dual(P + j) * query.active_cuts[j].threshold();
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M,
                                                      Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw EigenFailure("safe_lower_bound: eigensolver did not converge");
    const double lam = es.eigenvalues().minCoeff();
    return dot + tau * std::min(0.0, lam - eps_eig);
}

namespace detail {

// Dual augmented-Lagrangian splitting for
//   min <Q,X>  s.t.  <A_p,X> = b_p,  <G_j,X> - s_j t_j = c_j,
//                    X psd (and elementwise nonnegative), t >= 0,
// alternating between the affine block (one SPD solve against the constant
// Gram matrix B B*) and the cone block (PSD projection plus clamps). The
// primal multiplier W approximates X; the dual iterate y feeds the
// certificate.
class DnnSolver {
public:
    explicit DnnSolver(const RelaxationQuery& query) : q_(query) {
        q_.validate();
        const auto& lp = q_.lifted;
        ell_ = lp.ell;
        P_ = static_cast<int>(lp.equalities.size());
        C_ = static_cast<int>(q_.active_cuts.size());
        N_ = P_ + C_;
        Qd_ = lp.Q.cast<double>();
        qnorm_ = Qd_.norm();
        tau_ = lp.trace_bound();

        rows_.reserve(N_);
        rhs_.resize(N_);
        for (int p = 0; p < P_; ++p) {
            rows_.push_back(&lp.equalities[p].lhs);
            rhs_(p) = lp.equalities[p].rhs;
        }
        slack_sign_.resize(C_);
        for (int j = 0; j < C_; ++j) {
            rows_.push_back(&q_.active_cuts[j].G);
            rhs_(P_ + j) = q_.active_cuts[j].threshold();
            slack_sign_[j] = q_.active_cuts[j].sense == CutSense::Ge ? 1.0
                                                                     : -1.0;
        }
        factorize_gram();
    }

    RelaxationResult solve(const DnnConfig& cfg) {
        init_state();
        const double sigma_floor = 1e-8, sigma_cap = 1e8;
        double sigma = cfg.sigma0 > 0.0
                           ? cfg.sigma0
                           : std::max(1.0, qnorm_) /
                                 std::max(1.0, rhs_.norm());

        double best = certificate(Eigen::VectorXd::Zero(N_), cfg.eps_eig);
        Eigen::VectorXd y = Eigen::VectorXd::Zero(N_);
        double prim_rel = std::numeric_limits<double>::infinity();
        double dual_rel = prim_rel;
        int sweep = 0;
        bool converged = false;

        Eigen::MatrixXd D(ell_, ell_), Bm(ell_, ell_), Xn(ell_, ell_);
        Eigen::VectorXd bw(N_), t_new(C_);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;

        for (sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
            // affine block: (B B*) y = (rhs - B(W))/sigma + B(Chat - V)
            apply_B(X_, t_, bw);
            Eigen::VectorXd ry = (rhs_ - bw) / sigma;
            apply_B(Qd_ - Vs_, -vt_, bw);
            ry += bw;
            y = llt_.solve(ry);

            // D = Chat - B*(y)
            D = Qd_;
            for (int r = 0; r < N_; ++r) rows_[r]->add_scaled(D, -y(r));

            // cone block: one eigendecomposition serves both projections
            Bm = D - X_ / sigma;
            es.compute(Bm);
            if (es.info() != Eigen::Success)
                throw EigenFailure("solve_dnn: eigensolver did not converge");
            // The iterate stays in the PSD cone only; the elementwise half
            // of the DNN cone is dropped here as in the certificate (a
            // clamp would break the splitting's complementarity and was
            // measurably worse) and reappears when xbar is clamped.
            Vs_ = es.eigenvectors() *
                  es.eigenvalues().cwiseMax(0.0).asDiagonal() *
                  es.eigenvectors().transpose();
            Vs_ = 0.5 * (Vs_ + Vs_.transpose());
            Xn = sigma * (Vs_ - Bm);

            double dt2 = 0.0;
            for (int j = 0; j < C_; ++j) {
                const double bt = slack_sign_[j] * y(P_ + j) - t_(j) / sigma;
                const double vt = std::max(0.0, bt);
                const double tn = sigma * (vt - bt);
                vt_(j) = vt;
                dt2 += (tn - t_(j)) * (tn - t_(j));
                t_new(j) = tn;
            }

            dual_rel = std::sqrt((Xn - X_).squaredNorm() + dt2) /
                       (sigma * (1.0 + qnorm_));
            X_.swap(Xn);
            t_ = t_new;
            apply_B(X_, t_, bw);
            prim_rel = (bw - rhs_).norm() / (1.0 + rhs_.norm());

            converged = prim_rel <= cfg.primal_tol;
            if (converged || sweep == cfg.max_sweeps ||
                (cfg.cert_interval > 0 && sweep % cfg.cert_interval == 0)) {
                best = std::max(best, certificate(y, cfg.eps_eig));
            }
            if (converged) break;

            // sigma penalizes the dual constraint: shrinking it favors
            // primal feasibility, growing it favors dual feasibility
            if (cfg.adapt_sigma && sweep % 25 == 0) {
                if (prim_rel > 10.0 * dual_rel)
                    sigma = std::max(sigma * 0.5, sigma_floor);
                else if (dual_rel > 10.0 * prim_rel)
                    sigma = std::min(sigma * 2.0, sigma_cap);
            }
        }

        RelaxationResult res;
        res.lower_bound = best;
        res.status = converged ? SolveStatus::CertifiedBound
                               : SolveStatus::BudgetExhausted;
        res.xbar = extract_xbar(X_);
        res.diagnostics = {prim_rel, dual_rel, std::min(sweep, cfg.max_sweeps)};
        return res;
    }

private:
    void factorize_gram() {
        // bucket shared coordinates so assembly is linear in total entries
        struct Hit {
            int row;
            double coeff;
        };
        std::unordered_map<std::int64_t, std::vector<Hit>> buckets;
        for (int r = 0; r < N_; ++r) {
            for (const auto& e : rows_[r]->entries) {
                const int i = std::min(e.i, e.j), j = std::max(e.i, e.j);
                buckets[static_cast<std::int64_t>(i) * ell_ + j].push_back(
                    {r, e.c});
            }
        }
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(N_, N_);
        for (const auto& [key, hits] : buckets) {
            const double w = (key / ell_ == key % ell_) ? 1.0 : 2.0;
            for (const auto& a : hits)
                for (const auto& b : hits)
                    gram(a.row, b.row) += w * a.coeff * b.coeff;
        }
        for (int j = 0; j < C_; ++j) gram(P_ + j, P_ + j) += 1.0;

        llt_.compute(gram);
        if (llt_.info() != Eigen::Success) {
            gram.diagonal().array() += 1e-10;
            llt_.compute(gram);
            if (llt_.info() != Eigen::Success)
                throw EigenFailure("solve_dnn: constraint Gram not SPD");
        }
    }

    void init_state() {
        const int m = q_.lifted.m;
        // expectation of Phi(x) under independent fair coins: feasible for
        // all structural equalities and strictly inside both cones
        X_ = Eigen::MatrixXd::Constant(ell_, ell_, 0.25);
        X_(0, 0) = 1.0;
        for (int i = 1; i <= 2 * m; ++i) {
            X_(0, i) = X_(i, 0) = 0.5;
            X_(i, i) = 0.5;
        }
        for (int i = 1; i <= m; ++i) X_(i, m + i) = X_(m + i, i) = 0.0;

        t_.resize(C_);
        for (int j = 0; j < C_; ++j) {
            const double g = rows_[P_ + j]->dot(X_);
            t_(j) = std::max(0.0, slack_sign_[j] * (g - rhs_(P_ + j)));
        }
        Vs_ = Eigen::MatrixXd::Zero(ell_, ell_);
        vt_ = Eigen::VectorXd::Zero(C_);
    }

    // B(X, t): equalities <A_p, X>, cut rows <G_j, X> - s_j t_j.
    void apply_B(const Eigen::MatrixXd& X, const Eigen::VectorXd& t,
                 Eigen::VectorXd& out) const {
        for (int r = 0; r < N_; ++r) out(r) = rows_[r]->dot(X);
        for (int j = 0; j < C_; ++j) out(P_ + j) -= slack_sign_[j] * t(j);
    }

    double certificate(const Eigen::VectorXd& y, double eps_eig) const {
        Eigen::VectorXd adm = y;
        for (int j = 0; j < C_; ++j) {
            double& z = adm(P_ + j);
            z = q_.active_cuts[j].sense == CutSense::Ge ? std::max(0.0, z)
                                                        : std::min(0.0, z);
        }
        return safe_lower_bound(adm, q_, tau_, eps_eig);
    }

    RelaxationQuery q_;
    int ell_ = 0, P_ = 0, C_ = 0, N_ = 0;
    Eigen::MatrixXd Qd_;
    double qnorm_ = 0.0, tau_ = 0.0;
    std::vector<const SparseSym*> rows_;
    Eigen::VectorXd rhs_;
    std::vector<double> slack_sign_;
    Eigen::LLT<Eigen::MatrixXd> llt_;

    Eigen::MatrixXd X_, Vs_;
    Eigen::VectorXd t_, vt_;
};

}  // namespace detail

inline RelaxationResult solve_dnn(const RelaxationQuery& query,
                                  const DnnConfig& config) {
    detail::DnnSolver solver(query);
    return solver.solve(config);
}

inline RelaxationResult solve_dnn(const RelaxationQuery& query) {
    return solve_dnn(query, query.budget);
}

class DnnBackend final : public Backend {
public:
    explicit DnnBackend(DnnConfig cfg = {}) : cfg_(cfg) {}

    RelaxationResult solve(const QuboInstance& inst,
                           std::span<const LinearCut> cuts) const override {
        RelaxationQuery q;
        q.lifted = lift_qubo(inst);
        q.budget = cfg_;
        q.active_cuts.reserve(cuts.size());
        for (const auto& c : cuts) {
            if (c.sense == CutSense::Ge)
                q.active_cuts.push_back(
                    embed_linear_cut(inst.m, c.members, c.level - 1,
                                     CutSense::Ge));
            else
                q.active_cuts.push_back(
                    embed_linear_cut(inst.m, c.members, c.level,
                                     CutSense::Le));
        }
        return solve_dnn(q, cfg_);
    }

private:
    DnnConfig cfg_;
};

}  // namespace scit
