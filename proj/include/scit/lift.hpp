#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <vector>

#include "scit/model.hpp"

namespace scit {

// Sparse symmetric matrix: each entry (i, j, c) sets A_ij = A_ji = c.
// The Frobenius inner product therefore counts off-diagonal entries twice.
struct SymEntry {
    int i = 0, j = 0;
    double c = 0.0;
};

struct SparseSym {
    std::vector<SymEntry> entries;

    double dot(const Eigen::MatrixXd& X) const {
        double acc = 0.0;
        for (const auto& e : entries)
            acc += e.i == e.j ? e.c * X(e.i, e.i) : 2.0 * e.c * X(e.i, e.j);
        return acc;
    }

    // Exact inner product against an integer matrix; valid because all
    // coefficients used here are integers or halves.
    double dot_int(const IntMat& X) const {
        double acc = 0.0;
        for (const auto& e : entries)
            acc += e.i == e.j ? e.c * static_cast<double>(X(e.i, e.i))
                              : 2.0 * e.c * static_cast<double>(X(e.i, e.j));
        return acc;
    }

    void add_scaled(Eigen::MatrixXd& M, double s) const {
        for (const auto& e : entries) {
            M(e.i, e.j) += s * e.c;
            if (e.i != e.j) M(e.j, e.i) += s * e.c;
        }
    }

    double inner(const SparseSym& other) const {
        double acc = 0.0;
        for (const auto& a : entries)
            for (const auto& b : other.entries) {
                if ((a.i == b.i && a.j == b.j) || (a.i == b.j && a.j == b.i))
                    acc += (a.i == a.j ? 1.0 : 2.0) * a.c * b.c;
            }
        return acc;
    }

    Eigen::MatrixXd dense(int ell) const {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(ell, ell);
        add_scaled(M, 1.0);
        return M;
    }
};

struct LinearConstraint {
    SparseSym lhs;
    double rhs = 0.0;
};

// Homogenized matrix-space relaxation data. Index 0 of the lifted space is
// the homogenization coordinate; x occupies indices 1..2m, so lifted matrix
// indices coincide with 1-based slack-space indices.
struct LiftedProblem {
    int m = 0;
    int ell = 0;  // 1 + 2m
    IntMat Q;
    std::vector<LinearConstraint> equalities;

    // Exact trace of every feasible matrix: X_00 = 1 and sum_i X_ii = m.
    double trace_bound() const { return 1.0 + static_cast<double>(m); }
};

// Phi(x) = (1,x)(1,x)^T.
inline IntMat rank_one_lift(std::span<const int> x) {
    const int n = static_cast<int>(x.size());
    Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> h(n + 1);
    h(0) = 1;
    for (int i = 0; i < n; ++i) h(i + 1) = x[i];
    return h * h.transpose();
}

inline std::int64_t inner_int(const IntMat& A, const IntMat& B) {
    std::int64_t acc = 0;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) acc += A(i, j) * B(i, j);
    return acc;
}

// Builds the lifted problem over S^ell, ell = 1 + 2m: R embedded on the
// u-block of Q, Q_00 = constant, and the equality list
//   X_00 = 1,
//   X_ii = X_0i                (i = 1..2m),
//   X_0i + X_0,m+i = 1         (i = 1..m),
//   X_{i,m+i} = 0              (i = 1..m).
// <Q, Phi(x)> = u^T R u + constant holds exactly for every binary x.
inline LiftedProblem lift_qubo(const QuboInstance& inst) {
    inst.validate();
    const int m = inst.m;
    LiftedProblem lp;
    lp.m = m;
    lp.ell = 1 + 2 * m;
    lp.Q = IntMat::Zero(lp.ell, lp.ell);
    lp.Q(0, 0) = inst.constant;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) lp.Q(1 + i, 1 + j) = inst.R(i, j);

    lp.equalities.reserve(1 + 4 * m);
    lp.equalities.push_back({SparseSym{{{0, 0, 1.0}}}, 1.0});
    for (int i = 1; i <= 2 * m; ++i)
        lp.equalities.push_back({SparseSym{{{i, i, 1.0}, {0, i, -0.5}}}, 0.0});
    for (int i = 1; i <= m; ++i)
        lp.equalities.push_back(
            {SparseSym{{{0, i, 0.5}, {0, m + i, 0.5}}}, 1.0});
    for (int i = 1; i <= m; ++i)
        lp.equalities.push_back({SparseSym{{{i, m + i, 0.5}}}, 0.0});
    return lp;
}

enum class CutSense {
    Le,  // <= alpha
    Ge,  // >= alpha + 1
};

// Linear cut lifted to the matrix space via the diagonal (X_ii = x_i under
// the diagonal-linking equalities), so all entries stay integer and
// <G, Phi(x*)> is an integer for every binary x*.
struct MatrixCut {
    SparseSym G;
    std::int64_t alpha = 0;
    CutSense sense = CutSense::Ge;

    double threshold() const {
        return sense == CutSense::Le ? static_cast<double>(alpha)
                                     : static_cast<double>(alpha + 1);
    }
};

inline MatrixCut embed_linear_cut(int m, const IndexSet& I, std::int64_t alpha,
                                  CutSense sense) {
    if (I.empty())
        throw Error("embed_linear_cut: empty index set");
    MatrixCut cut;
    cut.alpha = alpha;
    cut.sense = sense;
    cut.G.entries.reserve(I.size());
    for (Index i : I) {
        if (i < 1 || i > 2 * m)
            throw Error("embed_linear_cut: index out of range");
        cut.G.entries.push_back({i, i, 1.0});
    }
    return cut;
}

}  // namespace scit
