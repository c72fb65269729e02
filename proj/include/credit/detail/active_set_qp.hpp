#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "../error.hpp"

namespace credit::detail {

/// minimise 1/2 x'Hx - g'x  s.t.  A_eq x = b_eq,  A_in x >= b_in.
struct QpProblem {
    Eigen::MatrixXd hessian;
    Eigen::VectorXd linear;
    Eigen::MatrixXd eq;
    Eigen::VectorXd eq_rhs;
    Eigen::MatrixXd ineq;
    Eigen::VectorXd ineq_rhs;
};

struct QpSolution {
    Eigen::VectorXd x;
    /// Indices of inequality rows active at the solution.
    std::vector<int> active;
    int iterations = 0;
};

/// Primal active-set method started from a feasible point. H must be
/// positive definite on the null space of the equality rows.
inline QpSolution solve_qp(const QpProblem& p, Eigen::VectorXd x, int max_iter = 500) {
    const Eigen::Index n = x.size();
    const Eigen::Index m_eq = p.eq.rows();
    const Eigen::Index m_in = p.ineq.rows();
    const double feas_tol = 1e-12;

    for (Eigen::Index i = 0; i < m_in; ++i) {
        if (p.ineq.row(i).dot(x) < p.ineq_rhs(i) - feas_tol) {
            throw FitError("starting point violates inequality constraint " + std::to_string(i));
        }
    }

    std::vector<int> working;
    QpSolution out;
    // after an unblocked full step x minimises over the working set
    bool at_minimum = false;
    for (int iter = 0; iter < max_iter; ++iter) {
        out.iterations = iter + 1;
        const Eigen::Index m = m_eq + static_cast<Eigen::Index>(working.size());
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + m, n + m);
        Eigen::MatrixXd a(m, n);
        if (m_eq > 0) a.topRows(m_eq) = p.eq;
        for (std::size_t w = 0; w < working.size(); ++w) a.row(m_eq + static_cast<Eigen::Index>(w)) = p.ineq.row(working[w]);
        kkt.topLeftCorner(n, n) = p.hessian;
        kkt.topRightCorner(n, m) = -a.transpose();
        kkt.bottomLeftCorner(m, n) = a;
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
        rhs.head(n) = p.linear - p.hessian * x;

        const Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
        if (!lu.isInvertible()) throw FitError("singular KKT system in constrained fit");
        const Eigen::VectorXd sol = lu.solve(rhs);
        const Eigen::VectorXd step = sol.head(n);
        const Eigen::VectorXd lambda = sol.tail(m);

        const double scale = 1.0 + x.lpNorm<Eigen::Infinity>();
        if (at_minimum || step.lpNorm<Eigen::Infinity>() <= 1e-13 * scale) {
            int worst = -1;
            double most_negative = -1e-12;
            for (std::size_t w = 0; w < working.size(); ++w) {
                const double l = lambda(m_eq + static_cast<Eigen::Index>(w));
                if (l < most_negative) {
                    most_negative = l;
                    worst = static_cast<int>(w);
                }
            }
            if (worst < 0) {
                out.x = x;
                out.active = working;
                std::sort(out.active.begin(), out.active.end());
                return out;
            }
            working.erase(working.begin() + worst);
            at_minimum = false;
            continue;
        }

        double alpha = 1.0;
        int blocking = -1;
        for (Eigen::Index i = 0; i < m_in; ++i) {
            if (std::find(working.begin(), working.end(), static_cast<int>(i)) != working.end()) continue;
            const double ap = p.ineq.row(i).dot(step);
            if (ap >= -1e-15) continue;
            const double room = std::max(0.0, p.ineq.row(i).dot(x) - p.ineq_rhs(i));
            const double t = room / -ap;
            if (t < alpha) {
                alpha = t;
                blocking = static_cast<int>(i);
            }
        }
        x += alpha * step;
        at_minimum = blocking < 0;
        if (blocking >= 0) working.push_back(blocking);
    }
    throw ConvergenceError("active-set solver did not converge");
}

} // namespace credit::detail
