#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "risopt/conic.hpp"

namespace risopt {

double qcqp_violation(const ConvexQcqp& prob, const VectorXd& x) {
    // signed: negative values report the worst-case slack of a feasible point
    double v = -std::numeric_limits<double>::infinity();
    for (const auto& c : prob.constraints) v = std::max(v, c.eval(x));
    return prob.constraints.empty() ? 0.0 : v;
}

namespace {

constexpr double kGapTol = 1e-10;  // duality gap at exit (scaled units)
constexpr double kTStep = 20.0;
constexpr int kMaxNewton = 100;
constexpr int kMaxTRounds = 60;
// interior margin below which a start point is too boundary-glued for the
// barrier Hessian; phase 1 re-centers such starts
constexpr double kInteriorMargin = 1e-2;

// decrement threshold scaled with t (chasing machine precision at large t
// only stalls in rounding noise) but capped where the gap bound still holds
double newton_tol(double t) { return std::min(1e-4, 1e-12 * std::max(1.0, t)); }

double phase1_barrier(const ConvexQcqp& prob, const VectorXd& x, double s, double t) {
    double f = t * s;
    for (const auto& c : prob.constraints) {
        const double slack = s - c.eval(x);
        if (slack <= 0.0) return std::numeric_limits<double>::infinity();
        f -= std::log(slack);
    }
    return f;
}

double phase2_barrier(const ConvexQcqp& prob, const VectorXd& x, double t) {
    double f = t * (x.dot(prob.p0 * x) + prob.q0.dot(x) + prob.r0);
    for (const auto& c : prob.constraints) {
        const double slack = -c.eval(x);
        if (slack <= 0.0) return std::numeric_limits<double>::infinity();
        f -= std::log(slack);
    }
    return f;
}

// Solves H dx = -g with escalating diagonal regularization.
bool solve_newton(MatrixXd h, const VectorXd& g, VectorXd& dx) {
    const double base = 1.0 + h.diagonal().cwiseAbs().maxCoeff();
    double jitter = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        Eigen::LLT<MatrixXd> llt(h);
        if (llt.info() == Eigen::Success) {
            dx = llt.solve(-g);
            if (dx.allFinite()) return true;
        }
        jitter = jitter == 0.0 ? 1e-13 * base : jitter * 100.0;
        h.diagonal().array() += jitter;
    }
    return false;
}

struct Phase1Outcome {
    VectorXd x;
    bool strictly_feasible = false;
    bool certified_infeasible = false;
    bool numerical_failure = false;
    int newton_steps = 0;
};

// min s  s.t. f_i(x) <= s; declares infeasibility when the optimum is
// provably positive.
Phase1Outcome phase1(const ConvexQcqp& prob, const VectorXd& hint) {
    Phase1Outcome out;
    const int n = prob.dim;
    const int m = static_cast<int>(prob.constraints.size());
    VectorXd x = hint;
    double maxf = qcqp_violation(prob, x);
    if (maxf < -kInteriorMargin) {
        out.x = x;
        out.strictly_feasible = true;
        return out;
    }
    double s = maxf + 1.0 + 0.1 * std::abs(maxf);

    double t = 1.0;
    for (int round = 0; round < kMaxTRounds; ++round) {
        for (int it = 0; it < kMaxNewton; ++it) {
            VectorXd g = VectorXd::Zero(n + 1);
            MatrixXd h = MatrixXd::Zero(n + 1, n + 1);
            g(n) = t;
            for (const auto& c : prob.constraints) {
                const double slack = s - c.eval(x);
                const VectorXd gi = 2.0 * (c.p * x) + c.q;
                const double inv = 1.0 / slack;
                g.head(n) += inv * gi;
                g(n) -= inv;
                h.topLeftCorner(n, n) += inv * 2.0 * c.p + inv * inv * gi * gi.transpose();
                h.col(n).head(n) -= inv * inv * gi;
                h.row(n).head(n) -= inv * inv * gi.transpose();
                h(n, n) += inv * inv;
            }
            VectorXd dz;
            if (!solve_newton(h, g, dz)) {
                out.numerical_failure = true;
                out.x = x;
                return out;
            }
            ++out.newton_steps;
            const double decrement2 = -g.dot(dz);
            if (decrement2 / 2.0 < newton_tol(t)) break;

            double alpha = 1.0;
            const VectorXd dx = dz.head(n);
            const double ds = dz(n);
            const double f0 = phase1_barrier(prob, x, s, t);
            const double slope = g.dot(dz);
            for (int ls = 0; ls < 80; ++ls) {
                const VectorXd xn = x + alpha * dx;
                const double sn = s + alpha * ds;
                if (phase1_barrier(prob, xn, sn, t) <= f0 + 0.25 * alpha * slope) {
                    x = xn;
                    s = sn;
                    break;
                }
                alpha *= 0.5;
            }
            maxf = qcqp_violation(prob, x);
            if (maxf < -kInteriorMargin) {
                out.x = x;
                out.strictly_feasible = true;
                return out;
            }
        }
        if (m / t < 1e-10) break;
        t *= kTStep;
    }
    maxf = qcqp_violation(prob, x);
    if (maxf < -1e-12) {
        out.x = x;
        out.strictly_feasible = true;
    } else if (s - m / t > 0.0) {
        out.certified_infeasible = true;
        out.x = x;
    } else {
        out.numerical_failure = true;  // cannot certify either way
        out.x = x;
    }
    return out;
}

}  // namespace

ConicSolution solve_power_subproblem(const ConvexQcqp& prob, const VectorXd& hint, double tol) {
    ConicSolution sol;
    const int n = prob.dim;
    const int m = static_cast<int>(prob.constraints.size());
    VectorXd x = hint.size() == n ? hint : VectorXd::Zero(n);

    if (m == 0) {
        // unconstrained quadratic minimum
        MatrixXd h = 2.0 * prob.p0;
        h.diagonal().array() += 1e-14 * (1.0 + h.diagonal().cwiseAbs().maxCoeff());
        Eigen::LLT<MatrixXd> llt(h);
        if (llt.info() != Eigen::Success) return sol;
        sol.x = llt.solve(-prob.q0);
        sol.status = ConicStatus::Optimal;
        sol.objective = sol.x.dot(prob.p0 * sol.x) + prob.q0.dot(sol.x) + prob.r0;
        return sol;
    }

    // cheap interior search before the general phase 1: a boundary-hugging
    // warm start usually becomes comfortably interior under a small radial
    // rescale, and phase 2 behaves far better from a nearby start
    if (x.size() == n && qcqp_violation(prob, x) >= -kInteriorMargin) {
        for (double delta : {0.02, -0.02, 0.05, -0.05, 0.1, -0.1, 0.2, -0.2}) {
            const VectorXd candidate = (1.0 + delta) * x;
            if (qcqp_violation(prob, candidate) < -kInteriorMargin) {
                x = candidate;
                break;
            }
        }
    }

    Phase1Outcome p1 = phase1(prob, x);
    sol.iterations += p1.newton_steps;
    if (std::getenv("RISOPT_QCQP_DEBUG"))
        std::fprintf(stderr, "[qcqp] phase1: steps=%d strict=%d cert_inf=%d numfail=%d maxf=%.3e\n",
                     p1.newton_steps, p1.strictly_feasible, p1.certified_infeasible,
                     p1.numerical_failure, qcqp_violation(prob, p1.x));
    if (p1.certified_infeasible) {
        sol.status = ConicStatus::Infeasible;
        sol.x = p1.x;
        sol.max_violation = qcqp_violation(prob, p1.x);
        return sol;
    }
    if (!p1.strictly_feasible) {
        sol.x = p1.x;
        sol.max_violation = qcqp_violation(prob, p1.x);
        return sol;  // NumericalFailure
    }
    x = p1.x;

    double t = 1.0;
    for (int round = 0; round < kMaxTRounds; ++round) {
        for (int it = 0; it < kMaxNewton; ++it) {
            VectorXd g = t * (2.0 * (prob.p0 * x) + prob.q0);
            MatrixXd h = t * 2.0 * prob.p0;
            for (const auto& c : prob.constraints) {
                const double inv = 1.0 / (-c.eval(x));
                const VectorXd gi = 2.0 * (c.p * x) + c.q;
                g += inv * gi;
                h += inv * 2.0 * c.p + inv * inv * gi * gi.transpose();
            }
            VectorXd dx;
            if (!solve_newton(h, g, dx)) return sol;
            ++sol.iterations;
            const double decrement2 = -g.dot(dx);
            if (decrement2 / 2.0 < newton_tol(t)) break;

            double alpha = 1.0;
            bool moved = false;
            const double f0 = phase2_barrier(prob, x, t);
            const double slope = g.dot(dx);
            for (int ls = 0; ls < 80; ++ls) {
                const VectorXd xn = x + alpha * dx;
                if (phase2_barrier(prob, xn, t) <= f0 + 0.25 * alpha * slope) {
                    x = xn;
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (std::getenv("RISOPT_QCQP_DEBUG"))
                std::fprintf(stderr, "[qcqp2] t=%.1e it=%d dec2=%.2e alpha=%.1e obj=%.10g\n", t,
                             it, decrement2, moved ? alpha : -1.0,
                             x.dot(prob.p0 * x) + prob.q0.dot(x) + prob.r0);
            if (!moved) break;
        }
        if (m / t < kGapTol) break;
        t *= kTStep;
    }

    sol.x = x;
    sol.status = ConicStatus::Optimal;
    sol.objective = x.dot(prob.p0 * x) + prob.q0.dot(x) + prob.r0;
    sol.max_violation = qcqp_violation(prob, x);
    if (sol.max_violation > tol) sol.status = ConicStatus::NumericalFailure;
    return sol;
}

}  // namespace risopt
