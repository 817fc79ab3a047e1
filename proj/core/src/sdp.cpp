#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "risopt/conic.hpp"

// Dual barrier method for the small unit-diagonal SDPs of the phase step.
//
// Primal:  min Re<C,Psi>  s.t.  Re<A_j,Psi> >= b_j,  Psi_nn = 1,  Psi >= 0,
// dual:    max b'y + 1'nu  s.t.  S = C - sum_j y_j A_j - diag(nu) >= 0, y >= 0.
//
// The dual has K + n scalar variables for an n x n matrix, so Newton steps
// stay cheap, and the primal iterate recovered from the central point,
// Psi = mu * S^-1, is positive definite by construction. In slack mode the
// objective is replaced by an auxiliary margin variable s entering each
// inequality, which adds one linear equality on y to the dual.

namespace risopt {

namespace {

double inner(const MatrixXcd& a, const MatrixXcd& b) {
    // Re tr(a b) for Hermitian a, b
    return a.cwiseProduct(b.transpose()).sum().real();
}

double logdet(const Eigen::LLT<MatrixXcd>& llt) {
    double v = 0.0;
    const auto& l = llt.matrixLLT();
    for (int i = 0; i < l.rows(); ++i) v += std::log(l(i, i).real());
    return 2.0 * v;
}

}  // namespace

double phase_sdp_violation(const PhaseSdp& prob, const MatrixXcd& psi, double slack) {
    double v = 0.0;
    for (int n = 0; n < prob.dim; ++n) v = std::max(v, std::abs(psi(n, n).real() - 1.0));
    for (const auto& row : prob.inequalities) {
        const double rhs = row.b + (prob.maximize_slack ? row.slack_coeff * slack : 0.0);
        v = std::max(v, rhs - inner(row.a, psi));
    }
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(psi, Eigen::EigenvaluesOnly);
    v = std::max(v, -es.eigenvalues().minCoeff());
    return v;
}

PhaseSdpSolution solve_phase_sdp(const PhaseSdp& prob, double tol) {
    PhaseSdpSolution sol;
    const int n = prob.dim;
    const int mi = static_cast<int>(prob.inequalities.size());
    if (n < 1) throw DomainError("solve_phase_sdp: empty matrix");
    if (prob.maximize_slack && mi == 0)
        throw DomainError("solve_phase_sdp: slack mode needs at least one inequality");

    double scale = 1.0;
    MatrixXcd c_obj = MatrixXcd::Zero(n, n);
    if (!prob.maximize_slack) {
        c_obj = 0.5 * (prob.objective + prob.objective.adjoint());
        scale = std::max(scale, c_obj.norm());
    }
    // balance every row to unit size; the slack coefficient scales along, so
    // the recovered margin keeps its caller-side units
    std::vector<TraceInequality> rows(prob.inequalities);
    for (auto& row : rows) {
        if (prob.maximize_slack && !(row.slack_coeff > 0.0))
            throw DomainError("solve_phase_sdp: slack coefficients must be positive");
        const double s = 1.0 / std::max({row.a.norm(), std::abs(row.b), 1e-300});
        row.a *= s;
        row.b *= s;
        row.slack_coeff *= s;
        scale = std::max(scale, std::abs(row.b));
    }

    // dual starting point: small y (on the equality manifold in slack mode),
    // nu pushed down until S is comfortably positive definite
    VectorXd y(mi);
    for (int j = 0; j < mi; ++j) y(j) = prob.maximize_slack ? 1.0 / (mi * rows[j].slack_coeff) : 0.1;
    MatrixXcd z = c_obj;
    for (int j = 0; j < mi; ++j) z -= y(j) * rows[j].a;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es0(z, Eigen::EigenvaluesOnly);
    const double floor_shift = es0.eigenvalues().minCoeff() - std::max(1.0, 0.1 * z.norm());
    VectorXd nu = VectorXd::Constant(n, floor_shift);

    auto assemble_s = [&](const VectorXd& yy, const VectorXd& nn) {
        MatrixXcd s = c_obj;
        for (int j = 0; j < mi; ++j) s -= yy(j) * rows[j].a;
        s -= nn.asDiagonal().toDenseMatrix().cast<cxd>();
        return s;
    };
    auto dual_obj = [&](const VectorXd& yy, const VectorXd& nn) {
        double v = nn.sum();
        for (int j = 0; j < mi; ++j) v += yy(j) * rows[j].b;
        return v;
    };

    // mu floor set by the duality-gap target; pushing mu further only trades
    // gap for S-conditioning, and the recovered primal mu * S^-1 degrades
    // like eps * cond(S)
    const double mu_final = 1e-6 * scale / (n + mi);
    double mu = scale;
    Eigen::LLT<MatrixXcd> llt(assemble_s(y, nu));
    if (llt.info() != Eigen::Success) return sol;  // should not happen from the shifted start

    const int dim_newton = mi + n;
    VectorXd best_y = y, best_nu = nu;
    double best_diag_err = std::numeric_limits<double>::infinity();
    int no_improve = 0;
    while (true) {
        const bool final_pass = mu <= mu_final;
        for (int it = 0; it < (final_pass ? 30 : 40); ++it) {
            MatrixXcd t_mat = llt.solve(MatrixXcd::Identity(n, n));
            // one step of iterative refinement; the inverse drives both the
            // gradient and the recovered primal, so its accuracy is the
            // accuracy of everything downstream
            t_mat += llt.solve(MatrixXcd::Identity(n, n) - assemble_s(y, nu) * t_mat);
            t_mat = 0.5 * (t_mat + t_mat.adjoint()).eval();

            // gradient
            VectorXd g(dim_newton);
            std::vector<MatrixXcd> w(mi);
            for (int j = 0; j < mi; ++j) {
                w[j] = t_mat * rows[j].a;
                g(j) = rows[j].b - mu * w[j].trace().real() + mu / y(j);
            }
            for (int i = 0; i < n; ++i) g(mi + i) = 1.0 - mu * t_mat(i, i).real();

            // negative Hessian (positive definite)
            MatrixXd m(dim_newton, dim_newton);
            for (int j = 0; j < mi; ++j) {
                for (int l = j; l < mi; ++l) {
                    const double v = mu * w[j].transpose().cwiseProduct(w[l]).sum().real();
                    m(j, l) = v;
                    m(l, j) = v;
                }
                m(j, j) += mu / (y(j) * y(j));
                const MatrixXcd wt = w[j] * t_mat;
                for (int i = 0; i < n; ++i) {
                    m(j, mi + i) = mu * wt(i, i).real();
                    m(mi + i, j) = m(j, mi + i);
                }
            }
            for (int i = 0; i < n; ++i)
                for (int l = i; l < n; ++l) {
                    const double v = mu * std::norm(t_mat(i, l));
                    m(mi + i, mi + l) = v;
                    m(mi + l, mi + i) = v;
                }

            Eigen::LLT<MatrixXd> mllt(m);
            if (mllt.info() != Eigen::Success) {
                m.diagonal().array() += 1e-12 * (1.0 + m.diagonal().maxCoeff());
                mllt.compute(m);
                if (mllt.info() != Eigen::Success) return sol;
            }
            VectorXd step = mllt.solve(g);
            if (prob.maximize_slack) {
                // keep sum_j y_j * slack_coeff_j = 1 along the step
                VectorXd a = VectorXd::Zero(dim_newton);
                for (int j = 0; j < mi; ++j) a(j) = rows[j].slack_coeff;
                const VectorXd ma = mllt.solve(a);
                const double lambda = a.dot(step) / a.dot(ma);
                step -= lambda * ma;
            }
            ++sol.iterations;

            const double decrement2 = g.dot(step);
            // the nu-gradient is exactly the unit-diagonal error of the
            // recovered primal (it vanishes at the central point in both
            // modes), so it is the natural final-pass residual
            const double diag_err = g.tail(n).cwiseAbs().maxCoeff();
            if (final_pass) {
                if (diag_err < 0.5 * best_diag_err) {
                    best_diag_err = diag_err;
                    best_y = y;
                    best_nu = nu;
                    no_improve = 0;
                } else if (diag_err < best_diag_err) {
                    best_diag_err = diag_err;
                    best_y = y;
                    best_nu = nu;
                    ++no_improve;
                } else {
                    ++no_improve;
                }
                if (diag_err < 1e-9 || no_improve >= 5) break;
            } else if (decrement2 / 2.0 < 1e-8 * std::max(1.0, mu)) {
                break;
            }

            // backtracking: stay dual-interior, require barrier increase
            const double phi0 = dual_obj(y, nu) + mu * logdet(llt) + mu * y.array().log().sum();
            double alpha = 1.0;
            bool moved = false;
            for (int ls = 0; ls < 60; ++ls) {
                const VectorXd yn = y + alpha * step.head(mi);
                const VectorXd nn = nu + alpha * step.tail(n);
                if ((yn.array() > 0.0).all()) {
                    Eigen::LLT<MatrixXcd> ln(assemble_s(yn, nn));
                    if (ln.info() == Eigen::Success) {
                        const double phi =
                            dual_obj(yn, nn) + mu * logdet(ln) + mu * yn.array().log().sum();
                        if (phi >= phi0 + 0.25 * alpha * decrement2) {
                            y = yn;
                            nu = nn;
                            llt = ln;
                            moved = true;
                            break;
                        }
                    }
                }
                alpha *= 0.5;
                if (alpha < 1e-13) break;
            }
            if (std::getenv("RISOPT_SDP_DEBUG"))
                std::fprintf(stderr,
                             "[sdp] mu=%.2e it=%d dec2=%.2e ginf=%.2e moved=%d obj=%.6e\n", mu,
                             it, decrement2, diag_err, static_cast<int>(moved),
                             dual_obj(y, nu));
            if (!moved) break;
            if (dual_obj(y, nu) > 1e10 * scale) {
                sol.status = ConicStatus::Infeasible;
                return sol;
            }
        }
        if (final_pass) break;
        mu = std::max(mu * 0.2, mu_final);
    }

    // primal recovery from the best-centered point seen at the final mu
    Eigen::LLT<MatrixXcd> llt_best(assemble_s(best_y, best_nu));
    if (llt_best.info() != Eigen::Success) llt_best = llt;
    MatrixXcd t_mat = llt_best.solve(MatrixXcd::Identity(n, n));
    t_mat += llt_best.solve(MatrixXcd::Identity(n, n) - assemble_s(best_y, best_nu) * t_mat);
    MatrixXcd psi = mu_final * t_mat;
    psi = 0.5 * (psi + psi.adjoint()).eval();
    // exact unit diagonal: congruence by the diagonal scaling keeps the
    // matrix PSD and only perturbs the trace rows at the leftover-error level
    VectorXd d = psi.diagonal().real();
    if ((d.array() > 0.0).all()) {
        const VectorXd rescale = d.array().rsqrt();
        psi = (rescale.asDiagonal() * psi * rescale.asDiagonal()).eval();
        for (int i = 0; i < n; ++i) psi(i, i) = 1.0;
    }
    sol.psi = psi;

    if (prob.maximize_slack) {
        double s_ach = std::numeric_limits<double>::infinity();
        for (const auto& row : prob.inequalities)
            s_ach = std::min(s_ach, (inner(row.a, psi) - row.b) / row.slack_coeff);
        sol.slack = s_ach;
        sol.objective = s_ach;
    } else {
        sol.objective = inner(c_obj, psi);
    }
    sol.max_violation = phase_sdp_violation(prob, psi, sol.slack);
    sol.status = sol.max_violation <= tol ? ConicStatus::Optimal : ConicStatus::NumericalFailure;
    return sol;
}

}  // namespace risopt
