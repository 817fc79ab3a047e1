#include "risopt/phase.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace risopt {

PhaseLinearForm phase_form_ris1(const ChannelSet& ch, const DerivedChannels& dc,
                                const RisState& ris, const Precoder& prec, int k, int i) {
    const double b1 = ris.ris1_amplitude, b2 = ris.ris2_amplitude;
    PhaseLinearForm form;
    const int n1 = static_cast<int>(ch.bs_to_ris1.cols());
    if (n1 > 0) {
        MatrixXcd mat = b1 * dc.via_ris1[k];  // M x N1
        if (ris.ris2_phases.size() > 0) {
            const VectorXcd weights = dc.cascade[k] * ris.ris2_phases;  // N1
            mat += (b1 * b2) * (ch.bs_to_ris1 * weights.asDiagonal());
        }
        form.coeff = mat.adjoint() * prec.beams[i];
    } else {
        form.coeff = VectorXcd(0);
    }
    if (ris.ris2_phases.size() > 0)
        form.constant = (b2 * (dc.via_ris2[k] * ris.ris2_phases)).dot(prec.beams[i]);
    return form;
}

PhaseLinearForm phase_form_ris2(const ChannelSet& ch, const DerivedChannels& dc,
                                const RisState& ris, const Precoder& prec, int k, int i) {
    const double b1 = ris.ris1_amplitude, b2 = ris.ris2_amplitude;
    PhaseLinearForm form;
    const int n2 = static_cast<int>(ch.bs_to_ris2.cols());
    if (n2 > 0) {
        MatrixXcd mat = b2 * dc.via_ris2[k];  // M x N2
        if (ris.ris1_phases.size() > 0)
            mat += (b1 * b2) *
                   (ch.bs_to_ris1 * ris.ris1_phases.asDiagonal() * dc.cascade[k]);
        form.coeff = mat.adjoint() * prec.beams[i];
    } else {
        form.coeff = VectorXcd(0);
    }
    if (ris.ris1_phases.size() > 0)
        form.constant = (b1 * (dc.via_ris1[k] * ris.ris1_phases)).dot(prec.beams[i]);
    return form;
}

MatrixXcd lift_rank_one(const PhaseLinearForm& form) {
    const int n = static_cast<int>(form.coeff.size());
    VectorXcd v(n + 1);
    v.head(n) = form.coeff;
    v(n) = form.constant;
    return v * v.adjoint();
}

MatrixXcd lift_phases(const VectorXcd& theta) {
    const int n = static_cast<int>(theta.size());
    VectorXcd v(n + 1);
    v.head(n) = theta;
    v(n) = 1.0;
    return v * v.adjoint();
}

namespace {

// deterministic eigenvector representative: first significant entry made
// real positive
VectorXcd normalize_eigvec(VectorXcd u) {
    const double norm = u.norm();
    for (int i = 0; i < u.size(); ++i) {
        if (std::abs(u(i)) > 1e-12 * norm) {
            u *= std::conj(u(i)) / std::abs(u(i));
            break;
        }
    }
    return u;
}

struct TopEig {
    double value;
    VectorXcd vec;
};

TopEig top_eig(const MatrixXcd& psi) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(psi);
    const auto n = psi.rows();
    return {es.eigenvalues()(n - 1), normalize_eigvec(es.eigenvectors().col(n - 1))};
}

}  // namespace

double penalty_value(const MatrixXcd& psi) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(psi, Eigen::EigenvaluesOnly);
    return psi.trace().real() - es.eigenvalues()(psi.rows() - 1);
}

double linearized_penalty(const MatrixXcd& psi, const MatrixXcd& psi_hat) {
    const TopEig top = top_eig(psi_hat);
    const cxd quad = top.vec.adjoint() * (psi - psi_hat) * top.vec;
    return psi.trace().real() - top.value - quad.real();
}

VectorXcd extract_phases(const MatrixXcd& psi) {
    if (psi.size() == 0 || psi.norm() == 0.0) throw DomainError("extract_phases: zero matrix");
    const TopEig top = top_eig(psi);
    const int n = static_cast<int>(psi.rows()) - 1;
    const cxd ref = top.vec(n);
    VectorXcd theta(n);
    if (std::abs(ref) > 1e-12 * top.vec.norm()) {
        for (int j = 0; j < n; ++j) {
            const cxd z = top.vec(j) / ref;
            theta(j) = std::abs(z) > 0.0 ? z / std::abs(z) : cxd(1.0, 0.0);
        }
    } else {
        // reference entry vanished; fall back to entrywise phases (the
        // normalized eigenvector already fixes the global phase)
        for (int j = 0; j < n; ++j) {
            const cxd z = top.vec(j);
            theta(j) = std::abs(z) > 0.0 ? z / std::abs(z) : cxd(1.0, 0.0);
        }
    }
    return theta;
}

PhaseSolveOutcome solve_phase_penalty(const PhaseSubproblem& sub, int side,
                                      const SystemConfig& cfg) {
    PhaseSolveOutcome out;
    out.lifted.side = side;
    const int users = static_cast<int>(sub.lifts.size());
    const int dim = static_cast<int>(sub.theta_init.size()) + 1;
    const MatrixXcd psi0 = lift_phases(sub.theta_init);
    out.lifted.psi = psi0;

    // one trace row per user: tr(A_k Psi) >= b_k, normalized by the current
    // interference level so margins are comparable across users
    std::vector<TraceInequality> rows(users);
    bool degenerate = true;
    for (int k = 0; k < users; ++k) {
        MatrixXcd a = sub.lifts[k][k];
        double interference0 = 0.0;
        for (int i = 0; i < users; ++i) {
            if (i == k) continue;
            a -= cfg.sinr_target * sub.lifts[k][i];
            interference0 += (sub.lifts[k][i].cwiseProduct(psi0.transpose())).sum().real();
        }
        const double c_k = cfg.sinr_target * (interference0 + sub.noise_w);
        rows[k].a = a / c_k;
        rows[k].b = cfg.sinr_target * sub.noise_w / c_k;
        rows[k].slack_coeff = 1.0;
        if (rows[k].a.norm() > 0.0) degenerate = false;
    }
    if (degenerate) return out;  // phases cannot move any constraint

    const double penalty_tol = cfg.penalty_tol_scale * dim;
    auto margin_of = [&](const MatrixXcd& psi) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& row : rows)
            m = std::min(m, (row.a.cwiseProduct(psi.transpose())).sum().real() - row.b);
        return m;
    };
    // for a unit-modulus candidate the lifted trace equals |theta^H q + qbar|^2
    // exactly, so this margin is the margin the extracted phases really achieve
    out.best_phases = sub.theta_init;
    out.best_margin = margin_of(psi0);
    auto offer_candidate = [&](const MatrixXcd& psi) {
        const VectorXcd theta = extract_phases(psi);
        const double margin = margin_of(lift_phases(theta));
        if (margin > out.best_margin) {
            out.best_margin = margin;
            out.best_phases = theta;
        }
    };

    // stage 1: max-min margin over the lifted set
    PhaseSdp relax;
    relax.dim = dim;
    relax.inequalities = rows;
    relax.maximize_slack = true;
    const PhaseSdpSolution best = solve_phase_sdp(relax, cfg.solver_tol);

    const double margin0 = margin_of(psi0);
    MatrixXcd psi_hat = psi0;
    double slack_floor = margin0;
    if (best.status == ConicStatus::Optimal && best.slack > margin0) {
        psi_hat = best.psi;
        out.slack_bound = best.slack;
        offer_candidate(best.psi);
        // keep a fraction of the gained margin; never demand more than the
        // relaxation proved possible
        if (best.slack <= 0.0) {
            slack_floor = best.slack;
        } else {
            const double incumbent = std::clamp(margin0, 0.0, best.slack);
            slack_floor = std::max(cfg.phase_slack_keep * best.slack, incumbent);
            slack_floor = std::min(slack_floor, best.slack * (1.0 - 1e-9));
        }
    } else {
        out.slack_bound = margin0;
    }

    // stage 2: rank-one pursuit at a frozen margin floor; the linearized
    // penalty majorizes the true one, so each exact solve cannot increase it
    const MatrixXcd psi_start = psi_hat;
    auto run_pursuit = [&](double floor, int iter_budget) {
        PhaseSdp pursuit;
        pursuit.dim = dim;
        pursuit.inequalities = rows;
        for (auto& row : pursuit.inequalities) row.b += floor;

        double prev_penalty = penalty_value(psi_hat);
        bool stalled = false;
        for (int it = 0; it < iter_budget && prev_penalty > penalty_tol; ++it) {
            const TopEig top = top_eig(psi_hat);
            pursuit.objective = cfg.penalty_tau *
                                (MatrixXcd::Identity(dim, dim) - top.vec * top.vec.adjoint());
            pursuit.maximize_slack = false;
            const PhaseSdpSolution step = solve_phase_sdp(pursuit, cfg.solver_tol);

            PhaseStepRecord rec;
            rec.iteration = static_cast<int>(out.records.size());
            rec.status = step.status;
            if (step.status != ConicStatus::Optimal) {
                rec.penalty = prev_penalty;
                rec.min_margin = margin_of(psi_hat);
                out.records.push_back(rec);
                stalled = true;
                break;
            }
            const double pen = penalty_value(step.psi);
            rec.penalty = pen;
            rec.min_margin = margin_of(step.psi);
            rec.stalled = pen >= prev_penalty - cfg.solver_tol * dim && pen > penalty_tol;
            out.records.push_back(rec);
            offer_candidate(step.psi);

            psi_hat = step.psi;
            prev_penalty = pen;
            if (rec.stalled) {
                stalled = true;
                break;
            }
        }
        out.rank_one = prev_penalty <= penalty_tol;
        return stalled;
    };

    const bool stalled = run_pursuit(slack_floor, cfg.penalty_max_iters);
    if (stalled && !out.rank_one) {
        // the pursuit parked at a higher-rank stationary point; trade margin
        // headroom for rank-one-ness and retry once from the relaxed set
        const double relaxed =
            std::min(slack_floor, std::max(std::min(margin0, out.slack_bound), 0.0)) *
            (1.0 - 1e-9);
        if (relaxed < slack_floor) {
            psi_hat = psi_start;
            run_pursuit(relaxed, cfg.penalty_max_iters);
        }
    }

    out.lifted.psi = psi_hat;
    return out;
}

namespace {

PhaseUpdateResult optimize_side(const ChannelSet& ch, const DerivedChannels& dc,
                                const RisState& ris, const Precoder& prec,
                                const SystemConfig& cfg, int side) {
    PhaseUpdateResult res;
    res.state = ris;
    const int n_side = side == 1 ? static_cast<int>(ris.ris1_phases.size())
                                 : static_cast<int>(ris.ris2_phases.size());
    if (n_side == 0) return res;

    PhaseSubproblem sub;
    sub.sinr_target = cfg.sinr_target;
    sub.noise_w = cfg.noise_w;
    sub.theta_init = side == 1 ? ris.ris1_phases : ris.ris2_phases;
    sub.lifts.resize(cfg.users);
    for (int k = 0; k < cfg.users; ++k) {
        sub.lifts[k].resize(cfg.users);
        for (int i = 0; i < cfg.users; ++i) {
            const PhaseLinearForm form = side == 1 ? phase_form_ris1(ch, dc, ris, prec, k, i)
                                                   : phase_form_ris2(ch, dc, ris, prec, k, i);
            sub.lifts[k][i] = lift_rank_one(form);
        }
    }

    res.inner = solve_phase_penalty(sub, side, cfg);
    const VectorXcd theta_new =
        res.inner.best_phases.size() > 0 ? res.inner.best_phases : sub.theta_init;

    RisState candidate = ris;
    if (side == 1)
        candidate.ris1_phases = theta_new;
    else
        candidate.ris2_phases = theta_new;

    const double before = check_constraints(ch, dc, ris, prec, cfg).min_normalized(cfg);
    const double after = check_constraints(ch, dc, candidate, prec, cfg).min_normalized(cfg);
    if (after >= std::min(before, 0.0) - cfg.solver_tol) {
        res.updated = (theta_new - sub.theta_init).norm() > 1e-12;
        res.state = candidate;
    } else {
        res.rejected = true;
    }
    if (std::getenv("RISOPT_PHASE_DEBUG"))
        std::fprintf(stderr,
                     "[phase%d] before=%.6g after=%.6g slack_bound=%.6g rank_one=%d steps=%zu "
                     "penalty=%.3g %s\n",
                     side, before, after, res.inner.slack_bound,
                     static_cast<int>(res.inner.rank_one), res.inner.records.size(),
                     penalty_value(res.inner.lifted.psi), res.rejected ? "REJECTED" : "");
    return res;
}

}  // namespace

PhaseUpdateResult optimize_ris1_phases(const ChannelSet& ch, const DerivedChannels& dc,
                                       const RisState& ris, const Precoder& prec,
                                       const SystemConfig& cfg) {
    return optimize_side(ch, dc, ris, prec, cfg, 1);
}

PhaseUpdateResult optimize_ris2_phases(const ChannelSet& ch, const DerivedChannels& dc,
                                       const RisState& ris, const Precoder& prec,
                                       const SystemConfig& cfg) {
    return optimize_side(ch, dc, ris, prec, cfg, 2);
}

}  // namespace risopt
