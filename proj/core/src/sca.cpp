#include "risopt/sca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace risopt {

VectorXd stack_beams(const Precoder& prec, int antennas) {
    const int users = static_cast<int>(prec.beams.size());
    VectorXd x(2 * antennas * users);
    for (int k = 0; k < users; ++k) {
        x.segment(2 * antennas * k, antennas) = prec.beams[k].real();
        x.segment(2 * antennas * k + antennas, antennas) = prec.beams[k].imag();
    }
    return x;
}

Precoder unstack_beams(const VectorXd& x, int users, int antennas) {
    Precoder prec;
    prec.beams.resize(users);
    for (int k = 0; k < users; ++k) {
        VectorXcd w(antennas);
        w.real() = x.segment(2 * antennas * k, antennas);
        w.imag() = x.segment(2 * antennas * k + antennas, antennas);
        prec.beams[k] = w;
    }
    return prec;
}

double sinr_taylor_lhs(const VectorXcd& g, const VectorXcd& w_prev_k, const VectorXcd& w_k) {
    const cxd prev_proj = g.dot(w_prev_k);  // g^H w_prev
    const cxd cur_proj = g.dot(w_k);
    return 2.0 * (std::conj(prev_proj) * cur_proj).real() - std::norm(prev_proj);
}

double power_taylor_lhs(const Precoder& prev, const Precoder& cur) {
    double v = 0.0;
    for (std::size_t k = 0; k < prev.beams.size(); ++k)
        v += 2.0 * prev.beams[k].dot(cur.beams[k]).real() - prev.beams[k].squaredNorm();
    return v;
}

QuadConstraint linearize_sinr(const VectorXcd& g, const Precoder& w_prev, int k,
                              double sinr_target, double noise_w, int antennas) {
    const int users = static_cast<int>(w_prev.beams.size());
    const int dim = 2 * antennas * users;
    QuadConstraint con;
    con.p = MatrixXd::Zero(dim, dim);
    con.q = VectorXd::Zero(dim);

    // interference quadratics on the right of the bound
    const MatrixXcd gram = g * g.adjoint();
    const MatrixXd gram_re = hermitian_to_real_psd(gram);
    for (int i = 0; i < users; ++i)
        if (i != k) con.p.block(2 * antennas * i, 2 * antennas * i, 2 * antennas, 2 * antennas) =
            sinr_target * gram_re;

    // affine Taylor term on the left: 2 Re{(gram w_prev_k)^H w_k}
    const VectorXcd grad = gram * w_prev.beams[k];
    con.q.segment(2 * antennas * k, antennas) = -2.0 * grad.real();
    con.q.segment(2 * antennas * k + antennas, antennas) = -2.0 * grad.imag();

    con.r = sinr_target * noise_w + std::norm(g.dot(w_prev.beams[k]));
    return con;
}

QuadConstraint linearize_power(const Precoder& w_prev, double rhs_w, int antennas) {
    const int users = static_cast<int>(w_prev.beams.size());
    const int dim = 2 * antennas * users;
    QuadConstraint con;
    con.p = MatrixXd::Zero(dim, dim);
    con.q = VectorXd::Zero(dim);
    double prev_power = 0.0;
    for (int k = 0; k < users; ++k) {
        con.q.segment(2 * antennas * k, antennas) = -2.0 * w_prev.beams[k].real();
        con.q.segment(2 * antennas * k + antennas, antennas) = -2.0 * w_prev.beams[k].imag();
        prev_power += w_prev.beams[k].squaredNorm();
    }
    con.r = rhs_w + prev_power;
    return con;
}

double harvest_power_floor_ris1(const ChannelSet& ch, double beta1, const SystemConfig& cfg) {
    const double need = cfg.n_ris1 * cfg.mu_w;
    if (need == 0.0) return 0.0;
    const double split = 1.0 - beta1 * beta1;
    if (split <= 0.0) throw InsufficientHarvest(1, need);
    return need / (cfg.eta * split * ch.bs_to_ris1.squaredNorm());
}

double harvest_power_floor_ris2(const ChannelSet& ch, const RisState& ris,
                                const SystemConfig& cfg) {
    const double need = cfg.n_ris2 * cfg.mu_w;
    if (need == 0.0) return 0.0;
    const double split = 1.0 - ris.ris2_amplitude * ris.ris2_amplitude;
    if (split <= 0.0) throw InsufficientHarvest(2, need);
    double gain = ch.bs_to_ris2.squaredNorm();
    if (ris.ris1_phases.size() > 0 && ch.ris1_to_ris2.cols() > 0)
        gain += ris.ris1_amplitude * ris.ris1_amplitude *
                (ch.bs_to_ris1 * ris.ris1_phases.asDiagonal() * ch.ris1_to_ris2).squaredNorm();
    return need / (cfg.eta * split * gain);
}

ScaResult sca_loop(const ChannelSet& ch, const DerivedChannels& dc, const RisState& ris,
                   const SystemConfig& cfg, const ScaSettings& settings) {
    ScaResult result;
    const int users = cfg.users, antennas = cfg.antennas;
    const int dim = 2 * antennas * users;

    Precoder w = settings.start;
    if (static_cast<int>(w.beams.size()) != users)
        throw DomainError("sca_loop: starting precoder has wrong user count");
    for (const auto& beam : w.beams)
        if (beam.size() != antennas || beam.squaredNorm() == 0.0)
            throw DomainError("sca_loop: degenerate expansion point");

    const auto g_all = compose_all(ch, dc, ris);
    const double floor1 = harvest_power_floor_ris1(ch, ris.ris1_amplitude, cfg);
    const double floor2 = harvest_power_floor_ris2(ch, ris, cfg);

    double prev_obj = w.total_power();
    for (int n = 0; n < settings.max_iters; ++n) {
        // scale variables and rows so the interior-point solver sees O(1) data
        const double var_scale = std::sqrt(std::max(prev_obj, 1e-30) / (users * antennas));
        const double power_scale = std::max(prev_obj, 1e-30);

        ConvexQcqp prob;
        prob.dim = dim;
        prob.p0 = MatrixXd::Identity(dim, dim) * (var_scale * var_scale / power_scale);
        prob.q0 = VectorXd::Zero(dim);

        auto push_scaled = [&](QuadConstraint con, double row_scale) {
            const double s = 1.0 / std::max(row_scale, 1e-300);
            con.p *= s * var_scale * var_scale;
            con.q *= s * var_scale;
            con.r *= s;
            prob.constraints.push_back(std::move(con));
        };

        for (int k = 0; k < users; ++k) {
            QuadConstraint con = linearize_sinr(g_all[k], w, k, cfg.sinr_target, cfg.noise_w,
                                                antennas);
            double interference = 0.0;
            for (int i = 0; i < users; ++i)
                if (i != k) interference += std::norm(g_all[k].dot(w.beams[i]));
            push_scaled(std::move(con),
                        cfg.sinr_target * (interference + cfg.noise_w));
        }
        if (floor1 > 0.0)
            push_scaled(linearize_power(w, floor1, antennas), std::max(floor1, prev_obj));
        if (floor2 > 0.0)
            push_scaled(linearize_power(w, floor2, antennas), std::max(floor2, prev_obj));
        {
            QuadConstraint cap;
            cap.p = MatrixXd::Identity(dim, dim);
            cap.q = VectorXd::Zero(dim);
            cap.r = -cfg.p_max_w;
            push_scaled(std::move(cap), cfg.p_max_w);
        }

        const VectorXd hint = stack_beams(w, antennas) / var_scale;
        const ConicSolution sol = solve_power_subproblem(prob, hint, cfg.solver_tol);

        if (sol.status == ConicStatus::Infeasible) {
            if (n == 0) throw InfeasibleAtInit("sca_loop: first subproblem infeasible");
            ScaRecord rec;
            rec.iteration = n;
            rec.objective_w = prev_obj;
            rec.status = sol.status;
            result.records.push_back(rec);
            break;
        }
        if (sol.status == ConicStatus::NumericalFailure) {
            if (n == 0) throw InfeasibleAtInit("sca_loop: first subproblem failed numerically");
            ScaRecord rec;
            rec.iteration = n;
            rec.objective_w = prev_obj;
            rec.status = sol.status;
            result.records.push_back(rec);
            break;
        }

        w = unstack_beams(sol.x * var_scale, users, antennas);
        const double obj = w.total_power();

        ScaRecord rec;
        rec.iteration = n;
        rec.objective_w = obj;
        double min_margin = std::numeric_limits<double>::infinity();
        for (int k = 0; k < users; ++k)
            min_margin = std::min(min_margin, sinr(g_all, w, k, cfg.noise_w) - cfg.sinr_target);
        rec.min_sinr_margin = min_margin;
        rec.harvest1_margin_w =
            harvest_ris1(ch, w, ris.ris1_amplitude, cfg.eta) - cfg.n_ris1 * cfg.mu_w;
        rec.harvest2_margin_w = harvest_ris2(ch, w, ris, cfg.eta) - cfg.n_ris2 * cfg.mu_w;
        rec.status = sol.status;
        result.records.push_back(rec);

        const double change = std::abs(prev_obj - obj);
        prev_obj = obj;
        if (change <= settings.rel_obj_tol * std::max(obj, 1e-30)) {
            result.converged = true;
            break;
        }
    }

    result.precoder = w;
    return result;
}

}  // namespace risopt
