#include "risopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace risopt {

void RisState::validate() const {
    for (int n = 0; n < ris1_phases.size(); ++n)
        if (std::abs(std::abs(ris1_phases(n)) - 1.0) > 1e-9)
            throw DomainError("RisState: ris1 phase off the unit circle");
    for (int n = 0; n < ris2_phases.size(); ++n)
        if (std::abs(std::abs(ris2_phases(n)) - 1.0) > 1e-9)
            throw DomainError("RisState: ris2 phase off the unit circle");
    if (!(ris1_amplitude >= 0.0 && ris1_amplitude <= 1.0))
        throw DomainError("RisState: ris1 amplitude outside [0, 1]");
    if (!(ris2_amplitude >= 0.0 && ris2_amplitude <= 1.0))
        throw DomainError("RisState: ris2 amplitude outside [0, 1]");
}

DerivedChannels derive_channels(const ChannelSet& ch) {
    const int k_count = static_cast<int>(ch.ris1_to_user.size());
    const int n2 = static_cast<int>(ch.ris1_to_ris2.cols());
    DerivedChannels dc;
    dc.via_ris1.resize(k_count);
    dc.via_ris2.resize(k_count);
    dc.cascade.resize(k_count);
    dc.double_hop.resize(k_count);
    for (int k = 0; k < k_count; ++k) {
        dc.via_ris1[k] = ch.bs_to_ris1 * ch.ris1_to_user[k].asDiagonal();
        dc.via_ris2[k] = ch.bs_to_ris2 * ch.ris2_to_user[k].asDiagonal();
        dc.cascade[k] = ch.ris1_to_ris2 * ch.ris2_to_user[k].asDiagonal();
        dc.double_hop[k].resize(n2);
        for (int j = 0; j < n2; ++j)
            dc.double_hop[k][j] = ch.bs_to_ris1 * dc.cascade[k].col(j).asDiagonal();
    }
    return dc;
}

VectorXcd compose_channel(const ChannelSet& ch, const DerivedChannels& dc, const RisState& ris,
                          int k) {
    const double b1 = ris.ris1_amplitude, b2 = ris.ris2_amplitude;
    VectorXcd g = VectorXcd::Zero(ch.bs_to_ris1.rows());
    if (ris.ris1_phases.size() > 0) g += b1 * (dc.via_ris1[k] * ris.ris1_phases);
    if (ris.ris2_phases.size() > 0) g += b2 * (dc.via_ris2[k] * ris.ris2_phases);
    if (ris.ris1_phases.size() > 0 && ris.ris2_phases.size() > 0) {
        // sum over n2 of double_hop[k][n2] * theta1 * theta2_{n2}, collapsed
        // to one matrix-vector product
        const VectorXcd weights = dc.cascade[k] * ris.ris2_phases;  // N1
        g += (b1 * b2) * (ch.bs_to_ris1 * weights.cwiseProduct(ris.ris1_phases));
    }
    return g;
}

std::vector<VectorXcd> compose_all(const ChannelSet& ch, const DerivedChannels& dc,
                                   const RisState& ris) {
    std::vector<VectorXcd> g(ch.ris1_to_user.size());
    for (std::size_t k = 0; k < g.size(); ++k)
        g[k] = compose_channel(ch, dc, ris, static_cast<int>(k));
    return g;
}

double sinr(const std::vector<VectorXcd>& g_all, const Precoder& prec, int k, double noise_w) {
    const VectorXcd& g = g_all[static_cast<std::size_t>(k)];
    const double signal = std::norm(g.dot(prec.beams[static_cast<std::size_t>(k)]));
    double interference = 0.0;
    for (std::size_t i = 0; i < prec.beams.size(); ++i)
        if (static_cast<int>(i) != k) interference += std::norm(g.dot(prec.beams[i]));
    return signal / (interference + noise_w);
}

double harvest_ris1(const ChannelSet& ch, const Precoder& prec, double beta1, double eta) {
    return eta * (1.0 - beta1 * beta1) * prec.total_power() * ch.bs_to_ris1.squaredNorm();
}

double harvest_ris2(const ChannelSet& ch, const Precoder& prec, const RisState& ris, double eta) {
    const double b1 = ris.ris1_amplitude, b2 = ris.ris2_amplitude;
    double gain = ch.bs_to_ris2.squaredNorm();
    if (ris.ris1_phases.size() > 0 && ch.ris1_to_ris2.cols() > 0)
        gain += b1 * b1 *
                (ch.bs_to_ris1 * ris.ris1_phases.asDiagonal() * ch.ris1_to_ris2).squaredNorm();
    return eta * (1.0 - b2 * b2) * prec.total_power() * gain;
}

double ConstraintReport::min_sinr_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : sinr_margin) m = std::min(m, v);
    return m;
}

double ConstraintReport::min_normalized(const SystemConfig& cfg) const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : sinr_margin) m = std::min(m, v / cfg.sinr_target);
    if (cfg.n_ris1 > 0 && cfg.mu_w > 0.0)
        m = std::min(m, harvest1_margin_w / (cfg.n_ris1 * cfg.mu_w));
    if (cfg.n_ris2 > 0 && cfg.mu_w > 0.0)
        m = std::min(m, harvest2_margin_w / (cfg.n_ris2 * cfg.mu_w));
    m = std::min(m, power_margin_w / cfg.p_max_w);
    return m;
}

bool ConstraintReport::feasible(double tol) const {
    for (double v : sinr_margin)
        if (v < -tol) return false;
    return harvest1_margin_w >= -tol && harvest2_margin_w >= -tol && power_margin_w >= -tol &&
           unit_modulus_residual <= tol && amplitudes_in_range;
}

ConstraintReport check_constraints(const ChannelSet& ch, const DerivedChannels& dc,
                                   const RisState& ris, const Precoder& prec,
                                   const SystemConfig& cfg) {
    ConstraintReport rep;
    const auto g_all = compose_all(ch, dc, ris);
    rep.sinr_margin.resize(static_cast<std::size_t>(cfg.users));
    for (int k = 0; k < cfg.users; ++k)
        rep.sinr_margin[static_cast<std::size_t>(k)] =
            sinr(g_all, prec, k, cfg.noise_w) - cfg.sinr_target;
    rep.harvest1_margin_w =
        harvest_ris1(ch, prec, ris.ris1_amplitude, cfg.eta) - cfg.n_ris1 * cfg.mu_w;
    rep.harvest2_margin_w = harvest_ris2(ch, prec, ris, cfg.eta) - cfg.n_ris2 * cfg.mu_w;
    rep.power_margin_w = cfg.p_max_w - prec.total_power();
    double resid = 0.0;
    for (int n = 0; n < ris.ris1_phases.size(); ++n)
        resid = std::max(resid, std::abs(std::abs(ris.ris1_phases(n)) - 1.0));
    for (int n = 0; n < ris.ris2_phases.size(); ++n)
        resid = std::max(resid, std::abs(std::abs(ris.ris2_phases(n)) - 1.0));
    rep.unit_modulus_residual = resid;
    rep.amplitudes_in_range = ris.ris1_amplitude >= 0.0 && ris.ris1_amplitude <= 1.0 &&
                              ris.ris2_amplitude >= 0.0 && ris.ris2_amplitude <= 1.0;
    return rep;
}

}  // namespace risopt
