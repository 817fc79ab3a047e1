#pragma once

#include "risopt/channel.hpp"
#include "risopt/common.hpp"
#include "risopt/config.hpp"

namespace risopt {

/// Reflection state of the two surfaces: unit-modulus phase vectors and the
/// common power-splitting amplitudes in [0, 1].
struct RisState {
    VectorXcd ris1_phases;  // length N1
    VectorXcd ris2_phases;  // length N2
    double ris1_amplitude = 1.0;
    double ris2_amplitude = 1.0;

    /// Throws DomainError when a phase strays off the unit circle by more
    /// than 1e-9 or an amplitude leaves [0, 1].
    void validate() const;
};

/// BS beamforming vectors, one length-M vector per user.
struct Precoder {
    std::vector<VectorXcd> beams;

    double total_power() const {
        double p = 0.0;
        for (const auto& w : beams) p += w.squaredNorm();
        return p;
    }
};

/// Per-user channel factors precomputed from one ChannelSet:
///   via_ris1[k]  = bs_to_ris1 * diag(ris1_to_user[k])          (M x N1)
///   via_ris2[k]  = bs_to_ris2 * diag(ris2_to_user[k])          (M x N2)
///   cascade[k]   = ris1_to_ris2 * diag(ris2_to_user[k])        (N1 x N2)
///   double_hop[k][j] = bs_to_ris1 * diag(cascade[k].col(j))    (M x N1)
struct DerivedChannels {
    std::vector<MatrixXcd> via_ris1;
    std::vector<MatrixXcd> via_ris2;
    std::vector<MatrixXcd> cascade;
    std::vector<std::vector<MatrixXcd>> double_hop;
};

DerivedChannels derive_channels(const ChannelSet& ch);

/// Effective BS-to-user-k channel for the given reflection state.
VectorXcd compose_channel(const ChannelSet& ch, const DerivedChannels& dc, const RisState& ris,
                          int k);

/// All K effective channels at once.
std::vector<VectorXcd> compose_all(const ChannelSet& ch, const DerivedChannels& dc,
                                   const RisState& ris);

/// Received SINR of user k under the given precoder, linear ratio.
double sinr(const std::vector<VectorXcd>& g_all, const Precoder& prec, int k, double noise_w);

/// Power harvested by the BS-side surface (depends on beta1 only).
double harvest_ris1(const ChannelSet& ch, const Precoder& prec, double beta1, double eta);

/// Power harvested by the user-side surface; the second term is the power
/// arriving through the first surface, so it sees beta1 and theta1.
double harvest_ris2(const ChannelSet& ch, const Precoder& prec, const RisState& ris, double eta);

/// Signed feasibility margins for one candidate solution (positive = slack).
struct ConstraintReport {
    std::vector<double> sinr_margin;   // Gamma_k - target, per user
    double harvest1_margin_w = 0.0;    // P_RIS1 - N1 * mu
    double harvest2_margin_w = 0.0;    // P_RIS2 - N2 * mu
    double power_margin_w = 0.0;       // P_max - total power
    double unit_modulus_residual = 0;  // max | |phase| - 1 |
    bool amplitudes_in_range = true;

    double min_sinr_margin() const;
    /// Worst margin with each entry normalized to its own scale, used for
    /// accept/reject decisions on phase updates.
    double min_normalized(const SystemConfig& cfg) const;
    bool feasible(double tol) const;
};

ConstraintReport check_constraints(const ChannelSet& ch, const DerivedChannels& dc,
                                   const RisState& ris, const Precoder& prec,
                                   const SystemConfig& cfg);

}  // namespace risopt
