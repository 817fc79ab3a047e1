#pragma once

#include "risopt/conic.hpp"
#include "risopt/model.hpp"

namespace risopt {

struct ScaSettings {
    int max_iters = 30;
    double rel_obj_tol = 1e-4;
    Precoder start;  // expansion point for the first subproblem
};

struct ScaRecord {
    int iteration = 0;
    double objective_w = 0.0;
    double min_sinr_margin = 0.0;
    double harvest1_margin_w = 0.0;
    double harvest2_margin_w = 0.0;
    ConicStatus status = ConicStatus::Optimal;
};

struct ScaResult {
    Precoder precoder;
    std::vector<ScaRecord> records;
    bool converged = false;
};

/// Real stacking of the K complex beams: per user a [Re; Im] block of 2M.
VectorXd stack_beams(const Precoder& prec, int antennas);
Precoder unstack_beams(const VectorXd& x, int users, int antennas);

/// Value of the Taylor lower bound on |g^H w_k|^2 around w_prev_k.
/// Exact at w_k = w_prev_k, never above the true quadratic.
double sinr_taylor_lhs(const VectorXcd& g, const VectorXcd& w_prev_k, const VectorXcd& w_k);

/// Value of the Taylor lower bound on total power around prev.
double power_taylor_lhs(const Precoder& prev, const Precoder& cur);

/// Inner-approximated SINR constraint for user k as a convex row over the
/// stacked beams: interference quadratic plus target on the right, Taylor
/// affine term on the left. Returned in f(x) <= 0 orientation.
QuadConstraint linearize_sinr(const VectorXcd& g, const Precoder& w_prev, int k,
                              double sinr_target, double noise_w, int antennas);

/// Linearized total-power lower bound sum >= rhs_w (affine row, f(x) <= 0).
QuadConstraint linearize_power(const Precoder& w_prev, double rhs_w, int antennas);

/// Right-hand sides of the two harvest constraints seen from the beamforming
/// step with the amplitudes frozen. Throws InsufficientHarvest when an
/// amplitude of exactly 1 with nonzero consumption makes the split empty.
/// A zero return means the constraint is vacuous.
double harvest_power_floor_ris1(const ChannelSet& ch, double beta1, const SystemConfig& cfg);
double harvest_power_floor_ris2(const ChannelSet& ch, const RisState& ris,
                                const SystemConfig& cfg);

/// Iterated convexification of the power-minimization step at a fixed
/// reflection state. Every accepted iterate satisfies the true constraints;
/// the objective never increases beyond solver noise.
ScaResult sca_loop(const ChannelSet& ch, const DerivedChannels& dc, const RisState& ris,
                   const SystemConfig& cfg, const ScaSettings& settings);

}  // namespace risopt
