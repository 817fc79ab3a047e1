#pragma once

#include "risopt/common.hpp"
#include "risopt/config.hpp"
#include "risopt/rng.hpp"

namespace risopt {

/// One realization of the five channel blocks plus the drawn user positions.
/// Vectors are indexed by user. Zero element counts give zero-sized blocks.
struct ChannelSet {
    MatrixXcd bs_to_ris1;                 // M x N1
    MatrixXcd bs_to_ris2;                 // M x N2
    MatrixXcd ris1_to_ris2;               // N1 x N2
    std::vector<VectorXcd> ris1_to_user;  // K vectors, length N1
    std::vector<VectorXcd> ris2_to_user;  // K vectors, length N2
    std::vector<Vec2> user_positions;
};

/// Large-scale gain rho0 * (d / 1m)^-alpha. Throws DomainError for d <= 0.
double pathloss(double d_m, double alpha, double rho0);

/// Deterministic line-of-sight block: outer product of half-wavelength ULA
/// steering vectors pointed along the planar bearing between the two nodes.
/// The rows-dimension array sits at rx_pos, the cols-dimension at tx_pos.
/// Every entry has unit modulus. Throws DomainError for coincident nodes.
MatrixXcd los_component(const Vec2& tx_pos, const Vec2& rx_pos, int rows, int cols);

/// Rician mixture at a given large-scale gain. Pulled out of draw_channel so
/// tests can pin the scattered part (e.g. all zeros for the kappa -> inf
/// branch).
MatrixXcd mix_channel(const MatrixXcd& los, const MatrixXcd& nlos, double gain, double kappa);

/// Draw one Rician channel block; scattered entries are i.i.d. CN(0,1).
MatrixXcd draw_channel(Rng& rng, const Vec2& tx_pos, const Vec2& rx_pos, int rows, int cols,
                       double alpha, double kappa, double rho0);

/// Draw user positions and all five blocks for one realization.
///
/// Every block consumes its own sub-stream derived from (config.seed, block
/// tag), in the fixed order: positions, BS-RIS1, BS-RIS2, RIS1-RIS2, then
/// RIS1-user and RIS2-user ascending by user. Blocks therefore stay
/// bit-identical when an unrelated block changes size (e.g. the same BS-RIS1
/// matrix appears in the two-surface scenario and in the n2 = 0 baseline).
ChannelSet synthesize_scenario(const SystemConfig& cfg);

namespace seed_tag {
inline constexpr std::uint64_t positions = 0x01;
inline constexpr std::uint64_t bs_ris1 = 0x02;
inline constexpr std::uint64_t bs_ris2 = 0x03;
inline constexpr std::uint64_t ris1_ris2 = 0x04;
inline constexpr std::uint64_t ris1_user_base = 0x100;
inline constexpr std::uint64_t ris2_user_base = 0x200;
inline constexpr std::uint64_t phase_init = 0x300;
inline constexpr std::uint64_t realization_base = 0x1000;
}  // namespace seed_tag

}  // namespace risopt
