#include "risopt/channel.hpp"

#include <cmath>
#include <numbers>

namespace risopt {

double pathloss(double d_m, double alpha, double rho0) {
    if (!(d_m > 0.0)) throw DomainError("pathloss: distance must be positive");
    return rho0 * std::pow(d_m, -alpha);
}

namespace {

// Half-wavelength ULA steering vector, element n gets phase pi * n * sin(bearing).
VectorXcd steering(double bearing, int n_elems) {
    VectorXcd a(n_elems);
    const double step = std::numbers::pi * std::sin(bearing);
    for (int n = 0; n < n_elems; ++n) a(n) = std::polar(1.0, step * n);
    return a;
}

}  // namespace

MatrixXcd los_component(const Vec2& tx_pos, const Vec2& rx_pos, int rows, int cols) {
    if (distance(tx_pos, rx_pos) == 0.0)
        throw DomainError("los_component: coincident node positions");
    const double bearing_rx = std::atan2(tx_pos.y - rx_pos.y, tx_pos.x - rx_pos.x);
    const double bearing_tx = std::atan2(rx_pos.y - tx_pos.y, rx_pos.x - tx_pos.x);
    const VectorXcd a_rx = steering(bearing_rx, rows);
    const VectorXcd a_tx = steering(bearing_tx, cols);
    return a_rx * a_tx.adjoint();
}

MatrixXcd mix_channel(const MatrixXcd& los, const MatrixXcd& nlos, double gain, double kappa) {
    const double w_los = std::sqrt(kappa / (kappa + 1.0));
    const double w_nlos = std::sqrt(1.0 / (kappa + 1.0));
    return std::sqrt(gain) * (w_los * los + w_nlos * nlos);
}

MatrixXcd draw_channel(Rng& rng, const Vec2& tx_pos, const Vec2& rx_pos, int rows, int cols,
                       double alpha, double kappa, double rho0) {
    const double gain = pathloss(distance(tx_pos, rx_pos), alpha, rho0);
    const MatrixXcd los = los_component(tx_pos, rx_pos, rows, cols);
    MatrixXcd nlos(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) nlos(r, c) = rng.normal_c();
    return mix_channel(los, nlos, gain, kappa);
}

ChannelSet synthesize_scenario(const SystemConfig& cfg) {
    cfg.validate();
    ChannelSet ch;

    // user positions: uniform over the disk via r = R * sqrt(u)
    Rng rng_pos(mix_seed(cfg.seed, seed_tag::positions));
    ch.user_positions.resize(cfg.users);
    for (int k = 0; k < cfg.users; ++k) {
        const double r = cfg.user_radius * std::sqrt(rng_pos.uniform());
        const double psi = 2.0 * std::numbers::pi * rng_pos.uniform();
        ch.user_positions[k] = {cfg.user_center.x + r * std::cos(psi),
                                cfg.user_center.y + r * std::sin(psi)};
    }

    const int m = cfg.antennas, n1 = cfg.n_ris1, n2 = cfg.n_ris2;

    // rows-dimension array at rx_pos: the BS hosts the row side of the two
    // BS blocks, RIS1 hosts the row side of the inter-surface block and of
    // its user vectors.
    Rng rng_h1(mix_seed(cfg.seed, seed_tag::bs_ris1));
    ch.bs_to_ris1 = n1 > 0 ? draw_channel(rng_h1, cfg.ris1_pos, cfg.bs_pos, m, n1,
                                          cfg.alpha_bs_ris1, cfg.rician_k, cfg.rho0)
                           : MatrixXcd(m, 0);

    Rng rng_h2(mix_seed(cfg.seed, seed_tag::bs_ris2));
    ch.bs_to_ris2 = n2 > 0 ? draw_channel(rng_h2, cfg.ris2_pos, cfg.bs_pos, m, n2,
                                          cfg.alpha_bs_ris2, cfg.rician_k, cfg.rho0)
                           : MatrixXcd(m, 0);

    Rng rng_d(mix_seed(cfg.seed, seed_tag::ris1_ris2));
    ch.ris1_to_ris2 = (n1 > 0 && n2 > 0)
                          ? draw_channel(rng_d, cfg.ris2_pos, cfg.ris1_pos, n1, n2,
                                         cfg.alpha_ris1_ris2, cfg.rician_k, cfg.rho0)
                          : MatrixXcd(n1, n2);

    ch.ris1_to_user.resize(cfg.users);
    for (int k = 0; k < cfg.users; ++k) {
        Rng rng_k(mix_seed(cfg.seed, seed_tag::ris1_user_base + static_cast<std::uint64_t>(k)));
        ch.ris1_to_user[k] = n1 > 0 ? VectorXcd(draw_channel(rng_k, ch.user_positions[k],
                                                             cfg.ris1_pos, n1, 1,
                                                             cfg.alpha_ris1_user, cfg.rician_k,
                                                             cfg.rho0))
                                    : VectorXcd(0);
    }
    ch.ris2_to_user.resize(cfg.users);
    for (int k = 0; k < cfg.users; ++k) {
        Rng rng_k(mix_seed(cfg.seed, seed_tag::ris2_user_base + static_cast<std::uint64_t>(k)));
        ch.ris2_to_user[k] = n2 > 0 ? VectorXcd(draw_channel(rng_k, ch.user_positions[k],
                                                             cfg.ris2_pos, n2, 1,
                                                             cfg.alpha_ris2_user, cfg.rician_k,
                                                             cfg.rho0))
                                    : VectorXcd(0);
    }
    return ch;
}

}  // namespace risopt
