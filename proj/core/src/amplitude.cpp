#include "risopt/amplitude.hpp"

#include <cmath>

namespace risopt {

double max_harvest_ris1(const ChannelSet& ch, const SystemConfig& cfg) {
    return cfg.eta * cfg.p_max_w * ch.bs_to_ris1.squaredNorm();
}

double optimal_amplitude_ris1(const ChannelSet& ch, const Precoder& prec,
                              const SystemConfig& cfg) {
    if (cfg.n_ris1 == 0) return 0.0;
    const double need = cfg.n_ris1 * cfg.mu_w;
    if (need == 0.0) return 1.0;
    const double supply = cfg.eta * prec.total_power() * ch.bs_to_ris1.squaredNorm();
    if (supply < need) throw InsufficientHarvest(1, need - supply);
    return std::sqrt(1.0 - need / supply);
}

double optimal_amplitude_ris2(const ChannelSet& ch, const Precoder& prec,
                              const VectorXcd& ris1_phases, double beta1,
                              const SystemConfig& cfg) {
    if (cfg.n_ris2 == 0) return 0.0;
    const double need = cfg.n_ris2 * cfg.mu_w;
    if (need == 0.0) return 1.0;
    double gain = ch.bs_to_ris2.squaredNorm();
    if (ris1_phases.size() > 0 && ch.ris1_to_ris2.cols() > 0)
        gain += beta1 * beta1 *
                (ch.bs_to_ris1 * ris1_phases.asDiagonal() * ch.ris1_to_ris2).squaredNorm();
    const double supply = cfg.eta * prec.total_power() * gain;
    if (supply < need) throw InsufficientHarvest(2, need - supply);
    return std::sqrt(1.0 - need / supply);
}

}  // namespace risopt
