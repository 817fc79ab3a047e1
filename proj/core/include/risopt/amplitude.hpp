#pragma once

#include "risopt/model.hpp"

namespace risopt {

/// Largest power the BS-side surface can harvest: full budget, beta1 = 0.
double max_harvest_ris1(const ChannelSet& ch, const SystemConfig& cfg);

/// Largest amplitude whose residual harvest still covers the BS-side
/// surface's consumption; substituting it back makes the harvest exactly
/// n1 * mu. Throws InsufficientHarvest when even beta1 = 0 cannot cover it.
/// By convention an empty surface (n1 = 0) gets amplitude 0.
double optimal_amplitude_ris1(const ChannelSet& ch, const Precoder& prec, const SystemConfig& cfg);

/// Same for the user-side surface. The incident power includes the cascade
/// through surface 1, so the current beta1 and theta1 enter.
double optimal_amplitude_ris2(const ChannelSet& ch, const Precoder& prec,
                              const VectorXcd& ris1_phases, double beta1,
                              const SystemConfig& cfg);

}  // namespace risopt
