#pragma once

#include "risopt/trace.hpp"

namespace risopt {

enum class BaselineMode { Double, SingleBs, SingleUser, RandomPhase };

const char* to_string(BaselineMode m);

struct BcdResult {
    Precoder precoder;
    RisState ris;
    SolveTrace trace;

    bool ok() const {
        return trace.status == SolveStatus::Converged || trace.status == SolveStatus::MaxIters;
    }
};

/// Alternating minimization over beams, amplitudes and the two phase blocks.
/// Phases start uniform-random (seeded from cfg.seed), beams start as
/// matched filters scaled to the smallest feasible common power; a
/// regularized-inverse direction set takes over when matched filtering
/// cannot reach the SINR targets. Infeasibility is reported through
/// trace.status rather than thrown, so sweep drivers can count it.
BcdResult bcd_solve(const ChannelSet& ch, const SystemConfig& cfg);

/// Reference schemes: SingleBs drops the user-side surface, SingleUser the
/// BS-side one (slicing the shared channel blocks, so seeds stay paired),
/// RandomPhase keeps both surfaces but never updates their phases.
BcdResult solve_baseline(const ChannelSet& ch, const SystemConfig& cfg, BaselineMode mode);

}  // namespace risopt
