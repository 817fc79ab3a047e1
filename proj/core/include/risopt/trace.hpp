#pragma once

#include <iosfwd>

#include "risopt/phase.hpp"
#include "risopt/sca.hpp"

namespace risopt {

enum class SolveStatus { Converged, MaxIters, InfeasibleAtInit, InsufficientHarvestStatus };

const char* to_string(SolveStatus s);

/// Phase-pursuit row annotated with its sweep and surface.
struct PhaseTraceEntry {
    int sweep = 0;
    int side = 0;
    PhaseStepRecord rec;
};

/// One outer-iteration record of the alternating solve.
struct OuterRecord {
    int iteration = 0;
    double power_w = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double min_sinr_margin = 0.0;
    double harvest1_margin_w = 0.0;
    double harvest2_margin_w = 0.0;
    int sca_iters = 0;     // S1
    int phase_sweeps = 0;  // S2
    bool theta1_rejected = false;
    bool theta2_rejected = false;
    bool phase_stalled = false;
    std::vector<ScaRecord> sca;
    std::vector<PhaseTraceEntry> phase;
};

struct SolveTrace {
    std::vector<OuterRecord> outer;
    SolveStatus status = SolveStatus::MaxIters;
    double init_power_w = 0.0;
    double shortfall_w = 0.0;  // set when harvest coverage failed
    int shortfall_surface = 0;

    double final_power_w() const {
        return outer.empty() ? init_power_w : outer.back().power_w;
    }
};

/// One JSON object per outer iteration, nested solver rows included.
void write_trace_jsonl(const SolveTrace& trace, std::ostream& os);

}  // namespace risopt
