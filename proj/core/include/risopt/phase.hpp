#pragma once

#include "risopt/conic.hpp"
#include "risopt/model.hpp"

namespace risopt {

/// theta-dependent part of one beam projection: value(theta) = theta^H coeff
/// + constant, equal to g_k^H w_i for unit-modulus theta on the chosen side.
struct PhaseLinearForm {
    VectorXcd coeff;
    cxd constant{0.0, 0.0};
};

/// Projection of user k's channel onto beam i with the RIS1 phases free.
PhaseLinearForm phase_form_ris1(const ChannelSet& ch, const DerivedChannels& dc,
                                const RisState& ris, const Precoder& prec, int k, int i);

/// Same with the RIS2 phases free.
PhaseLinearForm phase_form_ris2(const ChannelSet& ch, const DerivedChannels& dc,
                                const RisState& ris, const Precoder& prec, int k, int i);

/// Rank-one lifting of a linear form: B = v v^H with v = [coeff; constant],
/// so that tr(B * lift(theta)) = |theta^H coeff + constant|^2.
MatrixXcd lift_rank_one(const PhaseLinearForm& form);

/// lift(theta) = [theta; 1] [theta; 1]^H.
MatrixXcd lift_phases(const VectorXcd& theta);

/// tr(Psi) - lambda_max(Psi); zero exactly on PSD matrices of rank <= 1.
double penalty_value(const MatrixXcd& psi);

/// Linearization of the penalty at psi_hat through the principal eigenvector;
/// majorizes penalty_value everywhere and touches it at psi_hat.
double linearized_penalty(const MatrixXcd& psi, const MatrixXcd& psi_hat);

/// Unit-modulus phases from a lifted matrix: principal eigenvector, each
/// entry referenced to the last one. Throws DomainError on a zero matrix.
VectorXcd extract_phases(const MatrixXcd& psi);

/// One lifted-phase subproblem: lifts[k][i] are the rank-one SINR blocks.
struct PhaseSubproblem {
    std::vector<std::vector<MatrixXcd>> lifts;
    double sinr_target = 0.0;
    double noise_w = 0.0;
    VectorXcd theta_init;  // current phases; their lift seeds the search
};

struct PhaseStepRecord {
    int iteration = 0;
    double penalty = 0.0;
    double min_margin = 0.0;  // normalized SINR trace-margin
    ConicStatus status = ConicStatus::Optimal;
    bool stalled = false;
};

struct LiftedPhase {
    MatrixXcd psi;
    int side = 1;
};

struct PhaseSolveOutcome {
    LiftedPhase lifted;
    std::vector<PhaseStepRecord> records;
    bool rank_one = false;
    double slack_bound = 0.0;   // relaxation's max-min normalized margin
    VectorXcd best_phases;      // best rank-one candidate seen, by true margin
    double best_margin = 0.0;   // its normalized SINR margin
};

/// Margin-seeking rank-one pursuit: first maximize the worst normalized SINR
/// margin over the lifted set, then drive the penalty down while keeping a
/// configured fraction of that margin. The penalty sequence is nonincreasing
/// across the pursuit iterations; a non-decrease flags a stall and stops.
PhaseSolveOutcome solve_phase_penalty(const PhaseSubproblem& sub, int side,
                                      const SystemConfig& cfg);

struct PhaseUpdateResult {
    RisState state;
    bool updated = false;   // candidate differed and was accepted
    bool rejected = false;  // candidate regressed the margins and was dropped
    PhaseSolveOutcome inner;
};

/// Re-optimize one side's phases and accept the candidate only if no
/// normalized constraint margin regresses past solver_tol (feasible states
/// must stay feasible). An empty side is returned unchanged.
PhaseUpdateResult optimize_ris1_phases(const ChannelSet& ch, const DerivedChannels& dc,
                                       const RisState& ris, const Precoder& prec,
                                       const SystemConfig& cfg);
PhaseUpdateResult optimize_ris2_phases(const ChannelSet& ch, const DerivedChannels& dc,
                                       const RisState& ris, const Precoder& prec,
                                       const SystemConfig& cfg);

}  // namespace risopt
