#pragma once

#include "risopt/common.hpp"

namespace risopt {

enum class ConicStatus { Optimal, Infeasible, NumericalFailure };

const char* to_string(ConicStatus s);

/// Standard real embedding of a Hermitian matrix: [[Re A, -Im A], [Im A, Re A]].
/// Positive semidefiniteness is preserved and the trace doubles. Throws
/// DomainError when A is not Hermitian to 1e-10.
MatrixXd hermitian_to_real_psd(const MatrixXcd& a);

/// Inverse of the embedding; exact for matrices produced by it.
MatrixXcd real_psd_to_hermitian(const MatrixXd& m);

// ---------------------------------------------------------------------------
// Convex QCQP: min x'P0x + q0'x + r0  s.t.  x'P_i x + q_i'x + r_i <= 0.
// Solved with a feasible-start log-barrier method plus a phase-1 search when
// no strictly feasible start is at hand. Callers are expected to prescale
// constraints to O(1); see sca.cpp.
// ---------------------------------------------------------------------------

struct QuadConstraint {
    MatrixXd p;  // PSD (may be zero for affine rows)
    VectorXd q;
    double r = 0.0;

    double eval(const VectorXd& x) const { return x.dot(p * x) + q.dot(x) + r; }
};

struct ConvexQcqp {
    int dim = 0;
    MatrixXd p0;
    VectorXd q0;
    double r0 = 0.0;
    std::vector<QuadConstraint> constraints;
};

struct ConicSolution {
    VectorXd x;
    ConicStatus status = ConicStatus::NumericalFailure;
    double objective = 0.0;
    double max_violation = 0.0;
    int iterations = 0;
};

/// Solve the convex QCQP. `hint` seeds the interior-point search (any vector
/// of the right size; it does not have to be feasible). Deterministic.
ConicSolution solve_power_subproblem(const ConvexQcqp& prob, const VectorXd& hint, double tol);

/// Max constraint violation of x under the raw problem data.
double qcqp_violation(const ConvexQcqp& prob, const VectorXd& x);

// ---------------------------------------------------------------------------
// Linear SDP over Hermitian PSD matrices with unit diagonal:
//   min Re<C, Psi>   s.t.  Re<A_j, Psi> >= b_j,  Psi_nn = 1,  Psi >= 0,
// or, with maximize_slack, the max-min margin variant
//   max s            s.t.  Re<A_j, Psi> - slack_coeff_j * s >= b_j, ...
// Solved by a dual barrier method; the primal matrix is recovered from the
// final central point, so it is PSD by construction.
// ---------------------------------------------------------------------------

struct TraceInequality {
    MatrixXcd a;
    double b = 0.0;
    double slack_coeff = 0.0;  // only read in maximize_slack mode; must be > 0 there
};

struct PhaseSdp {
    int dim = 0;  // matrix side n
    MatrixXcd objective;
    std::vector<TraceInequality> inequalities;
    bool maximize_slack = false;
};

struct PhaseSdpSolution {
    MatrixXcd psi;
    ConicStatus status = ConicStatus::NumericalFailure;
    double objective = 0.0;  // Re<C, Psi>, or the achieved slack in slack mode
    double slack = 0.0;
    double max_violation = 0.0;
    int iterations = 0;
};

PhaseSdpSolution solve_phase_sdp(const PhaseSdp& prob, double tol);

/// Max violation of (inequalities, unit diagonal, PSD) at the given Psi.
double phase_sdp_violation(const PhaseSdp& prob, const MatrixXcd& psi, double slack);

}  // namespace risopt
