#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "risopt/common.hpp"

namespace risopt {

/// Convert decibel-milliwatts to watts.
double dbm_to_watts(double x_dbm);

/// All scalars of one system instance. The stock values follow the usual
/// two-surface downlink testbed: 4-antenna BS at the origin, a surface near
/// the BS and one near the user cluster, users drawn uniformly from a disk.
struct SystemConfig {
    int antennas = 4;      // BS antenna count M
    int users = 4;         // single-antenna user count K
    int n_ris1 = 25;       // elements on the BS-side surface
    int n_ris2 = 25;       // elements on the user-side surface

    double eta = 0.8;          // harvesting efficiency, (0, 1]
    double mu_w = 1e-3;        // per-element consumption [W]
    double sinr_target = 100;  // per-user SINR requirement, linear (20 dB)
    double p_max_w = 10.0;     // transmit power budget [W] (40 dBm)
    double noise_w = 1e-14;    // receiver noise power [W] (-110 dBm)
    double penalty_tau = 10.0; // rank-one penalty weight
    double rician_k = 5.0;     // Rician factor of every link
    double rho0 = 1e-3;        // pathloss at the 1 m reference distance (-30 dB)

    // large-scale fading exponents per link
    double alpha_bs_ris1 = 3.6;
    double alpha_bs_ris2 = 2.2;
    double alpha_ris1_ris2 = 2.2;
    double alpha_ris1_user = 2.2;
    double alpha_ris2_user = 2.2;

    Vec2 bs_pos{0.0, 0.0};
    Vec2 ris1_pos{2.0, 2.0};
    Vec2 ris2_pos{4.0, 2.0};
    Vec2 user_center{6.0, 0.0};
    double user_radius = 2.0;

    std::uint64_t seed = 1;

    double bcd_tol_w = 1e-3;   // outer-loop stop on |power change| [W]
    int bcd_max_outer = 30;
    double solver_tol = 1e-6;  // feasibility tolerance for margin checks

    int sca_max_iters = 30;
    double sca_rel_tol = 1e-4;

    int penalty_max_iters = 20;
    double penalty_tol_scale = 1e-5;  // rank-one tolerance = scale * (N + 1)
    int phase_max_sweeps = 5;
    double phase_sweep_rel_tol = 1e-4;
    double phase_slack_keep = 0.5;  // margin fraction preserved during rank-one pursuit

    /// Validate invariants; throws DomainError naming the offending field.
    void validate() const;

    /// Canonical key=value serialization (fixed key order, %.17g floats).
    std::string canonical() const;

    /// FNV-1a hash of canonical(), as a 16-digit hex string.
    std::string hash() const;
};

/// The literature defaults verbatim. Infeasible at n_ris1 = 50: the maximum
/// power the BS-side surface can harvest undershoots the 50 mW it consumes.
SystemConfig paper_defaults();

/// Same geometry with mu lowered to 0.1 mW so the harvest constraints admit
/// solutions inside the power budget. This is the default everywhere.
SystemConfig feasible_defaults();

/// Parse a key/value config file. Unknown keys are an error. Power-valued
/// fields take an optional unit suffix (w, mw, uw, dbm); ratio fields take
/// db. See README for the schema.
SystemConfig load_config(std::istream& in, const SystemConfig& base);
SystemConfig load_config_file(const std::string& path, const SystemConfig& base);

}  // namespace risopt
