#include "risopt/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace risopt {

double dbm_to_watts(double x_dbm) {
    return std::pow(10.0, (x_dbm - 30.0) / 10.0);
}

void SystemConfig::validate() const {
    auto fail = [](const std::string& msg) { throw DomainError("config: " + msg); };
    if (antennas < 1) fail("antennas must be >= 1");
    if (users < 1) fail("users must be >= 1");
    if (n_ris1 < 0 || n_ris2 < 0) fail("element counts must be >= 0");
    if (n_ris1 + n_ris2 < 1) fail("at least one reflection element required");
    if (!(eta > 0.0 && eta <= 1.0)) fail("eta must be in (0, 1]");
    if (mu_w < 0.0) fail("mu must be >= 0");
    if (!(p_max_w > 0.0)) fail("p_max must be > 0");
    if (!(noise_w > 0.0)) fail("sigma2 must be > 0");
    if (!(sinr_target > 0.0)) fail("gamma_bar must be > 0");
    if (!(penalty_tau > 0.0)) fail("tau must be > 0");
    if (rician_k < 0.0) fail("kappa must be >= 0");
    if (!(rho0 > 0.0)) fail("rho0 must be > 0");
    if (user_radius < 0.0) fail("user_radius must be >= 0");
    if (!(bcd_tol_w > 0.0)) fail("eps must be > 0");
    if (bcd_max_outer < 0) fail("i_max must be >= 0");
    if (!(solver_tol > 0.0)) fail("solver_tol must be > 0");
    if (sca_max_iters < 1) fail("sca_max_iters must be >= 1");
    if (!(sca_rel_tol > 0.0)) fail("sca_rel_tol must be > 0");
    if (penalty_max_iters < 1) fail("penalty_max_iters must be >= 1");
    if (phase_max_sweeps < 0) fail("phase_max_sweeps must be >= 0");
    if (!(phase_slack_keep >= 0.0 && phase_slack_keep <= 1.0)) fail("phase_slack_keep must be in [0, 1]");
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string SystemConfig::canonical() const {
    std::ostringstream os;
    os << "m=" << antennas << "\nk=" << users << "\nn1=" << n_ris1 << "\nn2=" << n_ris2
       << "\neta=" << fmt(eta) << "\nmu=" << fmt(mu_w) << "\ngamma_bar=" << fmt(sinr_target)
       << "\np_max=" << fmt(p_max_w) << "\nsigma2=" << fmt(noise_w) << "\ntau=" << fmt(penalty_tau)
       << "\nkappa=" << fmt(rician_k) << "\nrho0=" << fmt(rho0)
       << "\nalpha_bs_ris1=" << fmt(alpha_bs_ris1) << "\nalpha_bs_ris2=" << fmt(alpha_bs_ris2)
       << "\nalpha_ris1_ris2=" << fmt(alpha_ris1_ris2) << "\nalpha_ris1_user=" << fmt(alpha_ris1_user)
       << "\nalpha_ris2_user=" << fmt(alpha_ris2_user)
       << "\nbs=" << fmt(bs_pos.x) << "," << fmt(bs_pos.y)
       << "\nris1=" << fmt(ris1_pos.x) << "," << fmt(ris1_pos.y)
       << "\nris2=" << fmt(ris2_pos.x) << "," << fmt(ris2_pos.y)
       << "\nuser_center=" << fmt(user_center.x) << "," << fmt(user_center.y)
       << "\nuser_radius=" << fmt(user_radius) << "\nseed=" << seed
       << "\neps=" << fmt(bcd_tol_w) << "\ni_max=" << bcd_max_outer
       << "\nsolver_tol=" << fmt(solver_tol) << "\nsca_max_iters=" << sca_max_iters
       << "\nsca_rel_tol=" << fmt(sca_rel_tol) << "\npenalty_max_iters=" << penalty_max_iters
       << "\npenalty_tol_scale=" << fmt(penalty_tol_scale) << "\nphase_max_sweeps=" << phase_max_sweeps
       << "\nphase_sweep_rel_tol=" << fmt(phase_sweep_rel_tol)
       << "\nphase_slack_keep=" << fmt(phase_slack_keep) << "\n";
    return os.str();
}

std::string SystemConfig::hash() const {
    const std::string text = canonical();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

SystemConfig paper_defaults() {
    return SystemConfig{};
}

SystemConfig feasible_defaults() {
    SystemConfig cfg;
    cfg.mu_w = 1e-4;
    return cfg;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

// "10 w" / "40 dbm" / "1 mw" / bare number (watts)
double parse_power(const std::string& key, const std::string& value) {
    std::istringstream is(value);
    double num = 0;
    std::string unit;
    if (!(is >> num)) throw DomainError("config: bad number for " + key + ": '" + value + "'");
    is >> unit;
    unit = lower(unit);
    if (unit.empty() || unit == "w") return num;
    if (unit == "mw") return num * 1e-3;
    if (unit == "uw") return num * 1e-6;
    if (unit == "dbm") return dbm_to_watts(num);
    throw DomainError("config: unknown power unit '" + unit + "' for " + key);
}

// "100" (linear) / "20 db"
double parse_ratio(const std::string& key, const std::string& value) {
    std::istringstream is(value);
    double num = 0;
    std::string unit;
    if (!(is >> num)) throw DomainError("config: bad number for " + key + ": '" + value + "'");
    is >> unit;
    unit = lower(unit);
    if (unit.empty()) return num;
    if (unit == "db") return std::pow(10.0, num / 10.0);
    throw DomainError("config: unknown ratio unit '" + unit + "' for " + key);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (trim(value.substr(pos)) != "") throw DomainError("config: trailing text for " + key);
    return v;
}

long long parse_int(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    long long v = std::stoll(value, &pos);
    if (trim(value.substr(pos)) != "") throw DomainError("config: trailing text for " + key);
    return v;
}

}  // namespace

SystemConfig load_config(std::istream& in, const SystemConfig& base) {
    SystemConfig cfg = base;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DomainError("config: line " + std::to_string(lineno) + " is not key = value");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "m") cfg.antennas = static_cast<int>(parse_int(key, value));
        else if (key == "k") cfg.users = static_cast<int>(parse_int(key, value));
        else if (key == "n1") cfg.n_ris1 = static_cast<int>(parse_int(key, value));
        else if (key == "n2") cfg.n_ris2 = static_cast<int>(parse_int(key, value));
        else if (key == "eta") cfg.eta = parse_double(key, value);
        else if (key == "mu") cfg.mu_w = parse_power(key, value);
        else if (key == "gamma_bar") cfg.sinr_target = parse_ratio(key, value);
        else if (key == "p_max") cfg.p_max_w = parse_power(key, value);
        else if (key == "sigma2") cfg.noise_w = parse_power(key, value);
        else if (key == "tau") cfg.penalty_tau = parse_double(key, value);
        else if (key == "kappa") cfg.rician_k = parse_double(key, value);
        else if (key == "rho0") cfg.rho0 = parse_ratio(key, value);
        else if (key == "alpha_bs_ris1") cfg.alpha_bs_ris1 = parse_double(key, value);
        else if (key == "alpha_bs_ris2") cfg.alpha_bs_ris2 = parse_double(key, value);
        else if (key == "alpha_ris1_ris2") cfg.alpha_ris1_ris2 = parse_double(key, value);
        else if (key == "alpha_ris1_user") cfg.alpha_ris1_user = parse_double(key, value);
        else if (key == "alpha_ris2_user") cfg.alpha_ris2_user = parse_double(key, value);
        else if (key == "bs_x") cfg.bs_pos.x = parse_double(key, value);
        else if (key == "bs_y") cfg.bs_pos.y = parse_double(key, value);
        else if (key == "ris1_x") cfg.ris1_pos.x = parse_double(key, value);
        else if (key == "ris1_y") cfg.ris1_pos.y = parse_double(key, value);
        else if (key == "ris2_x") cfg.ris2_pos.x = parse_double(key, value);
        else if (key == "ris2_y") cfg.ris2_pos.y = parse_double(key, value);
        else if (key == "user_center_x") cfg.user_center.x = parse_double(key, value);
        else if (key == "user_center_y") cfg.user_center.y = parse_double(key, value);
        else if (key == "user_radius") cfg.user_radius = parse_double(key, value);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
        else if (key == "eps") cfg.bcd_tol_w = parse_double(key, value);
        else if (key == "i_max") cfg.bcd_max_outer = static_cast<int>(parse_int(key, value));
        else if (key == "solver_tol") cfg.solver_tol = parse_double(key, value);
        else if (key == "sca_max_iters") cfg.sca_max_iters = static_cast<int>(parse_int(key, value));
        else if (key == "sca_rel_tol") cfg.sca_rel_tol = parse_double(key, value);
        else if (key == "penalty_max_iters") cfg.penalty_max_iters = static_cast<int>(parse_int(key, value));
        else if (key == "penalty_tol_scale") cfg.penalty_tol_scale = parse_double(key, value);
        else if (key == "phase_max_sweeps") cfg.phase_max_sweeps = static_cast<int>(parse_int(key, value));
        else if (key == "phase_sweep_rel_tol") cfg.phase_sweep_rel_tol = parse_double(key, value);
        else if (key == "phase_slack_keep") cfg.phase_slack_keep = parse_double(key, value);
        else throw DomainError("config: unknown key '" + key + "' at line " + std::to_string(lineno));
    }
    cfg.validate();
    return cfg;
}

SystemConfig load_config_file(const std::string& path, const SystemConfig& base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return load_config(in, base);
}

}  // namespace risopt
