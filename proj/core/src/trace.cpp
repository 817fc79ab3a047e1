#include "risopt/trace.hpp"

#include <cstdio>
#include <ostream>

namespace risopt {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIters: return "max_iters";
        case SolveStatus::InfeasibleAtInit: return "infeasible_at_init";
        case SolveStatus::InsufficientHarvestStatus: return "insufficient_harvest";
    }
    return "?";
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_trace_jsonl(const SolveTrace& trace, std::ostream& os) {
    for (const auto& rec : trace.outer) {
        os << "{\"i\":" << rec.iteration << ",\"power_w\":" << num(rec.power_w)
           << ",\"beta1\":" << num(rec.beta1) << ",\"beta2\":" << num(rec.beta2)
           << ",\"min_sinr_margin\":" << num(rec.min_sinr_margin)
           << ",\"harvest1_margin_w\":" << num(rec.harvest1_margin_w)
           << ",\"harvest2_margin_w\":" << num(rec.harvest2_margin_w)
           << ",\"s1\":" << rec.sca_iters << ",\"s2\":" << rec.phase_sweeps
           << ",\"theta1_rejected\":" << (rec.theta1_rejected ? "true" : "false")
           << ",\"theta2_rejected\":" << (rec.theta2_rejected ? "true" : "false")
           << ",\"phase_stalled\":" << (rec.phase_stalled ? "true" : "false") << ",\"sca\":[";
        for (std::size_t j = 0; j < rec.sca.size(); ++j) {
            const auto& s = rec.sca[j];
            os << (j ? "," : "") << "{\"n\":" << s.iteration
               << ",\"objective_w\":" << num(s.objective_w)
               << ",\"min_sinr_margin\":" << num(s.min_sinr_margin)
               << ",\"harvest1_margin_w\":" << num(s.harvest1_margin_w)
               << ",\"harvest2_margin_w\":" << num(s.harvest2_margin_w) << ",\"status\":\""
               << to_string(s.status) << "\"}";
        }
        os << "],\"phase\":[";
        for (std::size_t j = 0; j < rec.phase.size(); ++j) {
            const auto& p = rec.phase[j];
            os << (j ? "," : "") << "{\"sweep\":" << p.sweep << ",\"side\":" << p.side
               << ",\"iter\":" << p.rec.iteration << ",\"penalty\":" << num(p.rec.penalty)
               << ",\"min_margin\":" << num(p.rec.min_margin) << ",\"status\":\""
               << to_string(p.rec.status) << "\",\"stalled\":" << (p.rec.stalled ? "true" : "false")
               << "}";
        }
        os << "]}\n";
    }
}

}  // namespace risopt
