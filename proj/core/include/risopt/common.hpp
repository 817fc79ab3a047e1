#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace risopt {

using cxd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(b.x - a.x, b.y - a.y);
}

/// Argument outside the physical/mathematical domain of an operation.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The RF power reaching a surface cannot cover its element consumption.
/// `shortfall_w` is the missing wattage, `surface` is 1 or 2.
struct InsufficientHarvest : std::runtime_error {
    InsufficientHarvest(int surface_, double shortfall_w_)
        : std::runtime_error("insufficient harvested power at RIS" + std::to_string(surface_) +
                             ", shortfall " + std::to_string(shortfall_w_) + " W"),
          surface(surface_),
          shortfall_w(shortfall_w_) {}
    int surface;
    double shortfall_w;
};

/// No feasible starting precoder exists for the current channel state.
struct InfeasibleAtInit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Every Monte-Carlo realization of an experiment failed to produce a solution.
struct ExperimentInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace risopt
