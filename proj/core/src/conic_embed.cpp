#include "risopt/conic.hpp"

namespace risopt {

const char* to_string(ConicStatus s) {
    switch (s) {
        case ConicStatus::Optimal: return "optimal";
        case ConicStatus::Infeasible: return "infeasible";
        case ConicStatus::NumericalFailure: return "numerical_failure";
    }
    return "?";
}

MatrixXd hermitian_to_real_psd(const MatrixXcd& a) {
    if (a.rows() != a.cols()) throw DomainError("hermitian_to_real_psd: matrix not square");
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw DomainError("hermitian_to_real_psd: matrix not Hermitian");
    const auto n = a.rows();
    MatrixXd m(2 * n, 2 * n);
    m.topLeftCorner(n, n) = a.real();
    m.topRightCorner(n, n) = -a.imag();
    m.bottomLeftCorner(n, n) = a.imag();
    m.bottomRightCorner(n, n) = a.real();
    return m;
}

MatrixXcd real_psd_to_hermitian(const MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() % 2 != 0)
        throw DomainError("real_psd_to_hermitian: bad dimensions");
    const auto n = m.rows() / 2;
    MatrixXcd a(n, n);
    a.real() = m.topLeftCorner(n, n);
    a.imag() = m.bottomLeftCorner(n, n);
    return a;
}

}  // namespace risopt
