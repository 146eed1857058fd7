#include "qperm/entropy.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace qperm {

EntropyPoint renyi2(const SwapMatrix& a, PermMethod method, int workers) {
    const auto t0 = std::chrono::steady_clock::now();
    const PermanentResult perm = permanent(a.a, method, workers);
    const auto t1 = std::chrono::steady_clock::now();

    const double re = perm.value.real();
    const double im = perm.value.imag();
    if (re <= 0.0) {
        throw NumericalBreakdown("renyi2: Re(perm A_Z) <= 0 (value " + std::to_string(re) + ")");
    }
    if (std::abs(im) > 1e-4 * re) {
        throw NumericalBreakdown("renyi2: |Im/Re| of perm A_Z exceeds 1e-4");
    }
    if (re > 1.0 + 1e-6) {
        throw NumericalBreakdown("renyi2: Re(perm A_Z) > 1 beyond roundoff");
    }

    EntropyPoint pt;
    pt.state = a.state;
    pt.sites = a.sites;
    pt.la = a.la;
    pt.tj = a.tj;
    pt.perm_value = perm.value;
    pt.s2 = std::max(-std::log(std::min(re, 1.0)), 0.0);
    pt.g = g_value(a);
    pt.s_tilde = std::max(1.0 - pt.g, 0.0);
    pt.lower_bound = volume_law_lower_bound(pt.g, a.size());
    pt.method = perm.method;
    pt.perm_seconds = std::chrono::duration<double>(t1 - t0).count();
    return pt;
}

Eigen::MatrixXcd one_body_matrix(const Propagator& y, InitialState state, CutSpec cut) {
    const int sites = y.sites();
    if (cut.la < 1 || cut.la > sites - 1) {
        throw std::invalid_argument("one_body_matrix: cut must satisfy 1 <= L_A <= L-1");
    }
    if (state == InitialState::MI) {
        // <b^dag_j b_l> = delta_{j,l} for all L and tJ.
        return Eigen::MatrixXcd::Identity(cut.la, cut.la);
    }
    const int n = particle_count(state, sites);
    Eigen::MatrixXcd ye(n, cut.la);  // even-site rows, columns in A
    for (int m = 0; m < n; ++m) ye.row(m) = y.y.row(2 * m + 1).head(cut.la);
    return ye.adjoint() * ye;
}

double gaussian_renyi(const Eigen::MatrixXcd& c, int alpha) {
    if (alpha < 2) {
        throw std::invalid_argument("gaussian_renyi: integer alpha >= 2 required (alpha = 1 limit not implemented)");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(c, Eigen::EigenvaluesOnly);
    double sum = 0.0;
    for (double n : solver.eigenvalues()) {
        if (n < -1e-10) {
            throw std::invalid_argument("gaussian_renyi: mode occupation below -1e-10");
        }
        n = std::max(n, 0.0);
        sum += std::log(std::pow(n + 1.0, alpha) - std::pow(n, alpha));
    }
    return sum / (alpha - 1);
}

}  // namespace qperm
