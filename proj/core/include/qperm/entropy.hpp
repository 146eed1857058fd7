#pragma once

#include <complex>
#include <optional>
#include <stdexcept>

#include <Eigen/Dense>

#include "qperm/correlations.hpp"
#include "qperm/permanent.hpp"

namespace qperm {

/// Raised when the permanent value is unusable for S_2 = -ln perm A_Z
/// (nonpositive real part or a large imaginary remainder). This signals
/// accumulation failure in the kernel, not physics.
struct NumericalBreakdown : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EntropyPoint {
    InitialState state = InitialState::MI;
    int sites = 0;
    int la = 0;
    double tj = 0.0;
    double s2 = 0.0;
    std::complex<double> perm_value;
    double g = 0.0;
    double s_tilde = 0.0;
    double lower_bound = 0.0;
    std::optional<double> s2_gaussian;
    PermMethod method = PermMethod::bbfg;
    double perm_seconds = 0.0;
};

/// S_2 = -ln Re(perm A_Z), with the g / s-tilde / lower-bound diagnostics
/// attached. Re(perm) is clamped to <= 1 before the log (Tr rho_A^2 lies in
/// (0, 1] exactly; roundoff may push the computed value a hair above).
EntropyPoint renyi2(const SwapMatrix& a, PermMethod method = PermMethod::bbfg,
                    int workers = 1);

/// One-body correlation matrix C_{j,l} = <b^dag_j b_l>(t) restricted to A.
/// MI gives the identity for every t; CDW carries the even-site evolution.
Eigen::MatrixXcd one_body_matrix(const Propagator& y, InitialState state, CutSpec cut);

/// Gaussian-state Renyi entropy from mode occupations:
/// S_alpha = 1/(alpha-1) sum_mu ln[(n_mu+1)^alpha - n_mu^alpha].
/// Integer alpha >= 2; eigenvalues below -1e-10 are rejected, small
/// negative roundoff is clamped to zero.
double gaussian_renyi(const Eigen::MatrixXcd& c, int alpha = 2);

}  // namespace qperm
