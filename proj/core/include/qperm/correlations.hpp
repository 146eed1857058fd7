#pragma once

#include <Eigen/Dense>

#include "qperm/single_particle.hpp"

namespace qperm {

enum class InitialState { MI, CDW };

const char* to_string(InitialState state);

/// Subsystem A covers sites 1..la. Degenerate cuts (la = 0 or la = L) are
/// rejected; the correlation matrix is not defined there.
struct CutSpec {
    int la = 0;
};

inline CutSpec half_cut(int sites) { return CutSpec{sites / 2}; }

/// Particle count N for a given initial state: L for MI, L/2 for CDW.
int particle_count(InitialState state, int sites);

/// Hermitian N x N correlation matrix Z for one (state, t, cut).
struct CorrelationMatrix {
    Eigen::MatrixXcd z;
    InitialState state = InitialState::MI;
    double tj = 0.0;
    int sites = 0;
    int la = 0;

    int n() const { return static_cast<int>(z.rows()); }
};

/// 2N x 2N block matrix [[I-Z, Z], [Z, I-Z]] whose permanent is Tr rho_A^2.
struct SwapMatrix {
    Eigen::MatrixXcd a;
    InitialState state = InitialState::MI;
    double tj = 0.0;
    int sites = 0;
    int la = 0;

    int n() const { return static_cast<int>(a.rows()) / 2; }
    int size() const { return static_cast<int>(a.rows()); }  // L-tilde = 2N
    Eigen::MatrixXcd z() const { return a.block(0, n(), n(), n()); }
};

CorrelationMatrix build_z(const Propagator& y, InitialState state, CutSpec cut);

SwapMatrix build_swap_matrix(const CorrelationMatrix& z);

/// Row-wise infinity-norm average g of A_Z, via the reduced N-row form
/// g = (1/N) sum_j max_l max(|z_{j,l}|, |delta_{j,l} - z_{j,l}|).
/// The two block-rows of A_Z give identical maxima, so scanning Z suffices.
double g_value(const SwapMatrix& a);

/// Entropy-density-like value s-tilde = 1 - g, computed from the diagonal:
/// s-tilde = 1/2 - (1/N) sum_j |z_{j,j} - 1/2|.
double entropy_density_like(const CorrelationMatrix& z);

/// Rigorous lower bound 1e-5 (1-g)^2 L-tilde on S_2.
double volume_law_lower_bound(double g, int ltilde);

/// Conjectured tighter bound const (1-g) L-tilde. Report-only: the constant
/// has no established value and the bound is never asserted.
double conjectured_lower_bound(double g, int ltilde, double constant);

/// Short-time block-structure diagnostics of an MI correlation matrix,
/// Z = [[I, 0, 0], [0, Z'_{2 beta}, 0], [0, 0, 0]] up to residuals.
struct StructureReport {
    int sites = 0;
    double tj = 0.0;
    double eps = 0.0;
    int support_width = 0;      // side of the square of entries breaking the block form
    int beta = 0;               // Bessel width at the same eps
    double four_tj = 0.0;       // expected support 2 beta ~ 4 tJ
    double identity_residual = 0.0;  // max |z - I| over the leading block outside 2 beta
    double zero_residual = 0.0;      // max |z| over the trailing block outside 2 beta
    bool block_valid = false;
};

StructureReport z_block_structure(const CorrelationMatrix& z, double eps = 1e-10);

}  // namespace qperm
