#pragma once

#include <Eigen/Dense>

namespace qperm {

/// Open-boundary hopping chain. Time is always handled as the
/// dimensionless combination tJ; `hopping` is kept for reporting only.
struct LatticeSpec {
    int sites = 0;
    double hopping = 1.0;
};

/// Closed-form eigenpairs of the open chain.
/// `modes(k, l)` is the amplitude of mode k at site l (both 0-based here;
/// the physics convention k,l = 1..L maps to indices k-1, l-1).
struct SpectralBasis {
    LatticeSpec lattice;
    Eigen::VectorXd eigenvalues;  // eps_k = -2J cos(k pi / (L+1)), ascending
    Eigen::MatrixXd modes;        // real orthogonal, row k = mode k

    int sites() const { return lattice.sites; }
};

/// Single-particle time-evolution matrix y_{j,l}(t), unitary.
struct Propagator {
    Eigen::MatrixXcd y;
    double tj = 0.0;  // time in units of 1/J

    int sites() const { return static_cast<int>(y.rows()); }
};

/// Eigenvalues and eigenvectors from the exact sine-mode formulas.
/// No numerical diagonalization is involved.
SpectralBasis solve_open_chain(const LatticeSpec& spec);

/// y_{j,l}(tJ) = sum_k x_{k,j} exp(-i eps_k t) x_{k,l}.
Propagator propagator(const SpectralBasis& basis, double tj);

}  // namespace qperm
