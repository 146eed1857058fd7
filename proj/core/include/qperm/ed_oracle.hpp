#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qperm/correlations.hpp"

namespace qperm {

/// Fixed-N occupation basis in lexicographic order, with index lookup.
/// Exact: no local-occupancy truncation.
struct FockBasis {
    int sites = 0;
    int particles = 0;
    std::vector<std::vector<int>> states;
    std::map<std::vector<int>, int> index;

    int dim() const { return static_cast<int>(states.size()); }
    int index_of(const std::vector<int>& occ) const;
};

/// Complete fixed-N enumeration; guarded at C(N+L-1, N) <= 5e6.
FockBasis enumerate_basis(int sites, int particles);

std::uint64_t fock_dimension(int sites, int particles);

struct QuenchSpec {
    int sites = 0;
    double hopping = 1.0;
    double interaction = 0.0;          // U
    Eigen::VectorXd potentials;        // Omega_j; empty means zero
    InitialState state = InitialState::MI;
    std::vector<double> times;         // tJ grid
};

/// Dense real-symmetric Bose-Hubbard Hamiltonian in the given basis,
/// open boundary, hopping amplitudes sqrt(n_j (n_{j+1} + 1)).
Eigen::MatrixXd build_hamiltonian(const FockBasis& basis, const QuenchSpec& spec);

/// Fock product state amplitude vector for the MI / CDW initial occupation.
Eigen::VectorXcd initial_state_vector(const FockBasis& basis, InitialState state);

/// One full diagonalization, then any time by phase multiplication.
class Evolver {
  public:
    explicit Evolver(const Eigen::MatrixXd& h);  // dimension <= 2e4

    Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi0, double t) const;

    /// Same decomposition reused across a whole time grid.
    std::vector<Eigen::VectorXcd> evolve_many(const Eigen::VectorXcd& psi0,
                                              const std::vector<double>& times) const;

    const Eigen::VectorXd& eigenvalues() const { return vals_; }

  private:
    Eigen::VectorXd vals_;
    Eigen::MatrixXd vecs_;
};

Eigen::VectorXcd evolve(const Eigen::MatrixXd& h, const Eigen::VectorXcd& psi0, double t);

/// Precomputed bipartite factorization of a Fock basis at a given cut:
/// each full-basis index maps to (block = particles in A, row, col).
struct BipartiteSplit {
    int la = 0;
    std::vector<int> block_of, row_of, col_of;
    std::vector<std::pair<int, int>> block_dims;  // (dim_A, dim_B) per n_A

    static BipartiteSplit build(const FockBasis& basis, CutSpec cut);
};

/// S_2 = -ln Tr rho_A^2 from the Schmidt spectrum of the reshaped amplitudes.
double renyi2_exact(const Eigen::VectorXcd& psi, const FockBasis& basis, CutSpec cut);
double renyi2_exact(const Eigen::VectorXcd& psi, const BipartiteSplit& split);

/// Page value from `samples` Haar-random fixed-N vectors (complex Gaussian
/// amplitudes, normalized). Returns (mean, standard error).
std::pair<double, double> page_value(const FockBasis& basis, CutSpec cut,
                                     int samples = 1024, std::uint64_t seed = 1);

struct EdTracePoint {
    double tj = 0.0;
    double s2 = 0.0;
};

/// S_2(t) trace for a finite-U quench; small systems only (L <= 10 at unit
/// filling).
std::vector<EdTracePoint> finite_u_scan(const QuenchSpec& spec, CutSpec cut);

/// <b^dag_j b_l> matrix of a many-body state (cross-check against the
/// single-particle propagator route).
Eigen::MatrixXcd one_body_from_state(const Eigen::VectorXcd& psi, const FockBasis& basis);

/// <psi| H |psi> and per-site densities, used by conservation checks.
double energy_expectation(const Eigen::VectorXcd& psi, const Eigen::MatrixXd& h);
Eigen::VectorXd density_expectation(const Eigen::VectorXcd& psi, const FockBasis& basis);

}  // namespace qperm
