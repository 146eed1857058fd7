#include "qperm/single_particle.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace qperm {

SpectralBasis solve_open_chain(const LatticeSpec& spec) {
    if (spec.sites < 1) {
        throw std::invalid_argument("solve_open_chain: site count must be >= 1");
    }
    if (spec.hopping <= 0.0) {
        throw std::invalid_argument("solve_open_chain: hopping must be positive");
    }
    const int n = spec.sites;
    const double pref = std::sqrt(2.0 / (n + 1));

    SpectralBasis basis;
    basis.lattice = spec;
    basis.eigenvalues.resize(n);
    basis.modes.resize(n, n);
    for (int k = 0; k < n; ++k) {
        const double theta = (k + 1) * std::numbers::pi / (n + 1);
        basis.eigenvalues(k) = -2.0 * spec.hopping * std::cos(theta);
        for (int l = 0; l < n; ++l) {
            basis.modes(k, l) = pref * std::sin(theta * (l + 1));
        }
    }
    return basis;
}

Propagator propagator(const SpectralBasis& basis, double tj) {
    if (tj < 0.0) {
        throw std::invalid_argument("propagator: time must be nonnegative");
    }
    const int n = basis.sites();
    const double j = basis.lattice.hopping;

    // Y = X^T exp(-i E t) X with phases taken at dimensionless tJ.
    Eigen::VectorXcd phases(n);
    for (int k = 0; k < n; ++k) {
        phases(k) = std::polar(1.0, -basis.eigenvalues(k) / j * tj);
    }
    Eigen::MatrixXcd tmp = phases.asDiagonal() * basis.modes.cast<std::complex<double>>();
    Propagator prop;
    prop.y = basis.modes.transpose().cast<std::complex<double>>() * tmp;
    prop.tj = tj;
    return prop;
}

}  // namespace qperm
