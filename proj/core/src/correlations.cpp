#include "qperm/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qperm/bessel.hpp"

namespace qperm {

const char* to_string(InitialState state) {
    return state == InitialState::MI ? "MI" : "CDW";
}

int particle_count(InitialState state, int sites) {
    if (state == InitialState::CDW) {
        if (sites % 2 != 0) throw std::invalid_argument("CDW requires an even site count");
        return sites / 2;
    }
    return sites;
}

CorrelationMatrix build_z(const Propagator& y, InitialState state, CutSpec cut) {
    const int sites = y.sites();
    if (cut.la < 1 || cut.la > sites - 1) {
        throw std::invalid_argument("build_z: cut must satisfy 1 <= L_A <= L-1");
    }
    const int n = particle_count(state, sites);

    // z_{j,l} = sum_{m<=L_A} y*_{j,m} y_{l,m}, rows restricted to even sites
    // for the CDW state. YA holds the first L_A columns of the relevant rows.
    Eigen::MatrixXcd ya(n, cut.la);
    for (int j = 0; j < n; ++j) {
        const int row = (state == InitialState::CDW) ? 2 * j + 1 : j;
        ya.row(j) = y.y.row(row).head(cut.la);
    }

    CorrelationMatrix out;
    out.z = ya.conjugate() * ya.transpose();
    out.state = state;
    out.tj = y.tj;
    out.sites = sites;
    out.la = cut.la;
    return out;
}

SwapMatrix build_swap_matrix(const CorrelationMatrix& z) {
    const int n = z.n();
    SwapMatrix out;
    out.a.resize(2 * n, 2 * n);
    const Eigen::MatrixXcd izz = Eigen::MatrixXcd::Identity(n, n) - z.z;
    out.a.block(0, 0, n, n) = izz;
    out.a.block(0, n, n, n) = z.z;
    out.a.block(n, 0, n, n) = z.z;
    out.a.block(n, n, n, n) = izz;
    out.state = z.state;
    out.tj = z.tj;
    out.sites = z.sites;
    out.la = z.la;
    return out;
}

double g_value(const SwapMatrix& a) {
    const int n = a.n();
    const Eigen::MatrixXcd z = a.z();
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        double rowmax = 0.0;
        for (int l = 0; l < n; ++l) {
            const double zv = std::abs(z(j, l));
            const double dv = std::abs((j == l ? 1.0 : 0.0) - z(j, l));
            rowmax = std::max({rowmax, zv, dv});
        }
        acc += rowmax;
    }
    return acc / n;
}

double entropy_density_like(const CorrelationMatrix& z) {
    const int n = z.n();
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        acc += std::abs(z.z(j, j).real() - 0.5);
    }
    return 0.5 - acc / n;
}

double volume_law_lower_bound(double g, int ltilde) {
    // roundoff can push g marginally outside [0,1] at special times (e.g. t = 0)
    if (g < -1e-12 || g > 1.0 + 1e-12) {
        throw std::invalid_argument("volume_law_lower_bound: g must be in [0,1]");
    }
    g = std::clamp(g, 0.0, 1.0);
    return 1e-5 * (1.0 - g) * (1.0 - g) * ltilde;
}

double conjectured_lower_bound(double g, int ltilde, double constant) {
    return constant * (1.0 - g) * ltilde;
}

StructureReport z_block_structure(const CorrelationMatrix& z, double eps) {
    if (z.state != InitialState::MI) {
        throw std::invalid_argument("z_block_structure is defined for MI correlation matrices");
    }
    const int n = z.n();

    StructureReport rep;
    rep.sites = z.sites;
    rep.tj = z.tj;
    rep.eps = eps;
    rep.beta = bessel_beta(z.tj, eps);
    rep.four_tj = 4.0 * z.tj;

    // Deviation from the t=0 structure diag(I_{L_A}, 0): rows touched by it
    // give the measured support square around the cut.
    int rmin = n, rmax = -1;
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
            const double expected = (j == l && j < z.la) ? 1.0 : 0.0;
            if (std::abs(z.z(j, l) - expected) > eps) {
                rmin = std::min({rmin, j, l});
                rmax = std::max({rmax, j, l});
            }
        }
    }
    rep.support_width = (rmax >= rmin) ? rmax - rmin + 1 : 0;

    // Residuals of the identity / zero blocks left over once a band of
    // half-width beta around the cut is excised.
    const int lo = z.la - rep.beta;
    const int hi = z.la + rep.beta;  // exclusive band [lo, hi)
    double id_res = 0.0, zero_res = 0.0;
    for (int j = 0; j < std::min(lo, n); ++j) {
        for (int l = 0; l < std::min(lo, n); ++l) {
            id_res = std::max(id_res, std::abs(z.z(j, l) - (j == l ? 1.0 : 0.0)));
        }
    }
    for (int j = std::max(hi, 0); j < n; ++j) {
        for (int l = std::max(hi, 0); l < n; ++l) {
            zero_res = std::max(zero_res, std::abs(z.z(j, l)));
        }
    }
    rep.identity_residual = id_res;
    rep.zero_residual = zero_res;
    rep.block_valid = (2 * rep.beta < n) && (rep.support_width < n);
    return rep;
}

}  // namespace qperm
