#include "qperm/ed_oracle.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include <lapacke.h>

namespace qperm {

namespace {

void enumerate_rec(int site, int remaining, std::vector<int>& occ,
                   std::vector<std::vector<int>>& out) {
    if (site == static_cast<int>(occ.size()) - 1) {
        occ[site] = remaining;
        out.push_back(occ);
        return;
    }
    for (int n = 0; n <= remaining; ++n) {
        occ[site] = n;
        enumerate_rec(site + 1, remaining - n, occ, out);
    }
}

}  // namespace

std::uint64_t fock_dimension(int sites, int particles) {
    // C(N + L - 1, N), stars and bars
    std::uint64_t dim = 1;
    for (int i = 1; i <= particles; ++i) {
        dim = dim * (sites - 1 + i) / i;
    }
    return dim;
}

int FockBasis::index_of(const std::vector<int>& occ) const {
    const auto it = index.find(occ);
    if (it == index.end()) throw std::out_of_range("FockBasis: occupation not in basis");
    return it->second;
}

FockBasis enumerate_basis(int sites, int particles) {
    if (sites < 1 || particles < 0) {
        throw std::invalid_argument("enumerate_basis: need sites >= 1, particles >= 0");
    }
    if (fock_dimension(sites, particles) > 5'000'000ull) {
        throw std::invalid_argument("enumerate_basis: basis dimension exceeds 5e6 guard");
    }
    FockBasis basis;
    basis.sites = sites;
    basis.particles = particles;
    std::vector<int> occ(sites, 0);
    enumerate_rec(0, particles, occ, basis.states);
    for (int i = 0; i < basis.dim(); ++i) basis.index[basis.states[i]] = i;
    return basis;
}

Eigen::MatrixXd build_hamiltonian(const FockBasis& basis, const QuenchSpec& spec) {
    const int dim = basis.dim();
    const int sites = basis.sites;
    Eigen::VectorXd omega = spec.potentials;
    if (omega.size() == 0) omega = Eigen::VectorXd::Zero(sites);
    if (omega.size() != sites) {
        throw std::invalid_argument("build_hamiltonian: potential length mismatch");
    }

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    std::vector<int> hopped;
    for (int i = 0; i < dim; ++i) {
        const auto& occ = basis.states[i];
        double diag = 0.0;
        for (int j = 0; j < sites; ++j) {
            diag += omega(j) * occ[j] + 0.5 * spec.interaction * occ[j] * (occ[j] - 1.0);
        }
        h(i, i) = diag;
        // -J b^dag_{j+1} b_j moves one particle right; H.c. filled by symmetry
        for (int j = 0; j + 1 < sites; ++j) {
            if (occ[j] == 0) continue;
            hopped = occ;
            hopped[j] -= 1;
            hopped[j + 1] += 1;
            const int k = basis.index_of(hopped);
            const double amp = -spec.hopping * std::sqrt(occ[j] * (occ[j + 1] + 1.0));
            h(k, i) += amp;
            h(i, k) += amp;
        }
    }
    return h;
}

Eigen::VectorXcd initial_state_vector(const FockBasis& basis, InitialState state) {
    std::vector<int> occ(basis.sites, 0);
    if (state == InitialState::MI) {
        if (basis.particles != basis.sites) {
            throw std::invalid_argument("initial_state_vector: MI needs N = L");
        }
        std::fill(occ.begin(), occ.end(), 1);
    } else {
        if (basis.sites % 2 != 0 || basis.particles != basis.sites / 2) {
            throw std::invalid_argument("initial_state_vector: CDW needs even L and N = L/2");
        }
        for (int j = 1; j < basis.sites; j += 2) occ[j] = 1;  // sites 2, 4, ...
    }
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(basis.dim());
    psi(basis.index_of(occ)) = 1.0;
    return psi;
}

Evolver::Evolver(const Eigen::MatrixXd& h) {
    const int dim = static_cast<int>(h.rows());
    if (dim > 20000) throw std::invalid_argument("Evolver: dimension exceeds the 2e4 guard");
    vecs_ = h;
    vals_.resize(dim);
    const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', dim, vecs_.data(), dim, vals_.data());
    if (info != 0) throw std::runtime_error("Evolver: dsyevd failed");
}

Eigen::VectorXcd Evolver::evolve(const Eigen::VectorXcd& psi0, double t) const {
    return evolve_many(psi0, {t}).front();
}

std::vector<Eigen::VectorXcd> Evolver::evolve_many(const Eigen::VectorXcd& psi0,
                                                   const std::vector<double>& times) const {
    // Real/imaginary parts handled separately so the large gemv stays real
    // (vecs_ is real orthogonal) and no dim^2 complex temporary is formed.
    const Eigen::VectorXd cr = vecs_.transpose() * psi0.real();
    const Eigen::VectorXd ci = vecs_.transpose() * psi0.imag();
    std::vector<Eigen::VectorXcd> out;
    out.reserve(times.size());
    Eigen::VectorXd pr(cr.size()), pi(cr.size());
    for (const double t : times) {
        for (int k = 0; k < cr.size(); ++k) {
            const double c = std::cos(vals_(k) * t);
            const double s = -std::sin(vals_(k) * t);
            pr(k) = cr(k) * c - ci(k) * s;
            pi(k) = cr(k) * s + ci(k) * c;
        }
        Eigen::VectorXcd psi(cr.size());
        psi.real() = vecs_ * pr;
        psi.imag() = vecs_ * pi;
        out.push_back(std::move(psi));
    }
    return out;
}

Eigen::VectorXcd evolve(const Eigen::MatrixXd& h, const Eigen::VectorXcd& psi0, double t) {
    return Evolver(h).evolve(psi0, t);
}

BipartiteSplit BipartiteSplit::build(const FockBasis& basis, CutSpec cut) {
    if (cut.la < 1 || cut.la > basis.sites - 1) {
        throw std::invalid_argument("BipartiteSplit: cut must satisfy 1 <= L_A <= L-1");
    }
    const int lb = basis.sites - cut.la;
    const int npart = basis.particles;

    BipartiteSplit split;
    split.la = cut.la;
    split.block_dims.resize(npart + 1);

    // Sub-basis index maps per particle-number sector.
    std::vector<std::map<std::vector<int>, int>> aidx(npart + 1), bidx(npart + 1);
    for (int na = 0; na <= npart; ++na) {
        std::vector<std::vector<int>> astates, bstates;
        std::vector<int> occ(cut.la, 0);
        enumerate_rec(0, na, occ, astates);
        occ.assign(lb, 0);
        enumerate_rec(0, npart - na, occ, bstates);
        for (int i = 0; i < static_cast<int>(astates.size()); ++i) aidx[na][astates[i]] = i;
        for (int i = 0; i < static_cast<int>(bstates.size()); ++i) bidx[na][bstates[i]] = i;
        split.block_dims[na] = {static_cast<int>(astates.size()), static_cast<int>(bstates.size())};
    }

    const int dim = basis.dim();
    split.block_of.resize(dim);
    split.row_of.resize(dim);
    split.col_of.resize(dim);
    for (int i = 0; i < dim; ++i) {
        const auto& occ = basis.states[i];
        std::vector<int> aocc(occ.begin(), occ.begin() + cut.la);
        std::vector<int> bocc(occ.begin() + cut.la, occ.end());
        int na = 0;
        for (const int n : aocc) na += n;
        split.block_of[i] = na;
        split.row_of[i] = aidx[na].at(aocc);
        split.col_of[i] = bidx[na].at(bocc);
    }
    return split;
}

double renyi2_exact(const Eigen::VectorXcd& psi, const BipartiteSplit& split) {
    const int nblocks = static_cast<int>(split.block_dims.size());
    std::vector<Eigen::MatrixXcd> blocks(nblocks);
    for (int na = 0; na < nblocks; ++na) {
        blocks[na] = Eigen::MatrixXcd::Zero(split.block_dims[na].first, split.block_dims[na].second);
    }
    for (int i = 0; i < psi.size(); ++i) {
        blocks[split.block_of[i]](split.row_of[i], split.col_of[i]) = psi(i);
    }
    // rho_A is block diagonal in n_A; Tr rho_A^2 = sum over blocks of
    // the fourth powers of the Schmidt values.
    double purity = 0.0;
    for (const auto& block : blocks) {
        if (block.size() == 0) continue;
        const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block);
        for (const double s : svd.singularValues()) purity += s * s * s * s;
    }
    return -std::log(purity);
}

double renyi2_exact(const Eigen::VectorXcd& psi, const FockBasis& basis, CutSpec cut) {
    return renyi2_exact(psi, BipartiteSplit::build(basis, cut));
}

std::pair<double, double> page_value(const FockBasis& basis, CutSpec cut,
                                     int samples, std::uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("page_value: need at least 2 samples");
    const BipartiteSplit split = BipartiteSplit::build(basis, cut);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    double sum = 0.0, sumsq = 0.0;
    Eigen::VectorXcd psi(basis.dim());
    for (int s = 0; s < samples; ++s) {
        for (int i = 0; i < psi.size(); ++i) {
            psi(i) = std::complex<double>(gauss(rng), gauss(rng));
        }
        psi.normalize();
        const double s2 = renyi2_exact(psi, split);
        sum += s2;
        sumsq += s2 * s2;
    }
    const double mean = sum / samples;
    const double var = (sumsq - samples * mean * mean) / (samples - 1);
    return {mean, std::sqrt(std::max(var, 0.0) / samples)};
}

std::vector<EdTracePoint> finite_u_scan(const QuenchSpec& spec, CutSpec cut) {
    if (spec.state == InitialState::MI && spec.sites > 10) {
        throw std::invalid_argument("finite_u_scan: unit filling limited to L <= 10");
    }
    const FockBasis basis = enumerate_basis(spec.sites, particle_count(spec.state, spec.sites));
    const Eigen::MatrixXd h = build_hamiltonian(basis, spec);
    const Evolver evolver(h);
    const Eigen::VectorXcd psi0 = initial_state_vector(basis, spec.state);
    const BipartiteSplit split = BipartiteSplit::build(basis, cut);

    std::vector<EdTracePoint> trace;
    trace.reserve(spec.times.size());
    const auto states = evolver.evolve_many(psi0, spec.times);
    for (std::size_t i = 0; i < spec.times.size(); ++i) {
        trace.push_back({spec.times[i], renyi2_exact(states[i], split)});
    }
    return trace;
}

Eigen::MatrixXcd one_body_from_state(const Eigen::VectorXcd& psi, const FockBasis& basis) {
    const int sites = basis.sites;
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(sites, sites);
    std::vector<int> moved;
    for (int i = 0; i < basis.dim(); ++i) {
        const auto& occ = basis.states[i];
        for (int l = 0; l < sites; ++l) {
            if (occ[l] == 0) continue;
            c(l, l) += std::norm(psi(i)) * occ[l];
            for (int j = 0; j < sites; ++j) {
                if (j == l) continue;
                moved = occ;
                moved[l] -= 1;
                moved[j] += 1;
                const int k = basis.index_of(moved);
                c(j, l) += std::conj(psi(k)) * psi(i) * std::sqrt(occ[l] * (occ[j] + 1.0));
            }
        }
    }
    return c;
}

double energy_expectation(const Eigen::VectorXcd& psi, const Eigen::MatrixXd& h) {
    const Eigen::VectorXd re = psi.real();
    const Eigen::VectorXd im = psi.imag();
    return re.dot(h * re) + im.dot(h * im);
}

Eigen::VectorXd density_expectation(const Eigen::VectorXcd& psi, const FockBasis& basis) {
    Eigen::VectorXd n = Eigen::VectorXd::Zero(basis.sites);
    for (int i = 0; i < basis.dim(); ++i) {
        const double w = std::norm(psi(i));
        for (int j = 0; j < basis.sites; ++j) n(j) += w * basis.states[i][j];
    }
    return n;
}

}  // namespace qperm
