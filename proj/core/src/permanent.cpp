#include "qperm/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

namespace qperm {

namespace {

struct Kahan {
    double sre = 0.0, sim = 0.0;
    double cre = 0.0, cim = 0.0;

    void add(double re, double im) {
        const double yre = re - cre;
        const double tre = sre + yre;
        cre = (tre - sre) - yre;
        sre = tre;
        const double yim = im - cim;
        const double tim = sim + yim;
        cim = (tim - sim) - yim;
        sim = tim;
    }
    std::complex<double> value() const { return {sre, sim}; }
};

inline void cmul(double& pr, double& pi, double qr, double qi) {
    const double r = pr * qr - pi * qi;
    pi = pr * qi + pi * qr;
    pr = r;
}

// Sequential product with scale-exponent tracking; taken only when the
// fast 4-way product leaves [1e-150, 1e150].
std::complex<double> product_scaled(const double* cre, const double* cim, int m) {
    double pr = 1.0, pi = 0.0;
    long e2 = 0;
    for (int l = 0; l < m; ++l) {
        cmul(pr, pi, cre[l], cim[l]);
        const double mag = std::abs(pr) + std::abs(pi);
        if (mag != 0.0 && (mag > 1e150 || mag < 1e-150)) {
            int ex = 0;
            std::frexp(mag, &ex);
            pr = std::ldexp(pr, -ex);
            pi = std::ldexp(pi, -ex);
            e2 += ex;
        }
    }
    const int shift = static_cast<int>(std::clamp<long>(e2, -2100, 2100));
    return {std::ldexp(pr, shift), std::ldexp(pi, shift)};
}

// Partial BBFG sum over the Gray-code positions [k0, k1). The caller divides
// the combined total by 2^{M-1}.
std::complex<double> bbfg_chunk(const double* are, const double* aim, int m,
                                std::uint64_t k0, std::uint64_t k1) {
    std::vector<double> cre(m), cim(m), delta(m);

    // Seed delta and the M column sums for this chunk's starting position.
    const std::uint64_t g = k0 ^ (k0 >> 1);
    delta[0] = 1.0;
    for (int r = 1; r < m; ++r) delta[r] = ((g >> (r - 1)) & 1u) ? -1.0 : 1.0;
    for (int l = 0; l < m; ++l) {
        double sr = 0.0, si = 0.0;
        for (int j = 0; j < m; ++j) {
            sr += delta[j] * are[j * m + l];
            si += delta[j] * aim[j * m + l];
        }
        cre[l] = sr;
        cim[l] = si;
    }
    double sign = (std::popcount(g) & 1) ? -1.0 : 1.0;

    Kahan acc;
    double* const cr = cre.data();
    double* const ci = cim.data();
    for (std::uint64_t k = k0; k < k1; ++k) {
        // Product of the M column sums, 4 independent accumulators to keep
        // the complex-multiply dependency chain short.
        double p0r = 1.0, p0i = 0.0, p1r = 1.0, p1i = 0.0;
        double p2r = 1.0, p2i = 0.0, p3r = 1.0, p3i = 0.0;
        int l = 0;
        for (; l + 4 <= m; l += 4) {
            cmul(p0r, p0i, cr[l], ci[l]);
            cmul(p1r, p1i, cr[l + 1], ci[l + 1]);
            cmul(p2r, p2i, cr[l + 2], ci[l + 2]);
            cmul(p3r, p3i, cr[l + 3], ci[l + 3]);
        }
        for (; l < m; ++l) cmul(p0r, p0i, cr[l], ci[l]);

        const double mags = (std::abs(p0r) + std::abs(p0i)) + (std::abs(p1r) + std::abs(p1i))
                          + (std::abs(p2r) + std::abs(p2i)) + (std::abs(p3r) + std::abs(p3i));
        double pr, pi;
        if (mags > 1e70 || mags < 1e-150) {
            const auto p = product_scaled(cr, ci, m);
            pr = p.real();
            pi = p.imag();
        } else {
            cmul(p0r, p0i, p1r, p1i);
            cmul(p2r, p2i, p3r, p3i);
            cmul(p0r, p0i, p2r, p2i);
            pr = p0r;
            pi = p0i;
        }
        acc.add(sign * pr, sign * pi);

        const std::uint64_t next = k + 1;
        if (next == k1) break;
        const int r = std::countr_zero(next) + 1;  // row whose delta flips
        delta[r] = -delta[r];
        const double f = 2.0 * delta[r];
        const double* ar = are + static_cast<std::size_t>(r) * m;
        const double* ai = aim + static_cast<std::size_t>(r) * m;
        for (int q = 0; q < m; ++q) {
            cr[q] += f * ar[q];
            ci[q] += f * ai[q];
        }
        sign = -sign;
    }
    return acc.value();
}

void split_rowmajor(const Eigen::MatrixXcd& a, std::vector<double>& re, std::vector<double>& im) {
    const int m = static_cast<int>(a.rows());
    re.resize(static_cast<std::size_t>(m) * m);
    im.resize(static_cast<std::size_t>(m) * m);
    for (int j = 0; j < m; ++j) {
        for (int l = 0; l < m; ++l) {
            re[static_cast<std::size_t>(j) * m + l] = a(j, l).real();
            im[static_cast<std::size_t>(j) * m + l] = a(j, l).imag();
        }
    }
}

void check_square(const Eigen::MatrixXcd& a) {
    if (a.rows() < 1 || a.rows() != a.cols()) {
        throw std::invalid_argument("permanent: matrix must be square with M >= 1");
    }
}

}  // namespace

const char* to_string(PermMethod method) {
    switch (method) {
        case PermMethod::naive: return "naive";
        case PermMethod::ryser: return "ryser";
        case PermMethod::bbfg: return "bbfg";
        case PermMethod::bbfg_parallel: return "bbfg_parallel";
    }
    return "?";
}

PermanentResult perm_naive(const Eigen::MatrixXcd& a) {
    check_square(a);
    const int m = static_cast<int>(a.rows());
    if (m > 12) throw std::invalid_argument("perm_naive: M <= 12 (factorial blow-up)");

    std::vector<int> cols(m);
    std::iota(cols.begin(), cols.end(), 0);
    std::complex<double> sum = 0.0;
    std::uint64_t count = 0;
    do {
        std::complex<double> prod = 1.0;
        for (int j = 0; j < m; ++j) prod *= a(j, cols[j]);
        sum += prod;
        ++count;
    } while (std::next_permutation(cols.begin(), cols.end()));

    return {sum, PermMethod::naive, count, false};
}

PermanentResult perm_ryser(const Eigen::MatrixXcd& a, int max_size) {
    check_square(a);
    const int m = static_cast<int>(a.rows());
    if (m > max_size) throw std::invalid_argument("perm_ryser: matrix exceeds the size guard");
    if (m > 62) throw std::invalid_argument("perm_ryser: subset index would overflow");

    std::vector<double> rre(m, 0.0), rim(m, 0.0);  // row sums over the active column set
    Kahan acc;
    const std::uint64_t total = (std::uint64_t{1} << m) - 1;
    std::uint64_t g = 0;
    for (std::uint64_t k = 1; k <= total; ++k) {
        const std::uint64_t gnext = k ^ (k >> 1);
        const int c = std::countr_zero(g ^ gnext);  // column entering or leaving
        const double f = (gnext >> c) & 1u ? 1.0 : -1.0;
        g = gnext;
        for (int j = 0; j < m; ++j) {
            rre[j] += f * a(j, c).real();
            rim[j] += f * a(j, c).imag();
        }
        double pr = 1.0, pi = 0.0;
        for (int j = 0; j < m; ++j) cmul(pr, pi, rre[j], rim[j]);
        const double sign = (std::popcount(g) & 1) ? -1.0 : 1.0;
        acc.add(sign * pr, sign * pi);
    }
    const double outer = (m % 2 == 0) ? 1.0 : -1.0;
    return {outer * acc.value(), PermMethod::ryser, total, true};
}

PermanentResult perm_bbfg(const Eigen::MatrixXcd& a, int max_size) {
    check_square(a);
    const int m = static_cast<int>(a.rows());
    if (m > max_size || m > 50) {
        throw std::invalid_argument("perm_bbfg: matrix exceeds the feasibility guard");
    }
    std::vector<double> re, im;
    split_rowmajor(a, re, im);
    const std::uint64_t total = std::uint64_t{1} << (m - 1);
    const std::complex<double> sum = bbfg_chunk(re.data(), im.data(), m, 0, total);
    const std::complex<double> value = {std::ldexp(sum.real(), -(m - 1)),
                                        std::ldexp(sum.imag(), -(m - 1))};
    return {value, PermMethod::bbfg, total, true};
}

PermanentResult perm_bbfg_parallel(const Eigen::MatrixXcd& a, int workers, int max_size) {
    check_square(a);
    if (workers < 1) throw std::invalid_argument("perm_bbfg_parallel: workers must be >= 1");
    const int m = static_cast<int>(a.rows());
    if (m > max_size || m > 50) {
        throw std::invalid_argument("perm_bbfg_parallel: matrix exceeds the feasibility guard");
    }
    std::vector<double> re, im;
    split_rowmajor(a, re, im);
    const std::uint64_t total = std::uint64_t{1} << (m - 1);
    const int nchunks = static_cast<int>(std::min<std::uint64_t>(workers, total));

    std::vector<std::complex<double>> partial(nchunks);
    std::vector<std::thread> pool;
    pool.reserve(nchunks);
    for (int i = 0; i < nchunks; ++i) {
        const std::uint64_t k0 = total / nchunks * i + std::min<std::uint64_t>(i, total % nchunks);
        const std::uint64_t k1 = k0 + total / nchunks + (static_cast<std::uint64_t>(i) < total % nchunks ? 1 : 0);
        pool.emplace_back([&, i, k0, k1] {
            partial[i] = bbfg_chunk(re.data(), im.data(), m, k0, k1);
        });
    }
    for (auto& t : pool) t.join();

    // Deterministic combination in worker order.
    Kahan acc;
    for (const auto& p : partial) acc.add(p.real(), p.imag());
    const std::complex<double> sum = acc.value();
    const std::complex<double> value = {std::ldexp(sum.real(), -(m - 1)),
                                        std::ldexp(sum.imag(), -(m - 1))};
    return {value, PermMethod::bbfg_parallel, total, true};
}

PermanentResult permanent(const Eigen::MatrixXcd& a, PermMethod method, int workers) {
    switch (method) {
        case PermMethod::naive: return perm_naive(a);
        case PermMethod::ryser: return perm_ryser(a);
        case PermMethod::bbfg: return perm_bbfg(a);
        case PermMethod::bbfg_parallel: return perm_bbfg_parallel(a, workers);
    }
    throw std::invalid_argument("permanent: unknown method");
}

}  // namespace qperm
