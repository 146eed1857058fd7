#include "qperm/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qperm {

std::vector<double> bessel_j_table(int nmax, double x) {
    if (nmax < 0) throw std::invalid_argument("bessel_j_table: nmax must be >= 0");
    if (x < 0.0) throw std::invalid_argument("bessel_j_table: x must be >= 0");

    std::vector<double> table(nmax + 1, 0.0);
    if (x == 0.0) {
        table[0] = 1.0;
        return table;
    }

    // Miller's algorithm: seed far above the turning point, recurse down,
    // normalize with J_0 + 2 sum_{k>=1} J_{2k} = 1.
    const int top = std::max(nmax, static_cast<int>(x)) + 20
        + static_cast<int>(3.0 * std::sqrt(std::max(nmax, static_cast<int>(x)) + 1.0));
    std::vector<double> work(top + 2, 0.0);
    work[top + 1] = 0.0;
    work[top] = 1e-30;
    double norm = 0.0;
    for (int k = top; k >= 1; --k) {
        work[k - 1] = (2.0 * k / x) * work[k] - work[k + 1];
        if (k - 1 > 0 && (k - 1) % 2 == 0) norm += 2.0 * work[k - 1];
        if (std::abs(work[k - 1]) > 1e250) {
            const double s = 1e-250;
            for (int m = k - 1; m <= top + 1; ++m) work[m] *= s;
            norm *= s;
        }
    }
    norm += work[0];
    for (int n = 0; n <= nmax; ++n) table[n] = work[n] / norm;
    return table;
}

double bessel_j(int n, double x) {
    return bessel_j_table(n, x)[n];
}

int bessel_beta(double tj, double eps) {
    if (tj < 0.0) throw std::invalid_argument("bessel_beta: tJ must be >= 0");
    if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("bessel_beta: eps must be in (0,1)");
    if (tj == 0.0) return 1;

    const double x = 2.0 * tj;

    // Factorial bound (x/2)^n / n! caps the search: past ncap every J_n is
    // below eps, and the asymptotic estimate beta ~ (e/2) x sits well inside.
    int ncap = 1;
    double log_bound = std::log(x / 2.0);  // log[(x/2)^n / n!], overflow-safe
    const double log_eps = std::log(eps);
    while (log_bound >= log_eps || ncap < x / 2.0) {
        ++ncap;
        log_bound += std::log(x / 2.0) - std::log(static_cast<double>(ncap));
        if (ncap > 100000000) throw std::runtime_error("bessel_beta: cap search diverged");
    }

    const auto table = bessel_j_table(ncap, x);
    // smallest n such that |J_m| < eps for every m in [n, ncap]
    int beta = ncap + 1;
    for (int n = ncap; n >= 1; --n) {
        if (std::abs(table[n]) < eps) beta = n;
        else break;
    }
    return beta;
}

}  // namespace qperm
