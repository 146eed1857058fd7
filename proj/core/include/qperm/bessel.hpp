#pragma once

#include <vector>

namespace qperm {

/// Bessel function of the first kind J_n(x) for integer n >= 0, x >= 0,
/// evaluated by downward recurrence with normalization.
double bessel_j(int n, double x);

/// J_0(x) .. J_nmax(x) in one downward sweep.
std::vector<double> bessel_j_table(int nmax, double x);

/// Smallest positive integer beta with |J_m(2 tJ)| < eps for all m >= beta.
/// tJ = 0 returns 1 (all J_n(0) vanish for n >= 1).
int bessel_beta(double tj, double eps = 1e-10);

}  // namespace qperm
