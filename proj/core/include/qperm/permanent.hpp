#pragma once

#include <complex>
#include <cstdint>
#include <Eigen/Dense>

namespace qperm {

enum class PermMethod { naive, ryser, bbfg, bbfg_parallel };

const char* to_string(PermMethod method);

struct PermanentResult {
    std::complex<double> value;
    PermMethod method = PermMethod::bbfg;
    std::uint64_t terms = 0;  // delta-vectors (or subsets) summed
    bool compensated = false;
};

/// Definitional sum over Sym(M). Oracle only; M <= 12.
PermanentResult perm_naive(const Eigen::MatrixXcd& a);

/// Ryser inclusion-exclusion with Gray-code row-sum updates.
/// The default guard M <= 34 keeps single-task runs practical.
PermanentResult perm_ryser(const Eigen::MatrixXcd& a, int max_size = 34);

/// BBFG formula with Gray-code column-sum updates, compensated outer sum.
PermanentResult perm_bbfg(const Eigen::MatrixXcd& a, int max_size = 50);

/// Chunk-parallel BBFG: the 2^{M-1} Gray sequence is split into `workers`
/// contiguous chunks, each seeded from scratch in O(M^2). Partial sums are
/// combined in worker order, so results are reproducible for a fixed worker
/// count, and workers = 1 follows the exact serial path.
PermanentResult perm_bbfg_parallel(const Eigen::MatrixXcd& a, int workers,
                                   int max_size = 50);

PermanentResult permanent(const Eigen::MatrixXcd& a, PermMethod method, int workers = 1);

}  // namespace qperm
