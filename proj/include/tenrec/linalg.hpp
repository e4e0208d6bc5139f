#pragma once

#include <random>

#include "tenrec/tensor.hpp"

namespace tenrec {

// Top-r singular triplets. Columns of U carry a deterministic sign: the
// largest-magnitude entry of each left singular vector is nonnegative.
struct SvdTriplet {
    Matrix U;
    Vector sigma;
    Matrix V;
};

struct CholeskyFactor {
    Matrix L;  // lower triangular, strictly positive diagonal
};

enum class JitterPolicy { fail, auto_jitter };

SvdTriplet truncated_svd(const Matrix& X, int r);

// Factors an SPD matrix. Under auto_jitter a growing diagonal shift
// (1e-10, x10 per retry, capped at 1e-4 * trace/n) is added until the
// factorization succeeds; the shift actually applied is reported.
CholeskyFactor cholesky_spd(const Matrix& S, JitterPolicy policy = JitterPolicy::fail,
                            double* applied_jitter = nullptr);

// Solves L^T X = B for X.
Matrix solve_lower_transposed(const CholeskyFactor& L, const Matrix& B);

// Seeded random matrix with orthonormal columns, canonical column signs.
Matrix random_orthonormal(int rows, int cols, std::mt19937_64& rng);

}  // namespace tenrec
