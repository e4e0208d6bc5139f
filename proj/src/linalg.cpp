#include "tenrec/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

namespace tenrec {

namespace {

// Largest-magnitude entry of each U column made nonnegative; ties broken by
// lowest index. V columns flip together with their U partner.
void canonicalize_signs(Matrix& U, Matrix* V) {
    for (Eigen::Index k = 0; k < U.cols(); ++k) {
        Eigen::Index best = 0;
        double best_abs = std::abs(U(0, k));
        for (Eigen::Index i = 1; i < U.rows(); ++i) {
            const double a = std::abs(U(i, k));
            if (a > best_abs) {
                best_abs = a;
                best = i;
            }
        }
        if (U(best, k) < 0.0) {
            U.col(k) = -U.col(k);
            if (V) V->col(k) = -V->col(k);
        }
    }
}

SvdTriplet dense_svd_truncate(const Matrix& X, int r) {
    Eigen::BDCSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdTriplet t;
    t.U = svd.matrixU().leftCols(r);
    t.sigma = svd.singularValues().head(r);
    t.V = svd.matrixV().leftCols(r);
    canonicalize_signs(t.U, &t.V);
    return t;
}

// Block subspace iteration for tall problems where a full decomposition is
// too expensive. Deterministic: fixed internal seed, fixed iteration count.
SvdTriplet block_svd_truncate(const Matrix& X, int r) {
    const int oversample = std::min<int>(10, static_cast<int>(std::min(X.rows(), X.cols())) - r);
    const int k = r + std::max(0, oversample);
    std::mt19937_64 rng(0x5eed5eedULL);
    Matrix Q = random_orthonormal(static_cast<int>(X.cols()), k, rng);
    for (int it = 0; it < 8; ++it) {
        Matrix Y = X * Q;                       // rows x k
        Q = Eigen::HouseholderQR<Matrix>(Y).householderQ() * Matrix::Identity(Y.rows(), k);
        Matrix Z = X.transpose() * Q;           // cols x k
        Q = Eigen::HouseholderQR<Matrix>(Z).householderQ() * Matrix::Identity(Z.rows(), k);
    }
    Matrix B = X * Q;  // rows x k
    Eigen::BDCSVD<Matrix> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SvdTriplet t;
    t.U = svd.matrixU().leftCols(r);
    t.sigma = svd.singularValues().head(r);
    t.V = Q * svd.matrixV().leftCols(r);
    canonicalize_signs(t.U, &t.V);
    return t;
}

}  // namespace

SvdTriplet truncated_svd(const Matrix& X, int r) {
    const Eigen::Index mindim = std::min(X.rows(), X.cols());
    if (r < 1 || r > mindim) {
        throw RankTooLarge("rank " + std::to_string(r) + " outside [1, " +
                           std::to_string(mindim) + "]");
    }
    if (mindim <= 2000) return dense_svd_truncate(X, r);
    return block_svd_truncate(X, r);
}

CholeskyFactor cholesky_spd(const Matrix& S, JitterPolicy policy, double* applied_jitter) {
    if (S.rows() != S.cols()) throw ShapeMismatch("cholesky_spd: matrix not square");
    const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
    if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw NotSymmetric("cholesky_spd: input asymmetric beyond 1e-10");
    }
    const int n = static_cast<int>(S.rows());
    const double jitter_cap = 1e-4 * S.trace() / n;
    double eps = 0.0;
    for (;;) {
        Matrix Sj = S;
        if (eps > 0.0) Sj.diagonal().array() += eps;
        Eigen::LLT<Matrix> llt(Sj);
        if (llt.info() == Eigen::Success) {
            CholeskyFactor f{llt.matrixL()};
            if (f.L.diagonal().minCoeff() > 0.0) {
                if (applied_jitter) *applied_jitter = eps;
                return f;
            }
        }
        if (policy == JitterPolicy::fail) {
            throw NotPositiveDefinite("cholesky_spd: matrix not positive definite");
        }
        eps = (eps == 0.0) ? 1e-10 : eps * 10.0;
        if (eps > jitter_cap) {
            throw NotPositiveDefinite("cholesky_spd: jitter cap " + std::to_string(jitter_cap) +
                                      " exceeded");
        }
    }
}

Matrix solve_lower_transposed(const CholeskyFactor& fac, const Matrix& B) {
    const Matrix& L = fac.L;
    if (L.rows() != L.cols()) throw ShapeMismatch("solve_lower_transposed: L not square");
    if (B.rows() != L.rows()) {
        throw ShapeMismatch("solve_lower_transposed: rows(B) != dim(L)");
    }
    if (L.diagonal().cwiseAbs().minCoeff() == 0.0) {
        throw SingularFactor("solve_lower_transposed: zero diagonal in L");
    }
    return L.transpose().triangularView<Eigen::Upper>().solve(B);
}

Matrix random_orthonormal(int rows, int cols, std::mt19937_64& rng) {
    if (cols > rows) throw ShapeMismatch("random_orthonormal: cols > rows");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix G(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) G(i, j) = gauss(rng);
    Matrix Q = Eigen::HouseholderQR<Matrix>(G).householderQ() * Matrix::Identity(rows, cols);
    canonicalize_signs(Q, nullptr);
    return Q;
}

}  // namespace tenrec
