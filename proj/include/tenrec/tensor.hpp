#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tenrec/errors.hpp"

namespace tenrec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Third-order sparse tensor in coordinate form. Entries are kept in
// canonical (u, i, f) lexicographic order and immutable after construction.
class SparseTensor3 {
public:
    struct Entry {
        int u, i, f;
        double v;
    };

    enum class DuplicatePolicy { error, keep_last, sum };

    SparseTensor3() : shape_{0, 0, 0} {}

    static SparseTensor3 build(std::vector<Entry> triplets, std::array<int, 3> shape,
                               DuplicatePolicy policy = DuplicatePolicy::error);

    const std::array<int, 3>& shape() const { return shape_; }
    int mode_size(int mode) const { return shape_[mode - 1]; }
    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t nnz() const { return entries_.size(); }

    double frobenius_norm() const;

    void save(std::ostream& out) const;
    static SparseTensor3 load(std::istream& in);

private:
    std::array<int, 3> shape_;
    std::vector<Entry> entries_;
};

// Dense third-order tensor, row-major C order: values[(i1*r2 + i2)*r3 + i3].
class DenseTensor3 {
public:
    DenseTensor3() : shape_{0, 0, 0} {}
    DenseTensor3(int r1, int r2, int r3)
        : shape_{r1, r2, r3}, values_(static_cast<std::size_t>(r1) * r2 * r3, 0.0) {}

    const std::array<int, 3>& shape() const { return shape_; }
    int mode_size(int mode) const { return shape_[mode - 1]; }

    double& at(int i1, int i2, int i3) {
        return values_[(static_cast<std::size_t>(i1) * shape_[1] + i2) * shape_[2] + i3];
    }
    double at(int i1, int i2, int i3) const {
        return values_[(static_cast<std::size_t>(i1) * shape_[1] + i2) * shape_[2] + i3];
    }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double frobenius_norm() const;

    // Mode-n unfolding with the fixed column convention: the lower-numbered
    // remaining mode varies fastest along columns.
    Matrix unfold(int mode) const;
    static DenseTensor3 fold(const Matrix& X, int mode, std::array<int, 3> shape);

private:
    std::array<int, 3> shape_;
    std::vector<double> values_;
};

// Computes A^(mode) (Bq kron Bp) without materializing the Kronecker product.
// Mode 1: Bp has N rows, Bq has F rows; mode 2: Bp has M rows, Bq has F rows;
// mode 3: Bp has M rows, Bq has N rows. Output columns are ordered with Bp's
// column index varying fastest.
Matrix unfold_contract(const SparseTensor3& A, int mode, const Matrix& Bp, const Matrix& Bq);

// n-mode product of a dense tensor with a matrix: contracts T's `mode` index
// against X's columns; the result's mode size equals rows(X).
DenseTensor3 n_mode_product_dense(const DenseTensor3& T, int mode, const Matrix& X);

}  // namespace tenrec
