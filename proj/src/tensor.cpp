#include "tenrec/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace tenrec {

SparseTensor3 SparseTensor3::build(std::vector<Entry> triplets, std::array<int, 3> shape,
                                   DuplicatePolicy policy) {
    for (const Entry& e : triplets) {
        if (e.u < 0 || e.u >= shape[0] || e.i < 0 || e.i >= shape[1] || e.f < 0 ||
            e.f >= shape[2]) {
            throw IndexOutOfRange("entry (" + std::to_string(e.u) + "," + std::to_string(e.i) +
                                  "," + std::to_string(e.f) + ") outside shape");
        }
        if (!std::isfinite(e.v)) {
            throw NonFiniteValue("non-finite value at (" + std::to_string(e.u) + "," +
                                 std::to_string(e.i) + "," + std::to_string(e.f) + ")");
        }
    }
    // Stable sort keeps input order among duplicates, which keep_last relies on.
    std::stable_sort(triplets.begin(), triplets.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.u, a.i, a.f) < std::tie(b.u, b.i, b.f);
    });
    std::vector<Entry> out;
    out.reserve(triplets.size());
    for (const Entry& e : triplets) {
        if (!out.empty() && out.back().u == e.u && out.back().i == e.i && out.back().f == e.f) {
            switch (policy) {
                case DuplicatePolicy::error:
                    throw DuplicateEntry("duplicate key (" + std::to_string(e.u) + "," +
                                         std::to_string(e.i) + "," + std::to_string(e.f) + ")");
                case DuplicatePolicy::keep_last:
                    out.back().v = e.v;
                    break;
                case DuplicatePolicy::sum:
                    out.back().v += e.v;
                    break;
            }
        } else {
            out.push_back(e);
        }
    }
    SparseTensor3 t;
    t.shape_ = shape;
    t.entries_ = std::move(out);
    return t;
}

double SparseTensor3::frobenius_norm() const {
    double s = 0.0;
    for (const Entry& e : entries_) s += e.v * e.v;
    return std::sqrt(s);
}

void SparseTensor3::save(std::ostream& out) const {
    out << "#shape " << shape_[0] << ' ' << shape_[1] << ' ' << shape_[2] << '\n';
    out.precision(17);
    for (const Entry& e : entries_) {
        out << e.u << '\t' << e.i << '\t' << e.f << '\t' << e.v << '\n';
    }
}

SparseTensor3 SparseTensor3::load(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("#shape", 0) != 0) {
        throw ParseError("missing '#shape M N F' header");
    }
    std::array<int, 3> shape{};
    {
        std::istringstream hs(line.substr(6));
        if (!(hs >> shape[0] >> shape[1] >> shape[2])) {
            throw ParseError("malformed '#shape' header: " + line);
        }
    }
    std::vector<Entry> entries;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        Entry e{};
        if (!(ls >> e.u >> e.i >> e.f >> e.v)) {
            throw ParseError("bad tensor line " + std::to_string(lineno) + ": " + line);
        }
        entries.push_back(e);
    }
    return build(std::move(entries), shape);
}

double DenseTensor3::frobenius_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s);
}

Matrix DenseTensor3::unfold(int mode) const {
    const int r1 = shape_[0], r2 = shape_[1], r3 = shape_[2];
    Matrix X;
    switch (mode) {
        case 1:
            X.setZero(r1, static_cast<Eigen::Index>(r2) * r3);
            for (int a = 0; a < r1; ++a)
                for (int b = 0; b < r2; ++b)
                    for (int c = 0; c < r3; ++c) X(a, b + static_cast<Eigen::Index>(c) * r2) = at(a, b, c);
            break;
        case 2:
            X.setZero(r2, static_cast<Eigen::Index>(r1) * r3);
            for (int a = 0; a < r1; ++a)
                for (int b = 0; b < r2; ++b)
                    for (int c = 0; c < r3; ++c) X(b, a + static_cast<Eigen::Index>(c) * r1) = at(a, b, c);
            break;
        case 3:
            X.setZero(r3, static_cast<Eigen::Index>(r1) * r2);
            for (int a = 0; a < r1; ++a)
                for (int b = 0; b < r2; ++b)
                    for (int c = 0; c < r3; ++c) X(c, a + static_cast<Eigen::Index>(b) * r1) = at(a, b, c);
            break;
        default:
            throw ShapeMismatch("mode must be 1, 2 or 3");
    }
    return X;
}

DenseTensor3 DenseTensor3::fold(const Matrix& X, int mode, std::array<int, 3> shape) {
    const int r1 = shape[0], r2 = shape[1], r3 = shape[2];
    DenseTensor3 T(r1, r2, r3);
    auto check = [&](Eigen::Index rows, Eigen::Index cols) {
        if (X.rows() != rows || X.cols() != cols) {
            throw ShapeMismatch("fold: matrix shape does not match target tensor shape");
        }
    };
    switch (mode) {
        case 1:
            check(r1, static_cast<Eigen::Index>(r2) * r3);
            for (int a = 0; a < r1; ++a)
                for (int b = 0; b < r2; ++b)
                    for (int c = 0; c < r3; ++c) T.at(a, b, c) = X(a, b + static_cast<Eigen::Index>(c) * r2);
            break;
        case 2:
            check(r2, static_cast<Eigen::Index>(r1) * r3);
            for (int a = 0; a < r1; ++a)
                for (int b = 0; b < r2; ++b)
                    for (int c = 0; c < r3; ++c) T.at(a, b, c) = X(b, a + static_cast<Eigen::Index>(c) * r1);
            break;
        case 3:
            check(r3, static_cast<Eigen::Index>(r1) * r2);
            for (int a = 0; a < r1; ++a)
                for (int b = 0; b < r2; ++b)
                    for (int c = 0; c < r3; ++c) T.at(a, b, c) = X(c, a + static_cast<Eigen::Index>(b) * r1);
            break;
        default:
            throw ShapeMismatch("mode must be 1, 2 or 3");
    }
    return T;
}

Matrix unfold_contract(const SparseTensor3& A, int mode, const Matrix& Bp, const Matrix& Bq) {
    const auto& shape = A.shape();
    const int M = shape[0], N = shape[1], F = shape[2];
    int out_rows = 0;
    switch (mode) {
        case 1:
            if (Bp.rows() != N || Bq.rows() != F)
                throw ShapeMismatch("mode-1 contract expects Bp with N rows, Bq with F rows");
            out_rows = M;
            break;
        case 2:
            if (Bp.rows() != M || Bq.rows() != F)
                throw ShapeMismatch("mode-2 contract expects Bp with M rows, Bq with F rows");
            out_rows = N;
            break;
        case 3:
            if (Bp.rows() != M || Bq.rows() != N)
                throw ShapeMismatch("mode-3 contract expects Bp with M rows, Bq with N rows");
            out_rows = F;
            break;
        default:
            throw ShapeMismatch("mode must be 1, 2 or 3");
    }
    const Eigen::Index cp = Bp.cols(), cq = Bq.cols();
    Matrix out = Matrix::Zero(out_rows, cp * cq);
    // Per nonzero: accumulate v * (Bq row  outer  Bp row) into the output row,
    // with Bp's column index varying fastest.
    for (const auto& e : A.entries()) {
        int row = 0, p = 0, q = 0;
        switch (mode) {
            case 1: row = e.u; p = e.i; q = e.f; break;
            case 2: row = e.i; p = e.u; q = e.f; break;
            case 3: row = e.f; p = e.u; q = e.i; break;
        }
        for (Eigen::Index jq = 0; jq < cq; ++jq) {
            const double w = e.v * Bq(q, jq);
            if (w == 0.0) continue;
            out.row(row).segment(jq * cp, cp) += w * Bp.row(p);
        }
    }
    return out;
}

DenseTensor3 n_mode_product_dense(const DenseTensor3& T, int mode, const Matrix& X) {
    const auto& s = T.shape();
    if (X.cols() != s[mode - 1]) {
        throw ShapeMismatch("n-mode product: cols(X) must equal the tensor's mode size");
    }
    std::array<int, 3> out_shape = s;
    out_shape[mode - 1] = static_cast<int>(X.rows());
    Matrix unf = T.unfold(mode);
    return DenseTensor3::fold(X * unf, mode, out_shape);
}

}  // namespace tenrec
