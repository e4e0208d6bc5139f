#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "tenrec/tensor.hpp"

using namespace tenrec;

TEST_SUITE("tensor") {

TEST_CASE("build: empty tensor has norm 0") {
    auto t = SparseTensor3::build({}, {2, 2, 2});
    CHECK(t.nnz() == 0);
    CHECK(t.frobenius_norm() == 0.0);
}

TEST_CASE("build: duplicate policies") {
    std::vector<SparseTensor3::Entry> dup = {{0, 1, 2, 1.0}, {0, 1, 2, 1.0}};
    CHECK_THROWS_AS(SparseTensor3::build(dup, {2, 2, 3}), DuplicateEntry);
    auto summed = SparseTensor3::build(dup, {2, 2, 3}, SparseTensor3::DuplicatePolicy::sum);
    REQUIRE(summed.nnz() == 1);
    CHECK(summed.entries()[0].v == 2.0);
    std::vector<SparseTensor3::Entry> two = {{0, 1, 2, 1.0}, {0, 1, 2, 7.0}};
    auto last = SparseTensor3::build(two, {2, 2, 3}, SparseTensor3::DuplicatePolicy::keep_last);
    CHECK(last.entries()[0].v == 7.0);
}

TEST_CASE("build: frobenius norm of two entries") {
    auto t = SparseTensor3::build({{1, 0, 0, 3.0}, {0, 1, 1, 4.0}}, {2, 2, 2});
    CHECK(t.frobenius_norm() == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("build: validation errors") {
    CHECK_THROWS_AS(SparseTensor3::build({{2, 0, 0, 1.0}}, {2, 2, 2}), IndexOutOfRange);
    CHECK_THROWS_AS(SparseTensor3::build({{0, 0, 0, std::nan("")}}, {2, 2, 2}), NonFiniteValue);
}

TEST_CASE("build: order-insensitive canonicalization") {
    std::mt19937_64 rng(7);
    auto a = testgen::random_tensor(4, 4, 4, 12, rng).entries();
    auto b = a;
    std::shuffle(b.begin(), b.end(), rng);
    auto ta = SparseTensor3::build(a, {4, 4, 4});
    auto tb = SparseTensor3::build(b, {4, 4, 4});
    REQUIRE(ta.nnz() == tb.nnz());
    for (std::size_t k = 0; k < ta.nnz(); ++k) {
        CHECK(ta.entries()[k].u == tb.entries()[k].u);
        CHECK(ta.entries()[k].i == tb.entries()[k].i);
        CHECK(ta.entries()[k].f == tb.entries()[k].f);
        CHECK(ta.entries()[k].v == tb.entries()[k].v);
    }
}

TEST_CASE("frobenius norm basics") {
    CHECK(SparseTensor3::build({{0, 0, 0, -3.0}}, {1, 1, 1}).frobenius_norm() == 3.0);
    auto t = SparseTensor3::build({{0, 0, 0, 1.0}, {0, 1, 0, 2.0}, {1, 0, 1, 2.0}}, {2, 2, 2});
    CHECK(t.frobenius_norm() == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("unfold_contract: identity factors reproduce the unfolding") {
    const int N = 3, F = 4;
    auto A = SparseTensor3::build({{0, 1, 2, 2.0}}, {2, N, F});
    Matrix out = unfold_contract(A, 1, Matrix::Identity(N, N), Matrix::Identity(F, F));
    REQUIRE(out.rows() == 2);
    REQUIRE(out.cols() == N * F);
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        CHECK(out(0, c) == (c == 2 * N + 1 ? 2.0 : 0.0));
        CHECK(out(1, c) == 0.0);
    }
}

TEST_CASE("unfold_contract: per-entry outer product") {
    auto A = SparseTensor3::build({{0, 1, 2, 2.0}}, {1, 2, 3});
    Matrix Bp = Matrix::Zero(2, 2);
    Bp.row(1) << 1, 1;
    Matrix Bq = Matrix::Zero(3, 2);
    Bq.row(2) << 3, 0;
    Matrix out = unfold_contract(A, 1, Bp, Bq);
    REQUIRE(out.rows() == 1);
    REQUIRE(out.cols() == 4);
    CHECK(out(0, 0) == 6.0);
    CHECK(out(0, 1) == 6.0);
    CHECK(out(0, 2) == 0.0);
    CHECK(out(0, 3) == 0.0);
}

TEST_CASE("unfold_contract: dense oracle on random instances, all modes") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dv(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        auto A = testgen::random_tensor(4, 3, 2, 8, rng);
        oracle::Tensor3 D = oracle::from_sparse(A);
        for (int mode = 1; mode <= 3; ++mode) {
            int p_rows = mode == 1 ? 3 : 4;
            int q_rows = mode == 3 ? 3 : 2;
            Matrix Bp(p_rows, 2), Bq(q_rows, 2);
            for (int i = 0; i < p_rows; ++i)
                for (int j = 0; j < 2; ++j) Bp(i, j) = dv(rng);
            for (int i = 0; i < q_rows; ++i)
                for (int j = 0; j < 2; ++j) Bq(i, j) = dv(rng);
            Matrix got = unfold_contract(A, mode, Bp, Bq);
            Matrix want = oracle::unfold(D, mode) * oracle::kron(Bq, Bp);
            CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("unfold_contract: linear in the tensor argument") {
    std::mt19937_64 rng(13);
    auto A1 = testgen::random_tensor(4, 3, 2, 6, rng);
    auto A2 = testgen::random_tensor(4, 3, 2, 6, rng);
    std::vector<SparseTensor3::Entry> both = A1.entries();
    both.insert(both.end(), A2.entries().begin(), A2.entries().end());
    auto sum = SparseTensor3::build(both, {4, 3, 2}, SparseTensor3::DuplicatePolicy::sum);
    Matrix Bp = Matrix::Random(3, 2), Bq = Matrix::Random(2, 2);
    Matrix lhs = unfold_contract(sum, 1, Bp, Bq);
    Matrix rhs = unfold_contract(A1, 1, Bp, Bq) + unfold_contract(A2, 1, Bp, Bq);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("unfold_contract: shape checks") {
    auto A = SparseTensor3::build({{0, 0, 0, 1.0}}, {2, 3, 4});
    CHECK_THROWS_AS(unfold_contract(A, 1, Matrix::Identity(2, 2), Matrix::Identity(4, 4)),
                    ShapeMismatch);
}

TEST_CASE("n_mode_product_dense: identity and summation") {
    DenseTensor3 T(2, 2, 2);
    for (auto& v : T.values()) v = 1.0;
    auto same = n_mode_product_dense(T, 1, Matrix::Identity(2, 2));
    CHECK(same.values() == T.values());

    Matrix row(1, 2);
    row << 1, 1;
    auto collapsed = n_mode_product_dense(T, 1, row);
    REQUIRE(collapsed.shape() == std::array<int, 3>{1, 2, 2});
    for (double v : collapsed.values()) CHECK(v == 2.0);
}

TEST_CASE("n_mode_product_dense: distinct modes commute") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dv(-1.0, 1.0);
    DenseTensor3 T(3, 4, 2);
    for (auto& v : T.values()) v = dv(rng);
    Matrix X = Matrix::Random(2, 3), Y = Matrix::Random(3, 4);
    auto a = n_mode_product_dense(n_mode_product_dense(T, 1, X), 2, Y);
    auto b = n_mode_product_dense(n_mode_product_dense(T, 2, Y), 1, X);
    for (std::size_t k = 0; k < a.values().size(); ++k) {
        CHECK(a.values()[k] == doctest::Approx(b.values()[k]).epsilon(1e-12));
    }
}

TEST_CASE("unfold/fold round-trip") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> dv(-1.0, 1.0);
    DenseTensor3 T(3, 4, 2);
    for (auto& v : T.values()) v = dv(rng);
    for (int mode = 1; mode <= 3; ++mode) {
        auto back = DenseTensor3::fold(T.unfold(mode), mode, T.shape());
        CHECK(back.values() == T.values());
    }
}

TEST_CASE("sparse tensor text serialization round-trip") {
    auto t = SparseTensor3::build({{1, 0, 0, 3.5}, {0, 1, 1, -4.25}}, {2, 2, 2});
    std::stringstream ss;
    t.save(ss);
    auto back = SparseTensor3::load(ss);
    CHECK(back.shape() == t.shape());
    REQUIRE(back.nnz() == t.nnz());
    for (std::size_t k = 0; k < t.nnz(); ++k) {
        CHECK(back.entries()[k].v == t.entries()[k].v);
    }
}

}  // TEST_SUITE
