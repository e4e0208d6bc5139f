#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "tenrec/model.hpp"
#include "tenrec/serialize.hpp"

using namespace tenrec;

namespace {

struct Sims {
    SimilarityMatrix users, items, feedback;
};

Sims identity_sims(int M, int N, int F) {
    return {SimilarityMatrix::identity(M), SimilarityMatrix::identity(N),
            SimilarityMatrix::identity(F)};
}

Sims random_sims(int M, int N, int F, std::mt19937_64& rng) {
    return {SimilarityMatrix::assemble(testgen::random_s0(M, 0.3, rng), 0.5),
            SimilarityMatrix::assemble(testgen::random_s0(N, 0.3, rng), 0.5),
            SimilarityMatrix::identity(F)};
}

// The model's initial auxiliary factors, regenerated from the same seed.
std::pair<Matrix, Matrix> initial_factors(int N, int F, const TrainConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    Matrix V0 = random_orthonormal(N, cfg.ranks[1], rng);
    Matrix W0 = random_orthonormal(F, cfg.ranks[2], rng);
    return {V0, W0};
}

oracle::Tensor3 auxiliary_tensor(const SparseTensor3& A, const Sims& sims) {
    oracle::Tensor3 T = oracle::from_sparse(A);
    T = oracle::mode_mult(T, 1, sims.users.is_identity()
                                    ? Matrix::Identity(T.d1, T.d1)
                                    : Matrix(sims.users.cholesky().transpose()));
    T = oracle::mode_mult(T, 2, sims.items.is_identity()
                                    ? Matrix::Identity(T.d2, T.d2)
                                    : Matrix(sims.items.cholesky().transpose()));
    T = oracle::mode_mult(T, 3, sims.feedback.is_identity()
                                    ? Matrix::Identity(T.d3, T.d3)
                                    : Matrix(sims.feedback.cholesky().transpose()));
    return T;
}

void check_orthogonality(const HybridTuckerModel& m, const Sims& sims) {
    const int r1 = m.ranks()[0], r2 = m.ranks()[1], r3 = m.ranks()[2];
    CHECK((m.U_hat.transpose() * m.U_hat - Matrix::Identity(r1, r1)).cwiseAbs().maxCoeff() <=
          1e-8);
    CHECK((m.V_hat.transpose() * m.V_hat - Matrix::Identity(r2, r2)).cwiseAbs().maxCoeff() <=
          1e-8);
    CHECK((m.W_hat.transpose() * m.W_hat - Matrix::Identity(r3, r3)).cwiseAbs().maxCoeff() <=
          1e-8);
    CHECK((m.U.transpose() * sims.users.full() * m.U - Matrix::Identity(r1, r1))
              .cwiseAbs()
              .maxCoeff() <= 1e-7);
    CHECK((m.V.transpose() * sims.items.full() * m.V - Matrix::Identity(r2, r2))
              .cwiseAbs()
              .maxCoeff() <= 1e-7);
    CHECK((m.W.transpose() * sims.feedback.full() * m.W - Matrix::Identity(r3, r3))
              .cwiseAbs()
              .maxCoeff() <= 1e-7);
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("train: F=1, r3=1 identity case spans PureSVD subspaces") {
    // A matrix with a clear spectral gap, written as an F=1 tensor.
    std::mt19937_64 rng(21);
    Matrix Ug = random_orthonormal(8, 3, rng);
    Matrix Vg = random_orthonormal(6, 3, rng);
    Vector s(3);
    s << 10, 6, 3;
    Matrix A2 = Ug * s.asDiagonal() * Vg.transpose();
    std::vector<SparseTensor3::Entry> entries;
    for (int u = 0; u < 8; ++u)
        for (int i = 0; i < 6; ++i) entries.push_back({u, i, 0, A2(u, i)});
    auto A = SparseTensor3::build(entries, {8, 6, 1});

    TrainConfig cfg;
    cfg.ranks = {2, 2, 1};
    cfg.tol = 1e-12;
    cfg.max_iters = 100;
    cfg.seed = 5;
    auto m = train(A, SimilarityMatrix::identity(8), SimilarityMatrix::identity(6),
                   SimilarityMatrix::identity(1), cfg);
    auto svd = truncated_svd(A2, 2);
    CHECK(oracle::max_principal_angle(m.U_hat, svd.U) <= 1e-6);
    CHECK(oracle::max_principal_angle(m.V_hat, svd.V) <= 1e-6);
}

TEST_CASE("train: identity weights equal a plain dense HOOI oracle") {
    std::mt19937_64 rng(23);
    auto A = testgen::random_tensor(8, 7, 5, 60, rng);
    TrainConfig cfg;
    cfg.ranks = {3, 3, 2};
    // A subnormal tolerance pins the sweep count to max_iters so the oracle
    // can replay the exact same number of updates.
    cfg.tol = 1e-300;
    cfg.max_iters = 150;
    cfg.seed = 77;
    Sims sims = identity_sims(8, 7, 5);
    auto m = train(A, sims.users, sims.items, sims.feedback, cfg);

    auto [V0, W0] = initial_factors(7, 5, cfg);
    auto h = oracle::dense_hooi(oracle::from_sparse(A), 3, 3, 2, V0, W0, 150);
    CHECK(oracle::projector_distance(m.U_hat, h.U) <= 1e-6);
    CHECK(oracle::projector_distance(m.V_hat, h.V) <= 1e-6);
    CHECK(oracle::projector_distance(m.W_hat, h.W) <= 1e-6);
}

TEST_CASE("train: nontrivial similarities match the explicit auxiliary-tensor oracle") {
    std::mt19937_64 rng(29);
    auto A = testgen::random_tensor(8, 7, 5, 60, rng);
    Sims sims = random_sims(8, 7, 5, rng);
    TrainConfig cfg;
    cfg.ranks = {3, 3, 2};
    cfg.tol = 1e-13;
    cfg.max_iters = 150;
    cfg.seed = 31;
    auto m = train(A, sims.users, sims.items, sims.feedback, cfg);

    oracle::Tensor3 aux = auxiliary_tensor(A, sims);
    auto [V0, W0] = initial_factors(7, 5, cfg);
    auto h = oracle::dense_hooi(aux, 3, 3, 2, V0, W0, 150);
    double err_oracle = oracle::fit_error(aux, h);
    double err_impl =
        oracle::subtract(aux, oracle::reconstruct(oracle::from_dense(m.core), m.U_hat, m.V_hat,
                                                  m.W_hat))
            .norm();
    CHECK(err_impl == doctest::Approx(err_oracle).epsilon(1e-6));
    check_orthogonality(m, sims);
}

TEST_CASE("train: core satisfies G = aux x1 U^T x2 V^T x3 W^T") {
    std::mt19937_64 rng(37);
    auto A = testgen::random_tensor(6, 5, 4, 40, rng);
    Sims sims = random_sims(6, 5, 4, rng);
    TrainConfig cfg;
    cfg.ranks = {2, 3, 2};
    cfg.seed = 3;
    auto m = train(A, sims.users, sims.items, sims.feedback, cfg);
    oracle::Tensor3 aux = auxiliary_tensor(A, sims);
    oracle::Tensor3 want = oracle::mode_mult(
        oracle::mode_mult(oracle::mode_mult(aux, 1, m.U_hat.transpose()), 2, m.V_hat.transpose()),
        3, m.W_hat.transpose());
    oracle::Tensor3 got = oracle::from_dense(m.core);
    CHECK(oracle::subtract(want, got).norm() <= 1e-10 * std::max(1.0, want.norm()));
}

TEST_CASE("train: trace is non-decreasing and converges on desk scale") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        auto A = testgen::low_rank_tensor(10, 9, 5, 3, 3, 2, 0.05, rng);
        TrainConfig cfg;
        cfg.ranks = {3, 3, 2};
        cfg.seed = trial;
        Sims sims = identity_sims(10, 9, 5);
        auto m = train(A, sims.users, sims.items, sims.feedback, cfg);
        for (std::size_t t = 1; t < m.trace.size(); ++t) {
            CHECK(m.trace[t] >= m.trace[t - 1] - 1e-9);
        }
        CHECK(m.converged);
    }
}

TEST_CASE("train: fixed seed is bitwise reproducible") {
    std::mt19937_64 rng(43);
    auto A = testgen::random_tensor(6, 5, 4, 30, rng);
    Sims sims = random_sims(6, 5, 4, rng);
    TrainConfig cfg;
    cfg.ranks = {2, 2, 2};
    cfg.seed = 99;
    auto a = train(A, sims.users, sims.items, sims.feedback, cfg);
    auto b = train(A, sims.users, sims.items, sims.feedback, cfg);
    CHECK(a.U_hat == b.U_hat);
    CHECK(a.V == b.V);
    CHECK(a.core.values() == b.core.values());
    CHECK(a.config_fingerprint == b.config_fingerprint);
}

TEST_CASE("train: rank validation") {
    auto A = SparseTensor3::build({{0, 0, 0, 1.0}}, {2, 2, 2});
    TrainConfig cfg;
    cfg.ranks = {3, 1, 1};
    CHECK_THROWS_AS(train(A, SimilarityMatrix::identity(2), SimilarityMatrix::identity(2),
                          SimilarityMatrix::identity(2), cfg),
                    RankTooLarge);
}

TEST_CASE("round_rank: no-op keeps projectors") {
    std::mt19937_64 rng(47);
    auto A = testgen::random_tensor(7, 6, 4, 40, rng);
    Sims sims = random_sims(7, 6, 4, rng);
    TrainConfig cfg;
    cfg.ranks = {3, 3, 2};
    cfg.seed = 1;
    auto m = train(A, sims.users, sims.items, sims.feedback, cfg);
    auto same = round_rank(m, {3, 3, 2});
    CHECK(oracle::projector_distance(m.U_hat, same.U_hat) <= 1e-10);
    CHECK(oracle::projector_distance(m.V_hat, same.V_hat) <= 1e-10);
    CHECK(oracle::projector_distance(m.W_hat, same.W_hat) <= 1e-10);
}

TEST_CASE("round_rank: sequential equals direct; error monotone; orthogonality holds") {
    std::mt19937_64 rng(53);
    auto A = testgen::random_tensor(8, 7, 5, 60, rng);
    Sims sims = random_sims(8, 7, 5, rng);
    TrainConfig cfg;
    cfg.ranks = {4, 4, 3};
    cfg.seed = 2;
    auto m = train(A, sims.users, sims.items, sims.feedback, cfg);

    auto recon_error = [&](const HybridTuckerModel& model) {
        oracle::Tensor3 full = oracle::from_sparse(A);
        oracle::Tensor3 approx = oracle::from_dense(reconstruct_dense(model));
        return oracle::subtract(full, approx).norm();
    };

    auto direct = round_rank(m, {2, 2, 2});
    double e_full = recon_error(m);
    double e_mid = recon_error(round_rank(m, {3, 3, 3}));
    double e_low = recon_error(round_rank(m, {2, 2, 2}));
    CHECK(e_mid >= e_full - 1e-9);
    CHECK(e_low >= e_mid - 1e-9);

    check_orthogonality(direct, sims);
    CHECK_THROWS_AS(round_rank(m, {5, 2, 2}), RankTooLarge);
}

TEST_CASE("round_rank: sequential equals direct on exact low-rank data") {
    std::mt19937_64 rng(55);
    auto A = testgen::low_rank_tensor(8, 7, 5, 2, 2, 2, 0.0, rng);
    TrainConfig cfg;
    cfg.ranks = {4, 4, 3};
    cfg.tol = 1e-14;
    cfg.max_iters = 500;
    cfg.seed = 2;
    Sims sims = identity_sims(8, 7, 5);
    auto m = train(A, sims.users, sims.items, sims.feedback, cfg);
    auto recon_error = [&](const HybridTuckerModel& model) {
        return oracle::subtract(oracle::from_sparse(A),
                                oracle::from_dense(reconstruct_dense(model)))
            .norm();
    };
    auto direct = round_rank(m, {2, 2, 2});
    auto seq = round_rank(round_rank(m, {3, 3, 2}), {2, 2, 2});
    CHECK(std::abs(recon_error(seq) - recon_error(direct)) <= 1e-9);
    CHECK(recon_error(direct) <= 1e-9);
}

TEST_CASE("fold_in_user: identity similarities collapse to the plain formula bitwise") {
    std::mt19937_64 rng(59);
    auto A = testgen::random_tensor(6, 5, 4, 30, rng);
    TrainConfig cfg;
    cfg.ranks = {2, 2, 2};
    cfg.seed = 4;
    Sims sims = identity_sims(6, 5, 4);
    auto m = train(A, sims.users, sims.items, sims.feedback, cfg);

    PreferenceMatrix P;
    P.items = 5;
    P.levels = 4;
    P.cells = {{1, 2, 1.0}, {3, 0, 1.0}};
    Matrix via_model = fold_in_user(m, P);
    Matrix D = Matrix::Zero(5, 4);
    D(1, 2) = 1.0;
    D(3, 0) = 1.0;
    Matrix plain = m.V_hat * (m.V_hat.transpose() * D * m.W_hat) * m.W_hat.transpose();
    CHECK(via_model == plain);
}

TEST_CASE("fold_in_user: cached path equals direct multiplication chain") {
    std::mt19937_64 rng(61);
    auto A = testgen::random_tensor(6, 5, 4, 30, rng);
    Sims sims = random_sims(6, 5, 4, rng);
    TrainConfig cfg;
    cfg.ranks = {2, 2, 2};
    cfg.seed = 6;
    auto m = train(A, sims.users, sims.items, sims.feedback, cfg);

    PreferenceMatrix P;
    P.items = 5;
    P.levels = 4;
    P.cells = {{0, 1, 1.0}, {2, 3, 1.0}, {4, 0, 1.0}};
    Matrix got = fold_in_user(m, P);
    Matrix D = Matrix::Zero(5, 4);
    for (const auto& c : P.cells) D(c.item, c.feedback) = c.value;
    Matrix direct = ((m.V * m.V_S.transpose()) * D) * (m.W_R * m.W.transpose());
    CHECK((got - direct).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("fold_in_user: single interaction is the rank-1 outer product") {
    std::mt19937_64 rng(67);
    auto A = testgen::random_tensor(6, 5, 4, 30, rng);
    Sims sims = random_sims(6, 5, 4, rng);
    TrainConfig cfg;
    cfg.ranks = {2, 2, 2};
    cfg.seed = 8;
    auto m = train(A, sims.users, sims.items, sims.feedback, cfg);

    PreferenceMatrix P;
    P.items = 5;
    P.levels = 4;
    P.cells = {{2, 1, 1.0}};
    Matrix got = fold_in_user(m, P);
    Matrix want = (m.V * m.V_S.row(2).transpose()) * (m.W_R.row(1) * m.W.transpose());
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("fold_in_user: the projection chain is idempotent") {
    std::mt19937_64 rng(71);
    auto A = testgen::random_tensor(6, 5, 4, 30, rng);
    Sims sims = random_sims(6, 5, 4, rng);
    TrainConfig cfg;
    cfg.ranks = {2, 2, 2};
    cfg.seed = 10;
    auto m = train(A, sims.users, sims.items, sims.feedback, cfg);

    // V_S^T V = I and W^T W_R = I, so folding a folded prediction is a no-op.
    Matrix P = Matrix::Random(5, 4);
    auto chain = [&](const Matrix& X) {
        return Matrix((m.V * m.V_S.transpose()) * X * (m.W_R * m.W.transpose()));
    };
    Matrix first = chain(P);
    CHECK((chain(first) - first).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("fold_in_user: full-rank training user round-trips their slice") {
    std::mt19937_64 rng(73);
    // Binary preference tensor, full multilinear rank, identity sims.
    auto data = testgen::random_tensor(4, 6, 3, 30, rng);
    std::vector<SparseTensor3::Entry> entries;
    for (auto e : data.entries()) {
        e.v = 1.0;
        entries.push_back(e);
    }
    auto A = SparseTensor3::build(entries, {4, 6, 3});
    TrainConfig cfg;
    cfg.ranks = {4, 6, 3};
    cfg.tol = 1e-13;
    cfg.max_iters = 100;
    cfg.seed = 12;
    Sims sims = identity_sims(4, 6, 3);
    auto m = train(A, sims.users, sims.items, sims.feedback, cfg);

    PreferenceMatrix P;
    P.items = 6;
    P.levels = 3;
    Matrix slice = Matrix::Zero(6, 3);
    for (const auto& e : A.entries()) {
        if (e.u == 1) {
            P.cells.push_back({e.i, e.f, e.v});
            slice(e.i, e.f) = e.v;
        }
    }
    REQUIRE(!P.cells.empty());
    Matrix pred = fold_in_user(m, P);
    CHECK((pred - slice).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("fold_in: error paths") {
    std::mt19937_64 rng(79);
    auto A = testgen::random_tensor(4, 4, 3, 12, rng);
    TrainConfig cfg;
    cfg.ranks = {2, 2, 2};
    Sims sims = identity_sims(4, 4, 3);
    auto m = train(A, sims.users, sims.items, sims.feedback, cfg);
    PreferenceMatrix empty;
    empty.items = 4;
    empty.levels = 3;
    CHECK_THROWS_AS(fold_in_user(m, empty), EmptyHistory);
    PreferenceMatrix wrong;
    wrong.items = 5;
    wrong.levels = 3;
    wrong.cells = {{0, 0, 1.0}};
    CHECK_THROWS_AS(fold_in_user(m, wrong), ShapeMismatch);
}

TEST_CASE("fold_in_item: matches its direct chain") {
    std::mt19937_64 rng(83);
    auto A = testgen::random_tensor(6, 5, 4, 30, rng);
    Sims sims = random_sims(6, 5, 4, rng);
    TrainConfig cfg;
    cfg.ranks = {2, 2, 2};
    cfg.seed = 14;
    auto m = train(A, sims.users, sims.items, sims.feedback, cfg);
    PreferenceMatrix Q;
    Q.items = 6;  // users here
    Q.levels = 4;
    Q.cells = {{1, 2, 1.0}, {4, 0, 1.0}};
    Matrix D = Matrix::Zero(6, 4);
    D(1, 2) = 1.0;
    D(4, 0) = 1.0;
    Matrix want = m.U * (m.U_K.transpose() * D * m.W_R) * m.W.transpose();
    CHECK(fold_in_item(m, Q) == want);
}

TEST_CASE("score_items: aggregators, exclusion and ties") {
    Matrix pred = Matrix::Zero(4, 3);
    pred(3, 2) = 0.9;  // only positive cell, item 3
    for (auto agg : {Aggregator::positive_mass, Aggregator::expected_value,
                     Aggregator::top_column}) {
        auto top = score_items(pred, agg, 2, {}, 4);
        REQUIRE(!top.empty());
        CHECK(top[0].first == 3);
    }

    Matrix two = Matrix::Zero(2, 3);
    two(0, 2) = 0.5;
    two(1, 2) = 0.4;
    two(1, 0) = 0.3;
    auto pm = score_items(two, Aggregator::positive_mass, 2, {}, 2);
    CHECK(pm[0].first == 0);
    CHECK(pm[0].second == doctest::Approx(0.5));

    auto excluded = score_items(two, Aggregator::positive_mass, 2, {0}, 2);
    CHECK(excluded.size() == 1);
    CHECK(excluded[0].first == 1);

    Matrix ties = Matrix::Zero(3, 2);
    auto t = score_items(ties, Aggregator::positive_mass, 0, {}, 3);
    CHECK(t[0].first == 0);
    CHECK(t[1].first == 1);
    CHECK(t[2].first == 2);
}

TEST_CASE("reconstruct_dense: exactness, zero tensor and guard") {
    std::mt19937_64 rng(89);
    auto A = testgen::random_tensor(4, 5, 3, 25, rng);
    TrainConfig cfg;
    cfg.ranks = {4, 5, 3};
    cfg.tol = 1e-13;
    cfg.max_iters = 100;
    Sims sims = identity_sims(4, 5, 3);
    auto m = train(A, sims.users, sims.items, sims.feedback, cfg);
    oracle::Tensor3 full = oracle::from_sparse(A);
    oracle::Tensor3 approx = oracle::from_dense(reconstruct_dense(m));
    CHECK(oracle::subtract(full, approx).norm() <= 1e-9 * full.norm());

    auto zero = SparseTensor3::build({}, {2, 2, 2});
    TrainConfig zcfg;
    zcfg.ranks = {1, 1, 1};
    auto zm = train(zero, SimilarityMatrix::identity(2), SimilarityMatrix::identity(2),
                    SimilarityMatrix::identity(2), zcfg);
    CHECK(reconstruct_dense(zm).frobenius_norm() <= 1e-12);
}

TEST_CASE("reconstruct_dense: error matches the dense HOOI oracle") {
    std::mt19937_64 rng(97);
    auto A = testgen::random_tensor(6, 5, 4, 40, rng);
    TrainConfig cfg;
    cfg.ranks = {3, 3, 2};
    cfg.tol = 1e-13;
    cfg.max_iters = 150;
    cfg.seed = 16;
    Sims sims = identity_sims(6, 5, 4);
    auto m = train(A, sims.users, sims.items, sims.feedback, cfg);
    oracle::Tensor3 full = oracle::from_sparse(A);
    double err_impl = oracle::subtract(full, oracle::from_dense(reconstruct_dense(m))).norm();
    auto [V0, W0] = initial_factors(5, 4, cfg);
    double err_oracle = oracle::fit_error(full, oracle::dense_hooi(full, 3, 3, 2, V0, W0, 150));
    CHECK(err_impl == doctest::Approx(err_oracle).epsilon(1e-6));
}

TEST_CASE("model container HCF1 round-trip") {
    std::mt19937_64 rng(101);
    auto A = testgen::random_tensor(5, 4, 3, 20, rng);
    Sims sims = random_sims(5, 4, 3, rng);
    TrainConfig cfg;
    cfg.ranks = {2, 2, 2};
    cfg.seed = 18;
    auto m = train(A, sims.users, sims.items, sims.feedback, cfg);

    SavedModel saved;
    saved.kind = SavedModel::Kind::hybrid_tucker;
    saved.fingerprint = m.config_fingerprint;
    saved.rating_scale = {1, 2, 3};
    saved.item_ids = {"a", "b", "c", "d"};
    saved.tucker = m;

    std::stringstream ss;
    save_model(saved, ss);
    auto back = load_model(ss);
    CHECK(back.kind == SavedModel::Kind::hybrid_tucker);
    CHECK(back.fingerprint == saved.fingerprint);
    CHECK(back.item_ids == saved.item_ids);
    CHECK(back.tucker.V == m.V);
    CHECK(back.tucker.V_S == m.V_S);
    CHECK(back.tucker.core.values() == m.core.values());
    CHECK(back.tucker.trace == m.trace);

    // Folding-in works off the restored caches alone.
    PreferenceMatrix P;
    P.items = 4;
    P.levels = 3;
    P.cells = {{0, 1, 1.0}};
    CHECK(fold_in_user(back.tucker, P) == fold_in_user(m, P));
}

}  // TEST_SUITE
