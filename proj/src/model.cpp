#include "tenrec/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace tenrec {

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
        h ^= (v >> (8 * b)) & 0xffu;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void refresh_derived_factors(HybridTuckerModel& m) {
    m.U_K = m.sim_users.apply_l(m.U_hat);
    m.V_S = m.sim_items.apply_l(m.V_hat);
    m.W_R = m.sim_feedback.apply_l(m.W_hat);
    m.U = m.sim_users.solve_lt(m.U_hat);
    m.V = m.sim_items.solve_lt(m.V_hat);
    m.W = m.sim_feedback.solve_lt(m.W_hat);
}

Matrix preference_to_dense(const PreferenceMatrix& P) {
    Matrix D = Matrix::Zero(P.items, P.levels);
    for (const auto& c : P.cells) {
        if (c.item < 0 || c.item >= P.items || c.feedback < 0 || c.feedback >= P.levels) {
            throw IndexOutOfRange("preference cell outside (items, levels)");
        }
        D(c.item, c.feedback) = c.value;
    }
    return D;
}

}  // namespace

std::uint64_t TrainConfig::fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a(h, static_cast<std::uint64_t>(ranks[0]));
    h = fnv1a(h, static_cast<std::uint64_t>(ranks[1]));
    h = fnv1a(h, static_cast<std::uint64_t>(ranks[2]));
    std::uint64_t tol_bits;
    static_assert(sizeof(tol_bits) == sizeof(tol));
    std::memcpy(&tol_bits, &tol, sizeof(tol_bits));
    h = fnv1a(h, tol_bits);
    h = fnv1a(h, static_cast<std::uint64_t>(max_iters));
    h = fnv1a(h, seed);
    return h;
}

HybridTuckerModel train(const SparseTensor3& A, const SimilarityMatrix& sim_users,
                        const SimilarityMatrix& sim_items, const SimilarityMatrix& sim_feedback,
                        const TrainConfig& cfg) {
    const auto& shape = A.shape();
    const int M = shape[0], N = shape[1], F = shape[2];
    const int r1 = cfg.ranks[0], r2 = cfg.ranks[1], r3 = cfg.ranks[2];
    if (sim_users.dim() != M || sim_items.dim() != N || sim_feedback.dim() != F) {
        throw ShapeMismatch("similarity dimensions must match tensor shape (M, N, F)");
    }
    if (r1 < 1 || r1 > M || r2 < 1 || r2 > N || r3 < 1 || r3 > F) {
        throw RankTooLarge("ranks must satisfy 1 <= r_i <= mode size");
    }
    // Each HOOI step takes an SVD of an (mode size) x (product of other ranks)
    // matrix; the rank must not exceed either dimension.
    if (r1 > r2 * r3 || r2 > r1 * r3 || r3 > r1 * r2) {
        throw RankTooLarge("infeasible multilinear rank: each r_i must be <= r_j * r_k");
    }
    if (cfg.tol <= 0.0 || cfg.max_iters < 1) {
        throw ConfigError("tol must be positive and max_iters >= 1");
    }

    HybridTuckerModel m;
    m.sim_users = sim_users;
    m.sim_items = sim_items;
    m.sim_feedback = sim_feedback;
    m.config_fingerprint = cfg.fingerprint();

    std::mt19937_64 rng(cfg.seed);
    m.V_hat = random_orthonormal(N, r2, rng);
    m.W_hat = random_orthonormal(F, r3, rng);
    m.V_S = sim_items.apply_l(m.V_hat);
    m.W_R = sim_feedback.apply_l(m.W_hat);

    const double norm_a = std::max(A.frobenius_norm(), 1e-300);
    double prev_core_norm = 0.0;
    Matrix sigma_zt;
    for (int sweep = 0; sweep < cfg.max_iters; ++sweep) {
        // U step: leading left singular vectors of L_K^T A^(1) (W_R kron V_S).
        Matrix C1 = sim_users.apply_lt(unfold_contract(A, 1, m.V_S, m.W_R));
        m.U_hat = truncated_svd(C1, r1).U;
        m.U_K = sim_users.apply_l(m.U_hat);

        Matrix C2 = sim_items.apply_lt(unfold_contract(A, 2, m.U_K, m.W_R));
        m.V_hat = truncated_svd(C2, r2).U;
        m.V_S = sim_items.apply_l(m.V_hat);

        Matrix C3 = sim_feedback.apply_lt(unfold_contract(A, 3, m.U_K, m.V_S));
        SvdTriplet w_svd = truncated_svd(C3, r3);
        m.W_hat = w_svd.U;
        m.W_R = sim_feedback.apply_l(m.W_hat);

        // Core from the mode-3 unfolding: G^(3) = Sigma Z^T, columns ordered
        // with the mode-1 index varying fastest (same convention as the
        // contraction output).
        sigma_zt = w_svd.sigma.asDiagonal() * w_svd.V.transpose();
        const double core_norm = w_svd.sigma.norm();
        m.trace.push_back(core_norm);
        if (sweep > 0 && std::abs(core_norm - prev_core_norm) < cfg.tol * norm_a) {
            m.converged = true;
            prev_core_norm = core_norm;
            break;
        }
        prev_core_norm = core_norm;
    }
    m.core = DenseTensor3::fold(sigma_zt, 3, {r1, r2, r3});
    refresh_derived_factors(m);
    return m;
}

HybridTuckerModel round_rank(const HybridTuckerModel& model, std::array<int, 3> new_ranks) {
    const auto& ranks = model.ranks();
    for (int k = 0; k < 3; ++k) {
        if (new_ranks[k] < 1 || new_ranks[k] > ranks[k]) {
            throw RankTooLarge("round_rank: new rank must be in [1, current rank]");
        }
    }
    HybridTuckerModel m = model;
    Matrix* factors[3] = {&m.U_hat, &m.V_hat, &m.W_hat};
    for (int mode = 1; mode <= 3; ++mode) {
        const int r_new = new_ranks[mode - 1];
        if (r_new == m.core.shape()[mode - 1]) continue;
        SvdTriplet svd = truncated_svd(m.core.unfold(mode), r_new);
        *factors[mode - 1] = (*factors[mode - 1]) * svd.U;
        std::array<int, 3> shape = m.core.shape();
        shape[mode - 1] = r_new;
        m.core = DenseTensor3::fold(svd.sigma.asDiagonal() * svd.V.transpose(), mode, shape);
    }
    refresh_derived_factors(m);
    return m;
}

Matrix fold_in_user(const HybridTuckerModel& model, const PreferenceMatrix& P) {
    if (P.cells.empty()) throw EmptyHistory("fold_in_user: empty preference matrix");
    if (P.items != model.V.rows() || P.levels != model.W.rows()) {
        throw ShapeMismatch("fold_in_user: preference shape must be (N, F)");
    }
    Matrix D = preference_to_dense(P);
    // V (V_S^T P W_R) W^T, small inner products first.
    return model.V * (model.V_S.transpose() * D * model.W_R) * model.W.transpose();
}

Matrix fold_in_item(const HybridTuckerModel& model, const PreferenceMatrix& Q) {
    if (Q.cells.empty()) throw EmptyHistory("fold_in_item: empty preference matrix");
    if (Q.items != model.U.rows() || Q.levels != model.W.rows()) {
        throw ShapeMismatch("fold_in_item: preference shape must be (M, F)");
    }
    Matrix D = preference_to_dense(Q);
    return model.U * (model.U_K.transpose() * D * model.W_R) * model.W.transpose();
}

Aggregator parse_aggregator(const std::string& name) {
    if (name == "positive_mass") return Aggregator::positive_mass;
    if (name == "expected_value") return Aggregator::expected_value;
    if (name == "top_column") return Aggregator::top_column;
    throw ConfigError("unknown aggregator: " + name);
}

std::vector<std::pair<int, double>> score_items(const Matrix& pred, Aggregator aggregator,
                                                int positive_threshold_index,
                                                const std::set<int>& exclude, int n,
                                                const std::vector<double>& rating_values) {
    if (n < 1) throw ConfigError("score_items: n must be >= 1");
    const int items = static_cast<int>(pred.rows());
    const int levels = static_cast<int>(pred.cols());
    if (!rating_values.empty() && static_cast<int>(rating_values.size()) != levels) {
        throw ShapeMismatch("score_items: rating_values length must equal F");
    }
    std::vector<std::pair<int, double>> scored;
    scored.reserve(items);
    for (int i = 0; i < items; ++i) {
        if (exclude.count(i)) continue;
        double s = 0.0;
        switch (aggregator) {
            case Aggregator::positive_mass:
                for (int f = positive_threshold_index; f < levels; ++f) s += pred(i, f);
                break;
            case Aggregator::expected_value:
                for (int f = 0; f < levels; ++f) {
                    const double r = rating_values.empty() ? f + 1.0 : rating_values[f];
                    s += r * pred(i, f);
                }
                break;
            case Aggregator::top_column:
                s = pred(i, levels - 1);
                break;
        }
        scored.emplace_back(i, s);
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (static_cast<int>(scored.size()) > n) scored.resize(n);
    return scored;
}

DenseTensor3 reconstruct_dense(const HybridTuckerModel& model) {
    const auto M = model.U.rows(), N = model.V.rows(), F = model.W.rows();
    if (static_cast<double>(M) * N * F > 1e7) {
        throw TooLargeForDense("reconstruct_dense: M*N*F exceeds 1e7");
    }
    DenseTensor3 T = n_mode_product_dense(model.core, 1, model.U);
    T = n_mode_product_dense(T, 2, model.V);
    T = n_mode_product_dense(T, 3, model.W);
    return T;
}

}  // namespace tenrec
